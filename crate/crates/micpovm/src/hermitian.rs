//! Dense complex matrices and Hermitian operator arithmetic.
//!
//! Everything downstream (coherent projectors, operator frames, POVM
//! elements, density matrices) is a `HermitianOperator`, a square complex
//! matrix that is symmetrized on construction and rejected if it is too far
//! from Hermitian to begin with.  The eigensolver is a cyclic complex Jacobi
//! iteration: at dimensions up to a few dozen it is exact to machine
//! precision and has no failure modes besides its sweep cap.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::tol;

/// Errors from matrix construction and spectral operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum HermitianError {
    #[error("matrix deviates from Hermitian symmetry by {deviation:.3e} (limit {limit:.1e})")]
    NotHermitian { deviation: f64, limit: f64 },
    #[error("matrix entries must be finite")]
    NotFinite,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operator is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error(
        "operator is not strictly positive (min eigenvalue {min_eigenvalue:.3e} <= {threshold:.3e})"
    )]
    NotStrictlyPositive { min_eigenvalue: f64, threshold: f64 },
    #[error("eigensolver failed to converge within {sweeps} sweeps")]
    NumericalError { sweeps: usize },
}

impl HermitianError {
    /// Stable machine-readable variant name (used in CLI diagnostics).
    pub fn name(&self) -> &'static str {
        match self {
            HermitianError::NotHermitian { .. } => "NotHermitian",
            HermitianError::NotFinite => "NotFinite",
            HermitianError::DimensionMismatch { .. } => "DimensionMismatch",
            HermitianError::NotPositive { .. } => "NotPositive",
            HermitianError::NotStrictlyPositive { .. } => "NotStrictlyPositive",
            HermitianError::NumericalError { .. } => "NumericalError",
        }
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from rows; panics if the shape is ragged or empty.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = ComplexMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, &z) in row.iter().enumerate() {
                m.set(i, j, z);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        let entries = self.entries.iter().map(|a| a * factor).collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + aik * rhs.get(k, j));
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    sum += self.get(i, j).norm_sqr();
                }
            }
        }
        sum.sqrt()
    }

    /// Max entrywise deviation from Hermitian symmetry,
    /// `max_ij |m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| [self.get(i, j).re, self.get(i, j).im]).collect())
            .collect();
        MatrixRepr { dim: self.dim, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.dim < 1 {
            return Err(D::Error::custom("matrix dim must be at least 1"));
        }
        if repr.entries.len() != repr.dim {
            return Err(D::Error::custom(format!(
                "expected {} rows, found {}",
                repr.dim,
                repr.entries.len()
            )));
        }
        let mut m = ComplexMatrix::zeros(repr.dim);
        for (i, row) in repr.entries.iter().enumerate() {
            if row.len() != repr.dim {
                return Err(D::Error::custom(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    repr.dim
                )));
            }
            for (j, &[re, im]) in row.iter().enumerate() {
                m.set(i, j, Complex64::new(re, im));
            }
        }
        if !m.is_finite() {
            return Err(D::Error::custom("matrix entries must be finite"));
        }
        Ok(m)
    }
}

/// Hermitian operator on C^d.  The wrapped matrix satisfies
/// `|H_ij - conj(H_ji)| <= 1e-12` entrywise (exactly zero by construction;
/// the bound is what the rest of the crate may rely on).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Symmetrizes `matrix` to `(M + M^H)/2`.  Rejects matrices whose
    /// Hermitian deviation exceeds `tol::HERM_REJECT` instead of quietly
    /// averaging away a real discrepancy.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, HermitianError> {
        if !matrix.is_finite() {
            return Err(HermitianError::NotFinite);
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > tol::HERM_REJECT {
            return Err(HermitianError::NotHermitian {
                deviation,
                limit: tol::HERM_REJECT,
            });
        }
        let d = matrix.dim();
        let mut sym = ComplexMatrix::zeros(d);
        for i in 0..d {
            sym.set(i, i, Complex64::new(matrix.get(i, i).re, 0.0));
            for j in (i + 1)..d {
                let avg = (matrix.get(i, j) + matrix.get(j, i).conj()) * 0.5;
                sym.set(i, j, avg);
                sym.set(j, i, avg.conj());
            }
        }
        Ok(HermitianOperator(sym))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, HermitianError> {
        HermitianOperator::new(ComplexMatrix::from_rows(rows))
    }

    /// Wraps a matrix that is Hermitian by algebraic construction
    /// (sums, real scalings and sandwiches of Hermitian inputs).
    fn from_symmetric_parts(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.hermitian_deviation() <= tol::HERM_SYMMETRIZE);
        let d = matrix.dim();
        let mut sym = matrix;
        for i in 0..d {
            let z = sym.get(i, i);
            sym.set(i, i, Complex64::new(z.re, 0.0));
            for j in (i + 1)..d {
                let avg = (sym.get(i, j) + sym.get(j, i).conj()) * 0.5;
                sym.set(i, j, avg);
                sym.set(j, i, avg.conj());
            }
        }
        HermitianOperator(sym)
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator(ComplexMatrix::zeros(dim))
    }

    /// Rank-1 projector `|psi><psi|` from a unit vector.
    pub fn projector(state: &[Complex64]) -> Self {
        let norm_sq: f64 = state.iter().map(|z| z.norm_sqr()).sum();
        assert!(
            (norm_sq - 1.0).abs() < 1e-9,
            "projector expects a unit vector, got norm^2 = {norm_sq}"
        );
        let d = state.len();
        let mut m = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, state[i] * state[j].conj());
            }
        }
        HermitianOperator::from_symmetric_parts(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn add(&self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator(self.0.sub(&rhs.0))
    }

    /// Real scaling keeps Hermiticity exactly.
    pub fn scale(&self, factor: f64) -> HermitianOperator {
        HermitianOperator(self.0.scale(Complex64::new(factor, 0.0)))
    }

    /// `G * self * G` for Hermitian `G`; result is Hermitian and is
    /// resymmetrized to kill rounding asymmetry.
    pub fn sandwich(&self, g: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), g.dim(), "dimension mismatch in sandwich");
        HermitianOperator::from_symmetric_parts(g.0.mul(&self.0).mul(&g.0))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// `<psi|H|psi>` for a (not necessarily unit) vector.
    pub fn expectation(&self, state: &[Complex64]) -> f64 {
        assert_eq!(state.len(), self.dim(), "dimension mismatch in expectation");
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += state[i].conj() * self.entry(i, j) * state[j];
            }
        }
        acc.re
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        HermitianOperator::new(m).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Hilbert-Schmidt inner product `Tr[A B]` of two Hermitian operators
/// (always real).
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64, HermitianError> {
    if a.dim() != b.dim() {
        return Err(HermitianError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let d = a.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            // Tr[AB] = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
            let aij = a.entry(i, j);
            let bij = b.entry(i, j);
            acc += aij.re * bij.re + aij.im * bij.im;
        }
    }
    Ok(acc)
}

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.dim()).map(|i| self.eigenvectors.get(i, k)).collect()
    }
}

/// One complex Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let u = apq / b;
    let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * b);
    // Smaller-magnitude root of t^2 + 2 tau t - 1 = 0 keeps rotations small.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = u.conj() * (t * c);
    let d = a.dim();
    // A <- J^H A J with J[p][p] = c, J[p][q] = -conj(s), J[q][p] = s, J[q][q] = c.
    for i in 0..d {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * c + aiq * s);
        a.set(i, q, aiq * c - aip * s.conj());
    }
    for j in 0..d {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c + aqj * s.conj());
        a.set(q, j, aqj * c - apj * s);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));
    for i in 0..d {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * c + viq * s);
        v.set(i, q, viq * c - vip * s.conj());
    }
}

/// Full eigendecomposition by cyclic complex Jacobi sweeps.
///
/// Postconditions (checked, not assumed): `||V L V^H - H||_F` stays below
/// `1e-9 * max(1, ||H||_F)` and `||V^H V - I||_F <= 1e-10`.
pub fn eig_hermitian(h: &HermitianOperator) -> Result<EigenDecomposition, HermitianError> {
    let d = h.dim();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(d);
    let norm = a.frobenius_norm();
    let threshold = tol::JACOBI_OFF_FACTOR * norm;

    let mut converged = a.off_diagonal_norm() <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < tol::JACOBI_MAX_SWEEPS {
        for p in 0..d.saturating_sub(1) {
            for q in (p + 1)..d {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = a.off_diagonal_norm() <= threshold;
    }
    if !converged {
        return Err(HermitianError::NumericalError { sweeps });
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = ComplexMatrix::zeros(d);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..d {
            vectors.set(i, k, v.get(i, src));
        }
    }

    let decomp = EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    };
    let residual = reconstruction_residual(h, &decomp);
    if residual > tol::EIG_RESIDUAL_FACTOR * norm.max(1.0) {
        return Err(HermitianError::NumericalError { sweeps });
    }
    if orthonormality_residual(&decomp.eigenvectors) > tol::EIG_ORTHO {
        return Err(HermitianError::NumericalError { sweeps });
    }
    Ok(decomp)
}

fn reconstruction_residual(h: &HermitianOperator, decomp: &EigenDecomposition) -> f64 {
    let d = h.dim();
    let v = &decomp.eigenvectors;
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += v.get(i, k) * decomp.eigenvalues[k] * v.get(j, k).conj();
            }
            sum += (acc - h.entry(i, j)).norm_sqr();
        }
    }
    sum.sqrt()
}

fn orthonormality_residual(v: &ComplexMatrix) -> f64 {
    let d = v.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += v.get(k, i).conj() * v.get(k, j);
            }
            if i == j {
                acc -= 1.0;
            }
            sum += acc.norm_sqr();
        }
    }
    sum.sqrt()
}

pub fn min_eigenvalue(h: &HermitianOperator) -> Result<f64, HermitianError> {
    Ok(eig_hermitian(h)?.eigenvalues[0])
}

pub fn max_eigenvalue(h: &HermitianOperator) -> Result<f64, HermitianError> {
    Ok(*eig_hermitian(h)?.eigenvalues.last().unwrap())
}

/// True when every eigenvalue is `>= -tolerance`.
pub fn is_psd(h: &HermitianOperator, tolerance: f64) -> Result<bool, HermitianError> {
    Ok(min_eigenvalue(h)? >= -tolerance)
}

/// Rebuilds `V f(L) V^H` from a decomposition.
fn spectral_map(decomp: &EigenDecomposition, f: impl Fn(f64) -> f64) -> HermitianOperator {
    let d = decomp.eigenvectors.dim();
    let v = &decomp.eigenvectors;
    let mapped: Vec<f64> = decomp.eigenvalues.iter().map(|&l| f(l)).collect();
    let mut m = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += v.get(i, k) * mapped[k] * v.get(j, k).conj();
            }
            m.set(i, j, acc);
        }
    }
    HermitianOperator::from_symmetric_parts(m)
}

/// Principal square root of a positive semi-definite operator.  Eigenvalues
/// in `[-1e-10, 0)` are clamped to zero; anything lower is an error.
pub fn sqrt_psd(h: &HermitianOperator) -> Result<HermitianOperator, HermitianError> {
    let decomp = eig_hermitian(h)?;
    let min = decomp.eigenvalues[0];
    if min < -tol::PSD_CLAMP {
        return Err(HermitianError::NotPositive { min_eigenvalue: min });
    }
    Ok(spectral_map(&decomp, |l| l.max(0.0).sqrt()))
}

/// Inverse square root of a strictly positive operator.  Requires the
/// smallest eigenvalue to exceed `1e-10 * dim` so the inverse stays tame.
pub fn inv_sqrt_pd(h: &HermitianOperator) -> Result<HermitianOperator, HermitianError> {
    let decomp = eig_hermitian(h)?;
    let min = decomp.eigenvalues[0];
    let threshold = tol::PD_EPS_FACTOR * h.dim() as f64;
    if min <= threshold {
        return Err(HermitianError::NotStrictlyPositive {
            min_eigenvalue: min,
            threshold,
        });
    }
    Ok(spectral_map(&decomp, |l| 1.0 / l.sqrt()))
}

/// Random Hermitian matrix with iid standard-normal real and imaginary
/// parts before symmetrization (`(G + G^H)/2`).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g.set(i, j, Complex64::new(re, im));
        }
    }
    HermitianOperator::from_symmetric_parts(g.add(&g.adjoint()).scale(Complex64::new(0.5, 0.0)))
}

/// Random PSD matrix `G G^H` of the given rank, from a d x rank complex
/// Gaussian factor.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    assert!(rank >= 1 && rank <= dim, "rank must be in 1..=dim");
    let mut g = vec![vec![Complex64::new(0.0, 0.0); rank]; dim];
    for row in g.iter_mut() {
        for z in row.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *z = Complex64::new(re, im);
        }
    }
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..rank {
                acc += g[i][k] * g[j][k].conj();
            }
            m.set(i, j, acc);
        }
    }
    HermitianOperator::from_symmetric_parts(m)
}

/// Orthogonal Hermitian basis of the d x d operator space: the identity
/// plus the d^2 - 1 generalized Gell-Mann matrices (symmetric and
/// antisymmetric off-diagonal pairs, then the diagonal ladder).
pub fn hermitian_basis(dim: usize) -> Vec<HermitianOperator> {
    assert!(dim >= 1);
    let mut out = vec![HermitianOperator::identity(dim)];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut sym = ComplexMatrix::zeros(dim);
            sym.set(i, j, Complex64::new(1.0, 0.0));
            sym.set(j, i, Complex64::new(1.0, 0.0));
            out.push(HermitianOperator::from_symmetric_parts(sym));
            let mut asym = ComplexMatrix::zeros(dim);
            asym.set(i, j, Complex64::new(0.0, -1.0));
            asym.set(j, i, Complex64::new(0.0, 1.0));
            out.push(HermitianOperator::from_symmetric_parts(asym));
        }
    }
    for k in 1..dim {
        let scale = (2.0 / (k as f64 * (k + 1) as f64)).sqrt();
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..k {
            m.set(i, i, Complex64::new(scale, 0.0));
        }
        m.set(k, k, Complex64::new(-(k as f64) * scale, 0.0));
        out.push(HermitianOperator::from_symmetric_parts(m));
    }
    out
}
