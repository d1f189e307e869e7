//! MIC-POVM constructions and verification.
//!
//! Three routes turn operator sets into POVMs: the inverse-square-root
//! transform of a spanning PSD family, and two constructions that rescale
//! an operator frame (or its dual basis) using the expansion coefficients
//! of the identity, absorbing negative coefficients by complementing
//! against the identity (frame side) or shifting by a multiple of the
//! identity (dual side).  Arbitrary Hermitian inputs are first normalized
//! into the operator interval [0, I].  Worked qubit presets and the
//! never-throwing `verify` report live here too.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::coherent::{coherent_projector, tetrahedral_directions, Direction};
use crate::frame::{build_frame, p_coefficients, FrameError, OperatorFrame};
use crate::hermitian::{
    eig_hermitian, hs_inner, inv_sqrt_pd, min_eigenvalue, HermitianError, HermitianOperator,
};
use crate::real::RealMatrix;
use crate::tol;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum PovmError {
    #[error("input operator {index} is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { index: usize, min_eigenvalue: f64 },
    #[error("weighted operator sum does not span (min eigenvalue {min_eigenvalue:.3e})")]
    SingularSum { min_eigenvalue: f64 },
    #[error("identity coefficient {index} is {value:.3e}, too close to zero; perturb the inputs")]
    DegenerateCoefficient { index: usize, value: f64 },
    #[error("operator {index} violates 0 <= K <= I (eigenvalues in [{min:.4}, {max:.4}])")]
    NotNormalized { index: usize, min: f64, max: f64 },
    #[error("operator {index} cannot be normalized: {reason}")]
    DegenerateOperator { index: usize, reason: String },
    #[error("weight {index} must be strictly positive, got {value}")]
    InvalidWeight { index: usize, value: f64 },
    #[error("directions {first} and {second} are not orthogonal (dot product {dot:.3e})")]
    NotOrthogonal { first: usize, second: usize, dot: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Numerical(#[from] HermitianError),
}

impl PovmError {
    pub fn name(&self) -> &'static str {
        match self {
            PovmError::NotPositive { .. } => "NotPositive",
            PovmError::SingularSum { .. } => "SingularSum",
            PovmError::DegenerateCoefficient { .. } => "DegenerateCoefficient",
            PovmError::NotNormalized { .. } => "NotNormalized",
            PovmError::DegenerateOperator { .. } => "DegenerateOperator",
            PovmError::InvalidWeight { .. } => "InvalidWeight",
            PovmError::NotOrthogonal { .. } => "NotOrthogonal",
            PovmError::DimensionMismatch { .. } => "DimensionMismatch",
            PovmError::Frame(e) => e.name(),
            PovmError::Numerical(e) => e.name(),
        }
    }
}

/// How arbitrary Hermitian inputs are squeezed into the interval [0, I].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// Shift and scale by the exact extremal eigenvalues.
    Extremal,
    /// Shift by the Frobenius norm, eigensolver-free.
    ClosedForm,
}

/// Which basis of the normalized frame the construction rescales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionSide {
    Primal,
    Dual,
}

/// Provenance carried by every POVM artifact.  All keys serialize even when
/// absent so artifacts stay byte-comparable across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmMeta {
    #[serde(default)]
    pub method: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub directions: Option<Vec<Direction>>,
    /// Identity-shift constant of the rescaling constructions (C or its
    /// dual-side analogue).
    #[serde(rename = "C", default)]
    pub shift: Option<f64>,
    #[serde(default)]
    pub mode: Option<NormalizationMode>,
    #[serde(default)]
    pub side: Option<ConstructionSide>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

impl PovmMeta {
    pub fn for_method(method: &str) -> Self {
        PovmMeta {
            method: method.to_string(),
            seed: None,
            directions: None,
            shift: None,
            mode: None,
            side: None,
            weights: None,
        }
    }
}

/// Ordered set of PSD operators summing to the identity, with provenance
/// and (for informationally complete sets) the dual operators used by
/// linear-inversion reconstruction.
#[derive(Debug, Clone, Serialize)]
pub struct Povm {
    dim: usize,
    elements: Vec<HermitianOperator>,
    duals: Option<Vec<HermitianOperator>>,
    meta: PovmMeta,
}

impl Povm {
    /// Wraps raw parts; panics on shape mismatch (constructors in this
    /// module guarantee shapes, deserialization validates separately).
    pub fn from_parts(
        elements: Vec<HermitianOperator>,
        duals: Option<Vec<HermitianOperator>>,
        meta: PovmMeta,
    ) -> Self {
        let dim = elements.first().expect("POVM needs at least one element").dim();
        assert!(elements.iter().all(|e| e.dim() == dim), "mixed element dims");
        if let Some(d) = &duals {
            assert!(d.iter().all(|e| e.dim() == dim), "mixed dual dims");
        }
        Povm {
            dim,
            elements,
            duals,
            meta,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn duals(&self) -> Option<&[HermitianOperator]> {
        self.duals.as_deref()
    }

    pub fn meta(&self) -> &PovmMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut PovmMeta {
        &mut self.meta
    }

    /// Builds the dual operators by framing the elements.  Fails when the
    /// elements are not a basis (count != d^2 or linearly dependent).
    pub fn attach_duals(&mut self) -> Result<(), FrameError> {
        let frame = build_frame(self.elements.clone())?;
        self.duals = Some(frame.duals().to_vec());
        Ok(())
    }

    /// `sum E_n - I` residual in Frobenius norm.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = HermitianOperator::zeros(self.dim);
        for e in &self.elements {
            sum = sum.add(e);
        }
        sum.sub(&HermitianOperator::identity(self.dim)).frobenius_norm()
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            elements: Vec<HermitianOperator>,
            #[serde(default)]
            duals: Option<Vec<HermitianOperator>>,
            #[serde(default = "default_meta")]
            meta: PovmMeta,
        }
        fn default_meta() -> PovmMeta {
            PovmMeta::for_method("")
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.elements.is_empty() {
            return Err(D::Error::custom("POVM must have at least one element"));
        }
        for (i, e) in repr.elements.iter().enumerate() {
            if e.dim() != repr.dim {
                return Err(D::Error::custom(format!(
                    "element {} has dim {}, POVM declares {}",
                    i,
                    e.dim(),
                    repr.dim
                )));
            }
        }
        if let Some(duals) = &repr.duals {
            if duals.len() != repr.dim * repr.dim {
                return Err(D::Error::custom(format!(
                    "expected {} duals, found {}",
                    repr.dim * repr.dim,
                    duals.len()
                )));
            }
            for (i, e) in duals.iter().enumerate() {
                if e.dim() != repr.dim {
                    return Err(D::Error::custom(format!(
                        "dual {} has dim {}, POVM declares {}",
                        i,
                        e.dim(),
                        repr.dim
                    )));
                }
            }
        }
        Ok(Povm {
            dim: repr.dim,
            elements: repr.elements,
            duals: repr.duals,
            meta: repr.meta,
        })
    }
}

/// Verification report; `verify` never fails, it only fills these fields.
#[derive(Debug, Clone, Serialize)]
pub struct PovmReport {
    pub completeness_residual: f64,
    pub min_element_eigenvalue: f64,
    /// Ratio of the largest element-Gram eigenvalue to the d^2-th largest
    /// (capped at f64::MAX); gauges whether the elements span.
    pub gram_condition: f64,
    pub informationally_complete: bool,
    pub sic: bool,
    pub element_ranks: Vec<usize>,
}

impl PovmReport {
    /// The pass condition of the `verify` command: complete and PSD at the
    /// tolerance the report was generated with.
    pub fn passes(&self, tolerance: f64) -> bool {
        self.completeness_residual <= tolerance && self.min_element_eigenvalue >= -tolerance
    }
}

/// Checks completeness, positivity, informational completeness (element
/// Gram rank d^2), the symmetric-IC overlap condition, and element ranks.
pub fn verify(povm: &Povm, tolerance: f64) -> PovmReport {
    let d = povm.dim();
    let count = povm.elements().len();
    let completeness_residual = povm.completeness_residual();

    let mut min_element_eigenvalue = f64::INFINITY;
    let mut element_ranks = Vec::with_capacity(count);
    let mut traces = Vec::with_capacity(count);
    for e in povm.elements() {
        let eigs = eig_hermitian(e).expect("eigensolver converges").eigenvalues;
        min_element_eigenvalue = min_element_eigenvalue.min(eigs[0]);
        element_ranks.push(eigs.iter().filter(|l| **l > tol::RANK_EIG).count());
        traces.push(e.trace());
    }

    let mut gram = RealMatrix::zeros(count);
    for n in 0..count {
        for m in n..count {
            let v = hs_inner(&povm.elements()[n], &povm.elements()[m]).expect("same dims");
            gram.set(n, m, v);
            gram.set(m, n, v);
        }
    }
    let gram_eigs = gram.symmetric_eigenvalues().expect("eigensolver converges");
    let needed = d * d;
    let gram_condition = if count >= needed {
        let largest = gram_eigs[count - 1];
        let boundary = gram_eigs[count - needed];
        if boundary > 0.0 && largest / boundary <= f64::MAX {
            largest / boundary
        } else {
            f64::MAX
        }
    } else {
        f64::MAX
    };
    let informationally_complete = count >= needed && gram_condition <= tol::GRAM_CONDITION_MAX;

    let sic = count == needed && is_sic(povm, &element_ranks, &traces, tolerance);

    PovmReport {
        completeness_residual,
        min_element_eigenvalue,
        gram_condition,
        informationally_complete,
        sic,
        element_ranks,
    }
}

fn is_sic(povm: &Povm, ranks: &[usize], traces: &[f64], tolerance: f64) -> bool {
    let d = povm.dim() as f64;
    if ranks.iter().any(|r| *r != 1) {
        return false;
    }
    let mean_trace: f64 = traces.iter().sum::<f64>() / traces.len() as f64;
    if mean_trace <= 0.0 || traces.iter().any(|t| (t - mean_trace).abs() > tolerance) {
        return false;
    }
    let target = 1.0 / (d + 1.0);
    let count = povm.elements().len();
    for n in 0..count {
        for m in (n + 1)..count {
            let overlap = hs_inner(&povm.elements()[n], &povm.elements()[m]).expect("same dims")
                / (traces[n] * traces[m]);
            if (overlap - target).abs() > tolerance {
                return false;
            }
        }
    }
    true
}

/// Attaches duals when the element count allows informational completeness;
/// a linearly dependent element set simply leaves the duals empty.
fn attach_duals_if_spanning(povm: &mut Povm) -> Result<(), PovmError> {
    if povm.elements().len() != povm.dim() * povm.dim() {
        return Ok(());
    }
    match build_frame(povm.elements.clone()) {
        Ok(frame) => {
            povm.duals = Some(frame.duals().to_vec());
            Ok(())
        }
        Err(FrameError::LinearlyDependent { .. }) => Ok(()),
        Err(e) => Err(e.into()),
    }
}

/// Transform of a spanning PSD family into a POVM: with S the (optionally
/// weighted) sum of the inputs, every element is
/// `E_a = w_a S^(-1/2) F_a S^(-1/2)`.  Positivity, Hermiticity and rank of
/// each input survive the congruence.
pub fn cfs_construct(
    inputs: Vec<HermitianOperator>,
    weights: Option<Vec<f64>>,
) -> Result<Povm, PovmError> {
    let dim = match inputs.first() {
        Some(op) => op.dim(),
        None => {
            return Err(PovmError::Frame(FrameError::LinearlyDependent {
                reason: "no operators given".into(),
            }))
        }
    };
    for op in &inputs {
        if op.dim() != dim {
            return Err(PovmError::DimensionMismatch {
                left: dim,
                right: op.dim(),
            });
        }
    }
    if let Some(w) = &weights {
        if w.len() != inputs.len() {
            return Err(PovmError::DimensionMismatch {
                left: inputs.len(),
                right: w.len(),
            });
        }
        for (index, &value) in w.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(PovmError::InvalidWeight { index, value });
            }
        }
    }

    for (index, op) in inputs.iter().enumerate() {
        let min = min_eigenvalue(op)?;
        if min < -tol::PSD_CLAMP {
            return Err(PovmError::NotPositive {
                index,
                min_eigenvalue: min,
            });
        }
        if op.frobenius_norm() <= tol::NORM_ZERO {
            return Err(PovmError::DegenerateOperator {
                index,
                reason: "zero operator".into(),
            });
        }
    }

    let weight = |n: usize| weights.as_ref().map_or(1.0, |w| w[n]);
    let mut s = HermitianOperator::zeros(dim);
    for (n, op) in inputs.iter().enumerate() {
        s = s.add(&op.scale(weight(n)));
    }
    let s_inv_sqrt = match inv_sqrt_pd(&s) {
        Ok(r) => r,
        Err(HermitianError::NotStrictlyPositive { min_eigenvalue, .. }) => {
            return Err(PovmError::SingularSum { min_eigenvalue })
        }
        Err(e) => return Err(e.into()),
    };

    let elements = inputs
        .iter()
        .enumerate()
        .map(|(n, op)| op.scale(weight(n)).sandwich(&s_inv_sqrt))
        .collect();

    let mut meta = PovmMeta::for_method("cfs");
    meta.weights = weights;
    let mut povm = Povm::from_parts(elements, None, meta);
    attach_duals_if_spanning(&mut povm)?;
    Ok(povm)
}

/// Identity coefficients against the duals, with the degeneracy guard.
fn identity_coefficients(frame: &OperatorFrame) -> Result<Vec<f64>, PovmError> {
    let id = HermitianOperator::identity(frame.dim());
    let coeffs = p_coefficients(&id, frame)?;
    for (index, &value) in coeffs.values.iter().enumerate() {
        if value.abs() < tol::COEFF_DEGENERATE {
            return Err(PovmError::DegenerateCoefficient { index, value });
        }
    }
    Ok(coeffs.values)
}

/// Frame-side construction.  Writing the identity as
/// `I = (1/d) sum_n I^n Q_n`, positive-coefficient terms keep their
/// operator, negative ones are flipped to `I - Q_n` (PSD because
/// `0 <= Q_n <= I`), and the surplus `C = sum_neg |I^n|` widens the
/// denominator: `E_n+ = (I^n / (d + C)) Q_n`,
/// `E_n- = (|I^n| / (d + C)) (I - Q_n)`.
pub fn evr_primal_construct(frame: &OperatorFrame) -> Result<Povm, PovmError> {
    let dim = frame.dim();
    for (index, op) in frame.operators().iter().enumerate() {
        let eigs = eig_hermitian(op)?.eigenvalues;
        let min = eigs[0];
        let max = *eigs.last().unwrap();
        if min < -tol::NORMALIZED_BOUND || max > 1.0 + tol::NORMALIZED_BOUND {
            return Err(PovmError::NotNormalized { index, min, max });
        }
    }
    let coeffs = identity_coefficients(frame)?;
    let shift: f64 = coeffs.iter().filter(|c| **c < 0.0).map(|c| c.abs()).sum();
    let denom = dim as f64 + shift;
    let identity = HermitianOperator::identity(dim);
    let elements = frame
        .operators()
        .iter()
        .zip(&coeffs)
        .map(|(op, &c)| {
            if c > 0.0 {
                op.scale(c / denom)
            } else {
                identity.sub(op).scale(c.abs() / denom)
            }
        })
        .collect();

    let mut meta = PovmMeta::for_method("evr-primal");
    meta.shift = Some(shift);
    let mut povm = Povm::from_parts(elements, None, meta);
    attach_duals_if_spanning(&mut povm)?;
    Ok(povm)
}

/// Dual-side construction.  Writing the identity as
/// `I = (1/d) sum_n I_n Q^n` with `I_n = Tr[Q_n] > 0`, duals with negative
/// spectrum are lifted by their most negative eigenvalue:
/// `e^n+ = (I_n / (d + C)) Q^n`,
/// `e^n- = (I_n / (d + C)) (Q^n + |q^n| I)` with
/// `C = sum_neg I_n |q^n|`.  For unit-trace frames (projectors) this is the
/// plain shift-and-renormalize of the dual basis.
pub fn evr_dual_construct(frame: &OperatorFrame) -> Result<Povm, PovmError> {
    let dim = frame.dim();
    let traces: Vec<f64> = frame.operators().iter().map(|op| op.trace()).collect();
    for (index, &value) in traces.iter().enumerate() {
        if value < tol::COEFF_DEGENERATE {
            return Err(PovmError::DegenerateCoefficient { index, value });
        }
    }
    let minima: Vec<f64> = frame
        .duals()
        .iter()
        .map(min_eigenvalue)
        .collect::<Result<_, _>>()?;
    let shift: f64 = traces
        .iter()
        .zip(&minima)
        .filter(|(_, &q)| q < -tol::DUAL_NEGATIVE)
        .map(|(&t, &q)| t * q.abs())
        .sum();
    let denom = dim as f64 + shift;
    let identity = HermitianOperator::identity(dim);
    let elements = frame
        .duals()
        .iter()
        .zip(traces.iter().zip(&minima))
        .map(|(dual, (&t, &q))| {
            if q < -tol::DUAL_NEGATIVE {
                dual.add(&identity.scale(q.abs())).scale(t / denom)
            } else {
                dual.scale(t / denom)
            }
        })
        .collect();

    let mut meta = PovmMeta::for_method("evr-dual");
    meta.shift = Some(shift);
    let mut povm = Povm::from_parts(elements, None, meta);
    attach_duals_if_spanning(&mut povm)?;
    Ok(povm)
}

/// Affinely maps each operator onto [0, I] using its extremal eigenvalues:
/// `K = (k - k_min I) / (k_max - k_min)`.
pub fn normalize_extremal(
    operators: &[HermitianOperator],
) -> Result<Vec<HermitianOperator>, PovmError> {
    operators
        .iter()
        .enumerate()
        .map(|(index, op)| {
            let eigs = eig_hermitian(op)?.eigenvalues;
            let lo = eigs[0];
            let hi = *eigs.last().unwrap();
            let spread = hi - lo;
            if spread < tol::NORMALIZE_DEGENERATE {
                return Err(PovmError::DegenerateOperator {
                    index,
                    reason: format!("eigenvalue spread {spread:.3e} below {:.1e}", tol::NORMALIZE_DEGENERATE),
                });
            }
            let identity = HermitianOperator::identity(op.dim());
            Ok(op.sub(&identity.scale(lo)).scale(1.0 / spread))
        })
        .collect()
}

/// Eigensolver-free variant: `K = (k + ||k||_F I) / (2 ||k||_F)`.  The
/// Frobenius norm dominates the spectral radius, so 0 <= K <= I holds.
pub fn normalize_closed_form(
    operators: &[HermitianOperator],
) -> Result<Vec<HermitianOperator>, PovmError> {
    operators
        .iter()
        .enumerate()
        .map(|(index, op)| {
            let norm = op.frobenius_norm();
            if norm <= tol::NORM_ZERO {
                return Err(PovmError::DegenerateOperator {
                    index,
                    reason: "zero operator".into(),
                });
            }
            let identity = HermitianOperator::identity(op.dim());
            Ok(op.add(&identity.scale(norm)).scale(1.0 / (2.0 * norm)))
        })
        .collect()
}

/// End-to-end construction for any d^2 linearly independent Hermitian
/// operators: normalize into [0, I], frame the normalized set, then run the
/// chosen rescaling construction.
pub fn general_construct(
    operators: Vec<HermitianOperator>,
    mode: NormalizationMode,
    side: ConstructionSide,
) -> Result<Povm, PovmError> {
    let dim = match operators.first() {
        Some(op) => op.dim(),
        None => {
            return Err(PovmError::Frame(FrameError::LinearlyDependent {
                reason: "no operators given".into(),
            }))
        }
    };
    if operators.len() != dim * dim {
        return Err(PovmError::Frame(FrameError::LinearlyDependent {
            reason: format!(
                "expected {} operators for dim {}, found {}",
                dim * dim,
                dim,
                operators.len()
            ),
        }));
    }
    let normalized = match mode {
        NormalizationMode::Extremal => normalize_extremal(&operators)?,
        NormalizationMode::ClosedForm => normalize_closed_form(&operators)?,
    };
    let frame = build_frame(normalized)?;
    let mut povm = match side {
        ConstructionSide::Primal => evr_primal_construct(&frame)?,
        ConstructionSide::Dual => evr_dual_construct(&frame)?,
    };
    povm.meta.method = "general".into();
    povm.meta.mode = Some(mode);
    povm.meta.side = Some(side);
    Ok(povm)
}

/// The qubit SIC-POVM `(1/4)(I + n . sigma)` over tetrahedron vertex
/// directions, with duals attached.
pub fn preset_tetrahedral() -> Povm {
    let directions = tetrahedral_directions();
    let projectors: Vec<_> = directions.iter().map(|n| coherent_projector(n, 2)).collect();
    let frame = build_frame(projectors).expect("tetrahedral projectors span");
    let mut povm = evr_primal_construct(&frame).expect("tetrahedral coefficients are 1");
    povm.meta.method = "tetrahedral".into();
    povm.meta.directions = Some(directions.to_vec());
    povm
}

fn cross(a: &Direction, b: &Direction) -> [f64; 3] {
    [
        a.y() * b.z() - a.z() * b.y(),
        a.z() * b.x() - a.x() * b.z(),
        a.x() * b.y() - a.y() * b.x(),
    ]
}

fn dot3(a: &[f64; 3], b: &Direction) -> f64 {
    a[0] * b.x() + a[1] * b.y() + a[2] * b.z()
}

/// Identity coefficients of a four-direction qubit frame through the
/// geometric closed form: `I^n = 4 / (1 + f^n . n_n)` where f^1 is built
/// from the wedge products of (n_2, n_3, n_4) and the rest follow by
/// cyclic index shifts.  Independent of the Gram-inversion route, which is
/// why `preset_generic_qubit` cross-checks the two.
pub fn qubit_identity_coefficients_geometric(dirs: &[Direction; 4]) -> Vec<f64> {
    (0..4)
        .map(|i| {
            let a = &dirs[(i + 1) % 4];
            let b = &dirs[(i + 2) % 4];
            let c = &dirs[(i + 3) % 4];
            let ab = cross(a, b);
            let bc = cross(b, c);
            let ca = cross(c, a);
            let numer = [
                ab[0] + bc[0] + ca[0],
                ab[1] + bc[1] + ca[1],
                ab[2] + bc[2] + ca[2],
            ];
            let denom = dot3(&ab, c);
            let f_dot_n = -dot3(&numer, &dirs[i]) / denom;
            4.0 / (1.0 + f_dot_n)
        })
        .collect()
}

/// MIC-POVM from three pairwise orthogonal qubit directions plus their
/// normalized sum: three rank-1 elements along n_1..n_3 and one along
/// -n_4.  The identity coefficients are computed both geometrically and
/// through the Gram route; disagreement would mean a broken frame build.
pub fn preset_generic_qubit(
    n1: Direction,
    n2: Direction,
    n3: Direction,
) -> Result<Povm, PovmError> {
    let dirs3 = [n1, n2, n3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let dot = dirs3[i].dot(&dirs3[j]);
            if dot.abs() > 1e-10 {
                return Err(PovmError::NotOrthogonal {
                    first: i,
                    second: j,
                    dot,
                });
            }
        }
    }
    let s3 = 3f64.sqrt();
    let n4 = Direction::new(
        (n1.x() + n2.x() + n3.x()) / s3,
        (n1.y() + n2.y() + n3.y()) / s3,
        (n1.z() + n2.z() + n3.z()) / s3,
    )
    .expect("sum of orthonormal directions has unit norm");
    let dirs = [n1, n2, n3, n4];

    let projectors: Vec<_> = dirs.iter().map(|n| coherent_projector(n, 2)).collect();
    let frame = build_frame(projectors)?;
    let gram_route = identity_coefficients(&frame)?;
    let geometric_route = qubit_identity_coefficients_geometric(&dirs);
    for (g, f) in gram_route.iter().zip(&geometric_route) {
        assert!(
            (g - f).abs() < 1e-8,
            "identity-coefficient routes disagree: {g} vs {f}"
        );
    }

    let mut povm = evr_primal_construct(&frame)?;
    povm.meta.method = "generic-qubit".into();
    povm.meta.directions = Some(dirs.to_vec());
    Ok(povm)
}

/// Three-outcome qubit POVM for unambiguous discrimination between |+> and
/// (|-> + |+>)/sqrt(2), in the basis (|+>, |->):
/// `E_1 = c |-><-|`, `E_2 = c |u><u|` with `u = (|-> - |+>)/sqrt(2)` and
/// `c = sqrt(2)/(1 + sqrt(2))`, `E_3` the completion to the identity
/// (positive semi-definite with one exactly-zero eigenvalue).
pub fn preset_discrimination() -> Povm {
    use num_complex::Complex64;
    let c = 2f64.sqrt() / (1.0 + 2f64.sqrt());
    let minus = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let u = [
        Complex64::new(-1.0 / 2f64.sqrt(), 0.0),
        Complex64::new(1.0 / 2f64.sqrt(), 0.0),
    ];
    let e1 = HermitianOperator::projector(&minus).scale(c);
    let e2 = HermitianOperator::projector(&u).scale(c);
    let e3 = HermitianOperator::identity(2).sub(&e1).sub(&e2);
    Povm::from_parts(vec![e1, e2, e3], None, PovmMeta::for_method("discrimination"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::sample_directions;
    use crate::hermitian::{hermitian_basis, max_eigenvalue, random_psd};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tetra_frame() -> OperatorFrame {
        let ops = tetrahedral_directions()
            .iter()
            .map(|n| coherent_projector(n, 2))
            .collect();
        build_frame(ops).unwrap()
    }

    fn bloch_element(n: &Direction) -> HermitianOperator {
        // (1/4)(I + n . sigma).
        HermitianOperator::from_rows(&[
            vec![
                Complex64::new(0.25 * (1.0 + n.z()), 0.0),
                Complex64::new(0.25 * n.x(), -0.25 * n.y()),
            ],
            vec![
                Complex64::new(0.25 * n.x(), 0.25 * n.y()),
                Complex64::new(0.25 * (1.0 - n.z()), 0.0),
            ],
        ])
        .unwrap()
    }

    #[test]
    fn tetrahedral_preset_matches_bloch_form() {
        let povm = preset_tetrahedral();
        let dirs = tetrahedral_directions();
        assert_eq!(povm.elements().len(), 4);
        for (e, n) in povm.elements().iter().zip(&dirs) {
            assert!(e.sub(&bloch_element(n)).frobenius_norm() < 1e-12);
        }
        assert_eq!(povm.meta().shift, Some(0.0));
        assert!(povm.duals().is_some());

        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(report.completeness_residual <= 1e-12);
        assert!(report.informationally_complete);
        assert!(report.sic);
        assert_eq!(report.element_ranks, vec![1, 1, 1, 1]);
        assert!(report.min_element_eigenvalue > -1e-12);
        assert!(report.passes(tol::VERIFY_DEFAULT));

        // Duality of the attached duals.
        let duals = povm.duals().unwrap();
        for n in 0..4 {
            for m in 0..4 {
                let v = hs_inner(&duals[n], &povm.elements()[m]).unwrap() / 2.0;
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < tol::DUALITY);
            }
        }
    }

    #[test]
    fn cfs_tetrahedral_gives_half_projectors() {
        let projectors: Vec<_> = tetrahedral_directions()
            .iter()
            .map(|n| coherent_projector(n, 2))
            .collect();
        let povm = cfs_construct(projectors.clone(), None).unwrap();
        for (e, q) in povm.elements().iter().zip(&projectors) {
            assert!(e.sub(&q.scale(0.5)).frobenius_norm() < 1e-12);
        }
        assert!(verify(&povm, tol::VERIFY_DEFAULT).sic);
    }

    #[test]
    fn cfs_identity_singleton() {
        let povm = cfs_construct(vec![HermitianOperator::identity(3)], None).unwrap();
        assert_eq!(povm.elements().len(), 1);
        assert!(povm.completeness_residual() < 1e-12);
        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(!report.informationally_complete);
        assert!(report.passes(tol::VERIFY_DEFAULT));
    }

    #[test]
    fn cfs_weighted_random_projectors() {
        let dirs = sample_directions(4, 21).unwrap();
        let inputs: Vec<_> = dirs.iter().map(|n| coherent_projector(n, 2)).collect();
        let weights = vec![0.5, 1.5, 2.0, 0.25];
        let povm = cfs_construct(inputs, Some(weights.clone())).unwrap();
        assert_eq!(povm.meta().weights.as_deref(), Some(weights.as_slice()));
        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(report.passes(tol::VERIFY_DEFAULT));
        assert!(report.informationally_complete);
        assert_eq!(report.element_ranks, vec![1, 1, 1, 1]);
    }

    #[test]
    fn cfs_error_cases() {
        let z = HermitianOperator::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            cfs_construct(vec![z], None),
            Err(PovmError::NotPositive { index: 0, .. })
        ));

        // Two copies of the same projector leave a common kernel.
        let north = Direction::new(0.0, 0.0, 1.0).unwrap();
        let q = coherent_projector(&north, 2);
        assert!(matches!(
            cfs_construct(vec![q.clone(), q.clone()], None),
            Err(PovmError::SingularSum { .. })
        ));

        assert!(matches!(
            cfs_construct(vec![q.clone()], Some(vec![0.0])),
            Err(PovmError::InvalidWeight { index: 0, .. })
        ));
        assert!(matches!(
            cfs_construct(vec![q.clone()], Some(vec![1.0, 2.0])),
            Err(PovmError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            cfs_construct(vec![HermitianOperator::zeros(2)], None),
            Err(PovmError::DegenerateOperator { .. })
        ));
    }

    #[test]
    fn cfs_preserves_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let dim = 3;
        let mut inputs = Vec::new();
        let mut expected_ranks = Vec::new();
        for k in 0..dim * dim {
            let rank = 1 + (k % dim);
            inputs.push(random_psd(dim, rank, &mut rng));
            expected_ranks.push(rank);
        }
        let povm = cfs_construct(inputs, None).unwrap();
        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(report.passes(tol::VERIFY_DEFAULT));
        assert_eq!(report.element_ranks, expected_ranks);
    }

    #[test]
    fn evr_primal_tetrahedral() {
        let povm = evr_primal_construct(&tetra_frame()).unwrap();
        let dirs = tetrahedral_directions();
        for (e, n) in povm.elements().iter().zip(&dirs) {
            assert!(e.sub(&bloch_element(n)).frobenius_norm() < 1e-12);
        }
        assert_eq!(povm.meta().shift, Some(0.0));
    }

    #[test]
    fn evr_primal_rejects_unnormalized_frame() {
        let dirs = tetrahedral_directions();
        let mut ops: Vec<_> = dirs.iter().map(|n| coherent_projector(n, 2)).collect();
        ops[0] = ops[0].scale(2.0);
        let frame = build_frame(ops).unwrap();
        assert!(matches!(
            evr_primal_construct(&frame),
            Err(PovmError::NotNormalized { index: 0, .. })
        ));
    }

    #[test]
    fn evr_primal_rejects_degenerate_coefficient() {
        // I^n = (2, 2, 0, 0) for this frame.
        let half = |h: HermitianOperator| h.scale(0.5);
        let ops = vec![
            HermitianOperator::from_rows(&[
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
            ])
            .unwrap(),
            HermitianOperator::from_rows(&[
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ])
            .unwrap(),
            half(HermitianOperator::from_rows(&[
                vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
                vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            ])
            .unwrap()),
            half(HermitianOperator::from_rows(&[
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
                vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
            ])
            .unwrap()),
        ];
        let frame = build_frame(ops).unwrap();
        assert!(matches!(
            evr_primal_construct(&frame),
            Err(PovmError::DegenerateCoefficient { .. })
        ));
    }

    #[test]
    fn evr_dual_tetrahedral_shifts_all_four() {
        let frame = tetra_frame();
        let povm = evr_dual_construct(&frame).unwrap();
        assert_eq!(povm.meta().shift, Some(4.0));
        let identity = HermitianOperator::identity(2);
        for (e, dual) in povm.elements().iter().zip(frame.duals()) {
            let expected = dual.add(&identity).scale(1.0 / 6.0);
            assert!(e.sub(&expected).frobenius_norm() < 1e-12);
        }
        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(report.passes(tol::VERIFY_DEFAULT));
        assert!(report.informationally_complete);
        // Elements of both rescaling constructions have nonnegative mutual
        // overlaps on coherent frames.
        for n in 0..4 {
            for m in 0..4 {
                let v = hs_inner(&povm.elements()[n], &povm.elements()[m]).unwrap();
                assert!(v >= -1e-12);
            }
        }
    }

    #[test]
    fn evr_dual_with_psd_duals_needs_no_shift() {
        // The dual basis of the tetrahedral duals is the projector set
        // itself, so the construction reduces to Q_n / d.
        let frame = build_frame(tetra_frame().duals().to_vec()).unwrap();
        let povm = evr_dual_construct(&frame).unwrap();
        assert_eq!(povm.meta().shift, Some(0.0));
        let dirs = tetrahedral_directions();
        for (e, n) in povm.elements().iter().zip(&dirs) {
            assert!(e.sub(&coherent_projector(n, 2).scale(0.5)).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn normalize_extremal_examples() {
        let z = HermitianOperator::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap();
        let k = normalize_extremal(&[z]).unwrap();
        assert!((k[0].entry(0, 0).re - 1.0).abs() < 1e-12);
        assert!(k[0].entry(1, 1).norm() < 1e-12);

        let q = coherent_projector(&Direction::new(0.3, 0.4, 0.5).unwrap(), 2);
        let kq = normalize_extremal(&[q.clone()]).unwrap();
        assert!(kq[0].sub(&q).frobenius_norm() < 1e-9);

        assert!(matches!(
            normalize_extremal(&[HermitianOperator::identity(2)]),
            Err(PovmError::DegenerateOperator { index: 0, .. })
        ));
    }

    #[test]
    fn normalize_closed_form_examples() {
        let z = HermitianOperator::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap();
        let k = normalize_closed_form(&[z]).unwrap();
        let s2 = 2f64.sqrt();
        assert!((k[0].entry(0, 0).re - (s2 + 1.0) / (2.0 * s2)).abs() < 1e-14);
        assert!((k[0].entry(1, 1).re - (s2 - 1.0) / (2.0 * s2)).abs() < 1e-14);

        let id = normalize_closed_form(&[HermitianOperator::identity(2)]).unwrap();
        assert!((id[0].entry(0, 0).re - (1.0 + s2) / (2.0 * s2)).abs() < 1e-14);

        assert!(matches!(
            normalize_closed_form(&[HermitianOperator::zeros(2)]),
            Err(PovmError::DegenerateOperator { .. })
        ));

        // Bounds hold without any eigensolver involvement.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let k = normalize_closed_form(&[crate::hermitian::random_hermitian(4, &mut rng)])
                .unwrap();
            assert!(min_eigenvalue(&k[0]).unwrap() >= -tol::NORMALIZED_BOUND);
            assert!(max_eigenvalue(&k[0]).unwrap() <= 1.0 + tol::NORMALIZED_BOUND);
        }
    }

    #[test]
    fn general_construct_on_random_hermitians() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in 2..=4 {
            let ops: Vec<_> = (0..dim * dim)
                .map(|_| crate::hermitian::random_hermitian(dim, &mut rng))
                .collect();
            let povm = general_construct(
                ops,
                NormalizationMode::ClosedForm,
                ConstructionSide::Primal,
            )
            .unwrap();
            let report = verify(&povm, tol::VERIFY_DEFAULT);
            assert!(report.passes(tol::VERIFY_DEFAULT));
            assert!(report.informationally_complete);
            assert_eq!(povm.meta().mode, Some(NormalizationMode::ClosedForm));
            assert_eq!(povm.meta().side, Some(ConstructionSide::Primal));
        }
    }

    #[test]
    fn general_construct_flags_exactly_degenerate_inputs() {
        // An orthogonal basis containing the identity leaves the traceless
        // members with exactly zero weight in the identity expansion, which
        // the frame-side construction must reject.
        assert!(matches!(
            general_construct(
                hermitian_basis(3),
                NormalizationMode::ClosedForm,
                ConstructionSide::Primal,
            ),
            Err(PovmError::DegenerateCoefficient { .. })
        ));

        // Extremal mode chokes on the identity member even earlier: its
        // spectrum has no spread to rescale.
        assert!(matches!(
            general_construct(
                hermitian_basis(3),
                NormalizationMode::Extremal,
                ConstructionSide::Primal,
            ),
            Err(PovmError::DegenerateOperator { .. })
        ));
    }

    #[test]
    fn general_construct_closed_form_tetrahedral_oracle() {
        // Closed-form normalization maps each projector Q to (Q + I)/2;
        // the identity coefficients are then uniformly 2/3 and every
        // element comes out as (Q + I)/6.
        let projectors: Vec<_> = tetrahedral_directions()
            .iter()
            .map(|n| coherent_projector(n, 2))
            .collect();
        let povm = general_construct(
            projectors.clone(),
            NormalizationMode::ClosedForm,
            ConstructionSide::Primal,
        )
        .unwrap();
        let identity = HermitianOperator::identity(2);
        for (e, q) in povm.elements().iter().zip(&projectors) {
            let expected = q.add(&identity).scale(1.0 / 6.0);
            assert!(e.sub(&expected).frobenius_norm() < 1e-12);
        }

        // Extremal normalization leaves projectors alone, reproducing the
        // plain frame-side construction.
        let direct = evr_primal_construct(&tetra_frame()).unwrap();
        let via_general = general_construct(
            projectors,
            NormalizationMode::Extremal,
            ConstructionSide::Primal,
        )
        .unwrap();
        for (a, b) in via_general.elements().iter().zip(direct.elements()) {
            assert!(a.sub(b).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn general_construct_dual_side_and_count_check() {
        let povm = general_construct(
            hermitian_basis(2),
            NormalizationMode::ClosedForm,
            ConstructionSide::Dual,
        )
        .unwrap();
        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(report.passes(tol::VERIFY_DEFAULT));
        assert!(report.informationally_complete);

        let short = hermitian_basis(2)[..3].to_vec();
        match general_construct(short, NormalizationMode::ClosedForm, ConstructionSide::Primal) {
            Err(PovmError::Frame(FrameError::LinearlyDependent { reason })) => {
                assert!(reason.contains("expected 4"))
            }
            other => panic!("expected LinearlyDependent, got {other:?}"),
        }
    }

    #[test]
    fn generic_qubit_standard_axes() {
        let povm = preset_generic_qubit(
            Direction::new(1.0, 0.0, 0.0).unwrap(),
            Direction::new(0.0, 1.0, 0.0).unwrap(),
            Direction::new(0.0, 0.0, 1.0).unwrap(),
        )
        .unwrap();
        let s3 = 3f64.sqrt();
        let w_i = 2.0 / (s3 * (s3 + 1.0));
        let w_4 = 2.0 / (s3 + 1.0);
        let dirs = povm.meta().directions.clone().unwrap();
        assert_eq!(dirs.len(), 4);
        for i in 0..3 {
            let expected = coherent_projector(&dirs[i], 2).scale(w_i);
            assert!(povm.elements()[i].sub(&expected).frobenius_norm() < 1e-10);
        }
        let expected4 = coherent_projector(&dirs[3].negated(), 2).scale(w_4);
        assert!(povm.elements()[3].sub(&expected4).frobenius_norm() < 1e-10);

        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(report.passes(tol::VERIFY_DEFAULT));
        assert!(report.informationally_complete);
        assert!(!report.sic);
        assert_eq!(report.element_ranks, vec![1, 1, 1, 1]);
    }

    #[test]
    fn generic_qubit_coefficient_routes_agree() {
        // Oblique but orthogonal triad: rotate the standard axes.
        let n1 = Direction::new(0.6, 0.8, 0.0).unwrap();
        let n2 = Direction::new(-0.8, 0.6, 0.0).unwrap();
        let n3 = Direction::new(0.0, 0.0, 1.0).unwrap();
        let povm = preset_generic_qubit(n1, n2, n3).unwrap();
        assert!(verify(&povm, tol::VERIFY_DEFAULT).passes(tol::VERIFY_DEFAULT));

        assert!(matches!(
            preset_generic_qubit(
                n1,
                Direction::new(1.0, 1.0, 0.0).unwrap(),
                n3,
            ),
            Err(PovmError::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn discrimination_preset_semantics() {
        let povm = preset_discrimination();
        assert_eq!(povm.elements().len(), 3);
        assert!(povm.completeness_residual() < 1e-12);

        let plus = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(povm.elements()[0].expectation(&plus).abs() < 1e-14);
        let psi2 = [
            Complex64::new(1.0 / 2f64.sqrt(), 0.0),
            Complex64::new(1.0 / 2f64.sqrt(), 0.0),
        ];
        assert!(povm.elements()[1].expectation(&psi2).abs() < 1e-14);
        assert!(min_eigenvalue(&povm.elements()[2]).unwrap() >= -1e-12);

        let report = verify(&povm, tol::VERIFY_DEFAULT);
        assert!(report.passes(tol::VERIFY_DEFAULT));
        assert!(!report.informationally_complete);
        assert!(povm.duals().is_none());
    }

    #[test]
    fn verify_non_ic_examples() {
        let single = Povm::from_parts(
            vec![HermitianOperator::identity(2)],
            None,
            PovmMeta::for_method("manual"),
        );
        let report = verify(&single, tol::VERIFY_DEFAULT);
        assert!(report.completeness_residual < 1e-15);
        assert!(!report.informationally_complete);
        assert!(!report.sic);

        let basis = Povm::from_parts(
            vec![
                HermitianOperator::projector(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
                HermitianOperator::projector(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
            ],
            None,
            PovmMeta::for_method("manual"),
        );
        let report = verify(&basis, tol::VERIFY_DEFAULT);
        assert!(report.completeness_residual < 1e-15);
        assert!(!report.informationally_complete);

        let broken = Povm::from_parts(
            vec![HermitianOperator::identity(2).scale(0.9)],
            None,
            PovmMeta::for_method("manual"),
        );
        let report = verify(&broken, tol::VERIFY_DEFAULT);
        assert!(report.completeness_residual > 0.1);
        assert!(!report.passes(tol::VERIFY_DEFAULT));
    }

    #[test]
    fn povm_json_round_trip() {
        let povm = preset_tetrahedral();
        let text = serde_json::to_string(&povm).unwrap();
        let back: Povm = serde_json::from_str(&text).unwrap();
        assert_eq!(back.dim(), 2);
        assert_eq!(back.elements().len(), 4);
        assert_eq!(back.meta().method, "tetrahedral");
        assert!(back.duals().is_some());
        for (a, b) in back.elements().iter().zip(povm.elements()) {
            assert!(a.sub(b).frobenius_norm() < 1e-15);
        }

        // Meta keys all serialize, absent ones as null.
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let meta = value["meta"].as_object().unwrap();
        for key in ["method", "seed", "directions", "C", "mode", "side", "weights"] {
            assert!(meta.contains_key(key), "missing meta key {key}");
        }
        assert!(meta["seed"].is_null());

        // Shape validation on the way in.
        let bad = r#"{"dim":2,"elements":[]}"#;
        assert!(serde_json::from_str::<Povm>(bad).is_err());
        let wrong_dim =
            r#"{"dim":3,"elements":[{"dim":2,"entries":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}]}"#;
        assert!(serde_json::from_str::<Povm>(wrong_dim).is_err());
    }
}
