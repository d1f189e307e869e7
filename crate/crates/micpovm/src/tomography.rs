//! Simulated measurement and linear-inversion state reconstruction.
//!
//! Exact outcome probabilities `p_n = Tr[rho E_n]`, seeded multinomial
//! sampling, reconstruction `rho = (1/d) sum_n f_n E^n` through the dual
//! operators, and fidelity diagnostics.  Finite-shot estimates are returned
//! raw: linear inversion can leave the PSD cone, and repairing it would
//! hide exactly the effect under study.  Fidelity is therefore computed
//! against a clipped-and-renormalized copy, with the clip magnitude
//! reported alongside.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::hermitian::{
    eig_hermitian, hs_inner, random_psd, sqrt_psd, HermitianError, HermitianOperator,
};
use crate::povm::{preset_discrimination, Povm};
use crate::tol;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TomoError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },
    #[error("invalid outcome distribution: {reason}")]
    InvalidDistribution { reason: String },
    #[error("shot count must be at least 1")]
    InvalidShots,
    #[error("POVM carries no dual operators; reconstruction needs an informationally complete set")]
    MissingDuals,
    #[error("rank {rank} is outside 1..={dim}")]
    InvalidRank { rank: usize, dim: usize },
    #[error("outcome {outcome} is not one of 1, 2, 3")]
    InvalidOutcome { outcome: usize },
    #[error("POVM is not the three-outcome discrimination set")]
    NotDiscriminationPovm,
    #[error(transparent)]
    Numerical(#[from] HermitianError),
}

impl TomoError {
    pub fn name(&self) -> &'static str {
        match self {
            TomoError::DimensionMismatch { .. } => "DimensionMismatch",
            TomoError::NotDensity { .. } => "NotDensity",
            TomoError::InvalidDistribution { .. } => "InvalidDistribution",
            TomoError::InvalidShots => "InvalidShots",
            TomoError::MissingDuals => "MissingDuals",
            TomoError::InvalidRank { .. } => "InvalidRank",
            TomoError::InvalidOutcome { .. } => "InvalidOutcome",
            TomoError::NotDiscriminationPovm => "NotDiscriminationPovm",
            TomoError::Numerical(e) => e.name(),
        }
    }
}

/// Quantum state: PSD within 1e-10 and unit trace within 1e-10, both
/// enforced at every construction site.
#[derive(Debug, Clone, Serialize)]
pub struct DensityMatrix {
    dim: usize,
    matrix: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianOperator) -> Result<Self, TomoError> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > tol::TRACE_ONE {
            return Err(TomoError::NotDensity {
                reason: format!("trace is {trace}, expected 1"),
            });
        }
        let min = crate::hermitian::min_eigenvalue(&matrix)?;
        if min < -tol::DENSITY_PSD {
            return Err(TomoError::NotDensity {
                reason: format!("minimum eigenvalue {min:.3e} is negative"),
            });
        }
        Ok(DensityMatrix {
            dim: matrix.dim(),
            matrix,
        })
    }

    pub fn pure(state: &[Complex64]) -> Self {
        DensityMatrix {
            dim: state.len(),
            matrix: HermitianOperator::projector(state),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            dim,
            matrix: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &HermitianOperator {
        &self.matrix
    }

    /// `Tr[rho^2]`, equal to 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        hs_inner(&self.matrix, &self.matrix).expect("same operator")
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            matrix: HermitianOperator,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.matrix.dim() != repr.dim {
            return Err(D::Error::custom(format!(
                "matrix has dim {}, state declares {}",
                repr.matrix.dim(),
                repr.dim
            )));
        }
        DensityMatrix::new(repr.matrix).map_err(D::Error::custom)
    }
}

/// Shot record of a tomography run: a finite count or the exact-probability
/// mode, serialized as a number or the string "exact".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Finite(u64),
    Exact,
}

impl Serialize for Shots {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Shots::Finite(n) => serializer.serialize_u64(*n),
            Shots::Exact => serializer.serialize_str("exact"),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ShotsVisitor;
        impl serde::de::Visitor<'_> for ShotsVisitor {
            type Value = Shots;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a shot count or the string \"exact\"")
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Shots, E> {
                Ok(Shots::Finite(v))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Shots, E> {
                if v == "exact" {
                    Ok(Shots::Exact)
                } else {
                    Err(E::custom(format!("unknown shots tag {v:?}")))
                }
            }
        }
        deserializer.deserialize_any(ShotsVisitor)
    }
}

/// Everything a tomography run produces.  `probabilities` holds whatever
/// fed the reconstruction: exact values in exact mode, empirical
/// frequencies otherwise.  `reconstructed` is the raw linear-inversion
/// estimate; `psd_clip` is the total negative eigenvalue mass that had to
/// be clipped before the fidelity could be evaluated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyResult {
    pub probabilities: Vec<f64>,
    pub counts: Option<Vec<u64>>,
    pub reconstructed: HermitianOperator,
    pub fidelity: f64,
    pub trace_distance: f64,
    pub shots: Shots,
    pub seed: Option<u64>,
    pub psd_clip: f64,
}

/// Outcome probabilities `p_n = Tr[rho E_n]`.
pub fn probabilities(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<f64>, TomoError> {
    if rho.dim() != povm.dim() {
        return Err(TomoError::DimensionMismatch {
            left: rho.dim(),
            right: povm.dim(),
        });
    }
    povm.elements()
        .iter()
        .map(|e| hs_inner(rho.matrix(), e).map_err(TomoError::from))
        .collect()
}

/// Multinomial draw by inverse CDF, one uniform per shot, deterministic per
/// seed.  Entries may dip slightly negative (clamped); anything worse, or a
/// sum away from 1, is rejected.
pub fn sample_outcomes(probs: &[f64], shots: u64, seed: u64) -> Result<Vec<u64>, TomoError> {
    if shots == 0 {
        return Err(TomoError::InvalidShots);
    }
    if probs.is_empty() {
        return Err(TomoError::InvalidDistribution {
            reason: "empty distribution".into(),
        });
    }
    let mut cleaned = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() {
            return Err(TomoError::InvalidDistribution {
                reason: format!("entry {i} is not finite"),
            });
        }
        if p < -tol::PROB_CLAMP {
            return Err(TomoError::InvalidDistribution {
                reason: format!("entry {i} is {p:.3e}"),
            });
        }
        cleaned.push(p.max(0.0));
    }
    let total: f64 = cleaned.iter().sum();
    if (total - 1.0).abs() > tol::PROB_SUM {
        return Err(TomoError::InvalidDistribution {
            reason: format!("probabilities sum to {total}"),
        });
    }

    let mut cumulative = Vec::with_capacity(cleaned.len());
    let mut acc = 0.0;
    for p in &cleaned {
        acc += p / total;
        cumulative.push(acc);
    }
    // Close the last bin so u ~ U[0,1) can never fall past the end.
    *cumulative.last_mut().unwrap() = 1.0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; cleaned.len()];
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let idx = cumulative.partition_point(|&c| c <= u).min(counts.len() - 1);
        counts[idx] += 1;
    }
    Ok(counts)
}

/// Linear inversion `(1/d) sum_n f_n E^n`.  Exact probabilities give back
/// the state itself; frequencies give an estimate that is Hermitian but
/// not necessarily PSD.
pub fn reconstruct(freqs: &[f64], povm: &Povm) -> Result<HermitianOperator, TomoError> {
    let duals = povm.duals().ok_or(TomoError::MissingDuals)?;
    if freqs.len() != duals.len() {
        return Err(TomoError::DimensionMismatch {
            left: duals.len(),
            right: freqs.len(),
        });
    }
    let d = povm.dim() as f64;
    let mut out = HermitianOperator::zeros(povm.dim());
    for (f, dual) in freqs.iter().zip(duals) {
        out = out.add(&dual.scale(f / d));
    }
    Ok(out)
}

/// Uhlmann fidelity `F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`, clamped
/// to [0, 1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, TomoError> {
    if rho.dim() != sigma.dim() {
        return Err(TomoError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let root = sqrt_psd(rho.matrix())?;
    let inner = sigma.matrix().sandwich(&root);
    let overlap = sqrt_psd(&inner)?.trace();
    Ok((overlap * overlap).clamp(0.0, 1.0))
}

/// `(1/2) ||a - b||_1`; well-defined for any Hermitian pair, so the raw
/// non-PSD estimate can be diagnosed directly.
pub fn trace_distance(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64, TomoError> {
    if a.dim() != b.dim() {
        return Err(TomoError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let eigs = eig_hermitian(&a.sub(b))?.eigenvalues;
    Ok(0.5 * eigs.iter().map(|l| l.abs()).sum::<f64>())
}

/// `rho = G G^dagger / Tr[G G^dagger]` with G a d x rank matrix of seeded
/// complex Gaussians; rank defaults to d (generic mixed state).
pub fn random_density(
    dim: usize,
    rank: Option<usize>,
    seed: u64,
) -> Result<DensityMatrix, TomoError> {
    let rank = rank.unwrap_or(dim);
    if rank == 0 || rank > dim {
        return Err(TomoError::InvalidRank { rank, dim });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = random_psd(dim, rank, &mut rng);
    let trace = raw.trace();
    DensityMatrix::new(raw.scale(1.0 / trace))
}

/// What a single run of the three-outcome discrimination measurement
/// reveals about the candidate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WasMinusPlusSuperposition,
    WasPlus,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::WasMinusPlusSuperposition => "was_minus_plus_superposition",
            Verdict::WasPlus => "was_plus",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Maps a 1-based outcome of the discrimination POVM to its verdict:
/// outcome 1 excludes |+>, so the state was the other candidate; outcome 2
/// excludes the superposition; outcome 3 says nothing.
pub fn discriminate(outcome: usize, povm: &Povm) -> Result<Verdict, TomoError> {
    let reference = preset_discrimination();
    let is_preset = povm.dim() == 2
        && povm.elements().len() == 3
        && povm
            .elements()
            .iter()
            .zip(reference.elements())
            .all(|(a, b)| a.sub(b).frobenius_norm() <= tol::VERIFY_DEFAULT);
    if !is_preset {
        return Err(TomoError::NotDiscriminationPovm);
    }
    match outcome {
        1 => Ok(Verdict::WasMinusPlusSuperposition),
        2 => Ok(Verdict::WasPlus),
        3 => Ok(Verdict::Inconclusive),
        _ => Err(TomoError::InvalidOutcome { outcome }),
    }
}

/// Clips negative eigenvalue mass off an estimate and renormalizes so a
/// fidelity can be taken; returns the clipped mass and None when nothing
/// positive remains.
fn clip_to_density(
    estimate: &HermitianOperator,
) -> Result<(f64, Option<DensityMatrix>), TomoError> {
    let decomp = eig_hermitian(estimate)?;
    let clip: f64 = decomp
        .eigenvalues
        .iter()
        .filter(|l| **l < 0.0)
        .map(|l| l.abs())
        .sum();
    let mut clipped = HermitianOperator::zeros(estimate.dim());
    for (k, &l) in decomp.eigenvalues.iter().enumerate() {
        if l > 0.0 {
            clipped = clipped.add(&HermitianOperator::projector(&decomp.eigenvector(k)).scale(l));
        }
    }
    let trace = clipped.trace();
    if trace <= tol::NORM_ZERO {
        return Ok((clip, None));
    }
    Ok((clip, Some(DensityMatrix::new(clipped.scale(1.0 / trace))?)))
}

/// Full pipeline: probabilities, optional finite-shot sampling,
/// reconstruction, diagnostics.  The seed only enters in finite-shot mode.
pub fn run_tomography(
    rho: &DensityMatrix,
    povm: &Povm,
    shots: Option<u64>,
    seed: u64,
) -> Result<TomographyResult, TomoError> {
    let exact = probabilities(rho, povm)?;
    let (fed, counts, shots_tag, seed_tag) = match shots {
        Some(n) => {
            let counts = sample_outcomes(&exact, n, seed)?;
            let freqs = counts.iter().map(|c| *c as f64 / n as f64).collect();
            (freqs, Some(counts), Shots::Finite(n), Some(seed))
        }
        None => (exact, None, Shots::Exact, None),
    };
    let reconstructed = reconstruct(&fed, povm)?;
    let (psd_clip, repaired) = clip_to_density(&reconstructed)?;
    let fid = match &repaired {
        Some(sigma) => fidelity(rho, sigma)?,
        None => 0.0,
    };
    let dist = trace_distance(rho.matrix(), &reconstructed)?;
    Ok(TomographyResult {
        probabilities: fed,
        counts,
        reconstructed,
        fidelity: fid,
        trace_distance: dist,
        shots: shots_tag,
        seed: seed_tag,
        psd_clip,
    })
}
