//! Named tolerance constants used across the crate.
//!
//! Every comparison against "close enough to zero" goes through one of these
//! so the thresholds are documented in a single place.  The values trade off
//! accumulated rounding error in d^2 x d^2 Gram inversions against catching
//! genuinely broken inputs.

/// Constructing a `HermitianOperator` symmetrizes its input; afterwards every
/// entry matches the conjugate of its transpose partner to this bound.
pub const HERM_SYMMETRIZE: f64 = 1e-12;

/// Inputs whose max entrywise deviation from Hermiticity exceeds this are
/// rejected instead of silently symmetrized.
pub const HERM_REJECT: f64 = 1e-8;

/// Jacobi sweeps stop once the off-diagonal Frobenius mass drops below
/// `JACOBI_OFF_FACTOR * ||H||_F`.
pub const JACOBI_OFF_FACTOR: f64 = 1e-13;

/// Hard cap on Jacobi sweeps; hitting it reports a numerical error rather
/// than returning a half-diagonalized matrix.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvector reconstruction residual allowed per decomposition,
/// relative to `max(1, ||H||_F)`.
pub const EIG_RESIDUAL_FACTOR: f64 = 1e-9;

/// Orthonormality residual `||V^H V - I||_F` allowed for eigenvector matrices.
pub const EIG_ORTHO: f64 = 1e-10;

/// `sqrt_psd` clamps eigenvalues in `[-PSD_CLAMP, 0)` to zero; anything more
/// negative means the operator is not positive semi-definite.
pub const PSD_CLAMP: f64 = 1e-10;

/// `inv_sqrt_pd` requires the smallest eigenvalue to exceed
/// `PD_EPS_FACTOR * dim`.
pub const PD_EPS_FACTOR: f64 = 1e-10;

/// Frames whose Gram condition estimate `||G||_F * ||G^-1||_F` exceeds this
/// are treated as linearly dependent.
pub const GRAM_CONDITION_MAX: f64 = 1e12;

/// Expansion coefficients with `|I^n|` below this make the positivity
/// rescaling in the POVM constructions ill-defined.
pub const COEFF_DEGENERATE: f64 = 1e-10;

/// A dual operator counts as "has a negative part" only when its smallest
/// eigenvalue is below `-DUAL_NEGATIVE`; exact zeros stay in the positive
/// group so no shift is wasted on them.
pub const DUAL_NEGATIVE: f64 = 1e-12;

/// Completeness residual `||sum E_n - I||_F` allowed by the constructors.
pub const COMPLETENESS: f64 = 1e-8;

/// Constructors require every element eigenvalue to be `>= -ELEMENT_PSD`.
pub const ELEMENT_PSD: f64 = 1e-9;

/// Eigenvalues above this absolute threshold count toward an element's rank.
pub const RANK_EIG: f64 = 1e-8;

/// `normalize_extremal` needs an eigenvalue spread above this.
pub const NORMALIZE_DEGENERATE: f64 = 1e-10;

/// `normalize_closed_form` needs a Frobenius norm above this.
pub const NORM_ZERO: f64 = 1e-12;

/// Bound slack for checking `0 <= K <= 1` on normalized operators.
pub const NORMALIZED_BOUND: f64 = 1e-9;

/// Direction vectors must have length within this of 1 (after normalization).
pub const DIRECTION_NORM: f64 = 1e-12;

/// Sampled direction pairs with `n . n' < -1 + ANTIPODAL` trigger a resample
/// because antipodal coherent projectors are orthogonal, not merely close.
pub const ANTIPODAL: f64 = 1e-12;

/// Duality residual `|Tr[Q^n Q_m]/d - delta_nm|` allowed per pair.
pub const DUALITY: f64 = 1e-8;

/// An inverse-Gram entry counts as negative when it is below this.
pub const NEGATIVE_ENTRY: f64 = 1e-12;

/// Density matrices must have unit trace within this.
pub const TRACE_ONE: f64 = 1e-10;

/// Density matrices must have eigenvalues `>= -DENSITY_PSD`.
pub const DENSITY_PSD: f64 = 1e-10;

/// Outcome distributions must sum to 1 within this before sampling.
pub const PROB_SUM: f64 = 1e-8;

/// Probabilities in `[-PROB_CLAMP, 0)` are clamped to zero before sampling.
pub const PROB_CLAMP: f64 = 1e-8;

/// Default tolerance for `verify` when no profile or flag overrides it.
pub const VERIFY_DEFAULT: f64 = 1e-8;

/// Verification tolerance profiles selectable via `MICPOVM_TOL_PROFILE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToleranceProfile {
    Strict,
    Default,
    Loose,
}

impl ToleranceProfile {
    /// Tolerance used by `verify` under this profile.
    pub fn verify_tol(self) -> f64 {
        match self {
            ToleranceProfile::Strict => 1e-10,
            ToleranceProfile::Default => VERIFY_DEFAULT,
            ToleranceProfile::Loose => 1e-6,
        }
    }

    /// Reads `MICPOVM_TOL_PROFILE` (`strict` | `default` | `loose`,
    /// case-insensitive).  Unset or unrecognized values fall back to
    /// `Default`.
    pub fn from_env() -> Self {
        match std::env::var("MICPOVM_TOL_PROFILE") {
            Ok(v) => match v.to_ascii_lowercase().as_str() {
                "strict" => ToleranceProfile::Strict,
                "loose" => ToleranceProfile::Loose,
                _ => ToleranceProfile::Default,
            },
            Err(_) => ToleranceProfile::Default,
        }
    }
}
