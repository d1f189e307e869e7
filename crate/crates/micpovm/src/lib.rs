//! Minimal informationally complete POVMs on finite-dimensional Hilbert
//! spaces: construction from coherent-state projectors or arbitrary
//! Hermitian operator sets, verification, and simulated state tomography
//! with linear-inversion reconstruction.

pub mod coherent;
pub mod frame;
pub mod hermitian;
pub mod json;
pub mod povm;
pub mod real;
pub mod tol;
pub mod tomography;

pub use coherent::{
    coherent_projector, coherent_state, overlap_sq, resolution_of_identity_mc, sample_directions,
    tetrahedral_directions, CoherentError, Direction, DirectionSampler, StateVector,
};
pub use frame::{
    build_frame, coeff_transform, expand, gram_inverse_row_negativity,
    most_negative_dual_eigenvalue, p_coefficients, q_coefficients, CoefficientKind,
    CoefficientVector, FrameError, OperatorFrame,
};
pub use hermitian::{
    eig_hermitian, hermitian_basis, hs_inner, inv_sqrt_pd, is_psd, max_eigenvalue, min_eigenvalue,
    random_hermitian, random_psd, sqrt_psd, ComplexMatrix, EigenDecomposition, HermitianError,
    HermitianOperator,
};
pub use json::{to_json_pretty, OperatorSetFile, SciFloatFormatter};
pub use povm::{
    cfs_construct, evr_dual_construct, evr_primal_construct, general_construct,
    normalize_closed_form, normalize_extremal, preset_discrimination, preset_generic_qubit,
    preset_tetrahedral, qubit_identity_coefficients_geometric, verify, ConstructionSide,
    NormalizationMode, Povm, PovmError, PovmMeta, PovmReport,
};
pub use real::RealMatrix;
pub use tomography::{
    discriminate, fidelity, probabilities, random_density, reconstruct, run_tomography,
    sample_outcomes, trace_distance, DensityMatrix, Shots, TomoError, TomographyResult, Verdict,
};
