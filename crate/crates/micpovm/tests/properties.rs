//! Heavier randomized invariants: frame expansion round-trips, linear
//! independence of random coherent projector sets, dual-basis facts, and
//! statistical behaviour of the tomography pipeline.

use micpovm::{
    build_frame, coherent_projector, expand, fidelity, gram_inverse_row_negativity, hs_inner,
    most_negative_dual_eigenvalue, p_coefficients, preset_tetrahedral, probabilities,
    q_coefficients, random_density, random_hermitian, run_tomography, sample_directions,
    tetrahedral_directions, DensityMatrix, OperatorFrame,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coherent_frame(dim: usize, seed: u64) -> OperatorFrame {
    let dirs = sample_directions(dim * dim, seed).unwrap();
    let ops = dirs.iter().map(|n| coherent_projector(n, dim)).collect();
    build_frame(ops).unwrap()
}

#[test]
fn expansion_round_trips_on_random_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for dim in 2..=4 {
        for seed in 0..(100 / dim as u64) {
            let frame = coherent_frame(dim, 1000 * dim as u64 + seed);
            let a = random_hermitian(dim, &mut rng);

            // Contravariant coefficients against the frame operators.
            let p = p_coefficients(&a, &frame).unwrap();
            let back = expand(&p, frame.operators()).unwrap();
            assert!(back.sub(&a).frobenius_norm() < 1e-8);

            // Covariant coefficients against the duals.
            let q = q_coefficients(&a, &frame).unwrap();
            let back = expand(&q, frame.duals()).unwrap();
            assert!(back.sub(&a).frobenius_norm() < 1e-8);
        }
    }
}

#[test]
fn random_coherent_projectors_are_linearly_independent() {
    // d^2 projectors onto generic coherent states span the operator space;
    // a failed frame build would mean a numerically dependent set.
    for dim in 2..=3 {
        for seed in 0..1000 {
            let dirs = sample_directions(dim * dim, 31 * seed + dim as u64).unwrap();
            let ops = dirs.iter().map(|n| coherent_projector(n, dim)).collect();
            assert!(
                build_frame(ops).is_ok(),
                "dependent frame at dim {dim} seed {seed}"
            );
        }
    }
}

#[test]
fn dual_gram_is_scaled_inverse() {
    for dim in 2..=3 {
        for seed in 0..20 {
            let frame = coherent_frame(dim, 7000 + seed);
            let count = dim * dim;
            let scale = (dim * dim) as f64;
            for n in 0..count {
                for m in 0..count {
                    let got = hs_inner(&frame.duals()[n], &frame.duals()[m]).unwrap();
                    let expected = scale * frame.gram_inverse().get(n, m);
                    assert!((got - expected).abs() < 1e-6 * expected.abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn inverse_gram_negativity_facts() {
    // Coherent-projector Gram matrices have strictly positive entries, so
    // every row of the inverse must dip negative and at least one dual
    // operator per frame is indefinite.
    for dim in 2..=3 {
        for seed in 0..100 {
            let frame = coherent_frame(dim, 40_000 + 100 * dim as u64 + seed);
            assert!(gram_inverse_row_negativity(&frame));
            assert!(most_negative_dual_eigenvalue(&frame).unwrap() < -1e-10);
        }
    }
}

#[test]
fn rescaled_povm_pairs_are_not_mutually_dual() {
    // The frame-side and dual-side constructions on the same tetrahedral
    // frame produce element sets that fail the duality relation even up to
    // an overall scale.
    let dirs = tetrahedral_directions();
    let ops: Vec<_> = dirs.iter().map(|n| coherent_projector(n, 2)).collect();
    let frame = build_frame(ops).unwrap();
    let primal = micpovm::evr_primal_construct(&frame).unwrap();
    let dual = micpovm::evr_dual_construct(&frame).unwrap();

    let mut pairing = [[0.0; 4]; 4];
    for n in 0..4 {
        for m in 0..4 {
            pairing[n][m] =
                hs_inner(&dual.elements()[n], &primal.elements()[m]).unwrap() / 2.0;
        }
    }
    let best_scale: f64 = (0..4).map(|n| pairing[n][n]).sum::<f64>() / 4.0;
    let mut residual = 0.0f64;
    for n in 0..4 {
        for m in 0..4 {
            let target = if n == m { best_scale } else { 0.0 };
            residual += (pairing[n][m] - target).powi(2);
        }
    }
    assert!(residual.sqrt() > 0.1, "sets are unexpectedly close to dual");
}

#[test]
fn probabilities_stay_physical_everywhere() {
    let tetra = preset_tetrahedral();
    let disc = micpovm::preset_discrimination();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let general = micpovm::general_construct(
        (0..9).map(|_| random_hermitian(3, &mut rng)).collect(),
        micpovm::NormalizationMode::ClosedForm,
        micpovm::ConstructionSide::Dual,
    )
    .unwrap();

    let povms: [(&micpovm::Povm, usize); 3] = [(&tetra, 2), (&disc, 2), (&general, 3)];
    for (povm, dim) in povms {
        for seed in 0..333 {
            let rho = random_density(dim, None, 90_000 + seed).unwrap();
            let probs = probabilities(&rho, povm).unwrap();
            let sum: f64 = probs.iter().sum();
            assert!((sum - 1.0).abs() < 1e-10);
            for p in probs {
                assert!(p >= -1e-12 && p <= 1.0 + 1e-12, "p = {p} out of range");
            }
        }
    }
}

#[test]
fn reconstruction_fidelity_improves_with_shots() {
    let tetra = preset_tetrahedral();
    let rho = random_density(2, None, 55).unwrap();
    let ladder = [100u64, 1_000, 10_000, 100_000];
    let trials = 20;

    let mut means = Vec::new();
    let mut sems = Vec::new();
    for &shots in &ladder {
        let fids: Vec<f64> = (0..trials)
            .map(|t| {
                run_tomography(&rho, &tetra, Some(shots), 600 + t)
                    .unwrap()
                    .fidelity
            })
            .collect();
        let mean = fids.iter().sum::<f64>() / trials as f64;
        let var = fids.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        means.push(mean);
        sems.push((var / trials as f64).sqrt());
    }

    for k in 0..ladder.len() - 1 {
        assert!(
            means[k + 1] >= means[k] - 2.0 * (sems[k] + sems[k + 1]),
            "fidelity regressed from {} to {} shots: {} -> {}",
            ladder[k],
            ladder[k + 1],
            means[k],
            means[k + 1]
        );
    }
    assert!(means[3] > 0.99, "mean fidelity at 1e5 shots is {}", means[3]);
}

#[test]
fn exact_reconstruction_matches_across_constructions() {
    // The same state reconstructs identically through structurally
    // different IC POVMs built over the same frame.
    let frame = coherent_frame(2, 12345);
    let primal = micpovm::evr_primal_construct(&frame).unwrap();
    let dual = micpovm::evr_dual_construct(&frame).unwrap();
    let cfs = micpovm::cfs_construct(frame.operators().to_vec(), None).unwrap();

    for seed in 0..10 {
        let rho = random_density(2, None, 500 + seed).unwrap();
        for povm in [&primal, &dual, &cfs] {
            let result = run_tomography(&rho, povm, None, 0).unwrap();
            assert!((result.fidelity - 1.0).abs() < 1e-8);
            assert!(result.trace_distance < 1e-8);
        }
    }
}

#[test]
fn clipped_estimate_fidelity_is_honest() {
    // At very low shot counts the raw estimate routinely leaves the PSD
    // cone; the report must expose the clip rather than hide it.
    let tetra = preset_tetrahedral();
    let pure = DensityMatrix::pure(&[
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(0.0, 0.0),
    ]);
    let mut clipped_runs = 0;
    for seed in 0..50 {
        let result = run_tomography(&pure, &tetra, Some(30), seed).unwrap();
        assert!(result.psd_clip >= 0.0);
        assert!((0.0..=1.0).contains(&result.fidelity));
        if result.psd_clip > 1e-12 {
            clipped_runs += 1;
            // Raw estimate really is indefinite in these runs, and the
            // reported clip covers at least its worst eigenvalue.
            let min = micpovm::min_eigenvalue(&result.reconstructed).unwrap();
            assert!(min < 0.0);
            assert!(result.psd_clip >= min.abs() - 1e-12);
        }
    }
    assert!(clipped_runs > 0, "expected some non-PSD estimates at 30 shots");

    // Exact mode on the same state: clip is numerically zero.
    let exact = run_tomography(&pure, &tetra, None, 0).unwrap();
    assert!(exact.psd_clip < 1e-10);
    assert!(
        fidelity(&pure, &DensityMatrix::new(exact.reconstructed.clone()).unwrap()).unwrap()
            > 1.0 - 1e-8
    );
}
