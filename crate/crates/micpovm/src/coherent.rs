//! Spin coherent states on C^d (spin s = (d-1)/2), their rank-1
//! projectors, uniform direction sampling, and the Monte Carlo check that
//! coherent projectors resolve the identity.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::hermitian::{ComplexMatrix, HermitianOperator};
use crate::tol;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CoherentError {
    #[error("sample count must be at least 1")]
    InvalidCount,
    #[error("direction vector has near-zero length {norm:.3e}")]
    InvalidDirection { norm: f64 },
}

impl CoherentError {
    pub fn name(&self) -> &'static str {
        match self {
            CoherentError::InvalidCount => "InvalidCount",
            CoherentError::InvalidDirection { .. } => "InvalidDirection",
        }
    }
}

/// Unit vector on the sphere S^2, normalized at construction.
/// Serializes as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, CoherentError> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < tol::DIRECTION_NORM {
            return Err(CoherentError::InvalidDirection { norm });
        }
        Ok(Direction {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn negated(&self) -> Direction {
        Direction {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y, self.z].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(deserializer)?;
        let norm = (x * x + y * y + z * z).sqrt();
        // Already-unit vectors keep their exact bits so a parse/emit round
        // trip of an artifact is the identity; anything else is normalized.
        if (norm - 1.0).abs() <= tol::DIRECTION_NORM {
            return Ok(Direction { x, y, z });
        }
        Direction::new(x, y, z).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Normalized state vector in C^d.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalizes the amplitudes; panics on a near-zero vector (callers in
    /// this crate always pass vectors of norm close to 1).
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-9, "state vector norm {norm} too small");
        StateVector {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in inner");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> HermitianOperator {
        HermitianOperator::projector(&self.amplitudes)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Spin-s coherent state along `n` in the basis |s, s-k>, k = 0..2s:
/// amplitudes sqrt(C(2s,k)) cos(t/2)^(2s-k) sin(t/2)^k e^(ik phi) with
/// n = (sin t cos phi, sin t sin phi, cos t).  Global phase fixed by a_0
/// real and nonnegative; the south pole is exactly the last basis vector.
pub fn coherent_state(n: &Direction, dim: usize) -> StateVector {
    assert!(dim >= 2, "coherent states need dim >= 2");
    let two_s = dim - 1;
    // Half-angle values straight from z, avoiding an acos round trip.
    let cos_half = ((1.0 + n.z()) / 2.0).max(0.0).sqrt();
    let sin_half = ((1.0 - n.z()) / 2.0).max(0.0).sqrt();
    let phi = if n.x() == 0.0 && n.y() == 0.0 {
        0.0
    } else {
        n.y().atan2(n.x())
    };
    let amplitudes = (0..=two_s)
        .map(|k| {
            let magnitude = binomial(two_s, k).sqrt()
                * cos_half.powi((two_s - k) as i32)
                * sin_half.powi(k as i32);
            Complex64::from_polar(magnitude, k as f64 * phi)
        })
        .collect();
    StateVector::new(amplitudes)
}

/// Rank-1 projector |n><n| onto the coherent state along `n`.
pub fn coherent_projector(n: &Direction, dim: usize) -> HermitianOperator {
    coherent_state(n, dim).projector()
}

/// Squared overlap |<n|n'>|^2 = ((1 + n.n')/2)^(d-1) of two coherent
/// states; the closed form the construction is tested against.
pub fn overlap_sq(n: &Direction, n_prime: &Direction, dim: usize) -> f64 {
    assert!(dim >= 2, "coherent states need dim >= 2");
    ((1.0 + n.dot(n_prime)) / 2.0).max(0.0).powi(dim as i32 - 1)
}

/// Seeded uniform sampler on S^2 with value semantics: clone it to fork a
/// stream, advance it explicitly with `next_direction`.
#[derive(Debug, Clone)]
pub struct DirectionSampler {
    rng: ChaCha8Rng,
}

impl DirectionSampler {
    pub fn new(seed: u64) -> Self {
        DirectionSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Normalized triple of standard Gaussians (uniform on the sphere).
    pub fn next_direction(&mut self) -> Direction {
        loop {
            let x: f64 = self.rng.sample(StandardNormal);
            let y: f64 = self.rng.sample(StandardNormal);
            let z: f64 = self.rng.sample(StandardNormal);
            if let Ok(dir) = Direction::new(x, y, z) {
                return dir;
            }
        }
    }
}

/// `count` directions sampled uniformly, deterministic per seed.  A candidate
/// that is antipodal to an already accepted direction (dot product below
/// -1 + 1e-12) is rejected and redrawn: antipodal coherent states are exactly
/// orthogonal and would plant a structural zero in downstream Gram matrices.
pub fn sample_directions(count: usize, seed: u64) -> Result<Vec<Direction>, CoherentError> {
    if count == 0 {
        return Err(CoherentError::InvalidCount);
    }
    let mut sampler = DirectionSampler::new(seed);
    let mut accepted: Vec<Direction> = Vec::with_capacity(count);
    while accepted.len() < count {
        let candidate = sampler.next_direction();
        let antipodal = accepted
            .iter()
            .any(|d| d.dot(&candidate) < -1.0 + tol::ANTIPODAL);
        if !antipodal {
            accepted.push(candidate);
        }
    }
    Ok(accepted)
}

/// Monte Carlo residual ||(d/samples) sum_k |n_k><n_k| - I||_F for uniform
/// directions n_k; the exact integral is the identity, so the residual
/// decays like 1/sqrt(samples).
pub fn resolution_of_identity_mc(
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<f64, CoherentError> {
    assert!(dim >= 2, "coherent states need dim >= 2");
    if samples == 0 {
        return Err(CoherentError::InvalidCount);
    }
    let mut sampler = DirectionSampler::new(seed);
    let mut acc = ComplexMatrix::zeros(dim);
    for _ in 0..samples {
        let state = coherent_state(&sampler.next_direction(), dim);
        let a = state.amplitudes();
        for i in 0..dim {
            for j in 0..dim {
                let cur = acc.get(i, j);
                acc.set(i, j, cur + a[i] * a[j].conj());
            }
        }
    }
    let scale = Complex64::new(dim as f64 / samples as f64, 0.0);
    Ok(acc.scale(scale).sub(&ComplexMatrix::identity(dim)).frobenius_norm())
}

/// The four unit vectors pointing to the vertices of a regular tetrahedron
/// (pairwise dot products -1/3, summing to zero).
pub fn tetrahedral_directions() -> [Direction; 4] {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    [
        Direction::new(0.0, 0.0, 1.0).unwrap(),
        Direction::new(2.0 * s2 / 3.0, 0.0, -1.0 / 3.0).unwrap(),
        Direction::new(-s2 / 3.0, s6 / 3.0, -1.0 / 3.0).unwrap(),
        Direction::new(-s2 / 3.0, -s6 / 3.0, -1.0 / 3.0).unwrap(),
    ]
}
