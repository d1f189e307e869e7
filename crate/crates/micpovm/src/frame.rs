//! Operator frames: d^2 Hermitian operators with their Gram matrix, its
//! inverse, and the dual basis.  Expansion coefficients taken against the
//! duals (contravariant) or the frame itself (covariant) turn operators
//! into d^2 real numbers and back.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hermitian::{hs_inner, min_eigenvalue, HermitianError, HermitianOperator};
use crate::real::RealMatrix;
use crate::tol;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FrameError {
    #[error("operators do not span the Hermitian space: {reason}")]
    LinearlyDependent { reason: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Numerical(#[from] HermitianError),
}

impl FrameError {
    pub fn name(&self) -> &'static str {
        match self {
            FrameError::LinearlyDependent { .. } => "LinearlyDependent",
            FrameError::DimensionMismatch { .. } => "DimensionMismatch",
            FrameError::Numerical(e) => e.name(),
        }
    }
}

/// Whether a coefficient vector holds expansion coefficients against the
/// dual basis (contravariant, `A^n = Tr[A Q^n]`) or expectation-value style
/// coefficients against the frame itself (covariant, `A_n = Tr[A Q_n]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientKind {
    Contravariant,
    Covariant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub kind: CoefficientKind,
    pub values: Vec<f64>,
}

/// d^2 Hermitian operators spanning the operator space, with the Gram
/// matrix G_nm = Tr[Q_n Q_m], its inverse, and the dual basis
/// Q^n = d * sum_m (G^-1)_nm Q_m satisfying (1/d) Tr[Q^n Q_m] = delta_nm.
#[derive(Debug, Clone)]
pub struct OperatorFrame {
    dim: usize,
    operators: Vec<HermitianOperator>,
    gram: RealMatrix,
    gram_inverse: RealMatrix,
    duals: Vec<HermitianOperator>,
    condition_number: f64,
}

impl OperatorFrame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }

    pub fn duals(&self) -> &[HermitianOperator] {
        &self.duals
    }

    pub fn gram(&self) -> &RealMatrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &RealMatrix {
        &self.gram_inverse
    }

    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }
}

impl Serialize for OperatorFrame {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct FrameMeta {
            condition_number: f64,
        }
        let mut s = serializer.serialize_struct("OperatorFrame", 5)?;
        s.serialize_field("dim", &self.dim)?;
        s.serialize_field("operators", &self.operators)?;
        s.serialize_field("gram", &self.gram)?;
        s.serialize_field("duals", &self.duals)?;
        s.serialize_field(
            "meta",
            &FrameMeta {
                condition_number: self.condition_number,
            },
        )?;
        s.end()
    }
}

/// Builds the frame from exactly d^2 Hermitian operators of equal dimension.
/// A wrong count, a singular Gram matrix, or a Gram condition estimate
/// `||G||_F * ||G^-1||_F` above 1e12 all mean the operators cannot serve as
/// a basis and are reported as `LinearlyDependent`.
pub fn build_frame(operators: Vec<HermitianOperator>) -> Result<OperatorFrame, FrameError> {
    let first_dim = match operators.first() {
        Some(op) => op.dim(),
        None => {
            return Err(FrameError::LinearlyDependent {
                reason: "no operators given".into(),
            })
        }
    };
    for op in &operators {
        if op.dim() != first_dim {
            return Err(FrameError::DimensionMismatch {
                left: first_dim,
                right: op.dim(),
            });
        }
    }
    let count = operators.len();
    if count != first_dim * first_dim {
        return Err(FrameError::LinearlyDependent {
            reason: format!(
                "expected {} operators for dim {}, found {}",
                first_dim * first_dim,
                first_dim,
                count
            ),
        });
    }

    let mut gram = RealMatrix::zeros(count);
    for n in 0..count {
        for m in n..count {
            let value = hs_inner(&operators[n], &operators[m]).expect("dims already checked");
            gram.set(n, m, value);
            gram.set(m, n, value);
        }
    }

    let gram_inverse = gram.invert().ok_or_else(|| FrameError::LinearlyDependent {
        reason: "Gram matrix is singular".into(),
    })?;
    let condition_number = gram.frobenius_norm() * gram_inverse.frobenius_norm();
    if !condition_number.is_finite() || condition_number > tol::GRAM_CONDITION_MAX {
        return Err(FrameError::LinearlyDependent {
            reason: format!(
                "Gram condition estimate {condition_number:.3e} exceeds {:.1e}",
                tol::GRAM_CONDITION_MAX
            ),
        });
    }

    let d = first_dim as f64;
    let duals = (0..count)
        .map(|n| {
            let mut acc = HermitianOperator::zeros(first_dim);
            for (m, op) in operators.iter().enumerate() {
                acc = acc.add(&op.scale(d * gram_inverse.get(n, m)));
            }
            acc
        })
        .collect();

    Ok(OperatorFrame {
        dim: first_dim,
        operators,
        gram,
        gram_inverse,
        duals,
        condition_number,
    })
}

/// Contravariant coefficients `A^n = Tr[A Q^n]`; expanding them against the
/// frame operators reproduces A.
pub fn p_coefficients(
    a: &HermitianOperator,
    frame: &OperatorFrame,
) -> Result<CoefficientVector, FrameError> {
    if a.dim() != frame.dim {
        return Err(FrameError::DimensionMismatch {
            left: a.dim(),
            right: frame.dim,
        });
    }
    let values = frame
        .duals
        .iter()
        .map(|dual| hs_inner(a, dual).expect("dims already checked"))
        .collect();
    Ok(CoefficientVector {
        kind: CoefficientKind::Contravariant,
        values,
    })
}

/// Covariant coefficients `A_n = Tr[A Q_n]`; for coherent-projector frames
/// these are the expectation values `<n|A|n>`.
pub fn q_coefficients(
    a: &HermitianOperator,
    frame: &OperatorFrame,
) -> Result<CoefficientVector, FrameError> {
    if a.dim() != frame.dim {
        return Err(FrameError::DimensionMismatch {
            left: a.dim(),
            right: frame.dim,
        });
    }
    let values = frame
        .operators
        .iter()
        .map(|op| hs_inner(a, op).expect("dims already checked"))
        .collect();
    Ok(CoefficientVector {
        kind: CoefficientKind::Covariant,
        values,
    })
}

/// Lowers contravariant coefficients through the Gram matrix:
/// `A_n = (1/d) sum_m G_nm A^m`.
pub fn coeff_transform(p: &CoefficientVector, frame: &OperatorFrame) -> CoefficientVector {
    assert_eq!(
        p.kind,
        CoefficientKind::Contravariant,
        "coeff_transform lowers contravariant coefficients"
    );
    assert_eq!(p.values.len(), frame.operators.len(), "coefficient length mismatch");
    let d = frame.dim as f64;
    let count = p.values.len();
    let values = (0..count)
        .map(|n| (0..count).map(|m| frame.gram.get(n, m) * p.values[m]).sum::<f64>() / d)
        .collect();
    CoefficientVector {
        kind: CoefficientKind::Covariant,
        values,
    }
}

/// `(1/d) sum_n c_n basis_n`.  Contravariant coefficients pair with the
/// frame operators, covariant ones with the duals.
pub fn expand(
    c: &CoefficientVector,
    basis: &[HermitianOperator],
) -> Result<HermitianOperator, FrameError> {
    if c.values.len() != basis.len() {
        return Err(FrameError::DimensionMismatch {
            left: c.values.len(),
            right: basis.len(),
        });
    }
    assert!(!basis.is_empty(), "expand needs a nonempty basis");
    let dim = basis[0].dim();
    let d = dim as f64;
    let mut acc = HermitianOperator::zeros(dim);
    for (value, op) in c.values.iter().zip(basis) {
        if op.dim() != dim {
            return Err(FrameError::DimensionMismatch {
                left: dim,
                right: op.dim(),
            });
        }
        acc = acc.add(&op.scale(value / d));
    }
    Ok(acc)
}

/// True when every row of the inverse Gram matrix contains a negative
/// entry.  Meaningful for frames of coherent projectors, whose Gram is
/// entrywise nonnegative.
pub fn gram_inverse_row_negativity(frame: &OperatorFrame) -> bool {
    let n = frame.gram_inverse.dim();
    (0..n).all(|i| (0..n).any(|j| frame.gram_inverse.get(i, j) < -tol::NEGATIVE_ENTRY))
}

/// Smallest eigenvalue across all duals; the witness that coherent-frame
/// duals can never all be positive semi-definite.
pub fn most_negative_dual_eigenvalue(frame: &OperatorFrame) -> Result<f64, FrameError> {
    let mut worst = f64::INFINITY;
    for dual in &frame.duals {
        worst = worst.min(min_eigenvalue(dual)?);
    }
    Ok(worst)
}
