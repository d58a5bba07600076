use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMatrix, C64};

/// Equal-dimension operators `(T_1, …, T_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTuple {
    members: Vec<ComplexMatrix>,
}

impl OperatorTuple {
    pub fn new(members: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidInput("tuple needs at least one member".into()));
        };
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidInput("tuple members must be nonempty".into()));
        }
        if let Some(m) = members.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: m.dim(),
            });
        }
        Ok(Self { members })
    }

    pub fn arity(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    /// `‖T_j T_k - T_k T_j‖_F` for every pair `j < k`.
    pub fn commutator_norms(&self) -> Vec<((usize, usize), f64)> {
        let mut out = Vec::new();
        for j in 0..self.arity() {
            for k in (j + 1)..self.arity() {
                let (a, b) = (&self.members[j], &self.members[k]);
                let c = a
                    .matmul(b)
                    .and_then(|ab| ab.sub(&b.matmul(a)?))
                    .expect("equal dims");
                out.push(((j, k), c.frobenius_norm()));
            }
        }
        out
    }

    /// Each member direct-summed with a zero block of size `f`.
    pub fn embed_zero(&self, f: usize) -> Self {
        Self {
            members: self.members.iter().map(|m| m.direct_sum_zero(f)).collect(),
        }
    }

    fn check_dim(&self, x: &[C64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(())
    }
}

/// A point of `ℂ^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPoint(pub Vec<C64>);

impl JointPoint {
    pub fn real(coords: &[f64]) -> Self {
        Self(coords.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[C64] {
        &self.0
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `t·self + (1-t)·other`
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a * t + b * (1.0 - t))
                .collect(),
        )
    }
}

/// `(<T_1 x, x>, …, <T_n x, x>)`.
pub fn joint_point(ts: &OperatorTuple, x: &[C64]) -> Result<JointPoint> {
    ts.check_dim(x)?;
    Ok(JointPoint(
        ts.members.iter().map(|t| t.quadratic_form(x)).collect(),
    ))
}

/// `(<T_1 x, y>, …, <T_n x, y>)`.
pub fn ap_point(ts: &OperatorTuple, x: &[C64], y: &[C64]) -> Result<JointPoint> {
    ts.check_dim(x)?;
    ts.check_dim(y)?;
    Ok(JointPoint(
        ts.members.iter().map(|t| inner(&t.mul_vec(x), y)).collect(),
    ))
}
