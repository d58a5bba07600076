use super::matrix::{axpy, inner, norm, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

pub const UNIT_TOL: f64 = 1e-12;
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// A complex vector of norm one.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<C64>);

impl UnitVector {
    pub fn new(components: Vec<C64>) -> Result<Self> {
        let n = norm(&components);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidInput(format!(
                "vector norm {n} is not 1 within {UNIT_TOL:e}"
            )));
        }
        Ok(Self(components))
    }

    /// Scales a nonzero vector to unit length.
    pub fn normalize(mut components: Vec<C64>) -> Result<Self> {
        let n = norm(&components);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        for z in &mut components {
            *z /= n;
        }
        Ok(Self(components))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        Self(super::matrix::basis_vector(dim, i))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

impl AsRef<[C64]> for UnitVector {
    fn as_ref(&self) -> &[C64] {
        &self.0
    }
}

/// Ordered list of pairwise orthonormal vectors in `C^ambient_dim`.
///
/// A frame stands for the subspace it spans; `compress` realizes the
/// compression of an operator to that subspace in the frame's coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFrame {
    ambient_dim: usize,
    vectors: Vec<Vec<C64>>,
}

impl OrthonormalFrame {
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<C64>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    actual: v.len(),
                });
            }
        }
        if vectors.len() > ambient_dim {
            return Err(Error::InvalidInput(format!(
                "{} vectors cannot be orthonormal in dimension {ambient_dim}",
                vectors.len()
            )));
        }
        let frame = Self {
            ambient_dim,
            vectors,
        };
        let defect = frame.orthonormality_defect();
        if defect > ORTHONORMAL_TOL {
            return Err(Error::InvalidInput(format!(
                "frame is not orthonormal (defect {defect:e})"
            )));
        }
        Ok(frame)
    }

    pub(crate) fn new_unchecked(ambient_dim: usize, vectors: Vec<Vec<C64>>) -> Self {
        Self {
            ambient_dim,
            vectors,
        }
    }

    pub fn standard(dim: usize) -> Self {
        Self::new_unchecked(
            dim,
            (0..dim).map(|i| super::matrix::basis_vector(dim, i)).collect(),
        )
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self::new_unchecked(ambient_dim, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.vectors.len() == self.ambient_dim
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<C64>> {
        self.vectors
    }

    /// `max |<v_i, v_j> - δ_ij|`
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, vi) in self.vectors.iter().enumerate() {
            for (j, vj) in self.vectors.iter().enumerate().skip(i) {
                let g = inner(vj, vi);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// Concatenation of two frames; the caller guarantees `other ⊥ self`.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                actual: other.ambient_dim,
            });
        }
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Self::new(self.ambient_dim, vectors)
    }

    /// Orthogonal projection of `x` onto the span.
    pub fn project(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.ambient_dim];
        for v in &self.vectors {
            axpy(inner(x, v), v, &mut out);
        }
        out
    }
}

/// Orthonormalizes `vectors` (two Gram–Schmidt passes). The i-th output lies in
/// the span of the first i inputs.
pub fn gram_schmidt(vectors: &[Vec<C64>], tol: f64) -> Result<OrthonormalFrame> {
    let Some(first) = vectors.first() else {
        return Ok(OrthonormalFrame::empty(0));
    };
    let dim = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }

    // Gram matrix of the normalized inputs decides independence.
    let normalized: Vec<Vec<C64>> = vectors
        .iter()
        .map(|v| {
            let n = norm(v);
            if n > 0.0 {
                v.iter().map(|z| z / n).collect()
            } else {
                v.clone()
            }
        })
        .collect();
    let k = normalized.len();
    let mut gram = ComplexMatrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = inner(&normalized[j], &normalized[i]);
        }
    }
    let min_eig = super::herm_eig(&gram)?.values.first().copied().unwrap_or(0.0);
    if !(min_eig > tol) {
        return Err(Error::RankDeficient {
            min_eigenvalue: min_eig,
        });
    }

    let mut out: Vec<Vec<C64>> = Vec::with_capacity(k);
    for v in normalized {
        let mut w = v;
        for _ in 0..2 {
            for q in &out {
                let c = inner(&w, q);
                axpy(-c, q, &mut w);
            }
        }
        let n = norm(&w);
        for z in &mut w {
            *z /= n;
        }
        out.push(w);
    }
    Ok(OrthonormalFrame::new_unchecked(dim, out))
}

/// `B[i][j] = <T f_j, f_i>`
pub fn compress(t: &ComplexMatrix, frame: &OrthonormalFrame) -> Result<ComplexMatrix> {
    if frame.ambient_dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            actual: frame.ambient_dim(),
        });
    }
    let k = frame.len();
    let images: Vec<Vec<C64>> = frame.vectors().iter().map(|f| t.mul_vec(f)).collect();
    let mut b = ComplexMatrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            b[(i, j)] = inner(&images[j], &frame.vectors()[i]);
        }
    }
    Ok(b)
}

/// Completes a unit vector `u` to an orthonormal basis with a Householder
/// reflection. Returns the `n - 1` vectors spanning `u^⊥`.
pub fn householder_complement(u: &[C64]) -> Vec<Vec<C64>> {
    let n = u.len();
    let u0 = u[0];
    let sigma = if u0.norm() > 0.0 {
        u0 / u0.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    // v = u + σ e_1, H = I - 2 v v^* / (v^* v); H e_j for j ≥ 2 spans u^⊥
    let mut v = u.to_vec();
    v[0] += sigma;
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    (1..n)
        .map(|j| {
            let coeff = v[j].conj() * (2.0 / vv);
            let mut col: Vec<C64> = v.iter().map(|vi| -vi * coeff).collect();
            col[j] += 1.0;
            col
        })
        .collect()
}
