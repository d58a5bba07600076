use std::f64::consts::TAU;

use super::polygon::{hull_indices, Polygon2D};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, UnitVector, C64};

pub const DEFAULT_ANGLES: usize = 360;

/// Extreme point of `W(T)` in direction `θ`.
#[derive(Debug, Clone)]
pub struct SupportPoint {
    pub theta: f64,
    /// Largest eigenvalue of `(e^{-iθ}T + e^{iθ}T^*)/2`.
    pub value: f64,
    pub vector: UnitVector,
    /// `<Tx, x>` for the returned eigenvector.
    pub point: C64,
}

pub fn support_point(t: &ComplexMatrix, theta: f64) -> Result<SupportPoint> {
    let eig = herm_eig(&t.rotated_real_part(theta))?;
    let n = t.dim();
    let value = eig.values[n - 1];
    let x = eig.vectors.into_vectors().pop().expect("complete frame");
    let point = t.quadratic_form(&x);
    Ok(SupportPoint {
        theta,
        value,
        vector: UnitVector::normalize(x)?,
        point,
    })
}

/// Support points on a uniform angle grid together with their hull.
#[derive(Debug, Clone)]
pub struct BoundarySweep {
    pub samples: Vec<SupportPoint>,
    pub polygon: Polygon2D,
    /// Index into `samples` of each polygon vertex.
    pub vertex_samples: Vec<usize>,
}

pub fn boundary_sweep(t: &ComplexMatrix, angles: usize) -> Result<BoundarySweep> {
    if angles < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 angles, got {angles}"
        )));
    }
    if t.dim() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let samples = (0..angles)
        .map(|k| support_point(t, TAU * k as f64 / angles as f64))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<C64> = samples.iter().map(|s| s.point).collect();
    let vertex_samples = hull_indices(&points);
    let polygon = Polygon2D::hull(&points)?;
    Ok(BoundarySweep {
        samples,
        polygon,
        vertex_samples,
    })
}

/// Inner polygonal approximation of `W(T)` from `angles` support points.
pub fn boundary_polygon(t: &ComplexMatrix, angles: usize) -> Result<Polygon2D> {
    Ok(boundary_sweep(t, angles)?.polygon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numrange::polygon::PolygonKind;

    #[test]
    fn support_of_diagonal() {
        let t = ComplexMatrix::real_diagonal(&[1.0, -1.0]);
        let sp = support_point(&t, 0.0).unwrap();
        assert!((sp.value - 1.0).abs() < 1e-15);
        assert!((sp.vector.as_slice()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn support_of_nilpotent_is_half() {
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        for k in 0..16 {
            let sp = support_point(&t, k as f64 * 0.41).unwrap();
            assert!((sp.value - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn support_of_scalar() {
        let lam = C64::new(0.3, -1.2);
        let t = ComplexMatrix::scalar(3, lam);
        for k in 0..8 {
            let th = k as f64 * 0.7;
            let sp = support_point(&t, th).unwrap();
            let want = (C64::from_polar(1.0, -th) * lam).re;
            assert!((sp.value - want).abs() < 1e-14);
        }
    }

    #[test]
    fn normal_matrix_gives_segment() {
        let p = boundary_polygon(&ComplexMatrix::real_diagonal(&[0.0, 1.0]), 360).unwrap();
        assert_eq!(p.kind(), PolygonKind::Segment);
        let mut v: Vec<f64> = p.vertices().iter().map(|z| z.re).collect();
        v.sort_by(f64::total_cmp);
        assert!(v[0].abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn one_by_one_is_point() {
        let lam = C64::new(2.0, 3.0);
        let p = boundary_polygon(&ComplexMatrix::diagonal(&[lam]), 360).unwrap();
        assert_eq!(p.kind(), PolygonKind::Point);
        assert!((p.vertices()[0] - lam).norm() < 1e-15);
    }

    #[test]
    fn rejects_too_few_angles() {
        assert!(boundary_polygon(&ComplexMatrix::identity(2), 2).is_err());
    }
}
