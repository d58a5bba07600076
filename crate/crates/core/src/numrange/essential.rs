use std::collections::HashSet;

use super::model::OperatorModel;
use super::polygon::{hull_indices, Polygon2D};
use crate::error::{Error, Result};
use crate::linalg::{SparseVector, C64};

/// Tail indices scanned before giving up when the model has no truncation.
pub const DEFAULT_SEARCH_LIMIT: usize = 1 << 24;

/// `W_e` of the model: the hull of its limit points. The head plays no role.
pub fn essential_range(model: &OperatorModel) -> Polygon2D {
    Polygon2D::hull(model.limit_points()).expect("models have finite limit points")
}

/// Writes `z` (projected onto the hull of `points`) as a convex combination
/// of at most three of the points. Returns `(index, weight)` pairs with
/// positive weights summing to one.
pub fn caratheodory(points: &[C64], z: C64) -> Vec<(usize, f64)> {
    let hull = hull_indices(points);
    let poly = Polygon2D::hull(points).expect("nonempty points");
    let z = poly.nearest(z);
    let mut out = match hull.len() {
        1 => vec![(hull[0], 1.0)],
        2 => {
            let (a, b) = (points[hull[0]], points[hull[1]]);
            let s = segment_param(a, b, z);
            vec![(hull[0], 1.0 - s), (hull[1], s)]
        }
        _ => {
            let v0 = points[hull[0]];
            let cr = |a: C64, b: C64| a.re * b.im - a.im * b.re;
            let d = z - v0;
            let i = (1..hull.len() - 1)
                .min_by(|&i, &j| {
                    let viol = |i: usize| {
                        (-cr(points[hull[i]] - v0, d)).max(0.0)
                            + cr(points[hull[i + 1]] - v0, d).max(0.0)
                    };
                    viol(i).total_cmp(&viol(j))
                })
                .expect("fan triangle");
            let w = barycentric(v0, points[hull[i]], points[hull[i + 1]], z)
                .unwrap_or([1.0, 0.0, 0.0]);
            vec![(hull[0], w[0]), (hull[i], w[1]), (hull[i + 1], w[2])]
        }
    };
    out.retain(|&(_, w)| w > 1e-15);
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut out {
        *w /= total;
    }
    out
}

fn segment_param(a: C64, b: C64, z: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return 0.0;
    }
    (((z - a).re * d.re + (z - a).im * d.im) / len2).clamp(0.0, 1.0)
}

/// Barycentric coordinates of `z` in triangle `(a, b, c)`, clamped to be
/// nonnegative; `None` for a degenerate triangle.
fn barycentric(a: C64, b: C64, c: C64, z: C64) -> Option<[f64; 3]> {
    let cr = |p: C64, q: C64| p.re * q.im - p.im * q.re;
    let area = cr(b - a, c - a);
    if area.abs() <= f64::EPSILON * (b - a).norm() * (c - a).norm() {
        return None;
    }
    let wb = cr(z - a, c - a) / area;
    let wc = cr(b - a, z - a) / area;
    let w = [1.0 - wb - wc, wb, wc];
    let w = w.map(|x| x.max(0.0));
    let s: f64 = w.iter().sum();
    Some(w.map(|x| x / s))
}

#[derive(Debug, Clone)]
pub struct WeVector {
    pub vector: SparseVector,
    /// Global coordinates used, ascending.
    pub support: Vec<usize>,
    /// `<Tx, x>` as computed.
    pub value: C64,
}

/// A unit vector on fresh tail coordinates with `|<Tx, x> - target| <= tol`.
pub fn we_vector(
    model: &OperatorModel,
    target: C64,
    tol: f64,
    forbidden: &HashSet<usize>,
) -> Result<WeVector> {
    we_vector_from(model, target, tol, forbidden, 0)
}

/// As [`we_vector`], scanning tail indices from `start` onward.
pub fn we_vector_from(
    model: &OperatorModel,
    target: C64,
    tol: f64,
    forbidden: &HashSet<usize>,
    start: usize,
) -> Result<WeVector> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let we = essential_range(model);
    let dist = we.distance(target);
    if dist > tol {
        return Err(Error::OutsideRange { distance: dist });
    }
    let q = we.nearest(target);
    let eta = 0.5 * (tol - dist);
    let weights = caratheodory(model.limit_points(), q);

    let h = model.head_dim();
    let mut chosen: Vec<(usize, C64, f64)> = Vec::with_capacity(weights.len());
    for &(p, w) in &weights {
        let point = model.limit_points()[p];
        let taken: Vec<usize> = chosen.iter().map(|c| c.0).collect();
        let j = find_coordinate(model, point, eta, start, |g| {
            forbidden.contains(&g) || taken.contains(&g)
        })?;
        chosen.push((h + j, model.tail_entry(j)?, w));
    }

    // weights that hit q exactly with the entries actually found
    let entries: Vec<C64> = chosen.iter().map(|c| c.1).collect();
    let exact = match entries.len() {
        1 => None,
        2 => {
            let s = segment_param(entries[0], entries[1], q);
            Some(vec![1.0 - s, s])
        }
        _ => barycentric(entries[0], entries[1], entries[2], q).map(|w| w.to_vec()),
    };
    let orig: Vec<f64> = chosen.iter().map(|c| c.2).collect();
    let value_of = |w: &[f64]| -> C64 { entries.iter().zip(w).map(|(e, w)| e * *w).sum() };
    let w = match exact {
        Some(w) if (value_of(&w) - q).norm() < (value_of(&orig) - q).norm() => w,
        _ => orig,
    };

    let vector = SparseVector::from_entries(
        chosen
            .iter()
            .zip(&w)
            .filter(|(_, &w)| w > 0.0)
            .map(|(c, &w)| (c.0, C64::new(w.sqrt(), 0.0)))
            .collect(),
    );
    let vector = vector.normalized().ok_or_else(|| {
        Error::NumericalBreakdown("essential-range vector vanished".into())
    })?;
    let value = model.quadratic_form(&vector)?;
    if (value - target).norm() > tol {
        return Err(Error::NumericalBreakdown(format!(
            "essential-range vector misses target by {:e}",
            (value - target).norm()
        )));
    }
    let support = vector.support().collect();
    Ok(WeVector {
        vector,
        support,
        value,
    })
}

/// First tail index `j >= start` whose entry is within `eta` of `point` and
/// whose global coordinate is not excluded.
pub(crate) fn find_coordinate(
    model: &OperatorModel,
    point: C64,
    eta: f64,
    start: usize,
    excluded: impl Fn(usize) -> bool,
) -> Result<usize> {
    let h = model.head_dim();
    let limit = model.truncation().unwrap_or(DEFAULT_SEARCH_LIMIT);
    for j in start..limit {
        if excluded(h + j) {
            continue;
        }
        if (model.tail_entry(j)? - point).norm() <= eta {
            return Ok(j);
        }
    }
    Err(Error::ExhaustedTail {
        needed: limit,
        truncation: limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::numrange::model::TailStream;
    use crate::numrange::polygon::PolygonKind;
    use num_rational::Rational64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn halving() -> OperatorModel {
        OperatorModel::diagonal(
            vec![TailStream::Geometric {
                c: c(1.0, 0.0),
                ratio: Rational64::new(1, 2),
            }],
            vec![c(0.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn halving_sequence_has_point_range() {
        let p = essential_range(&halving());
        assert_eq!(p.kind(), PolygonKind::Point);
        assert_eq!(p.vertices()[0], c(0.0, 0.0));
    }

    #[test]
    fn head_does_not_matter() {
        let m = halving();
        let a = m.with_head(ComplexMatrix::real_diagonal(&[5.0, -3.0]));
        let b = m.with_head(ComplexMatrix::from_real_rows(&[&[0.0, 9.0], &[1.0, 0.0]]).unwrap());
        assert_eq!(essential_range(&a), essential_range(&b));
    }

    #[test]
    fn limit_point_target_uses_one_coordinate() {
        let m = halving();
        let x = we_vector(&m, c(0.0, 0.0), 1e-6, &HashSet::new()).unwrap();
        assert_eq!(x.support.len(), 1);
        assert!(x.value.norm() <= 1e-6);
    }

    #[test]
    fn midpoint_uses_two_coordinates() {
        let m = OperatorModel::diagonal(
            vec![TailStream::Periodic(vec![c(0.0, 0.0), c(1.0, 0.0)])],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let forbidden: HashSet<usize> = [0, 1, 3].into_iter().collect();
        let x = we_vector(&m, c(0.5, 0.0), 1e-10, &forbidden).unwrap();
        assert_eq!(x.support, vec![2, 5]);
        assert!((x.value - 0.5).norm() < 1e-15);
        assert!(matches!(
            we_vector(&m, c(0.5, 0.2), 1e-3, &forbidden),
            Err(Error::OutsideRange { .. })
        ));
    }

    #[test]
    fn caratheodory_triangle() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        let w = caratheodory(&pts, c(0.25, 0.25));
        let z: C64 = w.iter().map(|&(i, w)| pts[i] * w).sum();
        assert!((z - c(0.25, 0.25)).norm() < 1e-15);
        assert!(w.len() == 3);
    }
}
