//! Inverse numerical range: given `λ ∈ W(T)`, find a unit `u` with
//! `<Tu, u> = λ`.
//!
//! Candidate points with known attaining vectors are collected (diagonal
//! entries first, then support points of `W(T)`), `λ` is located in a fan
//! triangle of their hull, and the answer is assembled from closed-form
//! solutions of the two-vector problem along chords.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::polygon::{hull_indices, Polygon2D};
use super::support::{support_point, SupportPoint};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, inner, norm, ComplexMatrix, UnitVector, C64};

const MAX_ROUNDS: usize = 64;
const MAX_SAMPLES: usize = 4096;
const DEGENERATE_TOL: f64 = 1e-10;

/// A vector together with the value it attains.
#[derive(Debug, Clone)]
struct Attained {
    z: C64,
    x: Vec<C64>,
}

pub fn inverse_numrange(t: &ComplexMatrix, lambda: C64, tol: f64) -> Result<UnitVector> {
    let n = t.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) || !lambda.re.is_finite() || !lambda.im.is_finite() {
        return Err(Error::InvalidInput("tolerance and target must be finite".into()));
    }

    // a diagonal entry already attains λ
    let diag = t.diag();
    let (j, dj) = diag
        .iter()
        .enumerate()
        .map(|(j, d)| (j, (d - lambda).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty");
    if dj <= tol {
        return Ok(UnitVector::basis(n, j));
    }
    if n == 1 {
        return Err(Error::OutsideRange { distance: dj });
    }

    let u = match degenerate_range(t)? {
        Some(Degenerate::Point(c)) => {
            return Err(Error::OutsideRange {
                distance: (c - lambda).norm(),
            })
        }
        Some(Degenerate::Segment { center, phase, lo, hi }) => {
            let w = (lambda - center) * phase.conj();
            let outside = w.im.abs().max(lo.z.re - w.re).max(w.re - hi.z.re);
            if outside > tol {
                return Err(Error::OutsideRange { distance: outside });
            }
            let lo = Attained {
                z: t.quadratic_form(&lo.x),
                x: lo.x,
            };
            let hi = Attained {
                z: t.quadratic_form(&hi.x),
                x: hi.x,
            };
            mix(t, &lo, &hi, lambda)?
        }
        None => match from_diagonal(t, &diag, lambda, tol)? {
            Some(u) => u,
            None => from_support_points(t, lambda, tol)?,
        },
    };
    finish(t, u, lambda, tol)
}

fn finish(t: &ComplexMatrix, u: Vec<C64>, lambda: C64, tol: f64) -> Result<UnitVector> {
    let u = UnitVector::normalize(u)?;
    let err = (t.quadratic_form(u.as_slice()) - lambda).norm();
    if err > tol {
        return Err(Error::NumericalBreakdown(format!(
            "attained value misses target by {err:e}"
        )));
    }
    Ok(u)
}

/// The hull of the diagonal entries lies in `W(T)` and each entry is
/// attained by a basis vector, so targets inside it need no eigensolves.
fn from_diagonal(t: &ComplexMatrix, diag: &[C64], lambda: C64, tol: f64) -> Result<Option<Vec<C64>>> {
    let n = diag.len();
    let pts: Vec<Attained> = diag
        .iter()
        .enumerate()
        .map(|(j, &z)| Attained {
            z,
            x: crate::linalg::matrix::basis_vector(n, j),
        })
        .collect();
    let zs: Vec<C64> = diag.to_vec();
    let poly = Polygon2D::hull(&zs)?;
    let scale = 1.0 + zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if poly.distance(lambda) > 1e-14 * scale {
        return Ok(None);
    }
    let u = realize(t, &pts, lambda)?;
    let err = (t.quadratic_form(&u) / norm(&u).powi(2) - lambda).norm();
    Ok((err <= tol).then_some(u))
}

fn from_support_points(t: &ComplexMatrix, lambda: C64, tol: f64) -> Result<Vec<C64>> {
    let mut samples: Vec<SupportPoint> = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]
        .iter()
        .map(|&th| support_point(t, th))
        .collect::<Result<_>>()?;
    let mut last_distance = f64::INFINITY;

    for _ in 0..MAX_ROUNDS {
        for s in &samples {
            let gap = (C64::from_polar(1.0, -s.theta) * lambda).re - s.value;
            if gap > tol {
                return Err(Error::OutsideRange { distance: gap });
            }
        }
        let pts: Vec<Attained> = samples
            .iter()
            .map(|s| Attained {
                z: s.point,
                x: s.vector.as_slice().to_vec(),
            })
            .collect();
        let zs: Vec<C64> = pts.iter().map(|p| p.z).collect();
        let poly = Polygon2D::hull(&zs)?;
        last_distance = poly.distance(lambda);
        if last_distance <= 0.5 * tol {
            return realize(t, &pts, poly.nearest(lambda));
        }

        // bisect every angular interval whose chord has λ on its outer side
        let m = samples.len();
        let mut fresh = Vec::new();
        for i in 0..m {
            let (a, b) = (&samples[i], &samples[(i + 1) % m]);
            let edge = b.point - a.point;
            let outside = edge.re * (lambda - a.point).im - edge.im * (lambda - a.point).re < 0.0;
            let hi = if i + 1 == m { b.theta + TAU } else { b.theta };
            if outside && edge.norm() > 0.0 && hi - a.theta > 1e-12 {
                fresh.push(0.5 * (a.theta + hi) % TAU);
            }
        }
        if fresh.is_empty() || samples.len() + fresh.len() > MAX_SAMPLES {
            break;
        }
        for th in fresh {
            samples.push(support_point(t, th)?);
        }
        samples.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    }

    if last_distance < tol {
        let pts: Vec<Attained> = samples
            .iter()
            .map(|s| Attained {
                z: s.point,
                x: s.vector.as_slice().to_vec(),
            })
            .collect();
        let zs: Vec<C64> = pts.iter().map(|p| p.z).collect();
        let q = Polygon2D::hull(&zs)?.nearest(lambda);
        return realize(t, &pts, q);
    }
    Err(Error::NumericalBreakdown(format!(
        "support refinement stalled at distance {last_distance:e}"
    )))
}

/// Builds a vector attaining `lambda`, which must lie in the hull of `pts`
/// (it is projected onto the hull first).
fn realize(t: &ComplexMatrix, pts: &[Attained], lambda: C64) -> Result<Vec<C64>> {
    let zs: Vec<C64> = pts.iter().map(|p| p.z).collect();
    let hull = hull_indices(&zs);
    match hull.len() {
        0 => Err(Error::InvalidInput("no attained points".into())),
        1 => Ok(pts[hull[0]].x.clone()),
        2 => mix(t, &pts[hull[0]], &pts[hull[1]], lambda),
        _ => {
            let v: Vec<&Attained> = hull.iter().map(|&i| &pts[i]).collect();
            let lambda = Polygon2D::hull(&zs)?.nearest(lambda);
            let v0 = v[0];
            let d = lambda - v0.z;
            let scale = 1.0 + zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if d.norm() <= 1e-15 * scale {
                return Ok(v0.x.clone());
            }
            // fan triangle (v0, v_i, v_{i+1}) whose angular sector holds λ
            let cr = |a: C64, b: C64| a.re * b.im - a.im * b.re;
            let k = v.len();
            let i = (1..k - 1)
                .min_by(|&i, &j| {
                    let viol = |i: usize| {
                        (-cr(v[i].z - v0.z, d)).max(0.0) + cr(v[i + 1].z - v0.z, d).max(0.0)
                    };
                    viol(i).total_cmp(&viol(j))
                })
                .expect("polygon has a fan triangle");
            let (a, b) = (v[i], v[i + 1]);
            let e = b.z - a.z;
            let g = a.z - v0.z;
            let denom = cr(d, e);
            let r = if denom.abs() > 0.0 {
                (cr(g, d) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let q = a.z + e * r;
            let w = mix(t, a, b, q)?;
            let w = Attained {
                z: t.quadratic_form(&w),
                x: w,
            };
            mix(t, v0, &w, lambda)
        }
    }
}

/// Closed-form two-vector step: returns unit `x = (a + τ e^{iφ} b)/‖·‖`
/// with `<Tx, x> = λ`, for `λ` on the chord between the values of `a` and
/// `b` (projected onto it first).
fn mix(t: &ComplexMatrix, a: &Attained, b: &Attained, lambda: C64) -> Result<Vec<C64>> {
    let chord = b.z - a.z;
    let len2 = chord.norm_sqr();
    if len2 == 0.0 {
        return Ok(a.x.clone());
    }
    let s = ((lambda - a.z).re * chord.re + (lambda - a.z).im * chord.im) / len2;
    if s <= 0.0 {
        return Ok(a.x.clone());
    }
    if s >= 1.0 {
        return Ok(b.x.clone());
    }
    let lambda = a.z + chord * s;

    let omega = chord.conj() / chord.norm();
    let p = (omega * (a.z - lambda)).re;
    let q = (omega * (b.z - lambda)).re;
    let ta = t.mul_vec(&a.x);
    let tb = t.mul_vec(&b.x);
    let r1 = omega * (inner(&tb, &a.x) - lambda * inner(&b.x, &a.x));
    let r2 = omega * (inner(&ta, &b.x) - lambda * inner(&a.x, &b.x));
    let diff = r1 - r2.conj();
    let phase = if diff.norm() > 0.0 {
        diff.conj() / diff.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let s_mid = (phase * r1 + phase.conj() * r2).re;
    // positive root of qτ² + sτ + p = 0 with p < 0 < q, in stable form
    let disc = (s_mid * s_mid - 4.0 * q * p).sqrt();
    let tau = if s_mid >= 0.0 {
        -2.0 * p / (s_mid + disc)
    } else {
        (-s_mid + disc) / (2.0 * q)
    };
    let w = phase * tau;
    let x: Vec<C64> = a.x.iter().zip(&b.x).map(|(ai, bi)| ai + w * bi).collect();
    let nx = norm(&x);
    if !(nx > 1e-8) {
        return Err(Error::NumericalBreakdown("two-vector step collapsed".into()));
    }
    Ok(x.into_iter().map(|z| z / nx).collect())
}

enum Degenerate {
    Point(C64),
    /// `W(T) = center + phase·[lo, hi]`, with the real extremes stored in
    /// `lo.z.re`, `hi.z.re`.
    Segment {
        center: C64,
        phase: C64,
        lo: Attained,
        hi: Attained,
    },
}

/// Detects `T = cI + e^{iψ}A` with `A` Hermitian, where `W(T)` is a point
/// or a segment.
fn degenerate_range(t: &ComplexMatrix) -> Result<Option<Degenerate>> {
    let n = t.dim();
    let center = t.trace() / n as f64;
    let s = t.affine(C64::new(1.0, 0.0), -center);
    let fro = s.frobenius_norm();
    if fro <= 1e-14 * (1.0 + t.frobenius_norm()) {
        return Ok(Some(Degenerate::Point(center)));
    }
    let (mut bi, mut bj, mut best) = (0, 0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if s[(i, j)].norm() > best {
                best = s[(i, j)].norm();
                (bi, bj) = (i, j);
            }
        }
    }
    let mirror = s[(bj, bi)];
    if mirror.norm() == 0.0 {
        return Ok(None);
    }
    let rot2 = s[(bi, bj)] / mirror.conj();
    let rot2 = rot2 / rot2.norm();
    let sym = s.sub(&s.adjoint().scale(rot2))?;
    if sym.frobenius_norm() > DEGENERATE_TOL * (1.0 + fro) {
        return Ok(None);
    }
    let phase = rot2.sqrt();
    let a = s.scale(phase.conj());
    let a = a.add(&a.adjoint())?.scale(C64::new(0.5, 0.0));
    let eig = herm_eig(&a)?;
    let vs = eig.vectors.into_vectors();
    let lo = Attained {
        z: C64::new(eig.values[0], 0.0),
        x: vs[0].clone(),
    };
    let hi = Attained {
        z: C64::new(eig.values[n - 1], 0.0),
        x: vs[n - 1].clone(),
    };
    Ok(Some(Degenerate::Segment {
        center,
        phase,
        lo,
        hi,
    }))
}
