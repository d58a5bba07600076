//! Nested subspaces with shrinking compressed traces, and the affine reduction
//! that turns `tα + (1-t)β` into `0`.

use super::chunks::ConstantDiagonalStream;
use super::lemma::subspace_extension;
use super::report::{Basis, DiagonalReport};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, SparseFrame, SparseVector, C64};
use crate::numrange::{boundary_polygon, essential_range, Membership, OperatorModel, Polygon2D};

/// Tolerance for the constant-α stream behind a fan construction.
pub const ALPHA_TOL: f64 = 1e-12;

/// Residual below which a reference vector already lies in `M_k`.
const IN_SPAN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FanLevel {
    pub level: usize,
    /// `dim M_k`
    pub dim: usize,
    /// `tr(P_{M_k} T P_{M_k})`, equal to the partial sum at `dim`.
    pub trace: C64,
    pub eps: f64,
    pub alpha_count: usize,
    pub n: usize,
    pub gamma: f64,
}

/// `(a, b)` with `aα + b = -(1-t)` and `aβ + b = t`.
pub fn affine_normalize(alpha: C64, beta: C64, t: f64) -> Result<(C64, C64)> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidInput(format!("t = {t} must lie in (0, 1)")));
    }
    if alpha == beta {
        return Err(Error::DegeneratePair);
    }
    let a = C64::new(1.0, 0.0) / (beta - alpha);
    let b = C64::new(t, 0.0) - a * beta;
    let scale = 1.0 + alpha.norm().max(beta.norm()) * a.norm();
    let miss = (a * alpha + b + (1.0 - t)).norm().max((a * beta + b - t).norm());
    if miss > 1e-12 * scale {
        return Err(Error::NumericalBreakdown(format!(
            "affine normalization misses by {miss:e}"
        )));
    }
    Ok((a, b))
}

/// Nested frames `M_1 ⊂ … ⊂ M_levels` with `e_k ∈ M_k` and
/// `|tr(P_{M_k} T P_{M_k})| < 1/k`, concatenated into one orthonormal sequence.
pub fn fan_construct(model: &OperatorModel, alpha: f64, beta: f64, levels: usize) -> Result<DiagonalReport> {
    Ok(fan_construct_traced(model, alpha, beta, levels)?.0)
}

pub fn fan_construct_traced(
    model: &OperatorModel,
    alpha: f64,
    beta: f64,
    levels: usize,
) -> Result<(DiagonalReport, Vec<FanLevel>)> {
    if !(alpha < 0.0 && beta > 0.0) {
        return Err(Error::BadSignConfiguration { alpha, beta });
    }
    let mut stream = ConstantDiagonalStream::new(model, C64::new(alpha, 0.0), ALPHA_TOL)?;
    fan_construct_with(model, &mut stream, alpha, beta, levels)
}

/// As [`fan_construct_traced`] with a caller-supplied α-stream, whose vectors
/// must have diagonal value `alpha` on `model`.
pub fn fan_construct_with(
    model: &OperatorModel,
    stream: &mut ConstantDiagonalStream,
    alpha: f64,
    beta: f64,
    levels: usize,
) -> Result<(DiagonalReport, Vec<FanLevel>)> {
    if !(alpha < 0.0 && beta > 0.0) {
        return Err(Error::BadSignConfiguration { alpha, beta });
    }
    let mut m = SparseFrame::new();
    let mut records = Vec::with_capacity(levels);
    for level in 1..=levels {
        let e = SparseVector::basis(level - 1);
        let r = m.orthogonalize(&e);
        if r.norm() > IN_SPAN {
            m.push(r.normalized().expect("nonzero residual"));
        }
        let eps = 0.5 / level as f64;
        let ext = subspace_extension(model, stream, &m, alpha, beta, eps)?;
        if !(ext.trace.norm() < 1.0 / level as f64) {
            return Err(Error::NumericalBreakdown(format!(
                "level {level} trace {:e} is not below 1/{level}",
                ext.trace.norm()
            )));
        }
        m = ext.frame;
        records.push(FanLevel {
            level,
            dim: m.len(),
            trace: ext.trace,
            eps,
            alpha_count: ext.alpha_count,
            n: ext.n,
            gamma: ext.gamma,
        });
    }

    let vectors = m.vectors().to_vec();
    let values = vectors
        .iter()
        .map(|v| model.quadratic_form(v))
        .collect::<Result<Vec<_>>>()?;
    let checkpoints = records.iter().map(|r| r.dim).collect();
    let report = DiagonalReport::new(Basis::Sparse(vectors), values, None, checkpoints);
    // the traces reported are the partial sums of the concatenated sequence
    for r in &mut records {
        r.trace = report.partial_sum(r.dim);
        if !(r.trace.norm() < 1.0 / r.level as f64) {
            return Err(Error::NumericalBreakdown(format!(
                "checkpoint {} has |S| = {:e}",
                r.dim,
                r.trace.norm()
            )));
        }
    }
    Ok((report, records))
}

/// A nested-basis witness for `tα + (1-t)β`: the fan construction for
/// `aT + bI`, where `α` comes from a constant diagonal of `T` and `β` from
/// its essential range. The report's values are those of `aT + bI`.
pub fn convex_comb_diag(
    model: &OperatorModel,
    alpha: C64,
    beta: C64,
    t: f64,
    levels: usize,
) -> Result<DiagonalReport> {
    Ok(convex_comb_diag_traced(model, alpha, beta, t, levels)?.0)
}

pub fn convex_comb_diag_traced(
    model: &OperatorModel,
    alpha: C64,
    beta: C64,
    t: f64,
    levels: usize,
) -> Result<(DiagonalReport, Vec<FanLevel>)> {
    let (a, b) = affine_normalize(alpha, beta, t)?;
    let we = essential_range(model);
    if !we.contains(beta, Membership::Closure, 1e-9) {
        return Err(Error::OutsideRange {
            distance: we.distance(beta),
        });
    }
    let mut stream = ConstantDiagonalStream::new(model, alpha, ALPHA_TOL)?;
    let shifted = model.affine(a, b);
    fan_construct_with(&shifted, &mut stream, -(1.0 - t), t, levels)
}

/// Whether the constant value of `report` lies in the relative interior of
/// the (sampled) numerical range of `t`.
pub fn dconst_in_relint_check(t: &ComplexMatrix, report: &DiagonalReport, tol: f64) -> bool {
    match boundary_polygon(t, crate::numrange::DEFAULT_ANGLES) {
        Ok(poly) => poly.contains(report.mean_value(), Membership::RelativeInterior, tol),
        Err(_) => false,
    }
}

/// Model version: the range is the hull of the head's range and the tail.
pub fn dconst_in_relint_check_model(model: &OperatorModel, report: &DiagonalReport, tol: f64) -> bool {
    let mut points = model.tail_extremes();
    if model.head_dim() > 0 {
        match boundary_polygon(model.head(), crate::numrange::DEFAULT_ANGLES) {
            Ok(p) => points.extend_from_slice(p.vertices()),
            Err(_) => return false,
        }
    }
    match Polygon2D::hull(&points) {
        Ok(poly) => poly.contains(report.mean_value(), Membership::RelativeInterior, tol),
        Err(_) => false,
    }
}
