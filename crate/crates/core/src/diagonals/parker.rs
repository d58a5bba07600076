//! Constant diagonals in finite dimensions. The only possible constant is
//! `tr T / N`; it is realized by repeatedly finding a unit vector attaining
//! the mean, completing it to a basis, and recursing on the compression to
//! its orthogonal complement (whose mean is unchanged).

use super::report::{Basis, DiagonalReport};
use crate::error::{Error, Result};
use crate::linalg::frame::OrthonormalFrame;
use crate::linalg::{compress, householder_complement, ComplexMatrix, C64};
use crate::numrange::inverse_numrange;

pub fn constant_diag_value(t: &ComplexMatrix) -> C64 {
    t.trace() / t.dim() as f64
}

/// A full orthonormal basis on which every diagonal entry of `T` is within
/// `tol` of `tr T / N`.
pub fn parker_basis(t: &ComplexMatrix, tol: f64) -> Result<DiagonalReport> {
    Ok(parker_basis_traced(t, tol)?.0)
}

/// As [`parker_basis`], also returning `|Σ_{j<=d} <T u_j,u_j> + tr T_d - tr T|`
/// after each recursion depth `d`, where `T_d` is the remaining compression.
pub fn parker_basis_traced(t: &ComplexMatrix, tol: f64) -> Result<(DiagonalReport, Vec<f64>)> {
    let n = t.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let lambda = constant_diag_value(t);
    let total = t.trace();
    let inner_tol = 0.25 * tol;

    // columns of the running isometry from the current compression into ℂ^N
    let mut q: Vec<Vec<C64>> = OrthonormalFrame::standard(n).into_vectors();
    let mut tc = t.clone();
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut acc = C64::new(0.0, 0.0);
    let mut drift = Vec::with_capacity(n);

    while tc.dim() > 1 {
        let m = tc.dim();
        let u = inverse_numrange(&tc, lambda, inner_tol).map_err(|e| match e {
            Error::OutsideRange { distance } => Error::NumericalBreakdown(format!(
                "mean left the numerical range of a {m}-dimensional compression by {distance:e}"
            )),
            other => other,
        })?;
        let u = u.into_inner();
        acc += tc.quadratic_form(&u);
        out.push(combine(&q, &u));

        let comp = householder_complement(&u);
        let next_q: Vec<Vec<C64>> = comp.iter().map(|c| combine(&q, c)).collect();
        tc = compress(&tc, &OrthonormalFrame::new_unchecked(m, comp))?;
        q = next_q;
        drift.push((acc + tc.trace() - total).norm());
    }
    acc += tc[(0, 0)];
    out.push(q.pop().expect("one column left"));
    drift.push((acc - total).norm());

    let frame = OrthonormalFrame::new(n, out)?;
    let values: Vec<C64> = frame.vectors().iter().map(|v| t.quadratic_form(v)).collect();
    let report = DiagonalReport::new(Basis::Dense(frame), values, Some(lambda), Vec::new());
    if report.max_deviation > tol {
        return Err(Error::NumericalBreakdown(format!(
            "diagonal deviates from the mean by {:e}",
            report.max_deviation
        )));
    }
    Ok((report, drift))
}

/// `Σ_i coeffs_i · cols_i`
fn combine(cols: &[Vec<C64>], coeffs: &[C64]) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); cols[0].len()];
    for (col, &c) in cols.iter().zip(coeffs) {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        for (vi, x) in v.iter_mut().zip(col) {
            *vi += c * x;
        }
    }
    v
}
