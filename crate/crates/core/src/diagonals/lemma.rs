//! Enlarging a finite-dimensional subspace to one whose compression has
//! (nearly) zero trace, given a constant-`α` diagonal basis with `α < 0` and
//! a point `β > 0` of the essential range.

use super::chunks::ConstantDiagonalStream;
use crate::error::{Error, Result};
use crate::linalg::{SparseFrame, SparseVector, C64};
use crate::numrange::{we_vector_from, OperatorModel};

#[derive(Debug, Clone)]
pub struct Extension {
    /// `M'`: the vectors of `M`, then `C = L ⊖ P_L M`, then the fresh vectors.
    pub frame: SparseFrame,
    /// Distance bound met by every vector of `M` against `L`.
    pub delta: f64,
    /// Number `k` of α-vectors spanning `L`.
    pub alpha_count: usize,
    /// `dim C = k - dim M`.
    pub complement: usize,
    /// `tr(P_K T P_K)` for `K = M ⊕ C`, as computed.
    pub tau: C64,
    pub n: usize,
    pub gamma: f64,
    /// `tr(P_{M'} T P_{M'})`, summed in frame order.
    pub trace: C64,
}

impl Extension {
    fn empty() -> Self {
        Self {
            frame: SparseFrame::new(),
            delta: 0.0,
            alpha_count: 0,
            complement: 0,
            tau: C64::new(0.0, 0.0),
            n: 0,
            gamma: 0.0,
            trace: C64::new(0.0, 0.0),
        }
    }
}

/// Residual below which a vector counts as lying in the span already built.
const DEPENDENT: f64 = 1e-6;

/// `M' ⊇ M` with `|tr(P_{M'} T P_{M'})| <= eps`. `M` must be orthonormal.
pub fn subspace_extension(
    model: &OperatorModel,
    alpha_stream: &mut ConstantDiagonalStream,
    m: &SparseFrame,
    alpha: f64,
    beta: f64,
    eps: f64,
) -> Result<Extension> {
    if !(alpha < 0.0 && beta > 0.0) {
        return Err(Error::BadSignConfiguration { alpha, beta });
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let dim_m = m.len();
    if dim_m == 0 {
        return Ok(Extension::empty());
    }
    if !alpha_stream.spans_tail() || model.head_dim() > 0 {
        return Err(Error::InvalidInput(
            "the constant-diagonal stream does not span the whole space".into(),
        ));
    }

    let norm = model.operator_norm().max(1.0);
    let mut delta = eps / (16.0 * dim_m as f64 * norm);
    let cap = 4 * (m.max_index().unwrap_or(0) + 1) + 4096;

    // P_L e_j and 1 - |P_L e_j|^2, updated as L grows
    let mut proj = vec![SparseVector::new(); dim_m];
    let mut resid2 = vec![1.0; dim_m];
    let mut done = vec![false; dim_m];
    let mut remaining = dim_m;
    let mut k = 0;
    let within = |j: usize, proj: &[SparseVector], resid2: &[f64], delta: f64| -> bool {
        resid2[j] <= 4.0 * delta * delta + 1e-12
            && m.get(j).add_scaled(C64::new(-1.0, 0.0), &proj[j]).norm() < delta
    };
    loop {
        if remaining == 0 {
            if gram_lower_bound(&proj) >= 0.5 {
                break;
            }
            delta *= 0.5;
            for j in 0..dim_m {
                done[j] = within(j, &proj, &resid2, delta);
            }
            remaining = done.iter().filter(|d| !**d).count();
            continue;
        }
        if k >= cap {
            return Err(Error::ExhaustedTail {
                needed: k,
                truncation: cap,
            });
        }
        let u = alpha_stream.get(k)?.clone();
        check_alpha_value(model, &u, alpha, eps)?;
        k += 1;
        for j in m.overlapping(&u) {
            let c = m.get(j).inner(&u);
            proj[j] = proj[j].add_scaled(c, &u);
            resid2[j] -= c.norm_sqr();
            if !done[j] && within(j, &proj, &resid2, delta) {
                done[j] = true;
                remaining -= 1;
            }
        }
    }

    // orthonormal basis of P_L M, then C = L ⊖ P_L M
    let mut span = SparseFrame::new();
    for p in &proj {
        let f = span
            .orthogonalize(p)
            .normalized()
            .ok_or_else(|| Error::NumericalBreakdown("projection of M collapsed".into()))?;
        span.push(f);
    }
    let mut complement = Vec::new();
    let take = |u: &SparseVector, span: &mut SparseFrame, complement: &mut Vec<SparseVector>| {
        let r = span.orthogonalize(u);
        if r.norm() > DEPENDENT {
            let c = r.normalized().expect("nonzero residual");
            span.push(c.clone());
            complement.push(c);
        }
    };
    for i in 0..k {
        let u = alpha_stream.get(i)?.clone();
        take(&u, &mut span, &mut complement);
    }
    if complement.len() != k - dim_m {
        return Err(Error::NumericalBreakdown(format!(
            "complement has dimension {} instead of {}",
            complement.len(),
            k - dim_m
        )));
    }

    let mut tau = C64::new(0.0, 0.0);
    for v in m.vectors().iter().chain(&complement) {
        tau += model.quadratic_form(v)?;
    }
    // too little negative trace: widen L until it is negative
    while tau.re > 0.0 {
        if k >= cap {
            return Err(Error::ExhaustedTail {
                needed: k,
                truncation: cap,
            });
        }
        let u = alpha_stream.get(k)?.clone();
        check_alpha_value(model, &u, alpha, eps)?;
        k += 1;
        let before = complement.len();
        take(&u, &mut span, &mut complement);
        if complement.len() > before {
            tau += model.quadratic_form(&complement[before])?;
        }
    }

    let magnitude = tau.re.abs();
    let n = (magnitude / beta).floor() as usize;
    let gamma = magnitude - n as f64 * beta;
    let x_tol = eps / (2.0 * (n + 1) as f64);

    let h = model.head_dim();
    let mut used_max = m.max_index().unwrap_or(0);
    for i in 0..k {
        used_max = used_max.max(alpha_stream.get(i)?.max_index().unwrap_or(0));
    }
    let none = std::collections::HashSet::new();
    let mut start = (used_max + 1).saturating_sub(h);
    let mut fresh = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let target = C64::new(if i < n { beta } else { gamma }, 0.0);
        let x = we_vector_from(model, target, x_tol, &none, start)?;
        start = (x.vector.max_index().unwrap_or(0) + 1).saturating_sub(h);
        fresh.push(x);
    }

    let mut frame = SparseFrame::new();
    let mut trace = C64::new(0.0, 0.0);
    for v in m.vectors().iter().chain(&complement) {
        frame.push(v.clone());
    }
    trace += tau;
    for x in fresh {
        trace += x.value;
        frame.push(x.vector);
    }
    if trace.norm() > eps {
        return Err(Error::NumericalBreakdown(format!(
            "extension trace {:e} exceeds {eps:e}",
            trace.norm()
        )));
    }
    Ok(Extension {
        frame,
        delta,
        alpha_count: k,
        complement: complement.len(),
        tau,
        n,
        gamma,
        trace,
    })
}

fn check_alpha_value(model: &OperatorModel, u: &SparseVector, alpha: f64, eps: f64) -> Result<()> {
    let v = model.quadratic_form(u)?;
    if (v - alpha).norm() > 0.1 * eps {
        return Err(Error::InvalidInput(format!(
            "constant-diagonal vector has value {v}, not {alpha}"
        )));
    }
    Ok(())
}

/// Gershgorin lower bound on the smallest eigenvalue of the Gram matrix.
fn gram_lower_bound(vectors: &[SparseVector]) -> f64 {
    let mut index = SparseFrame::new();
    for v in vectors {
        index.push(v.clone());
    }
    let mut bound = f64::INFINITY;
    for (j, v) in vectors.iter().enumerate() {
        let mut off = 0.0;
        for l in index.overlapping(v) {
            if l != j {
                off += v.inner(&vectors[l]).norm();
            }
        }
        bound = bound.min(v.norm().powi(2) - off);
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numrange::TailStream;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn spike_model() -> OperatorModel {
        let mut period = vec![c(-17.0)];
        period.extend(std::iter::repeat(c(1.0)).take(8));
        OperatorModel::diagonal(vec![TailStream::Periodic(period)], vec![c(-17.0), c(1.0)]).unwrap()
    }

    #[test]
    fn empty_subspace_stays_empty() {
        let model = spike_model();
        let mut s = ConstantDiagonalStream::new(&model, c(-1.0), 1e-12).unwrap();
        let e = subspace_extension(&model, &mut s, &SparseFrame::new(), -1.0, 1.0, 0.1).unwrap();
        assert!(e.frame.is_empty());
    }

    #[test]
    fn positive_alpha_is_rejected() {
        let model = spike_model();
        let mut s = ConstantDiagonalStream::new(&model, c(-1.0), 1e-12).unwrap();
        let r = subspace_extension(&model, &mut s, &SparseFrame::new(), 0.5, 1.0, 0.1);
        assert!(matches!(r, Err(Error::BadSignConfiguration { .. })));
    }

    #[test]
    fn one_vector_extension() {
        let model = spike_model();
        let mut s = ConstantDiagonalStream::new(&model, c(-1.0), 1e-12).unwrap();
        let mut m = SparseFrame::new();
        m.push(SparseVector::basis(0));
        let e = subspace_extension(&model, &mut s, &m, -1.0, 1.0, 0.05).unwrap();
        assert!(e.trace.norm() <= 0.05);
        assert!(e.gamma >= 0.0 && e.gamma < 1.0);
        assert!(e.frame.orthonormality_defect() < 1e-12);
        let back = e.frame.project(&SparseVector::basis(0));
        assert!((back.norm() - 1.0).abs() < 1e-12);
    }
}
