//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classical real Jacobi rotation to the resulting
//! real symmetric 2×2 block.

use super::frame::OrthonormalFrame;
use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    pub vectors: OrthonormalFrame,
}

pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = h.dim();
    let scale = 1.0 + h.max_abs();
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { asymmetry: defect });
    }

    // symmetrized working copy
    let mut a = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
        }
        a[i * n + i].im = 0.0;
    }
    let mut v = vec![ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * frob.max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|j| {
            let mut col: Vec<C64> = (0..n).map(|i| v[i * n + j]).collect();
            canonicalize_phase(&mut col);
            (a[j * n + j].re, col)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        la.partial_cmp(lb)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| leading_index(va).cmp(&leading_index(vb)))
    });

    let values = pairs.iter().map(|(l, _)| *l).collect();
    let vectors = OrthonormalFrame::new_unchecked(n, pairs.into_iter().map(|(_, v)| v).collect());
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / mag; // e^{iφ}
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    // A <- A G
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * gpp + akq * gqp;
        a[k * n + q] = akp * gpq + akq * gqq;
    }
    // A <- G^* A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = gpp.conj() * apk + gqp.conj() * aqk;
        a[q * n + k] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * gpp + vkq * gqp;
        v[k * n + q] = vkp * gpq + vkq * gqq;
    }
}

fn leading_index(v: &[C64]) -> usize {
    v.iter().position(|z| z.norm() > 1e-12).unwrap_or(0)
}

/// Rotates `v` so its first significant component is real and positive.
pub(crate) fn canonicalize_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let w = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{inner, ComplexMatrix};

    fn residual(h: &ComplexMatrix, eig: &HermitianEigen) -> f64 {
        eig.values
            .iter()
            .zip(eig.vectors.vectors())
            .map(|(&l, v)| {
                let hv = h.mul_vec(v);
                hv.iter()
                    .zip(v)
                    .map(|(a, b)| (a - b * l).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_input() {
        let h = ComplexMatrix::real_diagonal(&[1.0, -1.0]);
        let eig = herm_eig(&h).unwrap();
        assert_eq!(eig.values, vec![-1.0, 1.0]);
        let v = eig.vectors.vectors();
        assert!((v[0][1].re - 1.0).abs() < 1e-15);
        assert!((v[1][0].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn swap_matrix() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = herm_eig(&h).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!(residual(&h, &eig) < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let eig = herm_eig(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
        assert!(eig.vectors.orthonormality_defect() < 1e-15);
    }

    #[test]
    fn complex_hermitian_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let h = ComplexMatrix::from_rows(vec![
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let eig = herm_eig(&h).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
        assert!(residual(&h, &eig) < 1e-12);
        let v = eig.vectors.vectors();
        assert!(inner(&v[0], &v[1]).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(herm_eig(&t), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn phase_is_canonical() {
        let h = ComplexMatrix::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(0.3, -0.7)],
            vec![C64::new(0.3, 0.7), C64::new(-2.0, 0.0)],
        ])
        .unwrap();
        let eig = herm_eig(&h).unwrap();
        for v in eig.vectors.vectors() {
            let lead = v.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
        }
    }
}
