//! Exact integer matrices behind the standard counterexamples.

use super::tuple::OperatorTuple;
use crate::linalg::ComplexMatrix;

/// Default size of the zero block in `T ⊕ 0`.
pub const DEFAULT_EMBEDDING: usize = 4;

fn unit(dim: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    m[(i, j)] = crate::linalg::matrix::ONE;
    m
}

/// Matrix units `E_13`, `E_14`, `E_23` on `ℂ^4` (1-based). Every product
/// `T_j T_k` vanishes, so the triple commutes, yet its joint numerical
/// range is not convex.
pub fn commuting_triple() -> OperatorTuple {
    OperatorTuple::new(vec![unit(4, 0, 2), unit(4, 0, 3), unit(4, 1, 2)]).expect("same dims")
}

/// The triple direct-summed with `0` on `ℂ^f`.
pub fn commuting_triple_embedded(f: usize) -> OperatorTuple {
    commuting_triple().embed_zero(f)
}

/// `T_1 = [[0,0],[1,0]]`, `T_2 = diag(1,-1)`: both traceless, but `(0, 0)`
/// is at distance `1/2` from their joint range.
pub fn traceless_pair() -> OperatorTuple {
    OperatorTuple::new(vec![unit(2, 1, 0), ComplexMatrix::real_diagonal(&[1.0, -1.0])])
        .expect("same dims")
}

/// `S_i = T_i ⊕ 0_f` for the traceless pair.
pub fn traceless_pair_embedded(f: usize) -> OperatorTuple {
    traceless_pair().embed_zero(f)
}

/// Every catalog entry by name.
pub fn catalog() -> Vec<(&'static str, OperatorTuple)> {
    vec![
        ("commuting-triple", commuting_triple()),
        (
            "commuting-triple-embedded",
            commuting_triple_embedded(DEFAULT_EMBEDDING),
        ),
        ("traceless-pair", traceless_pair()),
        ("traceless-pair-embedded", traceless_pair_embedded(DEFAULT_EMBEDDING)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn triple_products_vanish() {
        let t = commuting_triple();
        for a in t.members() {
            for b in t.members() {
                assert_eq!(a.matmul(b).unwrap(), ComplexMatrix::zeros(4));
            }
        }
        assert!(t.commutator_norms().iter().all(|&(_, n)| n == 0.0));
    }

    #[test]
    fn pair_is_traceless() {
        for m in traceless_pair().members() {
            assert_eq!(m.trace(), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn embedded_pair_partial_sums_vanish_after_two() {
        let s = traceless_pair_embedded(DEFAULT_EMBEDDING);
        for m in s.members() {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..m.dim() {
                acc += m[(k, k)];
                if k >= 1 {
                    assert_eq!(acc, C64::new(0.0, 0.0));
                }
            }
        }
        assert_eq!(catalog().len(), 4);
    }
}
