//! Exact decision procedure for diagonals of orthogonal projections: `d` is
//! such a diagonal iff `a(d) + b(d) = ∞` or `a(d) - b(d)` is an integer, with
//! `a(d) = Σ_{d_j < 1/2} d_j` and `b(d) = Σ_{d_j >= 1/2} (1 - d_j)`.

pub mod criterion;
pub mod seq;

pub use criterion::{
    decide, decide_with, same_projection_class, sums, sums_with, traces, Convention, Decision, Extended,
    KadisonSums,
};
pub use seq::{midpoint, DiagonalSeq, SeqStream};

use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(0, 1, 0, 1, …)`
pub fn d1() -> DiagonalSeq {
    DiagonalSeq::new(
        Vec::new(),
        vec![SeqStream::Constant(q(0, 1)), SeqStream::Constant(q(1, 1))],
    )
    .expect("valid")
}

/// `(1/2, 1, 1/4, 1, 1/8, …)`
pub fn d2() -> DiagonalSeq {
    DiagonalSeq::new(
        Vec::new(),
        vec![
            SeqStream::Geometric {
                c: q(1, 2),
                r: q(1, 2),
            },
            SeqStream::Constant(q(1, 1)),
        ],
    )
    .expect("valid")
}

/// `(1/4, 1, 1/8, 1, …)`, the average of [`d1`] and [`d2`].
pub fn d0() -> DiagonalSeq {
    DiagonalSeq::new(
        Vec::new(),
        vec![
            SeqStream::Geometric {
                c: q(1, 4),
                r: q(1, 2),
            },
            SeqStream::Constant(q(1, 1)),
        ],
    )
    .expect("valid")
}

/// Named sequences used in checks and examples.
pub fn catalog() -> Vec<(&'static str, DiagonalSeq)> {
    vec![
        ("d1", d1()),
        ("d2", d2()),
        ("d0", d0()),
        (
            "constant-third",
            DiagonalSeq::new(Vec::new(), vec![SeqStream::Constant(q(1, 3))]).expect("valid"),
        ),
        (
            "halves-prefix",
            DiagonalSeq::new(
                vec![q(1, 2), q(1, 2), q(1, 2)],
                vec![SeqStream::Constant(q(0, 1))],
            )
            .expect("valid"),
        ),
        (
            "finite-rank-two",
            DiagonalSeq::finite(vec![q(1, 2), q(1, 2), q(1, 1)]).expect("valid"),
        ),
    ]
}
