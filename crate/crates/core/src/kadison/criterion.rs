use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::seq::{DiagonalSeq, SeqStream};
use crate::error::{Error, Result};

/// A nonnegative exact rational or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(BigRational),
    Infinite,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(BigRational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    fn add(&mut self, x: &BigRational) {
        if let Extended::Finite(v) = self {
            *v += x;
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// Which bucket an entry equal to `1/2` joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `a` sums `d_j < 1/2`, `b` sums `1 - d_j` over `d_j >= 1/2`.
    #[default]
    Strict,
    /// `a` sums `d_j <= 1/2`, `b` sums `1 - d_j` over `d_j > 1/2`.
    LeHalf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KadisonSums {
    pub a: Extended,
    pub b: Extended,
    /// Entries equal to exactly `1/2`, or `None` when there are infinitely many.
    pub halves: Option<usize>,
    pub convention: Convention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Diagonal,
    NotDiagonal,
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

pub fn sums(d: &DiagonalSeq) -> KadisonSums {
    sums_with(d, Convention::Strict)
}

pub fn sums_with(d: &DiagonalSeq, convention: Convention) -> KadisonSums {
    let h = half();
    let one = BigRational::one();
    let in_a = |x: &BigRational| match convention {
        Convention::Strict => x < &h,
        Convention::LeHalf => x <= &h,
    };
    let mut a = Extended::zero();
    let mut b = Extended::zero();
    let mut halves = Some(0usize);
    let bump = |x: &BigRational, halves: &mut Option<usize>| {
        if x == &h {
            if let Some(n) = halves.as_mut() {
                *n += 1;
            }
        }
    };

    for x in d.prefix() {
        bump(x, &mut halves);
        if in_a(x) {
            a.add(x);
        } else {
            b.add(&(&one - x));
        }
    }
    for s in d.tails() {
        match s {
            SeqStream::Constant(c) => {
                if c == &h {
                    halves = None;
                }
                if in_a(c) {
                    if !c.is_zero() {
                        a = Extended::Infinite;
                    }
                } else if c != &one {
                    b = Extended::Infinite;
                }
            }
            SeqStream::Geometric { c, r } => {
                // decreasing entries: finitely many go to b, the rest sum to a
                let mut x = c.clone();
                while !in_a(&x) {
                    bump(&x, &mut halves);
                    b.add(&(&one - &x));
                    x *= r;
                }
                // later entries lie strictly below x <= 1/2
                bump(&x, &mut halves);
                a.add(&(&x / (&one - r)));
            }
        }
    }
    KadisonSums {
        a,
        b,
        halves,
        convention,
    }
}

/// `a + b = ∞`, or `a - b` is an integer.
pub fn decide(d: &DiagonalSeq) -> Decision {
    decide_with(d, Convention::Strict)
}

pub fn decide_with(d: &DiagonalSeq, convention: Convention) -> Decision {
    let s = sums_with(d, convention);
    match (s.a.finite(), s.b.finite()) {
        (Some(a), Some(b)) if !(a - b).is_integer() => Decision::NotDiagonal,
        _ => Decision::Diagonal,
    }
}

/// `(Σ d_k, Σ (1 - d_k))` as extended rationals.
pub fn traces(d: &DiagonalSeq) -> (Extended, Extended) {
    let one = BigRational::one();
    let mut tr = Extended::zero();
    let mut co = Extended::zero();
    for x in d.prefix() {
        tr.add(x);
        co.add(&(&one - x));
    }
    for s in d.tails() {
        match s {
            SeqStream::Constant(c) => {
                if !c.is_zero() {
                    tr = Extended::Infinite;
                }
                if c != &one {
                    co = Extended::Infinite;
                }
            }
            SeqStream::Geometric { c, r } => {
                tr.add(&(c / (&one - r)));
                co = Extended::Infinite;
            }
        }
    }
    (tr, co)
}

/// Whether two projection diagonals come from unitarily equivalent
/// projections: equal traces of `P` and of `I - P`.
pub fn same_projection_class(d: &DiagonalSeq, e: &DiagonalSeq) -> Result<bool> {
    if decide(d) != Decision::Diagonal || decide(e) != Decision::Diagonal {
        return Err(Error::NotADiagonal);
    }
    Ok(traces(d) == traces(e))
}
