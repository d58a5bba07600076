use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A closed-form tail with exact rational parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqStream {
    Constant(BigRational),
    /// `c · r^k`
    Geometric { c: BigRational, r: BigRational },
}

impl SeqStream {
    pub fn entry(&self, k: usize) -> BigRational {
        match self {
            SeqStream::Constant(c) => c.clone(),
            SeqStream::Geometric { c, r } => c * pow(r, k),
        }
    }

    /// The stream restricted to positions `offset + m·step`.
    fn subsample(&self, offset: usize, step: usize) -> Self {
        match self {
            SeqStream::Constant(c) => SeqStream::Constant(c.clone()),
            SeqStream::Geometric { c, r } => SeqStream::Geometric {
                c: c * pow(r, offset),
                r: pow(r, step),
            },
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            SeqStream::Constant(c) => c.is_zero(),
            SeqStream::Geometric { c, .. } => c.is_zero(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SeqStream::Constant(c) => in_unit(c),
            SeqStream::Geometric { c, r } => {
                in_unit(c)?;
                if !(r > &BigRational::zero() && r < &BigRational::one()) {
                    return Err(Error::InvalidInput(format!("geometric ratio {r} must lie in (0, 1)")));
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn pow(r: &BigRational, k: usize) -> BigRational {
    let mut out = BigRational::one();
    let mut base = r.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            out *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    out
}

fn in_unit(x: &BigRational) -> Result<()> {
    if x < &BigRational::zero() || x > &BigRational::one() {
        return Err(Error::OutOfRangeEntry { entry: x.to_string() });
    }
    Ok(())
}

/// `prefix` followed by the tails interleaved: tail entry `j` is position
/// `j / k` of stream `j % k`. Without tails the sequence is finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalSeq {
    prefix: Vec<BigRational>,
    tails: Vec<SeqStream>,
}

impl DiagonalSeq {
    pub fn new(prefix: Vec<BigRational>, tails: Vec<SeqStream>) -> Result<Self> {
        for x in &prefix {
            in_unit(x)?;
        }
        for s in &tails {
            s.validate()?;
        }
        Ok(Self { prefix, tails })
    }

    pub fn finite(entries: Vec<BigRational>) -> Result<Self> {
        Self::new(entries, Vec::new())
    }

    pub fn prefix(&self) -> &[BigRational] {
        &self.prefix
    }

    pub fn tails(&self) -> &[SeqStream] {
        &self.tails
    }

    /// Number of interleaved tail streams.
    pub fn interleave(&self) -> usize {
        self.tails.len()
    }

    pub fn is_finite(&self) -> bool {
        self.tails.is_empty()
    }

    /// Entry `i`, or `None` past the end of a finite sequence.
    pub fn entry(&self, i: usize) -> Option<BigRational> {
        if i < self.prefix.len() {
            return Some(self.prefix[i].clone());
        }
        if self.tails.is_empty() {
            return None;
        }
        let j = i - self.prefix.len();
        let k = self.tails.len();
        Some(self.tails[j % k].entry(j / k))
    }

    /// The first `n` entries (fewer for a short finite sequence).
    pub fn take(&self, n: usize) -> Vec<BigRational> {
        (0..n).map_while(|i| self.entry(i)).collect()
    }

    /// The same sequence with a prefix of length `p >= prefix.len()` and
    /// `arity` streams, `arity` a multiple of the current number of streams.
    fn reshape(&self, p: usize, arity: usize) -> Self {
        let k = self.tails.len();
        let prefix = self.take(p);
        let tails = (0..arity)
            .map(|rho| {
                let j = p - self.prefix.len() + rho;
                self.tails[j % k].subsample(j / k, arity / k)
            })
            .collect();
        Self { prefix, tails }
    }
}

impl fmt::Display for DiagonalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.take(self.prefix.len() + 2 * self.tails.len().max(1)).iter().map(|x| x.to_string()).collect();
        write!(f, "({}", shown.join(", "))?;
        if self.tails.is_empty() {
            write!(f, ")")
        } else {
            write!(f, ", …)")
        }
    }
}

/// Entrywise average `(d + d')/2`.
pub fn midpoint(d: &DiagonalSeq, e: &DiagonalSeq) -> Result<DiagonalSeq> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    match (d.is_finite(), e.is_finite()) {
        (true, true) => {
            if d.prefix.len() != e.prefix.len() {
                return Err(Error::IncompatibleStreams(format!(
                    "finite sequences of lengths {} and {}",
                    d.prefix.len(),
                    e.prefix.len()
                )));
            }
            let prefix = d.prefix.iter().zip(&e.prefix).map(|(x, y)| (x + y) * &half).collect();
            return DiagonalSeq::finite(prefix);
        }
        (false, false) => {}
        _ => {
            return Err(Error::IncompatibleStreams(
                "a finite and an infinite sequence".into(),
            ))
        }
    }
    let p = d.prefix.len().max(e.prefix.len());
    let arity = d.tails.len().lcm(&e.tails.len());
    let (d, e) = (d.reshape(p, arity), e.reshape(p, arity));
    let prefix = d.prefix.iter().zip(&e.prefix).map(|(x, y)| (x + y) * &half).collect();
    let tails = d
        .tails
        .iter()
        .zip(&e.tails)
        .map(|(s, t)| average(s, t, &half))
        .collect::<Result<Vec<_>>>()?;
    DiagonalSeq::new(prefix, tails)
}

fn average(s: &SeqStream, t: &SeqStream, half: &BigRational) -> Result<SeqStream> {
    use SeqStream::*;
    Ok(match (s, t) {
        (Constant(a), Constant(b)) => Constant((a + b) * half),
        (Geometric { c, r }, other) | (other, Geometric { c, r }) if other.is_zero() => Geometric {
            c: c * half,
            r: r.clone(),
        },
        (Geometric { c: a, r }, Geometric { c: b, r: q }) if r == q => Geometric {
            c: (a + b) * half,
            r: r.clone(),
        },
        _ => {
            return Err(Error::IncompatibleStreams(format!(
                "cannot average {s:?} and {t:?} as one closed-form stream"
            )))
        }
    })
}
