//! Finite head ⊕ structured diagonal tail: a stand-in for an operator on an
//! infinite-dimensional space whose essential range is known exactly.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, SparseVector, C64};

const BLOCK: usize = 256;
const LIMIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum TailStream {
    Constant(C64),
    /// Repeats `values` cyclically.
    Periodic(Vec<C64>),
    /// `c · ratio^k` with `0 < ratio < 1`.
    Geometric { c: C64, ratio: Rational64 },
}

impl TailStream {
    pub fn entry(&self, k: usize) -> C64 {
        match self {
            TailStream::Constant(c) => *c,
            TailStream::Periodic(v) => v[k % v.len()],
            TailStream::Geometric { c, ratio } => {
                let r = ratio.to_f64().unwrap_or(0.0);
                let exp = i32::try_from(k).unwrap_or(i32::MAX);
                c * r.powi(exp)
            }
        }
    }

    /// Accumulation points of the entry sequence.
    pub fn limit_points(&self) -> Vec<C64> {
        match self {
            TailStream::Constant(c) => vec![*c],
            TailStream::Periodic(v) => v.clone(),
            TailStream::Geometric { .. } => vec![C64::new(0.0, 0.0)],
        }
    }

    /// Every entry lies in the hull of these points.
    fn extreme_entries(&self) -> Vec<C64> {
        match self {
            TailStream::Geometric { c, .. } => vec![*c, C64::new(0.0, 0.0)],
            other => other.limit_points(),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        match self {
            TailStream::Constant(c) if !finite(c) => {
                Err(Error::InvalidInput("non-finite constant stream".into()))
            }
            TailStream::Periodic(v) if v.is_empty() || !v.iter().all(finite) => Err(
                Error::InvalidInput("periodic stream needs finite nonempty values".into()),
            ),
            TailStream::Geometric { c, ratio } => {
                if !finite(c) {
                    return Err(Error::InvalidInput("non-finite geometric coefficient".into()));
                }
                if *ratio <= Rational64::from_integer(0) || *ratio >= Rational64::from_integer(1) {
                    return Err(Error::InvalidInput(format!(
                        "geometric ratio {ratio} must lie in (0, 1)"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// `head ⊕ diag(tail)`. Tail entry `j` is position `j / k` of stream `j % k`
/// where `k` is the number of streams; every tail entry then passes through
/// the affine map `z ↦ a z + b`.
///
/// Global coordinates `0..head_dim` address the head, and coordinate
/// `head_dim + j` addresses tail entry `j`.
#[derive(Debug)]
pub struct OperatorModel {
    head: ComplexMatrix,
    tail: Vec<TailStream>,
    limit_points: Vec<C64>,
    map: (C64, C64),
    truncation: Option<usize>,
    cache: RwLock<Vec<C64>>,
    touched: AtomicUsize,
}

impl Clone for OperatorModel {
    fn clone(&self) -> Self {
        Self {
            head: self.head.clone(),
            tail: self.tail.clone(),
            limit_points: self.limit_points.clone(),
            map: self.map,
            truncation: self.truncation,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
            touched: AtomicUsize::new(self.touched.load(Ordering::Relaxed)),
        }
    }
}

impl OperatorModel {
    /// Validates that the declared limit points are exactly the accumulation
    /// points of the tail (each within `1e-12` of one another).
    pub fn new(head: ComplexMatrix, tail: Vec<TailStream>, limit_points: Vec<C64>) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::InvalidInput("model needs at least one tail stream".into()));
        }
        if limit_points.is_empty() {
            return Err(Error::InvalidInput("model needs at least one limit point".into()));
        }
        for s in &tail {
            s.validate()?;
        }
        let actual: Vec<C64> = tail.iter().flat_map(|s| s.limit_points()).collect();
        let near = |z: &C64, set: &[C64]| set.iter().any(|w| (z - w).norm() <= LIMIT_TOL);
        if let Some(p) = limit_points.iter().find(|p| !near(p, &actual)) {
            return Err(Error::InvalidInput(format!(
                "declared limit point {p} is not an accumulation point of the tail"
            )));
        }
        if let Some(p) = actual.iter().find(|p| !near(p, &limit_points)) {
            return Err(Error::InvalidInput(format!(
                "tail accumulates at {p}, which is not a declared limit point"
            )));
        }
        Ok(Self {
            head,
            tail,
            limit_points,
            map: (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            truncation: None,
            cache: RwLock::new(Vec::new()),
            touched: AtomicUsize::new(0),
        })
    }

    /// Diagonal model with an empty head.
    pub fn diagonal(tail: Vec<TailStream>, limit_points: Vec<C64>) -> Result<Self> {
        Self::new(ComplexMatrix::zeros(0), tail, limit_points)
    }

    /// Caps the number of tail entries that may be materialized.
    pub fn with_truncation(mut self, truncation: Option<usize>) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// The model of `aT + bI`.
    pub fn affine(&self, a: C64, b: C64) -> Self {
        let (a0, b0) = self.map;
        Self {
            head: self.head.affine(a, b),
            tail: self.tail.clone(),
            limit_points: self.limit_points.iter().map(|z| a * z + b).collect(),
            map: (a * a0, a * b0 + b),
            truncation: self.truncation,
            cache: RwLock::new(Vec::new()),
            touched: AtomicUsize::new(0),
        }
    }

    pub fn head(&self) -> &ComplexMatrix {
        &self.head
    }

    pub fn head_dim(&self) -> usize {
        self.head.dim()
    }

    pub fn streams(&self) -> &[TailStream] {
        &self.tail
    }

    pub fn limit_points(&self) -> &[C64] {
        &self.limit_points
    }

    /// Replaces the head, keeping the tail.
    pub fn with_head(&self, head: ComplexMatrix) -> Self {
        Self {
            head,
            tail: self.tail.clone(),
            limit_points: self.limit_points.clone(),
            map: self.map,
            truncation: self.truncation,
            cache: RwLock::new(Vec::new()),
            touched: AtomicUsize::new(0),
        }
    }

    /// The affine map applied to raw stream entries.
    pub fn entry_map(&self) -> (C64, C64) {
        self.map
    }

    /// Number of tail entries materialized so far (one past the largest
    /// tail index touched).
    pub fn touched(&self) -> usize {
        self.touched.load(Ordering::Relaxed)
    }

    fn raw_entry(&self, j: usize) -> C64 {
        let k = self.tail.len();
        let (a, b) = self.map;
        a * self.tail[j % k].entry(j / k) + b
    }

    /// Tail entry `j`, memoized in blocks.
    pub fn tail_entry(&self, j: usize) -> Result<C64> {
        if let Some(limit) = self.truncation {
            if j >= limit {
                return Err(Error::ExhaustedTail {
                    needed: j,
                    truncation: limit,
                });
            }
        }
        self.touched.fetch_max(j + 1, Ordering::Relaxed);
        {
            let cache = self.cache.read().expect("cache lock");
            if let Some(z) = cache.get(j) {
                return Ok(*z);
            }
        }
        let mut cache = self.cache.write().expect("cache lock");
        let mut end = (j / BLOCK + 1) * BLOCK;
        if let Some(limit) = self.truncation {
            end = end.min(limit);
        }
        for i in cache.len()..end {
            let z = self.raw_entry(i);
            cache.push(z);
        }
        Ok(cache[j])
    }

    /// Diagonal entry at a global coordinate (head diagonal or tail).
    pub fn diagonal_entry(&self, i: usize) -> Result<C64> {
        let h = self.head_dim();
        if i < h {
            Ok(self.head[(i, i)])
        } else {
            self.tail_entry(i - h)
        }
    }

    /// `<T x, y>` for sparse vectors in global coordinates.
    pub fn form(&self, x: &SparseVector, y: &SparseVector) -> Result<C64> {
        let h = self.head_dim();
        let mut acc = C64::new(0.0, 0.0);
        // head block
        for &(j, xj) in x.entries().iter().take_while(|(j, _)| *j < h) {
            for &(i, yi) in y.entries().iter().take_while(|(i, _)| *i < h) {
                acc += self.head[(i, j)] * xj * yi.conj();
            }
        }
        // diagonal tail: only shared coordinates contribute
        let (mut a, mut b) = (0, 0);
        let (xe, ye) = (x.entries(), y.entries());
        while a < xe.len() && b < ye.len() {
            let (i, xi) = xe[a];
            let (j, yj) = ye[b];
            if i < j {
                a += 1;
            } else if j < i {
                b += 1;
            } else {
                if i >= h {
                    acc += self.tail_entry(i - h)? * xi * yj.conj();
                }
                a += 1;
                b += 1;
            }
        }
        Ok(acc)
    }

    pub fn quadratic_form(&self, x: &SparseVector) -> Result<C64> {
        self.form(x, x)
    }

    /// Exact `‖T‖`: the larger of the head's spectral norm and the supremum of
    /// the tail entries (attained at stream extremes by convexity).
    pub fn operator_norm(&self) -> f64 {
        let (a, b) = self.map;
        let tail = self
            .tail
            .iter()
            .flat_map(|s| s.extreme_entries())
            .map(|z| (a * z + b).norm())
            .fold(0.0, f64::max);
        tail.max(self.head.spectral_norm())
    }

    /// Points whose hull contains every (mapped) tail entry.
    pub fn tail_extremes(&self) -> Vec<C64> {
        let (a, b) = self.map;
        self.tail
            .iter()
            .flat_map(|s| s.extreme_entries())
            .map(|z| a * z + b)
            .collect()
    }

    /// Matrix of `T` on the leading `n` global coordinates.
    pub fn section(&self, n: usize) -> Result<ComplexMatrix> {
        let h = self.head_dim();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            if i < h {
                for j in 0..n.min(h) {
                    m[(i, j)] = self.head[(i, j)];
                }
            } else {
                m[(i, i)] = self.tail_entry(i - h)?;
            }
        }
        Ok(m)
    }
}
