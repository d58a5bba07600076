//! Sparse vectors over an unbounded coordinate set, plus an orthonormal set
//! indexed by coordinate so that projections only touch overlapping members.

use std::collections::HashMap;

use super::matrix::{C64, ZERO};

const DROP_TOL: f64 = 1e-17;

/// Sorted `(index, value)` pairs; absent indices are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(usize, C64)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self {
            entries: vec![(i, C64::new(1.0, 0.0))],
        }
    }

    /// Accepts unsorted input; duplicate indices are summed.
    pub fn from_entries(mut entries: Vec<(usize, C64)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, C64)> = Vec::with_capacity(entries.len());
        for (i, z) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += z,
                _ => out.push((i, z)),
            }
        }
        out.retain(|(_, z)| z.norm() > DROP_TOL);
        Self { entries: out }
    }

    pub fn from_dense(x: &[C64], offset: usize) -> Self {
        Self::from_entries(
            x.iter()
                .enumerate()
                .map(|(i, &z)| (i + offset, z))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(usize, C64)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> C64 {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1,
            Err(_) => ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self, other>`, linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        let (mut a, mut b) = (0, 0);
        let mut acc = ZERO;
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = self.entries[a];
            let (j, y) = other.entries[b];
            match i.cmp(&j) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += x * y.conj();
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|&(i, z)| (i, z * s)).collect(),
        }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: C64, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let left = self.entries.get(a);
            let right = other.entries.get(b);
            match (left, right) {
                (Some(&(i, x)), Some(&(j, y))) if i == j => {
                    out.push((i, x + s * y));
                    a += 1;
                    b += 1;
                }
                (Some(&(i, x)), Some(&(j, _))) if i < j => {
                    out.push((i, x));
                    a += 1;
                }
                (Some(&(i, x)), None) => {
                    out.push((i, x));
                    a += 1;
                }
                (_, Some(&(j, y))) => {
                    out.push((j, s * y));
                    b += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out.retain(|(_, z)| z.norm() > DROP_TOL);
        Self { entries: out }
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn to_dense(&self, dim: usize) -> Vec<C64> {
        let mut out = vec![ZERO; dim];
        for &(i, z) in &self.entries {
            if i < dim {
                out[i] = z;
            }
        }
        out
    }
}

/// An orthonormal list of sparse vectors with a coordinate → member index.
#[derive(Debug, Clone, Default)]
pub struct SparseFrame {
    vectors: Vec<SparseVector>,
    index: HashMap<usize, Vec<usize>>,
}

impl SparseFrame {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends without checking orthogonality.
    pub fn push(&mut self, v: SparseVector) {
        let id = self.vectors.len();
        for i in v.support() {
            self.index.entry(i).or_default().push(id);
        }
        self.vectors.push(v);
    }

    pub fn extend_from(&mut self, other: &SparseFrame) {
        for v in other.vectors() {
            self.push(v.clone());
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    pub fn get(&self, k: usize) -> &SparseVector {
        &self.vectors[k]
    }

    /// Members whose support meets the support of `v`, ascending.
    pub fn overlapping(&self, v: &SparseVector) -> Vec<usize> {
        let mut ids: Vec<usize> = v
            .support()
            .filter_map(|i| self.index.get(&i))
            .flatten()
            .copied()
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Coefficients `<v, f_k>` for every overlapping member `f_k`.
    pub fn coefficients(&self, v: &SparseVector) -> Vec<(usize, C64)> {
        self.overlapping(v)
            .into_iter()
            .map(|k| (k, v.inner(&self.vectors[k])))
            .filter(|(_, c)| c.norm() > 0.0)
            .collect()
    }

    pub fn project(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (k, c) in self.coefficients(v) {
            out = out.add_scaled(c, &self.vectors[k]);
        }
        out
    }

    /// `v - P v`, computed twice for stability.
    pub fn orthogonalize(&self, v: &SparseVector) -> SparseVector {
        let mut w = v.clone();
        for _ in 0..2 {
            for (k, c) in self.coefficients(&w) {
                w = w.add_scaled(-c, &self.vectors[k]);
            }
        }
        w
    }

    /// Union of all supports.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.index.keys().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.index.keys().copied().max()
    }

    /// `max |<v_i, v_j> - δ_ij|` over overlapping pairs (all others are exactly 0).
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, v) in self.vectors.iter().enumerate() {
            for k in self.overlapping(v) {
                if k < i {
                    continue;
                }
                let g = v.inner(&self.vectors[k]);
                let target = if k == i { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn merge_arithmetic() {
        let a = SparseVector::from_entries(vec![(3, c(1.0)), (1, c(2.0))]);
        let b = SparseVector::from_entries(vec![(1, c(1.0)), (7, c(4.0))]);
        assert_eq!(a.inner(&b), c(2.0));
        let s = a.add_scaled(c(-2.0), &b);
        assert_eq!(s.entries(), &[(3, c(1.0)), (7, c(-8.0))]);
        assert_eq!(s.get(7), c(-8.0));
        assert_eq!(s.get(1), ZERO);
    }

    #[test]
    fn frame_projection_uses_overlaps() {
        let mut f = SparseFrame::new();
        f.push(SparseVector::basis(0));
        f.push(SparseVector::basis(5));
        let v = SparseVector::from_entries(vec![(0, c(3.0)), (2, c(1.0))]);
        assert_eq!(f.overlapping(&v), vec![0]);
        let w = f.orthogonalize(&v);
        assert_eq!(w.entries(), &[(2, c(1.0))]);
        assert!(f.orthonormality_defect() < 1e-15);
    }
}
