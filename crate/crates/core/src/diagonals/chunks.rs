//! Constant diagonals on operator models. A point of the relative interior of
//! the essential range is a rational-weight average of limit points; disjoint
//! finite chunks of tail coordinates realize that average, and each chunk is
//! diagonalized by the finite construction.

use std::collections::HashSet;

use super::parker::parker_basis;
use super::report::{Basis, DiagonalReport};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, SparseVector, C64};
use crate::numrange::{caratheodory, essential_range, Membership, OperatorModel, TailStream};

/// Largest chunk size tried before giving up on a tolerance.
pub const MAX_CHUNK: usize = 4096;

/// How many coordinates near each limit point make up one chunk.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkRecipe {
    /// `(limit point, count)` with positive counts.
    pub parts: Vec<(C64, usize)>,
    pub size: usize,
}

impl ChunkRecipe {
    pub fn mean(&self) -> C64 {
        self.parts.iter().map(|(p, c)| p * *c as f64).sum::<C64>() / self.size as f64
    }
}

/// Smallest chunk whose rounded weights put the average within `tol/2` of
/// `lambda`.
pub fn chunk_recipe(limit_points: &[C64], lambda: C64, tol: f64) -> Result<ChunkRecipe> {
    let weights = caratheodory(limit_points, lambda);
    for size in 1..=MAX_CHUNK {
        let counts = largest_remainder(&weights, size);
        let recipe = ChunkRecipe {
            parts: weights
                .iter()
                .zip(&counts)
                .filter(|(_, &c)| c > 0)
                .map(|(&(i, _), &c)| (limit_points[i], c))
                .collect(),
            size,
        };
        if (recipe.mean() - lambda).norm() <= 0.5 * tol {
            return Ok(recipe);
        }
    }
    Err(Error::NumericalBreakdown(format!(
        "no chunk of at most {MAX_CHUNK} coordinates averages within {tol:e} of {lambda}"
    )))
}

fn largest_remainder(weights: &[(usize, f64)], size: usize) -> Vec<usize> {
    let exact: Vec<f64> = weights.iter().map(|(_, w)| w * size as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..exact.len()).collect();
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())));
    let assigned: usize = counts.iter().sum();
    for &i in order.iter().take(size.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Chunks handed out so far, in global coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkPlan {
    pub recipe: Option<ChunkRecipe>,
    pub chunks: Vec<Vec<usize>>,
    /// Average diagonal entry of each chunk.
    pub achieved: Vec<C64>,
}

#[derive(Debug, Clone)]
enum Mode {
    /// `lambda` is the value of a constant stream: use its coordinates as is.
    Raw { stream: usize },
    Chunked {
        recipe: ChunkRecipe,
        eta: f64,
        cursors: Vec<usize>,
        used: HashSet<usize>,
    },
}

/// Lazily generated orthonormal vectors with `<T u_k, u_k>` within `tol` of
/// `lambda`, built on disjoint tail coordinates.
#[derive(Debug, Clone)]
pub struct ConstantDiagonalStream {
    model: OperatorModel,
    lambda: C64,
    tol: f64,
    mode: Mode,
    vectors: Vec<SparseVector>,
    values: Vec<C64>,
    chunks: Vec<Vec<usize>>,
    achieved: Vec<C64>,
}

impl ConstantDiagonalStream {
    /// Requires `lambda` in the relative interior of `W_e` with margin `tol`,
    /// unless it is the value of a constant tail stream.
    pub fn new(model: &OperatorModel, lambda: C64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        let (a, b) = model.entry_map();
        let raw = model.streams().iter().position(|s| match s {
            TailStream::Constant(c) => a * c + b == lambda,
            _ => false,
        });
        let mode = match raw {
            Some(stream) => Mode::Raw { stream },
            None => {
                let we = essential_range(model);
                if !we.contains(lambda, Membership::RelativeInterior, tol) {
                    return Err(Error::OutsideRange {
                        distance: we.distance(lambda),
                    });
                }
                let recipe = chunk_recipe(model.limit_points(), lambda, tol)?;
                let cursors = vec![0; recipe.parts.len()];
                Mode::Chunked {
                    recipe,
                    eta: 0.25 * tol,
                    cursors,
                    used: HashSet::new(),
                }
            }
        };
        Ok(Self {
            model: model.clone(),
            lambda,
            tol,
            mode,
            vectors: Vec::new(),
            values: Vec::new(),
            chunks: Vec::new(),
            achieved: Vec::new(),
        })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Whether the vectors can exhaust every tail coordinate. Raw coordinates
    /// of one constant stream among several cannot.
    pub fn spans_tail(&self) -> bool {
        match self.mode {
            Mode::Raw { .. } => self.model.streams().len() == 1,
            Mode::Chunked { .. } => true,
        }
    }

    pub fn generated(&self) -> usize {
        self.vectors.len()
    }

    /// Vector `k`, generating chunks as needed.
    pub fn get(&mut self, k: usize) -> Result<&SparseVector> {
        while self.vectors.len() <= k {
            self.next_chunk()?;
        }
        Ok(&self.vectors[k])
    }

    /// `<T u_k, u_k>` on the stream's own model.
    pub fn value(&mut self, k: usize) -> Result<C64> {
        self.get(k)?;
        Ok(self.values[k])
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    pub fn plan(&self) -> ChunkPlan {
        ChunkPlan {
            recipe: match &self.mode {
                Mode::Chunked { recipe, .. } => Some(recipe.clone()),
                Mode::Raw { .. } => None,
            },
            chunks: self.chunks.clone(),
            achieved: self.achieved.clone(),
        }
    }

    fn next_chunk(&mut self) -> Result<()> {
        let h = self.model.head_dim();
        match &mut self.mode {
            Mode::Raw { stream } => {
                let j = *stream + self.chunks.len() * self.model.streams().len();
                let z = self.model.tail_entry(j)?;
                self.vectors.push(SparseVector::basis(h + j));
                self.values.push(z);
                self.chunks.push(vec![h + j]);
                self.achieved.push(z);
            }
            Mode::Chunked {
                recipe,
                eta,
                cursors,
                used,
            } => {
                let limit = self.model.truncation().unwrap_or(crate::numrange::essential::DEFAULT_SEARCH_LIMIT);
                let mut chunk = Vec::with_capacity(recipe.size);
                for ((point, count), cursor) in recipe.parts.iter().zip(cursors.iter_mut()) {
                    for _ in 0..*count {
                        loop {
                            if *cursor >= limit {
                                return Err(Error::ExhaustedTail {
                                    needed: *cursor,
                                    truncation: limit,
                                });
                            }
                            let j = *cursor;
                            *cursor += 1;
                            if !used.contains(&j) && (self.model.tail_entry(j)? - point).norm() <= *eta {
                                used.insert(j);
                                chunk.push(j);
                                break;
                            }
                        }
                    }
                }
                chunk.sort_unstable();
                let entries: Vec<C64> = chunk
                    .iter()
                    .map(|&j| self.model.tail_entry(j))
                    .collect::<Result<_>>()?;
                let local = parker_basis(&ComplexMatrix::diagonal(&entries), 0.25 * self.tol)?;
                let Basis::Dense(frame) = local.basis else {
                    unreachable!("finite construction is dense")
                };
                for v in frame.vectors() {
                    let sv = SparseVector::from_entries(
                        chunk
                            .iter()
                            .zip(v)
                            .filter(|(_, c)| c.norm() > 0.0)
                            .map(|(&j, &c)| (h + j, c))
                            .collect(),
                    );
                    self.values.push(self.model.quadratic_form(&sv)?);
                    self.vectors.push(sv);
                }
                self.achieved
                    .push(entries.iter().sum::<C64>() / entries.len() as f64);
                self.chunks.push(chunk.into_iter().map(|j| h + j).collect());
            }
        }
        Ok(())
    }
}

/// Plans `budget` chunks for `lambda` without keeping the vectors.
pub fn chunk_selector(model: &OperatorModel, lambda: C64, tol: f64, budget: usize) -> Result<ChunkPlan> {
    let mut s = ConstantDiagonalStream::new(model, lambda, tol)?;
    while s.chunks.len() < budget {
        s.next_chunk()?;
    }
    Ok(s.plan())
}

/// The first `count` vectors of a constant-`lambda` diagonal on the model.
pub fn constant_diag_basis(model: &OperatorModel, lambda: C64, count: usize, tol: f64) -> Result<DiagonalReport> {
    let mut s = ConstantDiagonalStream::new(model, lambda, tol)?;
    if count > 0 {
        s.get(count - 1)?;
    }
    let report = DiagonalReport::new(
        Basis::Sparse(s.vectors[..count].to_vec()),
        s.values[..count].to_vec(),
        Some(lambda),
        Vec::new(),
    );
    if report.max_deviation > tol {
        return Err(Error::NumericalBreakdown(format!(
            "constant diagonal deviates by {:e}",
            report.max_deviation
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn spike_model() -> OperatorModel {
        let mut period = vec![c(-17.0)];
        period.extend(std::iter::repeat(c(1.0)).take(8));
        OperatorModel::diagonal(vec![TailStream::Periodic(period)], vec![c(-17.0), c(1.0)]).unwrap()
    }

    #[test]
    fn recipe_for_minus_one_uses_nine() {
        let r = chunk_recipe(&[c(-17.0), c(1.0)], c(-1.0), 1e-10).unwrap();
        assert_eq!(r.size, 9);
        assert_eq!(r.parts, vec![(c(-17.0), 1), (c(1.0), 8)]);
    }

    #[test]
    fn spike_model_chunks_are_contiguous() {
        let plan = chunk_selector(&spike_model(), c(-1.0), 1e-10, 3).unwrap();
        assert_eq!(plan.chunks[1], (9..18).collect::<Vec<_>>());
        assert!(plan.achieved.iter().all(|a| (a - c(-1.0)).norm() < 1e-12));
    }

    #[test]
    fn constant_stream_value_uses_raw_coordinates() {
        let m = OperatorModel::diagonal(
            vec![TailStream::Constant(c(0.0)), TailStream::Constant(c(1.0))],
            vec![c(0.0), c(1.0)],
        )
        .unwrap();
        let r = constant_diag_basis(&m, c(1.0), 3, 1e-10).unwrap();
        let Basis::Sparse(v) = &r.basis else { panic!() };
        assert_eq!(v[2], SparseVector::basis(5));
    }

    #[test]
    fn endpoint_is_rejected() {
        let r = constant_diag_basis(&spike_model(), c(1.0), 4, 1e-10);
        assert!(matches!(r, Err(Error::OutsideRange { .. })));
    }

    #[test]
    fn values_are_constant() {
        let r = constant_diag_basis(&spike_model(), c(-1.0), 50, 1e-10).unwrap();
        assert!(r.max_deviation < 1e-10);
    }
}
