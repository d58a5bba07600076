use crate::linalg::{OrthonormalFrame, SparseVector, C64};

/// Vectors of a constructed diagonal: dense for matrices, sparse (global
/// coordinates) for operator models.
#[derive(Debug, Clone)]
pub enum Basis {
    Dense(OrthonormalFrame),
    Sparse(Vec<SparseVector>),
}

impl Basis {
    pub fn len(&self) -> usize {
        match self {
            Basis::Dense(f) => f.len(),
            Basis::Sparse(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The diagonal `(<T u_j, u_j>)` of an orthonormal sequence.
#[derive(Debug, Clone)]
pub struct DiagonalReport {
    pub basis: Basis,
    pub values: Vec<C64>,
    /// `S_k = Σ_{j<=k} values_j`, summed left to right.
    pub partial_sums: Vec<C64>,
    /// Intended constant value, when there is one.
    pub target: Option<C64>,
    /// `max_j |values_j - target|`, or 0 without a target.
    pub max_deviation: f64,
    /// Prefix lengths at which the partial sums are designated checkpoints.
    pub checkpoints: Vec<usize>,
}

impl DiagonalReport {
    pub fn new(basis: Basis, values: Vec<C64>, target: Option<C64>, checkpoints: Vec<usize>) -> Self {
        let mut acc = C64::new(0.0, 0.0);
        let partial_sums = values
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        let max_deviation = target
            .map(|t| values.iter().map(|v| (v - t).norm()).fold(0.0, f64::max))
            .unwrap_or(0.0);
        Self {
            basis,
            values,
            partial_sums,
            target,
            max_deviation,
            checkpoints,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `S_k` for `k >= 1`.
    pub fn partial_sum(&self, k: usize) -> C64 {
        if k == 0 {
            C64::new(0.0, 0.0)
        } else {
            self.partial_sums[k - 1]
        }
    }

    pub fn mean_value(&self) -> C64 {
        if self.values.is_empty() {
            return C64::new(0.0, 0.0);
        }
        self.values.iter().sum::<C64>() / self.values.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FanCheck {
    pub checkpoints: Vec<usize>,
    /// `|S_k|` at each checkpoint.
    pub magnitudes: Vec<f64>,
    pub min: f64,
}

/// Partial-sum magnitudes at the report's checkpoints (every prefix when it
/// has none), restricted to prefixes of length at most `window`.
pub fn fan_check(report: &DiagonalReport, window: usize) -> FanCheck {
    let window = window.min(report.len());
    let checkpoints: Vec<usize> = if report.checkpoints.is_empty() {
        (1..=window).collect()
    } else {
        report
            .checkpoints
            .iter()
            .copied()
            .filter(|&k| k >= 1 && k <= window)
            .collect()
    };
    let magnitudes: Vec<f64> = checkpoints
        .iter()
        .map(|&k| report.partial_sum(k).norm())
        .collect();
    let min = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
    FanCheck {
        checkpoints,
        magnitudes,
        min,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(value: f64, n: usize) -> DiagonalReport {
        DiagonalReport::new(
            Basis::Dense(OrthonormalFrame::standard(n)),
            vec![C64::new(value, 0.0); n],
            Some(C64::new(value, 0.0)),
            Vec::new(),
        )
    }

    #[test]
    fn zero_diagonal_has_zero_sums() {
        let c = fan_check(&constant(0.0, 6), 6);
        assert_eq!(c.magnitudes, vec![0.0; 6]);
        assert_eq!(c.min, 0.0);
    }

    #[test]
    fn unit_diagonal_sums_count_up() {
        let c = fan_check(&constant(1.0, 5), 4);
        assert_eq!(c.magnitudes, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(c.min, 1.0);
    }
}
