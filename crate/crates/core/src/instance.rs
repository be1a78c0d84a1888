//! Symmetric TSP instances as full weight matrices.

use std::cmp::Ordering;
use std::fmt;

use crate::tour::Tour;
use crate::weight::Weight;

/// A symmetric instance: `n >= 3` vertices, nonnegative weights, zero
/// diagonal. Weights are stored row-major as a full `n x n` matrix.
///
/// Symmetry, nonnegativity, and the zero diagonal are established at
/// construction; the triangle inequality is *not* — call
/// [`Instance::check_metric`] for that.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<W> {
    name: String,
    n: usize,
    weights: Vec<W>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    TooFewVertices { n: usize },
    BadShape { expected: usize, got: usize },
    NegativeWeight { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    Asymmetric { i: usize, j: usize },
    DimensionMismatch { instance_n: usize, tour_n: usize },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::TooFewVertices { n } => {
                write!(f, "instance has {n} vertices, need at least 3")
            }
            InstanceError::BadShape { expected, got } => {
                write!(f, "weight matrix has {got} entries, expected {expected}")
            }
            InstanceError::NegativeWeight { i, j } => {
                write!(f, "negative weight at ({i}, {j})")
            }
            InstanceError::NonzeroDiagonal { i } => {
                write!(f, "nonzero diagonal entry at ({i}, {i})")
            }
            InstanceError::Asymmetric { i, j } => {
                write!(f, "asymmetric weights at ({i}, {j})")
            }
            InstanceError::DimensionMismatch { instance_n, tour_n } => {
                write!(
                    f,
                    "tour over {tour_n} vertices does not fit an instance with {instance_n}"
                )
            }
        }
    }
}

impl std::error::Error for InstanceError {}

/// One triangle-inequality violation: `c(i,k) > c(i,j) + c(j,k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricViolation<W> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `c(i,j) + c(j,k)`.
    pub detour: W,
    /// `c(i,k)`.
    pub direct: W,
}

impl<W: Weight> MetricViolation<W> {
    /// How far the direct edge overshoots the detour.
    pub fn gap(&self) -> W {
        self.direct.clone() - self.detour.clone()
    }
}

/// Outcome of a full triangle-inequality scan.
#[derive(Clone, Debug)]
pub struct MetricReport<W> {
    violations: Vec<MetricViolation<W>>,
}

impl<W: Weight> MetricReport<W> {
    pub fn is_metric(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when every violation gap is at most `slack`. With zero slack
    /// this is [`MetricReport::is_metric`].
    pub fn is_metric_within(&self, slack: &W) -> bool {
        self.violations
            .iter()
            .all(|v| v.gap().cmp_total(slack) != Ordering::Greater)
    }

    pub fn violations(&self) -> &[MetricViolation<W>] {
        &self.violations
    }

    pub fn worst_gap(&self) -> Option<W> {
        self.violations
            .iter()
            .map(MetricViolation::gap)
            .max_by(|a, b| a.cmp_total(b))
    }
}

impl<W: Weight> Instance<W> {
    /// Validates and wraps a row-major weight matrix.
    pub fn new(name: impl Into<String>, n: usize, weights: Vec<W>) -> Result<Self, InstanceError> {
        if n < 3 {
            return Err(InstanceError::TooFewVertices { n });
        }
        if weights.len() != n * n {
            return Err(InstanceError::BadShape {
                expected: n * n,
                got: weights.len(),
            });
        }
        for i in 0..n {
            if !weights[i * n + i].is_zero() {
                return Err(InstanceError::NonzeroDiagonal { i });
            }
            for j in 0..n {
                if weights[i * n + j].is_negative() {
                    return Err(InstanceError::NegativeWeight { i, j });
                }
                if j > i && weights[i * n + j] != weights[j * n + i] {
                    return Err(InstanceError::Asymmetric { i, j });
                }
            }
        }
        Ok(Instance {
            name: name.into(),
            n,
            weights,
        })
    }

    pub fn from_rows(name: impl Into<String>, rows: Vec<Vec<W>>) -> Result<Self, InstanceError> {
        let n = rows.len();
        let mut weights = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(InstanceError::BadShape {
                    expected: n * n,
                    got: row.len(),
                });
            }
            weights.extend(row);
        }
        Instance::new(name, n, weights)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> &'static str {
        W::MODE
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> &W {
        &self.weights[i * self.n + j]
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    /// Total weight of the tour's directed edges, including the closing edge.
    pub fn tour_length(&self, tour: &Tour) -> Result<W, InstanceError> {
        if tour.n() != self.n {
            return Err(InstanceError::DimensionMismatch {
                instance_n: self.n,
                tour_n: tour.n(),
            });
        }
        Ok(tour.edges().map(|(u, v)| self.weight(u, v).clone()).sum())
    }

    /// Scans all triangles and reports every violation of
    /// `c(i,k) <= c(i,j) + c(j,k)` (strict comparison, no slack). Triples are
    /// enumerated with `i < k` and any `j` distinct from both, in
    /// lexicographic `(i, k, j)` order.
    pub fn check_metric(&self) -> MetricReport<W> {
        let mut violations = Vec::new();
        for i in 0..self.n {
            for k in (i + 1)..self.n {
                let direct = self.weight(i, k);
                for j in 0..self.n {
                    if j == i || j == k {
                        continue;
                    }
                    let detour = self.weight(i, j).clone() + self.weight(j, k).clone();
                    if detour.cmp_total(direct) == Ordering::Less {
                        violations.push(MetricViolation {
                            i,
                            j,
                            k,
                            detour,
                            direct: direct.clone(),
                        });
                    }
                }
            }
        }
        MetricReport { violations }
    }
}
