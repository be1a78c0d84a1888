//! Directed tours: cyclic permutations of vertex indices.

use std::fmt;

/// A directed tour over vertices `0..n`: `order[i]` is visited `i`-th, and
/// the tour closes with the edge from `order[n-1]` back to `order[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    order: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TourError {
    /// Fewer than 3 vertices.
    TooShort { len: usize },
    /// An index `>= n` where `n` is the tour length.
    OutOfRange { value: usize, n: usize },
    /// A vertex listed twice.
    Repeated { value: usize },
}

impl fmt::Display for TourError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TourError::TooShort { len } => {
                write!(f, "tour has {len} vertices, need at least 3")
            }
            TourError::OutOfRange { value, n } => {
                write!(f, "vertex {value} out of range for a tour of {n} vertices")
            }
            TourError::Repeated { value } => write!(f, "vertex {value} appears twice"),
        }
    }
}

impl std::error::Error for TourError {}

impl Tour {
    /// Validates that `order` is a permutation of `0..order.len()` with at
    /// least 3 entries.
    pub fn new(order: Vec<usize>) -> Result<Self, TourError> {
        let n = order.len();
        if n < 3 {
            return Err(TourError::TooShort { len: n });
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(TourError::OutOfRange { value: v, n });
            }
            if seen[v] {
                return Err(TourError::Repeated { value: v });
            }
            seen[v] = true;
        }
        Ok(Tour { order })
    }

    /// The tour `0, 1, ..., n-1`.
    pub fn identity(n: usize) -> Tour {
        assert!(n >= 3, "tours need at least 3 vertices");
        Tour {
            order: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    /// All directed edges, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |i| (self.order[i], self.order[(i + 1) % n]))
    }

    /// Position of vertex `v` in the visiting order.
    pub fn position_of(&self, v: usize) -> Option<usize> {
        self.order.iter().position(|&u| u == v)
    }

    /// True when both tours traverse the same cyclic sequence, ignoring the
    /// starting vertex and the direction of travel.
    pub fn same_cycle(&self, other: &Tour) -> bool {
        if self.n() != other.n() {
            return false;
        }
        fn rooted_at_zero(order: &[usize]) -> Vec<usize> {
            let n = order.len();
            let start = order.iter().position(|&v| v == 0).expect("0 is present");
            (0..n).map(|i| order[(start + i) % n]).collect()
        }
        let this = rooted_at_zero(&self.order);
        if this == rooted_at_zero(&other.order) {
            return true;
        }
        let reversed: Vec<usize> = other.order.iter().rev().copied().collect();
        this == rooted_at_zero(&reversed)
    }
}
