//! Deterministic 2-opt local search over directed tours.
//!
//! A 2-change is named by two tour *positions* `i < j`. It removes the
//! directed edges leaving positions `i` and `j`, reconnects, and reverses
//! the segment strictly between them:
//!
//! ```text
//! before: ... a  b ....... x  y ...      (a at position i, x at position j)
//! after:  ... a  x ....... b  y ...      (segment b..x reversed)
//! ```
//!
//! The gain is `c(a,b) + c(x,y) - c(a,x) - c(b,y)`; a change is improving
//! when the gain strictly exceeds the scan epsilon (zero in exact mode,
//! `1e-12` in float mode). Pairs where the two edges share an endpoint —
//! `j == i + 1` or `(i, j) == (0, n-1)` — are not 2-changes.
//!
//! Scans enumerate pairs in lexicographic `(i, j)` order. First-improvement
//! returns the first improving pair; best-improvement returns the maximum
//! gain, breaking ties toward the lexicographically least pair. This makes
//! every run reproducible.

use std::cmp::Ordering;
use std::fmt;

use crate::instance::Instance;
use crate::tour::Tour;
use crate::weight::Weight;

/// An improving (or candidate) 2-change at tour positions `pos_i < pos_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoChange<W> {
    pub pos_i: usize,
    pub pos_j: usize,
    pub gain: W,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanStrategy {
    FirstImprovement,
    BestImprovement,
}

impl fmt::Display for ScanStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanStrategy::FirstImprovement => write!(f, "first"),
            ScanStrategy::BestImprovement => write!(f, "best"),
        }
    }
}

/// Scan strategy plus the minimum gain counted as an improvement.
#[derive(Clone, Debug)]
pub struct ScanPolicy<W> {
    pub strategy: ScanStrategy,
    pub epsilon: W,
}

impl<W: Weight> ScanPolicy<W> {
    pub fn first_improvement() -> Self {
        ScanPolicy {
            strategy: ScanStrategy::FirstImprovement,
            epsilon: W::default_gain_epsilon(),
        }
    }

    pub fn best_improvement() -> Self {
        ScanPolicy {
            strategy: ScanStrategy::BestImprovement,
            epsilon: W::default_gain_epsilon(),
        }
    }

    pub fn with_epsilon(mut self, epsilon: W) -> Self {
        self.epsilon = epsilon;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    DimensionMismatch { instance_n: usize, tour_n: usize },
    PositionOutOfRange { pos: usize, n: usize },
    IdenticalPositions { pos: usize },
    /// The two removed edges share an endpoint, so no 2-change exists.
    AdjacentPositions { pos_i: usize, pos_j: usize },
    NegativeEpsilon,
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::DimensionMismatch { instance_n, tour_n } => write!(
                f,
                "tour over {tour_n} vertices does not fit an instance with {instance_n}"
            ),
            EngineError::PositionOutOfRange { pos, n } => {
                write!(f, "position {pos} out of range for a tour of {n} vertices")
            }
            EngineError::IdenticalPositions { pos } => {
                write!(f, "positions are both {pos}")
            }
            EngineError::AdjacentPositions { pos_i, pos_j } => write!(
                f,
                "positions {pos_i} and {pos_j} name adjacent tour edges; not a 2-change"
            ),
            EngineError::NegativeEpsilon => write!(f, "scan epsilon must be nonnegative"),
        }
    }
}

impl std::error::Error for EngineError {}

fn check_dims<W: Weight>(inst: &Instance<W>, tour: &Tour) -> Result<(), EngineError> {
    if inst.n() != tour.n() {
        return Err(EngineError::DimensionMismatch {
            instance_n: inst.n(),
            tour_n: tour.n(),
        });
    }
    Ok(())
}

/// Validates a position pair and returns it ordered as `(lo, hi)`.
fn canonical_pair(n: usize, a: usize, b: usize) -> Result<(usize, usize), EngineError> {
    for pos in [a, b] {
        if pos >= n {
            return Err(EngineError::PositionOutOfRange { pos, n });
        }
    }
    if a == b {
        return Err(EngineError::IdenticalPositions { pos: a });
    }
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    if j == i + 1 || (i == 0 && j == n - 1) {
        return Err(EngineError::AdjacentPositions { pos_i: i, pos_j: j });
    }
    Ok((i, j))
}

#[inline]
fn gain_at<W: Weight>(inst: &Instance<W>, order: &[usize], i: usize, j: usize) -> W {
    let n = order.len();
    let a = order[i];
    let b = order[(i + 1) % n];
    let x = order[j];
    let y = order[(j + 1) % n];
    inst.weight(a, b).clone() + inst.weight(x, y).clone()
        - inst.weight(a, x).clone()
        - inst.weight(b, y).clone()
}

/// Gain of the 2-change at positions `(a, b)`: old edge weights minus new.
/// Positive means the change shortens the tour. Symmetric in its arguments.
pub fn gain<W: Weight>(
    inst: &Instance<W>,
    tour: &Tour,
    a: usize,
    b: usize,
) -> Result<W, EngineError> {
    check_dims(inst, tour)?;
    let (i, j) = canonical_pair(tour.n(), a, b)?;
    Ok(gain_at(inst, tour.order(), i, j))
}

/// Applies the 2-change at positions `(a, b)`: reverses the segment between
/// the two removed edges. Needs no instance; the rewiring is purely
/// combinatorial.
pub fn apply_two_change(tour: &Tour, a: usize, b: usize) -> Result<Tour, EngineError> {
    let (i, j) = canonical_pair(tour.n(), a, b)?;
    let mut order = tour.order().to_vec();
    order[i + 1..=j].reverse();
    Ok(Tour::new(order).expect("reversal preserves the permutation"))
}

fn find_improving_in_order<W: Weight>(
    inst: &Instance<W>,
    order: &[usize],
    policy: &ScanPolicy<W>,
) -> Option<TwoChange<W>> {
    let n = order.len();
    let weights = inst.weights();
    let mut best: Option<TwoChange<W>> = None;
    for i in 0..n {
        // j == i+1 shares vertex order[i+1]; (0, n-1) shares order[0].
        let j_end = if i == 0 { n - 1 } else { n };
        if i + 2 >= j_end {
            continue;
        }
        // Hoist everything that only depends on i; this loop is the hot
        // path of a full local-search run.
        let a = order[i];
        let b = order[i + 1];
        let row_a = &weights[a * n..(a + 1) * n];
        let row_b = &weights[b * n..(b + 1) * n];
        let w_ab = &row_a[b];
        for j in (i + 2)..j_end {
            let x = order[j];
            let y = order[if j + 1 == n { 0 } else { j + 1 }];
            let g = w_ab.clone() + weights[x * n + y].clone()
                - row_a[x].clone()
                - row_b[y].clone();
            if g.cmp_total(&policy.epsilon) != Ordering::Greater {
                continue;
            }
            let change = TwoChange {
                pos_i: i,
                pos_j: j,
                gain: g,
            };
            match policy.strategy {
                ScanStrategy::FirstImprovement => return Some(change),
                ScanStrategy::BestImprovement => {
                    // Strict comparison keeps the lexicographically least
                    // maximizer.
                    let better = best
                        .as_ref()
                        .map_or(true, |b| change.gain.cmp_total(&b.gain) == Ordering::Greater);
                    if better {
                        best = Some(change);
                    }
                }
            }
        }
    }
    best
}

/// Scans all 2-changes of `tour` and returns one whose gain exceeds the
/// policy epsilon, or `None` at a local optimum.
pub fn find_improving<W: Weight>(
    inst: &Instance<W>,
    tour: &Tour,
    policy: &ScanPolicy<W>,
) -> Result<Option<TwoChange<W>>, EngineError> {
    check_dims(inst, tour)?;
    if policy.epsilon.is_negative() {
        return Err(EngineError::NegativeEpsilon);
    }
    Ok(find_improving_in_order(inst, tour.order(), policy))
}

/// Trace of a full local-search run.
#[derive(Clone, Debug)]
pub struct TwoOptRun<W> {
    pub tour: Tour,
    pub initial_length: W,
    /// Tour length after each applied move; strictly decreasing.
    pub lengths: Vec<W>,
}

impl<W: Weight> TwoOptRun<W> {
    pub fn moves(&self) -> usize {
        self.lengths.len()
    }

    pub fn final_length(&self) -> &W {
        self.lengths.last().unwrap_or(&self.initial_length)
    }
}

/// Runs 2-opt to a local optimum. Lengths are tracked incrementally
/// (`new = old - gain`), which in exact mode equals recomputation from
/// scratch and in float mode stays within accumulated rounding of it.
pub fn run_two_opt<W: Weight>(
    inst: &Instance<W>,
    start: &Tour,
    policy: &ScanPolicy<W>,
) -> Result<TwoOptRun<W>, EngineError> {
    check_dims(inst, start)?;
    if policy.epsilon.is_negative() {
        return Err(EngineError::NegativeEpsilon);
    }
    let initial_length = inst.tour_length(start).expect("dimensions checked");
    let mut order = start.order().to_vec();
    let mut length = initial_length.clone();
    let mut lengths = Vec::new();
    while let Some(change) = find_improving_in_order(inst, &order, policy) {
        order[change.pos_i + 1..=change.pos_j].reverse();
        length = length - change.gain;
        lengths.push(length.clone());
    }
    Ok(TwoOptRun {
        tour: Tour::new(order).expect("2-changes preserve the permutation"),
        initial_length,
        lengths,
    })
}

/// True when no 2-change has gain above `epsilon`.
pub fn is_two_optimal<W: Weight>(
    inst: &Instance<W>,
    tour: &Tour,
    epsilon: &W,
) -> Result<bool, EngineError> {
    improving_witness(inst, tour, epsilon).map(|w| w.is_none())
}

/// The first improving 2-change in scan order, if any.
pub fn improving_witness<W: Weight>(
    inst: &Instance<W>,
    tour: &Tour,
    epsilon: &W,
) -> Result<Option<TwoChange<W>>, EngineError> {
    let policy = ScanPolicy {
        strategy: ScanStrategy::FirstImprovement,
        epsilon: epsilon.clone(),
    };
    find_improving(inst, tour, &policy)
}
