//! Exact optimal-tour baselines for small instances.
//!
//! Two independent routes to the optimum: pruned exhaustive search and
//! Held-Karp dynamic programming. Both are deterministic — ties are always
//! resolved the same way — so they double as oracles for each other and for
//! the local-search engine.

use std::cmp::Ordering;
use std::fmt;

use crate::instance::Instance;
use crate::tour::Tour;
use crate::weight::Weight;

/// Size guards. Exhaustive search is factorial, Held-Karp is `n^2 * 2^n`
/// in time and `n * 2^n` in memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverLimits {
    pub max_n_brute: usize,
    pub max_n_heldkarp: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_n_brute: 10,
            max_n_heldkarp: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverError {
    TooLarge {
        solver: &'static str,
        n: usize,
        limit: usize,
    },
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::TooLarge { solver, n, limit } => {
                write!(f, "{solver} solver limited to {limit} vertices, instance has {n}")
            }
        }
    }
}

impl std::error::Error for SolverError {}

struct BruteState<'a, W> {
    inst: &'a Instance<W>,
    route: Vec<usize>,
    used: Vec<bool>,
    best_order: Option<Vec<usize>>,
    best_len: Option<W>,
}

fn brute_dfs<W: Weight>(state: &mut BruteState<'_, W>, len: W) {
    // Nonnegative weights: a partial route strictly longer than the best
    // full tour cannot improve. Equality continues, so the first-found
    // (lexicographically least) optimum is kept.
    if let Some(best) = &state.best_len {
        if len.cmp_total(best) == Ordering::Greater {
            return;
        }
    }
    let n = state.inst.n();
    if state.route.len() == n {
        let last = *state.route.last().expect("route is nonempty");
        let total = len + state.inst.weight(last, 0).clone();
        let better = state
            .best_len
            .as_ref()
            .map_or(true, |best| total.cmp_total(best) == Ordering::Less);
        if better {
            state.best_len = Some(total);
            state.best_order = Some(state.route.clone());
        }
        return;
    }
    let last = *state.route.last().expect("route is nonempty");
    for v in 1..n {
        if state.used[v] {
            continue;
        }
        let next_len = len.clone() + state.inst.weight(last, v).clone();
        state.used[v] = true;
        state.route.push(v);
        brute_dfs(state, next_len);
        state.route.pop();
        state.used[v] = false;
    }
}

/// Optimal tour by pruned exhaustive search. Fixes vertex 0 first and
/// explores successors in ascending order, so among all optimal tours the
/// lexicographically least starting at 0 is returned.
pub fn brute_force_opt<W: Weight>(
    inst: &Instance<W>,
    limits: &SolverLimits,
) -> Result<Tour, SolverError> {
    let n = inst.n();
    if n > limits.max_n_brute {
        return Err(SolverError::TooLarge {
            solver: "brute-force",
            n,
            limit: limits.max_n_brute,
        });
    }
    let mut state = BruteState {
        inst,
        route: {
            let mut r = Vec::with_capacity(n);
            r.push(0);
            r
        },
        used: {
            let mut u = vec![false; n];
            u[0] = true;
            u
        },
        best_order: None,
        best_len: None,
    };
    brute_dfs(&mut state, W::zero());
    let order = state.best_order.expect("n >= 3 guarantees a tour");
    Ok(Tour::new(order).expect("search builds a permutation"))
}

/// Optimal tour by Held-Karp dynamic programming over (visited set, last
/// vertex), with vertex 0 as the anchor. Deterministic: states and
/// predecessors are scanned in ascending order and updated only on strict
/// improvement.
pub fn held_karp_opt<W: Weight>(
    inst: &Instance<W>,
    limits: &SolverLimits,
) -> Result<Tour, SolverError> {
    let n = inst.n();
    if n > limits.max_n_heldkarp {
        return Err(SolverError::TooLarge {
            solver: "held-karp",
            n,
            limit: limits.max_n_heldkarp,
        });
    }
    // dp[mask * m + v]: least weight of a path 0 -> ... -> v+1 visiting
    // exactly the vertices {u+1 : bit u of mask} beyond 0.
    let m = n - 1;
    let states = 1usize << m;
    let mut dp: Vec<Option<W>> = vec![None; states * m];
    let mut parent: Vec<u8> = vec![u8::MAX; states * m];
    for v in 0..m {
        dp[(1 << v) * m + v] = Some(inst.weight(0, v + 1).clone());
    }
    for mask in 1..states {
        for v in 0..m {
            if mask & (1 << v) == 0 || mask == 1 << v {
                continue;
            }
            let prev_mask = mask ^ (1 << v);
            let mut best: Option<(W, u8)> = None;
            for u in 0..m {
                if prev_mask & (1 << u) == 0 {
                    continue;
                }
                if let Some(path) = &dp[prev_mask * m + u] {
                    let cand = path.clone() + inst.weight(u + 1, v + 1).clone();
                    let better = best
                        .as_ref()
                        .map_or(true, |(b, _)| cand.cmp_total(b) == Ordering::Less);
                    if better {
                        best = Some((cand, u as u8));
                    }
                }
            }
            if let Some((w, u)) = best {
                dp[mask * m + v] = Some(w);
                parent[mask * m + v] = u;
            }
        }
    }
    let full = states - 1;
    let mut best: Option<(W, usize)> = None;
    for v in 0..m {
        if let Some(path) = &dp[full * m + v] {
            let total = path.clone() + inst.weight(v + 1, 0).clone();
            let better = best
                .as_ref()
                .map_or(true, |(b, _)| total.cmp_total(b) == Ordering::Less);
            if better {
                best = Some((total, v));
            }
        }
    }
    let (_, mut v) = best.expect("full mask is reachable");
    let mut mask = full;
    let mut suffix = Vec::with_capacity(m);
    loop {
        suffix.push(v + 1);
        let p = parent[mask * m + v];
        mask ^= 1 << v;
        if p == u8::MAX {
            break;
        }
        v = p as usize;
    }
    debug_assert_eq!(mask, 0);
    let mut order = Vec::with_capacity(n);
    order.push(0);
    order.extend(suffix.into_iter().rev());
    Ok(Tour::new(order).expect("reconstruction yields a permutation"))
}
