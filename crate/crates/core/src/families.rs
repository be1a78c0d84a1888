//! Instance generators: a worst-case family with a provably bad 2-optimal
//! tour, plus seeded random families for stress testing.
//!
//! # The lower-bound family
//!
//! For a parameter `k >= 2`, [`lower_bound_family`] builds a metric instance
//! on `n = 2k^2` vertices split into two halves, `v`-vertices and
//! `w`-vertices, each arranged in `k` sections of `k` vertices
//! (`v_1_1 ... v_k_k` and `w_1_1 ... w_k_k`). Distances: 1 between
//! different halves, 0 within a section, 2 between different sections of
//! the same half.
//!
//! The instance ships with two tours. The optimal tour walks each section
//! contiguously and switches halves `2k` times, for total length `2k`. The
//! second tour alternates halves on every step — all `2k^2` edges cost 1 —
//! yet no 2-change improves it: every 2-change either keeps the number of
//! half-switches or pays for a section change. Its ratio is exactly
//! `2k^2 / 2k = k = sqrt(n/2)`, matching the engine's worst-case guarantee,
//! so these instances witness that the `sqrt(n/2)` bound is tight.
//!
//! # Random families
//!
//! Both random generators are fully deterministic in `(seed, index)`;
//! vertex coordinates / matrix entries are drawn from ChaCha8 streams.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, InstanceError};
use crate::tour::Tour;
use crate::weight::{BigRational, Weight};

/// Which half of the lower-bound construction a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    V,
    W,
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Half::V => write!(f, "v"),
            Half::W => write!(f, "w"),
        }
    }
}

/// Structured name of a lower-bound-family vertex: half, section `i`, and
/// position `j` within the section (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Label {
    pub half: Half,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.half, self.i, self.j)
    }
}

/// A lower-bound-family instance together with its two distinguished tours.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionedInstance {
    pub k: usize,
    pub instance: Instance<BigRational>,
    /// Label of each vertex index.
    pub labels: Vec<Label>,
    /// Length `2k`; provably optimal.
    pub optimal_tour: Tour,
    /// Length `2k^2`; 2-optimal, ratio exactly `k`.
    pub two_optimal_tour: Tour,
}

impl SectionedInstance {
    pub fn n(&self) -> usize {
        2 * self.k * self.k
    }

    /// `2k`, the length of [`SectionedInstance::optimal_tour`].
    pub fn optimal_length(&self) -> BigRational {
        BigRational::from_int(2 * self.k as u64)
    }

    /// `2k^2`, the length of [`SectionedInstance::two_optimal_tour`].
    pub fn two_optimal_length(&self) -> BigRational {
        BigRational::from_int(2 * (self.k * self.k) as u64)
    }

    /// `# index = label` comment lines for embedding in instance files.
    pub fn label_map_comments(&self) -> String {
        let mut out = String::new();
        for (idx, label) in self.labels.iter().enumerate() {
            out.push_str(&format!("# {idx} = {label}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    /// The lower-bound construction needs `k >= 2`.
    KTooSmall { k: usize },
    /// Random batches need at least 4 vertices so a 2-change exists.
    NTooSmall { n: usize },
    /// A batch of zero instances was requested.
    CountZero,
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::KTooSmall { k } => write!(f, "family parameter k is {k}, need at least 2"),
            GenError::NTooSmall { n } => write!(f, "requested {n} vertices, need at least 4"),
            GenError::CountZero => write!(f, "requested an empty batch of instances"),
        }
    }
}

impl std::error::Error for GenError {}

fn v_index(k: usize, i: usize, j: usize) -> usize {
    (i - 1) * k + (j - 1)
}

fn w_index(k: usize, i: usize, j: usize) -> usize {
    k * k + (i - 1) * k + (j - 1)
}

/// Builds the `n = 2k^2` worst-case instance and its two tours. See the
/// module docs for the construction.
pub fn lower_bound_family(k: usize) -> Result<SectionedInstance, GenError> {
    if k < 2 {
        return Err(GenError::KTooSmall { k });
    }
    let n = 2 * k * k;
    let mut labels = Vec::with_capacity(n);
    for half in [Half::V, Half::W] {
        for i in 1..=k {
            for j in 1..=k {
                labels.push(Label { half, i, j });
            }
        }
    }
    let mut weights = Vec::with_capacity(n * n);
    for a in &labels {
        for b in &labels {
            let w = if a == b {
                0
            } else if a.half != b.half {
                1
            } else if a.i == b.i {
                0
            } else {
                2
            };
            weights.push(BigRational::from_int(w));
        }
    }
    let instance = Instance::new(format!("paper-lb-k{k}"), n, weights)
        .expect("construction is symmetric with a zero diagonal");

    // Sections back to back: v_i_1..v_i_k then w_i_1..w_i_k, for i = 1..k.
    // Only the 2k half-switching edges cost anything.
    let mut optimal = Vec::with_capacity(n);
    for i in 1..=k {
        for j in 1..=k {
            optimal.push(v_index(k, i, j));
        }
        for j in 1..=k {
            optimal.push(w_index(k, i, j));
        }
    }

    // Alternate halves every step, pairing v_i_j with w_j_i; every edge
    // crosses halves and costs 1.
    let mut two_optimal = Vec::with_capacity(n);
    for i in 1..=k {
        for j in 1..=k {
            two_optimal.push(v_index(k, i, j));
            two_optimal.push(w_index(k, j, i));
        }
    }

    Ok(SectionedInstance {
        k,
        instance,
        labels,
        optimal_tour: Tour::new(optimal).expect("covers each vertex once"),
        two_optimal_tour: Tour::new(two_optimal).expect("covers each vertex once"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomFamily {
    /// Points uniform in the unit square, exact Euclidean `f64` distances.
    EuclideanUnitSquare,
    /// Uniform symmetric matrix pushed through its metric closure, in exact
    /// dyadic rationals so the triangle inequality holds with zero slack.
    MetricClosure,
}

impl fmt::Display for RandomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RandomFamily::EuclideanUnitSquare => write!(f, "random-euclidean"),
            RandomFamily::MetricClosure => write!(f, "random-metric"),
        }
    }
}

/// A reproducible batch request: instance `idx` of a batch is generated
/// from an independent ChaCha8 stream seeded with `seed + idx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomFamilySpec {
    pub family: RandomFamily,
    pub n: usize,
    pub seed: u64,
    pub count: usize,
}

impl RandomFamilySpec {
    fn validate(&self) -> Result<(), GenError> {
        if self.n < 4 {
            return Err(GenError::NTooSmall { n: self.n });
        }
        if self.count == 0 {
            return Err(GenError::CountZero);
        }
        Ok(())
    }
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64))
}

/// Uniform in `[0, 1)` with 53 random bits, the full precision of an `f64`.
fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The same 53-bit draw as [`unit_f64`], kept exact: `m / 2^53`.
fn unit_dyadic(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.next_u64() >> 11),
        BigInt::from(1u64 << 53),
    )
}

/// Distance matrix of explicit points in the plane.
pub fn euclidean_instance(
    name: impl Into<String>,
    points: &[(f64, f64)],
) -> Result<Instance<f64>, InstanceError> {
    let n = points.len();
    let mut weights = Vec::with_capacity(n * n);
    for &(xi, yi) in points {
        for &(xj, yj) in points {
            let (dx, dy) = (xi - xj, yi - yj);
            weights.push((dx * dx + dy * dy).sqrt());
        }
    }
    Instance::new(name, n, weights)
}

/// `count` instances of `n` uniform points in the unit square. Instance
/// names encode family, size, seed, and index.
pub fn random_euclidean(spec: &RandomFamilySpec) -> Result<Vec<Instance<f64>>, GenError> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.count);
    for idx in 0..spec.count {
        let mut rng = stream(spec.seed, idx);
        let points: Vec<(f64, f64)> = (0..spec.n)
            .map(|_| {
                let x = unit_f64(&mut rng);
                let y = unit_f64(&mut rng);
                (x, y)
            })
            .collect();
        let name = format!("euclid-n{}-s{}-{idx:03}", spec.n, spec.seed);
        out.push(euclidean_instance(name, &points).expect("distances are valid weights"));
    }
    Ok(out)
}

/// Shortest-path (metric) closure: replaces every weight with the least
/// path weight connecting its endpoints. Exact in rational mode; the output
/// always satisfies the triangle inequality outright, and closing an
/// already-closed instance changes nothing.
pub fn metric_closure<W: Weight>(inst: &Instance<W>) -> Instance<W> {
    let n = inst.n();
    let mut d: Vec<W> = inst.weights().to_vec();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i * n + k].clone() + d[k * n + j].clone();
                if via.cmp_total(&d[i * n + j]) == Ordering::Less {
                    d[i * n + j] = via;
                }
            }
        }
    }
    Instance::new(inst.name(), n, d).expect("closure preserves instance validity")
}

/// `count` random metric instances: a symmetric matrix of dyadic rationals
/// (entries drawn for `i < j` in row-major order), then its metric closure.
pub fn random_metric_closure(
    spec: &RandomFamilySpec,
) -> Result<Vec<Instance<BigRational>>, GenError> {
    spec.validate()?;
    let n = spec.n;
    let mut out = Vec::with_capacity(spec.count);
    for idx in 0..spec.count {
        let mut rng = stream(spec.seed, idx);
        let zero = BigRational::from_int(0);
        let mut weights = vec![zero; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let w = unit_dyadic(&mut rng);
                weights[i * n + j] = w.clone();
                weights[j * n + i] = w;
            }
        }
        let name = format!("metric-n{}-s{}-{idx:03}", n, spec.seed);
        let raw = Instance::new(name, n, weights).expect("symmetric by construction");
        out.push(metric_closure(&raw));
    }
    Ok(out)
}

/// Uniform random tour via Fisher-Yates on the identity order.
pub fn random_tour(n: usize, rng: &mut ChaCha8Rng) -> Tour {
    assert!(n >= 3, "tours need at least 3 vertices");
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    Tour::new(order).expect("shuffle preserves the permutation")
}
