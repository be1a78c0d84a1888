//! Geometric certificates for the sqrt(n/2) approximation ratio of 2-opt.
//!
//! Given a metric instance, a reference tour known to be optimal, and a
//! candidate tour, the certificate checks a chain of inequalities that
//! together force `candidate / optimal <= sqrt(n/2)`:
//!
//! 1. **Embed.** Each vertex is mapped to the circle `[0, 1)` at its
//!    normalized prefix distance along the reference tour ([`embed`]).
//!    Because the instance is metric, the circle distance between two
//!    vertices is at least their edge weight divided by the reference
//!    length.
//! 2. **Diamonds.** Each candidate edge `(u, v)` becomes an open L1 ball on
//!    the torus `[0, 1)^2` — a diamond — centered at `(i_p(u), i_q(v))`
//!    with radius `c(u, v) / c(reference)` and area `2 r^2`.
//! 3. **Disjointness.** If the candidate tour is 2-optimal, all its
//!    diamonds are pairwise disjoint. Contrapositively, whenever two
//!    diamonds overlap, the certificate extracts the strictly improving
//!    2-change that proves the candidate non-optimal ([`Violation`]).
//! 4. **Packing.** Disjoint open sets on the unit torus have total area at
//!    most 1: `2 * sum r_e^2 <= 1`.
//! 5. **Mean inequality.** By AM-QM over the `n` radii,
//!    `(sum r_e)^2 <= n * sum r_e^2 <= n/2`, and `sum r_e` is exactly the
//!    candidate/optimal ratio.
//!
//! Squares are compared instead of square roots so that exact mode never
//! leaves rational arithmetic; float mode applies an absolute `1e-9` slack
//! to every inequality. The lower-bound family shows the chain is tight:
//! its diamonds tile the torus with total area exactly 1.

use std::cmp::Ordering;
use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::tour::Tour;
use crate::two_opt::{self, TwoChange};
use crate::weight::{one_half, Weight};

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateError {
    DimensionMismatch { instance_n: usize, tour_n: usize },
    VertexOutOfRange { vertex: usize, n: usize },
    /// A circle position outside `[0, 1)`.
    PositionOutOfRange { value: f64 },
    /// Normalization is impossible: the reference tour has length zero.
    ZeroLengthReferenceTour,
    /// An edge longer than half the reference tour cannot occur on a metric
    /// instance; the certificate geometry would be meaningless.
    RadiusTooLarge { edge: (usize, usize) },
    GridResolutionTooSmall { resolution: usize },
    /// The input violated the metric precondition badly enough to break a
    /// certificate invariant.
    NonMetricInput { detail: String },
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateError::DimensionMismatch { instance_n, tour_n } => write!(
                f,
                "tour over {tour_n} vertices does not fit an instance with {instance_n}"
            ),
            CertificateError::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for {n} vertices")
            }
            CertificateError::PositionOutOfRange { value } => {
                write!(f, "circle position {value} outside [0, 1)")
            }
            CertificateError::ZeroLengthReferenceTour => {
                write!(f, "reference tour has length zero; cannot normalize")
            }
            CertificateError::RadiusTooLarge { edge: (u, v) } => write!(
                f,
                "edge ({u}, {v}) is longer than half the reference tour; instance is not metric"
            ),
            CertificateError::GridResolutionTooSmall { resolution } => {
                write!(f, "grid resolution {resolution} too small, need at least 100")
            }
            CertificateError::NonMetricInput { detail } => {
                write!(f, "instance is not metric: {detail}")
            }
        }
    }
}

impl std::error::Error for CertificateError {}

/// Distance on the circle `[0, 1)` with wraparound:
/// `min(|x - y|, 1 - |x - y|)`. Errors if either input is outside `[0, 1)`.
pub fn circle_metric<W: Weight>(x: &W, y: &W) -> Result<W, CertificateError> {
    for v in [x, y] {
        if v.is_negative() || v.cmp_total(&W::one()) != Ordering::Less {
            return Err(CertificateError::PositionOutOfRange {
                value: v.approx_f64(),
            });
        }
    }
    Ok(arc_distance(x, y))
}

/// [`circle_metric`] without the range check, for positions already known
/// to be canonical.
fn arc_distance<W: Weight>(x: &W, y: &W) -> W {
    let d = (x.clone() - y.clone()).abs();
    let wrap = W::one() - d.clone();
    if d.cmp_total(&wrap) == Ordering::Greater {
        wrap
    } else {
        d
    }
}

/// Vertex positions on the circle `[0, 1)`: normalized prefix distances
/// along a reference tour, measured from a base vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleEmbedding<W> {
    base_vertex: usize,
    positions: Vec<W>,
}

impl<W: Weight> CircleEmbedding<W> {
    pub fn base_vertex(&self) -> usize {
        self.base_vertex
    }

    /// Position of each vertex, indexed by vertex number.
    pub fn positions(&self) -> &[W] {
        &self.positions
    }

    pub fn position(&self, vertex: usize) -> Option<&W> {
        self.positions.get(vertex)
    }
}

/// Embeds the vertices on the circle: `base` sits at 0 and every other
/// vertex at the total weight of the reference-tour path from `base` to it,
/// divided by the full reference length. All positions land in `[0, 1)`.
pub fn embed<W: Weight>(
    inst: &Instance<W>,
    reference: &Tour,
    base: usize,
) -> Result<CircleEmbedding<W>, CertificateError> {
    let n = inst.n();
    if reference.n() != n {
        return Err(CertificateError::DimensionMismatch {
            instance_n: n,
            tour_n: reference.n(),
        });
    }
    if base >= n {
        return Err(CertificateError::VertexOutOfRange { vertex: base, n });
    }
    let total = inst.tour_length(reference).expect("dimensions checked");
    if total.is_zero() {
        return Err(CertificateError::ZeroLengthReferenceTour);
    }
    let order = reference.order();
    let start = reference.position_of(base).expect("base is a vertex");
    let mut positions = vec![W::zero(); n];
    let mut acc = W::zero();
    for step in 1..n {
        let prev = order[(start + step - 1) % n];
        let cur = order[(start + step) % n];
        acc = acc + inst.weight(prev, cur).clone() / total.clone();
        // A prefix can reach the full length early only via trailing
        // zero-weight edges; wrap it so positions stay canonical.
        if acc.cmp_total(&W::one()) != Ordering::Less {
            acc = acc - W::one();
        }
        positions[cur] = acc.clone();
    }
    Ok(CircleEmbedding {
        base_vertex: base,
        positions,
    })
}

/// Rotates an embedding so that `base` moves to position 0. In exact mode
/// the result is bit-identical to re-embedding from `base` directly; the
/// whole certificate is invariant under this translation.
pub fn rebase_embedding<W: Weight>(
    emb: &CircleEmbedding<W>,
    base: usize,
) -> Result<CircleEmbedding<W>, CertificateError> {
    let n = emb.positions.len();
    if base >= n {
        return Err(CertificateError::VertexOutOfRange { vertex: base, n });
    }
    let offset = emb.positions[base].clone();
    if offset.is_zero() {
        return Ok(CircleEmbedding {
            base_vertex: base,
            positions: emb.positions.clone(),
        });
    }
    let shift = W::one() - offset;
    let positions = emb
        .positions
        .iter()
        .map(|p| {
            let moved = p.clone() + shift.clone();
            if moved.cmp_total(&W::one()) != Ordering::Less {
                moved - W::one()
            } else {
                moved
            }
        })
        .collect();
    Ok(CircleEmbedding {
        base_vertex: base,
        positions,
    })
}

/// An open L1 ball on the unit torus, encoding one candidate-tour edge.
#[derive(Clone, Debug, PartialEq)]
pub struct Diamond<W> {
    pub center: (W, W),
    pub radius: W,
    /// The candidate edge `(u, v)` this diamond encodes.
    pub edge: (usize, usize),
}

/// Exact disjointness of two open diamonds: they are disjoint iff the torus
/// L1 distance between their centers is at least the radius sum (the torus
/// metric is geodesic, so touching boundaries do not intersect). A diamond
/// of radius 0 is empty and disjoint from everything.
pub fn diamonds_disjoint<W: Weight>(a: &Diamond<W>, b: &Diamond<W>) -> bool {
    if a.radius.is_zero() || b.radius.is_zero() {
        return true;
    }
    let gap = arc_distance(&a.center.0, &b.center.0) + arc_distance(&a.center.1, &b.center.1);
    let radius_sum = a.radius.clone() + b.radius.clone();
    gap.cmp_total(&radius_sum) != Ordering::Less
}

/// Exact area `2 r^2` of a diamond. Radii above 1/2 (plus float slack) are
/// rejected: on the torus such a "ball" would self-overlap, and a metric
/// instance can never produce one.
pub fn diamond_area<W: Weight>(d: &Diamond<W>) -> Result<W, CertificateError> {
    let limit = one_half::<W>() + W::certificate_tolerance();
    if d.radius.cmp_total(&limit) == Ordering::Greater {
        return Err(CertificateError::RadiusTooLarge { edge: d.edge });
    }
    Ok(W::from_int(2) * d.radius.clone() * d.radius.clone())
}

/// Independent check of [`diamond_area`]: counts a `resolution x resolution`
/// grid over the torus. Grid points within `1e-9` of the boundary count
/// half, which keeps lattice-aligned configurations unbiased. Resolution
/// must be at least 100.
pub fn estimate_diamond_area<W: Weight>(
    d: &Diamond<W>,
    resolution: usize,
) -> Result<f64, CertificateError> {
    if resolution < 100 {
        return Err(CertificateError::GridResolutionTooSmall { resolution });
    }
    if d.radius.is_zero() {
        return Ok(0.0); // empty set; the center itself is not inside
    }
    let cx = d.center.0.approx_f64();
    let cy = d.center.1.approx_f64();
    let r = d.radius.approx_f64();
    let step = 1.0 / resolution as f64;
    let arc = |a: f64, b: f64| {
        let d = (a - b).abs();
        d.min(1.0 - d)
    };
    let band = 1e-9;
    let mut inside: u64 = 0;
    let mut boundary: u64 = 0;
    for i in 0..resolution {
        let dx = arc(i as f64 * step, cx);
        if dx > r + band {
            continue;
        }
        for j in 0..resolution {
            let s = dx + arc(j as f64 * step, cy);
            if s < r - band {
                inside += 1;
            } else if s <= r + band {
                boundary += 1;
            }
        }
    }
    let samples = (resolution * resolution) as f64;
    Ok((inside as f64 + boundary as f64 / 2.0) / samples)
}

/// Builds the diamond of every candidate edge: edge `e` (leaving tour
/// position `e`) gets center `(i_p(u), i_q(v))` and radius
/// `c(u, v) / c(reference)`.
pub fn candidate_diamonds<W: Weight>(
    inst: &Instance<W>,
    reference: &Tour,
    candidate: &Tour,
    p: usize,
    q: usize,
) -> Result<Vec<Diamond<W>>, CertificateError> {
    if candidate.n() != inst.n() {
        return Err(CertificateError::DimensionMismatch {
            instance_n: inst.n(),
            tour_n: candidate.n(),
        });
    }
    let emb_p = embed(inst, reference, p)?;
    let emb_q = if q == p {
        emb_p.clone()
    } else {
        embed(inst, reference, q)?
    };
    let total = inst.tour_length(reference).expect("embed validated");
    let limit = one_half::<W>() + W::certificate_tolerance();
    let mut diamonds = Vec::with_capacity(inst.n());
    for (u, v) in candidate.edges() {
        let radius = inst.weight(u, v).clone() / total.clone();
        if radius.cmp_total(&limit) == Ordering::Greater {
            return Err(CertificateError::RadiusTooLarge { edge: (u, v) });
        }
        diamonds.push(Diamond {
            center: (
                emb_p.positions[u].clone(),
                emb_q.positions[v].clone(),
            ),
            radius,
            edge: (u, v),
        });
    }
    Ok(diamonds)
}

/// Witness that two candidate edges' diamonds overlap, together with the
/// improving 2-change that overlap implies.
#[derive(Clone, Debug)]
pub struct Violation<W> {
    /// Indices into the candidate edge list (equal to tour positions).
    pub edge_a: usize,
    pub edge_b: usize,
    /// Torus L1 distance between the two centers.
    pub center_gap: W,
    pub radius_sum: W,
    /// The 2-change at positions `(edge_a, edge_b)`; its gain is
    /// `radius_sum - center_gap` scaled back up, hence strictly positive.
    pub witness: TwoChange<W>,
}

/// Everything the certificate established, one field per link of the chain.
#[derive(Clone, Debug)]
pub struct CertificateReport<W> {
    pub n: usize,
    /// Embedding base vertices `(p, q)`.
    pub base_pair: (usize, usize),
    /// Absolute slack applied to every inequality (zero in exact mode).
    pub tolerance: W,
    /// Reference tour length; radii are edge weights divided by it.
    pub normalization: W,
    pub candidate_length: W,
    /// Per candidate edge, in tour order.
    pub radii: Vec<W>,
    pub areas: Vec<W>,
    /// No two diamonds overlap.
    pub disjoint: bool,
    /// First overlapping pair in lexicographic order, if any.
    pub violation: Option<Violation<W>>,
    /// Sum of squared radii.
    pub sum_sq: W,
    /// `2 * sum_sq`, the total diamond area.
    pub total_area: W,
    /// `total_area <= 1`.
    pub packing_ok: bool,
    /// `candidate_length / normalization`.
    pub ratio: W,
    /// `ratio^2 <= n * sum_sq` (AM-QM).
    pub am_qm_ok: bool,
    /// `n / 2`, the exact square of the certified bound.
    pub bound_sq: W,
    /// `ratio^2 <= n / 2`.
    pub bound_ok: bool,
}

impl<W: Weight> CertificateReport<W> {
    /// True when the whole chain holds: disjoint diamonds, packing, AM-QM,
    /// and the final ratio bound.
    pub fn all_ok(&self) -> bool {
        self.disjoint && self.packing_ok && self.am_qm_ok && self.bound_ok
    }

    /// The certified bound `sqrt(n/2)` as a double, for display.
    pub fn bound(&self) -> f64 {
        (self.n as f64 / 2.0).sqrt()
    }

    pub fn zero_radius_edges(&self) -> usize {
        self.radii.iter().filter(|r| r.is_zero()).count()
    }

    /// Human-readable multi-line summary.
    pub fn to_text(&self) -> String {
        let verdict = |ok: bool| if ok { "ok" } else { "VIOLATED" };
        let mut out = String::new();
        out.push_str(&format!(
            "certificate over n={} vertices, bases (p, q) = ({}, {})\n",
            self.n, self.base_pair.0, self.base_pair.1
        ));
        out.push_str(&format!("  normalization (reference length) = {}\n", self.normalization));
        out.push_str(&format!("  candidate length                 = {}\n", self.candidate_length));
        out.push_str(&format!("  ratio                            = {}\n", self.ratio));
        out.push_str(&format!(
            "  diamonds: {} total, {} with radius 0\n",
            self.radii.len(),
            self.zero_radius_edges()
        ));
        match &self.violation {
            None => out.push_str("  pairwise disjoint: ok\n"),
            Some(v) => out.push_str(&format!(
                "  pairwise disjoint: VIOLATED by edges {} and {} (center gap {} < radius sum {});\n    improving 2-change at positions ({}, {}) with gain {}\n",
                v.edge_a, v.edge_b, v.center_gap, v.radius_sum,
                v.witness.pos_i, v.witness.pos_j, v.witness.gain
            )),
        }
        out.push_str(&format!(
            "  packing: total area {} <= 1: {}\n",
            self.total_area,
            verdict(self.packing_ok)
        ));
        out.push_str(&format!(
            "  mean inequality: ratio^2 {} <= n * sum_sq {}: {}\n",
            self.ratio.clone() * self.ratio.clone(),
            W::from_int(self.n as u64) * self.sum_sq.clone(),
            verdict(self.am_qm_ok)
        ));
        out.push_str(&format!(
            "  bound: ratio {} <= sqrt(n/2) = {}: {}\n",
            self.ratio,
            self.bound(),
            verdict(self.bound_ok)
        ));
        out.push_str(&format!("  overall: {}\n", if self.all_ok() { "PASS" } else { "FAIL" }));
        out
    }

    /// Machine-readable `key=value` lines. Keys: `n`, `p`, `q`,
    /// `normalization`, `candidate_length`, `ratio`, `sum_sq`,
    /// `packing_lhs`, `packing_ok`, `am_qm_ok`, `bound_sq`, `bound`,
    /// `bound_ok`, `disjoint`, `violation_pair`, `violation_gain`,
    /// `all_ok`.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n={}\n", self.n));
        out.push_str(&format!("p={}\n", self.base_pair.0));
        out.push_str(&format!("q={}\n", self.base_pair.1));
        out.push_str(&format!("normalization={}\n", self.normalization));
        out.push_str(&format!("candidate_length={}\n", self.candidate_length));
        out.push_str(&format!("ratio={}\n", self.ratio));
        out.push_str(&format!("sum_sq={}\n", self.sum_sq));
        out.push_str(&format!("packing_lhs={}\n", self.total_area));
        out.push_str(&format!("packing_ok={}\n", self.packing_ok));
        out.push_str(&format!("am_qm_ok={}\n", self.am_qm_ok));
        out.push_str(&format!("bound_sq={}\n", self.bound_sq));
        out.push_str(&format!("bound={}\n", self.bound()));
        out.push_str(&format!("bound_ok={}\n", self.bound_ok));
        out.push_str(&format!("disjoint={}\n", self.disjoint));
        match &self.violation {
            None => {
                out.push_str("violation_pair=none\n");
                out.push_str("violation_gain=none\n");
            }
            Some(v) => {
                out.push_str(&format!("violation_pair={},{}\n", v.edge_a, v.edge_b));
                out.push_str(&format!("violation_gain={}\n", v.witness.gain));
            }
        }
        out.push_str(&format!("all_ok={}\n", self.all_ok()));
        out
    }
}

/// Runs the full certificate chain for a candidate tour against an optimal
/// reference tour. `p` and `q` pick the embedding bases for the two torus
/// axes; every reported quantity is invariant under that choice (see
/// [`invariance_check`]).
///
/// The instance must be metric and the reference optimal; those
/// preconditions are the caller's. A report is returned even when checks
/// fail — failures are recorded in the flags — but structurally impossible
/// inputs (dimension mismatches, zero-length reference, an edge longer than
/// half the reference) are hard errors.
pub fn certify<W: Weight>(
    inst: &Instance<W>,
    reference: &Tour,
    candidate: &Tour,
    p: usize,
    q: usize,
) -> Result<CertificateReport<W>, CertificateError> {
    let n = inst.n();
    let diamonds = candidate_diamonds(inst, reference, candidate, p, q)?;
    let normalization = inst.tour_length(reference).expect("validated");
    let candidate_length = inst.tour_length(candidate).expect("validated");
    let tolerance = W::certificate_tolerance();

    let mut violation = None;
    'scan: for a in 0..n {
        if diamonds[a].radius.is_zero() {
            continue;
        }
        for b in (a + 1)..n {
            if diamonds[b].radius.is_zero() {
                continue;
            }
            let gap = arc_distance(&diamonds[a].center.0, &diamonds[b].center.0)
                + arc_distance(&diamonds[a].center.1, &diamonds[b].center.1);
            let radius_sum = diamonds[a].radius.clone() + diamonds[b].radius.clone();
            let threshold = radius_sum.clone() - tolerance.clone();
            if gap.cmp_total(&threshold) == Ordering::Less {
                let gain = two_opt::gain(inst, candidate, a, b).map_err(|e| {
                    CertificateError::NonMetricInput {
                        detail: format!(
                            "overlapping diamonds for adjacent edges {a} and {b} ({e})"
                        ),
                    }
                })?;
                violation = Some(Violation {
                    edge_a: a,
                    edge_b: b,
                    center_gap: gap,
                    radius_sum,
                    witness: TwoChange {
                        pos_i: a,
                        pos_j: b,
                        gain,
                    },
                });
                break 'scan;
            }
        }
    }

    let radii: Vec<W> = diamonds.iter().map(|d| d.radius.clone()).collect();
    let mut areas = Vec::with_capacity(n);
    for d in &diamonds {
        areas.push(diamond_area(d)?);
    }
    let sum_sq: W = radii.iter().map(|r| r.clone() * r.clone()).sum();
    let total_area = W::from_int(2) * sum_sq.clone();
    let ratio = candidate_length.clone() / normalization.clone();
    let ratio_sq = ratio.clone() * ratio.clone();
    let bound_sq = W::from_int(n as u64) / W::from_int(2);

    let le_with_tol = |lhs: &W, rhs: &W| {
        lhs.cmp_total(&(rhs.clone() + tolerance.clone())) != Ordering::Greater
    };
    let packing_ok = le_with_tol(&total_area, &W::one());
    let am_qm_rhs = W::from_int(n as u64) * sum_sq.clone();
    let am_qm_ok = le_with_tol(&ratio_sq, &am_qm_rhs);
    let bound_ok = le_with_tol(&ratio_sq, &bound_sq);

    Ok(CertificateReport {
        n,
        base_pair: (p, q),
        tolerance,
        normalization,
        candidate_length,
        radii,
        areas,
        disjoint: violation.is_none(),
        violation,
        sum_sq,
        total_area,
        packing_ok,
        ratio,
        am_qm_ok,
        bound_sq,
        bound_ok,
    })
}

/// Compares the certificate geometry computed from bases `(p1, q1)` against
/// `(p2, q2)`: per-edge radii and areas, all pairwise center gaps, and the
/// per-pair violation verdicts (overlap margin below `-tolerance`, the same
/// rule [`certify`] applies). Exact mode demands equality; float mode allows
/// the usual `1e-9` slack on the numeric comparisons. Raw boundary verdicts
/// are deliberately not compared: diamonds of candidate edges shared with
/// the reference tour touch exactly, and rounding may tip the touching pair
/// either way between two embeddings.
pub fn embeddings_agree<W: Weight>(
    inst: &Instance<W>,
    reference: &Tour,
    candidate: &Tour,
    first: (usize, usize),
    second: (usize, usize),
) -> Result<bool, CertificateError> {
    let d1 = candidate_diamonds(inst, reference, candidate, first.0, first.1)?;
    let d2 = candidate_diamonds(inst, reference, candidate, second.0, second.1)?;
    let tolerance = W::certificate_tolerance();
    let close = |a: &W, b: &W| {
        (a.clone() - b.clone()).abs().cmp_total(&tolerance) != Ordering::Greater
    };
    let n = d1.len();
    for e in 0..n {
        if !close(&d1[e].radius, &d2[e].radius) {
            return Ok(false);
        }
        match (diamond_area(&d1[e]), diamond_area(&d2[e])) {
            (Ok(a1), Ok(a2)) => {
                if !close(&a1, &a2) {
                    return Ok(false);
                }
            }
            (e1, e2) => {
                e1?;
                e2?;
            }
        }
    }
    let violates = |x: &Diamond<W>, y: &Diamond<W>| {
        if x.radius.is_zero() || y.radius.is_zero() {
            return false;
        }
        let gap = arc_distance(&x.center.0, &y.center.0) + arc_distance(&x.center.1, &y.center.1);
        let margin = gap - (x.radius.clone() + y.radius.clone());
        margin.cmp_total(&-tolerance.clone()) == Ordering::Less
    };
    for a in 0..n {
        for b in (a + 1)..n {
            let gap1 = arc_distance(&d1[a].center.0, &d1[b].center.0)
                + arc_distance(&d1[a].center.1, &d1[b].center.1);
            let gap2 = arc_distance(&d2[a].center.0, &d2[b].center.0)
                + arc_distance(&d2[a].center.1, &d2[b].center.1);
            if !close(&gap1, &gap2) {
                return Ok(false);
            }
            if violates(&d1[a], &d1[b]) != violates(&d2[a], &d2[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Draws `trials` random base pairs `(p, q)` from a seeded ChaCha8 stream
/// and checks each against the default bases (the reference tour's first
/// vertex) with [`embeddings_agree`]. True when every trial agrees.
pub fn invariance_check<W: Weight>(
    inst: &Instance<W>,
    reference: &Tour,
    candidate: &Tour,
    trials: usize,
    seed: u64,
) -> Result<bool, CertificateError> {
    let n = inst.n() as u64;
    let default_base = reference.order()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let p = (rng.next_u64() % n) as usize;
        let q = (rng.next_u64() % n) as usize;
        if !embeddings_agree(
            inst,
            reference,
            candidate,
            (default_base, default_base),
            (p, q),
        )? {
            return Ok(false);
        }
    }
    Ok(true)
}
