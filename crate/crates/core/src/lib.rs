//! Metric-TSP experimentation toolkit built around the 2-opt heuristic.
//!
//! The crate provides:
//!
//! * exact-rational and floating-point instance representations
//!   ([`instance`], [`weight`]),
//! * a deterministic 2-opt engine over directed tours ([`two_opt`]),
//! * exact baselines for small instances ([`exact`]),
//! * instance generators, including a worst-case family whose 2-optimal tour
//!   is exactly sqrt(n/2) times longer than the optimum ([`families`]),
//! * a geometric certificate that checks the sqrt(n/2) ratio bound on
//!   concrete tours by packing diamonds on the unit torus ([`certificate`]).
//!
//! Everything is generic over the [`weight::Weight`] mode. In exact mode all
//! comparisons are performed with zero tolerance; in floating-point mode the
//! engine and the certificate apply small documented slacks.

pub mod certificate;
pub mod exact;
pub mod families;
pub mod instance;
pub mod io;
pub mod tour;
pub mod two_opt;
pub mod weight;

pub use instance::{Instance, InstanceError, MetricReport, MetricViolation};
pub use io::AnyInstance;
pub use tour::{Tour, TourError};
pub use weight::{BigRational, Weight};
