//! Core algorithms for signature-based reliability of two-state networks
//! under shock models.
//!
//! A network is an undirected multigraph with a terminal set; it is *up*
//! while all terminals stay connected through surviving links. Shocks arrive
//! as a counting process and fail links; the crate computes:
//!
//! - exact classical, tie (t-) and fatal-shock signatures by enumerating
//!   permutations or ordered set partitions of the link set ([`signature`]),
//! - the coefficients coupling a signature to shock counts, for binomial,
//!   one-per-shock and fatal damage ([`shock`]),
//! - reliability, hazard and aging/ordering diagnostics ([`reliability`],
//!   [`ordering`]),
//! - an event-driven Monte Carlo oracle with model-faithful and mechanistic
//!   semantics ([`sim`]).
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! parallel drivers live in the `shocknet` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod fixtures;
pub mod math;
pub mod network;
pub mod ordering;
pub mod partition;
pub mod reliability;
pub mod shock;
pub mod signature;
pub mod sim;

pub use error::{Error, Result};
pub use network::{FailureSet, LinkSet, Network};
pub use partition::OrderedPartition;
pub use reliability::{Grid, ReliabilityCurve};
pub use shock::{BetaSequence, DamageModel, FirstArrivalLaw};
pub use signature::{SignatureKind, SignatureVector, TailVector};

/// Exact rational type used for every signature entry.
pub type Rational = num_rational::BigRational;
