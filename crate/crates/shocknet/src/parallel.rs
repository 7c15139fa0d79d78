//! Rayon drivers. Each produces exactly the result of its sequential core
//! counterpart: work is split into disjoint pieces whose integer tallies
//! merge associatively, and Monte Carlo trials keep their per-trial streams.

use rayon::prelude::*;

use shocknet_core::partition::enumerate_with_first_block;
use shocknet_core::signature::{PartitionTally, SignatureEstimate, SignatureSampler};
use shocknet_core::sim::{curve_from_lifetimes, SimConfig};
use shocknet_core::{Error, Grid, LinkSet, Network, ReliabilityCurve, SignatureKind};

/// Death-number and killing-index tallies over every ordered partition,
/// split by first block.
pub fn partition_tally(net: &Network, limit: usize) -> shocknet_core::Result<PartitionTally> {
    if net.is_cut(LinkSet::EMPTY) {
        return Err(Error::InitiallyDown);
    }
    let n = net.link_count();
    // Surfaces the limit error before spawning work.
    enumerate_with_first_block(n, LinkSet::full(n), limit)?;
    (1u64..=LinkSet::full(n).bits())
        .into_par_iter()
        .map(|bits| {
            let mut tally = PartitionTally::new(n);
            for pi in enumerate_with_first_block(n, LinkSet::from_bits(bits), limit)? {
                tally.record(net, &pi)?;
            }
            Ok(tally)
        })
        .try_reduce(
            || PartitionTally::new(n),
            |mut a, b| {
                a.merge(&b);
                Ok(a)
            },
        )
}

/// Parallel `signature_mc`.
pub fn signature_mc(net: &Network, kind: SignatureKind, trials: u64, seed: u64) -> shocknet_core::Result<SignatureEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let sampler = SignatureSampler::new(net, kind)?;
    let n = net.link_count();
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut counts, trial| {
                counts[sampler.trial_index(seed, trial) - 1] += 1;
                counts
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    SignatureEstimate::from_counts(kind, counts)
}

/// Parallel `simulate_lifetimes`, in trial order.
pub fn simulate_lifetimes(cfg: &SimConfig) -> Vec<f64> {
    (0..cfg.trials()).into_par_iter().map(|trial| cfg.trial_lifetime(trial)).collect()
}

/// Parallel `mc_reliability_curve`.
pub fn mc_reliability_curve(cfg: &SimConfig, grid: &Grid) -> shocknet_core::Result<ReliabilityCurve> {
    curve_from_lifetimes(&simulate_lifetimes(cfg), grid)
}
