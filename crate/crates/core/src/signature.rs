//! Classical, tie (t-) and fatal-shock signatures.
//!
//! * classical: `s_i = P(the i-th failure in a uniformly random permutation
//!   of the links downs the network)`;
//! * tie: over uniformly random ordered partitions, `s_i = P(M = i)` where
//!   `M` is the death number (see [`death_number`]);
//! * fatal: over the same law, `s_i = P(the i-th block downs the network)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::LinkSet;
use crate::partition::{self, OrderedPartition, PartitionSampler, DEFAULT_ENUMERATION_LIMIT};
use crate::{Error, Network, Rational, Result};

/// Largest link count for the permutation-based classical signature.
pub const CLASSICAL_LIMIT: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignatureKind {
    Classical,
    Tie,
    Fatal,
}

impl SignatureKind {
    pub fn name(self) -> &'static str {
        match self {
            SignatureKind::Classical => "classical",
            SignatureKind::Tie => "tie",
            SignatureKind::Fatal => "fatal",
        }
    }
}

impl fmt::Display for SignatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exact probability vector `(s_1, ..., s_n)` over failure indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureVector {
    kind: SignatureKind,
    probs: Vec<Rational>,
}

impl SignatureVector {
    /// Validates non-negativity and that the entries sum to exactly one.
    pub fn new(kind: SignatureKind, probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NotAPmf("empty signature"));
        }
        if probs.iter().any(Signed::is_negative) {
            return Err(Error::NotAPmf("negative entry"));
        }
        let total: Rational = probs.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::NotAPmf("entries do not sum to one"));
        }
        Ok(SignatureVector { kind, probs })
    }

    /// From integer counts over a sample space of size `total`.
    pub fn from_counts(kind: SignatureKind, counts: &[u64], total: u64) -> Result<Self> {
        if total == 0 {
            return Err(Error::NotAPmf("empty sample space"));
        }
        let probs = counts
            .iter()
            .map(|&c| Rational::new(BigInt::from(c), BigInt::from(total)))
            .collect();
        SignatureVector::new(kind, probs)
    }

    pub fn kind(&self) -> SignatureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `s_1, ..., s_n` (index `i - 1` holds `s_i`).
    pub fn probabilities(&self) -> &[Rational] {
        &self.probs
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Least common denominator of the entries.
    pub fn common_denominator(&self) -> BigUint {
        let lcm = self.probs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        lcm.to_biguint().expect("positive denominators")
    }

    /// Entries as numerators over `denominator`, which must be a multiple of
    /// every entry's reduced denominator.
    pub fn numerators_over(&self, denominator: &BigUint) -> Option<Vec<BigUint>> {
        let d = BigInt::from(denominator.clone());
        self.probs
            .iter()
            .map(|r| {
                let (q, rem) = d.div_rem(r.denom());
                rem.is_zero().then(|| (r.numer() * q).to_biguint().expect("non-negative"))
            })
            .collect()
    }

    /// `S_j = sum_{i > j} s_i` for `j = 0, ..., n - 1`.
    pub fn tail(&self) -> TailVector {
        let n = self.probs.len();
        let mut values = vec![Rational::zero(); n];
        let mut acc = Rational::zero();
        for j in (0..n).rev() {
            acc += &self.probs[j];
            values[j] = acc.clone();
        }
        TailVector { values }
    }
}

/// Tail sums `S_j = sum_{i > j} s_i`, `j = 0, ..., n - 1`; `S_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailVector {
    values: Vec<Rational>,
}

impl TailVector {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Index (1-based) of the first block whose cumulative union downs the
/// network.
pub fn killing_shock_index(net: &Network, pi: &OrderedPartition) -> Result<usize> {
    check_ground(net, pi)?;
    let mut failed = LinkSet::EMPTY;
    for (j, block) in pi.blocks().iter().enumerate() {
        failed = failed.union(*block);
        if net.is_cut(failed) {
            return Ok(j + 1);
        }
    }
    Err(Error::NeverFails)
}

/// The death number `M` of a failure history.
///
/// Let the killing block be the first block whose cumulative union is a cut.
/// `M` is the number of links failed in earlier blocks plus the fewest links
/// of the killing block that complete a cut together with them. This equals
/// the smallest classical failure index over all orderings of the links
/// consistent with `pi`.
pub fn death_number(net: &Network, pi: &OrderedPartition) -> Result<usize> {
    check_ground(net, pi)?;
    let mut prior = LinkSet::EMPTY;
    for block in pi.blocks() {
        if net.is_cut(prior.union(*block)) {
            return Ok(prior.len() + min_completion(net, prior, *block));
        }
        prior = prior.union(*block);
    }
    Err(Error::NeverFails)
}

/// Smallest `|S|`, `S ⊆ block`, with `prior ∪ S` a cut. Subsets are visited
/// by increasing size; the caller guarantees `S = block` works.
fn min_completion(net: &Network, prior: LinkSet, block: LinkSet) -> usize {
    let ids: Vec<u32> = block.iter().collect();
    let m = ids.len();
    for size in 1..m {
        // Gosper's hack over index masks of the given popcount.
        let mut mask: u128 = (1u128 << size) - 1;
        while mask < (1u128 << m) {
            let subset = LinkSet::from_ids((0..m).filter(|i| mask & (1 << i) != 0).map(|i| ids[i]));
            if net.is_cut(prior.union(subset)) {
                return size;
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    m
}

/// Signatures are defined only for networks that start up.
pub(crate) fn ensure_up(net: &Network) -> Result<()> {
    if net.is_cut(LinkSet::EMPTY) {
        return Err(Error::InitiallyDown);
    }
    Ok(())
}

fn check_ground(net: &Network, pi: &OrderedPartition) -> Result<()> {
    if pi.ground_size() != net.link_count() {
        return Err(Error::InvalidPartition { n: net.link_count(), reason: "size differs from the link count" });
    }
    Ok(())
}

/// Integer tallies of death numbers and killing indices; merging is
/// order-independent so streams may be processed in parallel.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionTally {
    pub death: Vec<u64>,
    pub killing: Vec<u64>,
    pub total: u64,
}

impl PartitionTally {
    pub fn new(n: usize) -> Self {
        PartitionTally { death: vec![0; n], killing: vec![0; n], total: 0 }
    }

    pub fn record(&mut self, net: &Network, pi: &OrderedPartition) -> Result<()> {
        self.death[death_number(net, pi)? - 1] += 1;
        self.killing[killing_shock_index(net, pi)? - 1] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &PartitionTally) {
        for (a, b) in self.death.iter_mut().zip(&other.death) {
            *a += b;
        }
        for (a, b) in self.killing.iter_mut().zip(&other.killing) {
            *a += b;
        }
        self.total += other.total;
    }

    pub fn tie_signature(&self) -> Result<SignatureVector> {
        SignatureVector::from_counts(SignatureKind::Tie, &self.death, self.total)
    }

    pub fn fatal_signature(&self) -> Result<SignatureVector> {
        SignatureVector::from_counts(SignatureKind::Fatal, &self.killing, self.total)
    }
}

/// Tallies over every ordered partition of the link set.
pub fn partition_tally(net: &Network, limit: usize) -> Result<PartitionTally> {
    ensure_up(net)?;
    let n = net.link_count();
    let mut tally = PartitionTally::new(n);
    for pi in partition::enumerate_ordered_partitions_with_limit(n, limit)? {
        tally.record(net, &pi)?;
    }
    Ok(tally)
}

/// Exact t-signature by enumerating all `n*` ordered partitions.
pub fn t_signature(net: &Network) -> Result<SignatureVector> {
    partition_tally(net, DEFAULT_ENUMERATION_LIMIT)?.tie_signature()
}

/// Exact fatal-shock signature.
pub fn fatal_signature(net: &Network) -> Result<SignatureVector> {
    partition_tally(net, DEFAULT_ENUMERATION_LIMIT)?.fatal_signature()
}

/// Classical signature `n_i / n!` by walking failure orders until the
/// network goes down; every completion of a killing prefix of length `i`
/// adds `(n - i)!` orders to `n_i`.
pub fn classical_signature(net: &Network) -> Result<SignatureVector> {
    let n = net.link_count();
    if n > CLASSICAL_LIMIT {
        return Err(Error::EnumerationLimit { n, limit: CLASSICAL_LIMIT });
    }
    let mut factorial = vec![1u64; n + 1];
    for i in 1..=n {
        factorial[i] = factorial[i - 1] * i as u64;
    }
    ensure_up(net)?;
    let mut counts = vec![0u64; n];
    walk_orders(net, LinkSet::EMPTY, 0, &factorial, &mut counts);
    SignatureVector::from_counts(SignatureKind::Classical, &counts, factorial[n])
}

fn walk_orders(net: &Network, failed: LinkSet, depth: usize, factorial: &[u64], counts: &mut [u64]) {
    let n = counts.len();
    for id in net.all_links().difference(failed).iter() {
        let next = failed.union(LinkSet::from_ids([id]));
        if net.is_cut(next) {
            counts[depth] += factorial[n - depth - 1];
        } else {
            walk_orders(net, next, depth + 1, factorial, counts);
        }
    }
}

/// Monte Carlo estimate of a signature with per-entry standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureEstimate {
    pub kind: SignatureKind,
    /// Trials whose failure index was `i` (index `i - 1`).
    pub counts: Vec<u64>,
    pub estimates: Vec<f64>,
    pub stderr: Vec<f64>,
    pub trials: u64,
}

impl SignatureEstimate {
    /// Proportions and binomial standard errors from raw counts.
    pub fn from_counts(kind: SignatureKind, counts: Vec<u64>) -> Result<Self> {
        let trials: u64 = counts.iter().sum();
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        let total = trials as f64;
        let estimates: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
        let stderr = estimates.iter().map(|&p| crate::math::sqrt(p * (1.0 - p) / total)).collect();
        Ok(SignatureEstimate { kind, counts, estimates, stderr, trials })
    }
}

/// Per-trial random stream: ChaCha8 keyed by `seed` (via
/// `SeedableRng::seed_from_u64`) with the trial index as stream id.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws failure indices for one signature kind. Classical trials shuffle
/// the links; tie and fatal trials draw a uniform ordered partition.
#[derive(Clone, Debug)]
pub struct SignatureSampler<'a> {
    net: &'a Network,
    kind: SignatureKind,
    partitions: Option<PartitionSampler>,
}

impl<'a> SignatureSampler<'a> {
    pub fn new(net: &'a Network, kind: SignatureKind) -> Result<Self> {
        ensure_up(net)?;
        let partitions = match kind {
            SignatureKind::Classical => None,
            _ => Some(PartitionSampler::new(net.link_count())?),
        };
        Ok(SignatureSampler { net, kind, partitions })
    }

    pub fn kind(&self) -> SignatureKind {
        self.kind
    }

    /// Failure index (1-based) of trial `trial` in a run seeded with `seed`.
    pub fn trial_index(&self, seed: u64, trial: u64) -> usize {
        let mut rng = trial_rng(seed, trial);
        match &self.partitions {
            None => {
                let mut order: Vec<u32> = (1..=self.net.link_count() as u32).collect();
                order.shuffle(&mut rng);
                let mut failed = LinkSet::EMPTY;
                for (i, id) in order.into_iter().enumerate() {
                    failed.insert(id);
                    if self.net.is_cut(failed) {
                        return i + 1;
                    }
                }
                unreachable!("losing every link disconnects distinct terminals")
            }
            Some(sampler) => {
                let pi = sampler.sample(&mut rng);
                let index = match self.kind {
                    SignatureKind::Fatal => killing_shock_index(self.net, &pi),
                    _ => death_number(self.net, &pi),
                };
                index.expect("sampled partitions cover the link set")
            }
        }
    }
}

/// Estimates a signature from `trials` independent draws.
pub fn signature_mc(net: &Network, kind: SignatureKind, trials: u64, seed: u64) -> Result<SignatureEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let sampler = SignatureSampler::new(net, kind)?;
    let mut counts = vec![0u64; net.link_count()];
    for trial in 0..trials {
        counts[sampler.trial_index(seed, trial) - 1] += 1;
    }
    SignatureEstimate::from_counts(kind, counts)
}

/// Estimates the t-signature from `trials` uniform ordered partitions.
pub fn t_signature_mc(net: &Network, trials: u64, seed: u64) -> Result<SignatureEstimate> {
    signature_mc(net, SignatureKind::Tie, trials, seed)
}

/// Estimates the fatal-shock signature the same way.
pub fn fatal_signature_mc(net: &Network, trials: u64, seed: u64) -> Result<SignatureEstimate> {
    signature_mc(net, SignatureKind::Fatal, trials, seed)
}

/// Estimates the classical signature from random failure orders.
pub fn classical_signature_mc(net: &Network, trials: u64, seed: u64) -> Result<SignatureEstimate> {
    signature_mc(net, SignatureKind::Classical, trials, seed)
}

/// Draws an index `1..=len` from a probability vector.
pub(crate) fn draw_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i + 1;
        }
    }
    // Rounding left u above the final partial sum; take the last positive entry.
    probs.iter().rposition(|&p| p > 0.0).map_or(probs.len(), |i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pi(n: usize, blocks: &[&[u32]]) -> OrderedPartition {
        OrderedPartition::from_ids(n, blocks).unwrap()
    }

    #[test]
    fn death_numbers_on_three_link_net() {
        let net = fixtures::series_parallel();
        assert_eq!(death_number(&net, &pi(3, &[&[1, 3], &[2]])).unwrap(), 1);
        assert_eq!(death_number(&net, &pi(3, &[&[3], &[1, 2]])).unwrap(), 2);
        assert_eq!(death_number(&net, &pi(3, &[&[2, 3], &[1]])).unwrap(), 2);
    }

    #[test]
    fn killing_indices_on_three_link_net() {
        let net = fixtures::series_parallel();
        assert_eq!(killing_shock_index(&net, &pi(3, &[&[2, 3], &[1]])).unwrap(), 1);
        assert_eq!(killing_shock_index(&net, &pi(3, &[&[3], &[1, 2]])).unwrap(), 2);
        assert_eq!(killing_shock_index(&net, &pi(3, &[&[1, 2, 3]])).unwrap(), 1);
    }

    #[test]
    fn partition_of_wrong_size_rejected() {
        let net = fixtures::series_parallel();
        assert!(death_number(&net, &pi(2, &[&[1, 2]])).is_err());
    }

    #[test]
    fn signatures_of_three_link_net() {
        let net = fixtures::series_parallel();
        assert_eq!(t_signature(&net).unwrap().probabilities(), &[r(6, 13), r(7, 13), r(0, 1)]);
        assert_eq!(fatal_signature(&net).unwrap().probabilities(), &[r(7, 13), r(6, 13), r(0, 1)]);
        assert_eq!(classical_signature(&net).unwrap().probabilities(), &[r(1, 3), r(2, 3), r(0, 1)]);
    }

    #[test]
    fn single_link_signatures_coincide() {
        let net = fixtures::series(1);
        for sig in [t_signature(&net), fatal_signature(&net), classical_signature(&net)] {
            assert_eq!(sig.unwrap().probabilities(), &[r(1, 1)]);
        }
    }

    #[test]
    fn series_and_parallel() {
        let series = fixtures::series(4);
        let one_then_zeros = [r(1, 1), r(0, 1), r(0, 1), r(0, 1)];
        assert_eq!(classical_signature(&series).unwrap().probabilities(), &one_then_zeros);
        assert_eq!(t_signature(&series).unwrap().probabilities(), &one_then_zeros);
        assert_eq!(fatal_signature(&series).unwrap().probabilities(), &one_then_zeros);
        let par = fixtures::parallel(3);
        assert_eq!(
            classical_signature(&par).unwrap().probabilities(),
            &[r(0, 1), r(0, 1), r(1, 1)]
        );
        assert_eq!(
            fatal_signature(&fixtures::parallel(2)).unwrap().probabilities(),
            &[r(1, 3), r(2, 3)]
        );
    }

    #[test]
    fn tails() {
        let sig = SignatureVector::new(SignatureKind::Tie, alloc::vec![r(6, 13), r(7, 13), r(0, 1)]).unwrap();
        assert_eq!(sig.tail().values(), &[r(1, 1), r(7, 13), r(0, 1)]);
        let series = SignatureVector::from_counts(SignatureKind::Classical, &[1, 0, 0], 1).unwrap();
        assert_eq!(series.tail().values(), &[r(1, 1), r(0, 1), r(0, 1)]);
        let par = SignatureVector::from_counts(SignatureKind::Classical, &[0, 0, 1], 1).unwrap();
        assert_eq!(par.tail().values(), &[r(1, 1), r(1, 1), r(1, 1)]);
    }

    #[test]
    fn common_denominator_and_numerators() {
        let sig = t_signature(&fixtures::series_parallel()).unwrap();
        let d = sig.common_denominator();
        assert_eq!(d, BigUint::from(13u32));
        let nums = sig.numerators_over(&d).unwrap();
        assert_eq!(nums, [6u32, 7, 0].map(BigUint::from));
        assert!(sig.numerators_over(&BigUint::from(7u32)).is_none());
    }

    #[test]
    fn invalid_vectors_rejected() {
        assert!(SignatureVector::new(SignatureKind::Tie, alloc::vec![r(1, 2), r(1, 3)]).is_err());
        assert!(SignatureVector::new(SignatureKind::Tie, alloc::vec![r(3, 2), r(-1, 2)]).is_err());
        assert!(SignatureVector::new(SignatureKind::Tie, alloc::vec![]).is_err());
    }

    #[test]
    fn mc_series_is_exact() {
        let est = t_signature_mc(&fixtures::series(3), 500, 3).unwrap();
        assert_eq!(est.estimates, [1.0, 0.0, 0.0]);
        assert_eq!(est.stderr, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn mc_is_reproducible() {
        let net = fixtures::bridge();
        assert_eq!(t_signature_mc(&net, 2000, 17).unwrap(), t_signature_mc(&net, 2000, 17).unwrap());
        assert_ne!(t_signature_mc(&net, 2000, 17).unwrap(), t_signature_mc(&net, 2000, 18).unwrap());
    }

    #[test]
    fn mc_three_link_net_within_four_se() {
        let net = fixtures::series_parallel();
        let est = t_signature_mc(&net, 100_000, 2024).unwrap();
        let exact = [6.0 / 13.0, 7.0 / 13.0, 0.0];
        for i in 0..3 {
            let se = est.stderr[i].max(1e-12);
            assert!((est.estimates[i] - exact[i]).abs() <= 4.0 * se, "entry {i}: {:?}", est);
        }
        let fatal = fatal_signature_mc(&net, 100_000, 2025).unwrap();
        let exact = [7.0 / 13.0, 6.0 / 13.0, 0.0];
        for i in 0..3 {
            assert!((fatal.estimates[i] - exact[i]).abs() <= 4.0 * fatal.stderr[i].max(1e-12));
        }
        let classical = classical_signature_mc(&net, 100_000, 2026).unwrap();
        let exact = [1.0 / 3.0, 2.0 / 3.0, 0.0];
        for i in 0..3 {
            assert!((classical.estimates[i] - exact[i]).abs() <= 4.0 * classical.stderr[i].max(1e-12));
        }
        assert_eq!(classical.counts.iter().sum::<u64>(), 100_000);
    }

    #[test]
    fn mc_rejects_zero_trials() {
        assert!(t_signature_mc(&fixtures::bridge(), 0, 1).is_err());
    }
}
