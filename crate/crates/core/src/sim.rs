//! Event-driven Monte Carlo for network lifetimes under shocks.
//!
//! Two semantics:
//!
//! * model-faithful: draw the death number `M` from the t-signature (or the
//!   killing index from the fatal signature), then simulate shocks and
//!   per-shock damage until the cumulative failure count reaches `M`;
//! * mechanistic: keep the actual set of failed links and stop when the
//!   terminals disconnect.
//!
//! Arrivals of the nonhomogeneous Poisson process are generated by inverting
//! the mean value function at the partial sums of unit exponentials. Every
//! trial uses its own ChaCha8 stream, so results do not depend on how trials
//! are scheduled.

use alloc::vec::Vec;

use rand::Rng;

use crate::math;
use crate::network::LinkSet;
use crate::reliability::{Grid, ReliabilityCurve};
use crate::shock::{DamageModel, FirstArrivalLaw};
use crate::signature::{draw_index, trial_rng, SignatureKind, SignatureVector};
use crate::{Error, Network, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    ModelFaithful,
    Mechanistic,
}

#[derive(Clone, Debug)]
enum Structure {
    Signature { probs: Vec<f64> },
    Network(Network),
}

/// A validated simulation setup.
#[derive(Clone, Debug)]
pub struct SimConfig {
    structure: Structure,
    law: FirstArrivalLaw,
    damage: DamageModel,
    trials: u64,
    seed: u64,
}

impl SimConfig {
    /// Model-faithful run from a t-signature (binomial or one-per-shock
    /// damage) or a fatal signature (fatal damage).
    pub fn model_faithful(
        signature: &SignatureVector,
        law: FirstArrivalLaw,
        damage: DamageModel,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        let expected = if damage == DamageModel::Fatal { SignatureKind::Fatal } else { SignatureKind::Tie };
        if signature.kind() != expected {
            return Err(Error::WrongSignatureKind { expected, found: signature.kind() });
        }
        let structure = Structure::Signature { probs: signature.to_f64() };
        SimConfig::build(structure, law, damage, trials, seed)
    }

    /// Mechanistic run on the network itself.
    pub fn mechanistic(network: &Network, law: FirstArrivalLaw, damage: DamageModel, trials: u64, seed: u64) -> Result<Self> {
        if damage == DamageModel::Fatal {
            return Err(Error::InvalidSimConfig("mechanistic mode needs binomial or one-per-shock damage"));
        }
        crate::signature::ensure_up(network)?;
        SimConfig::build(Structure::Network(network.clone()), law, damage, trials, seed)
    }

    fn build(structure: Structure, law: FirstArrivalLaw, damage: DamageModel, trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidSimConfig("trials must be at least 1"));
        }
        Ok(SimConfig { structure, law, damage, trials, seed })
    }

    pub fn mode(&self) -> SimMode {
        match self.structure {
            Structure::Signature { .. } => SimMode::ModelFaithful,
            Structure::Network(_) => SimMode::Mechanistic,
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn law(&self) -> &FirstArrivalLaw {
        &self.law
    }

    pub fn damage(&self) -> DamageModel {
        self.damage
    }

    /// Lifetime of trial `trial`, on its own random stream.
    pub fn trial_lifetime(&self, trial: u64) -> f64 {
        let mut rng = trial_rng(self.seed, trial);
        self.lifetime(&mut rng)
    }

    /// One lifetime draw; `f64::INFINITY` when the arrivals stop before the
    /// network fails.
    pub fn lifetime<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut arrivals = Arrivals::new(&self.law);
        match (&self.structure, self.damage) {
            (Structure::Signature { probs, .. }, DamageModel::OnePerShock | DamageModel::Fatal) => {
                // Failure happens exactly at the M-th (resp. r-th) shock.
                let target = draw_index(probs, rng);
                arrivals.nth(target, rng)
            }
            (Structure::Signature { probs, .. }, DamageModel::Binomial { p, .. }) => {
                let n = probs.len();
                let death = draw_index(probs, rng);
                let mut failed = 0;
                loop {
                    let t = arrivals.next(rng);
                    if !t.is_finite() {
                        return t;
                    }
                    failed += (0..n - failed).filter(|_| rng.random::<f64>() < p).count();
                    if failed >= death {
                        return t;
                    }
                }
            }
            (Structure::Network(net), damage) => {
                let mut failed = LinkSet::EMPTY;
                let all = net.all_links();
                loop {
                    let t = arrivals.next(rng);
                    if !t.is_finite() {
                        return t;
                    }
                    let alive = all.difference(failed);
                    let hit = match damage {
                        DamageModel::Binomial { p, .. } => {
                            LinkSet::from_ids(alive.iter().filter(|_| rng.random::<f64>() < p))
                        }
                        _ => {
                            let pick = rng.random_range(0..alive.len());
                            LinkSet::from_ids(alive.iter().nth(pick))
                        }
                    };
                    if hit.is_empty() {
                        continue;
                    }
                    failed = failed.union(hit);
                    if net.is_cut(failed) {
                        return t;
                    }
                }
            }
        }
    }
}

/// Successive arrival times `Lambda^{-1}(E_1 + ... + E_k)`.
struct Arrivals<'a> {
    law: &'a FirstArrivalLaw,
    cumulative: f64,
}

impl<'a> Arrivals<'a> {
    fn new(law: &'a FirstArrivalLaw) -> Self {
        Arrivals { law, cumulative: 0.0 }
    }

    fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        self.cumulative += unit_exponential(rng);
        self.law.inverse_mean_value(self.cumulative).unwrap_or(f64::INFINITY)
    }

    /// Time of the `k`-th arrival from now.
    fn nth<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> f64 {
        for _ in 1..k {
            self.cumulative += unit_exponential(rng);
        }
        self.next(rng)
    }
}

fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], so the log is finite.
    let u: f64 = rng.random();
    -math::ln(1.0 - u)
}

/// Arrival times of the process on `[0, horizon]`.
pub fn sample_nhpp_arrivals<R: Rng + ?Sized>(law: &FirstArrivalLaw, horizon: f64, rng: &mut R) -> Result<Vec<f64>> {
    if horizon < 0.0 || horizon.is_nan() {
        return Err(Error::NegativeTime(horizon));
    }
    let mut arrivals = Arrivals::new(law);
    let mut out = Vec::new();
    loop {
        let t = arrivals.next(rng);
        if t > horizon {
            return Ok(out);
        }
        out.push(t);
    }
}

/// Lifetimes of every trial, in trial order.
pub fn simulate_lifetimes(cfg: &SimConfig) -> Vec<f64> {
    (0..cfg.trials).map(|trial| cfg.trial_lifetime(trial)).collect()
}

/// Empirical `P(T > t)` on the grid, with binomial standard errors
/// `sqrt(R (1 - R) / N)`.
pub fn curve_from_lifetimes(lifetimes: &[f64], grid: &Grid) -> Result<ReliabilityCurve> {
    if lifetimes.is_empty() {
        return Err(Error::InvalidSimConfig("no lifetimes"));
    }
    let mut sorted = lifetimes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total = sorted.len() as f64;
    let mut reliability = Vec::with_capacity(grid.len());
    let mut stderr = Vec::with_capacity(grid.len());
    for &t in grid.points() {
        let alive = sorted.len() - sorted.partition_point(|&x| x <= t);
        let r = alive as f64 / total;
        reliability.push(r);
        stderr.push(math::sqrt(r * (1.0 - r) / total));
    }
    Ok(ReliabilityCurve { times: grid.points().to_vec(), reliability, stderr: Some(stderr), truncation_bound: 0.0 })
}

/// Monte Carlo reliability curve; reproducible for a fixed seed.
pub fn mc_reliability_curve(cfg: &SimConfig, grid: &Grid) -> Result<ReliabilityCurve> {
    curve_from_lifetimes(&simulate_lifetimes(cfg), grid)
}
