//! Network reliability `R(t) = P(T > t)` and hazard rates under shock models.
//!
//! With `xi(t)` the number of shocks in `[0, t]` and `beta_k` the probability
//! of surviving `k` shocks, `R(t) = sum_k beta_k P(xi(t) = k)`. The same value
//! is also computed as a mixture of arrival-time survivals,
//! `R(t) = sum_k (beta_{k-1} - beta_k) P(theta_k > t)`, and the two must
//! agree.

use alloc::vec::Vec;

use crate::math;
use crate::shock::{beta_general, DamageModel, FirstArrivalLaw};
use crate::signature::{SignatureKind, SignatureVector};
use crate::{Error, Result};

/// Poisson tail mass dropped when truncating shock-count sums.
pub const TRUNCATION_EPS: f64 = 1e-12;

/// Largest allowed gap between the two representations of `R(t)`.
pub const REPRESENTATION_TOLERANCE: f64 = 1e-11;

/// Reliability level at which an automatic grid stops.
pub const AUTO_GRID_TARGET: f64 = 1e-3;

/// Number of points in an automatic grid.
pub const AUTO_GRID_POINTS: usize = 200;

/// Time points, strictly increasing and non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("no time points"));
        }
        if points.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidGrid("time points must be finite and non-negative"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("time points must be strictly increasing"));
        }
        Ok(Grid { points })
    }

    /// `count` evenly spaced points from `start` to `end` inclusive.
    pub fn uniform(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 || !(end > start) {
            return Err(Error::InvalidGrid("uniform grid needs end > start and at least two points"));
        }
        let step = (end - start) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
        points[count - 1] = end;
        Grid::new(points)
    }

    /// Uniform grid on `[0, t_max]` where `t_max` is where `reliability`
    /// first drops below [`AUTO_GRID_TARGET`], located by doubling and then
    /// bisection.
    pub fn auto<F>(mut reliability: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let mut hi = 1.0;
        let mut doublings = 0;
        while reliability(hi)? >= AUTO_GRID_TARGET {
            hi *= 2.0;
            doublings += 1;
            if doublings > 60 {
                return Err(Error::NeverFails);
            }
        }
        let mut lo = 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if reliability(mid)? >= AUTO_GRID_TARGET {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-9 * hi {
                break;
            }
        }
        Grid::uniform(0.0, hi, AUTO_GRID_POINTS)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> f64 {
        *self.points.last().expect("non-empty grid")
    }
}

/// `R(t)` on a grid, with Monte Carlo standard errors when estimated.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityCurve {
    pub times: Vec<f64>,
    pub reliability: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
    /// Upper bound on the truncation error of every value (0 when exact).
    pub truncation_bound: f64,
}

impl ReliabilityCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Both evaluations of `R(t)` at one time point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointReliability {
    /// `sum_{k <= K} beta_k P(xi = k)`.
    pub count_form: f64,
    /// `sum_{k <= K+1} (beta_{k-1} - beta_k) P(theta_k > t)` plus the tail term.
    pub arrival_form: f64,
    /// Truncation index `K`.
    pub truncation_index: usize,
    /// Proven bound on `P(xi > K)`.
    pub tail_bound: f64,
}

/// `R(t) = sum_k beta_k P(xi(t) = k)` for a signature tail and damage model.
#[derive(Clone, Debug)]
pub struct ShockMixture {
    tail: Vec<f64>,
    law: FirstArrivalLaw,
    damage: DamageModel,
}

impl ShockMixture {
    /// Model built on the t-signature (binomial or one-per-shock damage).
    pub fn new(signature: &SignatureVector, law: &FirstArrivalLaw, damage: DamageModel) -> Result<Self> {
        expect_kind(signature, SignatureKind::Tie)?;
        ShockMixture::from_tail(signature, law, damage)
    }

    /// Link-level mechanism: every shock acts on the surviving links, whose
    /// failure order is a uniformly random permutation. Built on the
    /// classical signature.
    pub fn mechanistic(signature: &SignatureVector, law: &FirstArrivalLaw, damage: DamageModel) -> Result<Self> {
        expect_kind(signature, SignatureKind::Classical)?;
        ShockMixture::from_tail(signature, law, damage)
    }

    fn from_tail(signature: &SignatureVector, law: &FirstArrivalLaw, damage: DamageModel) -> Result<Self> {
        if damage == DamageModel::Fatal {
            return Err(Error::FatalDamageUnsupported);
        }
        Ok(ShockMixture { tail: signature.tail().to_f64(), law: law.clone(), damage })
    }

    pub fn law(&self) -> &FirstArrivalLaw {
        &self.law
    }

    pub fn beta(&self, k: usize) -> f64 {
        beta_general(&self.tail, self.damage, k as u64).expect("damage checked at construction")
    }

    /// Both representations at `t`, failing if they disagree beyond
    /// [`REPRESENTATION_TOLERANCE`].
    pub fn evaluate(&self, t: f64) -> Result<PointReliability> {
        check_time(t)?;
        let mean = self.law.mean_value(t);
        let (k_trunc, tail_bound) = math::poisson_truncation(mean, TRUNCATION_EPS);
        let pmfs = math::poisson_pmfs(mean, k_trunc + 1);
        let betas: Vec<f64> = (0..=k_trunc + 1).map(|k| self.beta(k)).collect();

        let count_form: f64 = (0..=k_trunc).map(|k| betas[k] * pmfs[k]).sum();

        // P(theta_k > t) = P(xi <= k - 1), accumulated from the pmfs.
        let mut cdf = 0.0;
        let mut arrival_form = 0.0;
        for k in 1..=k_trunc + 1 {
            cdf += pmfs[k - 1];
            arrival_form += (betas[k - 1] - betas[k]) * cdf.min(1.0);
        }
        cdf += pmfs[k_trunc + 1];
        arrival_form += betas[k_trunc + 1] * cdf.min(1.0);

        if math::abs(count_form - arrival_form) > REPRESENTATION_TOLERANCE {
            return Err(Error::RepresentationMismatch { t, first: count_form, second: arrival_form });
        }
        Ok(PointReliability { count_form, arrival_form, truncation_index: k_trunc, tail_bound })
    }

    pub fn reliability(&self, t: f64) -> Result<f64> {
        Ok(clamp_unit(self.evaluate(t)?.count_form))
    }

    pub fn curve(&self, grid: &Grid) -> Result<ReliabilityCurve> {
        let reliability = grid.points().iter().map(|&t| self.reliability(t)).collect::<Result<Vec<_>>>()?;
        Ok(ReliabilityCurve {
            times: grid.points().to_vec(),
            reliability,
            stderr: None,
            truncation_bound: TRUNCATION_EPS,
        })
    }

    /// Mixture weights `w_k = (beta_{k-1} - beta_k) P(theta_k > t) / R(t)`
    /// for `k = 1..=K+1`, with the leftover mass `beta_{K+1} P(theta_{K+2} > t) / R(t)`
    /// appended last.
    pub fn mixture_weights(&self, t: f64) -> Result<Vec<f64>> {
        let parts = self.arrival_parts(t)?;
        let total: f64 = parts.iter().map(|p| p.0).sum();
        Ok(parts.iter().map(|p| p.0 / total).collect())
    }

    /// `(mass, hazard)` of each arrival-time component at `t`.
    fn arrival_parts(&self, t: f64) -> Result<Vec<(f64, f64)>> {
        check_time(t)?;
        let mean = self.law.mean_value(t);
        let intensity = self.law.intensity(t);
        let (k_trunc, _) = math::poisson_truncation(mean, TRUNCATION_EPS);
        let pmfs = math::poisson_pmfs(mean, k_trunc + 1);
        let mut parts = Vec::with_capacity(k_trunc + 2);
        let mut cdf = 0.0;
        let mut prev = 1.0;
        for k in 1..=k_trunc + 1 {
            cdf += pmfs[k - 1];
            let beta = self.beta(k);
            // theta_k has density Lambda' P(xi = k - 1) and survival P(xi <= k - 1).
            parts.push(((prev - beta) * cdf, component_hazard(intensity, pmfs[k - 1], cdf)));
            prev = beta;
        }
        cdf += pmfs[k_trunc + 1];
        let leftover_hazard = component_hazard(intensity, pmfs[k_trunc + 1], cdf);
        parts.push((prev * cdf, leftover_hazard));
        Ok(parts)
    }

    /// `lambda(t) = sum_k w_k(t) lambda_k(t)`, the weighted hazards of the
    /// shock arrival times. `None` once `R(t)` underflows.
    pub fn hazard(&self, t: f64) -> Result<Option<f64>> {
        let parts = self.arrival_parts(t)?;
        let total: f64 = parts.iter().map(|p| p.0).sum();
        if !(total > HAZARD_UNDERFLOW) {
            return Ok(None);
        }
        Ok(Some(parts.iter().filter(|p| p.0 > 0.0).map(|p| p.0 / total * p.1).sum()))
    }

    /// `-d/dt ln R(t)` by central differences (forward at `t` near 0).
    pub fn hazard_numeric(&self, t: f64) -> Result<Option<f64>> {
        let h = 1e-5 * t.max(1.0);
        let (lo, hi) = if t >= h { (t - h, t + h) } else { (t, t + h) };
        let r_lo = self.evaluate(lo)?.count_form;
        let r_hi = self.evaluate(hi)?.count_form;
        if !(r_lo > HAZARD_UNDERFLOW && r_hi > HAZARD_UNDERFLOW) {
            return Ok(None);
        }
        Ok(Some(-(math::ln(r_hi) - math::ln(r_lo)) / (hi - lo)))
    }
}

/// Below this `R(t)` the hazard is not reported.
const HAZARD_UNDERFLOW: f64 = 1e-280;

fn component_hazard(intensity: f64, density_pmf: f64, survival: f64) -> f64 {
    if density_pmf == 0.0 {
        0.0
    } else {
        intensity * density_pmf / survival
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || t.is_nan() {
        Err(Error::NegativeTime(t))
    } else {
        Ok(())
    }
}

fn expect_kind(signature: &SignatureVector, expected: SignatureKind) -> Result<()> {
    if signature.kind() != expected {
        return Err(Error::WrongSignatureKind { expected, found: signature.kind() });
    }
    Ok(())
}

/// `R(t)` under binomial or one-per-shock damage, from the t-signature.
pub fn reliability_shock_model(
    signature: &SignatureVector,
    law: &FirstArrivalLaw,
    damage: DamageModel,
    grid: &Grid,
) -> Result<ReliabilityCurve> {
    ShockMixture::new(signature, law, damage)?.curve(grid)
}

/// `R(t)` of the link-level mechanism: each shock fails every surviving link
/// independently (or exactly one surviving link), links exchangeable.
pub fn reliability_mechanistic(
    classical: &SignatureVector,
    law: &FirstArrivalLaw,
    damage: DamageModel,
    grid: &Grid,
) -> Result<ReliabilityCurve> {
    ShockMixture::mechanistic(classical, law, damage)?.curve(grid)
}

/// Fatal shocks: `R(t) = sum_i s*_i P(theta_i > t)`, cross-checked against
/// `sum_{i<n} S*_i P(xi(t) = i)`.
pub fn reliability_fatal(fatal: &SignatureVector, law: &FirstArrivalLaw, grid: &Grid) -> Result<ReliabilityCurve> {
    expect_kind(fatal, SignatureKind::Fatal)?;
    let probs = fatal.to_f64();
    let tail = fatal.tail().to_f64();
    let n = probs.len();
    let mut reliability = Vec::with_capacity(grid.len());
    for &t in grid.points() {
        let pmfs = math::poisson_pmfs(law.mean_value(t), n);
        let mut cdf = 0.0;
        let mut arrival_form = 0.0;
        for (i, &s) in probs.iter().enumerate() {
            cdf += pmfs[i];
            arrival_form += s * cdf.min(1.0);
        }
        let count_form: f64 = tail.iter().zip(&pmfs).map(|(s, p)| s * p).sum();
        if math::abs(count_form - arrival_form) > TRUNCATION_EPS {
            return Err(Error::RepresentationMismatch { t, first: arrival_form, second: count_form });
        }
        reliability.push(clamp_unit(count_form));
    }
    Ok(ReliabilityCurve { times: grid.points().to_vec(), reliability, stderr: None, truncation_bound: 0.0 })
}

/// Component failures themselves arrive as the counting process:
/// `R(t) = sum_{i<n} S_i P(N(t) = i)` from the classical signature.
pub fn reliability_component_model(
    classical: &SignatureVector,
    law: &FirstArrivalLaw,
    grid: &Grid,
) -> Result<ReliabilityCurve> {
    expect_kind(classical, SignatureKind::Classical)?;
    let tail = classical.tail().to_f64();
    let n = tail.len();
    let reliability = grid
        .points()
        .iter()
        .map(|&t| {
            let pmfs = math::poisson_pmfs(law.mean_value(t), n - 1);
            clamp_unit(tail.iter().zip(&pmfs).map(|(s, p)| s * p).sum())
        })
        .collect();
    Ok(ReliabilityCurve { times: grid.points().to_vec(), reliability, stderr: None, truncation_bound: 0.0 })
}

/// One row of a hazard curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HazardPoint {
    pub t: f64,
    pub reliability: f64,
    /// Mixture-weight evaluation.
    pub hazard: f64,
    /// `-d/dt ln R` by finite differences, for cross-checking.
    pub numeric: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HazardCurve {
    pub points: Vec<HazardPoint>,
    /// First grid time where `R(t)` underflowed; later points are omitted.
    pub truncated_at: Option<f64>,
}

/// Hazard rate of the shock model on a grid.
pub fn hazard_curve(
    signature: &SignatureVector,
    law: &FirstArrivalLaw,
    damage: DamageModel,
    grid: &Grid,
) -> Result<HazardCurve> {
    let model = ShockMixture::new(signature, law, damage)?;
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid.points() {
        let (Some(hazard), Some(numeric)) = (model.hazard(t)?, model.hazard_numeric(t)?) else {
            return Ok(HazardCurve { points, truncated_at: Some(t) });
        };
        points.push(HazardPoint { t, reliability: model.reliability(t)?, hazard, numeric });
    }
    Ok(HazardCurve { points, truncated_at: None })
}
