//! Shock arrival laws (nonhomogeneous Poisson processes), per-shock damage
//! models, and the coefficients `beta_k = P(network survives k shocks)`.

use alloc::format;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// First-arrival law of a nonhomogeneous Poisson process, given through its
/// mean value function `Lambda(t) = -ln G(t)`.
#[derive(Clone, Debug, PartialEq)]
pub enum FirstArrivalLaw {
    /// `Lambda(t) = rate * t`.
    Exponential { rate: f64 },
    /// `Lambda(t) = (t / scale)^shape`.
    Weibull { shape: f64, scale: f64 },
    /// Hazard `a + 2 b t`, so `Lambda(t) = a t + b t^2`.
    LinearHazard { a: f64, b: f64 },
    /// Linear interpolation of `(t, Lambda)` knots, extrapolated with the
    /// last slope.
    Piecewise(PiecewiseMvf),
}

impl FirstArrivalLaw {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidParameter(format!("exponential rate must be > 0, got {rate}")));
        }
        Ok(FirstArrivalLaw::Exponential { rate })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weibull shape and scale must be > 0, got {shape}, {scale}"
            )));
        }
        Ok(FirstArrivalLaw::Weibull { shape, scale })
    }

    pub fn linear_hazard(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0 && a + b > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "linear hazard needs a, b >= 0 with a + b > 0, got {a}, {b}"
            )));
        }
        Ok(FirstArrivalLaw::LinearHazard { a, b })
    }

    pub fn piecewise(knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(FirstArrivalLaw::Piecewise(PiecewiseMvf::new(knots)?))
    }

    /// `Lambda(t)`, the expected number of shocks in `[0, t]`.
    pub fn mean_value(&self, t: f64) -> f64 {
        match *self {
            FirstArrivalLaw::Exponential { rate } => rate * t,
            FirstArrivalLaw::Weibull { shape, scale } => math::pow(t / scale, shape),
            FirstArrivalLaw::LinearHazard { a, b } => a * t + b * t * t,
            FirstArrivalLaw::Piecewise(ref p) => p.value(t),
        }
    }

    /// `Lambda'(t)`, the shock intensity.
    pub fn intensity(&self, t: f64) -> f64 {
        match *self {
            FirstArrivalLaw::Exponential { rate } => rate,
            FirstArrivalLaw::Weibull { shape, scale } => {
                if t == 0.0 {
                    return if shape < 1.0 {
                        f64::INFINITY
                    } else if shape == 1.0 {
                        1.0 / scale
                    } else {
                        0.0
                    };
                }
                shape / scale * math::pow(t / scale, shape - 1.0)
            }
            FirstArrivalLaw::LinearHazard { a, b } => a + 2.0 * b * t,
            FirstArrivalLaw::Piecewise(ref p) => p.slope(t),
        }
    }

    /// `G(t) = P(first shock after t) = exp(-Lambda(t))`.
    pub fn survival(&self, t: f64) -> f64 {
        math::exp(-self.mean_value(t))
    }

    /// Smallest `t` with `Lambda(t) = y`, or `None` when `Lambda` stays
    /// below `y` forever.
    pub fn inverse_mean_value(&self, y: f64) -> Option<f64> {
        if y <= 0.0 {
            return Some(0.0);
        }
        match *self {
            FirstArrivalLaw::Exponential { rate } => Some(y / rate),
            FirstArrivalLaw::Weibull { shape, scale } => Some(scale * math::pow(y, 1.0 / shape)),
            FirstArrivalLaw::LinearHazard { a, b } => {
                // Root of b t^2 + a t - y = 0 in the cancellation-free form.
                Some(2.0 * y / (a + math::sqrt(a * a + 4.0 * b * y)))
            }
            FirstArrivalLaw::Piecewise(ref p) => p.inverse(y),
        }
    }
}

/// Piecewise-linear mean value function.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMvf {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseMvf {
    /// Knots must have strictly increasing `t >= 0` and non-decreasing
    /// `Lambda >= 0`. A knot at `t = 0` must carry `Lambda = 0`; if the first
    /// knot is later, `(0, 0)` is prepended.
    pub fn new(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("mean value table: {msg}")));
        if knots.is_empty() {
            return bad("no knots");
        }
        if knots.iter().any(|&(t, l)| !t.is_finite() || !l.is_finite() || t < 0.0 || l < 0.0) {
            return bad("values must be finite and non-negative");
        }
        if knots[0].0 == 0.0 {
            if knots[0].1 != 0.0 {
                return bad("Lambda(0) must be 0");
            }
        } else {
            knots.insert(0, (0.0, 0.0));
        }
        if knots.len() < 2 {
            return bad("need at least one knot after t = 0");
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return bad("times must be strictly increasing");
            }
            if w[1].1 < w[0].1 {
                return bad("Lambda must be non-decreasing");
            }
        }
        Ok(PiecewiseMvf { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Index of the segment `[t_i, t_{i+1})` holding `t`; the last segment
    /// extends to infinity.
    fn segment(&self, t: f64) -> usize {
        let i = self.knots.partition_point(|&(tk, _)| tk <= t);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    fn slope_of(&self, i: usize) -> f64 {
        let (t0, l0) = self.knots[i];
        let (t1, l1) = self.knots[i + 1];
        (l1 - l0) / (t1 - t0)
    }

    fn value(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (t0, l0) = self.knots[i];
        l0 + self.slope_of(i) * (t - t0)
    }

    fn slope(&self, t: f64) -> f64 {
        self.slope_of(self.segment(t))
    }

    fn inverse(&self, y: f64) -> Option<f64> {
        let last = self.knots.len() - 1;
        let i = self.knots.partition_point(|&(_, l)| l < y);
        if i == 0 {
            return Some(0.0);
        }
        if i <= last {
            let (t0, l0) = self.knots[i - 1];
            let (t1, l1) = self.knots[i];
            return Some(t0 + (y - l0) / (l1 - l0) * (t1 - t0));
        }
        let slope = self.slope_of(last - 1);
        if slope <= 0.0 {
            return None;
        }
        let (t_end, l_end) = self.knots[last];
        Some(t_end + (y - l_end) / slope)
    }
}

/// How many links a shock fails.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DamageModel {
    /// Every surviving link fails independently with probability `p`.
    Binomial { p: f64, q: f64 },
    /// Exactly one link fails per shock.
    OnePerShock,
    /// Each shock fails at least one link; handled by the fatal-shock
    /// signature.
    Fatal,
}

impl DamageModel {
    pub fn binomial(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!("failure probability must be in (0, 1], got {p}")));
        }
        Ok(DamageModel::Binomial { p, q: 1.0 - p })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || t.is_nan() {
        Err(Error::NegativeTime(t))
    } else {
        Ok(())
    }
}

/// `P(xi(t) = k) = exp(-Lambda) Lambda^k / k!`.
pub fn count_pmf(law: &FirstArrivalLaw, t: f64, k: u64) -> Result<f64> {
    check_time(t)?;
    Ok(math::poisson_pmf(law.mean_value(t), k))
}

/// `P(theta_k > t) = sum_{x < k} P(xi(t) = x)`, the survival of the k-th
/// arrival.
pub fn arrival_survival(law: &FirstArrivalLaw, t: f64, k: u64) -> Result<f64> {
    check_time(t)?;
    if k == 0 {
        return Err(Error::ZeroArrivalIndex);
    }
    let mean = law.mean_value(t);
    Ok(math::poisson_pmfs(mean, k as usize - 1).iter().sum::<f64>().min(1.0))
}

/// `P(W_1 + ... + W_k = j) = C(n,j) (1 - q^k)^j q^{k(n-j)}` under binomial
/// damage: after `k` shocks each link has survived with probability `q^k`.
pub fn cumulative_damage_pmf(n: usize, q: f64, k: u64, j: usize) -> Result<f64> {
    if j > n {
        return Err(Error::FailedCountOutOfRange { j, n });
    }
    let survive = math::powi(q, k);
    Ok(damage_term(n, j, survive))
}

fn damage_term(n: usize, j: usize, survive: f64) -> f64 {
    math::binomial(n as u64, j as u64) * math::powi(1.0 - survive, j as u64) * math::powi(survive, (n - j) as u64)
}

/// Binomial-damage coefficient from the signature tail:
/// `beta*_k = sum_{j<n} S_j C(n,j) (1 - q^k)^j q^{k(n-j)}`.
pub fn beta_star(tail: &[f64], q: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let n = tail.len();
    let survive = math::powi(q, k);
    tail.iter().enumerate().map(|(j, &s)| if s == 0.0 { 0.0 } else { s * damage_term(n, j, survive) }).sum()
}

/// The same coefficient through incomplete beta integrals:
/// `beta*_k = sum_j s_j P(U_j > 1 - q^k)`, `U_j ~ Beta(j, n - j + 1)`.
pub fn beta_star_integral(signature: &[f64], q: f64, k: u64) -> f64 {
    let n = signature.len();
    let x = math::powi(q, k);
    signature
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let j = (i + 1) as f64;
            if s == 0.0 {
                0.0
            } else {
                // P(U > 1 - x) = I_x(n - j + 1, j).
                s * math::regularized_incomplete_beta_small(x, n as f64 - j + 1.0, j)
            }
        })
        .sum()
}

/// `beta_k` for binomial or one-per-shock damage.
pub fn beta_general(tail: &[f64], damage: DamageModel, k: u64) -> Result<f64> {
    match damage {
        DamageModel::Binomial { q, .. } => Ok(beta_star(tail, q, k)),
        DamageModel::OnePerShock => Ok(tail.get(k as usize).copied().unwrap_or(0.0)),
        DamageModel::Fatal => Err(Error::FatalDamageUnsupported),
    }
}

/// Slack for float noise in monotonicity checks.
const MONOTONE_SLACK: f64 = 1e-15;

/// `beta_0 = 1, beta_1, ..., beta_K`: the discrete survival function of the
/// index of the killing shock.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaSequence {
    values: Vec<f64>,
}

impl BetaSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NotAPmf("empty beta sequence"));
        }
        if math::abs(values[0] - 1.0) > 1e-12 {
            return Err(Error::NotAPmf("beta_0 must be 1"));
        }
        if values.iter().any(|v| !(0.0..=1.0 + 1e-12).contains(v)) {
            return Err(Error::NotAPmf("beta values must lie in [0, 1]"));
        }
        Ok(BetaSequence { values })
    }

    /// `beta_0..=beta_k_max` from a signature tail.
    pub fn compute(tail: &[f64], damage: DamageModel, k_max: usize) -> Result<Self> {
        let values = (0..=k_max as u64).map(|k| beta_general(tail, damage, k)).collect::<Result<Vec<_>>>()?;
        BetaSequence::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Truncation index `K`.
    pub fn truncation_index(&self) -> usize {
        self.values.len() - 1
    }

    /// Upper bound on every `beta_k`, `k > K`, given monotonicity.
    pub fn tail_bound(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    /// First `k` with `beta_k > beta_{k-1}` beyond float slack.
    pub fn first_increase(&self) -> Option<usize> {
        self.values.windows(2).position(|w| w[1] > w[0] + MONOTONE_SLACK).map(|i| i + 1)
    }
}

/// Shock t-signature: `b_k = beta_{k-1} - beta_k = P(network dies at shock k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StSignature {
    /// `b_1, ..., b_K`.
    pub probs: Vec<f64>,
    /// Mass not yet assigned, `beta_K = 1 - sum b_k`.
    pub tail: f64,
}

pub fn st_signature(beta: &BetaSequence) -> Result<StSignature> {
    if let Some(index) = beta.first_increase() {
        return Err(Error::NonMonotoneBeta { index });
    }
    let probs = beta.values.windows(2).map(|w| (w[0] - w[1]).max(0.0)).collect();
    Ok(StSignature { probs, tail: beta.tail_bound() })
}
