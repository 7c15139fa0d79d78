//! Stochastic orders, total positivity and aging checks.
//!
//! Orders compare two distributions on `{1, 2, ...}` (or two reliability
//! curves on a common grid). `X <=st Y` means `P(X > k) <= P(Y > k)` for all
//! `k`; `X <=hr Y` means `P(Y > k) / P(X > k)` is non-decreasing; `X <=lr Y`
//! means `P(Y = k) / P(X = k)` is non-decreasing.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::reliability::{reliability_shock_model, Grid, ReliabilityCurve};
use crate::shock::{BetaSequence, DamageModel, FirstArrivalLaw};
use crate::signature::{SignatureKind, SignatureVector};
use crate::{Error, Result};

/// Absolute slack for float comparisons.
pub const ORDER_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Usual stochastic order.
    St,
    /// Hazard rate order.
    Hr,
    /// Likelihood ratio order.
    Lr,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::St => "st",
            Relation::Hr => "hr",
            Relation::Lr => "lr",
        }
    }
}

/// Outcome of an order check. `witness` is the first index where the order
/// fails: a survival index `k` (for `P(X > k)`) for st/hr, a 1-based pmf
/// index for lr, or a grid index for curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderingVerdict {
    pub relation: Relation,
    pub holds: bool,
    pub witness: Option<usize>,
}

impl OrderingVerdict {
    fn from_witness(relation: Relation, witness: Option<usize>) -> Self {
        OrderingVerdict { relation, holds: witness.is_none(), witness }
    }
}

fn check_pmf(p: &[f64]) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < -ORDER_SLACK) {
        return Err(Error::NotAPmf("entries must be finite and non-negative"));
    }
    let total: f64 = p.iter().sum();
    if math::abs(total - 1.0) > 1e-9 {
        return Err(Error::NotAPmf("entries do not sum to one"));
    }
    Ok(())
}

/// `P(X > k)` for `k = 0..len` from a pmf on `1..=len`, as suffix sums so
/// that exhausted tails are exactly zero.
fn survival_of(p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    let mut acc = 0.0;
    for k in (0..p.len()).rev() {
        acc += p[k];
        out[k] = acc;
    }
    out
}

/// Checks `X <=rel Y` for pmfs `a` (of `X`) and `b` (of `Y`) on `1, 2, ...`.
/// Shorter vectors are padded with zeros.
pub fn order_check(a: &[f64], b: &[f64], relation: Relation) -> Result<OrderingVerdict> {
    check_pmf(a)?;
    check_pmf(b)?;
    let len = a.len().max(b.len());
    let pad = |v: &[f64]| {
        let mut v = v.to_vec();
        v.resize(len, 0.0);
        v
    };
    let (a, b) = (pad(a), pad(b));
    Ok(match relation {
        Relation::St | Relation::Hr => survival_order_check(&survival_of(&a), &survival_of(&b), relation),
        Relation::Lr => OrderingVerdict::from_witness(Relation::Lr, lr_witness(&a, &b)),
    })
}

/// `b_k / a_k` non-decreasing over the union of supports: the ratio is
/// `+inf` where only `b` has mass, undefined (skipped) where neither does,
/// and a violation is `a_i b_j > a_j b_i` for `i < j` within slack.
fn lr_witness(a: &[f64], b: &[f64]) -> Option<usize> {
    let support: Vec<usize> = (0..a.len()).filter(|&k| a[k] > 0.0 || b[k] > 0.0).collect();
    for (pos, &j) in support.iter().enumerate() {
        for &i in &support[..pos] {
            // need b_j / a_j >= b_i / a_i, i.e. b_j a_i >= b_i a_j
            if b[j] * a[i] < b[i] * a[j] - ORDER_SLACK * (a[i] * b[j]).max(a[j] * b[i]).max(f64::MIN_POSITIVE) {
                return Some(j + 1);
            }
        }
    }
    None
}

/// Checks the relation on survival sequences `sa = P(X > k)` and
/// `sb = P(Y > k)` indexed alike (sequences, or curves on a common grid).
pub fn survival_order_check(sa: &[f64], sb: &[f64], relation: Relation) -> OrderingVerdict {
    let len = sa.len().min(sb.len());
    let witness = match relation {
        Relation::St => (0..len).find(|&k| sa[k] > sb[k] + ORDER_SLACK),
        // sb/sa non-decreasing: sb[k] sa[k+1] <= sb[k+1] sa[k] (cross-multiplied,
        // so zero survivals need no special casing).
        Relation::Hr => (1..len).find(|&k| {
            let lhs = sb[k - 1] * sa[k];
            let rhs = sb[k] * sa[k - 1];
            lhs > rhs + ORDER_SLACK * lhs.max(rhs)
        }),
        Relation::Lr => None,
    };
    OrderingVerdict::from_witness(relation, witness)
}

/// Survival-order check of two curves on the same grid; witness is a grid index.
pub fn curve_order_check(first: &ReliabilityCurve, second: &ReliabilityCurve, relation: Relation) -> Result<OrderingVerdict> {
    if first.times != second.times {
        return Err(Error::InvalidGrid("curves are on different grids"));
    }
    if relation == Relation::Lr {
        return Err(Error::InvalidParameter("likelihood ratio order is not checked on curves".into()));
    }
    Ok(survival_order_check(&first.reliability, &second.reliability, relation))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tp2Verdict {
    pub holds: bool,
    /// `(row, column)` of the first adjacent 2x2 minor that is negative.
    pub witness: Option<(usize, usize)>,
    /// Value of that minor.
    pub minor: f64,
}

/// TP2 check of a non-negative matrix via its adjacent 2x2 minors
/// `m[i][j] m[i+1][j+1] - m[i][j+1] m[i+1][j] >= -1e-12 * scale`, where
/// `scale` is the largest of the two products.
pub fn tp2_check(matrix: &[Vec<f64>]) -> Tp2Verdict {
    for i in 0..matrix.len().saturating_sub(1) {
        let (r0, r1) = (&matrix[i], &matrix[i + 1]);
        let cols = r0.len().min(r1.len());
        for j in 0..cols.saturating_sub(1) {
            let main = r0[j] * r1[j + 1];
            let anti = r0[j + 1] * r1[j];
            let minor = main - anti;
            if minor < -ORDER_SLACK * main.max(anti) {
                return Tp2Verdict { holds: false, witness: Some((i, j)), minor };
            }
        }
    }
    Tp2Verdict { holds: true, witness: None, minor: 0.0 }
}

/// Matrix `P(xi(t_i) = k)`, rows over the grid, columns `k = 0..=k_max`.
/// TP2 in `(t, k)` means the shock count increases in t in the lr order.
pub fn count_pmf_matrix(law: &FirstArrivalLaw, grid: &Grid, k_max: usize) -> Vec<Vec<f64>> {
    grid.points().iter().map(|&t| math::poisson_pmfs(law.mean_value(t), k_max)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IhraVerdict {
    pub holds: bool,
    /// First `k` with `beta_k^{1/k} > beta_{k-1}^{1/(k-1)}`.
    pub first_violation: Option<usize>,
}

/// Discrete IHRA: `beta_k^{1/k}` non-increasing for `k = 1..=K`.
pub fn ihra_check(beta: &BetaSequence) -> IhraVerdict {
    let roots = ihra_roots(beta);
    let first_violation = (1..roots.len())
        .find(|&i| roots[i] > roots[i - 1] + ORDER_SLACK)
        .map(|i| i + 1);
    IhraVerdict { holds: first_violation.is_none(), first_violation }
}

/// `beta_k^{1/k}` for `k = 1..=K`.
pub fn ihra_roots(beta: &BetaSequence) -> Vec<f64> {
    beta.values()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &b)| if b <= 0.0 { 0.0 } else { math::exp(math::ln(b) / k as f64) })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IhrRatioProfile {
    /// `beta_{k+1} / beta_k` for `k = 0..K`, while `beta_k > 0`.
    pub ratios: Vec<f64>,
    /// Ratios never increase (within slack): discrete IHR.
    pub non_increasing: bool,
    /// First `k` with `ratio_k > ratio_{k-1}`.
    pub first_increase: Option<usize>,
    /// All ratios equal within slack (geometric, both IHR and DHR).
    pub constant: bool,
}

/// Survival ratios of a beta sequence; the discrete IHR property is their
/// monotone decrease.
pub fn ihr_ratio_profile(beta: &BetaSequence) -> IhrRatioProfile {
    let v = beta.values();
    let ratios: Vec<f64> = v.windows(2).take_while(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect();
    let tol = |x: f64| 1e-12 * x.abs().max(1e-300);
    let first_increase = (1..ratios.len()).find(|&k| ratios[k] > ratios[k - 1] + tol(ratios[k - 1]));
    let constant = ratios.windows(2).all(|w| math::abs(w[1] - w[0]) <= tol(w[0]));
    IhrRatioProfile { ratios, non_increasing: first_increase.is_none(), first_increase, constant }
}

/// One network's shock model for [`compare_networks`].
#[derive(Clone, Debug)]
pub struct ModelSpec {
    /// t-signature.
    pub signature: SignatureVector,
    pub law: FirstArrivalLaw,
    pub damage: DamageModel,
}

/// A named sufficient condition and whether it holds.
#[derive(Clone, Debug, PartialEq)]
pub struct Premise {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub premises: Vec<Premise>,
    /// Premises imply `T1 <=st T2`.
    pub st_predicted: bool,
    /// Premises imply `T1 <=hr T2`.
    pub hr_predicted: bool,
    /// Observed on the grid: `R1 <= R2`.
    pub st_observed: OrderingVerdict,
    /// Observed on the grid: `R2 / R1` non-decreasing.
    pub hr_observed: OrderingVerdict,
    /// Observed on the grid: `R2 <= R1`.
    pub st_reverse_observed: OrderingVerdict,
    /// First grid time where `R1 - R2` changes sign, when it does.
    pub crossing: Option<f64>,
    pub first: ReliabilityCurve,
    pub second: ReliabilityCurve,
}

impl ComparisonReport {
    /// A predicted order is contradicted by the curves.
    pub fn prediction_violated(&self) -> bool {
        (self.st_predicted && !self.st_observed.holds) || (self.hr_predicted && !self.hr_observed.holds)
    }

    pub fn premise(&self, name: &str) -> Option<bool> {
        self.premises.iter().find(|p| p.name == name).map(|p| p.holds)
    }
}

/// Premise names used in [`ComparisonReport::premises`].
pub mod premise {
    pub const ARRIVALS_ST: &str = "xi1 >=st xi2 (Lambda1 >= Lambda2 on grid)";
    pub const SAME_LAW: &str = "Lambda1 = Lambda2 on grid";
    pub const BETA_ST: &str = "shock t-signatures b1 <=st b2";
    pub const BETA_HR: &str = "shock t-signatures b1 <=hr b2";
    pub const COUNT_TP2: &str = "P(xi(t) = k) TP2 in (t, k)";
    pub const P_GE: &str = "p1 >= p2";
    pub const P_EQ: &str = "p1 = p2";
    pub const SIG_ST: &str = "t-signatures s1 <=st s2";
    pub const SIG_HR: &str = "t-signatures s1 <=hr s2";
}

/// Compares two shock models on a grid: evaluates the known sufficient
/// conditions for `T1 <=st T2` and `T1 <=hr T2` and the actual curves.
///
/// Predictions:
/// * st, if `b1 <=st b2` and `xi1 >=st xi2`; or, under binomial damage, if
///   `p1 >= p2`, `xi1 >=st xi2` and `s1 <=st s2`;
/// * hr, if the laws coincide, the count pmf is TP2 and `b1 <=hr b2`; or,
///   under binomial damage, if in addition `p1 = p2` and `s1 <=hr s2`.
pub fn compare_networks(first: &ModelSpec, second: &ModelSpec, grid: &Grid) -> Result<ComparisonReport> {
    for m in [first, second] {
        if m.signature.kind() != SignatureKind::Tie {
            return Err(Error::WrongSignatureKind { expected: SignatureKind::Tie, found: m.signature.kind() });
        }
    }
    let curve1 = reliability_shock_model(&first.signature, &first.law, first.damage, grid)?;
    let curve2 = reliability_shock_model(&second.signature, &second.law, second.damage, grid)?;

    let lam1: Vec<f64> = grid.points().iter().map(|&t| first.law.mean_value(t)).collect();
    let lam2: Vec<f64> = grid.points().iter().map(|&t| second.law.mean_value(t)).collect();
    let arrivals_st = lam1.iter().zip(&lam2).all(|(a, b)| *a >= b - ORDER_SLACK * b.abs().max(1.0));
    let same_law = lam1.iter().zip(&lam2).all(|(a, b)| math::abs(a - b) <= ORDER_SLACK * b.abs().max(1.0));

    // Beta sequences up to a shared truncation index covering the grid.
    let lam_max = lam1.last().copied().unwrap_or(0.0).max(lam2.last().copied().unwrap_or(0.0));
    let (k_max, _) = math::poisson_truncation(lam_max, crate::reliability::TRUNCATION_EPS);
    let k_max = k_max.max(first.signature.len()).max(second.signature.len()) + 1;
    let beta1 = BetaSequence::compute(&first.signature.tail().to_f64(), first.damage, k_max)?;
    let beta2 = BetaSequence::compute(&second.signature.tail().to_f64(), second.damage, k_max)?;
    let beta_st = survival_order_check(beta1.values(), beta2.values(), Relation::St).holds;
    let beta_hr = survival_order_check(beta1.values(), beta2.values(), Relation::Hr).holds;

    let k_tp2 = math::poisson_truncation(lam_max, 1e-9).0 + 1;
    let count_tp2 = tp2_check(&count_pmf_matrix(&first.law, grid, k_tp2)).holds;

    let s1 = first.signature.to_f64();
    let s2 = second.signature.to_f64();
    let sig_st = order_check(&s1, &s2, Relation::St)?.holds;
    let sig_hr = order_check(&s1, &s2, Relation::Hr)?.holds;

    let mut premises = alloc::vec![
        Premise { name: premise::ARRIVALS_ST, holds: arrivals_st },
        Premise { name: premise::SAME_LAW, holds: same_law },
        Premise { name: premise::BETA_ST, holds: beta_st },
        Premise { name: premise::BETA_HR, holds: beta_hr },
        Premise { name: premise::COUNT_TP2, holds: count_tp2 },
    ];
    let mut st_predicted = beta_st && arrivals_st;
    let mut hr_predicted = same_law && count_tp2 && beta_hr;
    if let (DamageModel::Binomial { p: p1, .. }, DamageModel::Binomial { p: p2, .. }) = (first.damage, second.damage) {
        let p_ge = p1 >= p2;
        let p_eq = p1 == p2;
        premises.push(Premise { name: premise::P_GE, holds: p_ge });
        premises.push(Premise { name: premise::P_EQ, holds: p_eq });
        premises.push(Premise { name: premise::SIG_ST, holds: sig_st });
        premises.push(Premise { name: premise::SIG_HR, holds: sig_hr });
        st_predicted |= p_ge && arrivals_st && sig_st;
        hr_predicted |= p_eq && same_law && count_tp2 && sig_hr;
    } else {
        premises.push(Premise { name: premise::SIG_ST, holds: sig_st });
        premises.push(Premise { name: premise::SIG_HR, holds: sig_hr });
    }

    let st_observed = curve_order_check(&curve1, &curve2, Relation::St)?;
    let hr_observed = curve_order_check(&curve1, &curve2, Relation::Hr)?;
    let st_reverse_observed = curve_order_check(&curve2, &curve1, Relation::St)?;
    let crossing = crossing_time(&curve1, &curve2);

    Ok(ComparisonReport {
        premises,
        st_predicted,
        hr_predicted,
        st_observed,
        hr_observed,
        st_reverse_observed,
        crossing,
        first: curve1,
        second: curve2,
    })
}

/// First grid time at which `R1 - R2` takes the opposite sign to its first
/// clearly non-zero value.
pub fn crossing_time(first: &ReliabilityCurve, second: &ReliabilityCurve) -> Option<f64> {
    let mut sign = 0.0;
    for ((t, a), b) in first.times.iter().zip(&first.reliability).zip(&second.reliability) {
        let d = a - b;
        if math::abs(d) <= ORDER_SLACK {
            continue;
        }
        let s = if d > 0.0 { 1.0 } else { -1.0 };
        if sign == 0.0 {
            sign = s;
        } else if s != sign {
            return Some(*t);
        }
    }
    None
}
