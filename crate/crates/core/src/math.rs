//! Floating-point helpers built on `libm` so the crate stays `no_std`.

use alloc::vec::Vec;

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn powi(x: f64, k: u64) -> f64 {
    libm::pow(x, k as f64)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Above this Poisson mean, pmfs are evaluated in log space.
pub const LOG_SPACE_MEAN: f64 = 30.0;

/// `C(n, k)` as a float; exact for the small `n` used here.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `P(X = k)` for `X ~ Poisson(mean)`.
pub fn poisson_pmf(mean: f64, k: u64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if mean <= LOG_SPACE_MEAN && k <= 170 {
        let mut p = exp(-mean);
        for i in 1..=k {
            p *= mean / i as f64;
        }
        p
    } else {
        exp(-mean + k as f64 * ln(mean) - ln_gamma(k as f64 + 1.0))
    }
}

/// Poisson pmfs `P(X = 0..=k_max)`.
pub fn poisson_pmfs(mean: f64, k_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    if mean == 0.0 {
        out.push(1.0);
        out.resize(k_max + 1, 0.0);
        return out;
    }
    if mean <= LOG_SPACE_MEAN {
        let mut p = exp(-mean);
        out.push(p);
        for k in 1..=k_max {
            p *= mean / k as f64;
            out.push(p);
        }
    } else {
        let log_mean = ln(mean);
        let mut log_fact = 0.0;
        for k in 0..=k_max {
            if k > 0 {
                log_fact += ln(k as f64);
            }
            out.push(exp(-mean + k as f64 * log_mean - log_fact));
        }
    }
    out
}

/// Smallest `K` whose Poisson tail `P(X > K)` is provably below `eps`,
/// together with the bound itself.
///
/// Past the mode the terms shrink at least geometrically with ratio
/// `mean / (k + 2)`, which gives `P(X > K) <= p(K+1) (K+2) / (K+2-mean)`.
pub fn poisson_truncation(mean: f64, eps: f64) -> (usize, f64) {
    if mean == 0.0 {
        return (0, 0.0);
    }
    let mut k: usize = 0;
    loop {
        let next = (k + 2) as f64;
        if next > mean {
            let bound = poisson_pmf(mean, k as u64 + 1) * next / (next - mean);
            if bound < eps {
                return (k, bound);
            }
        }
        k += 1;
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Continued-fraction evaluation (modified Lentz), switching to the
/// symmetric form `1 - I_{1-x}(b, a)` where the fraction converges slowly.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        return 1.0 - regularized_incomplete_beta_upper(1.0 - x, x, b, a);
    }
    regularized_incomplete_beta_upper(x, 1.0 - x, a, b)
}

/// `I_x(a, b)` with `1 - x` supplied separately so callers holding an exact
/// complement keep full precision.
fn regularized_incomplete_beta_upper(x: f64, one_minus_x: f64, a: f64, b: f64) -> f64 {
    let ln_front = a * ln(x) + b * ln(one_minus_x) + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    exp(ln_front) * beta_continued_fraction(x, a, b) / a
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if abs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=500 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if abs(del - 1.0) < EPS {
            break;
        }
    }
    h
}

/// `I_x(a, b)` when `x` is small and known exactly; used by the integral
/// form of the binomial-damage coefficients where `x = q^k`.
pub fn regularized_incomplete_beta_small(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        // 1 - x is representable without loss here since x is not tiny.
        return 1.0 - regularized_incomplete_beta_upper(1.0 - x, x, b, a);
    }
    let ln_front = a * ln(x) + b * ln_1p(-x) + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    exp(ln_front) * beta_continued_fraction(x, a, b) / a
}
