//! Closed-form win probabilities and bounds.
//!
//! Exact formulas return [`BigRational`]; series and limits are evaluated in
//! double precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a rational as a reduced `p/q` string.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let (p, q) = s.trim().split_once('/')?;
    let q: BigInt = q.trim().parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p.trim().parse().ok()?, q))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Win probability of the no-waiting policy with two arrivals per item:
/// `(2n + 1) / (3n)`.
pub fn no_wait_win_prob(n: u64) -> Result<BigRational> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    Ok(BigRational::new(
        BigInt::from(2 * n + 1),
        BigInt::from(3 * n),
    ))
}

/// The published closed-form sum for the no-waiting policy with three
/// arrivals per item, evaluated exactly.
///
/// Note: for `n >= 3` this sum does not agree with exhaustive enumeration of
/// the policy (e.g. `739/840` against `1577/1680` at `n = 3`); it is kept
/// verbatim so the two can be compared.
pub fn k3_win_prob_exact(n: u64) -> Result<BigRational> {
    if n < 2 {
        return invalid("the k = 3 closed form needs n >= 2");
    }
    let m = 3 * n as i64;
    let big = |v: i64| BigInt::from(v);
    let mut total = BigRational::new(big(3), big(m))
        + BigRational::new(big((m - 3) * 3), big(m * (m - 1)))
        + BigRational::new(big((m - 3) * (m - 4) * 3), big(m * (m - 1) * (m - 2)));
    let mut numer = BigInt::zero();
    for i in 4..=(m - 3) {
        numer += big(m - i) * big(m - i - 1) * big(m - i - 2) * big(m + i - 9);
    }
    let denom = big(n as i64) * big(m - 1) * big(m - 2) * big(m - 4) * big(m - 5);
    total += BigRational::new(numer, denom);
    Ok(total)
}

pub fn k3_win_prob(n: u64) -> Result<f64> {
    k3_win_prob_exact(n).map(|r| ratio_to_f64(&r))
}

/// Finite-series lower bound on the win probability of the time-threshold
/// policy with threshold `mu`, truncated after `k_terms` terms.
pub fn win_lower_bound(mu: f64, k_terms: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&mu) {
        return invalid(format!("mu = {mu} outside [0, 1)"));
    }
    if k_terms == 0 {
        return invalid("k_terms must be positive");
    }
    let q = (1.0 - mu) * (1.0 - mu);
    let mut power = 1.0;
    let mut sum = 2.0 * mu * (1.0 - mu);
    for i in 1..=k_terms {
        power *= q;
        let i = i as f64;
        sum += power * (mu * mu + 4.0 * mu * i - 2.0 * mu * mu * i) / (3.0 * i);
    }
    sum += 2.0 / 3.0 * power * (1.0 - mu);
    Ok(sum)
}

/// Limit objective `2x - 4x²/3 - (1-x)² ln(1-x²)/3`, where `x = 1 - mu`.
pub fn asymptotic_win(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return invalid(format!("x = {x} outside [0, 1)"));
    }
    Ok(asymptotic_win_unchecked(x))
}

pub(crate) fn asymptotic_win_unchecked(x: f64) -> f64 {
    2.0 * x - 4.0 / 3.0 * x * x - (1.0 - x) * (1.0 - x) * (-x * x).ln_1p() / 3.0
}

/// Probability that all `k` arrivals of one fixed item precede all `k`
/// arrivals of another: `1 / C(2k, k)`.
pub fn pairwise_dominance_prob(k: u64) -> Result<BigRational> {
    if k == 0 {
        return invalid("k must be at least 1");
    }
    Ok(BigRational::new(BigInt::one(), binomial(2 * k, k)))
}
