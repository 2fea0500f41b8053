//! Exact theoretical quantities for extension counts in `G(n,p)`.
//!
//! Everything here is computed in exact big-rational arithmetic from the
//! falling factorial `(n - v_G)(n - v_G - 1)...(n - v_H + 1)`; only the
//! binomial reference probability and the threshold ratios are floats.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::classify::supersets;
use crate::graph::{root_fixing_automorphisms, PatternGraph, RootedGraph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("n = {n} is smaller than v_H = {v_h}")]
    HostTooSmall { n: u64, v_h: usize },
    #[error("p = {0} is outside [0, 1]")]
    BadProbability(String),
    #[error("Phi is zero (p = 0); the variance surrogate is undefined")]
    ZeroPhi,
    #[error("r* = {r} exceeds N = {n_ext}")]
    TooManyExtensions { r: u64, n_ext: String },
    #[error("log n requires n >= 2")]
    LogUndefined,
}

/// `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: u64, k: usize) -> BigInt {
    if k as u64 > n {
        return BigInt::zero();
    }
    (0..k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

pub fn rational_pow(p: &BigRational, k: usize) -> BigRational {
    num_traits::pow(p.clone(), k)
}

/// Converts an `f64` to the exact dyadic rational it represents.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn check_p(p: &BigRational) -> Result<(), StatsError> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(StatsError::BadProbability(p.to_string()));
    }
    Ok(())
}

fn check_n(rg: &RootedGraph, n: u64) -> Result<(), StatsError> {
    if n < rg.v_h() as u64 {
        return Err(StatsError::HostTooSmall { n, v_h: rg.v_h() });
    }
    Ok(())
}

/// `N`: the number of `(G,H)`-extensions of a fixed root tuple in `K_n`.
pub fn count_in_complete_graph(rg: &RootedGraph, n: u64) -> Result<BigInt, StatsError> {
    check_n(rg, n)?;
    let ordered = falling_factorial(n - rg.v_g() as u64, rg.v_h() - rg.v_g());
    let aut = BigInt::from(crate::graph::automorphism_count(rg));
    let (q, r) = ordered.div_rem(&aut);
    assert!(r.is_zero(), "falling factorial not divisible by aut(G,H)");
    Ok(q)
}

/// `mu = E X_x = N p^(e_H - e_G)`.
pub fn mu_exact(rg: &RootedGraph, n: u64, p: &BigRational) -> Result<BigRational, StatsError> {
    check_p(p)?;
    let big_n = count_in_complete_graph(rg, n)?;
    Ok(BigRational::from_integer(big_n) * rational_pow(p, rg.extension_edge_count()))
}

/// `nu = E Y_x`, the expected number of ordered extensions.
pub fn nu_exact(rg: &RootedGraph, n: u64, p: &BigRational) -> Result<BigRational, StatsError> {
    check_p(p)?;
    check_n(rg, n)?;
    Ok(nu_between(rg.pattern(), rg.roots(), rg.pattern().vertices(), n, p))
}

/// `nu_{L,U}` for induced `L ⊆ U` of `pattern`. Only vertex and edge counts
/// matter, so no validity requirements beyond `|U| <= n`.
pub fn nu_between(
    pattern: &PatternGraph,
    lower: VertexSet,
    upper: VertexSet,
    n: u64,
    p: &BigRational,
) -> BigRational {
    let ff = falling_factorial(n - lower.len() as u64, upper.len() - lower.len());
    let de = pattern.induced_edge_count(upper) - pattern.induced_edge_count(lower);
    BigRational::from_integer(ff) * rational_pow(p, de)
}

/// `mu_{L,U}`: expected number of unordered `(L,U)`-extensions, with `L`
/// taken as the root set (relabeled to the front) of the induced graph on `U`.
pub fn mu_between(
    pattern: &PatternGraph,
    lower: VertexSet,
    upper: VertexSet,
    n: u64,
    p: &BigRational,
) -> BigRational {
    let nu = nu_between(pattern, lower, upper, n, p);
    nu / BigRational::from_integer(BigInt::from(aut_between(pattern, lower, upper)))
}

/// Automorphisms of the induced graph on `upper` that fix `lower` pointwise.
pub fn aut_between(pattern: &PatternGraph, lower: VertexSet, upper: VertexSet) -> u64 {
    let mut order: Vec<usize> = lower.iter().collect();
    order.extend(upper.difference(lower).iter());
    root_fixing_automorphisms(&pattern.relabeled(&order), lower.len())
}

/// `Phi = min mu_{G,J}` over induced `G ⊆ J ⊆ H` with `e_J > e_G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiValue {
    pub value: BigRational,
    pub argmin: VertexSet,
    /// Set when `p = 0`, where every candidate vanishes.
    pub degenerate: bool,
}

/// Induced `G ⊆ J ⊆ H` with `e_J > e_G`, the candidates for `Phi`.
pub fn supersets_with_edges(rg: &RootedGraph) -> Vec<VertexSet> {
    let pattern = rg.pattern();
    let e_g = pattern.induced_edge_count(rg.roots());
    supersets(pattern, rg.roots())
        .into_iter()
        .filter(|&j| pattern.induced_edge_count(j) > e_g)
        .collect()
}

pub fn phi_exact(rg: &RootedGraph, n: u64, p: &BigRational) -> Result<PhiValue, StatsError> {
    check_p(p)?;
    check_n(rg, n)?;
    let pattern = rg.pattern();
    let roots = rg.roots();
    let mut best: Option<(BigRational, VertexSet)> = None;
    for j in supersets_with_edges(rg) {
        let mu = mu_between(pattern, roots, j, n, p);
        let better = match &best {
            None => true,
            Some((b, bs)) => mu < *b || (mu == *b && j.size_then_lex(*bs).is_lt()),
        };
        if better {
            best = Some((mu, j));
        }
    }
    let (value, argmin) = best.expect("e_H > e_G guarantees a candidate");
    Ok(PhiValue {
        degenerate: p.is_zero(),
        value,
        argmin,
    })
}

/// Order-of-magnitude variance surrogate `(1 - p) mu^2 / Phi`.
pub fn sigma_sq_order(rg: &RootedGraph, n: u64, p: &BigRational) -> Result<BigRational, StatsError> {
    let mu = mu_exact(rg, n, p)?;
    let phi = phi_exact(rg, n, p)?;
    if phi.value.is_zero() {
        return Err(StatsError::ZeroPhi);
    }
    Ok((BigRational::one() - p) * &mu * &mu / phi.value)
}

/// `r* = ceil((1 + eps) mu)`.
pub fn r_star(mu: &BigRational, eps: &BigRational) -> u64 {
    let v = ((BigRational::one() + eps) * mu).ceil();
    v.to_integer().to_u64().expect("r* fits in u64")
}

/// `(lo, hi)` with `lo = floor((1-eps) mu) + 1` and `hi = ceil((1+eps) mu) - 1`:
/// an integer `k` satisfies `|k - mu| < eps mu` iff `lo <= k <= hi`. Values
/// above `hi` are upper deviations and values below `lo` lower deviations.
pub fn deviation_bounds(mu: &BigRational, eps: &BigRational) -> (i64, i64) {
    let one = BigRational::one();
    let lo: BigInt = ((&one - eps) * mu).floor().to_integer() + BigInt::one();
    let hi: BigInt = ((&one + eps) * mu).ceil().to_integer() - BigInt::one();
    let clamp = |x: BigInt| x.to_i64().unwrap_or(if x.is_negative() { i64::MIN } else { i64::MAX });
    (clamp(lo), clamp(hi))
}

/// The integers in the concentration window as an inclusive range, or
/// `None` when there are none (always the case for `mu = 0`).
pub fn concentration_window(mu: &BigRational, eps: &BigRational) -> Option<(u64, u64)> {
    let (lo, hi) = deviation_bounds(mu, eps);
    let lo = lo.max(0);
    (lo <= hi).then_some((lo as u64, hi as u64))
}

/// `C(N, r) q^r (1 - q)^(N - r)` with `q = p^(e_H - e_G)`, evaluated in log
/// space.
pub fn binomial_reference(rg: &RootedGraph, n: u64, p: &BigRational, eps: &BigRational) -> Result<f64, StatsError> {
    let big_n = count_in_complete_graph(rg, n)?;
    let mu = mu_exact(rg, n, p)?;
    let r = r_star(&mu, eps);
    let n_ext = big_n
        .to_u64()
        .ok_or_else(|| StatsError::TooManyExtensions { r, n_ext: big_n.to_string() })?;
    if r > n_ext {
        return Err(StatsError::TooManyExtensions {
            r,
            n_ext: big_n.to_string(),
        });
    }
    let q = rational_pow(p, rg.extension_edge_count());
    Ok(binomial_point(n_ext, r, &q))
}

/// Binomial point probability `P(Bin(trials, q) = k)` for exact `q`.
pub fn binomial_point(trials: u64, k: u64, q: &BigRational) -> f64 {
    assert!(k <= trials);
    if q.is_zero() {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q.is_one() {
        return if k == trials { 1.0 } else { 0.0 };
    }
    let ln_q = to_f64(q).ln();
    // log1p(-q) loses nothing when computed from the complement directly
    let ln_1mq = to_f64(&(BigRational::one() - q)).ln();
    let ln = ln_binomial(trials, k) + k as f64 * ln_q + (trials - k) as f64 * ln_1mq;
    ln.exp()
}

const EXACT_SUM_LIMIT: u64 = 10_000_000;

/// `ln C(n, k)`: a term-by-term sum when `min(k, n - k)` is moderate,
/// otherwise log-factorials.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    if k <= EXACT_SUM_LIMIT {
        (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
    } else {
        use statrs::function::factorial::ln_factorial;
        ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
    }
}

/// Threshold ratios with natural logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdQuantities {
    pub eps2_mu: f64,
    pub eps2_phi: f64,
    pub eps2_mu_over_log_n: f64,
    pub eps2_phi_over_log_n: f64,
}

pub fn threshold_quantities(
    rg: &RootedGraph,
    n: u64,
    p: &BigRational,
    eps: &BigRational,
) -> Result<ThresholdQuantities, StatsError> {
    if n < 2 {
        return Err(StatsError::LogUndefined);
    }
    let mu = mu_exact(rg, n, p)?;
    let phi = phi_exact(rg, n, p)?.value;
    let eps2 = eps * eps;
    let eps2_mu = to_f64(&(&eps2 * mu));
    let eps2_phi = to_f64(&(&eps2 * phi));
    let log_n = (n as f64).ln();
    Ok(ThresholdQuantities {
        eps2_mu,
        eps2_phi,
        eps2_mu_over_log_n: eps2_mu / log_n,
        eps2_phi_over_log_n: eps2_phi / log_n,
    })
}

/// Asymptotic surrogate `n^(v_H - v_G) p^(e_H - e_G)`.
pub fn mu_asymptotic(rg: &RootedGraph, n: u64, p: f64) -> f64 {
    (n as f64).powi((rg.v_h() - rg.v_g()) as i32) * p.powi(rg.extension_edge_count() as i32)
}

/// All exact theory quantities at one `(n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryQuantities {
    pub n: u64,
    pub p: BigRational,
    pub big_n: BigInt,
    pub mu: BigRational,
    pub nu: BigRational,
    pub phi: BigRational,
    pub phi_argmin: VertexSet,
    pub phi_degenerate: bool,
    pub sigma_sq_order: Option<BigRational>,
    pub m_value: crate::classify::Density,
    pub aut: u64,
}

pub fn theory(rg: &RootedGraph, n: u64, p: &BigRational) -> Result<TheoryQuantities, StatsError> {
    let mu = mu_exact(rg, n, p)?;
    let phi = phi_exact(rg, n, p)?;
    let sigma = if phi.value.is_zero() {
        None
    } else {
        Some((BigRational::one() - p) * &mu * &mu / &phi.value)
    };
    Ok(TheoryQuantities {
        n,
        p: p.clone(),
        big_n: count_in_complete_graph(rg, n)?,
        nu: nu_exact(rg, n, p)?,
        mu,
        phi: phi.value,
        phi_argmin: phi.argmin,
        phi_degenerate: phi.degenerate,
        sigma_sq_order: sigma,
        m_value: crate::classify::m_value(rg),
        aut: crate::graph::automorphism_count(rg),
    })
}

/// Float evaluation of `mu_{G,J}` used by the p-rule solvers.
pub(crate) fn mu_between_f64(pattern: &PatternGraph, lower: VertexSet, upper: VertexSet, n: u64, p: f64) -> f64 {
    let k = upper.len() - lower.len();
    let base = n - lower.len() as u64;
    let ff: f64 = (0..k as u64).map(|i| (base - i) as f64).product();
    let de = pattern.induced_edge_count(upper) - pattern.induced_edge_count(lower);
    ff * p.powi(de as i32) / aut_between(pattern, lower, upper) as f64
}
