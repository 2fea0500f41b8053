//! Monte Carlo concentration experiments and threshold scans.

use std::fmt::Write as _;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ratio_string, unrooted_analysis, ClassifyError};
use crate::count::{per_vertex_copy_counts, EngineError, ExtensionCounter, DEFAULT_LIST_CAP};
use crate::graph::{load_rooted_graph, PatternGraph, RootTuple, RootedGraph, VertexSet};
use crate::host::HostGraph;
use crate::par::{map_ordered, Execution};
use crate::random::{sample_gnp, trial_seed, SamplerConfig};
use crate::stats::{
    binomial_reference, deviation_bounds, mu_between, mu_between_f64, mu_exact, phi_exact, r_star, rational_from_f64,
    supersets_with_edges, to_f64, StatsError,
};

pub const CSV_HEADER: &str = "n,p,eps,mu,phi,eps2mu_over_logn,eps2phi_over_logn,estimate,ci_lo,ci_hi,trials,degenerate";

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// `p` and `eps` are rounded to multiples of `2^-GRID_BITS` so that theory
/// quantities are exact rationals with small denominators.
const GRID_BITS: i32 = 32;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot load graph `{0}`: {1}")]
    Graph(String, String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("infeasible cell: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("cannot parse config: {0}")]
    Toml(#[from] toml::de::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// Every root satisfies `|X_x - mu| < eps mu`.
    #[default]
    Concentration,
    /// Some root has `X_x <= (1 - eps) mu`.
    LowerTail,
    /// Some root has `X_x >= (1 + eps) mu`.
    UpperTail,
    /// `E_x` at the root tuple `(1, ..., v_G)` with `r = r*`.
    ExEvent,
    /// `max_x Z_K(x)` stays within the configured budget, `K = H`.
    ZkMax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PRule {
    Explicit { values: Vec<f64> },
    /// Solve `mu = target`.
    Mu { target: f64 },
    /// Solve `mu = target * ln n`.
    MuOverLogN { target: f64 },
    /// Solve `Phi = target`.
    Phi { target: f64 },
    /// Solve `Phi = target * ln n`.
    PhiOverLogN { target: f64 },
    /// `p = a * n^(-b)`.
    Power { a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EpsRule {
    Explicit { values: Vec<f64> },
    /// `eps^2 mu = v`.
    Eps2mu { values: Vec<f64> },
    /// `eps^2 mu / ln n = v`.
    Eps2muOverLogN { values: Vec<f64> },
    Eps2phi { values: Vec<f64> },
    Eps2phiOverLogN { values: Vec<f64> },
    /// `eps^2 omega^3 / ln n = v` with `omega = n p^2`.
    Eps2omega3OverLogN { values: Vec<f64> },
}

impl EpsRule {
    pub fn values(&self) -> &[f64] {
        match self {
            EpsRule::Explicit { values }
            | EpsRule::Eps2mu { values }
            | EpsRule::Eps2muOverLogN { values }
            | EpsRule::Eps2phi { values }
            | EpsRule::Eps2phiOverLogN { values }
            | EpsRule::Eps2omega3OverLogN { values } => values,
        }
    }
}

/// A scan description, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Fixture name or path to a graph file.
    pub graph: String,
    pub n: Vec<usize>,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub event: EventKind,
    pub p_rule: PRule,
    pub eps_rule: EpsRule,
    /// 1-based labels of an intermediate `J`; cells then also report
    /// `eps^2 mu_{G,J} / ln n` and `eps^2 mu_{J,H} / ln n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Vec<usize>>,
    /// Budget multiplier for `zk-max`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.n.is_empty() || self.eps_rule.values().is_empty() {
            return bad("empty grid");
        }
        if let PRule::Explicit { values } = &self.p_rule {
            if values.is_empty() || values.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return bad("explicit p values must lie in [0, 1]");
            }
        }
        if self.eps_rule.values().iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return bad("eps grid values must be positive");
        }
        if self.event == EventKind::ZkMax && self.budget.is_none() {
            return bad("zk-max needs a budget");
        }
        Ok(())
    }

    pub fn rooted_graph(&self) -> Result<RootedGraph, ExperimentError> {
        load_rooted_graph(&self.graph).map_err(|e| ExperimentError::Graph(self.graph.clone(), e.to_string()))
    }
}

/// Snaps `x` to the nearest multiple of `2^-32`, returning the float and the
/// identical exact rational.
pub fn snap(x: f64) -> (f64, BigRational) {
    let scale = 2f64.powi(GRID_BITS);
    let snapped = (x * scale).round() / scale;
    (snapped, rational_from_f64(snapped))
}

fn bisect(f: impl Fn(f64) -> f64, target: f64) -> Option<f64> {
    if f(1.0) < target {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Float `Phi(p)`, the minimum of `mu_{G,J}` over `J` with new edges.
fn phi_f64(rg: &RootedGraph, n: u64, p: f64) -> f64 {
    supersets_with_edges(rg)
        .into_iter()
        .map(|j| mu_between_f64(rg.pattern(), rg.roots(), j, n, p))
        .fold(f64::INFINITY, f64::min)
}

/// Edge probabilities selected by the rule for this `n`.
pub fn resolve_p(rule: &PRule, rg: &RootedGraph, n: usize) -> Result<Vec<f64>, ExperimentError> {
    if n < rg.v_h().max(2) {
        return Err(StatsError::HostTooSmall { n: n as u64, v_h: rg.v_h() }.into());
    }
    let nn = n as u64;
    let ln = (n as f64).ln();
    let mu = |p: f64| mu_between_f64(rg.pattern(), rg.roots(), rg.pattern().vertices(), nn, p);
    let solved = match rule {
        PRule::Explicit { values } => return Ok(values.clone()),
        PRule::Mu { target } => bisect(mu, *target),
        PRule::MuOverLogN { target } => bisect(mu, target * ln),
        PRule::Phi { target } => bisect(|p| phi_f64(rg, nn, p), *target),
        PRule::PhiOverLogN { target } => bisect(|p| phi_f64(rg, nn, p), target * ln),
        PRule::Power { a, b } => {
            let p = a * (n as f64).powf(-b);
            (0.0..=1.0).contains(&p).then_some(p)
        }
    };
    solved
        .map(|p| vec![p])
        .ok_or_else(|| ExperimentError::Infeasible(format!("p-rule {rule:?} has no solution in [0, 1] at n = {n}")))
}

fn resolve_eps(rule: &EpsRule, v: f64, n: usize, p: f64, mu: f64, phi: f64) -> f64 {
    let ln = (n as f64).ln();
    let omega = n as f64 * p * p;
    let eps = match rule {
        EpsRule::Explicit { .. } => v,
        EpsRule::Eps2mu { .. } => (v / mu).sqrt(),
        EpsRule::Eps2muOverLogN { .. } => (v * ln / mu).sqrt(),
        EpsRule::Eps2phi { .. } => (v / phi).sqrt(),
        EpsRule::Eps2phiOverLogN { .. } => (v * ln / phi).sqrt(),
        EpsRule::Eps2omega3OverLogN { .. } => (v * ln / omega.powi(3)).sqrt(),
    };
    // a target that lands exactly on eps = 1 should not fail on rounding
    if eps > 1.0 && eps < 1.0 + 1e-9 {
        1.0
    } else {
        eps
    }
}

/// Wilson score interval for `successes / trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let t = trials as f64;
    let phat = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (phat + z2 / (2.0 * t)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / t + z2 / (4.0 * t * t)).sqrt();
    ((center - half).max(0.0).min(phat), (center + half).min(1.0).max(phat))
}

/// `eps^2 mu_{G,J} / ln n` and `eps^2 mu_{J,H} / ln n` for an intermediate `J`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitRatios {
    pub j: VertexSet,
    pub lower: f64,
    pub upper: f64,
}

/// One `(n, p, eps)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub index: u64,
    pub n: usize,
    /// Grid value of the eps rule that produced this cell.
    pub grid_value: f64,
    pub requested_p: f64,
    pub p: f64,
    pub p_exact: String,
    pub eps: f64,
    pub eps_exact: String,
    pub mu: f64,
    pub mu_exact: String,
    pub phi: f64,
    pub eps2mu: f64,
    pub eps2phi: f64,
    pub eps2mu_over_logn: f64,
    pub eps2phi_over_logn: f64,
    pub sigma_sq_order: Option<f64>,
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub degenerate: bool,
    /// Trials with some `X_x >= (1 + eps) mu` / some `X_x <= (1 - eps) mu`.
    pub upper_tail: u64,
    pub lower_tail: u64,
    /// `r*` for `E_x` cells.
    pub r_star: Option<u64>,
    pub binomial_reference: Option<f64>,
    pub split: Option<SplitRatios>,
    /// Largest `max_x Z_K(x)` over trials, for `zk-max` cells.
    pub max_z: Option<u64>,
    pub wall_ms: u128,
}

impl CellResult {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.p,
            self.eps,
            self.mu,
            self.phi,
            self.eps2mu_over_logn,
            self.eps2phi_over_logn,
            self.estimate,
            self.ci_lo,
            self.ci_hi,
            self.trials,
            self.degenerate
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellError {
    pub n: usize,
    pub grid_value: Option<f64>,
    pub message: String,
}

/// Smallest grid value with estimate at least 1/2, per `(n, p)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub n: usize,
    pub p: f64,
    pub grid_value: Option<f64>,
    pub estimate: Option<f64>,
    pub ci: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotonicViolation {
    pub n: usize,
    pub p: f64,
    pub lower_eps: f64,
    pub higher_eps: f64,
    pub drop: f64,
    pub sigmas: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
    pub errors: Vec<CellError>,
}

impl ScanResult {
    /// The CSV table; error cells are left out (see `errors`).
    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&c.csv_row());
            out.push('\n');
        }
        out
    }

    fn groups(&self) -> Vec<Vec<&CellResult>> {
        let mut groups: Vec<Vec<&CellResult>> = Vec::new();
        for c in &self.cells {
            match groups.last_mut() {
                Some(g) if g[0].n == c.n && g[0].p == c.p => g.push(c),
                _ => groups.push(vec![c]),
            }
        }
        groups
    }

    pub fn crossings(&self) -> Vec<Crossing> {
        self.groups()
            .into_iter()
            .map(|g| {
                let hit = g.iter().find(|c| c.estimate >= 0.5);
                Crossing {
                    n: g[0].n,
                    p: g[0].p,
                    grid_value: hit.map(|c| c.grid_value),
                    estimate: hit.map(|c| c.estimate),
                    ci: hit.map(|c| (c.ci_lo, c.ci_hi)),
                }
            })
            .collect()
    }

    /// Pairs of cells at the same `(n, p)` where the estimate at the larger
    /// eps falls more than `sigmas` pooled standard errors below the one at
    /// the smaller eps.
    pub fn isotonic_violations(&self, sigmas: f64) -> Vec<IsotonicViolation> {
        let mut out = Vec::new();
        for g in self.groups() {
            let mut sorted = g.clone();
            sorted.sort_by(|a, b| a.eps.total_cmp(&b.eps));
            for (i, a) in sorted.iter().enumerate() {
                for b in &sorted[i + 1..] {
                    let drop = a.estimate - b.estimate;
                    if drop <= 0.0 {
                        continue;
                    }
                    let pooled = (a.successes + b.successes) as f64 / (a.trials + b.trials) as f64;
                    let se = (pooled * (1.0 - pooled) * (1.0 / a.trials as f64 + 1.0 / b.trials as f64)).sqrt();
                    if drop > sigmas * se {
                        out.push(IsotonicViolation {
                            n: a.n,
                            p: a.p,
                            lower_eps: a.eps,
                            higher_eps: b.eps,
                            drop,
                            sigmas: if se > 0.0 { drop / se } else { f64::INFINITY },
                        });
                    }
                }
            }
        }
        out
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>6} {:>10} {:>8} {:>10} {:>10} {:>9} {:>9} {:>7} {:>15} {:>6}",
            "n", "p", "eps", "mu", "phi", "e2mu/ln", "e2phi/ln", "est", "95% CI", "deg"
        );
        for c in &self.cells {
            let _ = write!(
                out,
                "{:>6} {:>10.4e} {:>8.4} {:>10.3} {:>10.3} {:>9.3} {:>9.3} {:>7.3} [{:.3},{:.3}] {:>6}",
                c.n,
                c.p,
                c.eps,
                c.mu,
                c.phi,
                c.eps2mu_over_logn,
                c.eps2phi_over_logn,
                c.estimate,
                c.ci_lo,
                c.ci_hi,
                c.degenerate
            );
            if let Some(s) = &c.split {
                let _ = write!(out, "  J={} e2mu_GJ/ln={:.3} e2mu_JH/ln={:.3}", s.j, s.lower, s.upper);
            }
            if let (Some(r), Some(b)) = (c.r_star, c.binomial_reference) {
                let _ = write!(out, "  r*={r} binomial={b:.4}");
            }
            if let Some(z) = c.max_z {
                let _ = write!(out, "  max_z={z}");
            }
            out.push('\n');
        }
        for e in &self.errors {
            let _ = writeln!(out, "n={} grid={:?}: {}", e.n, e.grid_value, e.message);
        }
        for x in self.crossings() {
            match x.grid_value {
                Some(v) => {
                    let (lo, hi) = x.ci.expect("ci");
                    let _ = writeln!(
                        out,
                        "crossing n={} p={:.4e}: grid value {} (estimate {:.3}, CI [{:.3},{:.3}])",
                        x.n,
                        x.p,
                        v,
                        x.estimate.expect("estimate"),
                        lo,
                        hi
                    );
                }
                None => {
                    let _ = writeln!(out, "crossing n={} p={:.4e}: none on this grid", x.n, x.p);
                }
            }
        }
        out
    }
}

/// Per-trial evaluation of one event in sampled hosts.
struct TrialContext<'a> {
    rg: &'a RootedGraph,
    counter: ExtensionCounter,
    event: EventKind,
    lo: i64,
    hi: i64,
    r: u64,
    zk_limit: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct TrialOutcome {
    success: bool,
    upper: bool,
    lower: bool,
    max_z: u64,
}

impl TrialContext<'_> {
    fn evaluate(&self, host: &HostGraph) -> Result<TrialOutcome, EngineError> {
        match self.event {
            EventKind::ExEvent => {
                let root = RootTuple::first(self.rg.v_g());
                Ok(TrialOutcome {
                    success: self.counter.disjoint_event(host, &root, self.r, DEFAULT_LIST_CAP)?,
                    ..Default::default()
                })
            }
            EventKind::ZkMax => {
                let z = per_vertex_copy_counts(host, self.rg.pattern(), Execution::Sequential)?;
                let max_z = z.into_iter().max().unwrap_or(0);
                Ok(TrialOutcome {
                    success: max_z as f64 <= self.zk_limit,
                    max_z,
                    ..Default::default()
                })
            }
            _ => {
                let (min, max) = self.extrema(host)?;
                let upper = max as i64 > self.hi;
                let lower = (min as i64) < self.lo;
                let inside = self.lo <= self.hi && !upper && !lower;
                let success = match self.event {
                    EventKind::Concentration => inside,
                    EventKind::UpperTail => upper,
                    EventKind::LowerTail => lower,
                    _ => unreachable!(),
                };
                Ok(TrialOutcome {
                    success,
                    upper,
                    lower,
                    max_z: 0,
                })
            }
        }
    }

    fn extrema(&self, host: &HostGraph) -> Result<(u64, u64), EngineError> {
        match self.counter.all_roots(host, Execution::Sequential) {
            Ok(s) => Ok((s.min_count, s.max_count)),
            Err(EngineError::TooManyRootTuples { .. }) => {
                let mut min = u64::MAX;
                let mut max = 0;
                for_each_tuple(host.n(), self.rg.v_g(), |x| {
                    let c = self.counter.unordered(host, x)?;
                    min = min.min(c);
                    max = max.max(c);
                    Ok(())
                })?;
                Ok((min, max))
            }
            Err(e) => Err(e),
        }
    }
}

fn for_each_tuple(
    n: usize,
    k: usize,
    mut f: impl FnMut(&RootTuple) -> Result<(), EngineError>,
) -> Result<(), EngineError> {
    fn rec(
        n: usize,
        k: usize,
        cur: &mut Vec<u32>,
        f: &mut dyn FnMut(&RootTuple) -> Result<(), EngineError>,
    ) -> Result<(), EngineError> {
        if cur.len() == k {
            return f(&RootTuple(cur.clone()));
        }
        for v in 0..n as u32 {
            if !cur.contains(&v) {
                cur.push(v);
                rec(n, k, cur, f)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(n, k, &mut Vec::with_capacity(k), &mut f)
}

/// Everything needed to run one cell.
#[derive(Debug, Clone)]
pub struct CellSpec {
    pub index: u64,
    pub n: usize,
    pub grid_value: f64,
    pub requested_p: f64,
    pub p: f64,
    pub eps: f64,
}

/// Runs one cell: exact theory at the snapped `(p, eps)` plus `trials`
/// Monte Carlo trials seeded by `(seed, index, trial)`.
#[allow(clippy::too_many_arguments)]
pub fn run_cell(
    rg: &RootedGraph,
    spec: &CellSpec,
    trials: u64,
    seed: u64,
    event: EventKind,
    split: Option<VertexSet>,
    budget: Option<f64>,
    exec: Execution,
) -> Result<CellResult, ExperimentError> {
    let start = Instant::now();
    let n = spec.n;
    let nn = n as u64;
    if n < rg.v_h() || n < 2 {
        return Err(StatsError::HostTooSmall { n: nn, v_h: rg.v_h() }.into());
    }
    let (p, p_exact) = snap(spec.p);
    let (eps, eps_exact) = snap(spec.eps);
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(ExperimentError::Infeasible(format!("eps = {} is outside (0, 1]", spec.eps)));
    }
    let mu = mu_exact(rg, nn, &p_exact)?;
    let phi = phi_exact(rg, nn, &p_exact)?;
    let eps2 = &eps_exact * &eps_exact;
    let ln = (n as f64).ln();
    let eps2mu = to_f64(&(&eps2 * &mu));
    let eps2phi = to_f64(&(&eps2 * &phi.value));
    let sigma_sq_order = (!phi.value.is_zero()).then(|| {
        to_f64(&((BigRational::from_integer(1.into()) - &p_exact) * &mu * &mu / &phi.value))
    });
    let (lo, hi) = deviation_bounds(&mu, &eps_exact);
    let r = r_star(&mu, &eps_exact);
    let (zk_limit, zk_ok) = match (event, budget) {
        (EventKind::ZkMax, Some(b)) => {
            let (lambda, exponent) = zk_scale(rg.pattern(), n, p)?;
            (b * lambda.powi(exponent as i32), true)
        }
        (EventKind::ZkMax, None) => (0.0, false),
        _ => (0.0, true),
    };
    if !zk_ok {
        return Err(ExperimentError::Config("zk-max needs a budget".into()));
    }
    let ctx = TrialContext {
        rg,
        counter: ExtensionCounter::new(rg),
        event,
        lo,
        hi,
        r,
        zk_limit,
    };
    let outcomes = map_ordered(exec, (0..trials).collect(), |t| {
        let host = sample_gnp(SamplerConfig {
            n,
            p,
            seed: trial_seed(seed, spec.index, t),
        });
        ctx.evaluate(&host)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let successes = outcomes.iter().filter(|o| o.success).count() as u64;
    let (ci_lo, ci_hi) = wilson_interval(successes, trials, Z95);
    let split = split.map(|j| {
        let lower = to_f64(&(&eps2 * mu_between(rg.pattern(), rg.roots(), j, nn, &p_exact))) / ln;
        let upper = to_f64(&(&eps2 * mu_between(rg.pattern(), j, rg.pattern().vertices(), nn, &p_exact))) / ln;
        SplitRatios { j, lower, upper }
    });
    let (r_star_out, reference) = if event == EventKind::ExEvent {
        (Some(r), binomial_reference(rg, nn, &p_exact, &eps_exact).ok())
    } else {
        (None, None)
    };
    Ok(CellResult {
        index: spec.index,
        n,
        grid_value: spec.grid_value,
        requested_p: spec.requested_p,
        p,
        p_exact: ratio_string(&p_exact),
        eps,
        eps_exact: ratio_string(&eps_exact),
        mu: to_f64(&mu),
        mu_exact: ratio_string(&mu),
        phi: to_f64(&phi.value),
        eps2mu,
        eps2phi,
        eps2mu_over_logn: eps2mu / ln,
        eps2phi_over_logn: eps2phi / ln,
        sigma_sq_order,
        successes,
        trials,
        estimate: successes as f64 / trials as f64,
        ci_lo,
        ci_hi,
        degenerate: p == 0.0 || mu < BigRational::new(1.into(), 2.into()),
        upper_tail: outcomes.iter().filter(|o| o.upper).count() as u64,
        lower_tail: outcomes.iter().filter(|o| o.lower).count() as u64,
        r_star: r_star_out,
        binomial_reference: reference,
        split,
        max_z: (event == EventKind::ZkMax).then(|| outcomes.iter().map(|o| o.max_z).max().unwrap_or(0)),
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Concentration probability at one `(n, p, eps)`.
pub fn estimate_concentration(
    rg: &RootedGraph,
    n: usize,
    p: f64,
    eps: f64,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<CellResult, ExperimentError> {
    let spec = CellSpec {
        index: 0,
        n,
        grid_value: eps,
        requested_p: p,
        p,
        eps,
    };
    run_cell(rg, &spec, trials, seed, EventKind::Concentration, None, None, exec)
}

/// Frequency of `E_x` at the first root tuple.
pub fn estimate_ex_event(
    rg: &RootedGraph,
    n: usize,
    p: f64,
    eps: f64,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<CellResult, ExperimentError> {
    let spec = CellSpec {
        index: 0,
        n,
        grid_value: eps,
        requested_p: p,
        p,
        eps,
    };
    run_cell(rg, &spec, trials, seed, EventKind::ExEvent, None, None, exec)
}

/// Runs every cell of a scan. Cell errors are collected, not fatal.
pub fn threshold_scan(config: &ExperimentConfig, exec: Execution) -> Result<ScanResult, ExperimentError> {
    config.validate()?;
    let rg = config.rooted_graph()?;
    let split = config
        .split
        .as_ref()
        .map(|labels| {
            let j = VertexSet::from_labels(labels.iter().copied());
            if !rg.roots().is_subset_of(j) || !j.is_subset_of(rg.pattern().vertices()) {
                return Err(ExperimentError::Config(format!("split {j} must contain the roots and lie in V(H)")));
            }
            Ok(j)
        })
        .transpose()?;
    let mut cells = Vec::new();
    let mut errors = Vec::new();
    let mut index = 0u64;
    for &n in &config.n {
        let ps = match resolve_p(&config.p_rule, &rg, n) {
            Ok(ps) => ps,
            Err(e) => {
                errors.push(CellError {
                    n,
                    grid_value: None,
                    message: e.to_string(),
                });
                index += config.eps_rule.values().len() as u64;
                continue;
            }
        };
        for requested_p in ps {
            let (p, p_exact) = snap(requested_p);
            let theory = if n >= rg.v_h() {
                mu_exact(&rg, n as u64, &p_exact)
                    .and_then(|mu| Ok((to_f64(&mu), to_f64(&phi_exact(&rg, n as u64, &p_exact)?.value))))
            } else {
                Err(StatsError::HostTooSmall {
                    n: n as u64,
                    v_h: rg.v_h(),
                })
            };
            for &v in config.eps_rule.values() {
                let result = theory.clone().map_err(ExperimentError::from).and_then(|(mu, phi)| {
                    let eps = resolve_eps(&config.eps_rule, v, n, p, mu, phi);
                    let spec = CellSpec {
                        index,
                        n,
                        grid_value: v,
                        requested_p,
                        p,
                        eps,
                    };
                    run_cell(&rg, &spec, config.trials, config.seed, config.event, split, config.budget, exec)
                });
                match result {
                    Ok(c) => cells.push(c),
                    Err(e) => errors.push(CellError {
                        n,
                        grid_value: Some(v),
                        message: e.to_string(),
                    }),
                }
                index += 1;
            }
        }
    }
    Ok(ScanResult {
        config: config.clone(),
        cells,
        errors,
    })
}

/// `lambda = n p^(d_K)` and the exponent `v_K - v_{G_min}`.
pub fn zk_scale(k: &PatternGraph, n: usize, p: f64) -> Result<(f64, usize), ExperimentError> {
    let analysis = unrooted_analysis(k)?;
    let d = analysis.d_k;
    let d = *d.numer() as f64 / *d.denom() as f64;
    Ok((n as f64 * p.powf(d), k.vertex_count() - analysis.g_min.len()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZkReport {
    pub k: String,
    pub n: usize,
    pub p: f64,
    pub lambda: f64,
    pub exponent: usize,
    pub budget: f64,
    /// `max_x Z_K(x)` in each trial.
    pub max_z: Vec<u64>,
    /// Largest `max_z / lambda^exponent` over trials.
    pub max_ratio: f64,
    pub trials: u64,
    pub within_budget: bool,
}

pub const ZK_CSV_HEADER: &str = "k,n,p,lambda,exponent,budget,max_z,max_ratio,trials,within_budget";

impl ZkReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.k,
            self.n,
            self.p,
            self.lambda,
            self.exponent,
            self.budget,
            self.max_z.iter().max().copied().unwrap_or(0),
            self.max_ratio,
            self.trials,
            self.within_budget
        )
    }
}

/// Samples `trials` hosts and records `max_x Z_K(x)` in each against the
/// budget `budget * lambda^(v_K - v_{G_min})`. `K` must be balanced.
#[allow(clippy::too_many_arguments)]
pub fn z_k_bound_check(
    name: &str,
    k: &PatternGraph,
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
    budget: f64,
    exec: Execution,
) -> Result<ZkReport, ExperimentError> {
    let analysis = unrooted_analysis(k)?;
    if !analysis.balanced {
        return Err(ExperimentError::Config(format!("{name} is not balanced")));
    }
    if n < k.vertex_count().max(2) {
        return Err(StatsError::HostTooSmall {
            n: n as u64,
            v_h: k.vertex_count(),
        }
        .into());
    }
    let (p, _) = snap(p);
    let (lambda, exponent) = zk_scale(k, n, p)?;
    let scale = lambda.powi(exponent as i32);
    let max_z = map_ordered(exec, (0..trials).collect(), |t| {
        let host = sample_gnp(SamplerConfig {
            n,
            p,
            seed: trial_seed(seed, 0, t),
        });
        per_vertex_copy_counts(&host, k, Execution::Sequential).map(|z| z.into_iter().max().unwrap_or(0))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let max_ratio = max_z.iter().map(|&z| z as f64 / scale).fold(0.0, f64::max);
    Ok(ZkReport {
        k: name.to_string(),
        n,
        p,
        lambda,
        exponent,
        budget,
        within_budget: max_ratio <= budget,
        max_z,
        max_ratio,
        trials,
    })
}

/// `mu` as an `f64` at a float `p` (snapped first), for reports.
pub fn mu_at(rg: &RootedGraph, n: usize, p: f64) -> Result<f64, ExperimentError> {
    Ok(mu_exact(rg, n as u64, &snap(p).1)?.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_fixture;

    #[test]
    fn wilson_contains_estimate() {
        for (s, t) in [(0, 10), (10, 10), (3, 7), (50, 100)] {
            let (lo, hi) = wilson_interval(s, t, Z95);
            let est = s as f64 / t as f64;
            assert!(lo <= est && est <= hi && 0.0 <= lo && hi <= 1.0);
        }
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn p_rules_solve() {
        let rg = builtin_fixture("tri_root").unwrap();
        let p = resolve_p(&PRule::Mu { target: 10.0 }, &rg, 100).unwrap()[0];
        assert!((mu_at(&rg, 100, p).unwrap() - 10.0).abs() < 1e-6);
        assert!(resolve_p(&PRule::Mu { target: 1e9 }, &rg, 10).is_err());
        let p = resolve_p(&PRule::Power { a: 2.0, b: 0.5 }, &rg, 100).unwrap()[0];
        assert_eq!(p, 0.2);
    }

    #[test]
    fn degenerate_cells() {
        let rg = builtin_fixture("tri_root").unwrap();
        let one = estimate_concentration(&rg, 8, 1.0, 0.1, 20, 1, Execution::Sequential).unwrap();
        assert_eq!(one.estimate, 1.0);
        let zero = estimate_concentration(&rg, 8, 0.0, 0.5, 20, 1, Execution::Sequential).unwrap();
        assert_eq!(zero.estimate, 0.0);
        assert!(zero.degenerate);
        assert_eq!(zero.lower_tail, 20);
    }

    #[test]
    fn config_round_trip() {
        let text = r#"
graph = "tri_root"
n = [64, 128]
trials = 10
seed = 5

[p_rule]
kind = "mu-over-log-n"
target = 2.0

[eps_rule]
kind = "eps2mu-over-log-n"
values = [0.5, 2.0]
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.event, EventKind::Concentration);
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        assert!(ExperimentConfig::from_toml(&text.replace("trials = 10", "trials = 0")).is_err());
    }

    #[test]
    fn scan_reports_infeasible_cells() {
        let cfg = ExperimentConfig {
            graph: "tri_root".into(),
            n: vec![32],
            trials: 5,
            seed: 3,
            event: EventKind::Concentration,
            p_rule: PRule::Explicit { values: vec![0.5] },
            eps_rule: EpsRule::Eps2mu {
                values: vec![1.0, 1e6],
            },
            split: None,
            budget: None,
        };
        let scan = threshold_scan(&cfg, Execution::Sequential).unwrap();
        assert_eq!(scan.cells.len(), 1);
        assert_eq!(scan.errors.len(), 1);
        assert!(scan.csv().starts_with(CSV_HEADER));
        assert_eq!(scan.csv().lines().count(), 2);
    }

    #[test]
    fn zk_scale_triangle() {
        let tri = PatternGraph::complete(3).unwrap();
        let (lambda, exponent) = zk_scale(&tri, 100, 0.1).unwrap();
        assert!((lambda - 10.0).abs() < 1e-12);
        assert_eq!(exponent, 0);
        let r = z_k_bound_check("triangle", &tri, 50, 0.0, 3, 1, 32.0, Execution::Sequential).unwrap();
        assert_eq!(r.max_z, vec![0, 0, 0]);
    }
}
