//! Seeded Monte Carlo harness.
//!
//! Concentration runs sample independent instances, solve each for the s-T
//! capacity, and count violations of the bound-report thresholds. Trials get
//! their seeds from `(master_seed, "trial", index)`, results are collected in
//! trial order, and aggregates are computed sequentially from that ordered
//! list, so the output is bit-identical no matter how many workers run.
//!
//! The independence test fixes one cut of a dual radio network and z-tests
//! pairwise covariances of crossing-edge indicators. Pairs are reported in
//! two classes: vertex-disjoint pairs draw on disjoint randomness and are
//! the headline independence check; pairs sharing a node also share that
//! node's radio membership (and, off the torus, its position), which
//! correlates them, so they are reported separately.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundReport};
use crate::generators::{sample_drn, DrnParams, ModelParams};
use crate::graph::RoleAssignment;
use crate::mincut::{terminal_set_capacity, Mode};
use crate::seeding;
use crate::{Error, Result};

/// Default ceiling on `n · trials` for one experiment.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Two-sided 1% normal quantile used by the covariance z-tests.
pub const Z_REJECT_001: f64 = 2.5758293035489004;

/// Independence estimates need at least this many trials for the z-test
/// normal approximation to hold at the 1% level.
pub const MIN_INDEPENDENCE_TRIALS: usize = 1000;

/// How terminals are chosen each trial; the source is always node 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalPolicy {
    /// `α` terminals evenly spaced around the ring: `⌊(j+1)·n/(α+1)⌋`.
    /// With one terminal this is the antipode `⌊n/2⌋`.
    Antipodal,
    /// `α` distinct non-source nodes drawn from the per-trial role stream.
    RandomDistinct,
    /// A fixed terminal list (must have `α` entries, none equal to 0).
    Explicit(Vec<usize>),
}

/// Natural default: antipodal terminals on ring models, random ones on
/// geometric models (where indices carry no structure).
pub fn default_terminal_policy(model: &ModelParams) -> TerminalPolicy {
    match model {
        ModelParams::Drn(_) => TerminalPolicy::RandomDistinct,
        _ => TerminalPolicy::Antipodal,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelParams,
    pub alpha: usize,
    /// Exponent for the bound report; `None` applies the midpoint policy.
    pub d: Option<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub mode: Mode,
    pub terminal_policy: TerminalPolicy,
    /// Refusal ceiling on `n · trials`.
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

impl ExperimentConfig {
    pub fn new(model: ModelParams, trials: usize, master_seed: u64) -> Self {
        let terminal_policy = default_terminal_policy(&model);
        ExperimentConfig {
            model,
            alpha: 1,
            d: None,
            trials,
            master_seed,
            mode: Mode::Paper,
            terminal_policy,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.alpha == 0 {
            return Err(Error::InvalidConfig("alpha must be at least 1".into()));
        }
        let n = self.model.n();
        if self.alpha + 1 > n {
            return Err(Error::InvalidConfig(format!(
                "alpha={} leaves no room for a source among n={n} nodes",
                self.alpha
            )));
        }
        if let TerminalPolicy::Explicit(list) = &self.terminal_policy {
            if list.len() != self.alpha {
                return Err(Error::InvalidConfig(format!(
                    "explicit terminal list has {} entries but alpha={}",
                    list.len(),
                    self.alpha
                )));
            }
            if list.contains(&0) {
                return Err(Error::InvalidConfig(
                    "explicit terminals must not include the source (node 0)".into(),
                ));
            }
        }
        let cost = n as u64 * self.trials as u64;
        if cost > self.budget {
            return Err(Error::BudgetExceeded(format!(
                "n*trials = {cost} exceeds the budget of {}",
                self.budget
            )));
        }
        Ok(())
    }

    fn terminals_for_trial(&self, trial: u64) -> Result<Vec<usize>> {
        let n = self.model.n();
        match &self.terminal_policy {
            TerminalPolicy::Antipodal => Ok((0..self.alpha)
                .map(|j| (j + 1) * n / (self.alpha + 1))
                .collect()),
            TerminalPolicy::RandomDistinct => {
                use rand::Rng;
                let mut rng = seeding::stream(self.master_seed, "roles", trial);
                let mut picked = Vec::with_capacity(self.alpha);
                while picked.len() < self.alpha {
                    let candidate = rng.random_range(1..n);
                    if !picked.contains(&candidate) {
                        picked.push(candidate);
                    }
                }
                Ok(picked)
            }
            TerminalPolicy::Explicit(list) => Ok(list.clone()),
        }
    }
}

/// Outcome of a concentration run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub report: BoundReport,
    /// Per-trial s-T capacities in trial order.
    pub capacities: Vec<f64>,
    /// Trials with `C ≤ lower_threshold` (the lower deviation event).
    pub lower_violations: usize,
    /// Trials with `C ≥ upper_threshold`.
    pub upper_violations: usize,
    pub lower_violation_frequency: f64,
    pub upper_violation_frequency: f64,
    /// 95% Wilson intervals on the violation frequencies.
    pub lower_violation_ci95: (f64, f64),
    pub upper_violation_ci95: (f64, f64),
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub mean_capacity: f64,
    pub min_capacity: f64,
    pub max_capacity: f64,
    pub elapsed_ms: u64,
}

impl ExperimentResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    pub fn csv_header() -> &'static str {
        "model,n,k,p,r_short,r_long,metric,d,lambda,epsilon,c_min,trials,\
         lower_violations,upper_violations,mean_ratio,std_ratio"
    }

    pub fn to_csv_row(&self) -> String {
        let f = bounds::model_csv_fields(&self.config.model);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            f.0, f.1, f.2, f.3, f.4, f.5, f.6,
            self.report.d,
            self.report.lambda,
            self.report.epsilon,
            self.report.c_min,
            self.config.trials,
            self.lower_violations,
            self.upper_violations,
            self.mean_ratio,
            self.std_ratio,
        )
    }
}

/// 95% Wilson score interval for a binomial proportion.
fn wilson_ci95(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs `trials` independent instances and compares the observed capacities
/// against the report thresholds. Deterministic given the config, including
/// the master seed, regardless of worker count.
pub fn run_concentration(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let report = bounds::theorem_report(&config.model, config.alpha, config.d)?;
    let n = config.model.n();
    let start = Instant::now();

    let capacities: Result<Vec<f64>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = seeding::derive_seed(config.master_seed, "trial", trial as u64);
            let graph = config.model.sample(seed)?;
            let terminals = config.terminals_for_trial(trial as u64)?;
            let roles = RoleAssignment::new(n, 0, &terminals)?;
            Ok(terminal_set_capacity(&graph, &roles, config.mode)?.value)
        })
        .collect();
    let capacities = capacities?;
    let elapsed_ms = start.elapsed().as_millis() as u64;

    let lower_violations = capacities.iter().filter(|&&c| c <= report.lower_threshold).count();
    let upper_violations = capacities.iter().filter(|&&c| c >= report.upper_threshold).count();
    let ratios: Vec<f64> = capacities.iter().map(|c| c / report.c_min).collect();
    let (mean_ratio, std_ratio) = mean_and_std(&ratios);
    let (mean_capacity, _) = mean_and_std(&capacities);
    let trials = config.trials;

    Ok(ExperimentResult {
        config: config.clone(),
        report,
        lower_violations,
        upper_violations,
        lower_violation_frequency: lower_violations as f64 / trials as f64,
        upper_violation_frequency: upper_violations as f64 / trials as f64,
        lower_violation_ci95: wilson_ci95(lower_violations, trials),
        upper_violation_ci95: wilson_ci95(upper_violations, trials),
        mean_ratio,
        std_ratio,
        mean_capacity,
        min_capacity: capacities.iter().copied().fold(f64::INFINITY, f64::min),
        max_capacity: capacities.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        capacities,
        elapsed_ms,
    })
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub result: ExperimentResult,
}

/// Runs each grid point with its own seed `(master_seed, "sweep-point", i)`;
/// rows come back in grid order. An empty grid is an error.
pub fn run_sweep(points: &[ExperimentConfig], master_seed: u64) -> Result<Vec<SweepRow>> {
    if points.is_empty() {
        return Err(Error::InvalidConfig("empty sweep grid".into()));
    }
    points
        .iter()
        .enumerate()
        .map(|(index, point)| {
            let mut config = point.clone();
            config.master_seed = seeding::derive_seed(master_seed, "sweep-point", index as u64);
            Ok(SweepRow { index, result: run_concentration(&config)? })
        })
        .collect()
}

/// Configuration of an independence-in-cut test on a dual radio network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceConfig {
    pub params: DrnParams,
    /// Size of the fixed cut `V_x`; defaults to `⌊N/2⌋`.
    pub cut_size: Option<usize>,
    pub trials: usize,
    pub master_seed: u64,
    /// Pairs sampled per class (disjoint / sharing).
    pub pair_samples: usize,
}

impl IndependenceConfig {
    pub fn new(params: DrnParams, trials: usize, master_seed: u64) -> Self {
        IndependenceConfig { params, cut_size: None, trials, master_seed, pair_samples: 200 }
    }
}

/// Covariance z-test of one crossing-edge pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairStat {
    pub edge_a: (usize, usize),
    pub edge_b: (usize, usize),
    pub shares_node: bool,
    pub covariance: f64,
    pub z: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndependenceTestResult {
    pub trials: usize,
    pub mu: f64,
    pub cut_size: usize,
    pub crossing_edges: usize,
    pub pair_stats: Vec<PairStat>,
    /// Rejection rate at significance 0.01 over vertex-disjoint crossing
    /// pairs — the independence-in-cut check proper.
    pub rejection_rate: f64,
    /// Rejection rate over crossing pairs sharing a node. The shared node's
    /// radio membership couples such pairs even on the torus; the square
    /// metric adds position coupling on top.
    pub sharing_rejection_rate: f64,
    /// Estimate of `P(e ∧ f ∧ g)` for two crossing edges at the source and
    /// the non-crossing edge closing the triangle.
    pub triple_probability: f64,
    /// `P(e ∧ f ∧ g) / μ³`; above 1 under the shared-geometry dependence.
    pub triple_ratio: f64,
    pub triple_ratio_ci95: (f64, f64),
}

impl IndependenceTestResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

/// Runs the independence-in-cut test: fixes the cut `V_x = {1, …, x}` with
/// source 0 and terminal n−1, samples `trials` instances, and z-tests the
/// covariance of sampled crossing-edge pairs in both classes.
pub fn run_independence_test(config: &IndependenceConfig) -> Result<IndependenceTestResult> {
    config.params.validate()?;
    if config.trials < MIN_INDEPENDENCE_TRIALS {
        return Err(Error::InvalidConfig(format!(
            "independence tests need at least {MIN_INDEPENDENCE_TRIALS} trials \
             for the z-test normal approximation, got {}",
            config.trials
        )));
    }
    if config.pair_samples == 0 {
        return Err(Error::InvalidConfig("pair_samples must be at least 1".into()));
    }
    let n = config.params.n;
    if n < 6 {
        return Err(Error::InvalidConfig(format!(
            "independence tests need n >= 6 to form both pair classes, got n={n}"
        )));
    }
    let relay_count = n - 2;
    let cut_size = config.cut_size.unwrap_or(relay_count / 2);
    if cut_size < 1 || cut_size + 2 > relay_count {
        return Err(Error::InvalidConfig(format!(
            "cut size must satisfy 1 <= x <= N-2 (N={relay_count}), got {cut_size}"
        )));
    }

    // Fixed roles: source 0, terminal n-1, V_x = the first cut_size relays.
    let source = 0usize;
    let terminal = n - 1;
    let in_cut = |v: usize| (1..=cut_size).contains(&v);
    let mut crossing: Vec<(usize, usize)> = Vec::new();
    for i in (cut_size + 1)..terminal {
        crossing.push((source, i));
    }
    for j in 1..=cut_size {
        crossing.push((j, terminal));
    }
    for j in 1..=cut_size {
        for i in (cut_size + 1)..terminal {
            crossing.push((j, i));
        }
    }
    debug_assert!(crossing.iter().all(|&(a, b)| {
        let relay_side = |v: usize| v != source && v != terminal;
        (a == source && relay_side(b) && !in_cut(b))
            || (b == terminal && in_cut(a))
            || (relay_side(a) && relay_side(b) && in_cut(a) != in_cut(b))
    }));

    // Triangle probe: two source edges into the far side plus the
    // non-crossing edge between those far-side relays.
    let far_a = cut_size + 1;
    let far_b = cut_size + 2;

    // Indicator matrix, trial-major.
    let rows: Result<Vec<(Vec<bool>, bool)>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = seeding::derive_seed(config.master_seed, "trial", trial as u64);
            let instance = sample_drn(&config.params, seed)?;
            let g = &instance.graph;
            let row: Vec<bool> = crossing.iter().map(|&(a, b)| g.has_edge(a, b)).collect();
            let triple = g.has_edge(source, far_a)
                && g.has_edge(source, far_b)
                && g.has_edge(far_a, far_b);
            Ok((row, triple))
        })
        .collect();
    let rows = rows?;

    // Sample pairs per class from the dedicated pair stream.
    use rand::Rng;
    let mut rng = seeding::stream(config.master_seed, "pairs", 0);
    let mut disjoint: Vec<(usize, usize)> = Vec::with_capacity(config.pair_samples);
    let mut sharing: Vec<(usize, usize)> = Vec::with_capacity(config.pair_samples);
    let mut guard = 0u64;
    while (disjoint.len() < config.pair_samples || sharing.len() < config.pair_samples)
        && guard < 10_000_000
    {
        guard += 1;
        let a = rng.random_range(0..crossing.len());
        let b = rng.random_range(0..crossing.len());
        if a == b {
            continue;
        }
        let (ea, eb) = (crossing[a.min(b)], crossing[a.max(b)]);
        let shares =
            ea.0 == eb.0 || ea.0 == eb.1 || ea.1 == eb.0 || ea.1 == eb.1;
        let bucket = if shares { &mut sharing } else { &mut disjoint };
        if bucket.len() < config.pair_samples && !bucket.contains(&(a.min(b), a.max(b))) {
            bucket.push((a.min(b), a.max(b)));
        }
    }

    let trials_f = config.trials as f64;
    let stat_for = |ia: usize, ib: usize| -> PairStat {
        let mut ca = 0usize;
        let mut cb = 0usize;
        let mut cab = 0usize;
        for (row, _) in &rows {
            let (a, b) = (row[ia], row[ib]);
            ca += usize::from(a);
            cb += usize::from(b);
            cab += usize::from(a && b);
        }
        let pa = ca as f64 / trials_f;
        let pb = cb as f64 / trials_f;
        let pab = cab as f64 / trials_f;
        let covariance = pab - pa * pb;
        let var = pa * (1.0 - pa) * pb * (1.0 - pb);
        let z = if var > 0.0 { trials_f.sqrt() * covariance / var.sqrt() } else { 0.0 };
        let (ea, eb) = (crossing[ia], crossing[ib]);
        PairStat {
            edge_a: ea,
            edge_b: eb,
            shares_node: ea.0 == eb.0 || ea.0 == eb.1 || ea.1 == eb.0 || ea.1 == eb.1,
            covariance,
            z,
            reject: z.abs() > Z_REJECT_001,
        }
    };

    let mut pair_stats: Vec<PairStat> = Vec::with_capacity(disjoint.len() + sharing.len());
    pair_stats.extend(disjoint.iter().map(|&(a, b)| stat_for(a, b)));
    pair_stats.extend(sharing.iter().map(|&(a, b)| stat_for(a, b)));

    let rate = |share: bool| {
        let class: Vec<&PairStat> =
            pair_stats.iter().filter(|s| s.shares_node == share).collect();
        if class.is_empty() {
            0.0
        } else {
            class.iter().filter(|s| s.reject).count() as f64 / class.len() as f64
        }
    };
    let rejection_rate = rate(false);
    let sharing_rejection_rate = rate(true);

    let triple_count = rows.iter().filter(|(_, t)| *t).count();
    let triple_probability = triple_count as f64 / trials_f;
    let mu = config.params.mu()?;
    let mu3 = mu * mu * mu;
    let (ci_lo, ci_hi) = wilson_ci95(triple_count, config.trials);

    Ok(IndependenceTestResult {
        trials: config.trials,
        mu,
        cut_size,
        crossing_edges: crossing.len(),
        pair_stats,
        rejection_rate,
        sharing_rejection_rate,
        triple_probability,
        triple_ratio: triple_probability / mu3,
        triple_ratio_ci95: (ci_lo / mu3, ci_hi / mu3),
    })
}
