//! Closed-form evaluation of the capacity bounds.
//!
//! For a model with minimum positive edge probability `λ` and minimum
//! expected cut `c_min`, the s-T capacity concentrates inside
//! `((1−ε)·c_min, (1+ε)·c_min)` for `ε = √(d·ln(n−2) / (λ²(n−2)))` and any
//! `1 < d < λ²(n−2)/ln(n−2)`: the lower event has probability at most
//! `α·2/(N^{2d} − N^{d+1})` and the upper at most `1/(n−2)^{2d}`, `N = n−2`.
//!
//! Per-model centers: shortcuts `c_min = k + (n−1−k)p`, `λ = p`; rewiring
//! `c_min = k`, `λ = min{1−p, pk/(n−k−1)}`; dual radio `c_min = (n−2)μ`,
//! `λ = μ = π r_S² + π p²(r_L² − r_S²)`. The square-metric dual radio
//! variant keeps the upper threshold and weakens the lower one to
//! `(1−4ε)(n−2)μ/4` (corner nodes cover a quarter disc).

use serde::{Deserialize, Serialize};

use crate::generators::{DrnParams, Metric, ModelParams, SwrParams, WeightedGraph};
use crate::{Error, Result};

/// Smallest strictly positive edge probability in the expected graph.
pub fn lambda_of(wg: &WeightedGraph) -> Result<f64> {
    let mut min_pos: Option<f64> = None;
    for (_, _, w) in wg.pairs() {
        if w > 0.0 && min_pos.is_none_or(|m| w < m) {
            min_pos = Some(w);
        }
    }
    min_pos.ok_or_else(|| Error::InvalidBoundQuery("all edge weights are zero".into()))
}

/// Deviation radius `ε = √(d·ln(n−2) / (λ²·(n−2)))`.
pub fn epsilon_of(d: f64, lambda: f64, n: usize) -> Result<f64> {
    if n <= 3 {
        return Err(Error::InvalidBoundQuery(format!(
            "epsilon requires n >= 4 so that ln(n-2) > 0, got n={n}"
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidBoundQuery(format!("lambda must be positive, got {lambda}")));
    }
    if !(d > 0.0) {
        return Err(Error::InvalidBoundQuery(format!("d must be positive, got {d}")));
    }
    let m = (n - 2) as f64;
    Ok((d * m.ln() / (lambda * lambda * m)).sqrt())
}

/// The open admissible interval for the exponent `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DRange {
    /// Always 1; kept explicit so the interval prints as stated.
    pub lower: f64,
    /// `λ²(n−2)/ln(n−2)`; the interval is empty when this is ≤ 1.
    pub upper: f64,
}

impl DRange {
    pub fn is_empty(&self) -> bool {
        self.upper <= self.lower
    }

    pub fn contains(&self, d: f64) -> bool {
        d > self.lower && d < self.upper
    }
}

/// Admissible `d` interval `(1, λ²(n−2)/ln(n−2))`.
pub fn d_range(lambda: f64, n: usize) -> Result<DRange> {
    if n <= 3 {
        return Err(Error::InvalidBoundQuery(format!(
            "the d interval requires n >= 4, got n={n}"
        )));
    }
    let m = (n - 2) as f64;
    Ok(DRange { lower: 1.0, upper: lambda * lambda * m / m.ln() })
}

/// Per-cut tail bound `exp(−2(N + x(N−x))·ε²·λ²)` for a size-`x` cut over
/// `relay_count` relays.
pub fn hoeffding_cut_bound(
    relay_count: usize,
    x: usize,
    epsilon: f64,
    lambda: f64,
) -> Result<f64> {
    if x > relay_count {
        return Err(Error::InvalidBoundQuery(format!(
            "cut size {x} exceeds relay count {relay_count}"
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidBoundQuery(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidBoundQuery(format!("lambda must lie in (0, 1], got {lambda}")));
    }
    let n = relay_count as f64;
    let x = x as f64;
    Ok((-2.0 * (n + x * (n - x)) * epsilon * epsilon * lambda * lambda).exp())
}

/// Union bound over all cut sizes: `2β(1+√β)^N` with `β = e^{−2ε²λ²N}`.
///
/// Returned unclamped; values above 1 are vacuous. See
/// [`union_bound_clamped`] for the probability-valued convenience.
pub fn union_bound(relay_count: usize, epsilon: f64, lambda: f64) -> f64 {
    let n = relay_count as f64;
    let beta = (-2.0 * epsilon * epsilon * lambda * lambda * n).exp();
    2.0 * beta * (1.0 + beta.sqrt()).powf(n)
}

/// [`union_bound`] clamped into [0, 1].
pub fn union_bound_clamped(relay_count: usize, epsilon: f64, lambda: f64) -> f64 {
    union_bound(relay_count, epsilon, lambda).min(1.0)
}

/// Minimum expected cut of the shortcuts model: `k + (n−1−k)p`.
pub fn cmin_sws(n: usize, k: usize, p: f64) -> Result<f64> {
    crate::generators::SwsParams { n, k, p }.validate()?;
    Ok(k as f64 + (n - 1 - k) as f64 * p)
}

/// Minimum expected cut of the rewiring model: exactly `k`.
pub fn cmin_swr(k: usize) -> f64 {
    k as f64
}

/// Dual-radio pairwise connection probability
/// `μ = π r_S² + π p²(r_L² − r_S²)`.
pub fn mu_drn(p: f64, r_short: f64, r_long: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {p}")));
    }
    if !(r_short > 0.0 && r_short <= r_long) || !r_long.is_finite() {
        return Err(Error::InvalidParams(format!(
            "radii must satisfy 0 < r_short <= r_long, got r_short={r_short}, r_long={r_long}"
        )));
    }
    let pi = std::f64::consts::PI;
    Ok(pi * r_short * r_short + pi * p * p * (r_long * r_long - r_short * r_short))
}

/// Minimum expected cut of a dual radio network: `(n−2)·μ`.
pub fn cmin_drn(n: usize, mu: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidParams(format!("mu must lie in [0, 1], got {mu}")));
    }
    Ok((n - 2) as f64 * mu)
}

/// Everything the concentration theorems say about one parameterization.
///
/// Serializes to a flat JSON object; the model parameters are inlined next
/// to the derived quantities. Vacuous probability bounds (values above 1, or
/// undefined when `d ≤ 1`) are kept unclamped in `*_prob_bound`, flagged in
/// `*_prob_vacuous`, and clamped separately in `*_prob_bound_clamped`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(flatten)]
    pub model: ModelParams,
    pub alpha: usize,
    pub d: f64,
    /// Upper endpoint of the admissible open interval `(1, d_max)`.
    pub d_max: f64,
    pub d_valid: bool,
    pub lambda: f64,
    pub epsilon: f64,
    pub c_min: f64,
    pub lower_threshold: f64,
    pub upper_threshold: f64,
    /// `max(0, lower_threshold)`; the bracket includes zero when they differ.
    pub lower_threshold_clamped: f64,
    pub bracket_includes_zero: bool,
    /// `α·2/(N^{2d} − N^{d+1})` with `N = n−2`; infinite when `d ≤ 1`.
    pub lower_prob_bound: f64,
    /// `1/(n−2)^{2d}`.
    pub upper_prob_bound: f64,
    pub lower_prob_bound_clamped: f64,
    pub upper_prob_bound_clamped: f64,
    pub lower_prob_vacuous: bool,
    pub upper_prob_vacuous: bool,
    /// Dual-radio connection probability; absent for lattice models.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Square-metric corner probability `μ/4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_prime: Option<f64>,
    /// Square-metric deviation radius `4ε`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_prime: Option<f64>,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "model,n,k,p,r_short,r_long,metric,alpha,d,d_valid,lambda,epsilon,c_min,\
         lower_threshold,upper_threshold,lower_prob_bound,upper_prob_bound"
    }

    pub fn to_csv_row(&self) -> String {
        let f = model_csv_fields(&self.model);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            f.0, f.1, f.2, f.3, f.4, f.5, f.6,
            self.alpha,
            self.d,
            self.d_valid,
            self.lambda,
            self.epsilon,
            self.c_min,
            self.lower_threshold,
            self.upper_threshold,
            self.lower_prob_bound,
            self.upper_prob_bound,
        )
    }
}

/// CSV cells (model, n, k, p, r_short, r_long, metric); blanks when absent.
pub(crate) fn model_csv_fields(
    model: &ModelParams,
) -> (&'static str, String, String, String, String, String, String) {
    match *model {
        ModelParams::Sws(p) => (
            "sws",
            p.n.to_string(),
            p.k.to_string(),
            p.p.to_string(),
            String::new(),
            String::new(),
            String::new(),
        ),
        ModelParams::Swr(p) => (
            "swr",
            p.n.to_string(),
            p.k.to_string(),
            p.p.to_string(),
            String::new(),
            String::new(),
            String::new(),
        ),
        ModelParams::Drn(p) => (
            "drn",
            p.n.to_string(),
            String::new(),
            p.p.to_string(),
            p.r_short.to_string(),
            p.r_long.to_string(),
            match p.metric {
                Metric::Torus => "torus".to_string(),
                Metric::Square => "square".to_string(),
            },
        ),
    }
}

/// Midpoint policy: `1 + (d_max − 1)/2` inside a nonempty interval, else 1
/// pro forma (reported with `d_valid = false`).
fn default_d(range: &DRange) -> f64 {
    if range.is_empty() {
        1.0
    } else {
        1.0 + 0.5 * (range.upper - 1.0)
    }
}

fn lower_prob_bound_value(n: usize, d: f64, alpha: usize) -> f64 {
    if d <= 1.0 {
        // The geometric-series step behind the bound needs d > 1.
        return f64::INFINITY;
    }
    let m = (n - 2) as f64;
    alpha as f64 * 2.0 / (m.powf(2.0 * d) - m.powf(d + 1.0))
}

fn upper_prob_bound_value(n: usize, d: f64) -> f64 {
    ((n - 2) as f64).powf(-2.0 * d)
}

fn assemble_report(
    model: ModelParams,
    alpha: usize,
    lambda: f64,
    c_min: f64,
    d: Option<f64>,
    mu: Option<f64>,
    square: bool,
) -> Result<BoundReport> {
    let n = model.n();
    if alpha == 0 {
        return Err(Error::InvalidBoundQuery("alpha must be at least 1".into()));
    }
    if n <= 3 {
        return Err(Error::InvalidBoundQuery(format!(
            "bound reports require n >= 4, got n={n}"
        )));
    }
    let range = d_range(lambda, n)?;
    let d = match d {
        Some(d) => d,
        None => default_d(&range),
    };
    let d_valid = range.contains(d);
    let epsilon = epsilon_of(d, lambda, n)?;

    let (lower_threshold, upper_threshold, mu_prime, epsilon_prime) = if square {
        let mu = mu.expect("square reports carry mu");
        let mu_prime = mu / 4.0;
        let epsilon_prime = 4.0 * epsilon;
        (
            (1.0 - epsilon_prime) * (n - 2) as f64 * mu_prime,
            (1.0 + epsilon) * c_min,
            Some(mu_prime),
            Some(epsilon_prime),
        )
    } else {
        ((1.0 - epsilon) * c_min, (1.0 + epsilon) * c_min, None, None)
    };

    let lower_prob_bound = lower_prob_bound_value(n, d, alpha);
    let upper_prob_bound = upper_prob_bound_value(n, d);
    Ok(BoundReport {
        model,
        alpha,
        d,
        d_max: range.upper,
        d_valid,
        lambda,
        epsilon,
        c_min,
        lower_threshold,
        upper_threshold,
        lower_threshold_clamped: lower_threshold.max(0.0),
        bracket_includes_zero: lower_threshold <= 0.0,
        lower_prob_bound,
        upper_prob_bound,
        lower_prob_bound_clamped: lower_prob_bound.min(1.0),
        upper_prob_bound_clamped: upper_prob_bound.min(1.0),
        lower_prob_vacuous: !(lower_prob_bound < 1.0),
        upper_prob_vacuous: !(upper_prob_bound < 1.0),
        mu,
        mu_prime,
        epsilon_prime,
    })
}

/// Assembles the full bound report for a model. `λ` is read off the expected
/// graph, `c_min` from the per-model closed form; when `d` is omitted the
/// midpoint policy applies. Never refuses valid parameters: an empty or
/// missed `d` interval is reported via `d_valid = false`.
pub fn theorem_report(
    model: &ModelParams,
    alpha: usize,
    d: Option<f64>,
) -> Result<BoundReport> {
    model.validate()?;
    let wg = crate::generators::expected_graph(model)?;
    let lambda = lambda_of(&wg)?;
    let (c_min, mu) = match *model {
        ModelParams::Sws(p) => (cmin_sws(p.n, p.k, p.p)?, None),
        ModelParams::Swr(p) => (cmin_swr(p.k), None),
        ModelParams::Drn(p) => {
            let mu = mu_drn(p.p, p.r_short, p.r_long)?;
            (cmin_drn(p.n, mu)?, Some(mu))
        }
    };
    assemble_report(*model, alpha, lambda, c_min, d, mu, false)
}

/// Bound report for the square-metric dual radio network: the lower
/// threshold weakens to `(1−4ε)(n−2)μ/4` while the upper stays
/// `(1+ε)(n−2)μ`; the report carries `μ' = μ/4` and `ε' = 4ε` explicitly.
pub fn square_drn_report(
    params: &DrnParams,
    alpha: usize,
    d: Option<f64>,
) -> Result<BoundReport> {
    params.validate()?;
    if params.metric != Metric::Square {
        return Err(Error::InvalidParams(
            "the square-metric report requires metric=square".into(),
        ));
    }
    let mu = mu_drn(params.p, params.r_short, params.r_long)?;
    let c_min = cmin_drn(params.n, mu)?;
    assemble_report(ModelParams::Drn(*params), alpha, mu, c_min, d, Some(mu), true)
}

/// How `k` scales with `n` when a rewiring family is read asymptotically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KGrowth {
    /// `k` stays bounded as `n` grows.
    Constant,
    /// `k/n ≥ 1/ln^a(n)` eventually, for some `a > 0`.
    LogPolyFraction,
    Other,
}

/// ε-asymptotics classification of a rewiring family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwrRegime {
    /// `p ≥ 1 − k/(n−1)`: λ = 1−p is constant, ε → 0.
    ConvergesByRewireDominance,
    /// Dense lattice growth `k/n ≥ 1/ln^a(n)`: ε → 0.
    ConvergesByDenseLattice,
    /// Bounded k: ε → ∞.
    DivergesBoundedK,
    Unclassified,
}

#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub regime: SwrRegime,
    /// The matched condition, echoed with the concrete values.
    pub condition: String,
}

/// Classifies the ε limit of a rewiring family `(n, k(n), p)` according to
/// the stated regime conditions.
pub fn swr_epsilon_regime(
    n: usize,
    k: usize,
    p: f64,
    growth: KGrowth,
) -> Result<RegimeReport> {
    SwrParams { n, k, p }.validate()?;
    let threshold = 1.0 - k as f64 / (n - 1) as f64;
    if p >= threshold {
        return Ok(RegimeReport {
            regime: SwrRegime::ConvergesByRewireDominance,
            condition: format!("p >= 1 - k/(n-1) ({p} >= {threshold})"),
        });
    }
    Ok(match growth {
        KGrowth::LogPolyFraction => RegimeReport {
            regime: SwrRegime::ConvergesByDenseLattice,
            condition: "k/n >= 1/ln^a(n) for all large n".into(),
        },
        KGrowth::Constant => RegimeReport {
            regime: SwrRegime::DivergesBoundedK,
            condition: "k <= b for all large n".into(),
        },
        KGrowth::Other => RegimeReport {
            regime: SwrRegime::Unclassified,
            condition: format!("p < 1 - k/(n-1) ({p} < {threshold}) and k growth unknown"),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{expected_graph, SwsParams};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn sws(n: usize, k: usize, p: f64) -> ModelParams {
        ModelParams::Sws(SwsParams { n, k, p })
    }

    fn swr(n: usize, k: usize, p: f64) -> ModelParams {
        ModelParams::Swr(SwrParams { n, k, p })
    }

    fn drn(n: usize, p: f64, rs: f64, rl: f64, metric: Metric) -> DrnParams {
        DrnParams { n, p, r_short: rs, r_long: rl, metric }
    }

    #[test]
    fn lambda_of_expected_graphs() {
        let wg = expected_graph(&sws(20, 4, 0.2)).unwrap();
        assert_eq!(lambda_of(&wg).unwrap(), 0.2);

        let wg = expected_graph(&swr(20, 4, 0.3)).unwrap();
        let chord = 0.3 * 4.0 / 15.0;
        assert_abs_diff_eq!(lambda_of(&wg).unwrap(), (0.7f64).min(chord), epsilon = 1e-15);

        let uniform = WeightedGraph::complete(6, |_, _| 0.45);
        assert_eq!(lambda_of(&uniform).unwrap(), 0.45);

        // Zero weights are skipped; all-zero is an error.
        let wg = expected_graph(&sws(20, 4, 0.0)).unwrap();
        assert_eq!(lambda_of(&wg).unwrap(), 1.0);
        let zero = WeightedGraph::complete(5, |_, _| 0.0);
        assert!(lambda_of(&zero).is_err());
    }

    #[test]
    fn epsilon_examples() {
        assert_relative_eq!(
            epsilon_of(1.2, 0.2, 200).unwrap(),
            0.8951271308636908,
            max_relative = 1e-14
        );
        // Doubling lambda halves epsilon exactly.
        let a = epsilon_of(1.5, 0.25, 100).unwrap();
        let b = epsilon_of(1.5, 0.5, 100).unwrap();
        assert_relative_eq!(a, 2.0 * b, max_relative = 1e-14);
        assert!(epsilon_of(1.2, 0.2, 3).is_err());
        assert!(epsilon_of(0.0, 0.2, 10).is_err());
        assert!(epsilon_of(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn epsilon_decreases_in_n() {
        // Strictly decreasing once n-2 >= 3, for fixed d and lambda.
        let mut prev = f64::INFINITY;
        for n in 5..200 {
            let e = epsilon_of(1.0, 1.0, n).unwrap();
            assert!(e < prev, "epsilon not decreasing at n={n}");
            prev = e;
        }
    }

    #[test]
    fn d_range_examples() {
        let r = d_range(0.2, 200).unwrap();
        assert_relative_eq!(r.upper, 1.4976550832305127, max_relative = 1e-14);
        assert!(!r.is_empty());
        assert!(r.contains(1.2));
        assert!(!r.contains(1.0));
        assert!(!r.contains(1.5));

        let r = d_range(1.0, 4).unwrap();
        assert_relative_eq!(r.upper, 2.0 / (2.0f64).ln(), max_relative = 1e-14);

        let r = d_range(0.01, 100).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn hoeffding_examples() {
        assert_relative_eq!(
            hoeffding_cut_bound(10, 0, 0.5, 0.5).unwrap(),
            (-1.25f64).exp(),
            max_relative = 1e-14
        );
        // epsilon -> 0 drives the bound to 1.
        assert!(hoeffding_cut_bound(10, 0, 1e-12, 0.5).unwrap() > 1.0 - 1e-9);
        // Balanced cuts have strictly smaller bounds.
        let mid = hoeffding_cut_bound(10, 5, 0.5, 0.5).unwrap();
        let edge = hoeffding_cut_bound(10, 0, 0.5, 0.5).unwrap();
        assert!(mid < edge);
        assert!(hoeffding_cut_bound(10, 11, 0.5, 0.5).is_err());
    }

    #[test]
    fn hoeffding_log_linear_in_crossing_count() {
        let (eps, lam) = (0.3, 0.7);
        let unit = -2.0 * eps * eps * lam * lam;
        for n in 1..=30usize {
            for x in 0..=n {
                let b = hoeffding_cut_bound(n, x, eps, lam).unwrap();
                let m = (n + x * (n - x)) as f64;
                assert_relative_eq!(b.ln(), unit * m, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn union_bound_examples() {
        assert_relative_eq!(union_bound(10, 0.5, 0.5), 41.68552571213159, max_relative = 1e-13);
        assert_eq!(union_bound_clamped(10, 0.5, 0.5), 1.0);
        // Large N with fixed eps*lambda^2 drives the bound to zero.
        let mut prev = union_bound(40, 0.5, 0.5);
        for n in 41..=120 {
            let b = union_bound(n, 0.5, 0.5);
            assert!(b < prev, "union bound not decreasing at N={n}");
            prev = b;
        }
    }

    #[test]
    fn union_bound_dominates_binomial_sum() {
        fn binom(n: usize, k: usize) -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        }
        for &(n, eps, lam) in &[(10usize, 0.5, 0.5), (30, 0.1, 0.2), (25, 0.3, 0.9)] {
            let mut sum = 0.0;
            for x in 0..=n {
                sum += binom(n, x) * hoeffding_cut_bound(n, x, eps, lam).unwrap();
            }
            assert!(union_bound(n, eps, lam) >= sum);
        }
    }

    #[test]
    fn cmin_and_mu_examples() {
        assert_eq!(cmin_swr(6), 6.0);
        assert_abs_diff_eq!(cmin_sws(100, 4, 0.1).unwrap(), 13.5, epsilon = 1e-12);
        assert_relative_eq!(
            mu_drn(0.5, 0.1, 0.3).unwrap(),
            0.0942477796076938,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            cmin_drn(100, 0.0942477796076938).unwrap(),
            9.236282401553993,
            max_relative = 1e-14
        );
        assert!(cmin_sws(10, 3, 0.5).is_err());
        assert!(mu_drn(0.5, 0.3, 0.1).is_err());
        assert!(cmin_drn(1, 0.5).is_err());
    }

    #[test]
    fn report_for_sws_example() {
        let report = theorem_report(&sws(200, 8, 0.2), 1, Some(1.2)).unwrap();
        assert_eq!(report.lambda, 0.2);
        assert_relative_eq!(report.epsilon, 0.8951271308636908, max_relative = 1e-13);
        assert_abs_diff_eq!(report.c_min, 46.2, epsilon = 1e-12);
        assert!(report.d_valid);
        assert_relative_eq!(report.lower_threshold, (1.0 - report.epsilon) * 46.2, max_relative = 1e-13);
        assert_relative_eq!(report.upper_threshold, (1.0 + report.epsilon) * 46.2, max_relative = 1e-13);
        assert!(report.lower_prob_bound < 1e-4);
        assert!(report.upper_prob_bound < 1e-4);
        assert!(!report.lower_prob_vacuous);
    }

    #[test]
    fn report_for_swr_centers_on_k() {
        for p in [0.2, 0.5, 0.8] {
            let report = theorem_report(&swr(200, 8, p), 1, None).unwrap();
            assert_eq!(report.c_min, 8.0);
            assert_relative_eq!(
                report.lower_threshold,
                (1.0 - report.epsilon) * 8.0,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn report_flags_bracket_including_zero() {
        // Small radii push epsilon above 1, so the lower threshold dips
        // below zero and the report must say so.
        let params = drn(100, 0.5, 0.02, 0.05, Metric::Torus);
        let report = theorem_report(&ModelParams::Drn(params), 1, None).unwrap();
        assert!(report.epsilon > 1.0);
        assert!(report.lower_threshold < 0.0);
        assert!(report.bracket_includes_zero);
        assert_eq!(report.lower_threshold_clamped, 0.0);
    }

    #[test]
    fn default_d_is_interval_midpoint() {
        let report = theorem_report(&sws(200, 8, 0.2), 1, None).unwrap();
        assert_relative_eq!(report.d, 1.0 + 0.5 * (report.d_max - 1.0), max_relative = 1e-14);
        assert!(report.d_valid);

        // Empty interval: d = 1 pro forma, flagged invalid, bounds vacuous.
        let report = theorem_report(&swr(200, 8, 0.5), 1, None).unwrap();
        assert!(report.d_max < 1.0);
        assert_eq!(report.d, 1.0);
        assert!(!report.d_valid);
        assert!(report.lower_prob_bound.is_infinite());
        assert!(report.lower_prob_vacuous);
        assert_eq!(report.lower_prob_bound_clamped, 1.0);
    }

    #[test]
    fn square_report_relations_hold_exactly() {
        let params = drn(100, 0.5, 0.1, 0.3, Metric::Square);
        let report = square_drn_report(&params, 1, None).unwrap();
        let mu = report.mu.unwrap();
        assert_eq!(report.mu_prime.unwrap(), mu / 4.0);
        assert_eq!(report.epsilon_prime.unwrap(), 4.0 * report.epsilon);
        assert_relative_eq!(
            report.lower_threshold,
            (1.0 - 4.0 * report.epsilon) * 98.0 * mu / 4.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            report.upper_threshold,
            (1.0 + report.epsilon) * 98.0 * mu,
            max_relative = 1e-13
        );
        // epsilon >= 1/4 forces a nonpositive lower threshold.
        assert!(report.epsilon >= 0.25);
        assert!(report.lower_threshold <= 0.0);

        let torus = drn(100, 0.5, 0.1, 0.3, Metric::Torus);
        assert!(square_drn_report(&torus, 1, None).is_err());
    }

    #[test]
    fn regime_classification() {
        // p above the rewire-dominance threshold.
        let r = swr_epsilon_regime(100, 90, 0.95, KGrowth::Other).unwrap();
        assert_eq!(r.regime, SwrRegime::ConvergesByRewireDominance);
        assert!(r.condition.contains(">="));

        let r = swr_epsilon_regime(100, 30, 0.1, KGrowth::LogPolyFraction).unwrap();
        assert_eq!(r.regime, SwrRegime::ConvergesByDenseLattice);

        let r = swr_epsilon_regime(1000, 4, 0.5, KGrowth::Constant).unwrap();
        assert_eq!(r.regime, SwrRegime::DivergesBoundedK);

        let r = swr_epsilon_regime(1000, 40, 0.5, KGrowth::Other).unwrap();
        assert_eq!(r.regime, SwrRegime::Unclassified);
    }

    #[test]
    fn c_min_matches_global_min_cut_of_expected_graph() {
        use crate::mincut::global_min_cut;
        for n in [6usize, 9, 12, 16] {
            for k in [2usize, 4] {
                if k + 2 > n {
                    continue;
                }
                for p in [0.0, 0.25, 0.5, 1.0] {
                    let model = sws(n, k, p);
                    let gmc = global_min_cut(&expected_graph(&model).unwrap()).unwrap();
                    assert_abs_diff_eq!(gmc, cmin_sws(n, k, p).unwrap(), epsilon = 1e-9);

                    if p > 0.0 && (SwrParams { n, k, p }).validate().is_ok() {
                        let model = swr(n, k, p);
                        let gmc = global_min_cut(&expected_graph(&model).unwrap()).unwrap();
                        assert_abs_diff_eq!(gmc, cmin_swr(k), epsilon = 1e-9);
                    }
                }
            }
        }
        let params = drn(10, 0.5, 0.1, 0.3, Metric::Torus);
        let model = ModelParams::Drn(params);
        let gmc = global_min_cut(&expected_graph(&model).unwrap()).unwrap();
        let mu = mu_drn(0.5, 0.1, 0.3).unwrap();
        assert_abs_diff_eq!(gmc, cmin_drn(10, mu).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn report_serializes_flat_with_exact_field_names() {
        let report = theorem_report(&sws(200, 8, 0.2), 1, Some(1.2)).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let obj = value.as_object().unwrap();
        for key in [
            "model", "n", "k", "p", "alpha", "d", "lambda", "epsilon", "c_min",
            "lower_threshold", "upper_threshold", "lower_prob_bound",
            "upper_prob_bound", "d_valid",
        ] {
            assert!(obj.contains_key(key), "missing field {key}");
        }
        assert_eq!(obj["model"], "sws");
        assert!(!obj.contains_key("mu"), "lattice reports omit mu");

        let csv = report.to_csv_row();
        assert!(csv.starts_with("sws,200,8,0.2,"));
    }
}
