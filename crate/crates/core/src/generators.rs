//! Seeded constructors for the random-network models.
//!
//! Three models are provided:
//!
//! * small world with shortcuts — a k-connected ring lattice plus each chord
//!   added independently with probability `p`;
//! * small world with rewiring — each lattice edge kept independently with
//!   probability `1−p`, each chord added independently with probability
//!   `pk/(n−k−1)`, so the expected degree stays `k`;
//! * dual radio network — `n` uniform points in the unit square, short-range
//!   edges within `r_short` for everyone, long-range edges within `r_long`
//!   between the fraction-`p` nodes holding two radios.
//!
//! All samplers are pure functions of `(params, seed)`: the same seed
//! reproduces the same graph bit for bit, including DRN positions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{ring_distance, Graph};
use crate::seeding;
use crate::{bounds, Error, Result};

/// Largest admissible torus radius: beyond `1/√π` a coverage disc no longer
/// has area `πρ²` on the unit torus.
pub fn max_torus_radius() -> f64 {
    1.0 / std::f64::consts::PI.sqrt()
}

/// Distance metric for dual radio networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Wrap-around metric on the unit square; coverage is position-free.
    Torus,
    /// Plain Euclidean metric; border nodes cover less area.
    Square,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwsParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwrParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrnParams {
    pub n: usize,
    /// Fraction of nodes holding both radios.
    pub p: f64,
    pub r_short: f64,
    pub r_long: f64,
    pub metric: Metric,
}

impl DrnParams {
    /// Pairwise connection probability `μ = π r_S² + π p² (r_L² − r_S²)`.
    pub fn mu(&self) -> Result<f64> {
        bounds::mu_drn(self.p, self.r_short, self.r_long)
    }
}

/// Tagged union over the three model parameterizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    Sws(SwsParams),
    Swr(SwrParams),
    Drn(DrnParams),
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParams(format!("{what} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn check_lattice(n: usize, k: usize) -> Result<()> {
    if k % 2 != 0 {
        return Err(Error::InvalidParams(format!("k must be even, got {k}")));
    }
    if k < 2 || k + 2 > n {
        return Err(Error::InvalidParams(format!(
            "k must satisfy 2 <= k <= n-2, got k={k}, n={n}"
        )));
    }
    Ok(())
}

impl SwsParams {
    pub fn validate(&self) -> Result<()> {
        check_lattice(self.n, self.k)?;
        check_probability(self.p, "p")
    }
}

impl SwrParams {
    /// Chord probability `pk/(n−k−1)`.
    pub fn chord_probability(&self) -> f64 {
        self.p * self.k as f64 / (self.n - self.k - 1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        check_lattice(self.n, self.k)?;
        check_probability(self.p, "p")?;
        if self.chord_probability() > 1.0 {
            return Err(Error::InvalidParams(format!(
                "chord probability p*k/(n-k-1) = {} exceeds 1; the rewiring model \
                 requires p*k <= n-k-1",
                self.chord_probability()
            )));
        }
        Ok(())
    }
}

impl DrnParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParams(format!(
                "a dual radio network needs at least 2 nodes, got n={}",
                self.n
            )));
        }
        check_probability(self.p, "p")?;
        if !(self.r_short > 0.0 && self.r_short <= self.r_long) || !self.r_long.is_finite() {
            return Err(Error::InvalidParams(format!(
                "radii must satisfy 0 < r_short <= r_long, got r_short={}, r_long={}",
                self.r_short, self.r_long
            )));
        }
        if self.metric == Metric::Torus && self.r_long > max_torus_radius() {
            return Err(Error::InvalidParams(format!(
                "torus metric requires r_long <= 1/sqrt(pi) = {:.6}, got {}",
                max_torus_radius(),
                self.r_long
            )));
        }
        Ok(())
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelParams::Sws(p) => p.validate(),
            ModelParams::Swr(p) => p.validate(),
            ModelParams::Drn(p) => p.validate(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ModelParams::Sws(p) => p.n,
            ModelParams::Swr(p) => p.n,
            ModelParams::Drn(p) => p.n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelParams::Sws(_) => "sws",
            ModelParams::Swr(_) => "swr",
            ModelParams::Drn(_) => "drn",
        }
    }

    /// Samples one instance; DRN metadata is dropped, use [`sample_drn`] to
    /// keep positions and radio assignments.
    pub fn sample(&self, seed: u64) -> Result<Graph> {
        match self {
            ModelParams::Sws(p) => sample_sws(p, seed),
            ModelParams::Swr(p) => sample_swr(p, seed),
            ModelParams::Drn(p) => Ok(sample_drn(p, seed)?.graph),
        }
    }
}

/// The deterministic k-connected ring lattice: edge `{i, j}` present iff the
/// ring distance is at most `k/2`; every node has degree exactly `k`.
pub fn ring_lattice(n: usize, k: usize) -> Result<Graph> {
    check_lattice(n, k)?;
    let mut g = Graph::new(n);
    for i in 0..n {
        for hop in 1..=(k / 2) {
            let j = (i + hop) % n;
            g.add_unit_edge(i, j)?;
        }
    }
    Ok(g)
}

/// Small world with shortcuts: the full lattice plus each chord independently
/// with probability `p`. Chords are drawn in lexicographic pair order.
pub fn sample_sws(params: &SwsParams, seed: u64) -> Result<Graph> {
    params.validate()?;
    let SwsParams { n, k, p } = *params;
    let mut rng = seeding::stream(seed, "sws", 0);
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if ring_distance(i, j, n)? <= k / 2 {
                g.add_unit_edge(i, j)?;
            } else if rng.random::<f64>() < p {
                g.add_unit_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Small world with rewiring: lattice edges kept with probability `1−p`,
/// chords added with probability `pk/(n−k−1)`; all indicators independent.
pub fn sample_swr(params: &SwrParams, seed: u64) -> Result<Graph> {
    params.validate()?;
    let SwrParams { n, k, p } = *params;
    let chord_p = params.chord_probability();
    let mut rng = seeding::stream(seed, "swr", 0);
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let threshold = if ring_distance(i, j, n)? <= k / 2 { 1.0 - p } else { chord_p };
            if rng.random::<f64>() < threshold {
                g.add_unit_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// A sampled dual radio network together with its generation metadata.
#[derive(Debug, Clone)]
pub struct DrnInstance {
    pub graph: Graph,
    /// Node positions in the unit square, indexed by node.
    pub positions: Vec<(f64, f64)>,
    /// Whether each node holds the long-range radio (membership in V_L).
    pub long_radio: Vec<bool>,
}

impl DrnInstance {
    /// Position sidecar: one `index x y inVL` line per node, `inVL` ∈ {0, 1}.
    pub fn position_sidecar(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        for (i, &(x, y)) in self.positions.iter().enumerate() {
            let _ = writeln!(out, "{i} {x} {y} {}", u8::from(self.long_radio[i]));
        }
        out
    }
}

/// Samples a dual radio network: positions first (two uniforms per node in
/// node order), then radio memberships, then the deterministic edge rule.
pub fn sample_drn(params: &DrnParams, seed: u64) -> Result<DrnInstance> {
    params.validate()?;
    let DrnParams { n, p, r_short, r_long, metric } = *params;
    let mut rng = seeding::stream(seed, "drn", 0);
    let positions: Vec<(f64, f64)> =
        (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    let long_radio: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < p).collect();
    let mut graph = Graph::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = match metric {
                Metric::Torus => torus_distance(positions[i], positions[j])?,
                Metric::Square => square_distance(positions[i], positions[j])?,
            };
            if d <= r_short || (long_radio[i] && long_radio[j] && d <= r_long) {
                graph.add_unit_edge(i, j)?;
            }
        }
    }
    Ok(DrnInstance { graph, positions, long_radio })
}

fn check_coordinate(c: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::CoordinateOutOfRange(c));
    }
    Ok(())
}

/// Wrap-around distance on the unit torus: per-coordinate `min(|Δ|, 1−|Δ|)`,
/// then Euclidean length. Never exceeds `√2/2`.
pub fn torus_distance(a: (f64, f64), b: (f64, f64)) -> Result<f64> {
    for c in [a.0, a.1, b.0, b.1] {
        check_coordinate(c)?;
    }
    let dx = (a.0 - b.0).abs();
    let dy = (a.1 - b.1).abs();
    let dx = dx.min(1.0 - dx);
    let dy = dy.min(1.0 - dy);
    Ok(dx.hypot(dy))
}

/// Plain Euclidean distance between points of the unit square.
pub fn square_distance(a: (f64, f64), b: (f64, f64)) -> Result<f64> {
    for c in [a.0, a.1, b.0, b.1] {
        check_coordinate(c)?;
    }
    Ok((a.0 - b.0).hypot(a.1 - b.1))
}

/// Complete weighted graph of edge-presence probabilities (the expected-value
/// graph G_w): the expected capacity of any cut equals its capacity here.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// Builds the complete graph with `weight(i, j) = f(i, j)` for `i < j`.
    pub fn complete(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut weights = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                weights.push(f(i, j));
            }
        }
        WeightedGraph { n, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        assert!(i != j && i < self.n && j < self.n, "invalid pair ({i}, {j})");
        self.weights[self.pair_index(i, j)]
    }

    /// All pairs `(i, j, weight)` with `i < j` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).map(move |j| (i, j, self.weight(i, j)))
        })
    }

    /// Detects a two-weight ring-lattice structure: some even `k` with
    /// `weight = w1` inside ring distance `k/2` and `w2` beyond it. Weights
    /// are compared exactly; uniform graphs report `k = 2` with `w1 = w2`.
    pub fn lattice_structure(&self) -> Option<LatticeStructure> {
        let n = self.n;
        if n < 4 {
            return None;
        }
        let w1 = self.weight(0, 1);
        // Largest h with all pairs at ring distance <= h sharing weight w1.
        let mut h = 0;
        'extend: for cand in 1..=(n / 2) {
            for i in 0..n {
                let j = (i + cand) % n;
                if i < j && self.weight(i, j) != w1 {
                    break 'extend;
                }
            }
            h = cand;
        }
        if h == 0 {
            return None;
        }
        let mut k = 2 * h;
        if k > n - 2 {
            // Largest even k admissible for a lattice on n nodes.
            k = n - 2 - (n % 2);
        }
        if k < 2 {
            return None;
        }
        let half = k / 2;
        let mut w2 = None;
        for (i, j, w) in self.pairs() {
            let dist = (j - i).min(n - (j - i));
            if dist <= half {
                if w != w1 {
                    return None;
                }
            } else {
                match w2 {
                    None => w2 = Some(w),
                    Some(prev) if prev != w => return None,
                    _ => {}
                }
            }
        }
        Some(LatticeStructure {
            k,
            lattice_weight: w1,
            chord_weight: w2.unwrap_or(w1),
        })
    }
}

/// A detected lattice-plus-uniform-chords weight pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeStructure {
    pub k: usize,
    pub lattice_weight: f64,
    pub chord_weight: f64,
}

/// Expected-weight graph of a model: SWS gives lattice edges weight 1 and
/// chords weight `p`; SWR gives `1−p` and `pk/(n−k−1)`; DRN gives every pair
/// weight `μ`.
pub fn expected_graph(params: &ModelParams) -> Result<WeightedGraph> {
    params.validate()?;
    Ok(match *params {
        ModelParams::Sws(SwsParams { n, k, p }) => WeightedGraph::complete(n, |i, j| {
            let d = ring_distance(i, j, n).expect("pair indices are in range");
            if d <= k / 2 {
                1.0
            } else {
                p
            }
        }),
        ModelParams::Swr(ref sp) => {
            let SwrParams { n, k, p } = *sp;
            let chord = sp.chord_probability();
            WeightedGraph::complete(n, |i, j| {
                let d = ring_distance(i, j, n).expect("pair indices are in range");
                if d <= k / 2 {
                    1.0 - p
                } else {
                    chord
                }
            })
        }
        ModelParams::Drn(ref dp) => {
            let mu = dp.mu()?;
            WeightedGraph::complete(dp.n, |_, _| mu)
        }
    })
}
