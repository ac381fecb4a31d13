//! Exact s-t min-cut solving, s-T capacity, and brute-force oracles.
//!
//! The solver is Dinic's algorithm over the subgraph induced by the source,
//! the relays, and the queried terminal; remaining terminals never carry
//! cut capacity, so they are excluded in both modes. The two [`Mode`]s
//! differ only in how a direct s–t edge is treated.

use serde::{Deserialize, Serialize};

use crate::generators::WeightedGraph;
use crate::graph::{cut_capacity, enumerate_cuts, CutPartition, Graph, RoleAssignment};
use crate::{Error, Result};

/// Exhaustive global min-cut is feasible up to this many nodes.
pub const EXHAUSTIVE_LIMIT: usize = 24;

/// Residual capacities below this are treated as exhausted.
const EPS: f64 = 1e-12;

/// How a direct source–terminal edge enters the capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Faithful to the cut-capacity definition: s–t edges are removed before
    /// solving, so the value is exactly the minimum over relay bipartitions
    /// of the three crossing-edge families.
    #[serde(rename = "paper")]
    Paper,
    /// Standard graph min-cut: a direct s–t edge stays and always crosses.
    #[serde(rename = "graph")]
    GraphTheoretic,
}

/// An exact capacity value with a deterministic minimum-cut witness.
///
/// The witness is the relay set on the source side of the final residual
/// graph; its mode-aware cut capacity equals `value` exactly.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub value: f64,
    pub witness: CutPartition,
    pub mode: Mode,
    /// Terminal the minimum is attained at (lowest index on ties).
    pub terminal: usize,
}

struct Arc {
    to: usize,
    cap: f64,
}

/// Flat arc-list flow network; arc `i ^ 1` is the reverse of arc `i`.
struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes], arcs: Vec::new() }
    }

    /// Undirected edge: paired arcs, each with the full capacity, each acting
    /// as the other's residual.
    fn add_undirected(&mut self, u: usize, v: usize, cap: f64) {
        self.adj[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.adj[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap });
    }

    fn bfs_levels(&self, s: usize, t: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > EPS && level[arc.to] < 0 {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[t] >= 0).then_some(level)
    }

    fn dfs_push(
        &mut self,
        u: usize,
        t: usize,
        pushed: f64,
        level: &[i32],
        iter: &mut [usize],
    ) -> f64 {
        if u == t {
            return pushed;
        }
        while iter[u] < self.adj[u].len() {
            let a = self.adj[u][iter[u]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > EPS && level[to] == level[u] + 1 {
                let flow = self.dfs_push(to, t, pushed.min(cap), level, iter);
                if flow > EPS {
                    self.arcs[a].cap -= flow;
                    self.arcs[a ^ 1].cap += flow;
                    return flow;
                }
            }
            iter[u] += 1;
        }
        0.0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        while let Some(level) = self.bfs_levels(s, t) {
            let mut iter = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.dfs_push(s, t, f64::INFINITY, &level, &mut iter);
                if pushed <= EPS {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual graph (ascending-index BFS).
    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > EPS && !seen[arc.to] {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        seen
    }
}

/// Exact s-t capacity: the minimum cut value over all relay bipartitions,
/// solved by max-flow on the subgraph induced by `{s} ∪ relays ∪ {t}`.
///
/// A disconnected terminal yields value 0 with the source-side witness, not
/// an error.
pub fn st_capacity(
    g: &Graph,
    roles: &RoleAssignment,
    t: usize,
    mode: Mode,
) -> Result<CapacityResult> {
    if !roles.is_terminal(t) {
        return Err(Error::InvalidRoles(format!("{t} is not a terminal")));
    }
    if g.n() != roles.n() {
        return Err(Error::InvalidRoles(format!(
            "roles cover {} nodes but the graph has {}",
            roles.n(),
            g.n()
        )));
    }
    let s = roles.source();

    // Compact ids: source, relays, queried terminal. Other terminals carry
    // no cut capacity and are excluded.
    let mut compact = vec![usize::MAX; g.n()];
    let mut included = Vec::with_capacity(roles.relay_count() + 2);
    for v in 0..g.n() {
        if v == s || v == t || roles.is_relay(v) {
            compact[v] = included.len();
            included.push(v);
        }
    }
    let mut net = FlowNetwork::new(included.len());
    for (u, v, c) in g.edges() {
        if compact[u] == usize::MAX || compact[v] == usize::MAX {
            continue;
        }
        let is_st = (u == s && v == t) || (u == t && v == s);
        if is_st && mode == Mode::Paper {
            continue;
        }
        net.add_undirected(compact[u], compact[v], c);
    }

    let value = net.max_flow(compact[s], compact[t]);
    let reachable = net.residual_reachable(compact[s]);
    let members = roles
        .relays()
        .iter()
        .copied()
        .filter(|&v| reachable[compact[v]])
        .collect();
    Ok(CapacityResult {
        value,
        witness: CutPartition::from_set(members),
        mode,
        terminal: t,
    })
}

/// The s-T capacity: minimum of [`st_capacity`] over all terminals, ties
/// broken by the lowest terminal index.
pub fn terminal_set_capacity(
    g: &Graph,
    roles: &RoleAssignment,
    mode: Mode,
) -> Result<CapacityResult> {
    let mut best: Option<CapacityResult> = None;
    for &t in roles.terminals() {
        let result = st_capacity(g, roles, t, mode)?;
        let better = match &best {
            None => true,
            Some(b) => result.value < b.value,
        };
        if better {
            best = Some(result);
        }
    }
    best.ok_or_else(|| Error::InvalidRoles("empty terminal set".into()))
}

/// Brute-force oracle: the minimum of [`cut_capacity`] over every relay
/// subset, in enumeration order. Always Paper mode.
pub fn brute_force_capacity(g: &Graph, roles: &RoleAssignment, t: usize) -> Result<CapacityResult> {
    let mut best: Option<(f64, CutPartition)> = None;
    for cut in enumerate_cuts(roles)? {
        let value = cut_capacity(g, roles, t, &cut)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, cut));
        }
    }
    let (value, witness) = best.expect("enumeration yields at least the empty cut");
    Ok(CapacityResult { value, witness, mode: Mode::Paper, terminal: t })
}

/// Lemma closed form for the lattice-weighted complete graph: the global
/// minimum cut is `k·w1 + (n−1−k)·w2` (a single node on one side).
pub fn lattice_min_cut(n: usize, k: usize, w1: f64, w2: f64) -> f64 {
    k as f64 * w1 + (n - 1 - k) as f64 * w2
}

/// Global minimum cut of a weighted graph: minimum total crossing weight
/// over all proper nonempty node bipartitions.
///
/// Exhaustive (Gray-code enumeration) up to [`EXHAUSTIVE_LIMIT`] nodes;
/// larger inputs fall back to the closed form when the weights carry a
/// ring-lattice structure and are refused otherwise.
pub fn global_min_cut(wg: &WeightedGraph) -> Result<f64> {
    let n = wg.n();
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "global min cut needs at least 2 nodes, got {n}"
        )));
    }
    if n > EXHAUSTIVE_LIMIT {
        if let Some(ls) = wg.lattice_structure() {
            return Ok(lattice_min_cut(n, ls.k, ls.lattice_weight, ls.chord_weight));
        }
        return Err(Error::ExhaustiveLimit { n, limit: EXHAUSTIVE_LIMIT });
    }

    let exact_cut = |side: &[bool]| -> f64 {
        let mut total = 0.0;
        for (i, j, w) in wg.pairs() {
            if side[i] != side[j] {
                total += w;
            }
        }
        total
    };

    // Gray-code walk over subsets of {1, .., n-1}; node 0 stays put, so each
    // bipartition is visited exactly once. The running value accumulates
    // per-flip deltas; candidates are re-evaluated exactly so float drift
    // cannot leak into the reported minimum.
    let mut side = vec![false; n];
    let mut running = 0.0;
    let mut best = f64::INFINITY;
    let states = 1u64 << (n - 1);
    for m in 1..states {
        let flip = m.trailing_zeros() as usize + 1;
        let mut delta = 0.0;
        for u in 0..n {
            if u == flip {
                continue;
            }
            if side[u] != side[flip] {
                delta -= wg.weight(u, flip);
            } else {
                delta += wg.weight(u, flip);
            }
        }
        side[flip] = !side[flip];
        running += delta;
        if running < best + 1e-6 {
            let exact = exact_cut(&side);
            if exact < best {
                best = exact;
            }
            running = exact;
        }
    }
    Ok(best)
}
