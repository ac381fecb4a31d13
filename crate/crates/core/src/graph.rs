//! Graph value types and cut-capacity evaluation.
//!
//! A cut of size `x` between a source `s` and a terminal `t` is a bipartition
//! `(V_x, V̄_x)` of the relay set. Its capacity sums exactly three edge
//! families: source→V̄_x, V_x→V̄_x, and V_x→terminal. A direct s–t edge is
//! never part of that sum; see [`crate::mincut::Mode`] for how the solvers
//! treat it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::{Error, Result};

/// Relay sets are exhaustively enumerable up to this size (2^20 cuts).
pub const ENUMERATION_LIMIT: usize = 20;

/// Undirected simple graph with nonnegative per-edge capacities.
///
/// Node indices are dense and 0-based. Edges are stored normalized
/// (`u < v`) in sorted order, so iteration and serialization are
/// deterministic. Immutable once built, safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: BTreeMap<(usize, usize), f64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: BTreeMap::new() }
    }

    /// Adds edge `{u, v}` with the given capacity.
    ///
    /// Rejects self-loops, duplicate edges, out-of-range endpoints, and
    /// negative or non-finite capacities.
    pub fn add_edge(&mut self, u: usize, v: usize, capacity: f64) -> Result<()> {
        if u >= self.n {
            return Err(Error::IndexOutOfRange { index: u, n: self.n });
        }
        if v >= self.n {
            return Err(Error::IndexOutOfRange { index: v, n: self.n });
        }
        if u == v {
            return Err(Error::InvalidEdge { u, v, reason: "self-loop".into() });
        }
        if !(capacity >= 0.0) || !capacity.is_finite() {
            return Err(Error::InvalidEdge {
                u,
                v,
                reason: format!("capacity must be finite and nonnegative, got {capacity}"),
            });
        }
        let key = (u.min(v), u.max(v));
        if self.edges.insert(key, capacity).is_some() {
            return Err(Error::InvalidEdge { u, v, reason: "duplicate edge".into() });
        }
        Ok(())
    }

    /// Adds edge `{u, v}` with the default unit capacity.
    pub fn add_unit_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edge(u, v, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&(u.min(v), u.max(v)))
    }

    /// Capacity of `{u, v}`, or 0 when the edge is absent.
    pub fn capacity(&self, u: usize, v: usize) -> f64 {
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0.0)
    }

    /// Edges in sorted `(u, v, capacity)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &c)| (u, v, c))
    }

    /// Per-node degree (number of incident edges).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for (&(u, v), _) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Serializes to the edge-list text format: a `n=<count>` header line
    /// followed by one `u v capacity` triple per line in sorted edge order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.n);
        for (u, v, c) in self.edges() {
            let _ = writeln!(out, "{u} {v} {c}");
        }
        out
    }

    /// Parses the edge-list text format written by [`Graph::to_edge_list`].
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or(Error::MalformedEdgeList { line: 1, reason: "empty input".into() })?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|s| s.parse().ok())
            .ok_or(Error::MalformedEdgeList {
                line: 1,
                reason: format!("expected header 'n=<count>', got '{header}'"),
            })?;
        let mut g = Graph::new(n);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>, what: &str| -> Result<String> {
                tok.map(str::to_owned).ok_or(Error::MalformedEdgeList {
                    line: line_no,
                    reason: format!("missing {what}"),
                })
            };
            let u: usize = parse(parts.next(), "endpoint u")?
                .parse()
                .map_err(|_| Error::MalformedEdgeList {
                    line: line_no,
                    reason: "endpoint u is not an integer".into(),
                })?;
            let v: usize = parse(parts.next(), "endpoint v")?
                .parse()
                .map_err(|_| Error::MalformedEdgeList {
                    line: line_no,
                    reason: "endpoint v is not an integer".into(),
                })?;
            let c: f64 = parse(parts.next(), "capacity")?
                .parse()
                .map_err(|_| Error::MalformedEdgeList {
                    line: line_no,
                    reason: "capacity is not a number".into(),
                })?;
            if parts.next().is_some() {
                return Err(Error::MalformedEdgeList {
                    line: line_no,
                    reason: "trailing tokens after capacity".into(),
                });
            }
            g.add_edge(u, v, c).map_err(|e| Error::MalformedEdgeList {
                line: line_no,
                reason: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

/// Hop distance on a ring of `n` nodes: `min(|i−j|, n−|i−j|)`.
pub fn ring_distance(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let d = i.abs_diff(j);
    Ok(d.min(n - d))
}

/// Partition of the nodes into a source, an ordered terminal set, and the
/// remaining relay nodes.
///
/// Terminals and relays are kept in ascending index order, so iteration and
/// min-tie-breaking are deterministic. `N = n − 1 − α` is the relay count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleAssignment {
    n: usize,
    source: usize,
    terminals: Vec<usize>,
    relays: Vec<usize>,
}

impl RoleAssignment {
    pub fn new(n: usize, source: usize, terminals: &[usize]) -> Result<Self> {
        if source >= n {
            return Err(Error::IndexOutOfRange { index: source, n });
        }
        if terminals.is_empty() {
            return Err(Error::InvalidRoles("at least one terminal is required".into()));
        }
        let mut ts: Vec<usize> = terminals.to_vec();
        ts.sort_unstable();
        ts.dedup();
        if ts.len() != terminals.len() {
            return Err(Error::InvalidRoles("duplicate terminal indices".into()));
        }
        for &t in &ts {
            if t >= n {
                return Err(Error::IndexOutOfRange { index: t, n });
            }
            if t == source {
                return Err(Error::InvalidRoles(format!(
                    "terminal {t} coincides with the source"
                )));
            }
        }
        let relays: Vec<usize> = (0..n)
            .filter(|&v| v != source && ts.binary_search(&v).is_err())
            .collect();
        Ok(RoleAssignment { n, source, terminals: ts, relays })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn relays(&self) -> &[usize] {
        &self.relays
    }

    /// Number of relay nodes, `N = n − 1 − α`.
    pub fn relay_count(&self) -> usize {
        self.relays.len()
    }

    /// Number of terminals, `α`.
    pub fn alpha(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_relay(&self, v: usize) -> bool {
        self.relays.binary_search(&v).is_ok()
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals.binary_search(&v).is_ok()
    }
}

/// The `V_x` side of a relay bipartition; `x` is its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPartition {
    members: BTreeSet<usize>,
}

impl CutPartition {
    /// Builds a cut from relay indices, rejecting non-relay members.
    pub fn new(roles: &RoleAssignment, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        for &v in &members {
            if !roles.is_relay(v) {
                return Err(Error::InvalidRoles(format!("cut member {v} is not a relay")));
            }
        }
        Ok(CutPartition { members })
    }

    pub fn empty() -> Self {
        CutPartition { members: BTreeSet::new() }
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    /// Cut size `x = |V_x|`.
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(&v)
    }

    pub(crate) fn from_set(members: BTreeSet<usize>) -> Self {
        CutPartition { members }
    }
}

/// Capacity of the cut: the sum over the three crossing-edge families
/// `Σ_{i∈V̄_x} C_si + Σ_{j∈V_x} Σ_{i∈V̄_x} C_ji + Σ_{j∈V_x} C_jt`.
///
/// A direct s–t edge is not part of any family and is never counted here.
pub fn cut_capacity(
    g: &Graph,
    roles: &RoleAssignment,
    t: usize,
    cut: &CutPartition,
) -> Result<f64> {
    if !roles.is_terminal(t) {
        return Err(Error::InvalidRoles(format!("{t} is not a terminal")));
    }
    for &v in cut.members() {
        if !roles.is_relay(v) {
            return Err(Error::InvalidRoles(format!("cut member {v} is not a relay")));
        }
    }
    let s = roles.source();
    let mut total = 0.0;
    for &i in roles.relays() {
        if !cut.contains(i) {
            total += g.capacity(s, i);
            for &j in cut.members() {
                total += g.capacity(j, i);
            }
        }
    }
    for &j in cut.members() {
        total += g.capacity(j, t);
    }
    Ok(total)
}

/// Number of node pairs eligible to cross a size-`x` cut over `relay_count`
/// relays: `N + x(N − x)`.
pub fn crossing_edge_count(x: usize, relay_count: usize) -> Result<u64> {
    if x > relay_count {
        return Err(Error::InvalidRoles(format!(
            "cut size {x} exceeds relay count {relay_count}"
        )));
    }
    let n = relay_count as u64;
    let x = x as u64;
    Ok(n + x * (n - x))
}

/// Streams all `2^N` relay subsets in lexicographic bitmask order.
pub struct CutEnumeration<'a> {
    relays: &'a [usize],
    next_mask: u64,
    end: u64,
}

impl Iterator for CutEnumeration<'_> {
    type Item = CutPartition;

    fn next(&mut self) -> Option<CutPartition> {
        if self.next_mask == self.end {
            return None;
        }
        let mask = self.next_mask;
        self.next_mask += 1;
        let members: BTreeSet<usize> = self
            .relays
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        Some(CutPartition::from_set(members))
    }
}

impl ExactSizeIterator for CutEnumeration<'_> {
    fn len(&self) -> usize {
        (self.end - self.next_mask) as usize
    }
}

/// Enumerates every cut of the relay set, refusing when `N` exceeds
/// [`ENUMERATION_LIMIT`].
pub fn enumerate_cuts(roles: &RoleAssignment) -> Result<CutEnumeration<'_>> {
    enumerate_cuts_with_limit(roles, ENUMERATION_LIMIT)
}

/// Same as [`enumerate_cuts`] with an explicit relay-count limit (≤ 62).
pub fn enumerate_cuts_with_limit(
    roles: &RoleAssignment,
    limit: usize,
) -> Result<CutEnumeration<'_>> {
    let n = roles.relay_count();
    if n > limit.min(62) {
        return Err(Error::EnumerationLimit { relays: n, limit: limit.min(62) });
    }
    Ok(CutEnumeration { relays: roles.relays(), next_mask: 0, end: 1u64 << n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_cycle() -> Graph {
        let mut g = Graph::new(4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            g.add_unit_edge(u, v).unwrap();
        }
        g
    }

    #[test]
    fn ring_distance_examples() {
        assert_eq!(ring_distance(3, 3, 10).unwrap(), 0);
        assert_eq!(ring_distance(1, 9, 10).unwrap(), 2);
        assert_eq!(ring_distance(0, 5, 10).unwrap(), 5);
        assert!(ring_distance(10, 0, 10).is_err());
    }

    #[test]
    fn ring_distance_symmetry_and_bound() {
        for n in 1..=12 {
            for i in 0..n {
                for j in 0..n {
                    let d = ring_distance(i, j, n).unwrap();
                    assert_eq!(d, ring_distance(j, i, n).unwrap());
                    assert!(d <= n / 2);
                }
            }
        }
    }

    #[test]
    fn cut_capacity_four_cycle() {
        let g = four_cycle();
        let roles = RoleAssignment::new(4, 0, &[2]).unwrap();
        let empty = CutPartition::empty();
        assert_eq!(cut_capacity(&g, &roles, 2, &empty).unwrap(), 2.0);
        let one = CutPartition::new(&roles, [1]).unwrap();
        assert_eq!(cut_capacity(&g, &roles, 2, &one).unwrap(), 2.0);
    }

    #[test]
    fn cut_capacity_edgeless_is_zero() {
        let g = Graph::new(6);
        let roles = RoleAssignment::new(6, 0, &[3]).unwrap();
        for cut in enumerate_cuts(&roles).unwrap() {
            assert_eq!(cut_capacity(&g, &roles, 3, &cut).unwrap(), 0.0);
        }
    }

    #[test]
    fn cut_capacity_rejects_bad_roles() {
        let g = four_cycle();
        let roles = RoleAssignment::new(4, 0, &[2]).unwrap();
        assert!(cut_capacity(&g, &roles, 1, &CutPartition::empty()).is_err());
        let other = RoleAssignment::new(4, 1, &[3]).unwrap();
        let cut = CutPartition::new(&other, [0]).unwrap();
        assert!(cut_capacity(&g, &roles, 2, &cut).is_err());
    }

    #[test]
    fn cut_capacity_excludes_direct_st_edge() {
        // Triangle s-t plus relay path: the s-t edge must not be counted.
        let mut g = Graph::new(3);
        g.add_unit_edge(0, 1).unwrap();
        g.add_unit_edge(1, 2).unwrap();
        g.add_unit_edge(0, 2).unwrap();
        let roles = RoleAssignment::new(3, 0, &[2]).unwrap();
        let empty = CutPartition::empty();
        assert_eq!(cut_capacity(&g, &roles, 2, &empty).unwrap(), 1.0);
        let full = CutPartition::new(&roles, [1]).unwrap();
        assert_eq!(cut_capacity(&g, &roles, 2, &full).unwrap(), 1.0);
    }

    #[test]
    fn crossing_edge_count_examples() {
        assert_eq!(crossing_edge_count(0, 10).unwrap(), 10);
        assert_eq!(crossing_edge_count(5, 10).unwrap(), 35);
        assert_eq!(crossing_edge_count(10, 10).unwrap(), 10);
        assert!(crossing_edge_count(11, 10).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let roles = RoleAssignment::new(2, 0, &[1]).unwrap();
        assert_eq!(enumerate_cuts(&roles).unwrap().count(), 1);

        let roles = RoleAssignment::new(4, 0, &[1]).unwrap();
        assert_eq!(enumerate_cuts(&roles).unwrap().count(), 4);

        let roles = RoleAssignment::new(12, 0, &[11]).unwrap();
        let cuts: Vec<CutPartition> = enumerate_cuts(&roles).unwrap().collect();
        assert_eq!(cuts.len(), 1024);
        let distinct: std::collections::BTreeSet<Vec<usize>> = cuts
            .iter()
            .map(|c| c.members().iter().copied().collect())
            .collect();
        assert_eq!(distinct.len(), 1024);
    }

    #[test]
    fn enumeration_size_histogram_is_binomial() {
        fn binom(n: usize, k: usize) -> usize {
            if k > n {
                return 0;
            }
            (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
        }
        for n in 3..=12 {
            let roles = RoleAssignment::new(n, 0, &[n - 1]).unwrap();
            let relay_count = roles.relay_count();
            let mut hist = vec![0usize; relay_count + 1];
            for cut in enumerate_cuts(&roles).unwrap() {
                hist[cut.size()] += 1;
            }
            for (x, &count) in hist.iter().enumerate() {
                assert_eq!(count, binom(relay_count, x), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn enumeration_refuses_over_limit() {
        let roles = RoleAssignment::new(30, 0, &[29]).unwrap();
        match enumerate_cuts(&roles) {
            Err(Error::EnumerationLimit { relays: 28, limit }) => {
                assert_eq!(limit, ENUMERATION_LIMIT)
            }
            other => panic!("expected enumeration limit error, got {other:?}"),
        }
    }

    #[test]
    fn graph_rejects_invalid_edges() {
        let mut g = Graph::new(3);
        assert!(g.add_unit_edge(0, 0).is_err());
        assert!(g.add_unit_edge(0, 3).is_err());
        assert!(g.add_edge(0, 1, -1.0).is_err());
        assert!(g.add_edge(0, 1, f64::NAN).is_err());
        g.add_unit_edge(0, 1).unwrap();
        assert!(g.add_unit_edge(1, 0).is_err(), "duplicate across orientations");
    }

    #[test]
    fn roles_partition_nodes() {
        let roles = RoleAssignment::new(7, 2, &[5, 0]).unwrap();
        assert_eq!(roles.terminals(), &[0, 5]);
        assert_eq!(roles.relays(), &[1, 3, 4, 6]);
        assert_eq!(roles.relay_count(), 7 - 1 - 2);
        assert!(RoleAssignment::new(7, 2, &[2]).is_err());
        assert!(RoleAssignment::new(7, 2, &[]).is_err());
        assert!(RoleAssignment::new(7, 2, &[5, 5]).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = four_cycle();
        let text = g.to_edge_list();
        assert!(text.starts_with("n=4\n"));
        let parsed = Graph::from_edge_list(&text).unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn edge_list_rejects_malformed_input() {
        assert!(Graph::from_edge_list("").is_err());
        assert!(Graph::from_edge_list("m=4\n0 1 1\n").is_err());
        assert!(Graph::from_edge_list("n=4\n0 1\n").is_err());
        assert!(Graph::from_edge_list("n=4\n0 1 x\n").is_err());
        assert!(Graph::from_edge_list("n=4\n0 1 1 9\n").is_err());
        assert!(Graph::from_edge_list("n=2\n0 1 1\n0 1 1\n").is_err());
    }

    #[test]
    fn cut_capacity_invariant_under_role_preserving_relabel() {
        // Rotate the 4-cycle by one position: roles and adjacency map over.
        let g = four_cycle();
        let roles = RoleAssignment::new(4, 0, &[2]).unwrap();
        let relabel = |v: usize| (v + 1) % 4;
        let mut h = Graph::new(4);
        for (u, v, c) in g.edges() {
            h.add_edge(relabel(u), relabel(v), c).unwrap();
        }
        let roles_h = RoleAssignment::new(4, relabel(0), &[relabel(2)]).unwrap();
        for cut in enumerate_cuts(&roles).unwrap() {
            let mapped = CutPartition::new(
                &roles_h,
                cut.members().iter().map(|&v| relabel(v)),
            )
            .unwrap();
            assert_eq!(
                cut_capacity(&g, &roles, 2, &cut).unwrap(),
                cut_capacity(&h, &roles_h, relabel(2), &mapped).unwrap()
            );
        }
    }

    #[test]
    fn unit_cut_capacity_bounded_by_crossing_count() {
        // Complete graph attains the bound; the cycle stays below it.
        let mut k5 = Graph::new(5);
        for u in 0..5 {
            for v in (u + 1)..5 {
                k5.add_unit_edge(u, v).unwrap();
            }
        }
        let roles = RoleAssignment::new(5, 0, &[4]).unwrap();
        for cut in enumerate_cuts(&roles).unwrap() {
            let cap = cut_capacity(&k5, &roles, 4, &cut).unwrap();
            let bound = crossing_edge_count(cut.size(), roles.relay_count()).unwrap();
            assert_eq!(cap, bound as f64);
        }
        let g = four_cycle();
        let roles = RoleAssignment::new(4, 0, &[2]).unwrap();
        for cut in enumerate_cuts(&roles).unwrap() {
            let cap = cut_capacity(&g, &roles, 2, &cut).unwrap();
            let bound = crossing_edge_count(cut.size(), roles.relay_count()).unwrap();
            assert!(cap <= bound as f64);
        }
    }
}
