//! Unit-cost Steiner trees: exact Dreyfus–Wagner, the metric-closure MST
//! 2-approximation, and the star-contraction scheme for ψ-dense instances.
//!
//! The star-contraction scheme repeatedly picks the unused nonterminal with
//! the most current-terminal neighbors, contracts it with those terminals
//! into a super-terminal, and stops once at most `s(δ,ψ) = ceil(max{2/δ,2}·ψ)`
//! terminals remain. The reduced instance is then solved exactly and the
//! stars are expanded back into the original graph. On ψ-dense instances the
//! result costs at most `(1+δ)` times the optimum.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::ratio::{self, Psi, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinerInstance {
    pub graph: Graph,
    pub terminals: Vec<Vertex>,
}

impl SteinerInstance {
    /// Requires a connected graph and a nonempty terminal set of valid ids.
    pub fn new(graph: Graph, mut terminals: Vec<Vertex>) -> Result<Self> {
        terminals.sort_unstable();
        terminals.dedup();
        if terminals.is_empty() {
            return Err(Error::input("terminal set is empty"));
        }
        for &t in &terminals {
            graph.check_vertex(t)?;
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(SteinerInstance { graph, terminals })
    }

    pub fn is_terminal_mask(&self) -> Vec<bool> {
        self.graph
            .membership(&self.terminals)
            .expect("terminals validated on construction")
    }

    pub fn nonterminal_count(&self) -> usize {
        self.graph.n() - self.terminals.len()
    }

    /// Whether the nonterminals form an independent set.
    pub fn is_quasi_bipartite(&self) -> bool {
        let term = self.is_terminal_mask();
        self.graph.edges().all(|(u, v)| term[u] || term[v])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteinerTreeSolution {
    pub tree_edges: Vec<(Vertex, Vertex)>,
    pub spans: Vec<Vertex>,
}

impl SteinerTreeSolution {
    /// Validates that `edges` is a tree of `inst.graph` containing every
    /// terminal. With no edges the instance must have a single terminal.
    pub fn new(inst: &SteinerInstance, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let g = &inst.graph;
        let mut tree_edges: Vec<(Vertex, Vertex)> =
            edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        tree_edges.sort_unstable();
        tree_edges.dedup();
        let violation = |msg: &str| Err(Error::ContractViolation(msg.to_string()));
        if tree_edges.is_empty() {
            if inst.terminals.len() == 1 {
                return Ok(SteinerTreeSolution {
                    tree_edges,
                    spans: inst.terminals.clone(),
                });
            }
            return violation("empty tree cannot span several terminals");
        }
        for &(u, v) in &tree_edges {
            if !g.has_edge(u, v) {
                return violation("tree uses an edge missing from the graph");
            }
        }
        let mut spans: Vec<Vertex> = tree_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        spans.sort_unstable();
        spans.dedup();
        if spans.len() != tree_edges.len() + 1 {
            return violation("edge set is not a tree");
        }
        if !edge_set_connected(&spans, &tree_edges) {
            return violation("edge set is not connected");
        }
        if inst.terminals.iter().any(|t| spans.binary_search(t).is_err()) {
            return violation("tree misses a terminal");
        }
        Ok(SteinerTreeSolution { tree_edges, spans })
    }

    pub fn cost(&self) -> usize {
        self.tree_edges.len()
    }
}

fn edge_set_connected(vertices: &[Vertex], edges: &[(Vertex, Vertex)]) -> bool {
    let index = |v: Vertex| vertices.binary_search(&v).expect("endpoint listed");
    let mut adj = vec![Vec::new(); vertices.len()];
    for &(u, v) in edges {
        let (a, b) = (index(u), index(v));
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; vertices.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(a) = stack.pop() {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                count += 1;
                stack.push(b);
            }
        }
    }
    count == vertices.len()
}

/// Reduces a connected edge set containing every terminal to a Steiner tree:
/// BFS spanning tree from the first terminal, then repeated removal of
/// nonterminal leaves. Never increases the edge count.
pub fn prune_to_tree(inst: &SteinerInstance, edges: &[(Vertex, Vertex)]) -> Result<SteinerTreeSolution> {
    let n = inst.graph.n();
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let root = inst.terminals[0];
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    if inst.terminals.iter().any(|&t| parent[t] == usize::MAX) {
        return Err(Error::ContractViolation(
            "edge set does not connect the terminals".into(),
        ));
    }
    let is_terminal = inst.is_terminal_mask();
    let mut needed = is_terminal.clone();
    // Reverse BFS order visits children before parents.
    for &v in order.iter().rev() {
        if needed[v] && v != root {
            needed[parent[v]] = true;
        }
    }
    let tree: Vec<(Vertex, Vertex)> = order
        .iter()
        .filter(|&&v| v != root && needed[v])
        .map(|&v| (v, parent[v]))
        .collect();
    SteinerTreeSolution::new(inst, tree)
}

/// `|V∖S| / min_{t∈S} |N(t) ∩ (V∖S)|`; infinite when some terminal has no
/// nonterminal neighbor.
pub fn density_psi_st(inst: &SteinerInstance) -> Psi {
    let term = inst.is_terminal_mask();
    let min = inst
        .terminals
        .iter()
        .map(|&t| {
            inst.graph
                .neighbors(t)
                .iter()
                .filter(|&&w| !term[w])
                .count()
        })
        .min()
        .unwrap_or(0);
    Psi::quotient(inst.nonterminal_count() as u64, min as u64)
}

fn bfs_distances(g: &Graph, source: Vertex) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub const DEFAULT_DW_CAP: usize = 18;

pub fn dreyfus_wagner(inst: &SteinerInstance) -> Result<SteinerTreeSolution> {
    dreyfus_wagner_with_cap(inst, DEFAULT_DW_CAP)
}

/// Exact Steiner tree by dynamic programming over terminal subsets.
///
/// `best[X][v]` is the cost of an optimal tree spanning `X ∪ {v}`. For
/// `|X| >= 2` it is the cheapest of joining two subtrees at some `u`
/// (`split[X][u] = min best[A][u] + best[X∖A][u]`) plus the distance from
/// `u` to `v`. Distances are unit-weight, so the second step is a shortest
/// path relaxation seeded with `split[X][·]`. The last terminal acts as the
/// root, so subsets range over the other `k - 1` terminals.
pub fn dreyfus_wagner_with_cap(inst: &SteinerInstance, cap: usize) -> Result<SteinerTreeSolution> {
    let k = inst.terminals.len();
    if k > cap {
        return Err(Error::CapExceeded {
            what: "terminal count for Dreyfus-Wagner",
            got: k,
            cap,
        });
    }
    if k == 1 {
        return SteinerTreeSolution::new(inst, Vec::new());
    }
    let g = &inst.graph;
    let n = g.n();
    let q = k - 1;
    let root = inst.terminals[q];
    let full = (1usize << q) - 1;
    let dist: Vec<Vec<u32>> = inst.terminals[..q]
        .iter()
        .map(|&t| bfs_distances(g, t))
        .collect();
    let mut best = vec![u32::MAX; (full + 1) * n];
    for (i, d) in dist.iter().enumerate() {
        best[(1 << i) * n..(1 << i) * n + n].copy_from_slice(d);
    }
    let mut split = vec![u32::MAX; n];
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        split_values(&best, n, mask, &mut split);
        let row = relax(g, &split);
        best[mask * n..mask * n + n].copy_from_slice(&row);
    }
    let mut edges = Vec::new();
    let mut scratch = vec![u32::MAX; n];
    rebuild(g, &best, &dist, n, full, root, &mut edges, &mut scratch);
    let tree = SteinerTreeSolution::new(inst, edges)?;
    debug_assert_eq!(tree.cost() as u32, best[full * n + root]);
    Ok(tree)
}

fn split_values(best: &[u32], n: usize, mask: usize, out: &mut [u32]) {
    out.fill(u32::MAX);
    let low = mask & mask.wrapping_neg();
    // Subsets containing the lowest bit cover every unordered split once.
    let rest = mask ^ low;
    let mut sub = rest;
    loop {
        let a = sub | low;
        if a != mask {
            let b = mask ^ a;
            let (ra, rb) = (&best[a * n..a * n + n], &best[b * n..b * n + n]);
            for v in 0..n {
                let c = ra[v].saturating_add(rb[v]);
                if c < out[v] {
                    out[v] = c;
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
}

fn relax(g: &Graph, seed: &[u32]) -> Vec<u32> {
    let mut value = seed.to_vec();
    let mut heap: BinaryHeap<Reverse<(u32, Vertex)>> = value
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != u32::MAX)
        .map(|(v, &c)| Reverse((c, v)))
        .collect();
    while let Some(Reverse((c, u))) = heap.pop() {
        if c > value[u] {
            continue;
        }
        for &w in g.neighbors(u) {
            if c + 1 < value[w] {
                value[w] = c + 1;
                heap.push(Reverse((c + 1, w)));
            }
        }
    }
    value
}

#[allow(clippy::too_many_arguments)]
fn rebuild(
    g: &Graph,
    best: &[u32],
    dist: &[Vec<u32>],
    n: usize,
    mask: usize,
    mut v: Vertex,
    edges: &mut Vec<(Vertex, Vertex)>,
    scratch: &mut [u32],
) {
    if mask.count_ones() == 1 {
        let d = &dist[mask.trailing_zeros() as usize];
        while d[v] > 0 {
            let w = *g
                .neighbors(v)
                .iter()
                .find(|&&w| d[w] + 1 == d[v])
                .expect("shortest path predecessor");
            edges.push((v, w));
            v = w;
        }
        return;
    }
    loop {
        let value = best[mask * n + v];
        split_values(best, n, mask, scratch);
        if scratch[v] == value {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                let a = sub | low;
                if a != mask {
                    let b = mask ^ a;
                    if best[a * n + v].saturating_add(best[b * n + v]) == value {
                        rebuild(g, best, dist, n, a, v, edges, scratch);
                        rebuild(g, best, dist, n, b, v, edges, scratch);
                        return;
                    }
                }
                if sub == 0 {
                    unreachable!("split value is attained by some subset");
                }
                sub = (sub - 1) & rest;
            }
        }
        let w = *g
            .neighbors(v)
            .iter()
            .find(|&&w| best[mask * n + w] + 1 == value)
            .expect("relaxation predecessor");
        edges.push((v, w));
        v = w;
    }
}

/// Metric-closure MST over the terminals, expanded into shortest paths and
/// pruned to a tree. Cost at most twice the optimum.
pub fn metric_closure_mst(inst: &SteinerInstance) -> Result<SteinerTreeSolution> {
    let g = &inst.graph;
    let k = inst.terminals.len();
    if k == 1 {
        return SteinerTreeSolution::new(inst, Vec::new());
    }
    let dist: Vec<Vec<u32>> = inst.terminals.iter().map(|&t| bfs_distances(g, t)).collect();
    // Prim on the complete terminal graph.
    let mut in_tree = vec![false; k];
    let mut link = vec![(u32::MAX, 0usize); k];
    in_tree[0] = true;
    for j in 1..k {
        link[j] = (dist[0][inst.terminals[j]], 0);
    }
    let mut edges = Vec::new();
    for _ in 1..k {
        let j = (0..k)
            .filter(|&j| !in_tree[j])
            .min_by_key(|&j| (link[j].0, j))
            .expect("terminal left");
        in_tree[j] = true;
        let i = link[j].1;
        // Walk from terminal j down the BFS layers of terminal i.
        let d = &dist[i];
        let mut v = inst.terminals[j];
        while d[v] > 0 {
            let w = *g
                .neighbors(v)
                .iter()
                .find(|&&w| d[w] + 1 == d[v])
                .expect("shortest path predecessor");
            edges.push((v, w));
            v = w;
        }
        for l in 0..k {
            if !in_tree[l] && dist[j][inst.terminals[l]] < link[l].0 {
                link[l] = (dist[j][inst.terminals[l]], j);
            }
        }
    }
    prune_to_tree(inst, &edges)
}

/// Stop threshold `s(δ,ψ) = ceil(max{2/δ, 2}·ψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MdstpParams {
    #[serde(serialize_with = "ser_ratio")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub psi: Rational,
    pub stop_threshold: usize,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio::to_f64(r))
}

impl MdstpParams {
    pub fn new(delta: Rational, psi: Rational) -> Result<Self> {
        if delta == Rational::from_integer(0) {
            return Err(Error::input("delta must be positive"));
        }
        if psi < Rational::from_integer(1) {
            return Err(Error::input("psi must be at least 1"));
        }
        let two = Rational::from_integer(2);
        let factor = (two / delta).max(two);
        let stop = (factor * psi).ceil().to_integer() as usize;
        Ok(MdstpParams {
            delta,
            psi,
            stop_threshold: stop,
        })
    }

    /// Uses the tightest ψ of the instance.
    pub fn for_instance(inst: &SteinerInstance, delta: Rational) -> Result<Self> {
        match density_psi_st(inst) {
            Psi::Finite(psi) => MdstpParams::new(delta, psi),
            Psi::Infinite => Err(Error::input(
                "a terminal has no nonterminal neighbor; the instance is not dense for any finite psi",
            )),
        }
    }
}

/// The unused nonterminal (outside `current_terminals ∪ used`) adjacent to
/// the most current terminals, with that count. Ties go to the smallest id.
pub fn star_pick(g: &Graph, current_terminals: &[Vertex], used: &[Vertex]) -> Result<(Vertex, usize)> {
    let term = g.membership(current_terminals)?;
    let blocked = g.membership(used)?;
    g.vertices()
        .filter(|&u| !term[u] && !blocked[u])
        .map(|u| (u, g.neighbors(u).iter().filter(|&&w| term[w]).count()))
        .min_by_key(|&(u, c)| (Reverse(c), u))
        .ok_or_else(|| Error::input("no unused nonterminal left to pick"))
}

/// One contracted star, in original vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarPick {
    pub center: Vertex,
    /// Number of current terminals before the pick.
    pub terminals_before: usize,
    /// Number of current terminals absorbed by the star.
    pub captured: usize,
    /// Star edges `center - x`, one per absorbed terminal.
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdstpReport {
    pub solution: SteinerTreeSolution,
    pub params: MdstpParams,
    pub stars: Vec<StarPick>,
    /// Terminals handed to the exact phase.
    pub exact_terminals: usize,
    /// Whether the instance satisfied the ψ-density precondition.
    pub density_validated: bool,
    /// Largest super-terminal contraction height seen.
    pub max_height: usize,
    #[serde(serialize_with = "ratio::serialize_opt_ratio")]
    pub certified_bound: Option<Rational>,
}

impl MdstpReport {
    pub fn stars_used(&self) -> usize {
        self.stars.len()
    }
}

/// `2ψ ln(|S| / s) + 1`, the bound on the number of stars.
pub fn star_count_bound(psi: Rational, terminals: usize, stop: usize) -> f64 {
    2.0 * ratio::to_f64(&psi) * (terminals as f64 / stop as f64).ln() + 1.0
}

/// Star contraction followed by exact solving of the reduced instance.
///
/// When the density precondition holds, the star-size bound
/// `|N(v) ∩ S_1| >= |S_1|/(2ψ)`, the super-terminal neighbor bound and the
/// star-count bound are asserted as they are reached; a failure there is a
/// bug, not an input problem.
pub fn mdstp(inst: &SteinerInstance, params: &MdstpParams) -> Result<MdstpReport> {
    mdstp_with_cap(inst, params, DEFAULT_DW_CAP)
}

pub fn mdstp_with_cap(inst: &SteinerInstance, params: &MdstpParams, dw_cap: usize) -> Result<MdstpReport> {
    let g = &inst.graph;
    let psi = params.psi;
    let validated = density_psi_st(inst) <= Psi::Finite(psi);
    let free = inst.nonterminal_count() as u64;

    let mut cur = g.clone();
    let mut members: Vec<Vec<Vertex>> = g.vertices().map(|v| vec![v]).collect();
    let mut is_term = inst.is_terminal_mask();
    let mut height = vec![0usize; g.n()];
    let mut stars = Vec::new();
    let mut max_height = 0;

    loop {
        let current: Vec<Vertex> = cur.vertices().filter(|&v| is_term[v]).collect();
        if current.len() <= params.stop_threshold {
            break;
        }
        let Ok((v, captured)) = star_pick(&cur, &current, &[]) else {
            break;
        };
        if captured == 0 {
            break;
        }
        if validated {
            assert!(
                Rational::from_integer((2 * captured) as u64) * psi
                    >= Rational::from_integer(current.len() as u64),
                "star of size {captured} below |S1|/(2ψ) with |S1| = {}",
                current.len()
            );
        }
        let absorbed: Vec<Vertex> = cur
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| is_term[w])
            .collect();
        let center = members[v][0];
        let star_edges: Vec<(Vertex, Vertex)> = absorbed
            .iter()
            .map(|&t| {
                let x = *members[t]
                    .iter()
                    .find(|&&x| g.has_edge(center, x))
                    .expect("contracted terminal adjacent to the star center");
                (center, x)
            })
            .collect();
        let new_height = 1 + absorbed.iter().map(|&t| height[t]).max().unwrap_or(0);
        max_height = max_height.max(new_height);
        stars.push(StarPick {
            center,
            terminals_before: current.len(),
            captured,
            edges: star_edges,
        });

        let mut part = absorbed;
        part.push(v);
        let (next, map) = cur.contract_sets(&[part])?;
        let mut next_members = vec![Vec::new(); next.n()];
        let mut next_term = vec![false; next.n()];
        let mut next_height = vec![0; next.n()];
        for old in cur.vertices() {
            let s = map.super_of(old);
            next_members[s].extend_from_slice(&members[old]);
            next_term[s] |= is_term[old];
            next_height[s] = next_height[s].max(height[old]);
        }
        next_height[map.super_of(v)] = new_height;
        for list in &mut next_members {
            list.sort_unstable();
        }
        cur = next;
        members = next_members;
        is_term = next_term;
        height = next_height;

        if validated {
            for s in cur.vertices().filter(|&s| is_term[s] && height[s] > 0) {
                let free_nbrs = cur.neighbors(s).iter().filter(|&&w| !is_term[w]).count();
                assert!(
                    Rational::from_integer((free_nbrs + height[s]) as u64) * psi
                        >= Rational::from_integer(free),
                    "super-terminal lost more nonterminal neighbors than its height allows"
                );
            }
        }
    }

    if validated && !stars.is_empty() {
        let bound = star_count_bound(psi, inst.terminals.len(), params.stop_threshold);
        assert!(
            stars.len() as f64 <= bound + 1e-9,
            "{} stars exceed the bound {bound}",
            stars.len()
        );
    }

    let remaining: Vec<Vertex> = cur.vertices().filter(|&v| is_term[v]).collect();
    let reduced = SteinerInstance::new(cur.clone(), remaining)?;
    let exact = dreyfus_wagner_with_cap(&reduced, dw_cap)?;

    let mut edges: Vec<(Vertex, Vertex)> = stars.iter().flat_map(|s| s.edges.clone()).collect();
    for &(a, b) in &exact.tree_edges {
        edges.push(representative_edge(g, &members[a], &members[b]));
    }
    let solution = match SteinerTreeSolution::new(inst, edges.clone()) {
        Ok(tree) => tree,
        Err(_) => prune_to_tree(inst, &edges)?,
    };
    Ok(MdstpReport {
        solution,
        params: *params,
        stars,
        exact_terminals: reduced.terminals.len(),
        density_validated: validated,
        max_height,
        certified_bound: validated.then(|| Rational::from_integer(1) + params.delta),
    })
}

/// Smallest original edge `(x, y)` with `x ∈ a`, `y ∈ b`.
fn representative_edge(g: &Graph, a: &[Vertex], b: &[Vertex]) -> (Vertex, Vertex) {
    for &x in a {
        if let Some(&y) = g.neighbors(x).iter().find(|y| b.binary_search(y).is_ok()) {
            return (x, y);
        }
    }
    unreachable!("contracted vertices are adjacent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::ratio::rational;

    fn inst(g: Graph, terms: &[Vertex]) -> SteinerInstance {
        SteinerInstance::new(g, terms.to_vec()).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(SteinerInstance::new(Graph::path(3), vec![]).is_err());
        assert_eq!(
            SteinerInstance::new(Graph::empty(2), vec![0]),
            Err(Error::Disconnected)
        );
        assert!(SteinerInstance::new(Graph::path(3), vec![5]).is_err());
    }

    #[test]
    fn density_examples() {
        // star: center 0 is the only nonterminal
        let s = inst(Graph::star(4), &[1, 2, 3, 4]);
        assert_eq!(density_psi_st(&s), Psi::Finite(rational(1, 1)));
        let p = inst(Graph::path(3), &[0, 1]);
        assert_eq!(density_psi_st(&p), Psi::Infinite);
        let mut b = GraphBuilder::new(5);
        for t in 0..2 {
            for x in 2..5 {
                b.add_edge(t, x);
            }
        }
        assert_eq!(
            density_psi_st(&inst(b.build(), &[0, 1])),
            Psi::Finite(rational(1, 1))
        );
    }

    #[test]
    fn dw_examples() {
        let tree_graph = Graph::from_edges(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let all = inst(tree_graph.clone(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(dreyfus_wagner(&all).unwrap().cost(), 5);
        let p = inst(Graph::path(4), &[0, 3]);
        let t = dreyfus_wagner(&p).unwrap();
        assert_eq!(t.cost(), 3);
        assert_eq!(t.tree_edges, vec![(0, 1), (1, 2), (2, 3)]);
        let single = inst(Graph::cycle(5), &[2]);
        assert_eq!(dreyfus_wagner(&single).unwrap().cost(), 0);
    }

    #[test]
    fn dw_steiner_point_in_star() {
        let s = inst(Graph::star(5), &[1, 2, 3, 4, 5]);
        let t = dreyfus_wagner(&s).unwrap();
        assert_eq!(t.cost(), 5);
        assert!(t.spans.contains(&0));
    }

    #[test]
    fn dw_refuses_over_cap() {
        let s = inst(Graph::complete(6), &[0, 1, 2, 3, 4]);
        assert!(matches!(
            dreyfus_wagner_with_cap(&s, 4),
            Err(Error::CapExceeded { cap: 4, got: 5, .. })
        ));
    }

    #[test]
    fn mst_examples() {
        let two = inst(Graph::path(3), &[0, 2]);
        assert_eq!(metric_closure_mst(&two).unwrap().cost(), 2);
        let clique = inst(Graph::complete(5), &[0, 1, 2, 3]);
        let t = metric_closure_mst(&clique).unwrap();
        assert_eq!(t.cost(), 3);
        assert!(!t.spans.contains(&4));
    }

    #[test]
    fn solution_validation() {
        let p = inst(Graph::path(4), &[0, 3]);
        assert!(SteinerTreeSolution::new(&p, vec![(0, 1), (2, 3)]).is_err());
        assert!(SteinerTreeSolution::new(&p, vec![(0, 2)]).is_err());
        assert!(SteinerTreeSolution::new(&p, vec![]).is_err());
        let c = inst(Graph::cycle(4), &[0, 2]);
        assert!(SteinerTreeSolution::new(&c, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).is_err());
    }

    #[test]
    fn prune_removes_dangling_nonterminals() {
        let c = inst(Graph::cycle(6), &[0, 2]);
        let t = prune_to_tree(&c, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        assert_eq!(t.cost(), 2);
    }

    #[test]
    fn stop_threshold() {
        assert_eq!(MdstpParams::new(rational(1, 2), rational(3, 1)).unwrap().stop_threshold, 12);
        assert_eq!(MdstpParams::new(rational(1, 1), rational(1, 1)).unwrap().stop_threshold, 2);
        assert_eq!(MdstpParams::new(rational(3, 1), rational(3, 2)).unwrap().stop_threshold, 3);
        assert!(MdstpParams::new(rational(0, 1), rational(1, 1)).is_err());
        assert!(MdstpParams::new(rational(1, 1), rational(1, 2)).is_err());
    }

    #[test]
    fn star_pick_examples() {
        let g = Graph::star(4);
        assert_eq!(star_pick(&g, &[1, 2, 3, 4], &[]).unwrap(), (0, 4));
        let edgeless = Graph::empty(4);
        assert_eq!(star_pick(&edgeless, &[0], &[]).unwrap(), (1, 0));
        let mut b = GraphBuilder::new(5);
        for (u, v) in [(3, 0), (3, 1), (4, 1), (4, 2)] {
            b.add_edge(u, v);
        }
        assert_eq!(star_pick(&b.build(), &[0, 1, 2], &[]).unwrap(), (3, 2));
        assert!(star_pick(&Graph::path(2), &[0], &[1]).is_err());
    }

    #[test]
    fn small_terminal_sets_skip_contraction() {
        let s = inst(Graph::cycle(8), &[0, 3, 5]);
        let p = MdstpParams::new(rational(1, 1), rational(2, 1)).unwrap();
        let r = mdstp(&s, &p).unwrap();
        assert!(r.stars.is_empty());
        assert_eq!(r.solution, dreyfus_wagner(&s).unwrap());
    }

    #[test]
    fn fully_dense_instance_needs_one_star() {
        // 30 terminals, 3 nonterminals, complete bipartite between them.
        let mut b = GraphBuilder::new(33);
        for t in 0..30 {
            for x in 30..33 {
                b.add_edge(t, x);
            }
        }
        b.add_edge(30, 31);
        let s = inst(b.build(), &(0..30).collect::<Vec<_>>());
        let p = MdstpParams::for_instance(&s, rational(1, 1)).unwrap();
        assert_eq!(p.psi, rational(1, 1));
        assert_eq!(p.stop_threshold, 2);
        let r = mdstp(&s, &p).unwrap();
        assert_eq!(r.stars.len(), 1);
        assert_eq!(r.stars[0].captured, 30);
        assert_eq!(r.solution.cost(), 30);
        assert!(r.density_validated);
    }
}
