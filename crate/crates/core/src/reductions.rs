//! Instance transformations between vertex cover and Steiner tree.
//!
//! [`vc_to_steiner`] turns a graph `G = (V, E)` into a Steiner instance on
//! `V ∪ {v_e : e ∈ E}`: the source vertices form a clique, every edge-vertex
//! is joined to the two endpoints of its edge, and the edge-vertices are the
//! terminals. When `|E| >= 2` an optimal tree has `|E| + τ(G) - 1` edges.
//!
//! [`densify`] replaces each nonterminal `x` by `k = ceil(m^{(1-δ)/δ})`
//! copies `U_x` (`m` nonterminals in total), wires every copy to the
//! terminals adjacent to `x`, and makes all copies one clique. Terminal
//! degrees grow to at least `2k >= 2|U|^{1-δ}` when each terminal had two
//! nonterminal neighbors. The optimum is unchanged whenever the source
//! nonterminals already formed a clique, as in the output of
//! [`vc_to_steiner`].

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex};
use crate::ratio::Rational;
use crate::steiner::{self, SteinerInstance, SteinerTreeSolution};

/// Largest source graph accepted by [`vc_to_steiner`].
pub const MAX_VC_SOURCE: usize = 2000;

/// Largest copy set `|U| = m·k` accepted by [`densify`].
pub const MAX_DENSIFIED_NONTERMINALS: u64 = 3000;

/// Documented consequence of composing both reductions with bounded-degree
/// vertex cover hard instances; not computed by this crate.
pub const HARDNESS_NOTE: &str = "composed with bounded-degree vertex cover gadgets (104n nodes, \
optimum between (54+e)n and (55-e)n), dense Steiner tree is NP-hard to approximate within 263/262 - e";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensifyGroup {
    pub source: Vertex,
    pub copies: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReductionCertificate {
    VcToSteiner {
        source_n: usize,
        source_edges: Vec<(Vertex, Vertex)>,
        /// Source vertex `v` keeps id `v`; edge `i` becomes vertex `source_n + i`.
        edge_vertex_offset: usize,
        cost_identity: String,
    },
    Densify {
        source: Graph,
        source_terminals: Vec<Vertex>,
        delta: String,
        k: u64,
        /// Target terminal `i` is source terminal `source_terminals[i]`.
        groups: Vec<DensifyGroup>,
        nonterminals_form_clique: bool,
        min_terminal_degree: usize,
        cost_identity: String,
    },
}

impl ReductionCertificate {
    /// `|E| + τ - 1` for a vertex cover reduction.
    pub fn expected_smt(&self, tau: usize) -> Option<usize> {
        match self {
            ReductionCertificate::VcToSteiner { source_edges, .. } => {
                Some(source_edges.len() + tau - 1)
            }
            ReductionCertificate::Densify { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad certificate: {e}")))
    }
}

pub fn vc_to_steiner(g: &Graph) -> Result<(SteinerInstance, ReductionCertificate)> {
    if g.edge_count() == 0 {
        return Err(Error::input("graph has no edges, so the reduction has no terminals"));
    }
    if g.n() > MAX_VC_SOURCE {
        return Err(Error::CapExceeded {
            what: "source vertices for the vertex cover reduction",
            got: g.n(),
            cap: MAX_VC_SOURCE,
        });
    }
    let n = g.n();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let target = build_vc_target(n, &edges);
    let terminals = (n..n + edges.len()).collect();
    let inst = SteinerInstance::new(target, terminals)?;
    let cert = ReductionCertificate::VcToSteiner {
        source_n: n,
        source_edges: edges,
        edge_vertex_offset: n,
        cost_identity: "smt = |E| + tau - 1".into(),
    };
    Ok((inst, cert))
}

fn build_vc_target(n: usize, edges: &[(Vertex, Vertex)]) -> Graph {
    let mut b = GraphBuilder::new(n + edges.len());
    for u in 0..n {
        for v in u + 1..n {
            b.add_edge(u, v);
        }
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        b.add_edge(n + i, u);
        b.add_edge(n + i, v);
    }
    b.build()
}

/// Source vertices used by a feasible tree of the reduced instance, plus one
/// endpoint of every source edge they leave uncovered.
pub fn steiner_to_vc_solution(tree: &SteinerTreeSolution, cert: &ReductionCertificate) -> Result<Vec<Vertex>> {
    let ReductionCertificate::VcToSteiner {
        source_n,
        source_edges,
        ..
    } = cert
    else {
        return Err(Error::input("certificate is not a vertex cover reduction"));
    };
    let n = *source_n;
    let inst = SteinerInstance::new(
        build_vc_target(n, source_edges),
        (n..n + source_edges.len()).collect(),
    )?;
    SteinerTreeSolution::new(&inst, tree.tree_edges.clone())?;
    let mut chosen = vec![false; n];
    for &v in tree.spans.iter().filter(|&&v| v < n) {
        chosen[v] = true;
    }
    for &(u, v) in source_edges {
        if !chosen[u] && !chosen[v] {
            chosen[u] = true;
        }
    }
    Ok((0..n).filter(|&v| chosen[v]).collect())
}

/// Smallest `k` with `k^δ >= m^{1-δ}`, i.e. `ceil(m^{(1-δ)/δ})`.
pub fn densify_k(m: u64, delta: Rational) -> Result<u64> {
    let (a, b) = (*delta.numer(), *delta.denom());
    if a == 0 || a >= b {
        return Err(Error::input("delta must lie strictly between 0 and 1"));
    }
    if m <= 1 {
        return Ok(m.max(1));
    }
    let exponent = (b - a) as f64 / a as f64;
    let estimate = (exponent * (m as f64).ln()).exp();
    if !estimate.is_finite() || estimate * m as f64 > 2.0 * MAX_DENSIFIED_NONTERMINALS as f64 {
        return Err(Error::CapExceeded {
            what: "densified nonterminal count",
            got: (estimate * m as f64) as usize,
            cap: MAX_DENSIFIED_NONTERMINALS as usize,
        });
    }
    // k^a >= m^(b-a), compared exactly when it fits, else in log space.
    let reaches = |k: u64| -> bool {
        let lhs = (k as u128).checked_pow(a as u32);
        let rhs = (m as u128).checked_pow((b - a) as u32);
        match (lhs, rhs) {
            (Some(l), Some(r)) if a <= u32::MAX as u64 && b - a <= u32::MAX as u64 => l >= r,
            _ => a as f64 * (k as f64).ln() >= (b - a) as f64 * (m as f64).ln() - 1e-12,
        }
    };
    let mut k = (estimate.floor() as u64).max(1);
    while k > 1 && reaches(k - 1) {
        k -= 1;
    }
    while !reaches(k) {
        k += 1;
    }
    Ok(k)
}

pub fn densify(inst: &SteinerInstance, delta: Rational) -> Result<(SteinerInstance, ReductionCertificate)> {
    let g = &inst.graph;
    let term = inst.is_terminal_mask();
    let nonterminals: Vec<Vertex> = g.vertices().filter(|&v| !term[v]).collect();
    if nonterminals.is_empty() {
        return Err(Error::input("instance has no nonterminals to densify"));
    }
    let m = nonterminals.len() as u64;
    let k = densify_k(m, delta)?;
    if m * k > MAX_DENSIFIED_NONTERMINALS {
        return Err(Error::CapExceeded {
            what: "densified nonterminal count",
            got: (m * k) as usize,
            cap: MAX_DENSIFIED_NONTERMINALS as usize,
        });
    }
    let t = inst.terminals.len();
    let k = k as usize;
    let mut index_of = vec![usize::MAX; g.n()];
    for (i, &s) in inst.terminals.iter().enumerate() {
        index_of[s] = i;
    }
    let groups: Vec<DensifyGroup> = nonterminals
        .iter()
        .enumerate()
        .map(|(j, &x)| DensifyGroup {
            source: x,
            copies: (t + j * k..t + (j + 1) * k).collect(),
        })
        .collect();
    let total = t + nonterminals.len() * k;
    let mut b = GraphBuilder::new(total);
    for (u, v) in g.edges() {
        if term[u] && term[v] {
            b.add_edge(index_of[u], index_of[v]);
        }
    }
    for group in &groups {
        for &s in g.neighbors(group.source).iter().filter(|&&s| term[s]) {
            for &c in &group.copies {
                b.add_edge(index_of[s], c);
            }
        }
    }
    for u in t..total {
        for v in u + 1..total {
            b.add_edge(u, v);
        }
    }
    let target = b.build();
    let min_terminal_degree = (0..t).map(|i| target.degree(i)).min().unwrap_or(0);
    let nonterminals_form_clique = nonterminals
        .iter()
        .enumerate()
        .all(|(i, &x)| nonterminals[i + 1..].iter().all(|&y| g.has_edge(x, y)));
    let out = SteinerInstance::new(target, (0..t).collect())?;
    let cert = ReductionCertificate::Densify {
        source: g.clone(),
        source_terminals: inst.terminals.clone(),
        delta: delta.to_string(),
        k: k as u64,
        groups,
        nonterminals_form_clique,
        min_terminal_degree,
        cost_identity: if nonterminals_form_clique {
            "smt(target) = smt(source)".into()
        } else {
            "smt(target) <= smt(source)".into()
        },
    };
    Ok((out, cert))
}

/// Maps a tree of the densified instance back to the source. Copies of one
/// nonterminal collapse to that nonterminal; a copy-clique edge between
/// nonadjacent source vertices becomes a shortest source path. The result
/// is pruned to a tree and never costs more than the input when the source
/// nonterminals form a clique.
pub fn densified_to_source_solution(
    tree: &SteinerTreeSolution,
    cert: &ReductionCertificate,
) -> Result<SteinerTreeSolution> {
    let ReductionCertificate::Densify {
        source,
        source_terminals,
        groups,
        ..
    } = cert
    else {
        return Err(Error::input("certificate is not a densification"));
    };
    let t = source_terminals.len();
    let k = groups.first().map_or(0, |g| g.copies.len());
    let total = t + groups.len() * k;
    let to_source = |v: Vertex| -> Result<Vertex> {
        if v < t {
            Ok(source_terminals[v])
        } else if v < total {
            Ok(groups[(v - t) / k].source)
        } else {
            Err(Error::UnknownVertex { vertex: v, n: total })
        }
    };
    if tree.tree_edges.is_empty() && tree.spans.len() != 1 {
        return Err(Error::ContractViolation("tree spans no vertex".into()));
    }
    let source_inst = SteinerInstance::new(source.clone(), source_terminals.clone())?;
    let mut edges = Vec::new();
    for &(a, b) in &tree.tree_edges {
        let (x, y) = (to_source(a)?, to_source(b)?);
        if x == y {
            continue;
        }
        if source.has_edge(x, y) {
            edges.push((x, y));
        } else {
            edges.extend(shortest_path_edges(source, x, y));
        }
    }
    steiner::prune_to_tree(&source_inst, &edges)
}

fn shortest_path_edges(g: &Graph, from: Vertex, to: Vertex) -> Vec<(Vertex, Vertex)> {
    let mut parent = vec![usize::MAX; g.n()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        path.push((parent[v], v));
        v = parent[v];
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rational;
    use crate::steiner::dreyfus_wagner;

    #[test]
    fn triangle_reduction() {
        let (inst, cert) = vc_to_steiner(&Graph::complete(3)).unwrap();
        assert_eq!(inst.graph.n(), 6);
        assert_eq!(inst.terminals, vec![3, 4, 5]);
        assert!(inst.terminals.iter().all(|&t| inst.graph.degree(t) == 2));
        assert_eq!(cert.expected_smt(2), Some(4));
        let tree = dreyfus_wagner(&inst).unwrap();
        assert_eq!(tree.cost(), 4);
        let cover = steiner_to_vc_solution(&tree, &cert).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(Graph::complete(3).is_vertex_cover(&cover));
    }

    #[test]
    fn path_reduction() {
        let (inst, _) = vc_to_steiner(&Graph::path(3)).unwrap();
        assert_eq!(inst.graph.n(), 5);
        assert_eq!(dreyfus_wagner(&inst).unwrap().cost(), 2);
    }

    #[test]
    fn single_edge_reduction_is_a_lone_terminal() {
        let (inst, cert) = vc_to_steiner(&Graph::path(2)).unwrap();
        assert_eq!(inst.graph.n(), 3);
        let tree = dreyfus_wagner(&inst).unwrap();
        assert_eq!(tree.cost(), 0);
        assert_eq!(cert.expected_smt(1), Some(1));
        assert_eq!(steiner_to_vc_solution(&tree, &cert).unwrap(), vec![0]);
    }

    #[test]
    fn edgeless_source_is_rejected() {
        assert!(vc_to_steiner(&Graph::empty(3)).is_err());
    }

    #[test]
    fn k_values() {
        assert_eq!(densify_k(5, rational(1, 2)).unwrap(), 5);
        assert_eq!(densify_k(1, rational(1, 3)).unwrap(), 1);
        assert_eq!(densify_k(4, rational(1, 3)).unwrap(), 16);
        // 3^(1/2) = 1.73.. -> 2
        assert_eq!(densify_k(3, rational(2, 3)).unwrap(), 2);
        assert_eq!(densify_k(9, rational(2, 3)).unwrap(), 3);
        assert!(densify_k(3, rational(1, 1)).is_err());
        assert!(densify_k(3, rational(0, 1)).is_err());
        assert!(densify_k(1000, rational(1, 10)).is_err());
    }

    #[test]
    fn densify_half() {
        let (src, _) = vc_to_steiner(&Graph::complete(3)).unwrap();
        let (dense, cert) = densify(&src, rational(1, 2)).unwrap();
        let ReductionCertificate::Densify { k, min_terminal_degree, nonterminals_form_clique, .. } = &cert else {
            panic!("wrong certificate")
        };
        assert_eq!(*k, 3);
        assert_eq!(dense.nonterminal_count(), 9);
        assert_eq!(*min_terminal_degree, 6);
        assert!(nonterminals_form_clique);
        let tree = dreyfus_wagner(&dense).unwrap();
        assert_eq!(tree.cost(), 4);
        let back = densified_to_source_solution(&tree, &cert).unwrap();
        assert_eq!(back.cost(), 4);
    }

    #[test]
    fn single_nonterminal_densifies_to_itself() {
        let inst = SteinerInstance::new(Graph::star(3), vec![1, 2, 3]).unwrap();
        let (dense, _) = densify(&inst, rational(1, 3)).unwrap();
        assert_eq!(dense.graph.n(), 4);
        assert_eq!(dense.graph.edge_count(), 3);
    }

    #[test]
    fn two_copies_of_one_vertex_are_merged() {
        let (src, _) = vc_to_steiner(&Graph::complete(3)).unwrap();
        let (dense, cert) = densify(&src, rational(1, 2)).unwrap();
        let ReductionCertificate::Densify { groups, .. } = &cert else {
            panic!("wrong certificate")
        };
        // terminals 0,1,2 are edges 01,02,12; copies of source vertex 0
        // reach terminals 0 and 1, copies of vertex 1 reach terminals 0 and 2.
        let a = groups[0].copies[0];
        let a2 = groups[0].copies[1];
        let c = groups[1].copies[0];
        let edges = vec![(0, a), (1, a2), (a, a2), (a, c), (2, c)];
        let tree = SteinerTreeSolution::new(&dense, edges).unwrap();
        assert_eq!(tree.cost(), 5);
        let back = densified_to_source_solution(&tree, &cert).unwrap();
        assert_eq!(back.cost(), 4);
    }

    #[test]
    fn certificate_round_trips_through_json() {
        let (_, cert) = vc_to_steiner(&Graph::path(4)).unwrap();
        assert_eq!(ReductionCertificate::from_json(&cert.to_json()).unwrap(), cert);
    }
}
