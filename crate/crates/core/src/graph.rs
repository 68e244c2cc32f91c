//! Undirected simple graphs on dense vertex ids, with the degree statistics
//! and the removal/contraction primitives every solver builds on.
//!
//! Graphs are immutable values. Operations that change the vertex set return
//! a new graph together with the id mapping needed to lift solutions back to
//! the original labels.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{Psi, Rational};

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

/// Accumulates edges, silently merging duplicates. Self-loops are rejected.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    adj: Vec<Vec<Vertex>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Adds `{u, v}`. Loops are ignored; returns whether the edge was new.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        assert!(u < self.adj.len() && v < self.adj.len(), "vertex out of range");
        if u == v || self.adj[u].contains(&v) {
            return false;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        true
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn build(mut self) -> Graph {
        let mut twice = 0;
        for list in &mut self.adj {
            list.sort_unstable();
            twice += list.len();
        }
        Graph {
            adj: self.adj,
            edge_count: twice / 2,
        }
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Strict constructor: rejects out-of-range ids, self-loops and
    /// duplicate edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::UnknownVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut twice = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(Error::DuplicateEdge(a, b));
            }
            twice += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: twice / 2,
        })
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge(u, v);
            }
        }
        b.build()
    }

    pub fn path(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for v in 1..n {
            b.add_edge(v - 1, v);
        }
        b.build()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut b = GraphBuilder::new(n);
        for v in 0..n {
            b.add_edge(v, (v + 1) % n);
        }
        b.build()
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let mut b = GraphBuilder::new(leaves + 1);
        for v in 1..=leaves {
            b.add_edge(0, v);
        }
        b.build()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub(crate) fn membership(&self, set: &[Vertex]) -> Result<Vec<bool>> {
        let mut mark = vec![false; self.n()];
        for &v in set {
            self.check_vertex(v)?;
            mark[v] = true;
        }
        Ok(mark)
    }

    pub fn density_profile(&self) -> DensityProfile {
        DensityProfile::of(self)
    }

    /// True when every edge has an endpoint in `cover`.
    pub fn is_vertex_cover(&self, cover: &[Vertex]) -> bool {
        let Ok(mark) = self.membership(cover) else {
            return false;
        };
        self.edges().all(|(u, v)| mark[u] || mark[v])
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.connected_components().len() == 1
    }

    /// True when `set` is nonempty and induces a connected subgraph.
    pub fn induces_connected(&self, set: &[Vertex]) -> bool {
        let Ok(mark) = self.membership(set) else {
            return false;
        };
        let Some(&start) = set.first() else {
            return false;
        };
        let total = mark.iter().filter(|&&m| m).count();
        let mut seen = vec![false; self.n()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if mark[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == total
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out: Vec<Vec<Vertex>> = Vec::new();
        for s in self.vertices() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subgraph on `V \ removed`. Surviving vertices keep their
    /// relative order.
    pub fn remove_vertices(&self, removed: &[Vertex]) -> Result<Subgraph> {
        let mark = self.membership(removed)?;
        let keep: Vec<Vertex> = self.vertices().filter(|&v| !mark[v]).collect();
        Ok(self.induced_sorted(keep))
    }

    /// Induced subgraph on `keep` (any order, duplicates ignored).
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Result<Subgraph> {
        let mark = self.membership(keep)?;
        let keep: Vec<Vertex> = self.vertices().filter(|&v| mark[v]).collect();
        Ok(self.induced_sorted(keep))
    }

    fn induced_sorted(&self, keep: Vec<Vertex>) -> Subgraph {
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut twice = 0;
        let adj: Vec<Vec<Vertex>> = keep
            .iter()
            .map(|&v| {
                let list: Vec<Vertex> = self
                    .neighbors(v)
                    .iter()
                    .filter_map(|&w| (new_id[w] != usize::MAX).then_some(new_id[w]))
                    .collect();
                twice += list.len();
                list
            })
            .collect();
        Subgraph {
            graph: Graph {
                adj,
                edge_count: twice / 2,
            },
            original: keep,
        }
    }

    /// Contracts each part into a single super-vertex. Vertices outside every
    /// part become singleton super-vertices. Super-vertex ids follow the order
    /// of each super-vertex's smallest member. Parallel edges merge and loops
    /// vanish.
    pub fn contract_sets(&self, parts: &[Vec<Vertex>]) -> Result<(Graph, ContractionMap)> {
        let mut part_of = vec![usize::MAX; self.n()];
        for (p, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::input(format!("contraction part {p} is empty")));
            }
            for &v in part {
                self.check_vertex(v)?;
                if part_of[v] != usize::MAX {
                    return Err(Error::OverlappingParts(v));
                }
                part_of[v] = p;
            }
        }
        let mut original_to_super = vec![usize::MAX; self.n()];
        let mut part_super = vec![usize::MAX; parts.len()];
        let mut super_members: Vec<Vec<Vertex>> = Vec::new();
        for v in self.vertices() {
            let p = part_of[v];
            let id = if p == usize::MAX {
                super_members.push(Vec::new());
                super_members.len() - 1
            } else {
                if part_super[p] == usize::MAX {
                    part_super[p] = super_members.len();
                    super_members.push(Vec::new());
                }
                part_super[p]
            };
            original_to_super[v] = id;
            super_members[id].push(v);
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); super_members.len()];
        for (u, v) in self.edges() {
            let (a, c) = (original_to_super[u], original_to_super[v]);
            if a != c {
                adj[a].push(c);
                adj[c].push(a);
            }
        }
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok((
            Graph {
                adj,
                edge_count: twice / 2,
            },
            ContractionMap {
                original_to_super,
                super_members,
            },
        ))
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&CanonicalGraph::from(self)).expect("graph serializes")
    }

    pub fn from_canonical_json(text: &str) -> Result<Graph> {
        let c: CanonicalGraph =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        Graph::try_from(c)
    }
}

/// The result of removing vertices: the smaller graph and, for each of its
/// vertices, the id it had in the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub original: Vec<Vertex>,
}

impl Subgraph {
    pub fn lift(&self, vertices: &[Vertex]) -> Vec<Vertex> {
        vertices.iter().map(|&v| self.original[v]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionMap {
    pub original_to_super: Vec<Vertex>,
    pub super_members: Vec<Vec<Vertex>>,
}

impl ContractionMap {
    pub fn members(&self, s: Vertex) -> &[Vertex] {
        &self.super_members[s]
    }

    pub fn super_of(&self, v: Vertex) -> Vertex {
        self.original_to_super[v]
    }
}

/// `{"n": .., "edges": [[u, v], ..]}` with `u < v`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalGraph {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl From<&Graph> for CanonicalGraph {
    fn from(g: &Graph) -> Self {
        CanonicalGraph {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<CanonicalGraph> for Graph {
    type Error = Error;

    fn try_from(c: CanonicalGraph) -> Result<Graph> {
        Graph::from_edges(c.n, c.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CanonicalGraph::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = CanonicalGraph::deserialize(d)?;
        Graph::try_from(c).map_err(serde::de::Error::custom)
    }
}

/// Degree statistics of a graph. ψ values are exact: `psi_everywhere = n/δ_min`
/// and `psi_average = n/d̄`, infinite when the denominator vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityProfile {
    pub n: usize,
    pub edge_count: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub avg_degree: Rational,
    pub max_degree: usize,
    pub min_degree: usize,
    pub psi_everywhere: Psi,
    pub psi_average: Psi,
}

fn serialize_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(crate::ratio::to_f64(r))
}

impl DensityProfile {
    pub fn of(g: &Graph) -> Self {
        let n = g.n() as u64;
        let m = g.edge_count() as u64;
        let avg_degree = if n == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(2 * m, n)
        };
        DensityProfile {
            n: g.n(),
            edge_count: g.edge_count(),
            avg_degree,
            max_degree: g.max_degree(),
            min_degree: g.min_degree(),
            psi_everywhere: Psi::quotient(n, g.min_degree() as u64),
            // n / (2m/n)
            psi_average: Psi::quotient(n * n, 2 * m),
        }
    }
}
