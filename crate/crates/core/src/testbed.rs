//! Seeded generators of ψ-dense instances and exhaustive oracles.
//!
//! Every generator validates its output with the same density functions the
//! solvers use and reseeds (deterministically, at most 32 times) on failure.
//! Oracles refuse inputs above their size guards instead of approximating.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex};
use crate::ratio::{self, Psi, Rational};
use crate::setcover::{self, SetCoverInstance};
use crate::steiner::{self, SteinerInstance};

const RETRIES: u64 = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenSpec {
    pub n: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub psi: Rational,
    pub seed: u64,
    /// Planted cover fraction for graphs.
    #[serde(serialize_with = "ser_ratio")]
    pub rho: Rational,
    /// Number of sets for set cover.
    pub sets: usize,
    /// Number of terminals for Steiner tree.
    pub terminals: usize,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio::to_f64(r))
}

impl GenSpec {
    /// Defaults: `rho = 1/2`, `sets = n/2`, `terminals = n/2`.
    pub fn new(n: usize, psi: Rational, seed: u64) -> Self {
        GenSpec {
            n,
            psi,
            seed,
            rho: Rational::new(1, 2),
            sets: (n / 2).max(1),
            terminals: (n / 2).max(1),
        }
    }

    pub fn with_rho(mut self, rho: Rational) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_sets(mut self, sets: usize) -> Self {
        self.sets = sets;
        self
    }

    pub fn with_terminals(mut self, terminals: usize) -> Self {
        self.terminals = terminals;
        self
    }

    fn check_psi(&self) -> Result<()> {
        if self.psi < Rational::from_integer(1) {
            return Err(Error::input("psi must be at least 1"));
        }
        Ok(())
    }

    fn rng(&self, attempt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

fn ceil_div(num: Rational) -> usize {
    num.ceil().to_integer() as usize
}

fn exhausted(what: &str) -> Error {
    Error::input(format!("{what}: no valid instance after {RETRIES} reseeds"))
}

/// A connected graph with minimum degree `ceil(n/ψ)` and a planted vertex
/// cover `C` of size `ceil(ρn)`. Every edge touches `C`; endpoints are drawn
/// lowest-degree-first so the maximum degree stays near `n/2` when possible.
pub fn gen_subdense_graph(spec: &GenSpec) -> Result<(Graph, Vec<Vertex>)> {
    spec.check_psi()?;
    let n = spec.n;
    if n < 2 {
        return Err(Error::input("graph generator needs n >= 2"));
    }
    if spec.rho > Rational::from_integer(1) {
        return Err(Error::input("rho must be at most 1"));
    }
    let c = ceil_div(spec.rho * n as u64);
    let need = ceil_div(Rational::from_integer(n as u64) / spec.psi);
    if Rational::from_integer(c as u64) * spec.psi < Rational::from_integer(n as u64) {
        return Err(Error::input(format!(
            "planted cover too small: rho*n = {c} must be at least n/psi = {}",
            Rational::from_integer(n as u64) / spec.psi
        )));
    }
    if need >= n {
        return Err(Error::input("minimum degree n/psi must stay below n"));
    }
    for attempt in 0..RETRIES {
        let mut rng = spec.rng(attempt);
        let (g, cover) = planted_graph(n, c, need, &mut rng);
        if g.min_degree() >= need && g.is_vertex_cover(&cover) && g.is_connected() {
            debug_assert!(g.density_profile().psi_everywhere <= Psi::Finite(spec.psi));
            return Ok((g, cover));
        }
    }
    Err(exhausted("subdense graph"))
}

fn planted_graph(n: usize, c: usize, need: usize, rng: &mut ChaCha8Rng) -> (Graph, Vec<Vertex>) {
    let mut ids: Vec<Vertex> = (0..n).collect();
    ids.shuffle(rng);
    let mut cover: Vec<Vertex> = ids[..c].to_vec();
    cover.sort_unstable();
    let in_cover = {
        let mut m = vec![false; n];
        for &v in &cover {
            m[v] = true;
        }
        m
    };
    let mut b = GraphBuilder::new(n);
    let pick_lowest = |b: &GraphBuilder, v: Vertex, pool: &[Vertex], rng: &mut ChaCha8Rng| -> Option<Vertex> {
        let mut best: Vec<Vertex> = Vec::new();
        let mut best_deg = usize::MAX;
        for &w in pool {
            if w == v || b.has_edge(v, w) {
                continue;
            }
            let d = b.degree(w);
            if d < best_deg {
                best_deg = d;
                best.clear();
            }
            if d == best_deg {
                best.push(w);
            }
        }
        best.choose(rng).copied()
    };
    for &v in ids[c..].iter() {
        for _ in 0..need {
            if let Some(w) = pick_lowest(&b, v, &cover, rng) {
                b.add_edge(v, w);
            }
        }
    }
    let everyone: Vec<Vertex> = (0..n).collect();
    for &v in &cover {
        while b.degree(v) < need {
            match pick_lowest(&b, v, &everyone, rng) {
                Some(w) => {
                    b.add_edge(v, w);
                }
                None => break,
            }
        }
    }
    // Join components through cover vertices.
    let g = b.build();
    let comps = g.connected_components();
    if comps.len() > 1 {
        let mut b = GraphBuilder::new(n);
        for (u, v) in g.edges() {
            b.add_edge(u, v);
        }
        let anchor = |comp: &[Vertex]| comp.iter().copied().find(|&v| in_cover[v]).unwrap_or(comp[0]);
        let root = anchor(&comps[0]);
        for comp in &comps[1..] {
            b.add_edge(root, anchor(comp));
        }
        return (b.build(), cover);
    }
    (g, cover)
}

/// Set cover with `spec.sets` sets over `spec.n` elements; each element is
/// placed in `ceil(m/ψ)` distinct random sets.
pub fn gen_dense_setcover(spec: &GenSpec) -> Result<SetCoverInstance> {
    spec.check_psi()?;
    let (n, m) = (spec.n, spec.sets);
    if n == 0 || m == 0 {
        return Err(Error::input("set cover generator needs n >= 1 and m >= 1"));
    }
    if Rational::from_integer(m as u64) < spec.psi {
        return Err(Error::input("need m >= psi"));
    }
    let per = ceil_div(Rational::from_integer(m as u64) / spec.psi).max(1);
    for attempt in 0..RETRIES {
        let mut rng = spec.rng(attempt);
        let mut sets = vec![Vec::new(); m];
        let indices: Vec<usize> = (0..m).collect();
        for x in 0..n {
            for &i in indices.choose_multiple(&mut rng, per) {
                sets[i].push(x);
            }
        }
        let inst = SetCoverInstance::new(n, sets)?;
        if setcover::density_psi_sc(&inst).is_ok_and(|p| p <= spec.psi) {
            return Ok(inst);
        }
    }
    Err(exhausted("set cover"))
}

/// Steiner instance on `spec.n` vertices with `spec.terminals` terminals.
/// Each terminal is joined to `ceil(|V∖S|/ψ)` random nonterminals and the
/// nonterminals are linked by a random tree plus a few chords.
pub fn gen_dense_steiner(spec: &GenSpec) -> Result<SteinerInstance> {
    spec.check_psi()?;
    let (n, t) = (spec.n, spec.terminals);
    if t == 0 || t >= n {
        return Err(Error::input("need 1 <= terminals < n"));
    }
    let free = n - t;
    if Rational::from_integer(free as u64) < spec.psi {
        return Err(Error::input("need |V \\ S| >= psi"));
    }
    let per = ceil_div(Rational::from_integer(free as u64) / spec.psi);
    for attempt in 0..RETRIES {
        let mut rng = spec.rng(attempt);
        let mut ids: Vec<Vertex> = (0..n).collect();
        ids.shuffle(&mut rng);
        let (terms, nonterms) = ids.split_at(t);
        let mut b = GraphBuilder::new(n);
        for i in 1..free {
            let j = rng.gen_range(0..i);
            b.add_edge(nonterms[i], nonterms[j]);
        }
        for _ in 0..free / 4 {
            let (x, y) = (rng.gen_range(0..free), rng.gen_range(0..free));
            b.add_edge(nonterms[x], nonterms[y]);
        }
        for &s in terms {
            for &x in nonterms.choose_multiple(&mut rng, per) {
                b.add_edge(s, x);
            }
        }
        let Ok(inst) = SteinerInstance::new(b.build(), terms.to_vec()) else {
            continue;
        };
        if steiner::density_psi_st(&inst) <= Psi::Finite(spec.psi) {
            return Ok(inst);
        }
    }
    Err(exhausted("Steiner"))
}

/// Largest graph accepted by [`brute_vc`].
pub const BRUTE_VC_CAP: usize = 128;
/// Largest graph accepted by the connected cover oracles.
pub const BRUTE_CVC_CAP: usize = 24;
/// Largest family accepted by [`brute_sc`].
pub const BRUTE_SC_CAP: usize = 20;
/// Largest nonterminal count accepted by [`brute_steiner`].
pub const BRUTE_STEINER_FREE_CAP: usize = 20;

fn refuse(what: &'static str, got: usize, cap: usize) -> Error {
    Error::CapExceeded { what, got, cap }
}

/// Minimum vertex cover size as `n - α(G)`, with the maximum independent
/// set found as a maximum clique of the complement by branch and bound with
/// greedy coloring bounds.
pub fn brute_vc(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_VC_CAP {
        return Err(refuse("vertex count for the vertex cover oracle", n, BRUTE_VC_CAP));
    }
    let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let comp: Vec<u128> = (0..n)
        .map(|v| {
            let mut row = full & !(1u128 << v);
            for &w in g.neighbors(v) {
                row &= !(1u128 << w);
            }
            row
        })
        .collect();
    let mut best = 0;
    if n > 0 {
        max_clique(&comp, full, 0, &mut best);
    }
    Ok(n - best)
}

fn max_clique(adj: &[u128], candidates: u128, size: usize, best: &mut usize) {
    let (order, colors) = color_sort(adj, candidates);
    let mut p = candidates;
    for i in (0..order.len()).rev() {
        if size + colors[i] <= *best {
            return;
        }
        let v = order[i];
        let next = p & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            max_clique(adj, next, size + 1, best);
        }
        p &= !(1u128 << v);
    }
}

fn color_sort(adj: &[u128], candidates: u128) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(candidates.count_ones() as usize);
    let mut colors = Vec::with_capacity(order.capacity());
    let mut uncolored = candidates;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut q = uncolored;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !(1u128 << v) & !adj[v];
            uncolored &= !(1u128 << v);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

/// Minimum connected vertex cover size by subset enumeration.
pub fn brute_cvc(g: &Graph) -> Result<usize> {
    brute_cvc_containing(g, &[])
}

/// Minimum size of a connected vertex cover containing `required`.
pub fn brute_cvc_containing(g: &Graph, required: &[Vertex]) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_CVC_CAP {
        return Err(refuse("vertex count for the connected cover oracle", n, BRUTE_CVC_CAP));
    }
    let mut must = 0u32;
    for &v in required {
        g.check_vertex(v)?;
        must |= 1 << v;
    }
    let nbr: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    let mut best: Option<u32> = None;
    let total: u64 = 1 << n;
    for mask in 0..total {
        let mask = mask as u32;
        if mask & must != must {
            continue;
        }
        let size = mask.count_ones();
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let covers = (0..n).all(|v| mask >> v & 1 == 1 || nbr[v] & !mask == 0);
        if covers && bits_connected(&nbr, mask) {
            best = Some(size);
        }
    }
    best.map(|b| b as usize)
        .ok_or_else(|| Error::input("graph has no connected vertex cover"))
}

fn bits_connected(nbr: &[u32], mask: u32) -> bool {
    if mask == 0 {
        return true;
    }
    let mut seen = 1u32 << mask.trailing_zeros();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = nbr[v] & mask & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == mask
}

/// Minimum number of sets covering the ground set, by trying every family.
pub fn brute_sc(inst: &SetCoverInstance) -> Result<usize> {
    let m = inst.set_count();
    if m > BRUTE_SC_CAP {
        return Err(refuse("set count for the set cover oracle", m, BRUTE_SC_CAP));
    }
    if !inst.is_feasible() {
        return Err(Error::Infeasible(
            inst.occurrence().iter().position(|&c| c == 0).unwrap_or(0),
        ));
    }
    let words = inst.ground_size().div_ceil(64).max(1);
    let bits: Vec<Vec<u64>> = inst
        .sets()
        .iter()
        .map(|s| {
            let mut w = vec![0u64; words];
            for &x in s {
                w[x / 64] |= 1 << (x % 64);
            }
            w
        })
        .collect();
    let mut target = vec![u64::MAX; words];
    let rem = inst.ground_size() % 64;
    if rem != 0 {
        target[words - 1] = (1u64 << rem) - 1;
    }
    if inst.ground_size() == 0 {
        return Ok(0);
    }
    let mut best = usize::MAX;
    let mut union = vec![0u64; words];
    for mask in 0u32..(1u32 << m) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        union.fill(0);
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for (u, b) in union.iter_mut().zip(&bits[i]) {
                *u |= b;
            }
        }
        if union == target {
            best = size;
        }
    }
    Ok(best)
}

/// Minimum Steiner tree cost: the smallest superset of the terminals that
/// induces a connected subgraph, minus one.
pub fn brute_steiner(inst: &SteinerInstance) -> Result<usize> {
    let g = &inst.graph;
    let term = inst.is_terminal_mask();
    let free: Vec<Vertex> = g.vertices().filter(|&v| !term[v]).collect();
    if free.len() > BRUTE_STEINER_FREE_CAP {
        return Err(refuse(
            "nonterminal count for the Steiner oracle",
            free.len(),
            BRUTE_STEINER_FREE_CAP,
        ));
    }
    let mut best = usize::MAX;
    let mut chosen: Vec<Vertex> = Vec::with_capacity(g.n());
    for mask in 0u32..(1u32 << free.len()) {
        let size = inst.terminals.len() + mask.count_ones() as usize;
        if size > best {
            continue;
        }
        chosen.clear();
        chosen.extend_from_slice(&inst.terminals);
        chosen.extend((0..free.len()).filter(|&i| mask >> i & 1 == 1).map(|i| free[i]));
        chosen.sort_unstable();
        if g.induces_connected(&chosen) {
            best = size;
        }
    }
    Ok(best - 1)
}

/// All pairwise-distinct random edges of a `G(n, p)` graph made connected by
/// a random spanning tree; a convenience for tests and the benchmark.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        b.add_edge(order[i], order[j]);
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

/// Random nonempty subset of `0..n` of size at most `max`.
pub fn random_subset(n: usize, max: usize, rng: &mut impl Rng) -> Vec<Vertex> {
    let k = rng.gen_range(1..=max.min(n).max(1));
    let mut ids: Vec<Vertex> = (0..n).collect();
    ids.shuffle(rng);
    let mut out: Vec<Vertex> = ids[..k].to_vec();
    out.sort_unstable();
    out
}

/// Every connected graph on `n` vertices up to isomorphism (`n <= 6`).
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "isomorphism classes enumerated only up to 6 vertices");
    let pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    let mut seen: HashSet<u32> = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let edges: Vec<(Vertex, Vertex)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let canon = perms
            .iter()
            .map(|p| {
                edges.iter().fold(0u32, |acc, &(u, v)| {
                    let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                    acc | 1 << pair_index(n, a, b)
                })
            })
            .min()
            .unwrap_or(0);
        if !seen.insert(canon) {
            continue;
        }
        let g = Graph::from_edges(n, edges).expect("distinct pairs");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}
