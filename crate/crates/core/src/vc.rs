//! Minimum Vertex Cover approximation on subdense graphs.
//!
//! Three layers:
//!
//! * [`mm_two_approx`]: both endpoints of a greedy maximal matching.
//! * [`build_cover_from_subset`]: given a vertex set `W` believed to lie
//!   mostly inside an optimal cover, take `W` plus a 2-approximation of
//!   `G - W`, and keep it only if it beats the plain 2-approximation.
//! * [`ii_modified`]: recursive random sampling over the high-degree set
//!   `H = {v : d(v) >= r(G)}` with `r(G) = n(1 - sqrt(1 - d̄/n))`. At each
//!   internal node the candidate removal sets are `H` and `N(u)` for `s`
//!   sampled `u ∈ H`; the recursion stops at depth `t` and finishes with
//!   the 2-approximation. The sample size follows
//!   `s = (ln ln n - ln ln ln ln n)^2`, much smaller than the classical
//!   `2 (log n)^2`.
//!
//! With `Δ <= n/2` the returned cover is within `2 / (1 + d̄/(2Δ))` of optimal
//! with constant probability, so callers run several seeds and keep the best.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DensityProfile, Graph, Vertex};
use crate::ratio::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCoverSolution {
    pub cover: Vec<Vertex>,
    #[serde(serialize_with = "ratio::serialize_opt_ratio")]
    pub certified_ratio_bound: Option<Rational>,
    pub seed: Option<u64>,
}

impl VertexCoverSolution {
    /// Validates that `cover` touches every edge of `g`. The cover is stored
    /// sorted and deduplicated.
    pub fn new(
        g: &Graph,
        mut cover: Vec<Vertex>,
        certified_ratio_bound: Option<Rational>,
        seed: Option<u64>,
    ) -> Result<Self> {
        cover.sort_unstable();
        cover.dedup();
        if !g.is_vertex_cover(&cover) {
            return Err(Error::ContractViolation(
                "vertex set does not cover every edge".into(),
            ));
        }
        Ok(VertexCoverSolution {
            cover,
            certified_ratio_bound,
            seed,
        })
    }

    pub fn size(&self) -> usize {
        self.cover.len()
    }
}

/// Greedy maximal matching scanning edges in lexicographic order.
pub fn maximal_matching(g: &Graph) -> Vec<(Vertex, Vertex)> {
    let mut matched = vec![false; g.n()];
    let mut m = Vec::new();
    for (u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            m.push((u, v));
        }
    }
    m
}

fn matching_cover(g: &Graph) -> Vec<Vertex> {
    let mut cover: Vec<Vertex> = maximal_matching(g)
        .into_iter()
        .flat_map(|(u, v)| [u, v])
        .collect();
    cover.sort_unstable();
    cover
}

pub fn mm_two_approx(g: &Graph) -> VertexCoverSolution {
    VertexCoverSolution {
        cover: matching_cover(g),
        certified_ratio_bound: Some(Rational::from_integer(2)),
        seed: None,
    }
}

/// `r(G) = n (1 - sqrt(1 - d̄/n))` as a float. Membership in the high-degree
/// set is decided by [`is_high_degree`], not by comparing against this value.
pub fn threshold_r(g: &Graph) -> f64 {
    let n = g.n() as f64;
    if g.n() == 0 {
        return 0.0;
    }
    let avg = 2.0 * g.edge_count() as f64 / n;
    n * (1.0 - (1.0 - avg / n).sqrt())
}

/// Exact form of `d >= r(G)`: `(n - d)^2 <= n^2 - 2m`.
pub fn is_high_degree(n: usize, edge_count: usize, degree: usize) -> bool {
    let n = n as u128;
    let gap = n - degree as u128;
    gap * gap <= n * n - 2 * edge_count as u128
}

pub fn high_degree_set(g: &Graph) -> Vec<Vertex> {
    g.vertices()
        .filter(|&v| is_high_degree(g.n(), g.edge_count(), g.degree(v)))
        .collect()
}

/// Normalized lower bound on the optimal cover size for graphs with the same
/// `n`, `d̄` and `Δ`. Returns 0 for edgeless profiles.
pub fn gamma(p: &DensityProfile) -> f64 {
    if p.edge_count == 0 {
        return 0.0;
    }
    let n = p.n as f64;
    let delta = p.max_degree as f64;
    let avg = ratio::to_f64(&p.avg_degree);
    if gamma_uses_degree_ratio(p) {
        avg / (2.0 * delta)
    } else {
        let s = n + delta;
        (s - (s * s - 4.0 * avg * n).sqrt()) / (2.0 * n)
    }
}

/// Whether `|E| <= Δ(n - Δ)`, the branch where `γ = d̄/(2Δ)`.
pub fn gamma_uses_degree_ratio(p: &DensityProfile) -> bool {
    p.edge_count as u128 <= p.max_degree as u128 * (p.n - p.max_degree) as u128
}

/// `2 / (1 + d̄/(2Δ)) = 2nΔ / (nΔ + m)`, defined when the graph has an edge
/// and `Δ <= n/2`.
pub fn subdense_ratio_bound(p: &DensityProfile) -> Option<Rational> {
    if p.edge_count == 0 || 2 * p.max_degree > p.n {
        return None;
    }
    let nd = (p.n * p.max_degree) as u64;
    Some(Rational::new(2 * nd, nd + p.edge_count as u64))
}

fn cmp_covers(a: &[Vertex], b: &[Vertex]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// `W ∪ 2approx(G - W)` unless the plain 2-approximation is strictly smaller.
pub fn build_cover_from_subset(g: &Graph, w: &[Vertex]) -> Result<VertexCoverSolution> {
    let sub = g.remove_vertices(w)?;
    let mut with_w: Vec<Vertex> = w.to_vec();
    with_w.sort_unstable();
    with_w.dedup();
    with_w.extend(sub.lift(&matching_cover(&sub.graph)));
    with_w.sort_unstable();
    let plain = matching_cover(g);
    let cover = if plain.len() < with_w.len() {
        plain
    } else {
        with_w
    };
    VertexCoverSolution::new(g, cover, Some(Rational::from_integer(2)), None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IIParams {
    pub sample_size: usize,
    pub depth: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub success_exponent: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub epsilon: Rational,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(ratio::to_f64(r))
}

impl IIParams {
    pub fn new(sample_size: usize, depth: usize, success_exponent: Rational, epsilon: Rational) -> Result<Self> {
        if sample_size == 0 || depth == 0 {
            return Err(Error::input("sample size and depth must be at least 1"));
        }
        Ok(IIParams {
            sample_size,
            depth,
            success_exponent,
            epsilon,
        })
    }

    /// `(s+1)^t`, saturating.
    pub fn tree_bound(&self) -> u128 {
        (self.sample_size as u128 + 1)
            .checked_pow(self.depth as u32)
            .unwrap_or(u128::MAX)
    }
}

/// What [`ii_params`] recommends for a graph of a given size.
#[derive(Debug, Clone, PartialEq)]
pub enum IIPlan {
    Sample(IIParams),
    /// Iterated logarithms are undefined below `n = 16`; solve exactly.
    Exact,
}

/// Smallest `n` for which `ln ln ln ln n` is defined.
pub const MIN_SAMPLING_N: usize = 16;

/// Chooses `s` and `t`: `s = max(1, round((ln ln n - ln ln ln ln n)^2))`,
/// `t = min(ceil(a e^{sqrt s}), ceil((4n/Δ) ln(1/ε)))`.
pub fn ii_params(n: usize, max_degree: usize, a: Rational, epsilon: Rational) -> Result<IIPlan> {
    if n < MIN_SAMPLING_N {
        return Ok(IIPlan::Exact);
    }
    if max_degree == 0 || max_degree >= n {
        return Err(Error::input(format!(
            "max degree {max_degree} outside 1..={}",
            n - 1
        )));
    }
    if a == Rational::from_integer(0) {
        return Err(Error::input("success exponent a must be positive"));
    }
    if epsilon == Rational::from_integer(0) || epsilon >= Rational::from_integer(1) {
        return Err(Error::input("epsilon must lie in (0, 1)"));
    }
    let ln2 = (n as f64).ln().ln();
    let ln4 = (n as f64).ln().ln().ln().ln();
    let s = ((ln2 - ln4).powi(2).round() as usize).max(1);
    let budget = (ratio::to_f64(&a) * (s as f64).sqrt().exp()).ceil();
    let needed = (4.0 * n as f64 / max_degree as f64 * (1.0 / ratio::to_f64(&epsilon)).ln()).ceil();
    let t = budget.min(needed).max(1.0) as usize;
    Ok(IIPlan::Sample(IIParams::new(s, t, a, epsilon)?))
}

/// A finished sampling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IIOutcome {
    pub solution: VertexCoverSolution,
    /// Union of the removal sets along the path that produced the cover.
    pub removed: Vec<Vertex>,
    pub nodes_explored: u64,
}

/// A solved subproblem, in the vertex ids of the input graph.
struct Solved {
    cover: Vec<Vertex>,
    removed: Vec<Vertex>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Surviving vertices as a bitset, plus the recursion level.
type State = (usize, Vec<u64>);

fn bits(words: &[u64]) -> impl Iterator<Item = Vertex> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + b
            })
        })
    })
}

fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// The recursion tree with identical subproblems merged. A subproblem is
/// determined by the surviving vertex set and the level, and its random draws
/// are keyed by that state, so removing `N(a)` then `N(b)` and the reverse
/// order share one node. Subgraphs are never built: everything is read off
/// the input adjacency masked by the surviving set.
struct Explorer<'a> {
    params: &'a IIParams,
    seed: u64,
    adj: Vec<Vec<u64>>,
    memo: HashMap<State, Rc<Solved>>,
}

impl<'a> Explorer<'a> {
    fn new(g: &Graph, params: &'a IIParams, seed: u64) -> Self {
        let words = g.n().div_ceil(64);
        let adj = g
            .vertices()
            .map(|v| {
                let mut row = vec![0u64; words];
                for &w in g.neighbors(v) {
                    row[w / 64] |= 1 << (w % 64);
                }
                row
            })
            .collect();
        Explorer {
            params,
            seed,
            adj,
            memo: HashMap::new(),
        }
    }

    fn state_key(&self, state: &State) -> u64 {
        let mut h = splitmix64(self.seed ^ state.0 as u64);
        for &word in &state.1 {
            h = splitmix64(h ^ word);
        }
        h
    }

    fn hood(&self, u: Vertex, alive: &[u64]) -> Vec<Vertex> {
        let masked: Vec<u64> = self.adj[u].iter().zip(alive).map(|(a, b)| a & b).collect();
        bits(&masked).collect()
    }

    /// Same cover as [`matching_cover`] on the induced subgraph: edges are
    /// scanned in lexicographic order.
    fn leaf_cover(&self, alive: &[u64]) -> Vec<Vertex> {
        let mut free = alive.to_vec();
        let mut cover = Vec::new();
        for u in bits(alive) {
            if free[u / 64] >> (u % 64) & 1 == 0 {
                continue;
            }
            let partner = self.adj[u]
                .iter()
                .zip(&free)
                .enumerate()
                .find_map(|(i, (a, f))| {
                    let mut w = a & f;
                    if i == u / 64 {
                        w &= !(u64::MAX >> (63 - u % 64));
                    } else if i < u / 64 {
                        w = 0;
                    }
                    (w != 0).then(|| i * 64 + w.trailing_zeros() as usize)
                });
            if let Some(v) = partner {
                free[u / 64] &= !(1 << (u % 64));
                free[v / 64] &= !(1 << (v % 64));
                cover.push(u);
                cover.push(v);
            }
        }
        cover.sort_unstable();
        cover
    }

    fn solve(&mut self, state: State) -> Rc<Solved> {
        if let Some(hit) = self.memo.get(&state) {
            return Rc::clone(hit);
        }
        let alive = &state.1;
        let degrees: Vec<(Vertex, usize)> = bits(alive).map(|v| (v, count_and(&self.adj[v], alive))).collect();
        let twice: usize = degrees.iter().map(|&(_, d)| d).sum();
        let high: Vec<Vertex> = if state.0 >= self.params.depth || twice == 0 {
            Vec::new()
        } else {
            degrees
                .iter()
                .filter(|&&(_, d)| is_high_degree(degrees.len(), twice / 2, d))
                .map(|&(v, _)| v)
                .collect()
        };
        let solved = if high.is_empty() {
            Solved {
                cover: self.leaf_cover(alive),
                removed: Vec::new(),
            }
        } else {
            // Draws are independent, with replacement.
            let mut rng = ChaCha8Rng::seed_from_u64(self.state_key(&state));
            let mut candidates: Vec<Vec<Vertex>> = Vec::with_capacity(self.params.sample_size + 1);
            candidates.push(high.clone());
            for _ in 0..self.params.sample_size {
                let u = high[rng.gen_range(0..high.len())];
                let hood = self.hood(u, alive);
                if !candidates.contains(&hood) {
                    candidates.push(hood);
                }
            }
            let mut best: Option<Solved> = None;
            for removal in candidates {
                let mut words = alive.clone();
                for &v in &removal {
                    words[v / 64] &= !(1u64 << (v % 64));
                }
                let child = self.solve((state.0 + 1, words));
                if best
                    .as_ref()
                    .is_some_and(|b| removal.len() + child.cover.len() > b.cover.len())
                {
                    continue;
                }
                let mut cover = removal.clone();
                cover.extend_from_slice(&child.cover);
                cover.sort_unstable();
                let better = match &best {
                    None => true,
                    Some(b) => cmp_covers(&cover, &b.cover) == Ordering::Less,
                };
                if better {
                    let mut removed = removal;
                    removed.extend_from_slice(&child.removed);
                    removed.sort_unstable();
                    best = Some(Solved { cover, removed });
                }
            }
            best.expect("at least one candidate")
        };
        let solved = Rc::new(solved);
        self.memo.insert(state, Rc::clone(&solved));
        solved
    }
}

/// Runs the sampling recursion from level 1 and keeps the result only if it
/// is no larger than the plain 2-approximation.
pub fn ii_modified(g: &Graph, params: &IIParams, seed: u64) -> IIOutcome {
    let mut explorer = Explorer::new(g, params, splitmix64(seed));
    let mut all = vec![0u64; g.n().div_ceil(64)];
    for v in g.vertices() {
        all[v / 64] |= 1 << (v % 64);
    }
    let root = explorer.solve((1, all));
    let nodes = explorer.memo.len() as u64;
    debug_assert!(nodes as u128 <= params.tree_bound());
    let root = Rc::try_unwrap(root).unwrap_or_else(|rc| Solved {
        cover: rc.cover.clone(),
        removed: rc.removed.clone(),
    });
    let plain = matching_cover(g);
    let (cover, removed) = if plain.len() < root.cover.len() {
        (plain, Vec::new())
    } else {
        (root.cover, root.removed)
    };
    let bound = subdense_ratio_bound(&g.density_profile()).unwrap_or(Rational::from_integer(2));
    let solution = VertexCoverSolution::new(g, cover, Some(bound), Some(seed))
        .expect("sampling recursion returns a vertex cover");
    IIOutcome {
        solution,
        removed,
        nodes_explored: nodes,
    }
}

/// The removal set `W` of the winning path, used to seed connected covers.
pub fn ii_extract_w(g: &Graph, params: &IIParams, seed: u64) -> Vec<Vertex> {
    ii_modified(g, params, seed).removed
}

/// Exact minimum vertex cover by enumerating subsets in increasing size.
/// Intended for the tiny graphs that [`ii_params`] routes away from sampling.
pub fn exact_small_vc(g: &Graph) -> Result<VertexCoverSolution> {
    const CAP: usize = 24;
    if g.n() > CAP {
        return Err(Error::CapExceeded {
            what: "vertex count for exact enumeration",
            got: g.n(),
            cap: CAP,
        });
    }
    let n = g.n();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let mut best: Option<u32> = None;
    for mask in 0u32..(1u32 << n) {
        if best.is_some_and(|b| b.count_ones() <= mask.count_ones()) {
            continue;
        }
        if edges
            .iter()
            .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
        {
            let better = match best {
                None => true,
                Some(b) => mask.count_ones() < b.count_ones(),
            };
            if better {
                best = Some(mask);
            }
        }
    }
    let mask = best.unwrap_or(0);
    let cover = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    VertexCoverSolution::new(g, cover, Some(Rational::from_integer(1)), None)
}

/// Best of `trials` seeds `seed, seed+1, ..`; routes small graphs to the exact
/// solver.
#[derive(Debug, Clone, Serialize)]
pub struct VcRun {
    pub solution: VertexCoverSolution,
    pub best_seed: Option<u64>,
    pub trials: usize,
    pub nodes_explored: u64,
    pub params: Option<IIParams>,
    pub removed: Vec<Vertex>,
}

pub fn solve_vc(g: &Graph, seed: u64, trials: usize, a: Rational, epsilon: Rational) -> Result<VcRun> {
    if g.edge_count() == 0 {
        return Ok(VcRun {
            solution: VertexCoverSolution::new(g, Vec::new(), Some(Rational::from_integer(1)), None)?,
            best_seed: None,
            trials: 0,
            nodes_explored: 0,
            params: None,
            removed: Vec::new(),
        });
    }
    match ii_params(g.n(), g.max_degree(), a, epsilon)? {
        IIPlan::Exact => Ok(VcRun {
            solution: exact_small_vc(g)?,
            best_seed: None,
            trials: 0,
            nodes_explored: 0,
            params: None,
            removed: Vec::new(),
        }),
        IIPlan::Sample(params) => {
            let trials = trials.max(1);
            let runs: Vec<(IIOutcome, u64)> = (0..trials as u64)
                .into_par_iter()
                .map(|k| {
                    let s = seed.wrapping_add(k);
                    (ii_modified(g, &params, s), s)
                })
                .collect();
            let nodes = runs.iter().map(|(out, _)| out.nodes_explored).sum();
            // First minimum in seed order, as a sequential scan would pick.
            let (out, best_seed) = runs
                .into_iter()
                .reduce(|best, run| {
                    if cmp_covers(&run.0.solution.cover, &best.0.solution.cover) == Ordering::Less {
                        run
                    } else {
                        best
                    }
                })
                .expect("at least one trial");
            Ok(VcRun {
                solution: out.solution,
                best_seed: Some(best_seed),
                trials,
                nodes_explored: nodes,
                params: Some(params),
                removed: out.removed,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rational;

    fn params(s: usize, t: usize) -> IIParams {
        IIParams::new(s, t, rational(1, 1), rational(1, 10)).unwrap()
    }

    #[test]
    fn bitset_leaf_matches_induced_matching() {
        let g = crate::testbed::random_connected_graph(70, 0.2, 3);
        let p = params(2, 3);
        let ex = Explorer::new(&g, &p, 0);
        for drop in [vec![], vec![0, 5, 64], (0..35).collect()] {
            let sub = g.remove_vertices(&drop).unwrap();
            let mut alive = vec![0u64; 2];
            for &v in &sub.original {
                alive[v / 64] |= 1 << (v % 64);
            }
            assert_eq!(ex.leaf_cover(&alive), sub.lift(&matching_cover(&sub.graph)));
            let v = sub.original[0];
            let expected: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|w| !drop.contains(w)).collect();
            assert_eq!(ex.hood(v, &alive), expected);
        }
    }

    #[test]
    fn two_approx_on_triangle_and_edgeless() {
        assert_eq!(mm_two_approx(&Graph::complete(3)).size(), 2);
        assert_eq!(mm_two_approx(&Graph::empty(4)).size(), 0);
    }

    #[test]
    fn two_approx_on_p4_is_within_twice_optimum() {
        // τ(P4) = 2
        let sol = mm_two_approx(&Graph::path(4));
        assert!(sol.size() == 2 || sol.size() == 4);
        assert!(sol.size() <= 4);
        assert!(Graph::path(4).is_vertex_cover(&sol.cover));
    }

    #[test]
    fn threshold_values() {
        assert!((threshold_r(&Graph::complete(4)) - 2.0).abs() < 1e-12);
        let c8 = threshold_r(&Graph::cycle(8));
        assert!((c8 - 8.0 * (1.0 - 0.75f64.sqrt())).abs() < 1e-12);
        assert!((c8 - 1.0718).abs() < 1e-3);
        assert_eq!(threshold_r(&Graph::empty(3)), 0.0);
        assert_eq!(high_degree_set(&Graph::complete(4)), vec![0, 1, 2, 3]);
        assert_eq!(high_degree_set(&Graph::cycle(8)).len(), 8);
        assert_eq!(high_degree_set(&Graph::empty(3)), vec![0, 1, 2]);
    }

    #[test]
    fn exact_predicate_matches_float_away_from_boundary() {
        for g in [Graph::star(6), Graph::path(7), Graph::complete(5), Graph::cycle(9)] {
            let r = threshold_r(&g);
            for v in g.vertices() {
                let d = g.degree(v) as f64;
                if (d - r).abs() > 1e-9 {
                    assert_eq!(is_high_degree(g.n(), g.edge_count(), g.degree(v)), d >= r);
                }
            }
        }
    }

    #[test]
    fn gamma_values() {
        let c8 = Graph::cycle(8).density_profile();
        assert!((gamma(&c8) - 0.5).abs() < 1e-12);
        for n in 3..9 {
            let p = Graph::complete(n).density_profile();
            assert!(!gamma_uses_degree_ratio(&p));
            assert!((gamma(&p) - (n as f64 - 1.0) / n as f64).abs() < 1e-12);
        }
        let star = Graph::star(4).density_profile();
        assert!(gamma_uses_degree_ratio(&star));
        assert!((gamma(&star) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn subset_construction_examples() {
        let g = Graph::cycle(7);
        assert_eq!(
            build_cover_from_subset(&g, &[]).unwrap().cover,
            mm_two_approx(&g).cover
        );
        let k3 = Graph::complete(3);
        assert_eq!(build_cover_from_subset(&k3, &[1]).unwrap().size(), 2);
        // W an optimal cover of C6: the remainder is edgeless.
        let c6 = Graph::cycle(6);
        assert_eq!(
            build_cover_from_subset(&c6, &[1, 3, 5]).unwrap().cover,
            vec![1, 3, 5]
        );
    }

    #[test]
    fn params_examples() {
        let n = 1_000_000;
        // a = 1: the budget e^{sqrt 7} ≈ 14.09 caps the depth below 19.
        let IIPlan::Sample(p) = ii_params(n, n / 2, rational(1, 1), rational(1, 10)).unwrap() else {
            panic!("expected sampling plan");
        };
        assert_eq!(p.sample_size, 7);
        assert_eq!(p.depth, 15);
        let IIPlan::Sample(p) = ii_params(n, n / 2, rational(2, 1), rational(1, 10)).unwrap() else {
            panic!("expected sampling plan");
        };
        assert_eq!(p.depth, 19);
        let IIPlan::Sample(p) = ii_params(n, n - 1, rational(4, 1), rational(1, 10)).unwrap() else {
            panic!("expected sampling plan");
        };
        assert_eq!(p.depth, (4.0 * 10f64.ln()).ceil() as usize);
        assert_eq!(ii_params(15, 7, rational(1, 1), rational(1, 10)).unwrap(), IIPlan::Exact);
        assert!(ii_params(20, 0, rational(1, 1), rational(1, 10)).is_err());
        assert!(ii_params(20, 5, rational(1, 1), rational(1, 1)).is_err());
    }

    #[test]
    fn sampling_on_c4_is_valid_for_every_seed() {
        let g = Graph::cycle(4);
        for seed in 0..20 {
            let out = ii_modified(&g, &params(3, 3), seed);
            assert!(g.is_vertex_cover(&out.solution.cover));
            assert!(out.solution.size() >= 2);
            assert_eq!(out.solution.certified_ratio_bound, Some(rational(4, 3)));
        }
    }

    #[test]
    fn star_exceeds_degree_precondition() {
        let g = Graph::star(4);
        let out = ii_modified(&g, &params(2, 2), 1);
        assert!(g.is_vertex_cover(&out.solution.cover));
        assert_eq!(out.solution.certified_ratio_bound, Some(rational(2, 1)));
    }

    #[test]
    fn depth_one_extracts_nothing() {
        let g = Graph::complete(5);
        assert!(ii_extract_w(&g, &params(3, 1), 9).is_empty());
        assert_eq!(ii_modified(&g, &params(3, 1), 9).nodes_explored, 1);
    }

    #[test]
    fn k4_depth_two_removes_one_root_candidate() {
        let g = Graph::complete(4);
        // Root: H = V (all degrees 3 >= r = 2); every N(u) is V - u. Removing
        // V - u leaves a single vertex, giving the optimal cover V - u.
        let out = ii_modified(&g, &params(2, 2), 3);
        assert_eq!(out.solution.size(), 3);
        assert_eq!(out.removed, out.solution.cover);
        assert_eq!(out.removed.len(), 3);
    }

    #[test]
    fn deterministic_per_seed() {
        let g = Graph::cycle(11);
        let a = ii_modified(&g, &params(3, 4), 42);
        let b = ii_modified(&g, &params(3, 4), 42);
        assert_eq!(a, b);
    }

    #[test]
    fn exact_small_matches_known_optima() {
        assert_eq!(exact_small_vc(&Graph::complete(5)).unwrap().size(), 4);
        assert_eq!(exact_small_vc(&Graph::cycle(7)).unwrap().size(), 4);
        assert_eq!(exact_small_vc(&Graph::star(6)).unwrap().size(), 1);
    }
}
