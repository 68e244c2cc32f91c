//! Connected vertex cover through the subset-constrained variant.
//!
//! [`scvc`] grows connected maximal matchings outside the required set until
//! the uncovered part is independent, contracts each component of the chosen
//! set, and joins the components with a Steiner tree on the resulting
//! quasi-bipartite instance. Its ratio is `max{r, 2/(1 + |S|/n)}`, where `r`
//! is the ratio of the Steiner plug-in. [`cvc_subdense`] seeds the required
//! set with the removal set of the sampling vertex cover algorithm.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::ratio::{self, Rational};
use crate::steiner::{self, SteinerInstance, SteinerTreeSolution};
use crate::vc::{self, IIParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectedCoverSolution {
    pub cover: Vec<Vertex>,
    #[serde(serialize_with = "ratio::serialize_opt_ratio")]
    pub certified_ratio_bound: Option<Rational>,
    /// BFS spanning tree of the subgraph induced by the cover.
    pub spanning_tree: Vec<(Vertex, Vertex)>,
}

impl ConnectedCoverSolution {
    /// Validates that `cover` touches every edge and induces a connected
    /// subgraph.
    pub fn new(g: &Graph, mut cover: Vec<Vertex>, certified_ratio_bound: Option<Rational>) -> Result<Self> {
        cover.sort_unstable();
        cover.dedup();
        for &v in &cover {
            g.check_vertex(v)?;
        }
        if !g.is_vertex_cover(&cover) {
            return Err(Error::ContractViolation(
                "vertex set does not cover every edge".into(),
            ));
        }
        if !g.induces_connected(&cover) {
            return Err(Error::ContractViolation(
                "cover does not induce a connected subgraph".into(),
            ));
        }
        let spanning_tree = induced_spanning_tree(g, &cover);
        Ok(ConnectedCoverSolution {
            cover,
            certified_ratio_bound,
            spanning_tree,
        })
    }

    pub fn size(&self) -> usize {
        self.cover.len()
    }
}

fn induced_spanning_tree(g: &Graph, set: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let Some(&root) = set.first() else {
        return Vec::new();
    };
    let inside = g.membership(set).expect("validated vertex ids");
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                tree.push((u.min(w), u.max(w)));
                queue.push_back(w);
            }
        }
    }
    tree.sort_unstable();
    tree
}

/// A Steiner tree routine for quasi-bipartite instances.
pub trait QbSteinerSolver: Sync {
    fn name(&self) -> &'static str;

    /// Worst-case ratio over all inputs.
    fn guaranteed_ratio(&self) -> Rational;

    /// Ratio achieved on an instance with `terminals` terminals.
    fn ratio_for(&self, _terminals: usize) -> Rational {
        self.guaranteed_ratio()
    }

    fn solve(&self, inst: &SteinerInstance) -> Result<SteinerTreeSolution>;
}

fn require_quasi_bipartite(inst: &SteinerInstance) -> Result<()> {
    if inst.is_quasi_bipartite() {
        Ok(())
    } else {
        Err(Error::ContractViolation(
            "Steiner instance is not quasi-bipartite".into(),
        ))
    }
}

/// Metric-closure MST, ratio 2.
#[derive(Debug, Clone, Copy, Default)]
pub struct MstQb;

impl QbSteinerSolver for MstQb {
    fn name(&self) -> &'static str {
        "mst"
    }

    fn guaranteed_ratio(&self) -> Rational {
        Rational::from_integer(2)
    }

    fn solve(&self, inst: &SteinerInstance) -> Result<SteinerTreeSolution> {
        require_quasi_bipartite(inst)?;
        steiner::metric_closure_mst(inst)
    }
}

/// Dreyfus–Wagner, ratio 1 but limited to `cap` terminals.
#[derive(Debug, Clone, Copy)]
pub struct ExactQb {
    pub cap: usize,
}

impl Default for ExactQb {
    fn default() -> Self {
        ExactQb {
            cap: steiner::DEFAULT_DW_CAP,
        }
    }
}

impl QbSteinerSolver for ExactQb {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn guaranteed_ratio(&self) -> Rational {
        Rational::from_integer(1)
    }

    fn solve(&self, inst: &SteinerInstance) -> Result<SteinerTreeSolution> {
        require_quasi_bipartite(inst)?;
        steiner::dreyfus_wagner_with_cap(inst, self.cap)
    }
}

/// Exact up to `exact_limit` terminals, MST beyond.
#[derive(Debug, Clone, Copy)]
pub struct AutoQb {
    pub exact_limit: usize,
}

impl Default for AutoQb {
    fn default() -> Self {
        AutoQb { exact_limit: 16 }
    }
}

impl QbSteinerSolver for AutoQb {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn guaranteed_ratio(&self) -> Rational {
        Rational::from_integer(2)
    }

    fn ratio_for(&self, terminals: usize) -> Rational {
        if terminals <= self.exact_limit {
            Rational::from_integer(1)
        } else {
            Rational::from_integer(2)
        }
    }

    fn solve(&self, inst: &SteinerInstance) -> Result<SteinerTreeSolution> {
        if inst.terminals.len() <= self.exact_limit {
            ExactQb {
                cap: self.exact_limit,
            }
            .solve(inst)
        } else {
            MstQb.solve(inst)
        }
    }
}

pub fn qb_mst_solver() -> MstQb {
    MstQb
}

/// Maximal matching of the component of `start`, grown outward so that the
/// matched vertices always induce a connected subgraph. `start` is matched
/// to its smallest neighbor; afterwards matched vertices are scanned in the
/// order they were matched, and each unmatched neighbor with an unmatched
/// neighbor of its own is matched to the smallest such vertex.
pub fn connected_maximal_matching(g: &Graph, start: Vertex) -> Result<Vec<(Vertex, Vertex)>> {
    g.check_vertex(start)?;
    let Some(&first) = g.neighbors(start).first() else {
        return Err(Error::NoIncidentEdge(start));
    };
    let mut matched = vec![false; g.n()];
    matched[start] = true;
    matched[first] = true;
    let mut m = vec![(start.min(first), start.max(first))];
    let mut queue = VecDeque::from([start, first]);
    while let Some(p) = queue.pop_front() {
        for &x in g.neighbors(p) {
            if matched[x] {
                continue;
            }
            if let Some(&y) = g.neighbors(x).iter().find(|&&y| !matched[y]) {
                matched[x] = true;
                matched[y] = true;
                m.push((x.min(y), x.max(y)));
                queue.push_back(x);
                queue.push_back(y);
            }
        }
    }
    Ok(m)
}

/// Connected vertex cover containing `s`.
pub fn scvc(g: &Graph, s: &[Vertex], qb: &dyn QbSteinerSolver) -> Result<ConnectedCoverSolution> {
    scvc_with_plugin_ratio(g, s, qb).map(|(solution, _)| solution)
}

fn scvc_with_plugin_ratio(
    g: &Graph,
    s: &[Vertex],
    qb: &dyn QbSteinerSolver,
) -> Result<(ConnectedCoverSolution, Rational)> {
    if s.is_empty() {
        return Err(Error::input("required vertex set is empty"));
    }
    for &v in s {
        g.check_vertex(v)?;
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut in_s1 = g.membership(s)?;
    let s_size = in_s1.iter().filter(|&&b| b).count();

    // Phase 1: connected maximal matchings until V \ S1 is independent.
    loop {
        let rest: Vec<Vertex> = g.vertices().filter(|&v| !in_s1[v]).collect();
        let has_edge = |v: Vertex| g.neighbors(v).iter().any(|&w| !in_s1[w]);
        if !rest.iter().any(|&v| has_edge(v)) {
            break;
        }
        let Some(c) = rest
            .iter()
            .copied()
            .find(|&v| has_edge(v) && g.neighbors(v).iter().any(|&w| in_s1[w]))
        else {
            return Err(Error::ContractViolation(
                "edges remain outside the required set but none touch it".into(),
            ));
        };
        let sub = g.induced_subgraph(&rest)?;
        let local = rest.binary_search(&c).expect("start lies outside S1");
        let matching = connected_maximal_matching(&sub.graph, local)?;
        for (a, b) in matching {
            in_s1[sub.original[a]] = true;
            in_s1[sub.original[b]] = true;
        }
    }
    let s1: Vec<Vertex> = g.vertices().filter(|&v| in_s1[v]).collect();

    // Phase 2: contract the components of G[S1].
    let induced = g.induced_subgraph(&s1)?;
    let parts: Vec<Vec<Vertex>> = induced
        .graph
        .connected_components()
        .into_iter()
        .map(|c| induced.lift(&c))
        .collect();
    let part_count = parts.len();
    let (contracted, map) = g.contract_sets(&parts)?;
    let terminals: Vec<Vertex> = parts.iter().map(|p| map.super_of(p[0])).collect();

    // Phase 3: join the components.
    let mut cover = s1;
    let r = qb.ratio_for(part_count);
    if part_count > 1 {
        let inst = SteinerInstance::new(contracted, terminals)?;
        assert!(
            inst.is_quasi_bipartite(),
            "vertices outside S1 must be independent after the matching phase"
        );
        let tree = qb.solve(&inst)?;
        let term = inst.is_terminal_mask();
        for &x in &tree.spans {
            if !term[x] {
                cover.extend_from_slice(map.members(x));
            }
        }
    }
    let two = Rational::from_integer(2);
    let bound = r.max(two * n as u64 / (n as u64 + s_size as u64));
    let solution = ConnectedCoverSolution::new(g, cover, Some(bound))?;
    debug_assert!(s.iter().all(|v| solution.cover.binary_search(v).is_ok()));
    Ok((solution, r))
}

/// [`scvc`] seeded with the removal set of one sampling run. An empty removal
/// set falls back to the first endpoint of a maximal matching. The certified
/// bound is `max{r, 2/(1 + d̄/(2Δ))}` when `Δ <= n/2`, else the bound of
/// [`scvc`].
pub fn cvc_subdense(
    g: &Graph,
    params: &IIParams,
    seed: u64,
    qb: &dyn QbSteinerSolver,
) -> Result<ConnectedCoverSolution> {
    let w = vc::ii_extract_w(g, params, seed);
    cover_from_seed_set(g, w, qb)
}

fn cover_from_seed_set(g: &Graph, mut w: Vec<Vertex>, qb: &dyn QbSteinerSolver) -> Result<ConnectedCoverSolution> {
    if w.is_empty() {
        let (u, _) = *vc::maximal_matching(g).first().ok_or_else(|| Error::input("graph has no edges"))?;
        w.push(u);
    }
    let (mut solution, r) = scvc_with_plugin_ratio(g, &w, qb)?;
    if let Some(b) = vc::subdense_ratio_bound(&g.density_profile()) {
        solution.certified_ratio_bound = Some(r.max(b));
    }
    Ok(solution)
}

/// Best of `trials` seeds of [`cvc_subdense`]; graphs too small for sampling
/// use a minimum vertex cover as the seed set.
#[derive(Debug, Clone, Serialize)]
pub struct CvcRun {
    pub solution: ConnectedCoverSolution,
    pub best_seed: Option<u64>,
    pub trials: usize,
    pub params: Option<IIParams>,
    pub qb: &'static str,
}

pub fn solve_cvc(
    g: &Graph,
    seed: u64,
    trials: usize,
    a: Rational,
    epsilon: Rational,
    qb: &dyn QbSteinerSolver,
) -> Result<CvcRun> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.edge_count() == 0 {
        return Ok(CvcRun {
            solution: ConnectedCoverSolution::new(g, Vec::new(), Some(Rational::from_integer(1)))?,
            best_seed: None,
            trials: 0,
            params: None,
            qb: qb.name(),
        });
    }
    match vc::ii_params(g.n(), g.max_degree(), a, epsilon)? {
        vc::IIPlan::Exact => {
            let w = vc::exact_small_vc(g)?.cover;
            Ok(CvcRun {
                solution: cover_from_seed_set(g, w, qb)?,
                best_seed: None,
                trials: 0,
                params: None,
                qb: qb.name(),
            })
        }
        vc::IIPlan::Sample(params) => {
            let trials = trials.max(1);
            let mut best: Option<(ConnectedCoverSolution, u64)> = None;
            for k in 0..trials as u64 {
                let s = seed.wrapping_add(k);
                let sol = cvc_subdense(g, &params, s, qb)?;
                let better = best.as_ref().is_none_or(|(b, _)| {
                    (sol.size(), &sol.cover) < (b.size(), &b.cover)
                });
                if better {
                    best = Some((sol, s));
                }
            }
            let (solution, best_seed) = best.expect("at least one trial");
            Ok(CvcRun {
                solution,
                best_seed: Some(best_seed),
                trials,
                params: Some(params),
                qb: qb.name(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rational;

    #[test]
    fn cmm_examples() {
        let e = Graph::path(2);
        assert_eq!(connected_maximal_matching(&e, 0).unwrap(), vec![(0, 1)]);
        let t = Graph::complete(3);
        assert_eq!(connected_maximal_matching(&t, 2).unwrap().len(), 1);
        let p = Graph::path(5);
        assert_eq!(
            connected_maximal_matching(&p, 0).unwrap(),
            vec![(0, 1), (2, 3)]
        );
        assert_eq!(
            connected_maximal_matching(&Graph::empty(2), 0),
            Err(Error::NoIncidentEdge(0))
        );
    }

    #[test]
    fn cmm_stays_in_component() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(connected_maximal_matching(&g, 1).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn scvc_star_center() {
        let g = Graph::star(4);
        let sol = scvc(&g, &[0], &ExactQb::default()).unwrap();
        assert_eq!(sol.cover, vec![0]);
        assert!(sol.spanning_tree.is_empty());
    }

    #[test]
    fn scvc_everything_required() {
        let g = Graph::cycle(5);
        let all: Vec<Vertex> = g.vertices().collect();
        let sol = scvc(&g, &all, &MstQb).unwrap();
        assert_eq!(sol.cover, all);
        assert_eq!(sol.certified_ratio_bound, Some(rational(2, 1)));
    }

    #[test]
    fn scvc_cycle_bound() {
        let g = Graph::cycle(6);
        let sol = scvc(&g, &[0], &ExactQb::default()).unwrap();
        assert!(sol.cover.contains(&0));
        assert_eq!(sol.spanning_tree.len(), sol.size() - 1);
        // 2 / (1 + 1/6) = 12/7
        assert_eq!(sol.certified_ratio_bound, Some(rational(12, 7)));
    }

    #[test]
    fn scvc_rejects_bad_input() {
        assert!(scvc(&Graph::path(3), &[], &MstQb).is_err());
        assert_eq!(
            scvc(&Graph::empty(3), &[0], &MstQb),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn mst_plugin_requires_quasi_bipartite() {
        let inst = SteinerInstance::new(Graph::path(3), vec![0, 2]).unwrap();
        assert_eq!(MstQb.solve(&inst).unwrap().cost(), 2);
        let bad = SteinerInstance::new(Graph::path(4), vec![0, 3]).unwrap();
        assert!(matches!(MstQb.solve(&bad), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn auto_plugin_ratio() {
        let q = AutoQb::default();
        assert_eq!(q.ratio_for(16), rational(1, 1));
        assert_eq!(q.ratio_for(17), rational(2, 1));
    }

    #[test]
    fn c4_subdense_bound() {
        let g = Graph::cycle(4);
        let b = vc::subdense_ratio_bound(&g.density_profile()).unwrap();
        assert_eq!(b, rational(4, 3));
        let sol = cover_from_seed_set(&g, vec![], &ExactQb::default()).unwrap();
        assert_eq!(sol.certified_ratio_bound, Some(rational(4, 3)));
    }

    #[test]
    fn solution_validation() {
        let p = Graph::path(4);
        assert!(ConnectedCoverSolution::new(&p, vec![0, 2], None).is_err());
        assert!(ConnectedCoverSolution::new(&p, vec![1, 2], None).is_ok());
        let p5 = Graph::path(5);
        assert!(ConnectedCoverSolution::new(&p5, vec![1, 3], None).is_err());
    }
}
