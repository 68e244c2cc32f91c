//! End-to-end runs on fixed seeds, each checked against an exhaustive oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subdense::bench::{parse_matrix, run_matrix};
use subdense::cvc::{solve_cvc, AutoQb, ExactQb, MstQb, QbSteinerSolver};
use subdense::graph::{Graph, GraphBuilder};
use subdense::ratio::{rational, Rational};
use subdense::reductions::{densified_to_source_solution, densify, steiner_to_vc_solution, vc_to_steiner};
use subdense::setcover::{density_psi_sc, exact_bounded_sc, greedy_bound, greedy_sc, DEFAULT_BUDGET};
use subdense::steiner::{density_psi_st, dreyfus_wagner, mdstp, prune_to_tree, MdstpParams, SteinerInstance};
use subdense::testbed::{
    brute_sc, brute_steiner, brute_vc, gen_dense_setcover, gen_dense_steiner, gen_subdense_graph,
    random_connected_graph, random_subset, GenSpec,
};
use subdense::vc::{solve_vc, subdense_ratio_bound};
use subdense::Psi;

fn r(n: u64) -> Rational {
    Rational::from_integer(n)
}

#[test]
fn planted_sixty_vertex_cover_within_ratio() {
    let (g, planted) = gen_subdense_graph(&GenSpec::new(60, rational(4, 1), 7)).unwrap();
    assert!(2 * g.max_degree() <= g.n());
    let tau = brute_vc(&g).unwrap();
    assert!(planted.len() >= tau);
    let run = solve_vc(&g, 0, 20, rational(1, 1), rational(1, 10)).unwrap();
    let bound = subdense_ratio_bound(&g.density_profile()).unwrap();
    let limit = (bound * r(tau as u64)).ceil().to_integer() as usize;
    assert!(run.solution.size() <= limit, "{} > {limit}", run.solution.size());
}

#[test]
fn planted_forty_vertex_connected_cover_within_bound() {
    let (g, _) = gen_subdense_graph(&GenSpec::new(40, rational(4, 1), 3)).unwrap();
    let run = solve_cvc(&g, 0, 20, rational(1, 1), rational(1, 10), &AutoQb::default()).unwrap();
    assert!(g.induces_connected(&run.solution.cover));
    assert!(g.is_vertex_cover(&run.solution.cover));
    // The plain optimum is a lower bound on the connected one, which is too
    // large to enumerate at this size.
    let lower = brute_vc(&g).unwrap() as u64;
    let bound = run.solution.certified_ratio_bound.unwrap();
    assert!(r(run.solution.size() as u64 * 100) <= bound * r(lower * 105));
}

#[test]
fn mst_plugin_within_twice_exact_on_quasi_bipartite() {
    let mut rng = ChaCha8Rng::seed_from_u64(272);
    for _ in 0..40 {
        let n = rng.gen_range(6..=16);
        let terms = random_subset(n, 10.min(n - 1), &mut rng);
        let is_term: Vec<bool> = (0..n).map(|v| terms.contains(&v)).collect();
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if (is_term[u] || is_term[v]) && rng.gen_bool(0.4) {
                    b.add_edge(u, v);
                }
            }
        }
        let g = b.build();
        if !g.is_connected() {
            continue;
        }
        let inst = SteinerInstance::new(g, terms).unwrap();
        assert!(inst.is_quasi_bipartite());
        let exact = ExactQb::default().solve(&inst).unwrap().cost();
        assert!(MstQb.solve(&inst).unwrap().cost() <= 2 * exact);
    }
}

#[test]
fn dense_set_cover_exact_equals_oracle() {
    let inst = gen_dense_setcover(&GenSpec::new(20, rational(3, 1), 11).with_sets(15)).unwrap();
    let exact = exact_bounded_sc(&inst, DEFAULT_BUDGET).unwrap();
    assert!(exact.is_optimal());
    assert_eq!(exact.solution().size(), brute_sc(&inst).unwrap());
}

#[test]
fn generated_set_cover_meets_greedy_bound() {
    let inst = gen_dense_setcover(&GenSpec::new(20, rational(3, 1), 5).with_sets(10)).unwrap();
    assert!(density_psi_sc(&inst).unwrap() <= rational(3, 1));
    assert_eq!(greedy_bound(rational(3, 1), 20), 9);
    assert!(greedy_sc(&inst).unwrap().size() <= 9);
}

#[test]
fn dreyfus_wagner_on_random_ten_vertex_graph() {
    let g = random_connected_graph(10, 0.3, 409);
    let terms = random_subset(10, 4, &mut ChaCha8Rng::seed_from_u64(4));
    let inst = SteinerInstance::new(g, terms).unwrap();
    assert_eq!(dreyfus_wagner(&inst).unwrap().cost(), brute_steiner(&inst).unwrap());
}

#[test]
fn star_contraction_on_forty_vertices() {
    let inst = gen_dense_steiner(&GenSpec::new(40, rational(3, 1), 2).with_terminals(20)).unwrap();
    assert!(density_psi_st(&inst) <= Psi::Finite(rational(3, 1)));
    let params = MdstpParams::new(rational(1, 2), rational(3, 1)).unwrap();
    let report = mdstp(&inst, &params).unwrap();
    assert!(report.density_validated);
    let opt = brute_steiner(&inst).unwrap();
    assert!(2 * report.solution.cost() <= 3 * opt);
}

#[test]
fn generated_steiner_density() {
    let inst = gen_dense_steiner(&GenSpec::new(30, rational(3, 1), 2).with_terminals(15)).unwrap();
    assert_eq!(inst.terminals.len(), 15);
    assert!(density_psi_st(&inst) <= Psi::Finite(rational(3, 1)));
}

#[test]
fn fully_dense_thirty_terminals_take_one_star() {
    // Every terminal sees every nonterminal.
    let (t, f) = (30, 4);
    let mut b = GraphBuilder::new(t + f);
    for s in 0..t {
        for u in t..t + f {
            b.add_edge(s, u);
        }
    }
    let inst = SteinerInstance::new(b.build(), (0..t).collect()).unwrap();
    let params = MdstpParams::new(rational(1, 1), rational(1, 1)).unwrap();
    assert_eq!(params.stop_threshold, 2);
    let report = mdstp(&inst, &params).unwrap();
    assert_eq!(report.stars.len(), 1);
    assert_eq!(report.stars[0].captured, t);
    assert_eq!(report.solution.cost(), t);
}

#[test]
fn triangle_reduction_round_trip_through_densification() {
    let k3 = Graph::complete(3);
    let (inst, vc_cert) = vc_to_steiner(&k3).unwrap();
    let source_opt = dreyfus_wagner(&inst).unwrap();
    assert_eq!(source_opt.cost(), 4);
    assert_eq!(steiner_to_vc_solution(&source_opt, &vc_cert).unwrap().len(), 2);

    let (dense, cert) = densify(&inst, rational(1, 2)).unwrap();
    let dense_opt = dreyfus_wagner(&dense).unwrap();
    assert_eq!(dense_opt.cost(), 4);
    let back = densified_to_source_solution(&dense_opt, &cert).unwrap();
    assert_eq!(back.cost(), 4);
}

#[test]
fn perturbed_reduction_trees_map_to_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(488);
    for i in 0..30 {
        let g = random_connected_graph(rng.gen_range(3..=7), 0.5, 488 + i);
        let (inst, cert) = vc_to_steiner(&g).unwrap();
        // A feasible tree that is usually not optimal: every source vertex
        // joins the clique star, and each edge terminal hangs off a random end.
        let mut edges: Vec<(usize, usize)> = (1..g.n()).map(|v| (0, v)).collect();
        let offset = g.n();
        for (j, (u, v)) in g.edges().enumerate() {
            let end = if rng.gen_bool(0.5) { u } else { v };
            edges.push((end, offset + j));
        }
        let tree = prune_to_tree(&inst, &edges).unwrap();
        let cover = steiner_to_vc_solution(&tree, &cert).unwrap();
        assert!(g.is_vertex_cover(&cover));
    }
}

#[test]
fn bench_steiner_cell_within_one_and_a_half() {
    let cells = parse_matrix(r#"[{"problem": "st", "n": 40, "psi": 3, "terminals": 20, "delta": 0.5, "instances": 2, "seed": 9}]"#)
        .unwrap();
    let outcome = run_matrix(&cells).unwrap();
    assert!(!outcome.any_invalid());
    let summary = &outcome.summaries[0];
    assert!(summary.max_ratio.unwrap() <= 1.5);
}
