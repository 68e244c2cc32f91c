use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subdense::cvc::{connected_maximal_matching, scvc, ExactQb, MstQb};
use subdense::graph::Graph;
use subdense::io;
use subdense::ratio::{rational, Rational};
use subdense::reductions::{densified_to_source_solution, densify, steiner_to_vc_solution, vc_to_steiner, ReductionCertificate};
use subdense::setcover::{density_psi_sc, exact_bounded_sc, greedy_sc, greedy_sc_trace, DEFAULT_BUDGET};
use subdense::steiner::{dreyfus_wagner, mdstp, MdstpParams, SteinerInstance};
use subdense::testbed::{
    brute_cvc, brute_cvc_containing, brute_sc, brute_steiner, brute_vc, gen_dense_setcover, gen_dense_steiner,
    gen_subdense_graph, random_connected_graph, random_subset, GenSpec,
};
use subdense::vc::{ii_modified, ii_params, IIPlan};

fn connected(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    (n, 0.1f64..0.7, any::<u64>()).prop_map(|(n, p, seed)| random_connected_graph(n, p, seed))
}

fn steiner_instance(n: std::ops::RangeInclusive<usize>, max_terms: usize) -> impl Strategy<Value = SteinerInstance> {
    (connected(n), any::<u64>()).prop_map(move |(g, seed)| {
        let terms = random_subset(g.n(), max_terms, &mut ChaCha8Rng::seed_from_u64(seed));
        SteinerInstance::new(g, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cmm_is_maximal_and_connected(g in connected(2..=14), start in any::<prop::sample::Index>()) {
        let start = start.index(g.n());
        let m = connected_maximal_matching(&g, start).unwrap();
        let mut seen = vec![false; g.n()];
        for &(u, v) in &m {
            prop_assert!(g.has_edge(u, v));
            prop_assert!(!seen[u] && !seen[v]);
            seen[u] = true;
            seen[v] = true;
        }
        prop_assert!(g.edges().all(|(u, v)| seen[u] || seen[v]));
        let ends: Vec<usize> = (0..g.n()).filter(|&v| seen[v]).collect();
        prop_assert!(g.induces_connected(&ends));
        prop_assert!(g.is_vertex_cover(&ends));
    }

    #[test]
    fn scvc_contains_s_and_is_connected(g in connected(2..=9), seed in any::<u64>()) {
        let s = random_subset(g.n(), 3, &mut ChaCha8Rng::seed_from_u64(seed));
        for sol in [scvc(&g, &s, &ExactQb::default()).unwrap(), scvc(&g, &s, &MstQb).unwrap()] {
            prop_assert!(s.iter().all(|v| sol.cover.contains(v)));
            prop_assert!(g.is_vertex_cover(&sol.cover));
            prop_assert!(g.induces_connected(&sol.cover));
            let opt = brute_cvc_containing(&g, &s).unwrap();
            let bound = sol.certified_ratio_bound.unwrap();
            prop_assert!(Rational::from_integer(sol.size() as u64) <= bound * Rational::from_integer(opt as u64));
        }
    }

    #[test]
    fn connected_optimum_dominates_plain_optimum(g in connected(2..=10)) {
        prop_assert!(brute_cvc(&g).unwrap() >= brute_vc(&g).unwrap());
    }

    #[test]
    fn planted_cover_is_a_cover_and_upper_bounds_optimum(n in 8usize..=40, psi in 2u64..=4, seed in any::<u64>()) {
        let Ok((g, planted)) = gen_subdense_graph(&GenSpec::new(n, rational(psi, 1), seed)) else {
            return Ok(());
        };
        prop_assert!(g.is_vertex_cover(&planted));
        prop_assert!(planted.len() >= brute_vc(&g).unwrap());
        prop_assert!(g.min_degree() as u64 * psi >= n as u64);
    }

    #[test]
    fn sampling_respects_tree_bound_and_is_deterministic(n in 16usize..=36, psi in 2u64..=4, seed in any::<u64>()) {
        let Ok((g, _)) = gen_subdense_graph(&GenSpec::new(n, rational(psi, 1), seed)) else {
            return Ok(());
        };
        let Ok(IIPlan::Sample(p)) = ii_params(n, g.max_degree(), rational(1, 1), rational(1, 10)) else {
            return Ok(());
        };
        let a = ii_modified(&g, &p, seed);
        prop_assert!(g.is_vertex_cover(&a.solution.cover));
        prop_assert!(a.nodes_explored as u128 <= p.tree_bound());
        prop_assert_eq!(a, ii_modified(&g, &p, seed));
    }

    #[test]
    fn greedy_step_gains_at_least_uncovered_over_psi(n in 4usize..=60, psi in 2u64..=6, m in 4usize..=24, seed in any::<u64>()) {
        let Ok(inst) = gen_dense_setcover(&GenSpec::new(n, rational(psi, 1), seed).with_sets(m)) else {
            return Ok(());
        };
        let tight = density_psi_sc(&inst).unwrap();
        for step in greedy_sc_trace(&inst).unwrap() {
            prop_assert!(Rational::from_integer(step.gain as u64) * tight >= Rational::from_integer(step.uncovered_before as u64));
        }
    }

    #[test]
    fn exact_set_cover_matches_oracle(n in 4usize..=30, psi in 2u64..=5, m in 4usize..=14, seed in any::<u64>()) {
        let Ok(inst) = gen_dense_setcover(&GenSpec::new(n, rational(psi, 1), seed).with_sets(m)) else {
            return Ok(());
        };
        let exact = exact_bounded_sc(&inst, DEFAULT_BUDGET).unwrap();
        prop_assert!(exact.is_optimal());
        prop_assert!(exact.solution().size() <= greedy_sc(&inst).unwrap().size());
        prop_assert_eq!(exact.solution().size(), brute_sc(&inst).unwrap());
    }

    #[test]
    fn dreyfus_wagner_matches_oracle(inst in steiner_instance(2..=10, 6)) {
        let tree = dreyfus_wagner(&inst).unwrap();
        prop_assert_eq!(tree.cost(), brute_steiner(&inst).unwrap());
    }

    #[test]
    fn star_contraction_is_valid_and_exact_when_small(n in 8usize..=24, psi in 1u64..=3, t in 2usize..=10, seed in any::<u64>()) {
        let Ok(inst) = gen_dense_steiner(&GenSpec::new(n, rational(psi, 1), seed).with_terminals(t)) else {
            return Ok(());
        };
        let params = MdstpParams::new(rational(1, 2), rational(psi, 1)).unwrap();
        let report = mdstp(&inst, &params).unwrap();
        let opt = dreyfus_wagner(&inst).unwrap().cost();
        prop_assert!(2 * report.solution.cost() <= 3 * opt);
        if inst.terminals.len() <= params.stop_threshold {
            prop_assert_eq!(report.solution.cost(), opt);
            prop_assert!(report.stars.is_empty());
        }
    }

    #[test]
    fn vc_reduction_maps_trees_back_to_covers(g in connected(2..=7)) {
        let (inst, cert) = vc_to_steiner(&g).unwrap();
        let tree = dreyfus_wagner(&inst).unwrap();
        let cover = steiner_to_vc_solution(&tree, &cert).unwrap();
        prop_assert!(g.is_vertex_cover(&cover));
        if g.n() >= 3 {
            prop_assert_eq!(cover.len(), brute_vc(&g).unwrap());
        }
    }

    #[test]
    fn densified_trees_map_back_feasibly(inst in steiner_instance(2..=6, 3), half in any::<bool>()) {
        prop_assume!(inst.nonterminal_count() > 0);
        let delta = if half { rational(1, 2) } else { rational(2, 3) };
        let (dense, cert) = densify(&inst, delta).unwrap();
        let tree = dreyfus_wagner(&dense).unwrap();
        let back = densified_to_source_solution(&tree, &cert).unwrap();
        let ReductionCertificate::Densify { nonterminals_form_clique, .. } = cert else { unreachable!() };
        if nonterminals_form_clique {
            prop_assert!(back.cost() <= tree.cost());
        }
        prop_assert!(back.cost() >= brute_steiner(&inst).unwrap());
    }

    #[test]
    fn dimacs_round_trip(g in connected(1..=20)) {
        prop_assert_eq!(io::read_dimacs(&io::write_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn stp_round_trip(inst in steiner_instance(1..=15, 5)) {
        prop_assert_eq!(io::read_stp(&io::write_stp(&inst)).unwrap(), inst);
    }

    #[test]
    fn setcover_round_trip(n in 2usize..=40, psi in 2u64..=5, m in 2usize..=20, seed in any::<u64>()) {
        let Ok(inst) = gen_dense_setcover(&GenSpec::new(n, rational(psi, 1), seed).with_sets(m)) else {
            return Ok(());
        };
        prop_assert_eq!(io::read_setcover(&io::write_setcover(&inst)).unwrap(), inst);
    }
}
