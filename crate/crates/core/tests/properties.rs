use std::collections::BTreeSet;

use proptest::prelude::*;
use rgmis_core::consistency::cross_check;
use rgmis_core::engines::{call_counts_via_dp, verify_mis, RankedGraph};
use rgmis_core::expectation::{query_paths_per_edge, EdgeIndex};
use rgmis_core::paths::{
    all_path_counts, completion_probabilities, enumerate_dangerous_paths, enumerate_query_paths, filtration,
    is_dangerous_path, is_query_path, one_step_expectation, path_counts, potential, query_increment_check,
    CountMode, FiltrationState, PotentialLedger, VertexPath,
};
use rgmis_core::{generate_er, random_rank_assignment, Graph, Rational, RankAssignment};

fn graph_and_ranks(max_n: usize) -> impl Strategy<Value = (Graph, RankAssignment)> {
    (1..=max_n, 0.0..=1.0f64, any::<u64>(), any::<u64>()).prop_map(|(n, p, gs, rs)| {
        let g = generate_er(n, p, gs).unwrap();
        let r = random_rank_assignment(n, rs).unwrap();
        (g, r)
    })
}

fn half(x: u64) -> Rational {
    Rational::new(x as i128, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_agree_and_call_counts_match((g, ranks) in graph_and_ranks(40)) {
        prop_assert_eq!(cross_check(&g, &ranks, None).unwrap(), None);
        let rg = RankedGraph::new(&g, &ranks).unwrap();
        let seq = rg.sequential_greedy();
        prop_assert!(verify_mis(&g, &seq));
        let (early, trace) = rg.early_break_run();
        prop_assert_eq!(&seq, &early);
        prop_assert_eq!(rg.check_trace_shape(&early, &trace), None);
        for (w, v) in trace.query_edges(&ranks) {
            prop_assert!(g.has_edge(w, v));
            prop_assert!(ranks.rank(w) < ranks.rank(v));
        }
        // all but possibly the last queried neighbor are outside the MIS
        for v in 0..g.vertex_count() {
            let q = &trace.queried[v];
            if q.len() > 1 {
                prop_assert!(q[..q.len() - 1].iter().all(|&w| !early.contains(w)));
            }
        }
    }

    #[test]
    fn endpoint_link((g, ranks) in graph_and_ranks(30)) {
        let (_, trace) = RankedGraph::new(&g, &ranks).unwrap().early_break_run();
        let dp = call_counts_via_dp(&g, &ranks, &trace).unwrap();
        let state = filtration(&g, &ranks, g.vertex_count()).unwrap();
        let from_paths: u64 = all_path_counts(&state).iter().map(|c| c.query).sum();
        let index = EdgeIndex::new(&g);
        let from_trace: u64 = query_paths_per_edge(&g, &ranks, &trace, &index).iter().sum();
        prop_assert_eq!(from_paths, dp.iter().sum::<u64>());
        prop_assert_eq!(from_trace, from_paths);
    }

    #[test]
    fn listing_matches_recurrence((g, ranks) in graph_and_ranks(9)) {
        for t in 0..=g.vertex_count() {
            let s = filtration(&g, &ranks, t).unwrap();
            for e in g.ordered_edges() {
                let q = enumerate_query_paths(&s, e);
                let d = enumerate_dangerous_paths(&s, e);
                prop_assert!(q.non_simple.is_empty());
                prop_assert!(d.non_simple.is_empty());
                prop_assert!(q.paths.iter().chain(&d.paths).all(VertexPath::is_simple));
                prop_assert_eq!(path_counts(&s, e, CountMode::Listing), path_counts(&s, e, CountMode::Recurrence));
            }
        }
    }

    #[test]
    fn ledger_identities((g, ranks) in graph_and_ranks(9)) {
        let ledger = PotentialLedger::build(&g, &ranks).unwrap();
        let n = g.vertex_count();
        for e in &ledger.entries[0] {
            prop_assert_eq!((e.query, e.dangerous, e.phi), (0, 1, Rational::new(1, 2)));
        }
        for e in &ledger.entries[n] {
            prop_assert_eq!(e.dangerous, 0);
        }
        for row in &ledger.entries {
            for e in row {
                prop_assert_eq!(e.phi, Rational::from_integer(e.query as i128) + half(e.dangerous));
            }
        }
    }

    #[test]
    fn query_paths_stay_query_paths((g, ranks) in graph_and_ranks(8)) {
        let n = g.vertex_count();
        let states: Vec<FiltrationState<'_>> = (0..=n).map(|t| filtration(&g, &ranks, t).unwrap()).collect();
        for (t, s) in states.iter().enumerate() {
            for e in g.ordered_edges() {
                for p in enumerate_query_paths(s, e).paths {
                    let v = p.vertices();
                    let settled = ranks.rank(v[v.len() - 2]);
                    for later in &states[settled..] {
                        prop_assert!(is_query_path(later, &p).unwrap(), "lost at t={} from t={}", later.time(), t);
                    }
                }
            }
        }
    }

    #[test]
    fn supermartingale_and_increment((g, ranks) in graph_and_ranks(7), t_frac in 0.0..1.0f64) {
        let n = g.vertex_count();
        let t = ((n as f64) * t_frac) as usize;
        prop_assume!(t < n);
        let s = filtration(&g, &ranks, t).unwrap();
        let triangle_free = g.is_triangle_free();
        for e in g.ordered_edges() {
            let now = potential(&s, e);
            let next = one_step_expectation(&s, e).unwrap();
            prop_assert!(next <= now);
            if triangle_free {
                prop_assert_eq!(next, now);
            }
            let (a, b) = query_increment_check(&s, e).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn evolution_containment((g, ranks) in graph_and_ranks(8)) {
        let n = g.vertex_count();
        for t in 0..n {
            let now = filtration(&g, &ranks, t).unwrap();
            let next = filtration(&g, &ranks, t + 1).unwrap();
            for e in g.ordered_edges() {
                let q_now: BTreeSet<_> = enumerate_query_paths(&now, e).paths.into_iter().collect();
                let d_now: BTreeSet<_> = enumerate_dangerous_paths(&now, e).paths.into_iter().collect();
                for p in enumerate_query_paths(&next, e).paths {
                    if !q_now.contains(&p) {
                        prop_assert!(d_now.contains(&p), "new query path {:?} was not dangerous", p);
                    }
                }
                for p in enumerate_dangerous_paths(&next, e).paths {
                    if !d_now.contains(&p) {
                        let v = p.vertices();
                        prop_assert!(v.len() >= 3);
                        let prefix = VertexPath::new(&g, v[..v.len() - 1].to_vec()).unwrap();
                        prop_assert!(d_now.contains(&prefix), "new dangerous path {:?} lacks a dangerous prefix", p);
                    }
                }
            }
        }
    }

    #[test]
    fn dangerous_characterization_matches_oracle((g, ranks) in graph_and_ranks(6), t_frac in 0.0..=1.0f64) {
        let n = g.vertex_count();
        let t = ((n as f64) * t_frac).min(n as f64) as usize;
        let s = filtration(&g, &ranks, t).unwrap();
        let mut candidates = Vec::new();
        for e in g.ordered_edges() {
            candidates.push(VertexPath::new(&g, vec![e.from, e.to]).unwrap());
            for p in enumerate_query_paths(&s, e).paths {
                for &z in g.neighbors(p.last()) {
                    let mut v = p.vertices().to_vec();
                    v.push(z);
                    candidates.push(VertexPath::new(&g, v).unwrap());
                }
            }
        }
        let probabilities = completion_probabilities(&s, &candidates, 9).unwrap();
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        for (p, prob) in candidates.iter().zip(probabilities) {
            let strictly_between = zero < prob && prob < one;
            prop_assert_eq!(is_dangerous_path(&s, p).unwrap(), strictly_between, "{:?} prob {}", p, prob);
            if !p.is_simple() {
                prop_assert_eq!(prob, zero);
            }
        }
    }

    #[test]
    fn measurability((g, ranks) in graph_and_ranks(7), other_seed in any::<u64>(), t_frac in 0.0..=1.0f64) {
        // two orderings that share a prefix classify every path alike
        let n = g.vertex_count();
        let t = ((n as f64) * t_frac).min(n as f64) as usize;
        let mut order = ranks.order().to_vec();
        let tail = random_rank_assignment(n - t + usize::from(n == t), other_seed).unwrap();
        let rest: Vec<usize> = order[t..].to_vec();
        for (i, &j) in tail.order().iter().filter(|&&j| j < rest.len()).enumerate() {
            order[t + i] = rest[j];
        }
        let other = RankAssignment::from_order(order).unwrap();
        let a = filtration(&g, &ranks, t).unwrap();
        let b = filtration(&g, &other, t).unwrap();
        prop_assert_eq!(all_path_counts(&a), all_path_counts(&b));
    }
}

#[test]
fn single_vertex_has_nothing_to_count() {
    let g = Graph::empty(1);
    let ranks = RankAssignment::identity(1);
    let s = filtration(&g, &ranks, 1).unwrap();
    assert!(all_path_counts(&s).is_empty());
    assert_eq!(cross_check(&g, &ranks, None).unwrap(), None);
    let _ = FiltrationState::initial(&g);
}
