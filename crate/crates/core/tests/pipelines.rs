use proptest::prelude::*;

use treeaug::apps::two_ecss_unweighted;
use treeaug::fast::run_fast_tap;
use treeaug::format::{parse, write};
use treeaug::gen::{gen_cycle, gen_lb_disjointness, gen_lb_path, gen_random_2ec, gen_random_tree_2ec, LowerBoundParams, PathVariant};
use treeaug::graph::{Multigraph, RootedTree};
use treeaug::oracle::verify_augmentation;
use treeaug::sim::{RunConfig, Schedule};
use treeaug::tap::run_a_tap;
use treeaug::wtap::run_a_wtap;

fn instance(deep: bool, n: usize, extra: usize, seed: u64, weighted: bool) -> (Multigraph, RootedTree) {
    let w = weighted.then_some((1, 1000));
    if deep {
        gen_random_tree_2ec(n, extra, seed, w).unwrap()
    } else {
        gen_random_2ec(n, extra, seed, w).unwrap()
    }
}

#[test]
fn generators_round_trip_through_the_file_format() {
    let mut all = vec![gen_cycle(3).unwrap(), gen_cycle(50).unwrap()];
    for v in [PathVariant::G1, PathVariant::G2] {
        all.push(gen_lb_path(4, v, true, 3).unwrap());
    }
    for simple in [false, true] {
        all.push(gen_lb_disjointness(&LowerBoundParams::new(2, 3, 2, "01", "11", 2).unwrap(), simple).unwrap());
    }
    all.push(gen_random_2ec(40, 10, 1, Some((0, 9))).unwrap());
    all.push(gen_random_tree_2ec(40, 10, 1, None).unwrap());
    for (g, t) in all {
        let text = write(&g, Some(&t));
        let back = parse(&text).unwrap();
        assert_eq!(write(&back.graph, back.tree.as_ref()), text);
        assert_eq!(back.tree.as_ref(), Some(&t));
    }
}

#[test]
fn four_thousand_vertex_fast_run_is_valid() {
    let (g, t) = gen_random_2ec(4000, 2000, 8, None).unwrap();
    let out = run_fast_tap(&g, &t, &RunConfig::default()).unwrap();
    assert!(verify_augmentation(&g, &t, &out.aug.edges));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn every_pipeline_covers_every_tree_edge(deep in any::<bool>(), n in 3usize..120, extra in 0usize..60, seed in any::<u64>()) {
        let (g, t) = instance(deep, n, extra, seed, true);
        let cfg = RunConfig::default();
        let a = run_a_tap(&g, &t, &cfg).unwrap();
        let w = run_a_wtap(&g, &t, &cfg).unwrap();
        let f = run_fast_tap(&g, &t, &cfg).unwrap();
        prop_assert!(verify_augmentation(&g, &t, &a.aug.edges));
        prop_assert!(verify_augmentation(&g, &t, &w.aug.edges));
        prop_assert!(verify_augmentation(&g, &t, &f.aug.edges));
        prop_assert_eq!(w.cost_sum(), w.chosen.iter().map(|e| e.weight).sum::<u64>());
        for m in [&a.metrics, &w.metrics, &f.metrics] {
            prop_assert!(m.max_tokens_edge_round() <= cfg.budget);
        }
    }

    #[test]
    fn schedule_never_changes_results(n in 3usize..80, extra in 0usize..40, seed in any::<u64>(), sched in 0u64..1000) {
        let (g, t) = instance(false, n, extra, seed, true);
        let base = RunConfig { transcript: true, ..RunConfig::default() };
        let other = RunConfig { schedule: Schedule::Shuffled(sched), ..base };
        let par = RunConfig { schedule: Schedule::Parallel(3), ..base };
        let w0 = run_a_wtap(&g, &t, &base).unwrap();
        let w1 = run_a_wtap(&g, &t, &other).unwrap();
        let w2 = run_a_wtap(&g, &t, &par).unwrap();
        prop_assert_eq!(&w0.aug, &w1.aug);
        prop_assert_eq!(&w0.transcript, &w1.transcript);
        prop_assert_eq!(&w0.metrics, &w2.metrics);
        let f0 = run_fast_tap(&g, &t, &base).unwrap();
        let f1 = run_fast_tap(&g, &t, &other).unwrap();
        prop_assert_eq!(f0.aug, f1.aug);
        prop_assert_eq!(f0.transcript, f1.transcript);
    }

    #[test]
    fn two_ecss_size_bound(n in 3usize..300, extra in 0usize..300, seed in any::<u64>()) {
        let (g, _) = instance(false, n, extra, seed, false);
        let r = two_ecss_unweighted(&g, &RunConfig::default()).unwrap();
        prop_assert!(r.edges.len() <= 2 * (n - 1));
    }

    #[test]
    fn small_budget_still_works(n in 3usize..60, extra in 0usize..30, seed in any::<u64>(), budget in 4usize..9) {
        let (g, t) = instance(true, n, extra, seed, false);
        let cfg = RunConfig { budget, ..RunConfig::default() };
        let a = run_a_tap(&g, &t, &cfg).unwrap();
        prop_assert!(a.metrics.max_tokens_edge_round() <= budget);
        prop_assert!(verify_augmentation(&g, &t, &a.aug.edges));
    }
}
