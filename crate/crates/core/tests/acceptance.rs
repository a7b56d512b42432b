//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treeaug::apps::{two_ecss_unweighted, two_ecss_weighted, verify_2ec_distributed};
use treeaug::experiment::{run_experiment, Algo};
use treeaug::fast::{fast_tap_session, lca_from_split_labels};
use treeaug::format::Instance;
use treeaug::gen::{
    gen_cycle, gen_lb_disjointness, gen_lb_path, gen_random_2ec, gen_random_tree_2ec, LowerBoundParams, PathVariant,
};
use treeaug::graph::{find_bridges, is_two_edge_connected, EdgeId, Multigraph, RootedTree, VertexId, Weight};
use treeaug::lca::{lca_query, LabelProgram};
use treeaug::oracle::{min_2ecss, opt_augmentation, opt_on_gprime, verify_augmentation};
use treeaug::sim::{run, Metrics, RunConfig, Schedule};
use treeaug::tap::{a_tap_session, run_a_tap};
use treeaug::wtap::{a_wtap_session, run_a_wtap};

const BUDGET: usize = 4;
const SUITE_SIZE: u64 = 200;
const MAX_SMALL_N: usize = 12;
const CYCLE_SLACK_PER_H: u32 = 8;
const CYCLE_SLACK: u32 = 16;
const MIN_SLOPE: f64 = 0.5;
const FAST_FACTOR: f64 = 20.0;
const BROADCAST_FACTOR: f64 = 4.0;
const UP_SLACK: u32 = 4;
const ECSS_ROUNDS_PER_D: u32 = 8;
const VERIFY_INSTANCES: u64 = 500;

static MAX_TOKENS_SEEN: AtomicUsize = AtomicUsize::new(0);
static RUNS_SEEN: AtomicUsize = AtomicUsize::new(0);

fn cfg() -> RunConfig {
    RunConfig { budget: BUDGET, ..RunConfig::default() }
}

fn note(m: &Metrics) {
    MAX_TOKENS_SEEN.fetch_max(m.max_tokens_edge_round(), Ordering::Relaxed);
    RUNS_SEEN.fetch_add(1, Ordering::Relaxed);
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: treeaug::Error) -> String {
    e.to_string()
}

/// Seeded desk-size instances: half Hamiltonian-cycle based, half tree based.
fn small_suite(weights: Option<(Weight, Weight)>) -> Vec<(Multigraph, RootedTree)> {
    (0..SUITE_SIZE)
        .map(|s| {
            let n = 4 + (s as usize % (MAX_SMALL_N - 3));
            let extra = (s as usize / 7) % 7;
            if s % 2 == 0 {
                gen_random_2ec(n, extra, 1000 + s, weights).unwrap()
            } else {
                gen_random_tree_2ec(n, extra / 2, 2000 + s, weights).unwrap()
            }
        })
        .collect()
}

fn c1_gprime_unweighted() -> Check {
    for (i, (g, t)) in small_suite(None).iter().enumerate() {
        let out = a_tap_session(g, t, &cfg()).map_err(err)?;
        note(&out.metrics);
        let opt = opt_on_gprime(g, t, false).map_err(err)?.opt_value;
        ensure(out.chosen.len() as Weight == opt, || format!("instance {i}: |A'| = {} but OPT(G') = {opt}", out.chosen.len()))?;
    }
    Ok(format!("{SUITE_SIZE} instances, |A'| = OPT(G') exactly"))
}

fn c2_gprime_weighted() -> Check {
    for (i, (g, t)) in small_suite(Some((1, 100))).iter().enumerate() {
        let out = a_wtap_session(g, t, &cfg()).map_err(err)?;
        note(&out.metrics);
        let w: Weight = out.chosen.iter().map(|e| e.weight).sum();
        let opt = opt_on_gprime(g, t, true).map_err(err)?.opt_value;
        ensure(w == opt, || format!("instance {i}: w(A') = {w} but OPT_w(G') = {opt}"))?;
    }
    Ok(format!("{SUITE_SIZE} weighted instances, w(A') = OPT_w(G') exactly"))
}

fn c3_approximation() -> Check {
    let mut worst: [f64; 3] = [0.0; 3];
    for (i, (g, t)) in small_suite(None).iter().enumerate() {
        let opt = opt_augmentation(g, t, false).map_err(err)?.opt_value;
        let opt_gp = opt_on_gprime(g, t, false).map_err(err)?.opt_value;
        let tap = run_a_tap(g, t, &cfg()).map_err(err)?;
        let fast = treeaug::fast::run_fast_tap(g, t, &cfg()).map_err(err)?;
        note(&tap.metrics);
        note(&fast.metrics);
        ensure(verify_augmentation(g, t, &tap.aug.edges) && verify_augmentation(g, t, &fast.aug.edges), || {
            format!("instance {i}: invalid augmentation")
        })?;
        ensure(tap.aug.len() as Weight <= 2 * opt, || format!("instance {i}: tap {} > 2*{opt}", tap.aug.len()))?;
        ensure(fast.aug.len() as Weight <= 4 * opt, || format!("instance {i}: fast {} > 4*{opt}", fast.aug.len()))?;
        ensure(fast.chosen.len() as Weight <= 2 * opt_gp, || format!("instance {i}: fast |A'| {} > 2*{opt_gp}", fast.chosen.len()))?;
        worst[0] = worst[0].max(tap.aug.len() as f64 / opt as f64);
        worst[2] = worst[2].max(fast.aug.len() as f64 / opt as f64);
    }
    for (i, (g, t)) in small_suite(Some((1, 100))).iter().enumerate() {
        let opt = opt_augmentation(g, t, true).map_err(err)?.opt_value;
        let w = run_a_wtap(g, t, &cfg()).map_err(err)?;
        note(&w.metrics);
        ensure(verify_augmentation(g, t, &w.aug.edges), || format!("weighted instance {i}: invalid"))?;
        ensure(w.aug.weight <= 2 * opt, || format!("weighted instance {i}: {} > 2*{opt}", w.aug.weight))?;
        worst[1] = worst[1].max(w.aug.weight as f64 / opt as f64);
    }
    Ok(format!("worst ratios tap {:.3}, wtap {:.3}, fast {:.3}", worst[0], worst[1], worst[2]))
}

fn c4_path_family() -> Check {
    for k in [2, 4, 8] {
        let (g1, t1) = gen_lb_path(k, PathVariant::G1, false, 1).map_err(err)?;
        let (g2, t2) = gen_lb_path(k, PathVariant::G2, false, 1).map_err(err)?;
        let (gw, tw) = gen_lb_path(k, PathVariant::G2, true, 2).map_err(err)?;
        let a1 = run_a_tap(&g1, &t1, &cfg()).map_err(err)?;
        let a2 = run_a_tap(&g2, &t2, &cfg()).map_err(err)?;
        let aw = run_a_wtap(&gw, &tw, &cfg()).map_err(err)?;
        for m in [&a1.metrics, &a2.metrics, &aw.metrics] {
            note(m);
        }
        ensure(a1.aug.len() == k, || format!("k={k}: |Aug(G1)| = {}", a1.aug.len()))?;
        ensure(a2.aug.len() == 1, || format!("k={k}: |Aug(G2)| = {}", a2.aug.len()))?;
        ensure(aw.aug.weight == 1, || format!("k={k}: weighted G2 weight {}", aw.aug.weight))?;
    }
    Ok("k in {2,4,8}: G1 -> k, G2 -> 1, weighted G2 -> weight 1".into())
}

fn c5_disjointness() -> Check {
    let strings = ["00", "01", "10", "11"];
    let k = 2;
    let mut cases = 0;
    for simple in [false, true] {
        for a in strings {
            for b in strings {
                let q = LowerBoundParams::new(k, 2, 1, a, b, 2).map_err(err)?;
                let (g, t) = gen_lb_disjointness(&q, simple).map_err(err)?;
                let out = run_a_wtap(&g, &t, &cfg()).map_err(err)?;
                note(&out.metrics);
                let below = out.aug.weight <= 2 * k as Weight;
                ensure(below == q.disjoint(), || {
                    format!("a={a} b={b} simple={simple}: weight {} disjoint {}", out.aug.weight, q.disjoint())
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, weight <= 2k iff disjoint"))
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn c6_cycle_scaling() -> Check {
    let mut tap_pts = Vec::new();
    let mut wtap_pts = Vec::new();
    for n in [64, 256, 1024, 4096] {
        let (g, t) = gen_cycle(n).map_err(err)?;
        let h = t.height();
        let a = run_a_tap(&g, &t, &cfg()).map_err(err)?;
        let w = run_a_wtap(&g, &t, &cfg()).map_err(err)?;
        note(&a.metrics);
        note(&w.metrics);
        let bound = CYCLE_SLACK_PER_H * h + CYCLE_SLACK;
        for (name, r) in [("tap", a.metrics.rounds()), ("wtap", w.metrics.rounds())] {
            ensure(r <= bound, || format!("{name} on C{n}: {r} rounds > {bound}"))?;
        }
        tap_pts.push((h as f64, a.metrics.rounds() as f64));
        wtap_pts.push((h as f64, w.metrics.rounds() as f64));
    }
    let (s1, s2) = (slope(&tap_pts), slope(&wtap_pts));
    ensure(s1 >= MIN_SLOPE && s2 >= MIN_SLOPE, || format!("slopes {s1:.3} {s2:.3}"))?;
    Ok(format!("rounds <= 8h+16, slopes tap {s1:.3}, wtap {s2:.3}"))
}

fn c7_fast_scaling() -> Check {
    let mut lines = Vec::new();
    let shapes = [(2, 8), (2, 10), (2, 12), (3, 6)];
    for (d, p) in shapes {
        let (g, t) = gen_lb_disjointness(&LowerBoundParams::zeros(2, d, p, 2), false).map_err(err)?;
        let n = g.n() as f64;
        let diam = g.diameter_lower_bound() as f64;
        let h = t.height() as f64;
        ensure(h >= 4.0 * n.sqrt(), || format!("d={d} p={p}: h = {h} below 4 sqrt(n)"))?;
        let fast = treeaug::fast::run_fast_tap(&g, &t, &cfg()).map_err(err)?;
        let slow = run_a_tap(&g, &t, &cfg()).map_err(err)?;
        note(&fast.metrics);
        note(&slow.metrics);
        ensure(verify_augmentation(&g, &t, &fast.aug.edges), || format!("d={d} p={p}: invalid"))?;
        let (rf, rs) = (fast.metrics.rounds(), slow.metrics.rounds());
        let bound = FAST_FACTOR * (diam + n.sqrt());
        ensure((rf as f64) <= bound, || format!("n={n}: fast {rf} > {bound:.0}"))?;
        ensure(rf < rs, || format!("n={n}: fast {rf} not below a_tap {rs}"))?;
        for ph in &fast.metrics.phases {
            ensure(ph.broadcast_items as f64 <= BROADCAST_FACTOR * n.sqrt(), || {
                format!("n={n}: phase {} broadcasts {} items", ph.name, ph.broadcast_items)
            })?;
        }
        lines.push(format!("n={n} {rf}<{rs}"));
    }
    // reported, not asserted: h = 4 sqrt(n) exactly at the edge of the regime
    let (g, t) = gen_lb_disjointness(&LowerBoundParams::zeros(2, 2, 6, 2), false).map_err(err)?;
    let edge_fast = treeaug::fast::run_fast_tap(&g, &t, &cfg()).map_err(err)?.metrics.rounds();
    let edge_slow = run_a_tap(&g, &t, &cfg()).map_err(err)?.metrics.rounds();
    lines.push(format!("boundary n={} (not asserted) fast {edge_fast} vs {edge_slow}", g.n()));
    Ok(lines.join(", "))
}

fn c8_pipelining() -> Check {
    let mut trees: Vec<(Multigraph, RootedTree)> = Vec::new();
    for n in [64, 1024] {
        trees.push(gen_cycle(n).unwrap());
    }
    for k in [2, 8] {
        trees.push(gen_lb_path(k, PathVariant::G2, true, 2).unwrap());
    }
    for s in 0..20u64 {
        let n = [16, 100, 300, 1024][s as usize % 4];
        trees.push(gen_random_tree_2ec(n, n / 4, 300 + s, Some((1, 1000))).unwrap());
        trees.push(gen_random_2ec(n, n / 3, 400 + s, Some((1, 1000))).unwrap());
    }
    let mut worst = i64::MIN;
    for (i, (g, t)) in trees.iter().enumerate() {
        let out = run_a_wtap(g, t, &cfg()).map_err(err)?;
        note(&out.metrics);
        let up = out.metrics.phase("wtap_up").map_or(0, |p| p.rounds);
        let h = t.height();
        ensure(up <= 2 * h + UP_SLACK, || format!("tree {i}: up pass {up} rounds, h = {h}"))?;
        worst = worst.max(up as i64 - 2 * h as i64);
    }
    Ok(format!("{} trees, max(up - 2h) = {worst}", trees.len()))
}

fn c9_cost_decomposition() -> Check {
    let mut runs = 0;
    for (i, (g, t)) in small_suite(Some((1, 100))).iter().enumerate() {
        let out = run_a_wtap(g, t, &cfg()).map_err(err)?;
        note(&out.metrics);
        let sum = out.cost_sum();
        let w: Weight = out.chosen.iter().map(|e| e.weight).sum();
        ensure(sum == w, || format!("instance {i}: sum c = {sum}, w(A') = {w}"))?;
        let opt = opt_on_gprime(g, t, true).map_err(err)?.opt_value;
        ensure(opt >= sum, || format!("instance {i}: G' optimum {opt} below sum c = {sum}"))?;
        runs += 1;
    }
    for s in 0..10 {
        let (g, t) = gen_random_2ec(500, 200, 50 + s, Some((1, 10_000))).map_err(err)?;
        let out = run_a_wtap(&g, &t, &cfg()).map_err(err)?;
        note(&out.metrics);
        let w: Weight = out.chosen.iter().map(|e| e.weight).sum();
        ensure(out.cost_sum() == w, || format!("n=500 seed {s}: sum c = {} w(A') = {w}", out.cost_sum()))?;
        runs += 1;
    }
    Ok(format!("{runs} weighted runs, sum c = w(A'); G' optima >= sum c"))
}

fn c10_lca() -> Check {
    let mut pairs = 0u64;
    for s in 0..50u64 {
        let n = 2 + (s as usize * 5) % 255;
        let (g, t) = if s % 2 == 0 { gen_random_tree_2ec(n.max(2), 0, s, None) } else { gen_random_2ec(n.max(3), n / 2, s, None) }
            .map_err(err)?;
        let out = run(&g, &LabelProgram { tree: &t }, &cfg()).map_err(err)?;
        note(&Metrics { phases: vec![out.stats.clone()] });
        let l = out.outputs;
        for a in 0..n as VertexId {
            for b in 0..n as VertexId {
                let w = t.lca_walk(a, b);
                ensure(lca_query(&l[a as usize], &l[b as usize]) == l[w as usize], || format!("plain tree {s}: lca({a},{b})"))?;
                pairs += 1;
            }
        }
    }
    for s in 0..50u64 {
        let n = 3 + (s as usize * 6) % 298;
        let (g, t) = if s % 2 == 0 { gen_random_tree_2ec(n, 0, 90 + s, None) } else { gen_random_2ec(n, n / 2, 90 + s, None) }
            .map_err(err)?;
        let out = fast_tap_session(&g, &t, &cfg()).map_err(err)?;
        note(&out.metrics);
        let l = &out.labels;
        for a in 0..n as VertexId {
            for b in 0..n as VertexId {
                let w = t.lca_walk(a, b);
                let got = lca_from_split_labels(&out.directory, &l[a as usize], &l[b as usize]);
                ensure(got == l[w as usize], || format!("split tree {s}: lca({a},{b})"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs on 100 trees agree with the parent walk"))
}

/// A random tree plus a few random edges; usually has bridges.
fn random_connected(n: usize, extra: usize, seed: u64) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = Vec::new();
    for v in 1..n as VertexId {
        e.push((rng.gen_range(0..v), v, 1));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n as VertexId);
        let v = rng.gen_range(0..n as VertexId);
        if u != v {
            e.push((u, v, 1));
        }
    }
    Multigraph::new(n, &e).unwrap()
}

fn c11_applications() -> Check {
    let mut max_ratio_rounds: f64 = 0.0;
    for s in 0..30u64 {
        let n = 10 + (s as usize * 37) % 991;
        let extra = [0, n / 10, n / 2, 2 * n][s as usize % 4];
        let (g, _) = gen_random_2ec(n, extra, 500 + s, None).map_err(err)?;
        let d = g.diameter().map_err(err)?;
        let r = two_ecss_unweighted(&g, &cfg()).map_err(err)?;
        note(&r.metrics);
        ensure(r.edges.len() <= 2 * (n - 1), || format!("n={n}: {} edges", r.edges.len()))?;
        let sub = g.filter_edges(|e| r.edges.binary_search(&e.id).is_ok()).0;
        ensure(is_two_edge_connected(&sub), || format!("n={n}: output not 2-edge-connected"))?;
        let rounds = r.metrics.rounds();
        ensure(rounds <= ECSS_ROUNDS_PER_D * d, || format!("n={n}: {rounds} rounds, D = {d}"))?;
        max_ratio_rounds = max_ratio_rounds.max(rounds as f64 / d as f64);
    }
    let mut worst = (0.0f64, 0.0f64);
    for s in 0..40u64 {
        let n = 4 + s as usize % 7;
        let (g, _) = gen_random_2ec(n, s as usize % 6, 700 + s, Some((1, 50))).map_err(err)?;
        let u = two_ecss_unweighted(&g, &cfg()).map_err(err)?;
        let w = two_ecss_weighted(&g, &cfg()).map_err(err)?;
        note(&u.metrics);
        note(&w.metrics);
        let opt_u = min_2ecss(&g, false).map_err(err)?.opt_value;
        let opt_w = min_2ecss(&g, true).map_err(err)?.opt_value;
        ensure(u.edges.len() as Weight <= 2 * opt_u, || format!("n={n}: {} edges vs min {opt_u}", u.edges.len()))?;
        ensure(w.weight <= 3 * opt_w, || format!("n={n}: weight {} vs min {opt_w}", w.weight))?;
        worst.0 = worst.0.max(u.edges.len() as f64 / opt_u as f64);
        worst.1 = worst.1.max(w.weight as f64 / opt_w as f64);
    }
    let mut bridged = 0;
    for s in 0..VERIFY_INSTANCES {
        let n = 3 + (s as usize * 13) % 198;
        let g = if s % 2 == 0 {
            gen_random_2ec(n, n / 5, 900 + s, None).map_err(err)?.0
        } else {
            random_connected(n, n / 2 + s as usize % 5, 900 + s)
        };
        let truth = find_bridges(&g).map_err(err)?;
        let r = verify_2ec_distributed(&g, &cfg()).map_err(err)?;
        note(&r.metrics);
        ensure(r.unanimous() == Some(truth.is_empty()), || format!("instance {s}: answer {:?}", r.unanimous()))?;
        let mut named: Vec<EdgeId> = r.nodes.iter().filter_map(|o| o.own_bridge).collect();
        named.sort_unstable();
        ensure(named == truth, || format!("instance {s}: reported {named:?}, bridges {truth:?}"))?;
        bridged += usize::from(!truth.is_empty());
    }
    Ok(format!(
        "2-ECSS rounds/D <= {max_ratio_rounds:.2}, ratios {:.3} (unweighted) {:.3} (weighted); verification {VERIFY_INSTANCES} graphs, {bridged} bridged",
        worst.0, worst.1
    ))
}

fn c12_fidelity() -> Check {
    let mut insts: Vec<(&str, Instance)> = Vec::new();
    let (g, t) = gen_random_2ec(40, 20, 77, Some((1, 100))).map_err(err)?;
    insts.push(("rand40", Instance { graph: g, tree: Some(t) }));
    let (g, t) = gen_lb_disjointness(&LowerBoundParams::zeros(2, 2, 4, 2), false).map_err(err)?;
    insts.push(("disj", Instance { graph: g, tree: Some(t) }));
    let tcfg = RunConfig { transcript: true, ..cfg() };
    let pcfg = RunConfig { schedule: Schedule::Parallel(4), ..tcfg };
    let mut compared = 0;
    for (name, inst) in &insts {
        for algo in Algo::ALL {
            let a = run_experiment(name, inst, algo, &tcfg, false).map_err(err)?;
            let b = run_experiment(name, inst, algo, &tcfg, false).map_err(err)?;
            let c = run_experiment(name, inst, algo, &pcfg, false).map_err(err)?;
            note(&a.metrics);
            ensure(a.row.to_csv() == b.row.to_csv() && a.transcript == b.transcript, || format!("{name} {algo}: repeat differs"))?;
            ensure(a.row.to_csv() == c.row.to_csv() && a.transcript == c.transcript, || format!("{name} {algo}: schedule changes output"))?;
            ensure(!a.transcript.is_empty(), || format!("{name} {algo}: empty transcript"))?;
            compared += 1;
        }
    }
    let seen = MAX_TOKENS_SEEN.load(Ordering::Relaxed);
    let runs = RUNS_SEEN.load(Ordering::Relaxed);
    ensure(seen <= BUDGET, || format!("{seen} tokens on one edge in one round"))?;
    Ok(format!("{compared} experiments repeat byte for byte; {runs} runs, max {seen} tokens per edge per round (budget {BUDGET})"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("G' optimality, unweighted", c1_gprime_unweighted),
        ("G' optimality, weighted", c2_gprime_weighted),
        ("approximation bounds", c3_approximation),
        ("path family values", c4_path_family),
        ("disjointness gadget", c5_disjointness),
        ("round scaling, O(h)", c6_cycle_scaling),
        ("round scaling, fast", c7_fast_scaling),
        ("pipelining", c8_pipelining),
        ("cost decomposition", c9_cost_decomposition),
        ("LCA correctness", c10_lca),
        ("applications", c11_applications),
        ("CONGEST fidelity", c12_fidelity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
