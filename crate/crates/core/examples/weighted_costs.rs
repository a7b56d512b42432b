//! A_wTAP with its per-tree-edge cost split c(t).

use treeaug::gen::{gen_lb_path, gen_random_2ec, PathVariant};
use treeaug::sim::RunConfig;
use treeaug::wtap::run_a_wtap;

fn main() -> treeaug::Result<()> {
    let cfg = RunConfig::default();
    let (g, t) = gen_lb_path(4, PathVariant::G2, true, 2)?;
    let out = run_a_wtap(&g, &t, &cfg)?;
    println!("weighted G2, k=4: chose {:?}, weight {}", out.aug.edges, out.aug.weight);

    let (g, t) = gen_random_2ec(14, 8, 5, Some((1, 100)))?;
    let out = run_a_wtap(&g, &t, &cfg)?;
    print!("{}", out.costs_csv(&t));
    println!("sum of c = {}, weight of A' = {}", out.cost_sum(), out.chosen.iter().map(|e| e.weight).sum::<u64>());
    println!("weight of Aug in G = {}", out.aug.weight);
    for (origin, path) in out.paths(&t) {
        println!("edge {origin} pays for tree edges {path:?}");
    }
    let up = out.metrics.phase("wtap_up").unwrap();
    println!("up pass: {} rounds for h = {}", up.rounds, t.height());
    Ok(())
}
