//! A_TAP on a cycle and on the two path graphs of the lower bound family.

use treeaug::gen::{gen_cycle, gen_lb_path, PathVariant};
use treeaug::sim::RunConfig;
use treeaug::tap::run_a_tap;

fn main() -> treeaug::Result<()> {
    let cfg = RunConfig::default();
    let (g, t) = gen_cycle(12)?;
    let out = run_a_tap(&g, &t, &cfg)?;
    println!("C12: added {:?} in {} rounds (h = {})", out.aug.edges, out.metrics.rounds(), t.height());
    print!("{}", out.metrics.to_csv());

    for k in [2, 4, 8] {
        let (g1, t1) = gen_lb_path(k, PathVariant::G1, false, 1)?;
        let (g2, t2) = gen_lb_path(k, PathVariant::G2, false, 1)?;
        let a1 = run_a_tap(&g1, &t1, &cfg)?;
        let a2 = run_a_tap(&g2, &t2, &cfg)?;
        println!("k={k}: |Aug(G1)| = {}, |Aug(G2)| = {} ({:?})", a1.aug.len(), a2.aug.len(), a2.aug.edges);
    }
    Ok(())
}
