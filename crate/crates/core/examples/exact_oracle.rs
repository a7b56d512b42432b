//! Exact optima on small instances, in G and in G'.

use treeaug::gen::{gen_lb_disjointness, gen_lb_path, gen_random_2ec, LowerBoundParams, PathVariant};
use treeaug::oracle::{opt_augmentation, opt_by_enumeration, opt_on_gprime};

fn main() -> treeaug::Result<()> {
    let (g, t) = gen_lb_path(4, PathVariant::G1, false, 1)?;
    println!("G1 k=4: OPT = {}", opt_augmentation(&g, &t, false)?.opt_value);

    for seed in 0..5 {
        let (g, t) = gen_random_2ec(11, 7, seed, None)?;
        let bb = opt_augmentation(&g, &t, false)?;
        let en = opt_by_enumeration(&g, &t, false)?;
        let gp = opt_on_gprime(&g, &t, false)?;
        println!(
            "seed {seed}: OPT = {} ({} nodes, enumeration agrees: {}), OPT(G') = {}",
            bb.opt_value,
            bb.nodes_explored,
            bb.opt_value == en.opt_value,
            gp.opt_value
        );
    }

    for (a, b) in [("00", "00"), ("10", "10")] {
        let q = LowerBoundParams::new(2, 2, 1, a, b, 2)?;
        let (g, t) = gen_lb_disjointness(&q, false)?;
        println!("a={a} b={b}: weighted OPT = {} (x = {})", opt_augmentation(&g, &t, true)?.opt_value, q.x());
    }
    Ok(())
}
