//! The disjointness gadget: A_wTAP's weight separates disjoint and intersecting inputs.

use treeaug::gen::{gen_lb_disjointness, LowerBoundParams};
use treeaug::sim::RunConfig;
use treeaug::wtap::run_a_wtap;

fn main() -> treeaug::Result<()> {
    let strings = ["00", "01", "10", "11"];
    for simple in [false, true] {
        for a in strings {
            for b in strings {
                let q = LowerBoundParams::new(2, 2, 1, a, b, 2)?;
                let (g, t) = gen_lb_disjointness(&q, simple)?;
                let w = run_a_wtap(&g, &t, &RunConfig::default())?.aug.weight;
                println!("simple={simple} a={a} b={b} disjoint={} weight={w} below 2k: {}", q.disjoint(), w <= 4);
            }
        }
    }
    Ok(())
}
