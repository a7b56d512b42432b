//! Rounds of the O(h) and the O(D + √n) algorithms on tall, shallow-diameter instances.

use treeaug::fast::run_fast_tap;
use treeaug::gen::{gen_lb_disjointness, LowerBoundParams};
use treeaug::sim::RunConfig;
use treeaug::tap::run_a_tap;

fn main() -> treeaug::Result<()> {
    let cfg = RunConfig::default();
    println!("{:>6} {:>5} {:>4} {:>6} {:>8} {:>8}", "n", "h", "D", "sqrt", "a_tap", "fast");
    for p in [6, 8, 10, 12] {
        let (g, t) = gen_lb_disjointness(&LowerBoundParams::zeros(2, 2, p, 2), false)?;
        let d = g.diameter_lower_bound();
        let fast = run_fast_tap(&g, &t, &cfg)?;
        let slow = run_a_tap(&g, &t, &cfg)?;
        println!(
            "{:>6} {:>5} {:>4} {:>6.1} {:>8} {:>8}",
            g.n(),
            t.height(),
            d,
            (g.n() as f64).sqrt(),
            slow.metrics.rounds(),
            fast.metrics.rounds()
        );
        for ph in &fast.metrics.phases {
            println!("    {:<16} {:>6} items={}", ph.name, ph.rounds, ph.broadcast_items);
        }
    }
    Ok(())
}
