//! 2-ECSS approximations against the exact minimum.

use treeaug::apps::{two_ecss_unweighted, two_ecss_weighted};
use treeaug::gen::gen_random_2ec;
use treeaug::oracle::min_2ecss;
use treeaug::sim::RunConfig;

fn main() -> treeaug::Result<()> {
    let cfg = RunConfig::default();
    for seed in 0..4 {
        let (g, _) = gen_random_2ec(9, 6, seed, Some((1, 30)))?;
        let u = two_ecss_unweighted(&g, &cfg)?;
        let w = two_ecss_weighted(&g, &cfg)?;
        println!(
            "seed {seed}: unweighted {} edges (min {}), weighted {} (min {}), rounds {} / {}",
            u.edges.len(),
            min_2ecss(&g, false)?.opt_value,
            w.weight,
            min_2ecss(&g, true)?.opt_value,
            u.metrics.rounds(),
            w.metrics.rounds()
        );
    }
    let (g, _) = gen_random_2ec(1000, 300, 1, None)?;
    let u = two_ecss_unweighted(&g, &cfg)?;
    println!("n=1000: {} edges, {} rounds, D = {}", u.edges.len(), u.metrics.rounds(), g.diameter()?);
    Ok(())
}
