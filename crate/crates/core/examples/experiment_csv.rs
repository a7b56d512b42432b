//! A small batch of experiment rows, as the CLI would print them.

use treeaug::experiment::{run_experiment, Algo, CSV_HEADER};
use treeaug::format::Instance;
use treeaug::gen::{gen_cycle, gen_lb_path, gen_random_2ec, PathVariant};
use treeaug::sim::RunConfig;

fn main() -> treeaug::Result<()> {
    let cfg = RunConfig::default();
    let mut batch = Vec::new();
    let (g, t) = gen_cycle(64)?;
    batch.push(("c64", Instance { graph: g, tree: Some(t) }));
    let (g, t) = gen_lb_path(4, PathVariant::G1, false, 1)?;
    batch.push(("g1_k4", Instance { graph: g, tree: Some(t) }));
    let (g, t) = gen_random_2ec(10, 6, 1, Some((1, 100)))?;
    batch.push(("rand10", Instance { graph: g, tree: Some(t) }));
    println!("{CSV_HEADER}");
    for (name, inst) in &batch {
        for algo in Algo::ALL {
            println!("{}", run_experiment(name, inst, algo, &cfg, true)?.row.to_csv());
        }
    }
    Ok(())
}
