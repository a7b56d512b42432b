//! Distributed 2-edge-connectivity verification.

use treeaug::apps::verify_2ec_distributed;
use treeaug::gen::gen_random_2ec;
use treeaug::graph::Multigraph;
use treeaug::sim::RunConfig;

fn main() -> treeaug::Result<()> {
    let cfg = RunConfig::default();
    let (g, _) = gen_random_2ec(50, 10, 2, None)?;
    let r = verify_2ec_distributed(&g, &cfg)?;
    println!("random graph: answer {:?} in {} rounds", r.unanimous(), r.metrics.rounds());

    // two triangles and a bridge between them
    let g = Multigraph::new(6, &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1), (2, 3, 1)])?;
    let r = verify_2ec_distributed(&g, &cfg)?;
    println!("bridged graph: answer {:?}, bridge {:?}", r.unanimous(), r.nodes[0].bridge);
    for (v, node) in r.nodes.iter().enumerate() {
        if let Some(e) = node.own_bridge {
            println!("vertex {v} reports its parent edge {e}");
        }
    }
    Ok(())
}
