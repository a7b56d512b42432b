//! Raising a connected spanning subgraph H to 2-edge-connectivity.

use treeaug::apps::augment_1_to_2;
use treeaug::gen::gen_random_2ec;
use treeaug::sim::RunConfig;

fn main() -> treeaug::Result<()> {
    let (g, t) = gen_random_2ec(30, 20, 4, Some((1, 50)))?;
    let mut h = t.tree_edges();
    // a few extra edges make H more than a tree
    h.extend(g.edges().iter().filter(|e| !t.is_tree_edge(e.id)).take(5).map(|e| e.id));
    let r = augment_1_to_2(&g, &h, &RunConfig::default())?;
    println!("|H| = {}, added {:?} of weight {} in {} rounds", h.len(), r.aug.edges, r.aug.weight, r.metrics.rounds());
    Ok(())
}
