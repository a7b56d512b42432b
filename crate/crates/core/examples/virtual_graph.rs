//! From G to the ancestor-descendant graph G'.

use treeaug::graph::{Multigraph, RootedTree};
use treeaug::lca::assign_labels_sequential;
use treeaug::virtual_graph::{build_gprime_sequential, covered_set_virtual};

fn main() -> treeaug::Result<()> {
    // 0 is the root, 3 hangs below 1 and 4 below 2
    let g = Multigraph::new(5, &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 4, 1), (3, 4, 5), (0, 3, 2)])?;
    let t = RootedTree::from_edges(&g, 0, &[0, 1, 2, 3])?;
    let labels = assign_labels_sequential(&t);
    for ve in build_gprime_sequential(&g, &t, &labels) {
        println!(
            "origin {} -> ({:?} up to depth {}) weight {} covers {:?}",
            ve.origin,
            ve.desc_vertex,
            ve.anc.depth,
            ve.weight,
            covered_set_virtual(&t, &ve, ve.anc.depth)
        );
    }
    Ok(())
}
