//! Heavy-path labels, computed by the distributed program, answering LCA queries.

use treeaug::fast::fragment_decompose;
use treeaug::fast::split::split_labels_sequential;
use treeaug::fast::lca_from_split_labels;
use treeaug::gen::gen_random_tree_2ec;
use treeaug::lca::{lca_query, LabelProgram};
use treeaug::sim::{run, RunConfig};

fn main() -> treeaug::Result<()> {
    let (g, t) = gen_random_tree_2ec(40, 0, 11, None)?;
    let out = run(&g, &LabelProgram { tree: &t }, &RunConfig::default())?;
    let labels = out.outputs;
    println!("labelling took {} rounds, h = {}", out.stats.rounds, t.height());
    for v in [7u32, 19, 33] {
        let l = &labels[v as usize];
        println!("vertex {v}: depth {} words {:?} ({} tokens)", l.depth, l.words, l.token_len());
    }
    let a = lca_query(&labels[19], &labels[33]);
    let w = t.lca_walk(19, 33);
    println!("lca(19, 33) has depth {} and equals the label of {w}: {}", a.depth, a == labels[w as usize]);

    let frag = fragment_decompose(&t);
    let (dir, split) = split_labels_sequential(&t, &frag);
    println!("{} fragments rooted at {:?}", frag.count(), frag.roots);
    let s = lca_from_split_labels(&dir, &split[19], &split[33]);
    println!("split label lca: fragment {} local depth {}, same vertex: {}", s.frag, s.local.depth, s == split[w as usize]);
    Ok(())
}
