//! Central re-execution of the three covering passes with tree walks, used
//! to check the distributed run vertex by vertex.

use crate::graph::{EdgeId, Multigraph, RootedTree, VertexId};

use super::{FastNode, Fragmentation};

/// Maximal incoming edge of every vertex as (ancestor, origin), from parent walks.
pub fn maximal_incoming(g: &Multigraph, tree: &RootedTree) -> Vec<Option<(VertexId, EdgeId)>> {
    let mut best: Vec<Option<(VertexId, EdgeId)>> = vec![None; tree.n()];
    let rank = |x: (VertexId, EdgeId)| (tree.depth(x.0), x.1);
    for e in g.edges() {
        if tree.is_tree_edge(e.id) {
            continue;
        }
        let t = tree.lca_walk(e.u, e.v);
        for d in [e.u, e.v] {
            if d != t {
                let c = (t, e.id);
                if best[d as usize].is_none_or(|b| rank(c) < rank(b)) {
                    best[d as usize] = Some(c);
                }
            }
        }
    }
    best
}

fn mark_path(tree: &RootedTree, from: VertexId, anc: VertexId, covered: &mut [bool], only: impl Fn(VertexId) -> bool) {
    let mut x = from;
    while x != anc {
        if only(x) {
            covered[x as usize] = true;
        }
        x = tree.parent(x).unwrap();
    }
}

pub fn shadow_fast_tap(g: &Multigraph, tree: &RootedTree, frag: &Fragmentation) -> Vec<FastNode> {
    let n = tree.n();
    let r = tree.root();
    let best = maximal_incoming(g, tree);
    let rank = |x: (VertexId, EdgeId)| (tree.depth(x.0), x.1);
    let mut nodes = vec![FastNode::default(); n];
    let mut covered = vec![false; n];

    for v in 0..n as VertexId {
        if v != r && tree.is_leaf(v) {
            match best[v as usize] {
                Some((a, _)) => {
                    nodes[v as usize].leaf_added = true;
                    mark_path(tree, v, a, &mut covered, |_| true);
                }
                None => nodes[v as usize].bridge = true,
            }
        }
    }
    for v in 0..n {
        nodes[v].covered_after_leaf = covered[v];
    }

    // maximal edge leaving each fragment upward, with its holder
    let k = frag.count();
    let mut em: Vec<Option<((VertexId, EdgeId), VertexId)>> = vec![None; k];
    for x in 0..n as VertexId {
        let f = frag.fragment_of[x as usize] as usize;
        if let Some(b) = best[x as usize] {
            if tree.depth(b.0) < tree.depth(frag.roots[f]) && em[f].is_none_or(|m| rank(b) < rank(m.0)) {
                em[f] = Some((b, x));
            }
        }
    }
    let mut by_depth: Vec<usize> = (0..k).collect();
    by_depth.sort_by_key(|&f| std::cmp::Reverse(frag.tf_depth[f]));
    for &f in &by_depth {
        let rf = frag.roots[f];
        if rf == r || covered[rf as usize] {
            continue;
        }
        let pick = (0..k)
            .filter(|&h| tree.is_ancestor_walk(rf, frag.roots[h]))
            .filter_map(|h| em[h])
            .filter(|m| tree.depth(m.0 .0) < tree.depth(rf))
            .min_by_key(|m| rank(m.0));
        match pick {
            Some(((a, _), x)) => {
                nodes[x as usize].global_added = true;
                mark_path(tree, x, a, &mut covered, |_| true);
            }
            None => nodes[rf as usize].bridge = true,
        }
    }
    for v in 0..n {
        nodes[v].covered_after_global = covered[v];
    }

    for f in 0..k {
        let inside = |y: VertexId| frag.fragment_of[y as usize] as usize == f;
        let mut cov = covered.clone();
        let mut members: Vec<VertexId> = (0..n as VertexId).filter(|&y| inside(y)).collect();
        members.sort_by_key(|&y| std::cmp::Reverse(tree.depth(y)));
        for &v in &members {
            if v == frag.roots[f] || cov[v as usize] {
                continue;
            }
            let own = members
                .iter()
                .filter(|&&x| tree.is_ancestor_walk(v, x))
                .filter_map(|&x| best[x as usize].map(|b| (b, x)));
            let injected = (0..k)
                .filter(|&h| h != f && tree.is_ancestor_walk(v, frag.roots[h]))
                .filter_map(|h| em[h]);
            let pick = own.chain(injected).filter(|m| tree.depth(m.0 .0) < tree.depth(v)).min_by_key(|m| rank(m.0));
            match pick {
                Some(((a, _), x)) => {
                    nodes[x as usize].local_added = true;
                    mark_path(tree, x, a, &mut cov, inside);
                }
                None => nodes[v as usize].bridge = true,
            }
        }
    }
    nodes
}
