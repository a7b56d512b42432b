//! Splitting a rooted tree into few fragments of small diameter.

use crate::graph::{EdgeId, Multigraph, RootedTree, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragmentation {
    /// Fragment index of every vertex.
    pub fragment_of: Vec<u32>,
    /// Root vertex of every fragment, ascending; the fragment id is its root's id.
    pub roots: Vec<VertexId>,
    /// Tree edges whose endpoints lie in different fragments, ascending.
    pub global_edges: Vec<EdgeId>,
    /// Parent fragment of every fragment in the contracted tree.
    pub tf_parent: Vec<Option<u32>>,
    pub tf_depth: Vec<u32>,
    pub max_diameter: u32,
}

impl Fragmentation {
    pub fn count(&self) -> usize {
        self.roots.len()
    }

    pub fn is_root(&self, v: VertexId) -> bool {
        self.roots[self.fragment_of[v as usize] as usize] == v
    }

    /// Per-vertex flags marking fragment roots.
    pub fn cut(&self) -> Vec<bool> {
        (0..self.fragment_of.len() as VertexId).map(|v| self.is_root(v)).collect()
    }

    /// The contracted tree: one vertex per fragment, one edge per global edge.
    pub fn contracted(&self) -> (Multigraph, RootedTree) {
        let edges: Vec<_> =
            (0..self.count()).filter_map(|f| self.tf_parent[f].map(|p| (f as VertexId, p, 1))).collect();
        let g = Multigraph::new(self.count(), &edges).expect("contracted tree is well formed");
        let ids: Vec<EdgeId> = (0..edges.len() as EdgeId).collect();
        let root = self.tf_parent.iter().position(Option::is_none).unwrap() as VertexId;
        let t = RootedTree::from_edges(&g, root, &ids).expect("contracted tree spans");
        (g, t)
    }
}

pub fn threshold(n: usize) -> usize {
    (n as f64).sqrt().ceil().max(1.0) as usize
}

/// Bottom-up greedy splitting: a vertex whose pending subtree reaches the
/// size threshold becomes a fragment root and is detached from its parent.
pub fn fragment_decompose(tree: &RootedTree) -> Fragmentation {
    let n = tree.n();
    let theta = threshold(n) as u32;
    let mut pending = vec![1u32; n];
    let mut cut = vec![false; n];
    for &v in tree.top_down().iter().rev() {
        for &(c, _) in tree.children(v) {
            if !cut[c as usize] {
                pending[v as usize] += pending[c as usize];
            }
        }
        if pending[v as usize] >= theta || v == tree.root() {
            cut[v as usize] = true;
        }
    }
    let roots: Vec<VertexId> = (0..n as VertexId).filter(|&v| cut[v as usize]).collect();
    let mut fragment_of = vec![0u32; n];
    for &v in tree.top_down() {
        fragment_of[v as usize] = if cut[v as usize] {
            roots.binary_search(&v).unwrap() as u32
        } else {
            fragment_of[tree.parent(v).unwrap() as usize]
        };
    }
    let mut tf_parent = vec![None; roots.len()];
    let mut global_edges = Vec::new();
    for (f, &r) in roots.iter().enumerate() {
        if let Some((p, e)) = tree.parent_link(r) {
            tf_parent[f] = Some(fragment_of[p as usize]);
            global_edges.push(e);
        }
    }
    global_edges.sort_unstable();
    let mut tf_depth = vec![0u32; roots.len()];
    for &v in tree.top_down() {
        if cut[v as usize] {
            let f = fragment_of[v as usize] as usize;
            tf_depth[f] = tf_parent[f].map_or(0, |p| tf_depth[p as usize] + 1);
        }
    }
    // longest downward path inside the fragment, and the best path through each vertex
    let mut down = vec![0u32; n];
    let mut max_diameter = 0;
    for &v in tree.top_down().iter().rev() {
        let (mut a, mut b) = (0, 0);
        for &(c, _) in tree.children(v) {
            if cut[c as usize] {
                continue;
            }
            let d = down[c as usize] + 1;
            if d > a {
                b = a;
                a = d;
            } else if d > b {
                b = d;
            }
        }
        down[v as usize] = a;
        max_diameter = max_diameter.max(a + b);
    }
    Fragmentation { fragment_of, roots, global_edges, tf_parent, tf_depth, max_diameter }
}
