//! Two-level labels: a local heavy-path label inside the fragment plus the
//! fragment's id, resolved against a directory of all global edges that every
//! vertex holds.

use crate::error::{Error, Result};
use crate::graph::{Multigraph, RootedTree, VertexId};
use crate::lca::{self, assign_labels_sequential, LcaLabel};
use crate::sim::Token;
use crate::virtual_graph::Scheme;

use super::fragment::Fragmentation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitLabel {
    /// Id of the fragment, i.e. of its root vertex.
    pub frag: VertexId,
    pub local: LcaLabel,
}

/// The contracted tree as reconstructed from the global edge records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directory {
    pub ids: Vec<VertexId>,
    pub parent: Vec<Option<u32>>,
    pub depth: Vec<u32>,
    /// Local label of the parent-side endpoint of each fragment's global edge.
    pub attach: Vec<Option<LcaLabel>>,
    /// Heavy-path labels of the fragments in the contracted tree.
    pub labels: Vec<LcaLabel>,
}

impl Directory {
    /// `records` holds one `(fragment, parent fragment, parent-side local label)` per global edge.
    pub fn from_records(root: VertexId, records: &[(VertexId, VertexId, LcaLabel)]) -> Result<Self> {
        let mut ids: Vec<VertexId> = records.iter().map(|r| r.0).chain([root]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != records.len() + 1 {
            return Err(Error::Internal("duplicate fragment in global edge records".into()));
        }
        let idx = |id: VertexId| {
            ids.binary_search(&id).map_err(|_| Error::Internal(format!("unknown fragment {id}")))
        };
        let mut parent = vec![None; ids.len()];
        let mut attach = vec![None; ids.len()];
        let mut edges = Vec::new();
        for (c, p, l) in records {
            let (ci, pi) = (idx(*c)?, idx(*p)?);
            parent[ci] = Some(pi as u32);
            attach[ci] = Some(l.clone());
            edges.push((ci as VertexId, pi as VertexId, 1));
        }
        let g = Multigraph::new(ids.len(), &edges)?;
        let t = RootedTree::from_edges(&g, idx(root)? as VertexId, &(0..edges.len() as u32).collect::<Vec<_>>())?;
        let depth = (0..ids.len() as VertexId).map(|f| t.depth(f)).collect();
        let labels = assign_labels_sequential(&t);
        Ok(Directory { ids, parent, depth, attach, labels })
    }

    /// The directory as a central observer would build it.
    pub fn from_fragmentation(tree: &RootedTree, frag: &Fragmentation, local: &[LcaLabel]) -> Self {
        let records: Vec<_> = frag
            .roots
            .iter()
            .filter_map(|&r| tree.parent(r).map(|p| (r, frag.roots[frag.fragment_of[p as usize] as usize], local[p as usize].clone())))
            .collect();
        Self::from_records(tree.root(), &records).expect("fragmentation is consistent")
    }

    pub fn count(&self) -> usize {
        self.ids.len()
    }

    pub fn index(&self, id: VertexId) -> usize {
        self.ids.binary_search(&id).expect("known fragment")
    }

    pub fn depth_of(&self, id: VertexId) -> u32 {
        self.depth[self.index(id)]
    }

    fn up_to(&self, mut f: usize, depth: u32) -> usize {
        while self.depth[f] > depth {
            f = self.parent[f].unwrap() as usize;
        }
        f
    }

    /// Is fragment `a` an ancestor of (or equal to) fragment `d`?
    pub fn frag_is_ancestor(&self, a: VertexId, d: VertexId) -> bool {
        let (a, d) = (self.index(a), self.index(d));
        self.depth[a] <= self.depth[d] && self.up_to(d, self.depth[a]) == a
    }

    /// Fragments of the contracted subtree below `id`, including it.
    pub fn subtree(&self, id: VertexId) -> Vec<VertexId> {
        self.ids.iter().copied().filter(|&x| self.frag_is_ancestor(id, x)).collect()
    }
}

/// Lowest common ancestor of two vertices from their split labels alone.
pub fn lca_from_split_labels(dir: &Directory, a: &SplitLabel, b: &SplitLabel) -> SplitLabel {
    if a.frag == b.frag {
        return SplitLabel { frag: a.frag, local: lca::lca_query(&a.local, &b.local) };
    }
    let (fa, fb) = (dir.index(a.frag), dir.index(b.frag));
    let d = lca::lca_query(&dir.labels[fa], &dir.labels[fb]).depth;
    let f = dir.up_to(fa, d);
    // the local label where each side enters the common fragment
    let entry = |x: usize, own: &LcaLabel| {
        if x == f {
            own.clone()
        } else {
            dir.attach[dir.up_to(x, d + 1)].clone().unwrap()
        }
    };
    let (la, lb) = (entry(fa, &a.local), entry(fb, &b.local));
    let mut local = lca::lca_query(&la, &lb);
    local.vertex = match () {
        _ if local == a.local && f == fa => a.local.vertex,
        _ if local == b.local && f == fb => b.local.vertex,
        _ => None,
    };
    SplitLabel { frag: dir.ids[f], local }
}

pub struct SplitScheme<'a> {
    pub dir: &'a Directory,
}

impl Scheme for SplitScheme<'_> {
    type Label = SplitLabel;

    fn lca(&self, a: &SplitLabel, b: &SplitLabel) -> SplitLabel {
        lca_from_split_labels(self.dir, a, b)
    }

    fn is_ancestor(&self, a: &SplitLabel, d: &SplitLabel) -> bool {
        &lca_from_split_labels(self.dir, a, d) == a
    }

    fn key(&self, l: &SplitLabel) -> u64 {
        ((self.dir.depth_of(l.frag) as u64) << 32) | l.local.depth as u64
    }

    fn encode(&self, l: &SplitLabel) -> Vec<Token> {
        let mut ts = vec![Token::Vertex(l.frag)];
        ts.extend(l.local.to_tokens());
        ts
    }

    fn encoded_len(&self, prefix: &[Token]) -> Option<usize> {
        prefix.get(1).map(|&h| 2 + LcaLabel::decode_header(h).2)
    }

    fn decode(&self, ts: &[Token]) -> Result<SplitLabel> {
        let Some(Token::Vertex(frag)) = ts.first() else {
            return Err(Error::Input("split label must start with a fragment id".into()));
        };
        Ok(SplitLabel { frag: *frag, local: LcaLabel::from_tokens(&ts[1..])? })
    }
}

/// Local labels computed centrally, one heavy-path labeling per fragment.
pub fn local_labels_sequential(tree: &RootedTree, frag: &Fragmentation) -> Vec<LcaLabel> {
    let forest = tree.split(&frag.cut());
    let heavy = lca::heavy_children(&forest);
    let mut labels: Vec<Option<LcaLabel>> = vec![None; tree.n()];
    for &v in forest.top_down() {
        let l = match forest.parent(v) {
            None => LcaLabel::root(v),
            Some(p) => labels[p as usize].as_ref().unwrap().child(v, heavy[p as usize] == Some(v)),
        };
        labels[v as usize] = Some(l);
    }
    labels.into_iter().map(Option::unwrap).collect()
}

pub fn split_labels_sequential(tree: &RootedTree, frag: &Fragmentation) -> (Directory, Vec<SplitLabel>) {
    let local = local_labels_sequential(tree, frag);
    let dir = Directory::from_fragmentation(tree, frag, &local);
    let labels = local
        .into_iter()
        .enumerate()
        .map(|(v, l)| SplitLabel { frag: frag.roots[frag.fragment_of[v] as usize], local: l })
        .collect();
    (dir, labels)
}
