//! Multigraphs with stable edge ids, rooted spanning trees, and the
//! sequential reference routines every other module is checked against.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;
pub type Weight = u64;

/// Sentinel for "no cover"; never a valid input weight.
pub const INF: Weight = u64::MAX;
/// Largest accepted edge weight.
pub const MAX_WEIGHT: Weight = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub w: Weight,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected weighted multigraph. Edge ids are dense and follow input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Multigraph {
    pub fn new(n: usize, edges: &[(VertexId, VertexId, Weight)]) -> Result<Self> {
        if n > u32::MAX as usize / 2 {
            return Err(Error::Input(format!("too many vertices: {n}")));
        }
        let mut adj = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(edges.len());
        for (i, &(u, v, w)) in edges.iter().enumerate() {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Input(format!("edge {i}: endpoint out of range ({u},{v}) with n={n}")));
            }
            if u == v {
                return Err(Error::Input(format!("edge {i}: self-loop at {u}")));
            }
            if w > MAX_WEIGHT {
                return Err(Error::Input(format!("edge {i}: weight {w} exceeds 2^62")));
            }
            let id = i as EdgeId;
            adj[u as usize].push((id, v));
            adj[v as usize].push((id, u));
            out.push(Edge { id, u, v, w });
        }
        Ok(Multigraph { n, edges: out, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, e: EdgeId) -> Weight {
        self.edges[e as usize].w
    }

    pub fn adj(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adj[v as usize]
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1)
    }

    /// Same endpoints and ids, different weights.
    pub fn with_weights(&self, f: impl Fn(&Edge) -> Weight) -> Result<Self> {
        let list: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, f(e))).collect();
        Multigraph::new(self.n, &list)
    }

    /// Subgraph on the same vertex set keeping only edges for which `keep` holds.
    /// Edge ids are renumbered; the returned vector maps new id to old id.
    pub fn filter_edges(&self, keep: impl Fn(&Edge) -> bool) -> (Multigraph, Vec<EdgeId>) {
        let mut map = Vec::new();
        let mut list = Vec::new();
        for e in &self.edges {
            if keep(e) {
                map.push(e.id);
                list.push((e.u, e.v, e.w));
            }
        }
        (Multigraph::new(self.n, &list).expect("subgraph of a valid graph"), map)
    }

    /// Hop distances from `s`; `u32::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, s: VertexId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        let mut q = VecDeque::new();
        dist[s as usize] = 0;
        q.push_back(s);
        while let Some(x) = q.pop_front() {
            for &(_, y) in &self.adj[x as usize] {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    q.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_distances(0).iter().all(|&d| d != u32::MAX)
    }

    pub fn eccentricity(&self, s: VertexId) -> u32 {
        self.bfs_distances(s).into_iter().max().unwrap_or(0)
    }

    /// Exact diameter by BFS from every vertex.
    pub fn diameter(&self) -> Result<u32> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok((0..self.n as VertexId).map(|s| self.eccentricity(s)).max().unwrap_or(0))
    }

    /// Lower bound on the diameter from a few double sweeps; exact on trees.
    pub fn diameter_lower_bound(&self) -> u32 {
        if self.n == 0 {
            return 0;
        }
        let mut best = 0;
        let mut s = 0;
        for _ in 0..4 {
            let d = self.bfs_distances(s);
            let (far, &ecc) = d.iter().enumerate().max_by_key(|&(i, &x)| (x, std::cmp::Reverse(i))).unwrap();
            if ecc <= best && s != 0 {
                break;
            }
            best = best.max(ecc);
            s = far as VertexId;
        }
        best
    }
}

/// Spanning tree of a multigraph, rooted, with parent edges recorded by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: VertexId,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<u32>,
    height: u32,
    children: Vec<Vec<(VertexId, EdgeId)>>,
    tree_edge: Vec<bool>,
    order: Vec<VertexId>,
}

impl RootedTree {
    /// Roots the given tree edge set at `root`. Fails unless the edges form a spanning tree.
    pub fn from_edges(g: &Multigraph, root: VertexId, tree_edges: &[EdgeId]) -> Result<Self> {
        let n = g.n();
        if root as usize >= n {
            return Err(Error::Input(format!("root {root} out of range")));
        }
        if tree_edges.len() + 1 != n {
            return Err(Error::Input(format!("a spanning tree needs {} edges, got {}", n - 1, tree_edges.len())));
        }
        let mut is_tree = vec![false; g.m()];
        for &e in tree_edges {
            if e as usize >= g.m() {
                return Err(Error::Input(format!("tree edge {e} out of range")));
            }
            if is_tree[e as usize] {
                return Err(Error::Input(format!("tree edge {e} listed twice")));
            }
            is_tree[e as usize] = true;
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root as usize] = true;
        let mut q = VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            for &(e, y) in g.adj(x) {
                if is_tree[e as usize] && !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((x, e));
                    q.push_back(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Input("tree edges do not span the graph".into()));
        }
        Ok(Self::from_parents(root, parent, is_tree))
    }

    fn from_parents(root: VertexId, parent: Vec<Option<(VertexId, EdgeId)>>, tree_edge: Vec<bool>) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some((p, e)) = *p {
                children[p as usize].push((v as VertexId, e));
            }
        }
        let mut depth = vec![0u32; n];
        let mut order = Vec::with_capacity(n);
        order.push(root);
        order.extend((0..n as VertexId).filter(|&v| v != root && parent[v as usize].is_none()));
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for &(c, _) in &children[x as usize] {
                depth[c as usize] = depth[x as usize] + 1;
                order.push(c);
            }
            i += 1;
        }
        let height = depth.iter().copied().max().unwrap_or(0);
        RootedTree { root, parent, depth, height, children, tree_edge, order }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Cuts the parent edge of every marked vertex, leaving a forest of subtrees
    /// rooted at the marked vertices (and at the original root). Only the kept
    /// edges count as tree edges of the result.
    pub fn split(&self, cut: &[bool]) -> RootedTree {
        let mut tree_edge = vec![false; self.tree_edge.len()];
        let parent: Vec<_> = (0..self.n())
            .map(|v| {
                let p = if cut[v] { None } else { self.parent[v] };
                if let Some((_, e)) = p {
                    tree_edge[e as usize] = true;
                }
                p
            })
            .collect();
        Self::from_parents(self.root, parent, tree_edge)
    }

    /// Roots of the forest: the root first, then vertices without a parent in id order.
    pub fn roots(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.order.iter().copied().take_while(|&v| v == self.root || self.parent[v as usize].is_none())
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v as usize].map(|(p, _)| p)
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.parent[v as usize].map(|(_, e)| e)
    }

    pub fn parent_link(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.parent[v as usize]
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v as usize]
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Children with their tree edges, in ascending vertex id order.
    pub fn children(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.children[v as usize]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v as usize].is_empty()
    }

    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.tree_edge.get(e as usize).copied().unwrap_or(false)
    }

    /// Tree edge ids in ascending order.
    pub fn tree_edges(&self) -> Vec<EdgeId> {
        (0..self.tree_edge.len() as EdgeId).filter(|&e| self.tree_edge[e as usize]).collect()
    }

    /// Vertices in BFS order from the root; reversing gives a valid bottom-up order.
    pub fn top_down(&self) -> &[VertexId] {
        &self.order
    }

    /// Endpoint of a tree edge that is farther from the root.
    pub fn lower_endpoint(&self, g: &Multigraph, e: EdgeId) -> VertexId {
        let ed = g.edge(e);
        if self.parent_edge(ed.u) == Some(e) {
            ed.u
        } else {
            ed.v
        }
    }

    /// Lowest common ancestor by walking parent pointers.
    pub fn lca_walk(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        while self.depth(a) > self.depth(b) {
            a = self.parent(a).unwrap();
        }
        while self.depth(b) > self.depth(a) {
            b = self.parent(b).unwrap();
        }
        while a != b {
            a = self.parent(a).unwrap();
            b = self.parent(b).unwrap();
        }
        a
    }

    pub fn is_ancestor_walk(&self, a: VertexId, mut d: VertexId) -> bool {
        while self.depth(d) > self.depth(a) {
            d = self.parent(d).unwrap();
        }
        a == d
    }

    /// Ancestors of `v` from its parent up to the root.
    pub fn ancestors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut x = v;
        while let Some(p) = self.parent(x) {
            out.push(p);
            x = p;
        }
        out
    }

    pub fn subtree_sizes(&self) -> Vec<u32> {
        let mut size = vec![1u32; self.n()];
        for &v in self.order.iter().rev() {
            if let Some(p) = self.parent(v) {
                size[p as usize] += size[v as usize];
            }
        }
        size
    }
}

/// Non-tree edges added to a tree, with their total weight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Augmentation {
    pub edges: Vec<EdgeId>,
    pub weight: Weight,
}

impl Augmentation {
    /// Sorts and dedups `ids`; rejects tree edges.
    pub fn new(g: &Multigraph, t: &RootedTree, mut ids: Vec<EdgeId>) -> Result<Self> {
        ids.sort_unstable();
        ids.dedup();
        let mut weight: Weight = 0;
        for &e in &ids {
            if e as usize >= g.m() {
                return Err(Error::Input(format!("edge {e} out of range")));
            }
            if t.is_tree_edge(e) {
                return Err(Error::TreeEdge(e));
            }
            weight = weight.saturating_add(g.weight(e));
        }
        Ok(Augmentation { edges: ids, weight })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Bridges of a connected multigraph, ascending by id. Parallel edges are never bridges.
pub fn find_bridges(g: &Multigraph) -> Result<Vec<EdgeId>> {
    let n = g.n();
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut bridges = Vec::new();
    let mut timer = 0u32;
    // (vertex, edge used to enter it, next adjacency index)
    let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(0, None, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    while let Some(top) = stack.last_mut() {
        let (x, via) = (top.0, top.1);
        if top.2 < g.adj(x).len() {
            let (e, y) = g.adj(x)[top.2];
            top.2 += 1;
            if Some(e) == via {
                continue;
            }
            if disc[y as usize] == u32::MAX {
                disc[y as usize] = timer;
                low[y as usize] = timer;
                timer += 1;
                stack.push((y, Some(e), 0));
            } else {
                low[x as usize] = low[x as usize].min(disc[y as usize]);
            }
        } else {
            stack.pop();
            if let (Some(e), Some(&(p, _, _))) = (via, stack.last()) {
                low[p as usize] = low[p as usize].min(low[x as usize]);
                if low[x as usize] > disc[p as usize] {
                    bridges.push(e);
                }
            }
        }
    }
    bridges.sort_unstable();
    Ok(bridges)
}

pub fn is_two_edge_connected(g: &Multigraph) -> bool {
    matches!(find_bridges(g), Ok(b) if b.is_empty())
}

/// Tree edges on the unique u–v path.
pub fn tree_path_edges(t: &RootedTree, mut u: VertexId, mut v: VertexId) -> Vec<EdgeId> {
    let mut up = Vec::new();
    let mut down = Vec::new();
    while t.depth(u) > t.depth(v) {
        up.push(t.parent_edge(u).unwrap());
        u = t.parent(u).unwrap();
    }
    while t.depth(v) > t.depth(u) {
        down.push(t.parent_edge(v).unwrap());
        v = t.parent(v).unwrap();
    }
    while u != v {
        up.push(t.parent_edge(u).unwrap());
        down.push(t.parent_edge(v).unwrap());
        u = t.parent(u).unwrap();
        v = t.parent(v).unwrap();
    }
    down.reverse();
    up.extend(down);
    up
}

/// Does non-tree edge `e` cover tree edge `f`?
pub fn covers_ref(g: &Multigraph, t: &RootedTree, e: EdgeId, f: EdgeId) -> Result<bool> {
    if t.is_tree_edge(e) {
        return Err(Error::TreeEdge(e));
    }
    let ed = g.edge(e);
    Ok(tree_path_edges(t, ed.u, ed.v).contains(&f))
}

/// BFS tree; each vertex's parent is its lowest-id neighbor one level up,
/// using the lowest-id parallel edge.
pub fn bfs_tree(g: &Multigraph, root: VertexId) -> Result<RootedTree> {
    if root as usize >= g.n() {
        return Err(Error::Input(format!("root {root} out of range")));
    }
    let dist = g.bfs_distances(root);
    if dist.contains(&u32::MAX) {
        return Err(Error::Disconnected);
    }
    let mut tree = Vec::with_capacity(g.n().saturating_sub(1));
    for v in 0..g.n() as VertexId {
        if v == root {
            continue;
        }
        let best = g
            .adj(v)
            .iter()
            .filter(|&&(_, y)| dist[y as usize] + 1 == dist[v as usize])
            .min_by_key(|&&(e, y)| (y, e))
            .unwrap();
        tree.push(best.0);
    }
    RootedTree::from_edges(g, root, &tree)
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n as u32).collect())
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut x = x;
        while self.0[x as usize] != r {
            let nx = self.0[x as usize];
            self.0[x as usize] = r;
            x = nx;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b) as usize] = a.min(b);
        true
    }
}

/// Minimum spanning tree by Kruskal, ties by lowest edge id, rooted at `root`.
pub fn mst_tree(g: &Multigraph, root: VertexId) -> Result<RootedTree> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut order: Vec<&Edge> = g.edges().iter().collect();
    order.sort_by_key(|e| (e.w, e.id));
    let mut dsu = Dsu::new(g.n());
    let tree: Vec<EdgeId> = order.into_iter().filter(|e| dsu.union(e.u, e.v)).map(|e| e.id).collect();
    RootedTree::from_edges(g, root, &tree)
}

/// Connected components of `g` restricted to edges with `keep`; returns a label per vertex.
pub fn components(g: &Multigraph, keep: impl Fn(&Edge) -> bool) -> Vec<u32> {
    let mut dsu = Dsu::new(g.n());
    for e in g.edges() {
        if keep(e) {
            dsu.union(e.u, e.v);
        }
    }
    (0..g.n() as u32).map(|v| dsu.find(v)).collect()
}
