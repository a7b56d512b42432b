//! Instance generators. Every generator returns a graph together with the
//! spanning tree to augment.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, RootedTree, VertexId, Weight};

pub type Instance = (Multigraph, RootedTree);

fn build(n: usize, edges: &[(VertexId, VertexId, Weight)], tree: &[u32], root: VertexId) -> Result<Instance> {
    let g = Multigraph::new(n, edges)?;
    let t = RootedTree::from_edges(&g, root, tree)?;
    Ok((g, t))
}

/// `C_n` with the path `v0 .. v(n-1)` as tree, rooted at `v0`.
pub fn gen_cycle(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Input("a cycle needs at least 2 vertices".into()));
    }
    let edges: Vec<_> = (0..n as u32).map(|i| (i, (i + 1) % n as u32, 1)).collect();
    build(n, &edges, &(0..n as u32 - 1).collect::<Vec<_>>(), 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathVariant {
    G1,
    G2,
}

/// Path `v0 .. v2k` with chords `{v2i, v2i+2}`; `G2` adds `{v0, v2k}`.
/// Weighted: the long edge weighs 1 and every chord `alpha + 1`.
pub fn gen_lb_path(k: usize, variant: PathVariant, weighted: bool, alpha: Weight) -> Result<Instance> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::Input(format!("k must be a positive even number, got {k}")));
    }
    let n = 2 * k + 1;
    let mut edges: Vec<_> = (0..2 * k as u32).map(|i| (i, i + 1, 1)).collect();
    let chord = if weighted { alpha + 1 } else { 1 };
    edges.extend((0..k as u32).map(|i| (2 * i, 2 * i + 2, chord)));
    if variant == PathVariant::G2 {
        edges.push((0, 2 * k as u32, 1));
    }
    build(n, &edges, &(0..2 * k as u32).collect::<Vec<_>>(), 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundParams {
    /// Number of paths, and length of the input strings.
    pub k: usize,
    pub d: usize,
    pub p: u32,
    pub a: Vec<bool>,
    pub b: Vec<bool>,
    pub alpha: Weight,
}

impl LowerBoundParams {
    pub fn new(k: usize, d: usize, p: u32, a: &str, b: &str, alpha: Weight) -> Result<Self> {
        let bits = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Input(format!("bad bit {c:?}"))),
                })
                .collect()
        };
        Ok(LowerBoundParams { k, d, p, a: bits(a)?, b: bits(b)?, alpha })
    }

    /// All-zero strings: the disjoint case.
    pub fn zeros(k: usize, d: usize, p: u32, alpha: Weight) -> Self {
        LowerBoundParams { k, d, p, a: vec![false; k], b: vec![false; k], alpha }
    }

    pub fn x(&self) -> Weight {
        self.alpha * self.k as Weight + 1
    }

    pub fn path_len(&self) -> usize {
        self.d.pow(self.p)
    }

    pub fn disjoint(&self) -> bool {
        self.a.iter().zip(&self.b).all(|(x, y)| !(x & y))
    }
}

/// `k` paths of `d^p` vertices hanging off the leaves of a complete `d`-ary
/// tree of depth `p`, with doubled path and tree edges, rooted at the first
/// leaf. With `simple`, every tree edge is subdivided instead of doubled.
pub fn gen_lb_disjointness(q: &LowerBoundParams, simple: bool) -> Result<Instance> {
    if q.a.len() != q.k || q.b.len() != q.k {
        return Err(Error::Input(format!("input strings must have length k = {}", q.k)));
    }
    if q.k == 0 || q.d < 2 || q.p < 1 {
        return Err(Error::Input("need k >= 1, d >= 2, p >= 1".into()));
    }
    let len = q.path_len();
    let s_size = (q.d.pow(q.p + 1) - 1) / (q.d - 1);
    let leaf = |j: usize| (s_size - len + j) as VertexId;
    let pv = |i: usize, j: usize| (s_size + i * len + j) as VertexId;
    let n = s_size + q.k * len;
    let x = q.x();
    // (u, v, weight, in tree)
    let mut all: Vec<(VertexId, VertexId, Weight, bool)> = Vec::new();
    for c in 1..s_size {
        let p = ((c - 1) / q.d) as VertexId;
        all.push((p, c as VertexId, 0, true));
        all.push((p, c as VertexId, 0, false));
    }
    for i in 0..q.k {
        for j in 0..len - 1 {
            all.push((pv(i, j), pv(i, j + 1), 0, true));
            all.push((pv(i, j), pv(i, j + 1), 0, false));
        }
        all.push((leaf(0), pv(i, 0), 0, true));
        all.push((leaf(0), pv(i, 0), if q.a[i] { x } else { 1 }, false));
        for j in 1..len - 1 {
            all.push((leaf(j), pv(i, j), x, false));
        }
        all.push((leaf(len - 1), pv(i, len - 1), if q.b[i] { x } else { 1 }, false));
    }
    let mut edges = Vec::new();
    let mut tree = Vec::new();
    let mut extra = n as VertexId;
    for (u, v, w, t) in all {
        if t && simple {
            tree.extend([edges.len() as u32, edges.len() as u32 + 1]);
            edges.push((u, extra, 0));
            edges.push((extra, v, 0));
            extra += 1;
        } else {
            if t {
                tree.push(edges.len() as u32);
            }
            edges.push((u, v, w));
        }
    }
    build(extra as usize, &edges, &tree, leaf(0))
}

/// Weights drawn uniformly from `lo..=hi`, or all 1.
fn draw(rng: &mut ChaCha8Rng, weights: Option<(Weight, Weight)>) -> Weight {
    weights.map_or(1, |(lo, hi)| rng.gen_range(lo..=hi))
}

/// A random Hamiltonian cycle plus `extra` random chords, and a random
/// spanning tree of it rooted at a random vertex.
pub fn gen_random_2ec(n: usize, extra: usize, seed: u64, weights: Option<(Weight, Weight)>) -> Result<Instance> {
    if n < 3 {
        return Err(Error::Input("need at least 3 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<VertexId> = (0..n as VertexId).collect();
    perm.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 0..n {
        let (u, v) = (perm[i], perm[(i + 1) % n]);
        edges.push((u.min(v), u.max(v), draw(&mut rng, weights)));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n as VertexId);
        let mut v = rng.gen_range(0..n as VertexId - 1);
        if v >= u {
            v += 1;
        }
        edges.push((u.min(v), u.max(v), draw(&mut rng, weights)));
    }
    let g = Multigraph::new(n, &edges)?;
    let tree = random_spanning_tree(&g, &mut rng);
    let root = rng.gen_range(0..n as VertexId);
    let t = RootedTree::from_edges(&g, root, &tree)?;
    Ok((g, t))
}

/// Kruskal over a random edge order.
fn random_spanning_tree(g: &Multigraph, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut ids: Vec<u32> = (0..g.m() as u32).collect();
    ids.shuffle(rng);
    let mut comp: Vec<u32> = (0..g.n() as u32).collect();
    fn find(c: &mut [u32], mut x: u32) -> u32 {
        while c[x as usize] != x {
            c[x as usize] = c[c[x as usize] as usize];
            x = c[x as usize];
        }
        x
    }
    let mut out = Vec::new();
    for e in ids {
        let ed = g.edge(e);
        let (a, b) = (find(&mut comp, ed.u), find(&mut comp, ed.v));
        if a != b {
            comp[a as usize] = b;
            out.push(e);
        }
    }
    out.sort_unstable();
    out
}

/// A random recursive tree rooted at 0, plus an edge from every leaf to the
/// root and `extra` random edges. Always 2-edge-connected.
pub fn gen_random_tree_2ec(n: usize, extra: usize, seed: u64, weights: Option<(Weight, Weight)>) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Input("need at least 2 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut has_child = vec![false; n];
    for v in 1..n as VertexId {
        let span = rng.gen_range(1..=v);
        let p = rng.gen_range(v - span..v);
        has_child[p as usize] = true;
        edges.push((p, v, draw(&mut rng, weights)));
    }
    for v in 1..n as VertexId {
        if !has_child[v as usize] {
            edges.push((0, v, draw(&mut rng, weights)));
        }
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n as VertexId);
        let mut v = rng.gen_range(0..n as VertexId - 1);
        if v >= u {
            v += 1;
        }
        edges.push((u, v, draw(&mut rng, weights)));
    }
    build(n, &edges, &(0..n as u32 - 1).collect::<Vec<_>>(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format;
    use crate::graph::is_two_edge_connected;

    #[test]
    fn small_families() {
        let (g, t) = gen_cycle(3).unwrap();
        assert_eq!((g.n(), g.m(), t.height()), (3, 3, 2));
        let (g, _) = gen_lb_path(2, PathVariant::G1, false, 1).unwrap();
        assert_eq!((g.n(), g.m()), (5, 6));
        let (g, _) = gen_lb_path(2, PathVariant::G2, true, 2).unwrap();
        assert_eq!(g.m(), 7);
        assert_eq!(g.weight(6), 1);
        assert_eq!(g.weight(4), 3);
        assert!(gen_lb_path(3, PathVariant::G1, false, 1).is_err());
        let (g, _) = gen_random_2ec(4, 0, 1, None).unwrap();
        assert_eq!(g.m(), 4);
        assert!(is_two_edge_connected(&g));
    }

    #[test]
    fn disjointness_shape() {
        let q = LowerBoundParams::new(2, 2, 2, "01", "10", 2).unwrap();
        let (g, t) = gen_lb_disjointness(&q, false).unwrap();
        assert_eq!(g.n(), 7 + 2 * 4);
        assert!(g.diameter().unwrap() <= 2 * 2 + 2);
        for (d, p) in [(2, 3), (3, 2), (2, 5)] {
            let (g, _) = gen_lb_disjointness(&LowerBoundParams::zeros(3, d, p, 2), false).unwrap();
            assert_eq!(g.diameter().unwrap(), 2 * p + 2);
        }
        assert_eq!(t.height() as usize, q.path_len());
        assert!(is_two_edge_connected(&g));
        let (g3, t3) = gen_lb_disjointness(&q, true).unwrap();
        assert_eq!(g3.n(), 2 * g.n() - 1);
        assert_eq!(t3.height(), 2 * t.height());
        let mut pairs: Vec<_> = g3.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
        pairs.sort_unstable();
        pairs.dedup();
        assert_eq!(pairs.len(), g3.m());
        assert!(LowerBoundParams::new(2, 2, 1, "0", "00", 2).and_then(|q| gen_lb_disjointness(&q, false)).is_err());
    }

    #[test]
    fn generators_are_seeded_and_round_trip() {
        let a = gen_random_2ec(12, 6, 99, Some((1, 100))).unwrap();
        let b = gen_random_2ec(12, 6, 99, Some((1, 100))).unwrap();
        let ta = format::write(&a.0, Some(&a.1));
        assert_eq!(ta, format::write(&b.0, Some(&b.1)));
        let back = format::parse(&ta).unwrap();
        assert_eq!(format::write(&back.graph, back.tree.as_ref()), ta);
        for seed in 0..30 {
            let (g, _) = gen_random_tree_2ec(40, 5, seed, None).unwrap();
            assert!(is_two_edge_connected(&g));
            let (g, _) = gen_random_2ec(30, 4, seed, None).unwrap();
            assert!(is_two_edge_connected(&g));
        }
    }
}
