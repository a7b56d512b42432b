//! 2-ECSS approximations, 1-to-2 connectivity augmentation and distributed
//! 2-edge-connectivity verification, all built on the tree augmentation pipelines.

use crate::error::{Error, Result};
use crate::fast::{fragment, log_star};
use crate::graph::{components, Augmentation, EdgeId, Multigraph, RootedTree, VertexId, Weight};
use crate::sim::bfs::DistBfs;
use crate::sim::collect::Convergecast;
use crate::sim::{Metrics, RunConfig, Session};
use crate::tap::{a_tap_phases, run_a_aug};
use crate::lca::LabelProgram;
use crate::virtual_graph::{Exchange, Plain};
use crate::wtap::a_wtap_phases;

#[derive(Clone, Debug)]
pub struct EcssResult {
    /// Tree edges followed by the augmentation, ascending.
    pub edges: Vec<EdgeId>,
    pub weight: Weight,
    pub tree: RootedTree,
    pub aug: Augmentation,
    pub metrics: Metrics,
    pub transcript: String,
}

fn dist_bfs(s: &mut Session, root: VertexId) -> Result<RootedTree> {
    let nodes = s.run("bfs", &DistBfs { root })?;
    let edges: Vec<EdgeId> = nodes.iter().filter_map(|b| b.parent.map(|(_, e)| e)).collect();
    RootedTree::from_edges(s.graph, root, &edges)
}

fn bridge_error(tree: &RootedTree, v: VertexId) -> Error {
    Error::Bridge { vertex: v, edge: tree.parent_edge(v).unwrap() }
}

fn finish(g: &Multigraph, s: Session, tree: RootedTree, aug: Augmentation, cfg: &RunConfig) -> EcssResult {
    let mut edges = tree.tree_edges();
    edges.extend(&aug.edges);
    edges.sort_unstable();
    let weight = edges.iter().map(|&e| g.weight(e)).sum();
    let transcript = if cfg.transcript { s.transcript_text() } else { String::new() };
    EcssResult { edges, weight, tree, aug, metrics: s.metrics, transcript }
}

/// BFS tree from vertex 0 plus an A_TAP augmentation: at most 2(n-1) edges.
pub fn two_ecss_unweighted(g: &Multigraph, cfg: &RunConfig) -> Result<EcssResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut s = Session::new(g, *cfg);
    let tree = dist_bfs(&mut s, 0)?;
    let (aug, _, nodes, _, _) = a_tap_phases(&mut s, &tree)?;
    if let Some(v) = nodes.iter().position(|n| n.bridge) {
        return Err(bridge_error(&tree, v as VertexId));
    }
    Ok(finish(g, s, tree, aug, cfg))
}

/// Minimum spanning tree plus an A_wTAP augmentation.
/// The MST is computed centrally and charged as a nominal phase.
pub fn two_ecss_weighted(g: &Multigraph, cfg: &RunConfig) -> Result<EcssResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut s = Session::new(g, *cfg);
    let bfs = dist_bfs(&mut s, 0)?;
    let tree = crate::graph::mst_tree(g, 0)?;
    s.charge("mst", bfs.height() + fragment::threshold(n) as u32 * log_star(n).max(1))?;
    let (aug, _, nodes) = a_wtap_phases(&mut s, &tree)?;
    if let Some(v) = nodes.iter().position(|n| n.bridge) {
        return Err(bridge_error(&tree, v as VertexId));
    }
    Ok(finish(g, s, tree, aug, cfg))
}

#[derive(Clone, Debug)]
pub struct Aug12Result {
    /// Edges outside H, weighed with the original weights.
    pub aug: Augmentation,
    /// BFS tree of H rooted at vertex 0.
    pub tree: RootedTree,
    pub metrics: Metrics,
    pub transcript: String,
}

/// The graph A_wTAP runs on: H's edges cost nothing.
pub fn zero_weight_h(g: &Multigraph, h: &[EdgeId]) -> Result<Multigraph> {
    g.with_weights(|e| if h.contains(&e.id) { 0 } else { e.w })
}

/// Makes the connected spanning subgraph H (given by edge ids) 2-edge-connected.
pub fn augment_1_to_2(g: &Multigraph, h: &[EdgeId], cfg: &RunConfig) -> Result<Aug12Result> {
    if let Some(&e) = h.iter().find(|&&e| e as usize >= g.m()) {
        return Err(Error::Input(format!("edge {e} of H out of range")));
    }
    let comp = components(g, |e| h.contains(&e.id));
    if comp.iter().any(|&c| c != comp[0]) {
        return Err(Error::Input("H is not connected and spanning".into()));
    }
    let (hg, map) = g.filter_edges(|e| h.contains(&e.id));
    let mut metrics = Metrics::default();
    let mut transcript = String::new();
    let mut hs = Session::new(&hg, *cfg);
    let local = dist_bfs(&mut hs, 0)?;
    metrics.extend(&hs.metrics);
    if cfg.transcript {
        transcript += &hs.transcript_text();
    }
    let tree_edges: Vec<EdgeId> = local.tree_edges().iter().map(|&e| map[e as usize]).collect();
    let tree = RootedTree::from_edges(g, 0, &tree_edges)?;

    let g0 = zero_weight_h(g, h)?;
    let mut s = Session::new(&g0, *cfg);
    let (chosen, _, nodes) = a_wtap_phases(&mut s, &tree)?;
    if let Some(v) = nodes.iter().position(|n| n.bridge) {
        return Err(bridge_error(&tree, v as VertexId));
    }
    metrics.extend(&s.metrics);
    if cfg.transcript {
        transcript += &s.transcript_text();
    }
    let outside: Vec<EdgeId> = chosen.edges.into_iter().filter(|e| !h.contains(e)).collect();
    let aug = Augmentation::new(g, &tree, outside)?;
    Ok(Aug12Result { aug, tree, metrics, transcript })
}

/// What every vertex outputs after verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyNode {
    pub two_edge_connected: bool,
    /// Smallest bridge id, known to everyone.
    pub bridge: Option<EdgeId>,
    /// This vertex's parent edge in the BFS tree is a bridge.
    pub own_bridge: Option<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct VerifyResult {
    pub nodes: Vec<VerifyNode>,
    pub metrics: Metrics,
    pub transcript: String,
}

impl VerifyResult {
    /// The common answer, or `None` if vertices disagree.
    pub fn unanimous(&self) -> Option<bool> {
        let first = self.nodes.first()?;
        self.nodes.iter().all(|o| o.two_edge_connected == first.two_edge_connected && o.bridge == first.bridge).then_some(first.two_edge_connected)
    }
}

/// BFS, labels, A_Aug, then a min-convergecast of the bridges found.
pub fn verify_2ec_distributed(g: &Multigraph, cfg: &RunConfig) -> Result<VerifyResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut s = Session::new(g, *cfg);
    let tree = dist_bfs(&mut s, 0)?;
    let labels = s.run("labels", &LabelProgram { tree: &tree })?;
    let incoming = s.run("exchange", &Exchange { scheme: &Plain, tree: &tree, graph: g, labels: &labels })?;
    let (_, nodes) = run_a_aug(&mut s, &tree, &incoming)?;
    let own: Vec<Option<EdgeId>> =
        (0..g.n() as VertexId).map(|v| if nodes[v as usize].bridge { tree.parent_edge(v) } else { None }).collect();
    let values: Vec<u64> = own.iter().map(|b| b.map_or(u64::MAX, |e| e as u64)).collect();
    let min = s.run("decide", &Convergecast { tree: &tree, values: &values, op: u64::min })?;
    let out = min
        .into_iter()
        .zip(own)
        .map(|(m, own_bridge)| {
            let bridge = (m != u64::MAX).then_some(m as EdgeId);
            VerifyNode { two_edge_connected: bridge.is_none(), bridge, own_bridge }
        })
        .collect();
    let transcript = if cfg.transcript { s.transcript_text() } else { String::new() };
    Ok(VerifyResult { nodes: out, metrics: s.metrics, transcript })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_cycle, gen_random_2ec};
    use crate::graph::{find_bridges, is_two_edge_connected};
    use crate::oracle::{min_2ecss, opt_augmentation};

    fn k4() -> Multigraph {
        Multigraph::new(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]).unwrap()
    }

    fn subgraph(g: &Multigraph, edges: &[EdgeId]) -> Multigraph {
        g.filter_edges(|e| edges.contains(&e.id)).0
    }

    #[test]
    fn cycle_keeps_every_edge() {
        let (g, _) = gen_cycle(9).unwrap();
        let r = two_ecss_unweighted(&g, &RunConfig::default()).unwrap();
        assert_eq!(r.edges, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn k4_between_four_and_six() {
        let g = k4();
        let r = two_ecss_unweighted(&g, &RunConfig::default()).unwrap();
        assert!((4..=6).contains(&r.edges.len()));
        assert!(is_two_edge_connected(&subgraph(&g, &r.edges)));
        assert_eq!(min_2ecss(&g, false).unwrap().opt_value, 4);
    }

    #[test]
    fn weighted_cycle_is_cheapest() {
        let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5, 1)).collect();
        e.push((0, 2, 50));
        e.push((1, 3, 50));
        let g = Multigraph::new(5, &e).unwrap();
        let r = two_ecss_weighted(&g, &RunConfig::default()).unwrap();
        assert_eq!(r.weight, 5);
        assert_eq!(min_2ecss(&g, true).unwrap().opt_value, 5);
    }

    #[test]
    fn augmenting_an_already_good_subgraph_is_free() {
        let (g, _) = gen_random_2ec(10, 4, 3, None).unwrap();
        let h: Vec<EdgeId> = (0..10).collect();
        let r = augment_1_to_2(&g, &h, &RunConfig::default()).unwrap();
        assert_eq!(r.aug.weight, 0);
    }

    #[test]
    fn augmenting_a_path_of_c5() {
        let (g, _) = gen_cycle(5).unwrap();
        let r = augment_1_to_2(&g, &[0, 1, 2, 3], &RunConfig::default()).unwrap();
        assert_eq!(r.aug.edges, vec![4]);
        assert!(matches!(augment_1_to_2(&g, &[0, 1], &RunConfig::default()), Err(Error::Input(_))));
    }

    #[test]
    fn augmentation_within_twice_optimum() {
        for seed in 0..20 {
            let (g, t) = gen_random_2ec(9, 5, seed, Some((1, 20))).unwrap();
            let h = t.tree_edges();
            let r = augment_1_to_2(&g, &h, &RunConfig::default()).unwrap();
            let mut all = h.clone();
            all.extend(&r.aug.edges);
            assert!(is_two_edge_connected(&subgraph(&g, &all)));
            let g0 = zero_weight_h(&g, &h).unwrap();
            let opt = opt_augmentation(&g0, &r.tree, true).unwrap().opt_value;
            assert!(r.aug.weight <= 2 * opt, "seed {seed}: {} > 2*{opt}", r.aug.weight);
        }
    }

    #[test]
    fn verification_on_cycle_and_path() {
        let (c, _) = gen_cycle(5).unwrap();
        let r = verify_2ec_distributed(&c, &RunConfig::default()).unwrap();
        assert_eq!(r.unanimous(), Some(true));
        let p = Multigraph::new(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let r = verify_2ec_distributed(&p, &RunConfig::default()).unwrap();
        assert_eq!(r.unanimous(), Some(false));
        assert!(r.nodes.iter().all(|o| o.bridge == Some(0)));
    }

    #[test]
    fn planted_bridge_is_named() {
        // two triangles joined by edge 6
        let g = Multigraph::new(6, &[(0, 1, 1), (1, 2, 1), (2, 0, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1), (2, 3, 1)]).unwrap();
        let out = verify_2ec_distributed(&g, &RunConfig::default()).unwrap().nodes;
        assert_eq!(find_bridges(&g).unwrap(), vec![6]);
        assert!(out.iter().all(|o| o.bridge == Some(6)));
        assert_eq!(out[3].own_bridge, Some(6));
        assert_eq!(out.iter().filter(|o| o.own_bridge.is_some()).count(), 1);
    }
}
