//! Weighted tree augmentation with altered weights.
//!
//! Up pass: every vertex `v` learns, for each ancestor `u`, the cheapest
//! known way `w_v(u)` to cover the path from `v` to `u`, subtracts
//! `min_v = w_v(p(v))` from all of them and streams the rest to its parent,
//! nearest ancestor first, one (ancestor, weight) pair per round. Down pass:
//! a vertex whose parent edge is still open takes the edge realising
//! `min_v`; the choice is relayed to whichever descendant holds that edge.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Augmentation, EdgeId, Multigraph, RootedTree, VertexId, Weight, INF};
use crate::lca::{LcaLabel, LabelProgram};
use crate::sim::stream::Lane;
use crate::sim::{Envelope, Metrics, NodeCtx, NodeProgram, Outbox, RunConfig, Session, Status, Token};
use crate::virtual_graph::{project_augmentation, Exchange, Plain, VirtualEdge};

/// Streams ancestor ids down the tree; each vertex ends with its ancestors, parent first.
pub struct Ancestors<'a> {
    pub tree: &'a RootedTree,
}

#[derive(Default)]
pub struct AncestorState {
    dir: Vec<VertexId>,
    lane: VecDeque<VertexId>,
}

impl NodeProgram for Ancestors<'_> {
    type State = AncestorState;
    type Output = Vec<VertexId>;

    fn init(&self, ctx: &NodeCtx) -> AncestorState {
        AncestorState { dir: Vec::new(), lane: VecDeque::from([ctx.vertex]) }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut AncestorState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        for env in inbox {
            let id = env.msg[0].raw() as VertexId;
            st.dir.push(id);
            st.lane.push_back(id);
        }
        let kids = self.tree.children(ctx.vertex);
        if kids.is_empty() {
            st.lane.clear();
        }
        if let Some(id) = st.lane.pop_front() {
            for &(_, e) in kids {
                out.send(e, [Token::Vertex(id)]);
            }
        }
        if st.lane.is_empty() {
            Status::Halt
        } else {
            Status::Continue
        }
    }

    fn finish(&self, _: &NodeCtx, st: AncestorState) -> Vec<VertexId> {
        st.dir
    }
}

pub fn disseminate_ancestors(g: &Multigraph, tree: &RootedTree, cfg: &RunConfig) -> Result<(Vec<Vec<VertexId>>, Metrics)> {
    let mut s = Session::new(g, *cfg);
    let dirs = s.run("ancestors", &Ancestors { tree })?;
    Ok((dirs, s.metrics))
}

/// Labels of all proper ancestors, parent first, derived from a vertex's own label.
pub fn ancestor_labels(own: &LcaLabel, dir: &[VertexId]) -> Vec<LcaLabel> {
    dir.iter()
        .enumerate()
        .map(|(i, &u)| {
            let mut l = own.ancestor_at(own.depth - 1 - i as u32);
            l.vertex = Some(u);
            l
        })
        .collect()
}

/// Cheapest incoming edge covering the path up to ancestor depth `d`: (weight, origin) minimum.
pub fn own_best(incoming: &[VirtualEdge], d: u32) -> Option<&VirtualEdge> {
    incoming.iter().filter(|e| e.anc.depth <= d).min_by_key(|e| (e.weight, e.origin))
}

const SELF: u32 = u32::MAX;
const UNSET: u32 = u32::MAX - 1;
const BOT: u64 = u64::MAX;

/// Result of the up pass at one vertex.
#[derive(Clone, Debug, Default)]
pub struct UpResult {
    /// `min_v`; [`INF`] when nothing covers `{v, p(v)}`.
    pub min: Weight,
    /// `sender[d]`: child index (or `SELF`) achieving the minimum for the ancestor at depth `d`.
    sender: Vec<u32>,
}

pub struct WeightedUp<'a> {
    pub tree: &'a RootedTree,
    pub incoming: &'a [Vec<VirtualEdge>],
    pub dirs: &'a [Vec<VertexId>],
}

pub struct UpState {
    queues: Vec<VecDeque<(VertexId, Weight)>>,
    next: usize,
    min: Weight,
    sender: Vec<u32>,
    lane: Lane,
}

impl WeightedUp<'_> {
    /// Combines entry `j` (ancestor at depth `depth(v) - 1 - j`) once every child has supplied it.
    fn advance(&self, v: VertexId, st: &mut UpState) {
        let depth = self.tree.depth(v) as usize;
        let kids = self.tree.children(v);
        while st.next < depth && st.queues.iter().all(|q| !q.is_empty()) {
            let j = st.next;
            let d = (depth - 1 - j) as u32;
            let u = self.dirs[v as usize][j];
            let mut best = own_best(&self.incoming[v as usize], d).map_or(INF, |e| e.weight);
            let mut who = if best == INF { UNSET } else { SELF };
            let mut by_id: Vec<usize> = (0..kids.len()).collect();
            by_id.sort_by_key(|&i| kids[i].0);
            let got: Vec<(VertexId, Weight)> = st.queues.iter_mut().map(|q| q.pop_front().unwrap()).collect();
            for &i in by_id.iter().rev() {
                let (id, w) = got[i];
                assert_eq!(id, u, "entries out of order at vertex {v}");
                if w != INF && w <= best {
                    best = w;
                    who = i as u32;
                }
            }
            st.sender[d as usize] = who;
            if j == 0 {
                st.min = best;
            } else {
                let altered = if best == INF {
                    INF
                } else {
                    assert!(st.min != INF && best >= st.min, "negative altered weight at vertex {v}");
                    best - st.min
                };
                st.lane.push(Token::Vertex(u));
                st.lane.push(Token::Weight(altered));
            }
            st.next += 1;
        }
    }
}

impl NodeProgram for WeightedUp<'_> {
    type State = UpState;
    type Output = UpResult;

    fn init(&self, ctx: &NodeCtx) -> UpState {
        let v = ctx.vertex;
        UpState {
            queues: vec![VecDeque::new(); self.tree.children(v).len()],
            next: 0,
            min: INF,
            sender: vec![UNSET; self.tree.depth(v) as usize],
            lane: Lane::default(),
        }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut UpState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        let kids = self.tree.children(v);
        for env in inbox {
            let i = kids.iter().position(|&(_, e)| e == env.edge).expect("message from a child");
            for pair in env.msg.chunks(2) {
                st.queues[i].push_back((pair[0].raw() as VertexId, pair[1].raw()));
            }
        }
        self.advance(v, st);
        if let Some(pe) = self.tree.parent_edge(v) {
            st.lane.flush(pe, 2, out);
        }
        if st.lane.is_empty() {
            Status::Halt
        } else {
            Status::Continue
        }
    }

    fn finish(&self, _: &NodeCtx, st: UpState) -> UpResult {
        UpResult { min: st.min, sender: st.sender }
    }
}

/// Per-vertex result of the weighted algorithm.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedNode {
    /// `c({v, p(v)}) = min_v`.
    pub cost: Weight,
    /// This vertex received ⊥ and so chose how to cover its own parent edge.
    pub decider: bool,
    /// Edge added at this vertex, with the depth of the ancestor it was chosen for.
    pub added: Option<(EdgeId, u32)>,
    pub bridge: bool,
}

pub struct WeightedDown<'a> {
    pub tree: &'a RootedTree,
    pub incoming: &'a [Vec<VirtualEdge>],
    pub dirs: &'a [Vec<VertexId>],
    pub up: &'a [UpResult],
}

impl NodeProgram for WeightedDown<'_> {
    type State = (WeightedNode, bool);
    type Output = WeightedNode;

    fn init(&self, ctx: &NodeCtx) -> (WeightedNode, bool) {
        (WeightedNode { cost: self.up[ctx.vertex as usize].min, ..Default::default() }, false)
    }

    fn step(&self, ctx: &NodeCtx, st: &mut (WeightedNode, bool), inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        let (node, done) = st;
        if *done {
            return Status::Halt;
        }
        let depth = self.tree.depth(v);
        let msg = match self.tree.parent(v) {
            None => Some(BOT),
            Some(p) if p == self.tree.root() => Some(BOT),
            Some(_) => inbox.first().map(|e| e.msg[0].raw()),
        };
        let Some(m) = msg else { return Status::Halt };
        *done = true;
        let kids = self.tree.children(v);
        if v == self.tree.root() {
            return Status::Halt;
        }
        let target = if m == BOT {
            node.decider = true;
            Some(depth - 1)
        } else {
            let j = self.dirs[v as usize].iter().position(|&u| u as u64 == m).expect("ancestor id");
            Some(depth - 1 - j as u32)
        };
        let mut s = None;
        if let Some(d) = target {
            match self.up[v as usize].sender[d as usize] {
                UNSET => node.bridge = true,
                SELF => {
                    let e = own_best(&self.incoming[v as usize], d).expect("own edge");
                    node.added = Some((e.origin, d));
                }
                i => s = Some(i as usize),
            }
        }
        for (i, &(_, e)) in kids.iter().enumerate() {
            if Some(i) == s {
                let u = self.dirs[v as usize][(depth - 1 - target.unwrap()) as usize];
                out.send(e, [Token::Vertex(u)]);
            } else {
                out.send(e, [Token::Control(BOT)]);
            }
        }
        Status::Halt
    }

    fn finish(&self, _: &NodeCtx, st: (WeightedNode, bool)) -> WeightedNode {
        st.0
    }
}

#[derive(Clone, Debug)]
pub struct WtapOutcome {
    pub aug: Augmentation,
    pub chosen: Vec<VirtualEdge>,
    pub nodes: Vec<WeightedNode>,
    pub metrics: Metrics,
    pub transcript: String,
}

impl WtapOutcome {
    /// `(tree edge id, c)` for every tree edge.
    pub fn costs(&self, tree: &RootedTree) -> Vec<(EdgeId, Weight)> {
        let mut out: Vec<_> = (0..self.nodes.len() as VertexId)
            .filter_map(|v| tree.parent_edge(v).map(|e| (e, self.nodes[v as usize].cost)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn costs_csv(&self, tree: &RootedTree) -> String {
        let mut s = String::from("tree_edge_id,c\n");
        for (e, c) in self.costs(tree) {
            s += &format!("{e},{c}\n");
        }
        s
    }

    pub fn cost_sum(&self) -> Weight {
        self.nodes.iter().filter(|n| n.cost != INF).map(|n| n.cost).sum()
    }

    pub fn bridge_vertices(&self) -> Vec<VertexId> {
        (0..self.nodes.len() as VertexId).filter(|&v| self.nodes[v as usize].bridge).collect()
    }

    /// For each added edge, the tree edges it pays for: from its holder up to the deciding vertex's parent.
    pub fn paths(&self, tree: &RootedTree) -> Vec<(EdgeId, Vec<EdgeId>)> {
        let mut out = Vec::new();
        for (x, node) in self.nodes.iter().enumerate() {
            let Some((origin, _)) = node.added else { continue };
            let mut path = Vec::new();
            let mut y = x as VertexId;
            loop {
                path.push(tree.parent_edge(y).unwrap());
                if self.nodes[y as usize].decider {
                    break;
                }
                y = tree.parent(y).unwrap();
            }
            out.push((origin, path));
        }
        out
    }
}

/// Ancestor dissemination, up pass and down pass on given incoming edges.
pub fn run_weighted_aug(
    s: &mut Session,
    tree: &RootedTree,
    incoming: &[Vec<VirtualEdge>],
) -> Result<(Vec<VirtualEdge>, Vec<WeightedNode>)> {
    let dirs = s.run("ancestors", &Ancestors { tree })?;
    let up = s.run("wtap_up", &WeightedUp { tree, incoming, dirs: &dirs })?;
    let nodes = s.run("wtap_down", &WeightedDown { tree, incoming, dirs: &dirs, up: &up })?;
    let mut chosen = Vec::new();
    for (v, n) in nodes.iter().enumerate() {
        if let Some((_, d)) = n.added {
            chosen.push(own_best(&incoming[v], d).unwrap().clone());
        }
    }
    Ok((chosen, nodes))
}

pub fn a_wtap_session(g: &Multigraph, tree: &RootedTree, cfg: &RunConfig) -> Result<WtapOutcome> {
    let mut s = Session::new(g, *cfg);
    let (aug, chosen, nodes) = a_wtap_phases(&mut s, tree)?;
    let transcript = if cfg.transcript { s.transcript_text() } else { String::new() };
    Ok(WtapOutcome { aug, chosen, nodes, metrics: s.metrics, transcript })
}

/// The A_wTAP phases inside an existing session.
pub fn a_wtap_phases(s: &mut Session, tree: &RootedTree) -> Result<(Augmentation, Vec<VirtualEdge>, Vec<WeightedNode>)> {
    let g = s.graph;
    let labels = s.run("labels", &LabelProgram { tree })?;
    let incoming = s.run("exchange", &Exchange { scheme: &Plain, tree, graph: g, labels: &labels })?;
    let (chosen, nodes) = run_weighted_aug(s, tree, &incoming)?;
    let aug = project_augmentation(g, tree, &chosen)?;
    Ok((aug, chosen, nodes))
}

/// 2-approximation for weighted TAP.
pub fn run_a_wtap(g: &Multigraph, tree: &RootedTree, cfg: &RunConfig) -> Result<WtapOutcome> {
    let out = a_wtap_session(g, tree, cfg)?;
    if let Some(&v) = out.bridge_vertices().first() {
        return Err(Error::Bridge { vertex: v, edge: tree.parent_edge(v).unwrap() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directory_on_path() {
        let g = Multigraph::new(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)]).unwrap();
        let t = RootedTree::from_edges(&g, 0, &[0, 1, 2, 3]).unwrap();
        let (d, m) = disseminate_ancestors(&g, &t, &RunConfig::default()).unwrap();
        assert!(d[0].is_empty());
        assert_eq!(d[4], vec![3, 2, 1, 0]);
        assert!(m.rounds() <= t.height() + 1);
    }

    #[test]
    fn weighted_cycle_costs() {
        let g = Multigraph::new(5, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 7)]).unwrap();
        let t = RootedTree::from_edges(&g, 0, &[0, 1, 2, 3]).unwrap();
        let out = run_a_wtap(&g, &t, &RunConfig::default()).unwrap();
        assert_eq!(out.aug.edges, vec![4]);
        assert_eq!(out.aug.weight, 7);
        // along the path from the deep end: 7, 0, 0, 0
        let c: Vec<_> = [4, 3, 2, 1].iter().map(|&v| out.nodes[v].cost).collect();
        assert_eq!(c, vec![7, 0, 0, 0]);
        assert_eq!(out.cost_sum(), 7);
        assert_eq!(out.paths(&t), vec![(4, vec![3, 2, 1, 0])]);
    }

    #[test]
    fn cheap_long_edge_beats_chords() {
        // path 0..4, chords {0,2},{2,4} of weight 3, long edge {0,4} of weight 1
        let g = Multigraph::new(
            5,
            &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (0, 2, 3), (2, 4, 3), (0, 4, 1)],
        )
        .unwrap();
        let t = RootedTree::from_edges(&g, 0, &[0, 1, 2, 3]).unwrap();
        let out = run_a_wtap(&g, &t, &RunConfig::default()).unwrap();
        assert_eq!(out.aug.edges, vec![6]);
        assert_eq!(out.aug.weight, 1);
    }

    #[test]
    fn bridge_reported() {
        let g = Multigraph::new(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (1, 3, 2)]).unwrap();
        let t = RootedTree::from_edges(&g, 0, &[0, 1, 2]).unwrap();
        let out = a_wtap_session(&g, &t, &RunConfig::default()).unwrap();
        assert_eq!(out.bridge_vertices(), vec![1]);
    }
}
