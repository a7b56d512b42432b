//! Unweighted tree augmentation: optimal cover of G′ by necessary/optional
//! maximal edges (two tree traversals), wrapped into a 2-approximation in G.
//!
//! Every edge compared at a vertex `v` has its ancestor endpoint on the root
//! path of `v`, so an edge travels up the tree as the pair
//! (ancestor depth, origin id). It covers `{v, p(v)}` iff the depth is
//! smaller than `depth(v)`, and the maximal of two edges is the one with the
//! smaller depth, ties to the lower origin id.

use crate::error::{Error, Result};
use crate::graph::{Augmentation, EdgeId, Multigraph, RootedTree, VertexId};
use crate::lca::{self, LcaLabel, LabelProgram};
use crate::sim::{Envelope, Metrics, NodeCtx, NodeProgram, Outbox, RunConfig, Session, Status, Token};
use crate::virtual_graph::{project_augmentation, Exchange, Plain, VirtualEdge};

/// An edge as it travels up the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Summary {
    pub depth: u64,
    pub origin: EdgeId,
}

const NONE: u64 = u64::MAX;

pub fn encode(s: Option<Summary>) -> [Token; 2] {
    match s {
        Some(s) => [Token::Control(s.depth), Token::Edge(s.origin)],
        None => [Token::Control(NONE), Token::Edge(u32::MAX)],
    }
}

pub fn decode(a: Token, b: Token) -> Option<Summary> {
    (a.raw() != NONE).then(|| Summary { depth: a.raw(), origin: b.raw() as EdgeId })
}

/// The maximal of two ancestor–descendant edges whose ancestors share a root path.
pub fn maximal_of<'a>(e1: &'a VirtualEdge, e2: &'a VirtualEdge) -> Result<&'a VirtualEdge> {
    if !lca::is_ancestor(&e1.anc, &e2.anc) && !lca::is_ancestor(&e2.anc, &e1.anc) {
        return Err(Error::Input(format!("edges {} and {} are not comparable", e1.origin, e2.origin)));
    }
    Ok(if (e1.anc.depth, e1.origin) <= (e2.anc.depth, e2.origin) { e1 } else { e2 })
}

/// Where the optional candidate of a vertex came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Own,
    Child(usize),
}

/// Per-vertex result of [`AAug`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AugNode {
    /// This vertex's maximal incoming edge and whether it ended up in the augmentation.
    pub incoming: Option<(EdgeId, bool)>,
    /// Edge added by this vertex to cover `{v, p(v)}`.
    pub added: Option<EdgeId>,
    /// `{v, p(v)}` has no covering edge.
    pub bridge: bool,
}

/// Input per vertex: the key of the maximal incoming edge, if any.
pub struct AAug<'a> {
    pub tree: &'a RootedTree,
    /// Smallest (ancestor key, origin) among the vertex's incoming edges.
    pub best_incoming: &'a [Option<Summary>],
    /// Key of the vertex itself, comparable with ancestor keys.
    pub own_key: &'a [u64],
    /// Parent edges already covered by earlier work; those are never paid for.
    pub precovered: Option<&'a [bool]>,
}

#[derive(Debug, Default)]
pub struct AAugState {
    waiting: usize,
    nec: Option<Summary>,
    opt: Option<(Summary, Source)>,
    sent_up: bool,
    /// In case 2 this vertex chose `opt` itself.
    decided: bool,
    node: AugNode,
    done: bool,
}

impl AAug<'_> {
    fn better(a: Option<(Summary, Source)>, b: (Summary, Source)) -> Option<(Summary, Source)> {
        match a {
            Some(x) if x.0 <= b.0 => Some(x),
            _ => Some(b),
        }
    }

    fn notify(&self, v: VertexId, st: &mut AAugState, yes_to: Option<Source>, out: &mut Outbox) {
        if yes_to == Some(Source::Own) {
            if let Some((e, _)) = st.node.incoming {
                st.node.incoming = Some((e, true));
            }
        }
        for (i, &(_, e)) in self.tree.children(v).iter().enumerate() {
            let flag = u64::from(yes_to == Some(Source::Child(i)));
            out.send(e, [Token::Control(flag)]);
        }
        st.done = true;
    }
}

impl NodeProgram for AAug<'_> {
    type State = AAugState;
    type Output = AugNode;

    fn init(&self, ctx: &NodeCtx) -> AAugState {
        let v = ctx.vertex as usize;
        let own = self.best_incoming[v];
        AAugState {
            waiting: self.tree.children(ctx.vertex).len(),
            opt: own.map(|s| (s, Source::Own)),
            node: AugNode { incoming: own.map(|s| (s.origin, false)), ..Default::default() },
            ..Default::default()
        }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut AAugState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        let kids = self.tree.children(v);
        let pe = self.tree.parent_edge(v);
        let mut parent_flag = None;
        for env in inbox {
            if Some(env.edge) == pe {
                parent_flag = Some(env.msg[0].raw() == 1);
                continue;
            }
            let i = kids.iter().position(|&(_, e)| e == env.edge).expect("message from a child");
            if let Some(n) = decode(env.msg[0], env.msg[1]) {
                st.nec = Some(st.nec.map_or(n, |x| x.min(n)));
            }
            if let Some(o) = decode(env.msg[2], env.msg[3]) {
                st.opt = Self::better(st.opt, (o, Source::Child(i)));
            }
            st.waiting -= 1;
        }

        if st.waiting == 0 && !st.sent_up {
            st.sent_up = true;
            match pe {
                None => self.notify(v, st, None, out),
                Some(e) => {
                    let key = self.own_key[v as usize];
                    let covers = |s: &Summary| s.depth < key;
                    let pre = self.precovered.is_some_and(|c| c[v as usize]);
                    if pre || st.nec.is_some_and(|n| covers(&n)) {
                        let opt = st.opt.map(|o| o.0).filter(covers);
                        out.send(e, encode(st.nec.filter(covers)).into_iter().chain(encode(opt)));
                    } else if let Some((o, _)) = st.opt.filter(|o| covers(&o.0)) {
                        st.decided = true;
                        st.node.added = Some(o.origin);
                        out.send(e, encode(Some(o)).into_iter().chain(encode(None)));
                    } else {
                        st.node.bridge = true;
                        let nec = st.nec.filter(covers);
                        out.send(e, encode(nec).into_iter().chain(encode(None)));
                    }
                }
            }
        }

        if let Some(yes) = parent_flag {
            if !st.done {
                let target = if st.decided || yes { st.opt.map(|o| o.1) } else { None };
                self.notify(v, st, target, out);
            }
        }
        Status::Halt
    }

    fn finish(&self, _: &NodeCtx, st: AAugState) -> AugNode {
        st.node
    }
}

/// Everything the unweighted pipeline produces.
#[derive(Clone, Debug)]
pub struct TapOutcome {
    pub aug: Augmentation,
    /// Edges of G′ selected, one per vertex whose incoming edge was added.
    pub chosen: Vec<VirtualEdge>,
    pub nodes: Vec<AugNode>,
    pub labels: Vec<LcaLabel>,
    pub incoming: Vec<Vec<VirtualEdge>>,
    pub metrics: Metrics,
    pub transcript: String,
}

impl TapOutcome {
    /// Lower endpoints of tree edges that cannot be covered.
    pub fn bridge_vertices(&self) -> Vec<VertexId> {
        (0..self.nodes.len() as VertexId).filter(|&v| self.nodes[v as usize].bridge).collect()
    }
}

/// Smallest (ancestor depth, origin) among each vertex's incoming edges.
pub fn best_incoming(incoming: &[Vec<VirtualEdge>]) -> Vec<Option<Summary>> {
    incoming
        .iter()
        .map(|es| es.iter().map(|e| Summary { depth: e.anc.depth as u64, origin: e.origin }).min())
        .collect()
}

/// Runs A_Aug alone on given labels and incoming edges.
pub fn run_a_aug(
    session: &mut Session,
    tree: &RootedTree,
    incoming: &[Vec<VirtualEdge>],
) -> Result<(Vec<VirtualEdge>, Vec<AugNode>)> {
    let best = best_incoming(incoming);
    let keys: Vec<u64> = (0..tree.n() as VertexId).map(|v| tree.depth(v) as u64).collect();
    let nodes = session.run("aug", &AAug { tree, best_incoming: &best, own_key: &keys, precovered: None })?;
    let chosen = chosen_edges(incoming, &nodes);
    Ok((chosen, nodes))
}

pub fn chosen_edges(incoming: &[Vec<VirtualEdge>], nodes: &[AugNode]) -> Vec<VirtualEdge> {
    let mut out = Vec::new();
    for (v, node) in nodes.iter().enumerate() {
        if let Some((origin, true)) = node.incoming {
            let e = incoming[v].iter().filter(|e| e.origin == origin).min_by_key(|e| e.anc.depth).unwrap();
            out.push(e.clone());
        }
    }
    out
}

/// Labels, label exchange and A_Aug. Bridges are reported in the outcome, not as errors.
pub fn a_tap_session(g: &Multigraph, tree: &RootedTree, cfg: &RunConfig) -> Result<TapOutcome> {
    let mut s = Session::new(g, *cfg);
    let (aug, chosen, nodes, labels, incoming) = a_tap_phases(&mut s, tree)?;
    let transcript = if cfg.transcript { s.transcript_text() } else { String::new() };
    Ok(TapOutcome { aug, chosen, nodes, labels, incoming, metrics: s.metrics, transcript })
}

/// The A_TAP phases inside an existing session.
#[allow(clippy::type_complexity)]
pub fn a_tap_phases(
    s: &mut Session,
    tree: &RootedTree,
) -> Result<(Augmentation, Vec<VirtualEdge>, Vec<AugNode>, Vec<LcaLabel>, Vec<Vec<VirtualEdge>>)> {
    let g = s.graph;
    let labels = s.run("labels", &LabelProgram { tree })?;
    let incoming = s.run("exchange", &Exchange { scheme: &Plain, tree, graph: g, labels: &labels })?;
    let (chosen, nodes) = run_a_aug(s, tree, &incoming)?;
    let aug = project_augmentation(g, tree, &chosen)?;
    Ok((aug, chosen, nodes, labels, incoming))
}

/// 2-approximation for unweighted TAP. Fails with [`Error::Bridge`] if some tree edge cannot be covered.
pub fn run_a_tap(g: &Multigraph, tree: &RootedTree, cfg: &RunConfig) -> Result<TapOutcome> {
    let out = a_tap_session(g, tree, cfg)?;
    if let Some(&v) = out.bridge_vertices().first() {
        return Err(Error::Bridge { vertex: v, edge: tree.parent_edge(v).unwrap() });
    }
    Ok(out)
}
