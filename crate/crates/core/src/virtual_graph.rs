//! The ancestor–descendant graph G′: every non-tree edge `{u, v}` becomes
//! `{u, v}` itself when one endpoint is an ancestor of the other, and
//! `{t, u}`, `{t, v}` with `t = lca(u, v)` otherwise.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::graph::{Augmentation, EdgeId, Multigraph, RootedTree, VertexId, Weight};
use crate::lca::{self, LcaLabel};
use crate::sim::{Envelope, NodeCtx, NodeProgram, Outbox, Status, Token};

/// A labeling answering tree queries from labels, possibly with shared side information.
pub trait Scheme: Sync {
    type Label: Clone + Eq + Debug + Send + Sync;

    fn lca(&self, a: &Self::Label, b: &Self::Label) -> Self::Label;
    fn is_ancestor(&self, a: &Self::Label, d: &Self::Label) -> bool;
    /// Increases strictly with depth along every root path.
    fn key(&self, l: &Self::Label) -> u64;
    fn encode(&self, l: &Self::Label) -> Vec<Token>;
    /// Total encoded length once enough of the prefix is known.
    fn encoded_len(&self, prefix: &[Token]) -> Option<usize>;
    fn decode(&self, ts: &[Token]) -> Result<Self::Label>;
}

/// Plain heavy-path labels.
#[derive(Clone, Copy, Debug, Default)]
pub struct Plain;

impl Scheme for Plain {
    type Label = LcaLabel;

    fn lca(&self, a: &LcaLabel, b: &LcaLabel) -> LcaLabel {
        lca::lca_query(a, b)
    }

    fn is_ancestor(&self, a: &LcaLabel, d: &LcaLabel) -> bool {
        lca::is_ancestor(a, d)
    }

    fn key(&self, l: &LcaLabel) -> u64 {
        l.depth as u64
    }

    fn encode(&self, l: &LcaLabel) -> Vec<Token> {
        l.to_tokens()
    }

    fn encoded_len(&self, prefix: &[Token]) -> Option<usize> {
        prefix.first().map(|&h| 1 + LcaLabel::decode_header(h).2)
    }

    fn decode(&self, ts: &[Token]) -> Result<LcaLabel> {
        LcaLabel::from_tokens(ts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualEdge<L = LcaLabel> {
    pub anc: L,
    pub desc: L,
    pub desc_vertex: VertexId,
    pub origin: EdgeId,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeClassification<L = LcaLabel> {
    AncestorDescendant { anc: L, desc: L },
    Split { t: L, u: L, v: L },
}

pub fn classify_edge<S: Scheme>(s: &S, lu: &S::Label, lv: &S::Label) -> Result<EdgeClassification<S::Label>> {
    if lu == lv {
        return Err(Error::Input("both endpoints carry the same label".into()));
    }
    Ok(if s.is_ancestor(lu, lv) {
        EdgeClassification::AncestorDescendant { anc: lu.clone(), desc: lv.clone() }
    } else if s.is_ancestor(lv, lu) {
        EdgeClassification::AncestorDescendant { anc: lv.clone(), desc: lu.clone() }
    } else {
        EdgeClassification::Split { t: s.lca(lu, lv), u: lu.clone(), v: lv.clone() }
    })
}

/// The virtual edge, if any, that the endpoint with label `mine` holds for a
/// non-tree edge whose other endpoint has label `theirs`.
pub fn incoming_at<S: Scheme>(
    s: &S,
    me: VertexId,
    mine: &S::Label,
    theirs: &S::Label,
    origin: EdgeId,
    weight: Weight,
) -> Option<VirtualEdge<S::Label>> {
    let t = s.lca(mine, theirs);
    if &t == mine {
        return None;
    }
    Some(VirtualEdge { anc: t, desc: mine.clone(), desc_vertex: me, origin, weight })
}

/// All virtual edges, computed centrally. Sorted by (origin, descendant vertex).
pub fn build_gprime_sequential(g: &Multigraph, t: &RootedTree, labels: &[LcaLabel]) -> Vec<VirtualEdge> {
    let mut out = Vec::new();
    for e in g.edges() {
        if t.is_tree_edge(e.id) {
            continue;
        }
        let (lu, lv) = (&labels[e.u as usize], &labels[e.v as usize]);
        match classify_edge(&Plain, lu, lv).expect("non-tree edge between distinct vertices") {
            EdgeClassification::AncestorDescendant { anc, desc } => {
                let dv = if desc == *lu { e.u } else { e.v };
                out.push(VirtualEdge { anc, desc, desc_vertex: dv, origin: e.id, weight: e.w });
            }
            EdgeClassification::Split { t: top, u, v } => {
                out.push(VirtualEdge { anc: top.clone(), desc: u, desc_vertex: e.u, origin: e.id, weight: e.w });
                out.push(VirtualEdge { anc: top, desc: v, desc_vertex: e.v, origin: e.id, weight: e.w });
            }
        }
    }
    out.sort_by_key(|ve| (ve.origin, ve.desc_vertex));
    out
}

/// Tree edges covered by a virtual edge: the path from its descendant up to its ancestor's depth.
pub fn covered_set_virtual<L>(t: &RootedTree, ve: &VirtualEdge<L>, anc_depth: u32) -> Vec<EdgeId> {
    let mut out = Vec::new();
    let mut x = ve.desc_vertex;
    while t.depth(x) > anc_depth {
        out.push(t.parent_edge(x).unwrap());
        x = t.parent(x).unwrap();
    }
    out
}

/// Replaces each virtual edge by its origin in G.
pub fn project_augmentation<L>(g: &Multigraph, t: &RootedTree, chosen: &[VirtualEdge<L>]) -> Result<Augmentation> {
    Augmentation::new(g, t, chosen.iter().map(|ve| ve.origin).collect())
}

/// Each vertex sends its label over its non-tree edges and keeps the virtual
/// edges whose descendant endpoint it is.
pub struct Exchange<'a, S: Scheme> {
    pub scheme: &'a S,
    pub tree: &'a RootedTree,
    pub graph: &'a Multigraph,
    pub labels: &'a [S::Label],
}

pub struct ExchangeState {
    sent: usize,
    encoded: Vec<Token>,
    partial: Vec<(EdgeId, Vec<Token>)>,
    received: Vec<(EdgeId, Vec<Token>)>,
}

impl<S: Scheme> NodeProgram for Exchange<'_, S> {
    type State = ExchangeState;
    type Output = Vec<VirtualEdge<S::Label>>;

    fn init(&self, ctx: &NodeCtx) -> ExchangeState {
        ExchangeState {
            sent: 0,
            encoded: self.scheme.encode(&self.labels[ctx.vertex as usize]),
            partial: Vec::new(),
            received: Vec::new(),
        }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut ExchangeState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        for env in inbox {
            let pos = match st.partial.iter().position(|(e, _)| *e == env.edge) {
                Some(p) => p,
                None => {
                    st.partial.push((env.edge, Vec::new()));
                    st.partial.len() - 1
                }
            };
            st.partial[pos].1.extend_from_slice(&env.msg);
            if self.scheme.encoded_len(&st.partial[pos].1) == Some(st.partial[pos].1.len()) {
                let done = st.partial.swap_remove(pos);
                st.received.push(done);
            }
        }
        if st.sent < st.encoded.len() {
            let end = (st.sent + ctx.budget).min(st.encoded.len());
            let chunk = &st.encoded[st.sent..end];
            for &(e, _) in ctx.incident {
                if !self.tree.is_tree_edge(e) {
                    out.send(e, chunk.iter().copied());
                }
            }
            st.sent = end;
        }
        if st.sent < st.encoded.len() {
            Status::Continue
        } else {
            Status::Halt
        }
    }

    fn finish(&self, ctx: &NodeCtx, st: ExchangeState) -> Vec<VirtualEdge<S::Label>> {
        let v = ctx.vertex;
        let mine = &self.labels[v as usize];
        let mut out: Vec<_> = st
            .received
            .iter()
            .filter_map(|(e, ts)| {
                let theirs = self.scheme.decode(ts).expect("well-formed label");
                incoming_at(self.scheme, v, mine, &theirs, *e, self.graph.weight(*e))
            })
            .collect();
        out.sort_by_key(|ve| ve.origin);
        out
    }
}
