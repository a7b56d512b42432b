//! Unweighted tree augmentation in O(D + √n) rounds: fragments, two-level
//! labels, and three covering passes (leaf edges, global edges on the
//! contracted tree, local edges per fragment) coordinated over a BFS tree.
//! Every edge that ends up in the cover is the maximal incoming edge of its
//! descendant endpoint, so the result is one flag per vertex.

pub mod fragment;
pub mod shadow;
pub mod split;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Augmentation, EdgeId, Multigraph, RootedTree, VertexId};
use crate::lca::{LabelProgram, LcaLabel};
use crate::sim::bfs::DistBfs;
use crate::sim::collect::{agreed_records, Count, Gather};
use crate::sim::stream::{FrameReader, Lane, Piece};
use crate::sim::{Envelope, Metrics, NodeCtx, NodeProgram, Outbox, RunConfig, Session, Status, Token};
use crate::tap::{decode, encode, AAug, Summary};
use crate::virtual_graph::{project_augmentation, Exchange, Scheme, VirtualEdge};

pub use fragment::{fragment_decompose, Fragmentation};
pub use split::{lca_from_split_labels, Directory, SplitLabel, SplitScheme};

/// Where a vertex stands after each covering pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FastNode {
    /// Leaf whose maximal incoming edge was added in the leaf pass.
    pub leaf_added: bool,
    pub covered_after_leaf: bool,
    /// Holds the maximal incoming edge of its fragment, added in the global pass.
    pub global_added: bool,
    pub covered_after_global: bool,
    /// Maximal incoming edge added in the local pass, by this fragment or another.
    pub local_added: bool,
    pub bridge: bool,
}

impl FastNode {
    pub fn in_cover(&self) -> bool {
        self.leaf_added || self.global_added || self.local_added
    }
}

/// Each fragment root sends its id down the fragment; every vertex tells its
/// children in other fragments its fragment id and local label.
pub struct FragInfo<'a> {
    pub tree: &'a RootedTree,
    pub forest: &'a RootedTree,
    pub local: &'a [LcaLabel],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragView {
    pub frag: VertexId,
    /// For fragment roots below the top: parent fragment and the parent's local label.
    pub parent_side: Option<(VertexId, LcaLabel)>,
}

#[derive(Default)]
pub struct FragInfoState {
    frag: Option<VertexId>,
    announced: bool,
    lanes: Vec<(EdgeId, Lane)>,
    reader: FrameReader,
    parent_side: Option<(VertexId, LcaLabel)>,
}

impl NodeProgram for FragInfo<'_> {
    type State = FragInfoState;
    type Output = FragView;

    fn init(&self, ctx: &NodeCtx) -> FragInfoState {
        let v = ctx.vertex;
        FragInfoState {
            frag: self.forest.parent(v).is_none().then_some(v),
            ..Default::default()
        }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut FragInfoState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        for env in inbox {
            if self.forest.parent_edge(v) == Some(env.edge) {
                st.frag = Some(env.msg[0].raw() as VertexId);
            } else {
                for &t in &env.msg {
                    if let Some(Piece::Frame(f)) = st.reader.feed(t) {
                        let l = LcaLabel::from_tokens(&f[1..]).expect("well-formed label");
                        st.parent_side = Some((f[0].raw() as VertexId, l));
                    }
                }
            }
        }
        if let (Some(f), false) = (st.frag, st.announced) {
            st.announced = true;
            for &(_, e) in self.forest.children(v) {
                out.send(e, [Token::Vertex(f)]);
            }
            let mut body = vec![Token::Vertex(f)];
            body.extend(self.local[v as usize].to_tokens());
            for &(c, e) in self.tree.children(v) {
                if self.forest.parent(c).is_none() {
                    let mut lane = Lane::default();
                    lane.push_frame(&body);
                    st.lanes.push((e, lane));
                }
            }
        }
        for (e, lane) in &mut st.lanes {
            lane.flush(*e, ctx.budget, out);
        }
        if st.lanes.iter().all(|(_, l)| l.is_empty()) {
            Status::Halt
        } else {
            Status::Continue
        }
    }

    fn finish(&self, _: &NodeCtx, st: FragInfoState) -> FragView {
        FragView { frag: st.frag.expect("fragment id never arrived"), parent_side: st.parent_side }
    }
}

/// Every vertex reports upward the best edge among its own seed and its
/// children's reports that still covers its parent edge.
pub struct MaxUp<'a> {
    pub forest: &'a RootedTree,
    pub seed: &'a [Option<Summary>],
    pub key: &'a [u64],
}

impl NodeProgram for MaxUp<'_> {
    type State = (usize, Option<Summary>, bool);
    /// The report: best edge covering the vertex's parent edge in `T`.
    type Output = Option<Summary>;

    fn init(&self, ctx: &NodeCtx) -> Self::State {
        (self.forest.children(ctx.vertex).len(), self.seed[ctx.vertex as usize], false)
    }

    fn step(&self, ctx: &NodeCtx, st: &mut Self::State, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        for env in inbox {
            if let Some(s) = decode(env.msg[0], env.msg[1]) {
                st.1 = Some(st.1.map_or(s, |b| b.min(s)));
            }
            st.0 -= 1;
        }
        if st.0 == 0 && !st.2 {
            st.2 = true;
            if let Some(pe) = self.forest.parent_edge(v) {
                let key = self.key[v as usize];
                out.send(pe, encode(st.1.filter(|s| s.depth < key)));
            }
        }
        Status::Halt
    }

    fn finish(&self, ctx: &NodeCtx, st: Self::State) -> Option<Summary> {
        let key = self.key[ctx.vertex as usize];
        st.1.filter(|s| s.depth < key)
    }
}

/// An edge record tagged with the fragment it enters: `[fragment, key, origin]`.
fn edge_record(frag: VertexId, s: Summary) -> Vec<Token> {
    vec![Token::Vertex(frag), Token::Control(s.depth), Token::Edge(s.origin)]
}

fn parse_edge_record(r: &[Token]) -> (VertexId, Summary) {
    (r[0].raw() as VertexId, Summary { depth: r[1].raw(), origin: r[2].raw() as EdgeId })
}

/// Upcast and broadcast over the BFS tree; returns the agreed record list.
fn disseminate(
    s: &mut Session,
    phase: &str,
    bfs: &RootedTree,
    sources: Vec<(VertexId, Vec<Token>)>,
    dedup: bool,
) -> Result<Vec<Vec<Token>>> {
    let mut records = vec![Vec::new(); bfs.n()];
    for (v, r) in sources {
        records[v as usize].push(r);
    }
    let prog = Gather { tree: bfs, records: &records, count: Count::Terminated, keep_all: false, dedup };
    let mut out = s.run(phase, &prog)?;
    let all = agreed_records(bfs, &mut out)?;
    s.note_broadcast_items(phase, all.len() as u64);
    Ok(all)
}

pub fn log_star(n: usize) -> u32 {
    let (mut x, mut k) = (n as f64, 0);
    while x > 1.0 {
        x = x.log2();
        k += 1;
    }
    k
}

/// Replays the covering pass on the contracted tree from broadcast data.
/// `em[f]` is the maximal edge entering fragment `f` that leaves it upward,
/// `covered[f]` says whether the global edge above `f` is already covered.
/// Returns the added edges as (fragment index, edge) and fragments left uncovered.
pub fn replay_on_contracted(dir: &Directory, em: &[Option<Summary>], covered: &[bool]) -> (Vec<(usize, Summary)>, Vec<usize>) {
    let k = dir.count();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&f| std::cmp::Reverse(dir.depth[f]));
    let mut nec: Vec<Option<Summary>> = vec![None; k];
    let mut opt: Vec<Option<(Summary, usize)>> = em.iter().enumerate().map(|(f, s)| s.map(|s| (s, f))).collect();
    let mut added = Vec::new();
    let mut bridges = Vec::new();
    for f in order {
        let Some(p) = dir.parent[f] else { continue };
        let p = p as usize;
        let covers = |s: &Summary| (s.depth >> 32) < dir.depth[f] as u64;
        let mut n = nec[f].filter(covers);
        let o = opt[f].filter(|o| covers(&o.0));
        if !covered[f] && n.is_none() {
            match o {
                Some((s, src)) => {
                    added.push((src, s));
                    n = Some(s);
                }
                None => bridges.push(f),
            }
        }
        if let Some(n) = n {
            nec[p] = Some(nec[p].map_or(n, |x| x.min(n)));
        }
        if let Some(o) = o {
            opt[p] = Some(opt[p].map_or(o, |x| x.min(o)));
        }
    }
    added.sort();
    (added, bridges)
}

#[derive(Clone, Debug)]
pub struct FastOutcome {
    pub aug: Augmentation,
    pub chosen: Vec<VirtualEdge<SplitLabel>>,
    pub nodes: Vec<FastNode>,
    pub frag: Fragmentation,
    pub directory: Directory,
    pub labels: Vec<SplitLabel>,
    pub metrics: Metrics,
    pub transcript: String,
}

impl FastOutcome {
    pub fn bridge_vertices(&self) -> Vec<VertexId> {
        (0..self.nodes.len() as VertexId).filter(|&v| self.nodes[v as usize].bridge).collect()
    }
}

/// The whole pipeline; bridges are reported in the outcome.
pub fn fast_tap_session(g: &Multigraph, tree: &RootedTree, cfg: &RunConfig) -> Result<FastOutcome> {
    let n = tree.n();
    let r = tree.root();
    let mut s = Session::new(g, *cfg);

    let bfs_nodes = s.run("bfs", &DistBfs { root: r })?;
    let bfs_edges: Vec<EdgeId> = bfs_nodes.iter().filter_map(|b| b.parent.map(|(_, e)| e)).collect();
    let bfs = RootedTree::from_edges(g, r, &bfs_edges)?;

    let frag = fragment_decompose(tree);
    let theta = fragment::threshold(n) as u32;
    s.charge("fragments", bfs.height() + theta * log_star(n).max(1))?;
    let forest = tree.split(&frag.cut());

    let local = s.run("labels_local", &LabelProgram { tree: &forest })?;
    let views = s.run("labels_local", &FragInfo { tree, forest: &forest, local: &local })?;

    let sources: Vec<_> = views
        .iter()
        .enumerate()
        .filter_map(|(v, fv)| {
            fv.parent_side.as_ref().map(|(pf, l)| {
                let mut rec = vec![Token::Vertex(v as VertexId), Token::Vertex(*pf)];
                rec.extend(l.to_tokens());
                (v as VertexId, rec)
            })
        })
        .collect();
    let recs = disseminate(&mut s, "labels_global", &bfs, sources, false)?;
    let mut parsed = Vec::with_capacity(recs.len());
    for rec in &recs {
        parsed.push((rec[0].raw() as VertexId, rec[1].raw() as VertexId, LcaLabel::from_tokens(&rec[2..])?));
    }
    let dir = Directory::from_records(r, &parsed)?;
    let scheme = SplitScheme { dir: &dir };
    let labels: Vec<SplitLabel> =
        views.iter().zip(local).map(|(fv, l)| SplitLabel { frag: fv.frag, local: l }).collect();
    let key: Vec<u64> = labels.iter().map(|l| scheme.key(l)).collect();
    let frag_idx: Vec<usize> = labels.iter().map(|l| dir.index(l.frag)).collect();

    let incoming = s.run("exchange", &Exchange { scheme: &scheme, tree, graph: g, labels: &labels })?;
    let best_in: Vec<Option<Summary>> = incoming
        .iter()
        .map(|es| es.iter().map(|e| Summary { depth: scheme.key(&e.anc), origin: e.origin }).min())
        .collect();

    let mut nodes = vec![FastNode::default(); n];
    let root_label = |f: VertexId| SplitLabel { frag: f, local: LcaLabel::root(f) };
    // does an edge that leaves fragment `f` upward with key `k` cover the parent edge of `v`?
    let covers_from = |v: usize, f: VertexId, k: u64| k < key[v] && scheme.is_ancestor(&labels[v], &root_label(f));

    // leaf edges
    let mut seed = vec![None; n];
    for v in 0..n as VertexId {
        if tree.is_leaf(v) && v != r {
            match best_in[v as usize] {
                Some(b) => {
                    seed[v as usize] = Some(b);
                    nodes[v as usize].leaf_added = true;
                }
                None => nodes[v as usize].bridge = true,
            }
        }
    }
    let up_leaf = s.run("leaf_cover", &MaxUp { forest: &forest, seed: &seed, key: &key })?;
    let sources: Vec<_> = frag
        .roots
        .iter()
        .filter(|&&fr| fr != r)
        .filter_map(|&fr| up_leaf[fr as usize].map(|b| (fr, edge_record(fr, b))))
        .collect();
    let leaf_recs: Vec<_> = disseminate(&mut s, "leaf_cover", &bfs, sources, false)?
        .iter()
        .map(|x| parse_edge_record(x))
        .collect();
    for v in 0..n {
        nodes[v].covered_after_leaf = v as VertexId != r
            && (up_leaf[v].is_some() || leaf_recs.iter().any(|&(f, b)| covers_from(v, f, b.depth)));
    }

    // global edges
    let up_glob = s.run("global_cover", &MaxUp { forest: &forest, seed: &best_in, key: &key })?;
    let sources: Vec<_> = frag
        .roots
        .iter()
        .filter(|&&fr| fr != r)
        .filter_map(|&fr| up_glob[fr as usize].map(|b| (fr, edge_record(fr, b))))
        .collect();
    let mut em = vec![None; dir.count()];
    for rec in disseminate(&mut s, "global_cover", &bfs, sources, false)? {
        let (f, b) = parse_edge_record(&rec);
        em[dir.index(f)] = Some(b);
    }
    let covered_tf: Vec<bool> = (0..dir.count()).map(|f| nodes[dir.ids[f] as usize].covered_after_leaf).collect();
    let (a2, tf_bridges) = replay_on_contracted(&dir, &em, &covered_tf);
    for f in tf_bridges {
        nodes[dir.ids[f] as usize].bridge = true;
    }
    let a2_set: HashSet<(usize, Summary)> = a2.iter().copied().collect();
    for v in 0..n {
        nodes[v].global_added = best_in[v].is_some_and(|b| a2_set.contains(&(frag_idx[v], b)));
        nodes[v].covered_after_global = nodes[v].covered_after_leaf
            || a2.iter().any(|&(f, b)| {
                (f == frag_idx[v] && up_glob[v] == Some(b)) || covers_from(v, dir.ids[f], b.depth)
            });
    }

    // local edges: fragments below inject their best upward edge at the attachment vertex
    let mut sub_best: Vec<Option<(Summary, usize)>> = em.iter().enumerate().map(|(f, b)| b.map(|b| (b, f))).collect();
    let mut order: Vec<usize> = (0..dir.count()).collect();
    order.sort_by_key(|&f| std::cmp::Reverse(dir.depth[f]));
    for f in order {
        if let (Some(p), Some(b)) = (dir.parent[f], sub_best[f]) {
            let p = p as usize;
            sub_best[p] = Some(sub_best[p].map_or(b, |x| x.min(b)));
        }
    }
    let mut cand: Vec<Option<(Summary, Option<usize>)>> = best_in.iter().map(|b| b.map(|b| (b, None))).collect();
    for &fr in frag.roots.iter().filter(|&&fr| fr != r) {
        let w = tree.parent(fr).unwrap() as usize;
        if let Some((b, src)) = sub_best[dir.index(fr)] {
            if cand[w].is_none_or(|c| b < c.0) {
                cand[w] = Some((b, Some(src)));
            }
        }
    }
    let cand_sum: Vec<Option<Summary>> = cand.iter().map(|c| c.map(|c| c.0)).collect();
    let pre: Vec<bool> = nodes.iter().map(|x| x.covered_after_global).collect();
    let aug = s.run(
        "local_cover",
        &AAug { tree: &forest, best_incoming: &cand_sum, own_key: &key, precovered: Some(&pre) },
    )?;
    let mut sources = Vec::new();
    for v in 0..n {
        if aug[v].bridge {
            nodes[v].bridge = true;
        }
        if let Some((_, true)) = aug[v].incoming {
            match cand[v].unwrap() {
                (_, None) => nodes[v].local_added = true,
                (b, Some(src)) => sources.push((v as VertexId, edge_record(dir.ids[src], b))),
            }
        }
    }
    let picked: HashSet<(usize, Summary)> = disseminate(&mut s, "final_broadcast", &bfs, sources, true)?
        .iter()
        .map(|x| {
            let (f, b) = parse_edge_record(x);
            (dir.index(f), b)
        })
        .collect();
    for v in 0..n {
        if best_in[v].is_some_and(|b| picked.contains(&(frag_idx[v], b))) {
            nodes[v].local_added = true;
        }
    }

    let chosen: Vec<VirtualEdge<SplitLabel>> = (0..n)
        .filter(|&v| nodes[v].in_cover())
        .map(|v| {
            let b = best_in[v].unwrap();
            incoming[v].iter().find(|e| e.origin == b.origin && scheme.key(&e.anc) == b.depth).unwrap().clone()
        })
        .collect();
    let aug = project_augmentation(g, tree, &chosen)?;
    let transcript = if cfg.transcript { s.transcript_text() } else { String::new() };
    Ok(FastOutcome { aug, chosen, nodes, frag, directory: dir, labels, metrics: s.metrics, transcript })
}

/// 4-approximation for unweighted TAP whose round count does not depend on the tree height.
pub fn run_fast_tap(g: &Multigraph, tree: &RootedTree, cfg: &RunConfig) -> Result<FastOutcome> {
    let out = fast_tap_session(g, tree, cfg)?;
    if let Some(&v) = out.bridge_vertices().first() {
        let edge = tree.parent_edge(v).unwrap_or(0);
        return Err(Error::Bridge { vertex: v, edge });
    }
    Ok(out)
}
