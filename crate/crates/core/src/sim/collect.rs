//! Tree-wide collection: pipelined upcast to the root followed by a broadcast
//! of everything the root receives, and a one-value convergecast.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use super::stream::{FrameReader, Lane, Piece, END};
use super::{Envelope, NodeCtx, NodeProgram, Outbox, PhaseStats, RunConfig, Status, Token};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, RootedTree, VertexId};

/// How vertices learn that the stream is complete.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    /// Every vertex knows how many records exist.
    Known(usize),
    /// The stream ends with an explicit end marker.
    Terminated,
}

/// What one vertex holds after a gather.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gathered {
    pub count: usize,
    /// Hash of the received token stream; equal at every vertex on success.
    pub digest: u64,
    /// The records, in the order the root received them, when kept.
    pub records: Option<Vec<Vec<Token>>>,
}

/// Upcast every vertex's records along `tree`, then broadcast them from the root.
pub struct Gather<'a> {
    pub tree: &'a RootedTree,
    pub records: &'a [Vec<Vec<Token>>],
    pub count: Count,
    /// Keep the record contents at every vertex, not just at the root.
    pub keep_all: bool,
    /// Forward each distinct record only once.
    pub dedup: bool,
}

pub struct GatherState {
    up: Lane,
    down: Vec<Lane>,
    from_child: Vec<FrameReader>,
    from_parent: FrameReader,
    children_done: usize,
    end_queued: bool,
    count: usize,
    hasher: DefaultHasher,
    records: Vec<Vec<Token>>,
    seen: HashSet<Vec<Token>>,
}

impl GatherState {
    fn absorb(&mut self, frame: Vec<Token>, keep: bool) {
        Token::Control(frame.len() as u64).hash(&mut self.hasher);
        frame.hash(&mut self.hasher);
        self.count += 1;
        if keep {
            self.records.push(frame);
        }
    }
}

impl Gather<'_> {
    fn keep(&self, v: VertexId) -> bool {
        self.keep_all || v == self.tree.root()
    }
}

impl NodeProgram for Gather<'_> {
    type State = GatherState;
    type Output = Gathered;

    fn init(&self, ctx: &NodeCtx) -> GatherState {
        let v = ctx.vertex;
        let kids = self.tree.children(v).len();
        let mut st = GatherState {
            up: Lane::default(),
            down: vec![Lane::default(); kids],
            from_child: vec![FrameReader::default(); kids],
            from_parent: FrameReader::default(),
            children_done: 0,
            end_queued: false,
            count: 0,
            hasher: DefaultHasher::new(),
            records: Vec::new(),
            seen: HashSet::new(),
        };
        for r in &self.records[v as usize] {
            if self.dedup && !st.seen.insert(r.clone()) {
                continue;
            }
            if v == self.tree.root() {
                for l in &mut st.down {
                    l.push_frame(r);
                }
                st.absorb(r.clone(), true);
            } else {
                st.up.push_frame(r);
            }
        }
        st
    }

    fn step(&self, ctx: &NodeCtx, st: &mut GatherState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        let is_root = v == self.tree.root();
        let kids = self.tree.children(v);
        let keep = self.keep(v);
        for env in inbox {
            if Some(env.edge) == self.tree.parent_edge(v) {
                for &t in &env.msg {
                    for l in &mut st.down {
                        l.push(t);
                    }
                    if let Some(Piece::Frame(f)) = st.from_parent.feed(t) {
                        st.absorb(f, keep);
                    }
                }
                continue;
            }
            let Some(ci) = kids.iter().position(|&(_, e)| e == env.edge) else {
                continue;
            };
            for &t in &env.msg {
                match st.from_child[ci].feed(t) {
                    Some(Piece::Frame(f)) => {
                        if self.dedup && !st.seen.insert(f.clone()) {
                            continue;
                        }
                        if is_root {
                            for l in &mut st.down {
                                l.push_frame(&f);
                            }
                            st.absorb(f, true);
                        } else {
                            st.up.push_frame(&f);
                        }
                    }
                    Some(Piece::End) => st.children_done += 1,
                    None => {}
                }
            }
        }
        if self.count == Count::Terminated && !st.end_queued && st.children_done == kids.len() {
            st.end_queued = true;
            if is_root {
                for l in &mut st.down {
                    l.push(END);
                }
            } else {
                st.up.push(END);
            }
        }
        if let Some(pe) = self.tree.parent_edge(v) {
            st.up.flush(pe, ctx.budget, out);
        }
        for (l, &(_, e)) in st.down.iter_mut().zip(kids) {
            l.flush(e, ctx.budget, out);
        }
        if st.up.is_empty() && st.down.iter().all(Lane::is_empty) {
            Status::Halt
        } else {
            Status::Continue
        }
    }

    fn finish(&self, ctx: &NodeCtx, st: GatherState) -> Gathered {
        Gathered {
            count: st.count,
            digest: st.hasher.finish(),
            records: self.keep(ctx.vertex).then_some(st.records),
        }
    }
}

/// Checks that every vertex saw the same stream and returns the root's copy.
pub fn agreed_records(tree: &RootedTree, out: &mut [Gathered]) -> Result<Vec<Vec<Token>>> {
    let root = &out[tree.root() as usize];
    let (count, digest) = (root.count, root.digest);
    if let Some(bad) = out.iter().position(|g| g.count != count || g.digest != digest) {
        return Err(Error::Internal(format!("vertex {bad} received a different broadcast stream")));
    }
    Ok(out[tree.root() as usize].records.take().unwrap_or_default())
}

/// Delivers every `(source, message)` to every vertex along a BFS tree.
/// Returns each vertex's received messages (root arrival order) and the run's counters.
pub fn broadcast_upcast(
    g: &Multigraph,
    tree: &RootedTree,
    sources: &[(VertexId, Vec<Token>)],
    cfg: &RunConfig,
) -> Result<(Vec<Vec<Vec<Token>>>, PhaseStats)> {
    let mut records = vec![Vec::new(); g.n()];
    for (s, m) in sources {
        if *s as usize >= g.n() {
            return Err(Error::Input(format!("source vertex {s} not in graph")));
        }
        records[*s as usize].push(m.clone());
    }
    let prog = Gather { tree, records: &records, count: Count::Known(sources.len()), keep_all: true, dedup: false };
    let out = super::run(g, &prog, cfg)?;
    let mut stats = out.stats;
    stats.broadcast_items = sources.len() as u64;
    Ok((out.outputs.into_iter().map(|o| o.records.unwrap_or_default()).collect(), stats))
}

/// Folds one value per vertex up the tree with `op` and hands the result to every vertex.
pub struct Convergecast<'a> {
    pub tree: &'a RootedTree,
    pub values: &'a [u64],
    pub op: fn(u64, u64) -> u64,
}

pub struct ConvState {
    acc: u64,
    waiting: usize,
    sent_up: bool,
    result: Option<u64>,
}

impl NodeProgram for Convergecast<'_> {
    type State = ConvState;
    type Output = u64;

    fn init(&self, ctx: &NodeCtx) -> ConvState {
        ConvState {
            acc: self.values[ctx.vertex as usize],
            waiting: self.tree.children(ctx.vertex).len(),
            sent_up: false,
            result: None,
        }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut ConvState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        let pe = self.tree.parent_edge(v);
        for env in inbox {
            let x = env.msg[0].raw();
            if Some(env.edge) == pe {
                st.result = Some(x);
            } else {
                st.acc = (self.op)(st.acc, x);
                st.waiting -= 1;
            }
        }
        if st.waiting == 0 && !st.sent_up {
            st.sent_up = true;
            match pe {
                Some(e) => out.send(e, [Token::Control(st.acc)]),
                None => st.result = Some(st.acc),
            }
        }
        if let Some(r) = st.result {
            for &(_, e) in self.tree.children(v) {
                out.send(e, [Token::Control(r)]);
            }
        }
        Status::Halt
    }

    fn finish(&self, _: &NodeCtx, st: ConvState) -> u64 {
        st.result.expect("convergecast incomplete")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs_tree;

    fn path(n: u32) -> Multigraph {
        let e: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
        Multigraph::new(n as usize, &e).unwrap()
    }

    #[test]
    fn nothing_to_send_costs_nothing() {
        let g = path(6);
        let t = bfs_tree(&g, 0).unwrap();
        let (got, stats) = broadcast_upcast(&g, &t, &[], &RunConfig::default()).unwrap();
        assert_eq!(stats.rounds, 0);
        assert!(got.iter().all(|r| r.is_empty()));
    }

    #[test]
    fn single_root_message_reaches_everyone() {
        let g = path(6);
        let t = bfs_tree(&g, 0).unwrap();
        let msg = vec![Token::Vertex(0), Token::Weight(5)];
        let (got, stats) = broadcast_upcast(&g, &t, &[(0, msg.clone())], &RunConfig::default()).unwrap();
        assert!(stats.rounds <= 5 + 1);
        assert!(got.iter().all(|r| r == &vec![msg.clone()]));
    }

    #[test]
    fn bad_source_is_rejected() {
        let g = path(3);
        let t = bfs_tree(&g, 0).unwrap();
        assert!(broadcast_upcast(&g, &t, &[(7, vec![Token::Control(1)])], &RunConfig::default()).is_err());
    }

    #[test]
    fn terminated_stream_agrees_everywhere() {
        let g = path(7);
        let t = bfs_tree(&g, 3).unwrap();
        let mut recs = vec![Vec::new(); 7];
        recs[0].push(vec![Token::Vertex(0); 9]);
        recs[6].push(vec![Token::Vertex(6)]);
        recs[3].push(vec![]);
        let prog = Gather { tree: &t, records: &recs, count: Count::Terminated, keep_all: false, dedup: false };
        let mut out = crate::sim::run(&g, &prog, &RunConfig::default()).unwrap().outputs;
        let all = agreed_records(&t, &mut out).unwrap();
        assert_eq!(all.len(), 3);
        assert!(out[1].records.is_none());
    }

    #[test]
    fn convergecast_min() {
        let g = path(5);
        let t = bfs_tree(&g, 2).unwrap();
        let vals = [9, 4, 7, 3, 8];
        let prog = Convergecast { tree: &t, values: &vals, op: |a, b| a.min(b) };
        let out = crate::sim::run(&g, &prog, &RunConfig::default()).unwrap();
        assert_eq!(out.outputs, vec![3; 5]);
        assert!(out.stats.rounds <= 2 * t.height());
    }

    #[test]
    fn duplicates_are_dropped_on_the_way_up() {
        let g = path(5);
        let t = bfs_tree(&g, 0).unwrap();
        let mut recs = vec![Vec::new(); 5];
        for r in recs.iter_mut().skip(1) {
            r.push(vec![Token::Edge(42)]);
        }
        recs[2].push(vec![Token::Edge(7)]);
        let prog = Gather { tree: &t, records: &recs, count: Count::Terminated, keep_all: false, dedup: true };
        let mut out = crate::sim::run(&g, &prog, &RunConfig::default()).unwrap().outputs;
        let mut all = agreed_records(&t, &mut out).unwrap();
        all.sort_by_key(|r| r[0].raw());
        assert_eq!(all, vec![vec![Token::Edge(7)], vec![Token::Edge(42)]]);
    }
}
