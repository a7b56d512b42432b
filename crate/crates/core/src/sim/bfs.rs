//! Distributed BFS tree construction from a known root.

use super::{Envelope, NodeCtx, NodeProgram, Outbox, Status, Token};
use crate::graph::{EdgeId, VertexId};

const LEVEL: u64 = 0;
const CHILD: u64 = 1;

/// Builds the same tree as [`crate::graph::bfs_tree`]: among neighbors one
/// level closer to the root, the lowest id (then lowest edge id) is the parent.
pub struct DistBfs {
    pub root: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BfsNode {
    pub parent: Option<(VertexId, EdgeId)>,
    pub depth: u32,
    pub children: Vec<(VertexId, EdgeId)>,
    reached: bool,
}

/// Lowest edge id to each distinct neighbor, skipping `except`.
fn one_edge_per_neighbor(ctx: &NodeCtx, except: &[VertexId]) -> Vec<EdgeId> {
    let mut best: Vec<(VertexId, EdgeId)> = Vec::new();
    for &(e, y) in ctx.incident {
        if except.contains(&y) {
            continue;
        }
        match best.iter_mut().find(|(n, _)| *n == y) {
            Some(b) => b.1 = b.1.min(e),
            None => best.push((y, e)),
        }
    }
    best.into_iter().map(|(_, e)| e).collect()
}

impl NodeProgram for DistBfs {
    type State = BfsNode;
    type Output = BfsNode;

    fn init(&self, _: &NodeCtx) -> BfsNode {
        BfsNode::default()
    }

    fn step(&self, ctx: &NodeCtx, st: &mut BfsNode, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let mut levels: Vec<(VertexId, EdgeId, u32)> = Vec::new();
        for env in inbox {
            match env.msg[0] {
                Token::Control(LEVEL) => levels.push((env.from, env.edge, env.msg[1].raw() as u32)),
                Token::Control(CHILD) => st.children.push((env.from, env.edge)),
                t => panic!("unexpected token {t}"),
            }
        }
        st.children.sort_unstable();
        if st.reached {
            return Status::Halt;
        }
        if ctx.vertex == self.root {
            st.reached = true;
            for e in one_edge_per_neighbor(ctx, &[]) {
                out.send(e, [Token::Control(LEVEL), Token::Control(0)]);
            }
        } else if let Some(&(p, e, d)) = levels.iter().min_by_key(|&&(p, e, _)| (p, e)) {
            st.reached = true;
            st.parent = Some((p, e));
            st.depth = d + 1;
            out.send(e, [Token::Control(CHILD)]);
            let senders: Vec<VertexId> = levels.iter().map(|l| l.0).collect();
            for e in one_edge_per_neighbor(ctx, &senders) {
                out.send(e, [Token::Control(LEVEL), Token::Control(st.depth as u64)]);
            }
        }
        Status::Halt
    }

    fn finish(&self, _: &NodeCtx, st: BfsNode) -> BfsNode {
        st
    }
}
