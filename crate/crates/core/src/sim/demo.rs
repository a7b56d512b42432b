//! Small programs that exercise the engine.

use super::{Envelope, NodeCtx, NodeProgram, Outbox, Status, Token};
use crate::graph::{EdgeId, VertexId};

const FLOOD: u64 = 0;
const ECHO: u64 = 1;

/// Flood from `root`, then echo subtree sizes back. The root ends up with `n`.
pub struct FloodEcho {
    pub root: VertexId,
}

#[derive(Clone, Debug, Default)]
pub struct EchoState {
    parent: Option<EdgeId>,
    reached: bool,
    pending: Vec<EdgeId>,
    size: u64,
    echoed: bool,
}

impl NodeProgram for FloodEcho {
    type State = EchoState;
    /// Subtree size as seen by the echo, and the edge to the parent.
    type Output = (u64, Option<EdgeId>);

    fn init(&self, _: &NodeCtx) -> EchoState {
        EchoState { size: 1, ..Default::default() }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut EchoState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let mut flooded_by: Vec<EdgeId> = Vec::new();
        for env in inbox {
            match env.msg[0] {
                Token::Control(FLOOD) => flooded_by.push(env.edge),
                Token::Control(ECHO) => st.size += env.msg[1].raw(),
                t => panic!("unexpected token {t}"),
            }
            st.pending.retain(|&e| e != env.edge);
        }
        let start = if ctx.vertex == self.root && ctx.round == 0 {
            true
        } else if !st.reached && !flooded_by.is_empty() {
            st.parent = flooded_by.iter().copied().min();
            true
        } else {
            false
        };
        if start {
            st.reached = true;
            for &(e, _) in ctx.incident {
                if Some(e) != st.parent {
                    out.send(e, [Token::Control(FLOOD)]);
                    if !flooded_by.contains(&e) {
                        st.pending.push(e);
                    }
                }
            }
        }
        if st.reached && st.pending.is_empty() && !st.echoed {
            st.echoed = true;
            if let Some(p) = st.parent {
                out.send(p, [Token::Control(ECHO), Token::Control(st.size)]);
            }
        }
        Status::Halt
    }

    fn finish(&self, _: &NodeCtx, st: EchoState) -> (u64, Option<EdgeId>) {
        (st.size, st.parent)
    }
}

/// Every vertex learns the minimum id by repeated forwarding of improvements.
pub struct MinIdLeader;

impl NodeProgram for MinIdLeader {
    type State = (VertexId, bool);
    type Output = VertexId;

    fn init(&self, ctx: &NodeCtx) -> (VertexId, bool) {
        (ctx.vertex, true)
    }

    fn step(&self, ctx: &NodeCtx, st: &mut (VertexId, bool), inbox: &[Envelope], out: &mut Outbox) -> Status {
        for env in inbox {
            let x = env.msg[0].raw() as VertexId;
            if x < st.0 {
                st.0 = x;
                st.1 = true;
            }
        }
        if st.1 {
            st.1 = false;
            for &(e, _) in ctx.incident {
                out.send(e, [Token::Vertex(st.0)]);
            }
        }
        Status::Halt
    }

    fn finish(&self, _: &NodeCtx, st: (VertexId, bool)) -> VertexId {
        st.0
    }
}
