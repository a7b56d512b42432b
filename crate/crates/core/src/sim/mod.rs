//! Round-synchronous message passing over the edges of a [`Multigraph`].
//!
//! Every vertex runs the same [`NodeProgram`]. In round `r` a vertex reads
//! the messages sent to it in round `r - 1`, updates its own state and queues
//! messages on its incident edges. A message is a short sequence of
//! [`Token`]s and each edge direction carries at most `budget` tokens per
//! round. A vertex that returns [`Status::Halt`] sleeps until a message
//! reaches it; a run ends once every vertex sleeps and nothing is in flight.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId, Weight};

pub mod bfs;
pub mod collect;
pub mod demo;
pub mod stream;

/// One O(log n)-bit quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Vertex(VertexId),
    Edge(EdgeId),
    Weight(Weight),
    Label(u64),
    Control(u64),
}

impl Token {
    /// Payload bits regardless of kind.
    pub fn raw(self) -> u64 {
        match self {
            Token::Vertex(x) | Token::Edge(x) => x as u64,
            Token::Weight(x) | Token::Label(x) | Token::Control(x) => x,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Vertex(x) => write!(f, "v{x}"),
            Token::Edge(x) => write!(f, "e{x}"),
            Token::Weight(x) => write!(f, "w{x}"),
            Token::Label(x) => write!(f, "l{x:x}"),
            Token::Control(x) => write!(f, "c{x}"),
        }
    }
}

pub type Message = Vec<Token>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub edge: EdgeId,
    pub from: VertexId,
    pub msg: Message,
}

/// What a vertex may see about its surroundings.
#[derive(Clone, Copy, Debug)]
pub struct NodeCtx<'a> {
    pub vertex: VertexId,
    pub round: u32,
    pub budget: usize,
    /// Incident edges as (edge id, neighbor).
    pub incident: &'a [(EdgeId, VertexId)],
}

#[derive(Debug, Default)]
pub struct Outbox {
    sends: Vec<(EdgeId, Message)>,
}

impl Outbox {
    /// Queue tokens on `edge`. Repeated calls on one edge in one round extend the same message.
    pub fn send(&mut self, edge: EdgeId, tokens: impl IntoIterator<Item = Token>) {
        match self.sends.iter_mut().find(|(e, _)| *e == edge) {
            Some((_, m)) => m.extend(tokens),
            None => self.sends.push((edge, tokens.into_iter().collect())),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sends.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Continue,
    Halt,
}

pub trait NodeProgram: Sync {
    type State: Send;
    type Output: Send;

    fn init(&self, ctx: &NodeCtx) -> Self::State;
    fn step(&self, ctx: &NodeCtx, state: &mut Self::State, inbox: &[Envelope], out: &mut Outbox) -> Status;
    fn finish(&self, ctx: &NodeCtx, state: Self::State) -> Self::Output;
}

/// Order in which vertices are stepped inside a round. Results never depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Serial,
    Reversed,
    Shuffled(u64),
    Parallel(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub budget: usize,
    pub max_rounds: u32,
    pub schedule: Schedule,
    pub transcript: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { budget: 4, max_rounds: 1_000_000, schedule: Schedule::Serial, transcript: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseStats {
    pub name: String,
    pub rounds: u32,
    pub messages: u64,
    pub tokens: u64,
    pub max_tokens_edge_round: usize,
    /// Distinct records carried by a tree-wide broadcast, when the phase is one.
    pub broadcast_items: u64,
}

impl PhaseStats {
    fn absorb(&mut self, o: &PhaseStats) {
        self.rounds += o.rounds;
        self.messages += o.messages;
        self.tokens += o.tokens;
        self.max_tokens_edge_round = self.max_tokens_edge_round.max(o.max_tokens_edge_round);
        self.broadcast_items = self.broadcast_items.max(o.broadcast_items);
    }
}

/// Per-phase counters in the order phases first ran.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metrics {
    pub phases: Vec<PhaseStats>,
}

impl Metrics {
    /// Adds a phase, merging with an earlier phase of the same name.
    pub fn add(&mut self, s: PhaseStats) {
        match self.phases.iter_mut().find(|p| p.name == s.name) {
            Some(p) => p.absorb(&s),
            None => self.phases.push(s),
        }
    }

    pub fn extend(&mut self, other: &Metrics) {
        for p in &other.phases {
            self.add(p.clone());
        }
    }

    pub fn phase(&self, name: &str) -> Option<&PhaseStats> {
        self.phases.iter().find(|p| p.name == name)
    }

    pub fn rounds(&self) -> u32 {
        self.phases.iter().map(|p| p.rounds).sum()
    }

    pub fn messages(&self) -> u64 {
        self.phases.iter().map(|p| p.messages).sum()
    }

    pub fn tokens(&self) -> u64 {
        self.phases.iter().map(|p| p.tokens).sum()
    }

    pub fn max_tokens_edge_round(&self) -> usize {
        self.phases.iter().map(|p| p.max_tokens_edge_round).max().unwrap_or(0)
    }

    /// `phase,rounds,messages,tokens,max_tokens_edge_round`, one row per phase and a final `total` row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("phase,rounds,messages,tokens,max_tokens_edge_round\n");
        for p in &self.phases {
            s += &format!("{},{},{},{},{}\n", p.name, p.rounds, p.messages, p.tokens, p.max_tokens_edge_round);
        }
        s += &format!(
            "total,{},{},{},{}\n",
            self.rounds(),
            self.messages(),
            self.tokens(),
            self.max_tokens_edge_round()
        );
        s
    }
}

pub struct RunOutcome<O> {
    pub outputs: Vec<O>,
    pub stats: PhaseStats,
    pub transcript: Vec<String>,
}

type Sends = Vec<(EdgeId, Message)>;

fn step_one<P: NodeProgram>(
    g: &Multigraph,
    p: &P,
    v: VertexId,
    round: u32,
    budget: usize,
    state: &mut P::State,
    inbox: &[Envelope],
) -> (Sends, Status) {
    let ctx = NodeCtx { vertex: v, round, budget, incident: g.adj(v) };
    let mut out = Outbox::default();
    let st = p.step(&ctx, state, inbox, &mut out);
    (out.sends, st)
}

/// Runs `prog` to quiescence. `round_offset` only shifts transcript round numbers.
pub fn run_offset<P: NodeProgram>(
    g: &Multigraph,
    prog: &P,
    cfg: &RunConfig,
    round_offset: u32,
) -> Result<RunOutcome<P::Output>> {
    if cfg.budget == 0 {
        return Err(Error::Input("budget must be at least 1".into()));
    }
    let n = g.n();
    let mut states: Vec<P::State> = (0..n as VertexId)
        .map(|v| prog.init(&NodeCtx { vertex: v, round: 0, budget: cfg.budget, incident: g.adj(v) }))
        .collect();
    let mut awake = vec![true; n];
    let mut inbox: Vec<Vec<Envelope>> = vec![Vec::new(); n];
    let mut stats = PhaseStats::default();
    let mut transcript = Vec::new();
    let mut last_send: Option<u32> = None;
    let mut rng = match cfg.schedule {
        Schedule::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };

    let mut round: u32 = 0;
    loop {
        let active: Vec<VertexId> =
            (0..n as VertexId).filter(|&v| awake[v as usize] || !inbox[v as usize].is_empty()).collect();
        if active.is_empty() {
            break;
        }
        if round > cfg.max_rounds {
            stats.rounds = last_send.map_or(0, |r| r + 1);
            let mut partial = Metrics::default();
            partial.add(stats);
            return Err(Error::Timeout { max_rounds: cfg.max_rounds, partial: Box::new(partial) });
        }

        let mut results: Vec<(VertexId, Sends, Status)> = Vec::with_capacity(active.len());
        match cfg.schedule {
            Schedule::Parallel(threads) if threads > 1 && active.len() > 1 => {
                let chunk = n.div_ceil(threads).max(1);
                let inbox_ref = &inbox;
                let awake_ref = &awake;
                std::thread::scope(|s| {
                    let handles: Vec<_> = states
                        .chunks_mut(chunk)
                        .enumerate()
                        .map(|(ci, part)| {
                            s.spawn(move || {
                                let base = ci * chunk;
                                let mut local = Vec::new();
                                for (i, st) in part.iter_mut().enumerate() {
                                    let v = base + i;
                                    if awake_ref[v] || !inbox_ref[v].is_empty() {
                                        let (sends, status) =
                                            step_one(g, prog, v as VertexId, round, cfg.budget, st, &inbox_ref[v]);
                                        local.push((v as VertexId, sends, status));
                                    }
                                }
                                local
                            })
                        })
                        .collect();
                    for h in handles {
                        results.extend(h.join().expect("worker panicked"));
                    }
                });
            }
            _ => {
                let mut order = active.clone();
                match cfg.schedule {
                    Schedule::Reversed => order.reverse(),
                    Schedule::Shuffled(_) => order.shuffle(rng.as_mut().unwrap()),
                    _ => {}
                }
                for v in order {
                    let (sends, status) =
                        step_one(g, prog, v, round, cfg.budget, &mut states[v as usize], &inbox[v as usize]);
                    results.push((v, sends, status));
                }
            }
        }
        results.sort_unstable_by_key(|r| r.0);

        let mut next: Vec<Vec<Envelope>> = vec![Vec::new(); n];
        for v in &active {
            inbox[*v as usize].clear();
        }
        for (v, sends, status) in results {
            awake[v as usize] = status == Status::Continue;
            for (e, msg) in sends {
                if e as usize >= g.m() {
                    return Err(Error::NotIncident { vertex: v, edge: e });
                }
                let ed = g.edge(e);
                if ed.u != v && ed.v != v {
                    return Err(Error::NotIncident { vertex: v, edge: e });
                }
                if msg.is_empty() {
                    continue;
                }
                if msg.len() > cfg.budget {
                    return Err(Error::BudgetViolation {
                        vertex: v,
                        edge: e,
                        round: round_offset + round,
                        tokens: msg.len(),
                        budget: cfg.budget,
                    });
                }
                if round >= cfg.max_rounds {
                    stats.rounds = round + 1;
                    let mut partial = Metrics::default();
                    partial.add(stats);
                    return Err(Error::Timeout { max_rounds: cfg.max_rounds, partial: Box::new(partial) });
                }
                let dst = ed.other(v);
                stats.messages += 1;
                stats.tokens += msg.len() as u64;
                stats.max_tokens_edge_round = stats.max_tokens_edge_round.max(msg.len());
                last_send = Some(round);
                if cfg.transcript {
                    let payload: Vec<String> = msg.iter().map(|t| t.to_string()).collect();
                    transcript.push(format!(
                        "{},{},{},{},{},{}",
                        round_offset + round,
                        v,
                        dst,
                        e,
                        msg.len(),
                        payload.join(" ")
                    ));
                }
                next[dst as usize].push(Envelope { edge: e, from: v, msg });
            }
        }
        inbox = next;
        round += 1;
    }
    stats.rounds = last_send.map_or(0, |r| r + 1);
    let outputs = states
        .into_iter()
        .enumerate()
        .map(|(v, s)| {
            let v = v as VertexId;
            prog.finish(&NodeCtx { vertex: v, round, budget: cfg.budget, incident: g.adj(v) }, s)
        })
        .collect();
    Ok(RunOutcome { outputs, stats, transcript })
}

pub fn run<P: NodeProgram>(g: &Multigraph, prog: &P, cfg: &RunConfig) -> Result<RunOutcome<P::Output>> {
    run_offset(g, prog, cfg, 0)
}

/// A sequence of named phases over one graph. Each phase runs to quiescence
/// before the next one starts; `max_rounds` caps the whole sequence.
pub struct Session<'g> {
    pub graph: &'g Multigraph,
    pub cfg: RunConfig,
    pub metrics: Metrics,
    pub transcript: Vec<String>,
}

impl<'g> Session<'g> {
    pub fn new(graph: &'g Multigraph, cfg: RunConfig) -> Self {
        Session { graph, cfg, metrics: Metrics::default(), transcript: Vec::new() }
    }

    pub fn run<P: NodeProgram>(&mut self, phase: &str, prog: &P) -> Result<Vec<P::Output>> {
        let used = self.metrics.rounds();
        let mut cfg = self.cfg;
        cfg.max_rounds = self.cfg.max_rounds.saturating_sub(used);
        match run_offset(self.graph, prog, &cfg, used) {
            Ok(mut out) => {
                out.stats.name = phase.to_string();
                self.metrics.add(out.stats);
                self.transcript.append(&mut out.transcript);
                Ok(out.outputs)
            }
            Err(Error::Timeout { partial, .. }) => {
                let mut m = self.metrics.clone();
                for mut p in partial.phases {
                    p.name = phase.to_string();
                    m.add(p);
                }
                Err(Error::Timeout { max_rounds: self.cfg.max_rounds, partial: Box::new(m) })
            }
            Err(e) => Err(e),
        }
    }

    /// Records rounds for a step that is computed outside the simulator.
    pub fn charge(&mut self, phase: &str, rounds: u32) -> Result<()> {
        self.metrics.add(PhaseStats { name: phase.to_string(), rounds, ..Default::default() });
        if self.metrics.rounds() > self.cfg.max_rounds {
            return Err(Error::Timeout { max_rounds: self.cfg.max_rounds, partial: Box::new(self.metrics.clone()) });
        }
        Ok(())
    }

    pub fn note_broadcast_items(&mut self, phase: &str, items: u64) {
        self.metrics.add(PhaseStats { name: phase.to_string(), broadcast_items: items, ..Default::default() });
    }

    pub fn transcript_text(&self) -> String {
        let mut s = String::from("round,src,dst,edge,tokens,payload\n");
        for l in &self.transcript {
            s += l;
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sends `len` tokens on its first edge in round 0.
    struct Chatter {
        len: usize,
    }

    impl NodeProgram for Chatter {
        type State = ();
        type Output = ();
        fn init(&self, _: &NodeCtx) {}
        fn step(&self, ctx: &NodeCtx, _: &mut (), _: &[Envelope], out: &mut Outbox) -> Status {
            if ctx.round == 0 && ctx.vertex == 0 {
                out.send(ctx.incident[0].0, (0..self.len).map(|i| Token::Control(i as u64)));
            }
            Status::Halt
        }
        fn finish(&self, _: &NodeCtx, _: ()) {}
    }

    /// Bounces a counter back and forth forever.
    struct PingPong;

    impl NodeProgram for PingPong {
        type State = ();
        type Output = ();
        fn init(&self, _: &NodeCtx) {}
        fn step(&self, ctx: &NodeCtx, _: &mut (), inbox: &[Envelope], out: &mut Outbox) -> Status {
            if ctx.round == 0 && ctx.vertex == 0 {
                out.send(ctx.incident[0].0, [Token::Control(0)]);
            }
            for m in inbox {
                out.send(m.edge, [Token::Control(ctx.round as u64)]);
            }
            Status::Halt
        }
        fn finish(&self, _: &NodeCtx, _: ()) {}
    }

    fn edge_pair() -> Multigraph {
        Multigraph::new(2, &[(0, 1, 1)]).unwrap()
    }

    #[test]
    fn budget_violation_is_reported() {
        let g = edge_pair();
        let err = run(&g, &Chatter { len: 99 }, &RunConfig::default()).err().unwrap();
        match err {
            Error::BudgetViolation { vertex, edge, round, tokens, budget } => {
                assert_eq!((vertex, edge, round, tokens, budget), (0, 0, 0, 99, 4));
            }
            e => panic!("{e:?}"),
        }
        let ok = run(&g, &Chatter { len: 4 }, &RunConfig::default()).unwrap();
        assert_eq!(ok.stats.rounds, 1);
        assert_eq!(ok.stats.max_tokens_edge_round, 4);
    }

    #[test]
    fn timeout_carries_partial_metrics() {
        let g = edge_pair();
        let cfg = RunConfig { max_rounds: 10, ..Default::default() };
        match run(&g, &PingPong, &cfg).err().unwrap() {
            Error::Timeout { max_rounds, partial } => {
                assert_eq!(max_rounds, 10);
                assert_eq!(partial.rounds(), 11);
                assert!(partial.messages() >= 10);
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn silent_program_uses_no_rounds() {
        let g = edge_pair();
        let out = run(&g, &Chatter { len: 0 }, &RunConfig::default()).unwrap();
        assert_eq!(out.stats.rounds, 0);
        assert_eq!(out.stats.messages, 0);
    }

    #[test]
    fn metrics_merge_by_name() {
        let mut m = Metrics::default();
        m.add(PhaseStats { name: "a".into(), rounds: 3, messages: 2, tokens: 5, max_tokens_edge_round: 2, broadcast_items: 0 });
        m.add(PhaseStats { name: "b".into(), rounds: 1, ..Default::default() });
        m.add(PhaseStats { name: "a".into(), rounds: 4, max_tokens_edge_round: 3, ..Default::default() });
        assert_eq!(m.rounds(), 8);
        assert_eq!(m.phase("a").unwrap().rounds, 7);
        assert_eq!(m.max_tokens_edge_round(), 3);
        assert_eq!(
            m.to_csv(),
            "phase,rounds,messages,tokens,max_tokens_edge_round\na,7,2,5,3\nb,1,0,0,0\ntotal,8,2,5,3\n"
        );
    }

    #[test]
    fn sending_on_foreign_edge_fails() {
        struct Rogue;
        impl NodeProgram for Rogue {
            type State = ();
            type Output = ();
            fn init(&self, _: &NodeCtx) {}
            fn step(&self, ctx: &NodeCtx, _: &mut (), _: &[Envelope], out: &mut Outbox) -> Status {
                if ctx.vertex == 2 {
                    out.send(0, [Token::Control(1)]);
                }
                Status::Halt
            }
            fn finish(&self, _: &NodeCtx, _: ()) {}
        }
        let g = Multigraph::new(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(matches!(run(&g, &Rogue, &RunConfig::default()), Err(Error::NotIncident { vertex: 2, edge: 0 })));
    }
}
