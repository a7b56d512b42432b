//! Heavy-path labels answering LCA and ancestry queries from two labels alone.
//!
//! Each vertex's label lists the heavy paths crossed on the way down from the
//! root. The root's heavy path is implicit; every light edge taken adds a
//! [`Word`] holding the head of the heavy path entered and the depth at which
//! the walk left the previous path. The position on the last path is the
//! vertex depth. With heavy child = largest subtree there are at most
//! ⌊log₂ n⌋ words.
//!
//! # Token layout
//!
//! A label travels as `1 + words.len()` [`Token::Label`] values, little-endian
//! bit positions:
//!
//! | token  | bits 0..32             | bits 32..58 | bits 58..64 |
//! |--------|------------------------|-------------|-------------|
//! | header | vertex id (`u32::MAX` = unknown) | depth | word count |
//!
//! | token  | bits 0..32 | bits 32..64  |
//! |--------|------------|--------------|
//! | word   | head id    | branch depth |

use std::cmp::Reverse;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::graph::{RootedTree, VertexId};
use crate::sim::stream::Lane;
use crate::sim::{Envelope, NodeCtx, NodeProgram, Outbox, Status, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub head: VertexId,
    pub branch: u32,
}

/// Equality and hashing ignore `vertex`: two labels are equal iff they name the same vertex.
#[derive(Clone, Debug, Eq)]
pub struct LcaLabel {
    pub vertex: Option<VertexId>,
    pub depth: u32,
    pub words: Vec<Word>,
}

impl PartialEq for LcaLabel {
    fn eq(&self, o: &Self) -> bool {
        self.depth == o.depth && self.words == o.words
    }
}

impl Hash for LcaLabel {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.depth.hash(h);
        self.words.hash(h);
    }
}

const NO_VERTEX: u64 = u32::MAX as u64;

impl LcaLabel {
    pub fn root(vertex: VertexId) -> Self {
        LcaLabel { vertex: Some(vertex), depth: 0, words: Vec::new() }
    }

    /// Label of the ancestor at `depth` (which must not exceed this label's depth).
    pub fn ancestor_at(&self, depth: u32) -> LcaLabel {
        debug_assert!(depth <= self.depth);
        let words: Vec<Word> = self.words.iter().copied().filter(|w| w.branch < depth).collect();
        let vertex = if depth == self.depth { self.vertex } else { None };
        LcaLabel { vertex, depth, words }
    }

    /// Label of a child: heavy children stay on the path, light children add a word.
    pub fn child(&self, child: VertexId, heavy: bool) -> LcaLabel {
        let mut words = self.words.clone();
        if !heavy {
            words.push(Word { head: child, branch: self.depth });
        }
        LcaLabel { vertex: Some(child), depth: self.depth + 1, words }
    }

    pub fn header_token(vertex: Option<VertexId>, depth: u32, count: usize) -> Token {
        let v = vertex.map_or(NO_VERTEX, |x| x as u64);
        Token::Label(v | ((depth as u64) << 32) | ((count as u64) << 58))
    }

    pub fn word_token(w: Word) -> Token {
        Token::Label(w.head as u64 | ((w.branch as u64) << 32))
    }

    pub fn decode_header(t: Token) -> (Option<VertexId>, u32, usize) {
        let x = t.raw();
        let v = x & 0xffff_ffff;
        let vertex = (v != NO_VERTEX).then_some(v as VertexId);
        (vertex, ((x >> 32) & ((1 << 26) - 1)) as u32, (x >> 58) as usize)
    }

    pub fn decode_word(t: Token) -> Word {
        let x = t.raw();
        Word { head: (x & 0xffff_ffff) as VertexId, branch: (x >> 32) as u32 }
    }

    pub fn token_len(&self) -> usize {
        1 + self.words.len()
    }

    pub fn to_tokens(&self) -> Vec<Token> {
        let mut out = Vec::with_capacity(self.token_len());
        out.push(Self::header_token(self.vertex, self.depth, self.words.len()));
        out.extend(self.words.iter().map(|&w| Self::word_token(w)));
        out
    }

    pub fn from_tokens(ts: &[Token]) -> Result<LcaLabel> {
        let (&h, rest) = ts.split_first().ok_or_else(|| Error::Input("empty label".into()))?;
        if !matches!(h, Token::Label(_)) {
            return Err(Error::Input(format!("label header expected, got {h}")));
        }
        let (vertex, depth, count) = Self::decode_header(h);
        if rest.len() != count {
            return Err(Error::Input(format!("label declares {count} words, got {}", rest.len())));
        }
        Ok(LcaLabel { vertex, depth, words: rest.iter().map(|&t| Self::decode_word(t)).collect() })
    }
}

/// Position on the path after `c` shared words at which the walk to `l` leaves it.
fn exit_depth(l: &LcaLabel, c: usize) -> u32 {
    l.words.get(c).map_or(l.depth, |w| w.branch)
}

fn common_prefix(a: &LcaLabel, b: &LcaLabel) -> usize {
    a.words.iter().zip(&b.words).take_while(|(x, y)| x == y).count()
}

/// Label of the lowest common ancestor. Its `vertex` is known only when it is `a` or `b`.
pub fn lca_query(a: &LcaLabel, b: &LcaLabel) -> LcaLabel {
    let c = common_prefix(a, b);
    let depth = exit_depth(a, c).min(exit_depth(b, c));
    let words = a.words[..c].to_vec();
    let lbl = LcaLabel { vertex: None, depth, words };
    let vertex = if lbl == *a {
        a.vertex
    } else if lbl == *b {
        b.vertex
    } else {
        None
    };
    LcaLabel { vertex, ..lbl }
}

pub fn is_ancestor(a: &LcaLabel, d: &LcaLabel) -> bool {
    let c = a.words.len();
    a.depth <= d.depth && d.words.len() >= c && a.words[..] == d.words[..c] && a.depth <= exit_depth(d, c)
}

/// The label of smaller depth; `a` on ties.
pub fn closer_to_root<'a>(a: &'a LcaLabel, b: &'a LcaLabel) -> &'a LcaLabel {
    if b.depth < a.depth {
        b
    } else {
        a
    }
}

/// Heavy child of every vertex: largest subtree, ties to the lowest id.
pub fn heavy_children(tree: &RootedTree) -> Vec<Option<VertexId>> {
    let size = tree.subtree_sizes();
    (0..tree.n() as VertexId)
        .map(|v| tree.children(v).iter().map(|&(c, _)| c).max_by_key(|&c| (size[c as usize], Reverse(c))))
        .collect()
}

pub fn assign_labels_sequential(tree: &RootedTree) -> Vec<LcaLabel> {
    let heavy = heavy_children(tree);
    let mut labels: Vec<Option<LcaLabel>> = vec![None; tree.n()];
    labels[tree.root() as usize] = Some(LcaLabel::root(tree.root()));
    for &v in tree.top_down() {
        let lv = labels[v as usize].clone().unwrap();
        for &(c, _) in tree.children(v) {
            labels[c as usize] = Some(lv.child(c, heavy[v as usize] == Some(c)));
        }
    }
    labels.into_iter().map(Option::unwrap).collect()
}

/// Subtree sizes converge to the root, then labels stream down with one
/// round of delay per hop: a vertex forwards each token of its own label to
/// its children as soon as it arrives.
pub struct LabelProgram<'a> {
    pub tree: &'a RootedTree,
}

#[derive(Debug, Default)]
pub struct LabelState {
    waiting: usize,
    size: u64,
    child_size: Vec<u64>,
    size_sent: bool,
    heavy: Option<usize>,
    header: Option<(u32, usize)>,
    words: Vec<Word>,
    lanes: Vec<Lane>,
    tail_sent: bool,
}

impl LabelProgram<'_> {
    fn start_children(&self, v: VertexId, st: &mut LabelState, depth: u32, count: usize) {
        for (i, &(c, _)) in self.tree.children(v).iter().enumerate() {
            let extra = usize::from(st.heavy != Some(i));
            st.lanes[i].push(LcaLabel::header_token(Some(c), depth + 1, count + extra));
        }
    }

    fn maybe_tail(&self, v: VertexId, st: &mut LabelState) {
        let Some((depth, count)) = st.header else { return };
        if st.tail_sent || st.words.len() < count {
            return;
        }
        st.tail_sent = true;
        for (i, &(c, _)) in self.tree.children(v).iter().enumerate() {
            if st.heavy != Some(i) {
                st.lanes[i].push(LcaLabel::word_token(Word { head: c, branch: depth }));
            }
        }
    }
}

impl NodeProgram for LabelProgram<'_> {
    type State = LabelState;
    type Output = LcaLabel;

    fn init(&self, ctx: &NodeCtx) -> LabelState {
        let k = self.tree.children(ctx.vertex).len();
        LabelState {
            waiting: k,
            size: 1,
            child_size: vec![0; k],
            lanes: vec![Lane::default(); k],
            ..Default::default()
        }
    }

    fn step(&self, ctx: &NodeCtx, st: &mut LabelState, inbox: &[Envelope], out: &mut Outbox) -> Status {
        let v = ctx.vertex;
        let kids = self.tree.children(v);
        let pe = self.tree.parent_edge(v);
        for env in inbox {
            if Some(env.edge) == pe {
                for &t in &env.msg {
                    match st.header {
                        None => {
                            let (_, depth, count) = LcaLabel::decode_header(t);
                            st.header = Some((depth, count));
                            self.start_children(v, st, depth, count);
                        }
                        Some(_) => {
                            st.words.push(LcaLabel::decode_word(t));
                            for l in &mut st.lanes {
                                l.push(t);
                            }
                        }
                    }
                    self.maybe_tail(v, st);
                }
            } else if let Some(i) = kids.iter().position(|&(_, e)| e == env.edge) {
                let s = env.msg[0].raw();
                st.child_size[i] = s;
                st.size += s;
                st.waiting -= 1;
            }
        }
        if st.waiting == 0 && !st.size_sent {
            st.size_sent = true;
            st.heavy = (0..kids.len()).max_by_key(|&i| (st.child_size[i], Reverse(kids[i].0)));
            match pe {
                Some(e) => out.send(e, [Token::Control(st.size)]),
                None => {
                    st.header = Some((0, 0));
                    self.start_children(v, st, 0, 0);
                    self.maybe_tail(v, st);
                }
            }
        }
        for (l, &(_, e)) in st.lanes.iter_mut().zip(kids) {
            l.flush(e, ctx.budget, out);
        }
        if st.lanes.iter().all(Lane::is_empty) {
            Status::Halt
        } else {
            Status::Continue
        }
    }

    fn finish(&self, ctx: &NodeCtx, st: LabelState) -> LcaLabel {
        let (depth, _) = st.header.expect("label never arrived");
        LcaLabel { vertex: Some(ctx.vertex), depth, words: st.words }
    }
}
