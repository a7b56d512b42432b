//! Splitting long payloads across rounds.
//!
//! A frame is `Control(len)` followed by `len` tokens. [`Lane`] holds the
//! tokens still to be sent on one edge and releases at most `budget` of them
//! per round; [`FrameReader`] reassembles frames on the receiving side.

use std::collections::VecDeque;

use super::{Outbox, Token};
use crate::graph::EdgeId;

/// Marks the end of a stream of frames.
pub const END: Token = Token::Control(u64::MAX);

#[derive(Clone, Debug, Default)]
pub struct Lane {
    q: VecDeque<Token>,
}

impl Lane {
    pub fn push(&mut self, t: Token) {
        self.q.push_back(t);
    }

    pub fn push_frame(&mut self, body: &[Token]) {
        self.q.push_back(Token::Control(body.len() as u64));
        self.q.extend(body.iter().copied());
    }

    pub fn extend(&mut self, ts: impl IntoIterator<Item = Token>) {
        self.q.extend(ts);
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    /// Sends up to `budget` queued tokens on `edge`. Returns whether anything was sent.
    pub fn flush(&mut self, edge: EdgeId, budget: usize, out: &mut Outbox) -> bool {
        if self.q.is_empty() {
            return false;
        }
        let k = budget.min(self.q.len());
        out.send(edge, self.q.drain(..k));
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Frame(Vec<Token>),
    End,
}

#[derive(Clone, Debug, Default)]
pub struct FrameReader {
    need: Option<usize>,
    buf: Vec<Token>,
}

impl FrameReader {
    pub fn feed(&mut self, t: Token) -> Option<Piece> {
        match self.need {
            None => {
                if t == END {
                    return Some(Piece::End);
                }
                let Token::Control(len) = t else {
                    panic!("frame header expected, got {t}");
                };
                if len == 0 {
                    return Some(Piece::Frame(Vec::new()));
                }
                self.need = Some(len as usize);
                None
            }
            Some(k) => {
                self.buf.push(t);
                if self.buf.len() == k {
                    self.need = None;
                    Some(Piece::Frame(std::mem::take(&mut self.buf)))
                } else {
                    None
                }
            }
        }
    }

    pub fn feed_all(&mut self, ts: &[Token]) -> Vec<Piece> {
        ts.iter().filter_map(|&t| self.feed(t)).collect()
    }

    /// True between frames.
    pub fn idle(&self) -> bool {
        self.need.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_survive_arbitrary_cuts() {
        let mut lane = Lane::default();
        lane.push_frame(&[Token::Vertex(1), Token::Weight(2), Token::Label(3)]);
        lane.push_frame(&[]);
        lane.push_frame(&[Token::Edge(9)]);
        lane.push(END);
        let mut r = FrameReader::default();
        let mut got = Vec::new();
        let mut rounds = 0;
        while !lane.is_empty() {
            let mut out = Outbox::default();
            lane.flush(7, 2, &mut out);
            for (_, m) in out.sends {
                assert!(m.len() <= 2);
                got.extend(r.feed_all(&m));
            }
            rounds += 1;
        }
        assert_eq!(rounds, 4);
        assert_eq!(
            got,
            vec![
                Piece::Frame(vec![Token::Vertex(1), Token::Weight(2), Token::Label(3)]),
                Piece::Frame(vec![]),
                Piece::Frame(vec![Token::Edge(9)]),
                Piece::End
            ]
        );
        assert!(r.idle());
    }
}
