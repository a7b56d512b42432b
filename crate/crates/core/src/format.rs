//! Plain-text instance format.
//!
//! ```text
//! # root 0
//! 5 6
//! 0 1 1 t
//! 1 2 1 t
//! ...
//! ```
//!
//! The first non-comment line is `n m`, followed by `m` edge lines `u v w [t]`.
//! A trailing `t` marks a tree edge. Text after `#` is ignored, except that a
//! line of the form `# root r` picks the tree root (default 0). Edge ids follow
//! line order.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, RootedTree, VertexId, Weight};

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Multigraph,
    pub tree: Option<RootedTree>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut root: VertexId = 0;
    let mut edges: Vec<(VertexId, VertexId, Weight)> = Vec::new();
    let mut tree: Vec<EdgeId> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            let mut it = c.split_whitespace();
            if it.next() == Some("root") {
                let r = it.next().ok_or_else(|| perr(lineno, "missing root id"))?;
                root = r.parse().map_err(|_| perr(lineno, format!("bad root id {r:?}")))?;
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(perr(lineno, "expected header `n m`"));
                }
                let n = fields[0].parse().map_err(|_| perr(lineno, format!("bad vertex count {:?}", fields[0])))?;
                let m = fields[1].parse().map_err(|_| perr(lineno, format!("bad edge count {:?}", fields[1])))?;
                header = Some((n, m));
            }
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(perr(lineno, format!("more than {m} edge lines")));
                }
                if fields.len() < 3 || fields.len() > 4 {
                    return Err(perr(lineno, "expected `u v w [t]`"));
                }
                let num = |s: &str, what: &str| -> Result<u64> {
                    s.parse::<u64>().map_err(|_| perr(lineno, format!("bad {what} {s:?}")))
                };
                let u = num(fields[0], "endpoint")?;
                let v = num(fields[1], "endpoint")?;
                let w = num(fields[2], "weight")?;
                if u as usize >= n || v as usize >= n {
                    return Err(perr(lineno, format!("endpoint out of range for n={n}")));
                }
                if u == v {
                    return Err(perr(lineno, "self-loop"));
                }
                if fields.len() == 4 {
                    if fields[3] != "t" {
                        return Err(perr(lineno, format!("unknown edge flag {:?}", fields[3])));
                    }
                    tree.push(edges.len() as EdgeId);
                }
                edges.push((u as VertexId, v as VertexId, w));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| perr(last_line.max(1), "missing header"))?;
    if edges.len() != m {
        return Err(perr(last_line.max(1), format!("expected {m} edges, found {}", edges.len())));
    }
    let graph = Multigraph::new(n, &edges).map_err(|e| perr(0, e.to_string()))?;
    let tree = if tree.is_empty() && n > 1 {
        None
    } else {
        Some(RootedTree::from_edges(&graph, root, &tree).map_err(|e| perr(0, e.to_string()))?)
    };
    Ok(Instance { graph, tree })
}

pub fn write(g: &Multigraph, tree: Option<&RootedTree>) -> String {
    let mut s = String::new();
    if let Some(t) = tree {
        if t.root() != 0 {
            writeln!(s, "# root {}", t.root()).unwrap();
        }
    }
    writeln!(s, "{} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        let mark = match tree {
            Some(t) if t.is_tree_edge(e.id) => " t",
            _ => "",
        };
        writeln!(s, "{} {} {}{}", e.u, e.v, e.w, mark).unwrap();
    }
    s
}

pub fn read_file(path: impl AsRef<Path>) -> Result<Instance> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_file(path: impl AsRef<Path>, g: &Multigraph, tree: Option<&RootedTree>) -> Result<()> {
    std::fs::write(path, write(g, tree))?;
    Ok(())
}
