//! Exact tree augmentation for small instances, plus validity checks.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{is_two_edge_connected, tree_path_edges, EdgeId, Multigraph, RootedTree, VertexId, Weight};
use crate::lca::assign_labels_sequential;
use crate::virtual_graph::{build_gprime_sequential, covered_set_virtual};

pub const MAX_VERTICES: usize = 16;
pub const MAX_CANDIDATES: usize = 24;
pub const MAX_ENUMERATION: usize = 20;
pub const MAX_ECSS_VERTICES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_value: Weight,
    /// Edge ids of G for [`opt_augmentation`]; indices into
    /// [`build_gprime_sequential`]'s list for [`opt_on_gprime`].
    pub opt_edges: Vec<u32>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// A set cover instance over at most 32 tree edges.
struct CoverProblem {
    masks: Vec<u32>,
    costs: Vec<Weight>,
    /// Bit positions, deepest tree edge first.
    order: Vec<usize>,
    cands: Vec<Vec<usize>>,
    cheapest: Vec<Weight>,
    reach: Vec<u32>,
    full: u32,
}

impl CoverProblem {
    fn new(masks: Vec<u32>, costs: Vec<Weight>, order: Vec<usize>) -> Result<Self> {
        let bits = order.len();
        let mut cands = vec![Vec::new(); bits];
        for (c, &m) in masks.iter().enumerate() {
            for (b, list) in cands.iter_mut().enumerate() {
                if m >> b & 1 == 1 {
                    list.push(c);
                }
            }
        }
        if cands.iter().any(|l| l.is_empty()) {
            return Err(Error::Infeasible);
        }
        for l in &mut cands {
            l.sort_by_key(|&c| (costs[c], c));
        }
        let cheapest = cands.iter().map(|l| costs[l[0]]).collect();
        let reach = cands.iter().map(|l| l.iter().fold(0, |acc, &c| acc | masks[c])).collect();
        let full = if bits == 32 { u32::MAX } else { (1u32 << bits) - 1 };
        Ok(CoverProblem { masks, costs, order, cands, cheapest, reach, full })
    }

    /// Uncovered edges no single candidate covers together each need their own edge.
    fn lower_bound(&self, covered: u32) -> Weight {
        let mut picked = 0u32;
        let mut lb = 0;
        for &b in &self.order {
            if covered >> b & 1 == 0 && self.reach[b] & picked == 0 {
                picked |= 1 << b;
                lb += self.cheapest[b];
            }
        }
        lb
    }

    fn solve(&self) -> (Weight, Vec<usize>, u64) {
        let mut best = (Weight::MAX, Vec::new());
        let mut stack = Vec::new();
        let mut nodes = 0;
        self.branch(0, 0, &mut stack, &mut best, &mut nodes);
        (best.0, best.1, nodes)
    }

    fn branch(&self, covered: u32, cost: Weight, stack: &mut Vec<usize>, best: &mut (Weight, Vec<usize>), nodes: &mut u64) {
        *nodes += 1;
        if covered == self.full {
            if cost < best.0 {
                *best = (cost, stack.clone());
            }
            return;
        }
        if cost + self.lower_bound(covered) >= best.0 {
            return;
        }
        let b = *self.order.iter().find(|&&b| covered >> b & 1 == 0).unwrap();
        for &c in &self.cands[b] {
            stack.push(c);
            self.branch(covered | self.masks[c], cost + self.costs[c], stack, best, nodes);
            stack.pop();
        }
    }
}

/// Bit index per tree edge and the deepest-first branching order.
fn tree_bits(g: &Multigraph, t: &RootedTree) -> (Vec<Option<usize>>, Vec<usize>) {
    let tree = t.tree_edges();
    let mut bit = vec![None; g.m()];
    for (i, &e) in tree.iter().enumerate() {
        bit[e as usize] = Some(i);
    }
    let mut order: Vec<usize> = (0..tree.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(t.depth(t.lower_endpoint(g, tree[i]))), tree[i]));
    (bit, order)
}

fn mask_of(bit: &[Option<usize>], path: &[EdgeId]) -> u32 {
    path.iter().fold(0, |m, &e| m | 1 << bit[e as usize].unwrap())
}

fn cost(g: &Multigraph, e: EdgeId, weighted: bool) -> Weight {
    if weighted {
        g.weight(e)
    } else {
        1
    }
}

fn guard(t: &RootedTree, candidates: usize, limit: usize) -> Result<()> {
    if t.n() > MAX_VERTICES {
        return Err(Error::TooLarge(format!("n = {} exceeds {MAX_VERTICES}", t.n())));
    }
    if candidates > limit {
        return Err(Error::TooLarge(format!("{candidates} candidate edges exceed {limit}")));
    }
    Ok(())
}

fn non_tree(g: &Multigraph, t: &RootedTree) -> Vec<EdgeId> {
    (0..g.m() as EdgeId).filter(|&e| !t.is_tree_edge(e)).collect()
}

/// Minimum size (or weight) augmentation by branch and bound.
pub fn opt_augmentation(g: &Multigraph, t: &RootedTree, weighted: bool) -> Result<OracleResult> {
    let start = Instant::now();
    let cand = non_tree(g, t);
    guard(t, cand.len(), MAX_CANDIDATES)?;
    let (bit, order) = tree_bits(g, t);
    let masks = cand
        .iter()
        .map(|&e| {
            let ed = g.edge(e);
            mask_of(&bit, &tree_path_edges(t, ed.u, ed.v))
        })
        .collect();
    let costs = cand.iter().map(|&e| cost(g, e, weighted)).collect();
    let (value, picked, nodes) = CoverProblem::new(masks, costs, order)?.solve();
    let mut opt_edges: Vec<u32> = picked.into_iter().map(|c| cand[c]).collect();
    opt_edges.sort_unstable();
    Ok(OracleResult { opt_value: value, opt_edges, nodes_explored: nodes, elapsed: start.elapsed() })
}

/// Exact optimum on the virtual graph G′; split edges contribute two halves.
pub fn opt_on_gprime(g: &Multigraph, t: &RootedTree, weighted: bool) -> Result<OracleResult> {
    let start = Instant::now();
    let labels = assign_labels_sequential(t);
    let gp = build_gprime_sequential(g, t, &labels);
    guard(t, gp.len(), 2 * MAX_CANDIDATES)?;
    let (bit, order) = tree_bits(g, t);
    let masks = gp.iter().map(|ve| mask_of(&bit, &covered_set_virtual(t, ve, ve.anc.depth))).collect();
    let costs = gp.iter().map(|ve| if weighted { ve.weight } else { 1 }).collect();
    let (value, picked, nodes) = CoverProblem::new(masks, costs, order)?.solve();
    let mut opt_edges: Vec<u32> = picked.into_iter().map(|c| c as u32).collect();
    opt_edges.sort_unstable();
    Ok(OracleResult { opt_value: value, opt_edges, nodes_explored: nodes, elapsed: start.elapsed() })
}

/// The same optimum by trying every subset of non-tree edges.
pub fn opt_by_enumeration(g: &Multigraph, t: &RootedTree, weighted: bool) -> Result<OracleResult> {
    let start = Instant::now();
    let cand = non_tree(g, t);
    if cand.len() > MAX_ENUMERATION {
        return Err(Error::TooLarge(format!("2^{} subsets", cand.len())));
    }
    let (bit, _) = tree_bits(g, t);
    let full = (1u64 << t.tree_edges().len()) - 1;
    let masks: Vec<u64> = cand
        .iter()
        .map(|&e| {
            let ed = g.edge(e);
            mask_of(&bit, &tree_path_edges(t, ed.u, ed.v)) as u64
        })
        .collect();
    let mut best: Option<(Weight, u32)> = None;
    for s in 0u32..1 << cand.len() {
        let mut cov = 0;
        let mut w = 0;
        for (i, &m) in masks.iter().enumerate() {
            if s >> i & 1 == 1 {
                cov |= m;
                w += cost(g, cand[i], weighted);
            }
        }
        if cov == full && best.is_none_or(|(bw, _)| w < bw) {
            best = Some((w, s));
        }
    }
    let (value, s) = best.ok_or(Error::Infeasible)?;
    let opt_edges = (0..cand.len()).filter(|&i| s >> i & 1 == 1).map(|i| cand[i]).collect();
    Ok(OracleResult { opt_value: value, opt_edges, nodes_explored: 1 << cand.len(), elapsed: start.elapsed() })
}

/// True iff T together with `aug` has no bridge.
pub fn verify_augmentation(g: &Multigraph, t: &RootedTree, aug: &[EdgeId]) -> bool {
    let (h, _) = g.filter_edges(|e| t.is_tree_edge(e.id) || aug.contains(&e.id));
    is_two_edge_connected(&h)
}

/// Exact minimum (weight) 2-edge-connected spanning subgraph by subset enumeration.
pub fn min_2ecss(g: &Multigraph, weighted: bool) -> Result<OracleResult> {
    let start = Instant::now();
    let (n, m) = (g.n(), g.m());
    if n > MAX_ECSS_VERTICES || m > MAX_ENUMERATION + 2 {
        return Err(Error::TooLarge(format!("n = {n}, m = {m}")));
    }
    let w: Vec<Weight> = (0..m as EdgeId).map(|e| cost(g, e, weighted)).collect();
    let mut best: Option<(Weight, u32)> = None;
    let mut checked = 0;
    let mut deg = vec![0u32; n];
    for s in 0u32..1 << m {
        if (s.count_ones() as usize) < n {
            continue;
        }
        let total: Weight = (0..m).filter(|&i| s >> i & 1 == 1).map(|i| w[i]).sum();
        if best.is_some_and(|(b, _)| total >= b) {
            continue;
        }
        deg.iter_mut().for_each(|d| *d = 0);
        for i in (0..m).filter(|&i| s >> i & 1 == 1) {
            let e = g.edge(i as EdgeId);
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        if deg.iter().any(|&d| d < 2) {
            continue;
        }
        checked += 1;
        let (h, _) = g.filter_edges(|e| s >> e.id & 1 == 1);
        if is_two_edge_connected(&h) {
            best = Some((total, s));
        }
    }
    let (value, s) = best.ok_or(Error::Infeasible)?;
    let opt_edges = (0..m as u32).filter(|&i| s >> i & 1 == 1).collect();
    Ok(OracleResult { opt_value: value, opt_edges, nodes_explored: checked, elapsed: start.elapsed() })
}

pub fn ratio(value: Weight, opt: Weight) -> f64 {
    match (value, opt) {
        (0, 0) => 1.0,
        (_, 0) => f64::INFINITY,
        _ => value as f64 / opt as f64,
    }
}

/// Tree edges of `t` left uncovered by `aug`, as lower endpoints.
pub fn uncovered(g: &Multigraph, t: &RootedTree, aug: &[EdgeId]) -> Vec<VertexId> {
    let mut cov = vec![false; g.m()];
    for &e in aug {
        let ed = g.edge(e);
        for f in tree_path_edges(t, ed.u, ed.v) {
            cov[f as usize] = true;
        }
    }
    let mut out: Vec<VertexId> = t.tree_edges().into_iter().filter(|&f| !cov[f as usize]).map(|f| t.lower_endpoint(g, f)).collect();
    out.sort_unstable();
    out
}
