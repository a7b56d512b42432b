//! One algorithm on one instance, reduced to a CSV row.

use std::fmt;
use std::str::FromStr;

use crate::apps::{augment_1_to_2, two_ecss_unweighted, two_ecss_weighted, verify_2ec_distributed, zero_weight_h};
use crate::error::{Error, Result};
use crate::fast::run_fast_tap;
use crate::format::Instance;
use crate::graph::{bfs_tree, is_two_edge_connected, EdgeId, Multigraph, RootedTree, Weight};
use crate::oracle::{min_2ecss, opt_augmentation, ratio, verify_augmentation, OracleResult};
use crate::sim::{Metrics, RunConfig};
use crate::tap::a_tap_session;
use crate::wtap::a_wtap_session;

pub const CSV_HEADER: &str = "instance,n,m,h,D,algorithm,rounds,messages,tokens,aug_value,opt_value,ratio,valid";

/// Above this many vertices the D column is a double-sweep lower bound.
pub const EXACT_DIAMETER_LIMIT: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Tap,
    Wtap,
    Fast,
    Ecss,
    EcssW,
    Aug12,
    Verify,
}

impl Algo {
    pub const ALL: [Algo; 7] = [Algo::Tap, Algo::Wtap, Algo::Fast, Algo::Ecss, Algo::EcssW, Algo::Aug12, Algo::Verify];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Tap => "tap",
            Algo::Wtap => "wtap",
            Algo::Fast => "fast",
            Algo::Ecss => "ecss",
            Algo::EcssW => "ecss-w",
            Algo::Aug12 => "aug12",
            Algo::Verify => "verify",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algo> {
        Algo::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| Error::Input(format!("unknown algorithm {s}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub h: u32,
    pub d: u32,
    pub algorithm: Algo,
    pub rounds: u32,
    pub messages: u64,
    pub tokens: u64,
    /// Augmentation size or weight; subgraph size or weight for 2-ECSS; 1/0 for verification.
    pub aug_value: Weight,
    pub opt_value: Option<Weight>,
    pub valid: bool,
}

impl Row {
    pub fn ratio(&self) -> Option<f64> {
        self.opt_value.map(|o| ratio(self.aug_value, o))
    }

    pub fn to_csv(&self) -> String {
        let opt = self.opt_value.map_or(String::new(), |o| o.to_string());
        let r = self.ratio().map_or(String::new(), |r| format!("{r:.4}"));
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            self.m,
            self.h,
            self.d,
            self.algorithm,
            self.rounds,
            self.messages,
            self.tokens,
            self.aug_value,
            opt,
            r,
            self.valid
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub row: Row,
    pub metrics: Metrics,
    pub transcript: String,
}

fn subgraph_is_2ec(g: &Multigraph, edges: &[EdgeId]) -> bool {
    is_two_edge_connected(&g.filter_edges(|e| edges.contains(&e.id)).0)
}

/// Exact optimum when the instance is small enough, otherwise `None`.
fn small_opt(r: Result<OracleResult>) -> Result<Option<Weight>> {
    match r {
        Ok(o) => Ok(Some(o.opt_value)),
        Err(Error::TooLarge(_) | Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs `algo`, checks its output and, when asked, compares with the exact optimum.
/// A bridge in the input gives an invalid row rather than an error.
pub fn run_experiment(name: &str, inst: &Instance, algo: Algo, cfg: &RunConfig, oracle: bool) -> Result<RunReport> {
    let g = &inst.graph;
    let tree = match &inst.tree {
        Some(t) => t.clone(),
        None => bfs_tree(g, 0)?,
    };
    let d = if g.n() <= EXACT_DIAMETER_LIMIT { g.diameter()? } else { g.diameter_lower_bound() };
    let weighted = matches!(algo, Algo::Wtap | Algo::EcssW | Algo::Aug12);
    let mut opt = None;
    let (aug_value, valid, metrics, transcript) = match algo {
        Algo::Tap | Algo::Wtap | Algo::Fast => {
            let (aug, metrics, transcript) = match algo {
                Algo::Tap => {
                    let o = a_tap_session(g, &tree, cfg)?;
                    (o.aug, o.metrics, o.transcript)
                }
                Algo::Wtap => {
                    let o = a_wtap_session(g, &tree, cfg)?;
                    (o.aug, o.metrics, o.transcript)
                }
                _ => match run_fast_tap(g, &tree, cfg) {
                    Ok(o) => (o.aug, o.metrics, o.transcript),
                    Err(Error::Bridge { .. }) => return Ok(invalid(name, g, &tree, d, algo)),
                    Err(e) => return Err(e),
                },
            };
            if oracle {
                opt = small_opt(opt_augmentation(g, &tree, weighted))?;
            }
            let value = if weighted { aug.weight } else { aug.len() as Weight };
            (value, verify_augmentation(g, &tree, &aug.edges), metrics, transcript)
        }
        Algo::Ecss | Algo::EcssW => {
            let r = if algo == Algo::Ecss { two_ecss_unweighted(g, cfg) } else { two_ecss_weighted(g, cfg) };
            let r = match r {
                Ok(r) => r,
                Err(Error::Bridge { .. }) => return Ok(invalid(name, g, &tree, d, algo)),
                Err(e) => return Err(e),
            };
            if oracle {
                opt = small_opt(min_2ecss(g, weighted))?;
            }
            let value = if weighted { r.weight } else { r.edges.len() as Weight };
            (value, subgraph_is_2ec(g, &r.edges), r.metrics, r.transcript)
        }
        Algo::Aug12 => {
            let h = tree.tree_edges();
            let r = match augment_1_to_2(g, &h, cfg) {
                Ok(r) => r,
                Err(Error::Bridge { .. }) => return Ok(invalid(name, g, &tree, d, algo)),
                Err(e) => return Err(e),
            };
            if oracle {
                opt = small_opt(opt_augmentation(&zero_weight_h(g, &h)?, &r.tree, true))?;
            }
            let mut all = h.clone();
            all.extend(&r.aug.edges);
            (r.aug.weight, subgraph_is_2ec(g, &all), r.metrics, r.transcript)
        }
        Algo::Verify => {
            let r = verify_2ec_distributed(g, cfg)?;
            let answer = r.unanimous();
            let valid = answer == Some(is_two_edge_connected(g));
            (Weight::from(answer == Some(true)), valid, r.metrics, r.transcript)
        }
    };
    let row = Row {
        instance: name.to_string(),
        n: g.n(),
        m: g.m(),
        h: tree.height(),
        d,
        algorithm: algo,
        rounds: metrics.rounds(),
        messages: metrics.messages(),
        tokens: metrics.tokens(),
        aug_value,
        opt_value: opt,
        valid,
    };
    Ok(RunReport { row, metrics, transcript })
}

fn invalid(name: &str, g: &Multigraph, tree: &RootedTree, d: u32, algo: Algo) -> RunReport {
    let row = Row {
        instance: name.to_string(),
        n: g.n(),
        m: g.m(),
        h: tree.height(),
        d,
        algorithm: algo,
        rounds: 0,
        messages: 0,
        tokens: 0,
        aug_value: 0,
        opt_value: None,
        valid: false,
    };
    RunReport { row, metrics: Metrics::default(), transcript: String::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_cycle, gen_lb_path, PathVariant};

    fn inst((graph, tree): (Multigraph, RootedTree)) -> Instance {
        Instance { graph, tree: Some(tree) }
    }

    #[test]
    fn names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.name().parse::<Algo>().unwrap(), a);
        }
        assert!("tap-weighted".parse::<Algo>().is_err());
    }

    #[test]
    fn path_family_row() {
        let i = inst(gen_lb_path(4, PathVariant::G1, false, 1).unwrap());
        let r = run_experiment("g1_k4", &i, Algo::Tap, &RunConfig::default(), true).unwrap().row;
        assert_eq!(r.aug_value, 4);
        assert_eq!(r.opt_value, Some(4));
        assert_eq!(r.ratio(), Some(1.0));
        assert!(r.to_csv().starts_with("g1_k4,9,12,8,"));
        assert!(r.to_csv().ends_with(",4,4,1.0000,true"));
    }

    #[test]
    fn every_algorithm_on_a_cycle() {
        let i = inst(gen_cycle(8).unwrap());
        for a in Algo::ALL {
            let r = run_experiment("c8", &i, a, &RunConfig::default(), true).unwrap().row;
            assert!(r.valid, "{a}");
            assert_eq!(r.to_csv().split(',').count(), CSV_HEADER.split(',').count());
        }
    }

    #[test]
    fn bridged_input_is_invalid_or_false() {
        let g = Multigraph::new(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let t = bfs_tree(&g, 0).unwrap();
        let i = Instance { graph: g, tree: Some(t) };
        let v = run_experiment("p4", &i, Algo::Verify, &RunConfig::default(), false).unwrap().row;
        assert!(v.valid);
        assert_eq!(v.aug_value, 0);
        for a in [Algo::Tap, Algo::Fast, Algo::Ecss] {
            assert!(!run_experiment("p4", &i, a, &RunConfig::default(), false).unwrap().row.valid);
        }
    }
}
