use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use treeaug::experiment::{run_experiment, Algo, CSV_HEADER};
use treeaug::format::{self, read_file};
use treeaug::gen::{self, LowerBoundParams, PathVariant};
use treeaug::graph::bfs_tree;
use treeaug::oracle::{opt_augmentation, opt_on_gprime};
use treeaug::sim::{RunConfig, Schedule};
use treeaug::{Error, Result};

#[derive(Parser)]
#[command(name = "treeaug", about = "Distributed tree augmentation experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance file
    Gen {
        #[command(subcommand)]
        family: Family,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Run one algorithm on an instance and emit a CSV row
    Run {
        instance: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algo,
        #[arg(long, default_value_t = 4)]
        budget: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_rounds: u32,
        /// Compare with the exact optimum when the instance is small enough
        #[arg(long)]
        oracle: bool,
        /// Append the row to this file, writing the header first if it is new
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Also print per-phase counters
        #[arg(long)]
        phases: bool,
    },
    /// Solve an instance exactly
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        weighted: bool,
        /// Solve on the virtual graph instead
        #[arg(long)]
        gprime: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    G1,
    G2,
}

#[derive(Subcommand)]
enum Family {
    Cycle {
        #[arg(long)]
        n: usize,
    },
    LbPath {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "g1")]
        variant: Variant,
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value_t = 2)]
        alpha: u64,
    },
    LbDisj {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value_t = 2)]
        alpha: u64,
        /// Subdivide parallel edges
        #[arg(long)]
        simple: bool,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weights drawn from LO..=HI
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        weights: Option<Vec<u64>>,
        /// Random recursive tree plus back edges instead of a Hamiltonian cycle
        #[arg(long)]
        deep: bool,
    },
}

fn parse_algo(s: &str) -> std::result::Result<Algo, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn generate(family: Family) -> Result<gen::Instance> {
    match family {
        Family::Cycle { n } => gen::gen_cycle(n),
        Family::LbPath { k, variant, weighted, alpha } => {
            let v = match variant {
                Variant::G1 => PathVariant::G1,
                Variant::G2 => PathVariant::G2,
            };
            gen::gen_lb_path(k, v, weighted, alpha)
        }
        Family::LbDisj { k, d, p, a, b, alpha, simple } => {
            let zeros = "0".repeat(k);
            let q = LowerBoundParams::new(k, d, p, a.as_deref().unwrap_or(&zeros), b.as_deref().unwrap_or(&zeros), alpha)?;
            gen::gen_lb_disjointness(&q, simple)
        }
        Family::Random { n, extra, seed, weights, deep } => {
            let w = weights.map(|v| (v[0], v[1]));
            if deep {
                gen::gen_random_tree_2ec(n, extra, seed, w)
            } else {
                gen::gen_random_2ec(n, extra, seed, w)
            }
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn append_row(path: &Path, row: &str) -> Result<()> {
    let fresh = std::fs::metadata(path).map_or(true, |m| m.len() == 0);
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        writeln!(f, "{CSV_HEADER}")?;
    }
    writeln!(f, "{row}")?;
    Ok(())
}

fn real_main(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { family, output } => {
            let (g, t) = generate(family)?;
            emit(output.as_deref(), &format::write(&g, Some(&t)))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Run { instance, algo, budget, max_rounds, oracle, csv, transcript, phases } => {
            let inst = read_file(&instance)?;
            let cfg = RunConfig { budget, max_rounds, schedule: Schedule::Serial, transcript: transcript.is_some() };
            let name = instance.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
            let report = run_experiment(&name, &inst, algo, &cfg, oracle)?;
            let row = report.row.to_csv();
            println!("{CSV_HEADER}\n{row}");
            if phases {
                print!("{}", report.metrics.to_csv());
            }
            if let Some(p) = csv {
                append_row(&p, &row)?;
            }
            if let Some(p) = transcript {
                std::fs::write(p, &report.transcript)?;
            }
            Ok(if report.row.valid { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Cmd::Oracle { instance, weighted, gprime } => {
            let inst = read_file(&instance)?;
            let tree = match inst.tree {
                Some(t) => t,
                None => bfs_tree(&inst.graph, 0)?,
            };
            let r = if gprime {
                opt_on_gprime(&inst.graph, &tree, weighted)?
            } else {
                opt_augmentation(&inst.graph, &tree, weighted)?
            };
            println!("opt_value {}", r.opt_value);
            let ids: Vec<String> = r.opt_edges.iter().map(|e| e.to_string()).collect();
            println!("opt_edges {}", ids.join(" "));
            println!("nodes_explored {}", r.nodes_explored);
            println!("elapsed_ms {:.3}", r.elapsed.as_secs_f64() * 1e3);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetViolation { .. } | Error::Timeout { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
