use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypercover::harness::{
    fuzz, generate, pairwise_r, parse_rho, Check, FuzzConfig, GenKind, GenParams, Instance,
    ParamOverrides,
};
use hypercover::{
    brute_minimal_covers_bounded, build_closure_chain, build_maximizing, default_seeds,
    find_witness, is_cover, klimo_extract, layered_cover, two_tier_cover, BlockOrder, BruteSolver,
    Card, CheckOutcome, CoverSolver, Cut, Hypergraph, MaxWoSolver, WitnessedCover,
};

#[derive(Parser)]
#[command(
    name = "hypercover",
    version,
    about = "Minimal vertex covers and maximizing orders"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test property C(k, rho).
    Check {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, conflicts_with = "rho")]
        r: Option<u64>,
        /// finite:N or omega
        #[arg(long)]
        rho: Option<String>,
    },
    /// Compute a witnessed minimal vertex cover.
    Cover {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Strategy::Brute)]
        strategy: Strategy,
        /// Per-layer solver for the layered strategy.
        #[arg(long, value_enum)]
        solver: Option<SolverKind>,
        /// Cut file for the layered strategy.
        #[arg(long)]
        cut: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<u64>,
    },
    /// Build a maximizing block order.
    Maxwo {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<u64>,
    },
    /// Extract a witnessed minimal cover from a maximizing order.
    Extract { file: PathBuf, order: PathBuf },
    /// List every minimal cover of a finite instance.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        bound: usize,
    },
    /// Generate a random instance.
    Gen {
        kind: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        r: u64,
        #[arg(long, default_value_t = 5)]
        edges: usize,
        #[arg(long, default_value_t = 10)]
        vertices: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run seeded generator and verifier trials.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated generators; all by default.
        #[arg(long = "gen", value_delimiter = ',')]
        generators: Vec<String>,
        /// Comma-separated checks; all by default.
        #[arg(long = "check", value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long)]
        vertices: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    #[value(name = "two_tier")]
    TwoTier,
    Layered,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverKind {
    Brute,
    Maxwo,
}

enum Failure {
    /// A property or certificate check failed.
    Semantic(String),
    /// A negative result that is still printed, such as a violating tuple.
    Rejected(Vec<String>),
    /// Bad input or arguments.
    Usage(String),
}

use Failure::{Rejected, Semantic, Usage};

fn semantic<E: std::fmt::Display>(e: E) -> Failure {
    Semantic(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Instance::from_json(&read(path)?).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

/// `(k, r)` from the flags, then the instance's declaration, then the
/// smallest pairwise bound.
fn params(inst: &Instance, k: Option<usize>, r: Option<u64>) -> Result<(usize, u64), Failure> {
    let declared = inst.declared();
    let k = k.or(declared.map(|d| d.0)).unwrap_or(2);
    let r = match r.or(declared.map(|d| d.1)) {
        Some(r) => r,
        None if k == 2 => pairwise_r(&inst.hypergraph)
            .ok_or_else(|| Usage("two edges meet infinitely; pass --k and --r".into()))?,
        None => return Err(Usage("pass --r".into())),
    };
    Ok((k, r))
}

fn self_verify(h: &Hypergraph, w: &WitnessedCover) -> Result<(), Failure> {
    let fail = |m: String| Semantic(format!("self-verification failed: {m}"));
    w.verify(h).map_err(|e| fail(e.to_string()))?;
    if !is_cover(h, &w.cover_set()) {
        return Err(fail("not a cover".into()));
    }
    find_witness(h, &w.cover).map_err(|e| fail(e.to_string()))?;
    Ok(())
}

fn run(command: Command) -> Result<Vec<String>, Failure> {
    match command {
        Command::Check { file, k, r, rho } => {
            let inst = load(&file)?;
            let k = k.or(inst.declared().map(|d| d.0)).unwrap_or(2);
            let rho = match (rho, r) {
                (Some(s), _) => parse_rho(&s).map_err(Usage)?,
                (None, Some(r)) if r > 0 => Card::Finite(r),
                (None, Some(_)) => return Err(Usage("r must be positive".into())),
                (None, None) => match inst.declared() {
                    Some((_, r)) => Card::Finite(r),
                    None => return Err(Usage("pass --r or --rho".into())),
                },
            };
            match inst
                .hypergraph
                .check_c(k, rho)
                .map_err(|e| Usage(e.to_string()))?
            {
                CheckOutcome::Ok => Ok(vec![r#"{"result":"ok"}"#.into()]),
                CheckOutcome::Violation(t) => Err(Rejected(vec![format!(
                    r#"{{"result":"violation","edges":{}}}"#,
                    json(&t)
                )])),
            }
        }
        Command::Cover {
            file,
            strategy,
            solver,
            cut,
            k,
            r,
        } => {
            let inst = load(&file)?;
            let h = &inst.hypergraph;
            let w = match strategy {
                Strategy::Brute => BruteSolver.solve(h).map_err(semantic)?,
                Strategy::TwoTier => {
                    let (k, r) = params(&inst, k, r)?;
                    two_tier_cover(h, k, r).map_err(semantic)?
                }
                Strategy::Layered => {
                    let finite = h.universe().is_finite();
                    let cut = match cut {
                        Some(path) => serde_json::from_str::<Cut>(&read(&path)?)
                            .map_err(|e| Usage(format!("{}: {e}", path.display())))?,
                        None if finite => {
                            let (k, r) = params(&inst, k, r)?;
                            build_closure_chain(h, k, r, &default_seeds(h)).map_err(semantic)?
                        }
                        None => Cut::trivial(h.universe()),
                    };
                    let use_brute = match solver {
                        Some(s) => matches!(s, SolverKind::Brute),
                        None => finite,
                    };
                    if use_brute {
                        layered_cover(h, &cut, &BruteSolver)
                    } else {
                        let (k, r) = params(&inst, k, r)?;
                        layered_cover(h, &cut, &MaxWoSolver { k, r })
                    }
                    .map_err(semantic)?
                }
            };
            self_verify(h, &w)?;
            Ok(vec![json(&w)])
        }
        Command::Maxwo { file, k, r } => {
            let inst = load(&file)?;
            let (k, r) = params(&inst, k, r)?;
            let order = build_maximizing(&inst.hypergraph, k, r).map_err(semantic)?;
            if !order.is_maximizing(&inst.hypergraph).map_err(semantic)? {
                return Err(Semantic(
                    "self-verification failed: order is not maximizing".into(),
                ));
            }
            Ok(vec![json(&order)])
        }
        Command::Extract { file, order } => {
            let inst = load(&file)?;
            let order: BlockOrder = serde_json::from_str(&read(&order)?)
                .map_err(|e| Usage(format!("{}: {e}", order.display())))?;
            let w = klimo_extract(&order, &inst.hypergraph).map_err(semantic)?;
            self_verify(&inst.hypergraph, &w)?;
            Ok(vec![json(&w)])
        }
        Command::Oracle { file, bound } => {
            let inst = load(&file)?;
            let covers = brute_minimal_covers_bounded(&inst.hypergraph, bound).map_err(semantic)?;
            Ok(covers.iter().map(json).collect())
        }
        Command::Gen {
            kind,
            k,
            r,
            edges,
            vertices,
            seed,
        } => {
            let kind: GenKind = kind.parse().map_err(Usage)?;
            let p = GenParams {
                k,
                r,
                edges,
                vertices,
            };
            let g = generate(kind, &p, seed).map_err(|e| Usage(e.to_string()))?;
            Ok(vec![g.instance.to_json()])
        }
        Command::Fuzz {
            trials,
            seed,
            generators,
            checks,
            k,
            r,
            edges,
            vertices,
        } => {
            let mut cfg = FuzzConfig::new(trials, seed);
            if !generators.is_empty() {
                cfg.generators = generators
                    .iter()
                    .map(|g| g.parse())
                    .collect::<Result<_, _>>()
                    .map_err(Usage)?;
            }
            if !checks.is_empty() {
                cfg.checks = checks
                    .iter()
                    .map(|c| c.parse::<Check>())
                    .collect::<Result<_, _>>()
                    .map_err(Usage)?;
            }
            cfg.overrides = ParamOverrides {
                k,
                r,
                edges,
                vertices,
            };
            let reports = fuzz(&cfg);
            let failed = reports.iter().filter(|r| !r.passed).count();
            let mut lines: Vec<String> = reports.iter().map(json).collect();
            lines.push(format!(
                r#"{{"trials":{},"passed":{},"failed":{failed}}}"#,
                reports.len(),
                reports.len() - failed
            ));
            if failed > 0 {
                return Err(Rejected(lines));
            }
            Ok(lines)
        }
    }
}

fn emit_lines(lines: &[String], out: Option<&Path>) -> Result<(), Failure> {
    let mut text = lines.join("\n");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Usage(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = match run(cli.command) {
        Ok(lines) => emit_lines(&lines, out.as_deref()),
        Err(Rejected(lines)) => emit_lines(&lines, out.as_deref()).and(Err(Rejected(Vec::new()))),
        Err(e) => Err(e),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Rejected(_)) => ExitCode::from(1),
        Err(Semantic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
