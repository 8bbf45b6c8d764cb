use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atk_core::harness::{cmd_bench, cmd_solve, Engine, ExperimentSpec, Instance, SolveSpec};
use atk_core::td::{make_nice, make_subconnected};
use atk_core::{gen, pace, Error, Result};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "atk", version, about = "Approximate Turing kernels parameterized by treewidth")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one engine on one graph and report value, OPT and oracle traffic.
    Solve {
        #[arg(long)]
        problem: String,
        #[arg(long, default_value = "direct")]
        engine: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        graph: PathBuf,
        /// Decomposition in PACE .td format; a min-fill heuristic is used if absent.
        #[arg(long)]
        td: Option<PathBuf>,
        /// exact-bf, exact-dp or lossy:<c>
        #[arg(long, default_value = "exact-dp")]
        oracle: String,
        #[arg(long, default_value_t = 1.0)]
        threshold_scale: f64,
        /// JSON report path (a CSV is written next to it); stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a decomposition or convert it to nice or subconnected form.
    Td {
        action: TdAction,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random partial k-tree; its decomposition goes to the same path with a .td extension.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.8)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment sweep described by a JSON spec.
    Bench { spec: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TdAction {
    Validate,
    Nice,
    Subconnected,
}

fn read(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn write(p: &Path, text: &str) -> Result<()> {
    std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            problem,
            engine,
            eps,
            graph,
            td,
            oracle,
            threshold_scale,
            out,
        } => {
            let spec = SolveSpec {
                problem,
                engine: Engine::parse(&engine)?,
                epsilon: eps,
                oracle,
                threshold_scale,
            };
            let inst = Instance::load(&graph, td.as_deref())?;
            let report = cmd_solve(&spec, &inst)?;
            match out {
                Some(p) => report.write(&p)?,
                None => println!("{}", report.to_json()),
            }
            if let Some(e) = &report.rows[0].error {
                return Err(Error::InvalidArgument(e.clone()));
            }
            Ok(())
        }
        Command::Td { action, graph, td, out } => {
            let g = pace::parse_gr(&read(&graph)?)?;
            let td = pace::parse_td(&read(&td)?)?;
            match action {
                TdAction::Validate => {
                    let rep = td.validate(&g);
                    emit(out.as_deref(), &serde_json::to_string_pretty(&rep).expect("report serializes"))?;
                    if rep.valid {
                        Ok(())
                    } else {
                        Err(Error::InvalidArgument("decomposition is invalid".into()))
                    }
                }
                TdAction::Nice => {
                    let ntd = make_nice(&g, &td)?;
                    emit(out.as_deref(), &pace::write_td(ntd.td(), g.n())?)
                }
                TdAction::Subconnected => {
                    let sc = make_subconnected(&g, make_nice(&g, &td)?.td())?;
                    emit(out.as_deref(), &pace::write_td(&sc, g.n())?)
                }
            }
        }
        Command::Gen { n, k, p, seed, out } => {
            let (g, td) = gen::partial_ktree(n, k, p, seed)?;
            write(&out, &pace::write_gr(&g)?)?;
            write(&out.with_extension("td"), &pace::write_td(&td, g.n())?)
        }
        Command::Bench { spec } => {
            let spec = ExperimentSpec::from_json(&read(&spec)?)?;
            let report = cmd_bench(&spec)?;
            if spec.out.is_none() {
                println!("{}", report.to_json());
            } else {
                eprintln!(
                    "{} runs, {} failed, max ratio {:?}, max query {}",
                    report.rows.len(),
                    report.failed_runs,
                    report.max_ratio,
                    report.max_query_vertices
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
