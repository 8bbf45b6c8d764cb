//! Experiment plumbing: single solves, generator sweeps and their reports.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, TD_DP_WIDTH_CAP};
use crate::friendly::{approx_friendly_turing, FriendlyProblem};
use crate::gen::partial_ktree;
use crate::graph::Graph;
use crate::oracle::{oracle_from_name, AuditedOracle};
use crate::problem::{Direction, ProblemKind};
use crate::td::{heuristic_td, make_nice, TreeDecomposition};
use crate::turing::{self, KernelConfig, RunReport};
use crate::pace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Direct,
    Friendly,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Engine::Direct),
            "friendly" => Ok(Engine::Friendly),
            _ => Err(Error::invalid(format!("unknown engine '{s}' (direct|friendly)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Engine::Direct => "direct",
            Engine::Friendly => "friendly",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Generator {
        n: usize,
        k: usize,
        p: f64,
        seed: u64,
        #[serde(default = "one")]
        repetitions: usize,
    },
    File {
        graph: PathBuf,
        #[serde(default)]
        td: Option<PathBuf>,
    },
}

fn one() -> usize {
    1
}

fn unit_scale() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub problem: String,
    #[serde(default)]
    pub engine: Engine,
    pub epsilons: Vec<f64>,
    pub oracle: String,
    #[serde(default = "unit_scale")]
    pub threshold_scale: f64,
    pub family: Family,
    /// JSON report path; a CSV projection is written next to it.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad experiment spec: {e}")))?;
        spec.checked()
    }

    pub fn checked(self) -> Result<Self> {
        ProblemKind::parse(&self.problem)?;
        if self.epsilons.is_empty() {
            return Err(Error::invalid("experiment needs at least one epsilon"));
        }
        for &e in &self.epsilons {
            KernelConfig::new(e)?.with_scale(self.threshold_scale)?;
        }
        oracle_from_name(&self.oracle)?;
        if let Family::Generator { k, p, .. } = self.family {
            if k < 1 {
                return Err(Error::invalid("generator needs k >= 1"));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!("edge-keep probability {p} outside [0, 1]")));
            }
        }
        Ok(self)
    }
}

/// One graph with the decomposition the engine will use.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub td: TreeDecomposition,
    /// `file`, `heuristic` or `generator`.
    pub td_source: String,
    pub seed: Option<u64>,
}

impl Instance {
    pub fn with_heuristic_td(graph: Graph) -> Self {
        let td = heuristic_td(&graph);
        Instance {
            graph,
            td,
            td_source: "heuristic".into(),
            seed: None,
        }
    }

    pub fn load(graph: &std::path::Path, td: Option<&std::path::Path>) -> Result<Self> {
        let g = pace::parse_gr(&read(graph)?)?;
        match td {
            Some(p) => {
                let td = pace::parse_td(&read(p)?)?;
                td.ensure_valid(&g)?;
                Ok(Instance {
                    graph: g,
                    td,
                    td_source: "file".into(),
                    seed: None,
                })
            }
            None => Ok(Self::with_heuristic_td(g)),
        }
    }
}

fn read(p: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub problem: String,
    pub engine: String,
    pub n: usize,
    pub m: usize,
    pub width: usize,
    pub td_source: String,
    pub epsilon: f64,
    pub threshold_scale: f64,
    pub oracle: String,
    pub value: Option<usize>,
    pub feasible: Option<bool>,
    pub opt: Option<usize>,
    /// value / OPT, present exactly when OPT was computed.
    pub ratio: Option<f64>,
    pub oracle_calls: usize,
    pub max_query_vertices: usize,
    pub declared_bound: Option<f64>,
    pub recursion_depth: usize,
    pub runtime_ms: f64,
    pub seed: Option<u64>,
    pub flags: Vec<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<RunRow>,
    pub max_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub max_query_vertices: usize,
    pub failed_runs: usize,
}

impl Report {
    pub fn from_rows(rows: Vec<RunRow>) -> Self {
        let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
        Report {
            max_ratio: ratios.iter().copied().reduce(f64::max),
            min_ratio: ratios.iter().copied().reduce(f64::min),
            max_query_vertices: rows.iter().map(|r| r.max_query_vertices).max().unwrap_or(0),
            failed_runs: rows.iter().filter(|r| r.error.is_some()).count(),
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_csv(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        let mut out = String::from(
            "problem,engine,n,m,width,epsilon,threshold_scale,oracle,value,feasible,opt,ratio,oracle_calls,max_query_vertices,declared_bound,recursion_depth,runtime_ms,seed,flags,error\n",
        );
        for r in &self.rows {
            let fields = [
                r.problem.clone(),
                r.engine.clone(),
                r.n.to_string(),
                r.m.to_string(),
                r.width.to_string(),
                r.epsilon.to_string(),
                r.threshold_scale.to_string(),
                r.oracle.clone(),
                opt(&r.value),
                opt(&r.feasible),
                opt(&r.opt),
                opt(&r.ratio),
                r.oracle_calls.to_string(),
                r.max_query_vertices.to_string(),
                opt(&r.declared_bound),
                r.recursion_depth.to_string(),
                format!("{:.3}", r.runtime_ms),
                opt(&r.seed),
                r.flags.join(";"),
                opt(&r.error),
            ];
            let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Writes the JSON report to `path` and the CSV next to it.
    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
        std::fs::write(path, self.to_json()).map_err(io)?;
        std::fs::write(path.with_extension("csv"), self.to_csv()).map_err(io)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs the chosen engine for `kind`.
pub fn run_engine(
    kind: &ProblemKind,
    engine: Engine,
    g: &Graph,
    td: &TreeDecomposition,
    cfg: &KernelConfig,
    oracle: &dyn crate::oracle::Oracle,
) -> Result<RunReport> {
    match engine {
        Engine::Friendly => approx_friendly_turing(g, td, cfg, &FriendlyProblem::new(kind.clone())?, oracle),
        Engine::Direct => match kind {
            ProblemKind::VertexCover => turing::approx_vc_turing(g, td, cfg, oracle),
            ProblemKind::IndependentSet => turing::approx_is_turing(g, td, cfg, oracle),
            ProblemKind::EdgeCliqueCover => turing::approx_ecc_turing(g, td, cfg, oracle),
            ProblemKind::EdgeTrianglePacking => turing::approx_etp_turing(g, td, cfg, oracle),
            ProblemKind::ConnectedVertexCover => turing::approx_cvc_turing(g, td, cfg, oracle),
            other => Err(Error::invalid(format!("{other} has no direct engine; use --engine friendly"))),
        },
    }
}

/// Exact optimum when it is within reach.
pub fn exact_opt(kind: &ProblemKind, g: &Graph, td: &TreeDecomposition) -> Option<usize> {
    match kind {
        ProblemKind::VertexCover | ProblemKind::IndependentSet if td.width() <= TD_DP_WIDTH_CAP => {
            let ntd = make_nice(g, td).ok()?;
            let mis = exact::max_independent_set_td(g, &ntd).ok()?.len();
            Some(if *kind == ProblemKind::IndependentSet { mis } else { g.n() - mis })
        }
        ProblemKind::EdgeCliqueCover if g.is_triangle_free() => Some(g.m()),
        ProblemKind::ConnectedVertexCover if !g.is_empty() && !g.is_connected() => None,
        _ if exact::brute_force_refusal(kind, g).is_none() => exact::brute_force(kind, g).ok().map(|s| s.value),
        _ => None,
    }
}

fn ratio(value: usize, opt: usize) -> f64 {
    if opt == 0 {
        if value == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        value as f64 / opt as f64
    }
}

/// Query-size bound the engine declares, hard-checked at threshold scale 1.
fn enforced(kind: &ProblemKind) -> bool {
    matches!(
        kind,
        ProblemKind::VertexCover | ProblemKind::IndependentSet | ProblemKind::EdgeCliqueCover
    )
}

/// One audited run. Engine errors other than invariant violations are
/// recorded in the row; invariant violations abort.
pub fn run_one(
    kind: &ProblemKind,
    engine: Engine,
    cfg: &KernelConfig,
    oracle_name: &str,
    inst: &Instance,
    opt: Option<usize>,
) -> Result<RunRow> {
    let audited = AuditedOracle::new(oracle_from_name(oracle_name)?);
    let start = Instant::now();
    let out = run_engine(kind, engine, &inst.graph, &inst.td, cfg, &audited);
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let audit = audited.snapshot();
    let mut row = RunRow {
        problem: kind.name(),
        engine: engine.name().into(),
        n: inst.graph.n(),
        m: inst.graph.m(),
        width: inst.td.width(),
        td_source: inst.td_source.clone(),
        epsilon: cfg.epsilon,
        threshold_scale: cfg.threshold_scale,
        oracle: oracle_name.into(),
        value: None,
        feasible: None,
        opt,
        ratio: None,
        oracle_calls: audit.num_calls(),
        max_query_vertices: audit.max_query_vertices(),
        declared_bound: None,
        recursion_depth: 0,
        runtime_ms,
        seed: inst.seed,
        flags: Vec::new(),
        error: None,
    };
    match out {
        Err(e @ Error::Invariant(_)) => return Err(e),
        Err(e) => row.error = Some(e.to_string()),
        Ok(rep) => {
            let sol = &rep.solution;
            row.feasible = Some(crate::problem::is_feasible(kind, &inst.graph, sol));
            if !sol.is_infeasible() {
                row.value = Some(sol.value);
                row.ratio = opt.map(|o| ratio(sol.value, o));
            }
            row.declared_bound = rep.declared_query_bound;
            row.recursion_depth = rep.recursion_depth;
            row.flags = rep.flags;
            if let (true, true, Some(b)) = (cfg.is_unscaled(), enforced(kind), rep.declared_query_bound) {
                if row.max_query_vertices as f64 > b + 1e-9 {
                    return Err(Error::invariant(format!(
                        "{kind}: oracle query of {} vertices above the declared bound {b:.2}",
                        row.max_query_vertices
                    )));
                }
            }
        }
    }
    Ok(row)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveSpec {
    pub problem: String,
    pub engine: Engine,
    pub epsilon: f64,
    pub oracle: String,
    pub threshold_scale: f64,
}

pub fn cmd_solve(spec: &SolveSpec, inst: &Instance) -> Result<Report> {
    let kind = ProblemKind::parse(&spec.problem)?;
    let cfg = KernelConfig::new(spec.epsilon)?.with_scale(spec.threshold_scale)?;
    let opt = exact_opt(&kind, &inst.graph, &inst.td);
    let row = run_one(&kind, spec.engine, &cfg, &spec.oracle, inst, opt)?;
    Ok(Report::from_rows(vec![row]))
}

pub fn cmd_bench(spec: &ExperimentSpec) -> Result<Report> {
    let spec = spec.clone().checked()?;
    let kind = ProblemKind::parse(&spec.problem)?;
    let instances: Vec<Instance> = match &spec.family {
        Family::File { graph, td } => vec![Instance::load(graph, td.as_deref())?],
        Family::Generator {
            n,
            k,
            p,
            seed,
            repetitions,
        } => (0..*repetitions as u64)
            .map(|r| {
                let s = seed.wrapping_add(r);
                partial_ktree(*n, *k, *p, s).map(|(graph, td)| Instance {
                    graph,
                    td,
                    td_source: "generator".into(),
                    seed: Some(s),
                })
            })
            .collect::<Result<_>>()?,
    };
    let opts: Vec<Option<usize>> = instances.iter().map(|i| exact_opt(&kind, &i.graph, &i.td)).collect();
    let jobs: Vec<(usize, f64)> = (0..instances.len())
        .flat_map(|i| spec.epsilons.iter().map(move |&e| (i, e)))
        .collect();

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<RunRow>>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                if j >= jobs.len() {
                    break;
                }
                let (i, eps) = jobs[j];
                let out = KernelConfig::new(eps)
                    .and_then(|c| c.with_scale(spec.threshold_scale))
                    .and_then(|cfg| run_one(&kind, spec.engine, &cfg, &spec.oracle, &instances[i], opts[i]));
                results.lock().expect("no worker panics")[j] = Some(out);
            });
        }
    });
    let rows = results
        .into_inner()
        .expect("no worker panics")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect::<Result<Vec<_>>>()?;
    let report = Report::from_rows(rows);
    if let Some(path) = &spec.out {
        report.write(path)?;
    }
    Ok(report)
}

/// Whether `row` meets the guarantee `c(1+eps)` for its direction.
pub fn within_guarantee(row: &RunRow, direction: Direction, c: f64) -> Option<bool> {
    let r = row.ratio?;
    let bound = c * (1.0 + row.epsilon);
    Some(match direction {
        Direction::Min => r <= bound + 1e-9,
        Direction::Max => r * bound >= 1.0 - 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_reports_ratio() {
        let (g, td) = partial_ktree(12, 2, 0.7, 3).unwrap();
        let inst = Instance {
            graph: g,
            td,
            td_source: "generator".into(),
            seed: Some(3),
        };
        let spec = SolveSpec {
            problem: "vc".into(),
            engine: Engine::Direct,
            epsilon: 0.5,
            oracle: "exact-bf".into(),
            threshold_scale: 1.0,
        };
        let rep = cmd_solve(&spec, &inst).unwrap();
        let row = &rep.rows[0];
        assert!(row.ratio.unwrap() <= 1.5);
        assert_eq!(row.feasible, Some(true));
        assert!(rep.to_csv().lines().count() == 2);
    }

    #[test]
    fn bench_spec_parses_and_runs() {
        let spec = ExperimentSpec::from_json(
            r#"{"problem":"is","epsilons":[0.5,1.0],"oracle":"exact-dp",
                "family":{"generator":{"n":60,"k":2,"p":0.8,"seed":7,"repetitions":3}}}"#,
        )
        .unwrap();
        let rep = cmd_bench(&spec).unwrap();
        assert_eq!(rep.rows.len(), 6);
        assert_eq!(rep.failed_runs, 0);
        for r in &rep.rows {
            assert_eq!(within_guarantee(r, Direction::Max, 1.0), Some(true));
        }
    }

    #[test]
    fn bad_specs() {
        assert!(ExperimentSpec::from_json(r#"{"problem":"vc","epsilons":[2.0],"oracle":"exact-dp","family":{"generator":{"n":5,"k":1,"p":0.5,"seed":1}}}"#).is_err());
        assert!(ExperimentSpec::from_json(r#"{"problem":"vc","epsilons":[0.5],"oracle":"nope","family":{"generator":{"n":5,"k":1,"p":0.5,"seed":1}}}"#).is_err());
        assert!(Engine::parse("x").is_err());
    }
}
