//! In-browser front end: generate a partial k-tree, run one kernel, sweep epsilon.
//!
//! The `*_json` functions hold the logic and are plain Rust so they can be
//! tested natively; the exported wrappers only convert errors for JavaScript.

use atk_core::gen::{connected_partial_ktree, partial_ktree};
use atk_core::harness::{exact_opt, run_engine, Engine};
use atk_core::oracle::{oracle_from_name, AuditedOracle};
use atk_core::turing::{KernelConfig, RunReport};
use atk_core::{Direction, Edge, Graph, Payload, ProblemKind, TreeDecomposition, Vertex};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Oracle used by the page: exact on VC/IS via the decomposition DP,
/// brute force otherwise.
const ORACLE: &str = "exact-dp";

#[derive(Serialize)]
struct KernelView {
    problem: String,
    engine: &'static str,
    n: usize,
    edges: Vec<Edge>,
    width: usize,
    /// Vertices in the solution (for vertex payloads) or touched by it.
    marked: Vec<Vertex>,
    /// Solution edges, or every edge covered by a chosen clique or triangle.
    marked_edges: Vec<Edge>,
    value: usize,
    opt: Option<usize>,
    ratio: Option<f64>,
    guarantee: f64,
    recursion_depth: usize,
    query_sizes: Vec<usize>,
    declared_bound: Option<f64>,
    flags: Vec<String>,
}

#[derive(Serialize)]
struct SweepPoint {
    epsilon: f64,
    value: usize,
    ratio: Option<f64>,
    guarantee: f64,
    max_query: usize,
    declared_bound: Option<f64>,
    calls: usize,
}

#[derive(Serialize)]
struct Sweep {
    problem: String,
    n: usize,
    opt: Option<usize>,
    points: Vec<SweepPoint>,
}

fn engine_for(kind: &ProblemKind) -> Engine {
    match kind {
        ProblemKind::VertexCover
        | ProblemKind::IndependentSet
        | ProblemKind::EdgeCliqueCover
        | ProblemKind::EdgeTrianglePacking
        | ProblemKind::ConnectedVertexCover => Engine::Direct,
        _ => Engine::Friendly,
    }
}

fn ratio(value: usize, opt: usize) -> f64 {
    if opt == 0 {
        1.0
    } else {
        value as f64 / opt as f64
    }
}

/// CVC is only defined on connected graphs, so retry seeds for it.
fn instance(kind: &ProblemKind, n: usize, k: usize, p: f64, seed: u64) -> Result<(Graph, TreeDecomposition), String> {
    let made = match kind {
        ProblemKind::ConnectedVertexCover => connected_partial_ktree(n, k, p, seed),
        _ => partial_ktree(n, k, p, seed),
    };
    made.map_err(|e| e.to_string())
}

fn guarantee(kind: &ProblemKind, eps: f64) -> f64 {
    match kind.direction() {
        Direction::Min => 1.0 + eps,
        Direction::Max => 1.0 / (1.0 + eps),
    }
}

struct Run {
    value: usize,
    marked: Vec<Vertex>,
    marked_edges: Vec<Edge>,
    report: RunReport,
    query_sizes: Vec<usize>,
}

fn run(kind: &ProblemKind, g: &Graph, td: &TreeDecomposition, eps: f64, scale: f64) -> Result<Run, String> {
    let cfg = KernelConfig::new(eps)
        .and_then(|c| c.with_scale(scale))
        .map_err(|e| e.to_string())?;
    let oracle = AuditedOracle::new(oracle_from_name(ORACLE).map_err(|e| e.to_string())?);
    let report = run_engine(kind, engine_for(kind), g, td, &cfg, &oracle).map_err(|e| e.to_string())?;
    let (marked, marked_edges) = match &report.solution.payload {
        Payload::Vertices(s) => (s.iter().copied().collect(), Vec::new()),
        Payload::Edges(e) => (Vec::new(), e.iter().copied().collect()),
        Payload::Family(f) => {
            let mut edges = Vec::new();
            for set in f {
                let vs: Vec<Vertex> = set.iter().copied().collect();
                for (i, &u) in vs.iter().enumerate() {
                    for &v in &vs[i + 1..] {
                        if g.has_edge(u, v) {
                            edges.push((u, v));
                        }
                    }
                }
            }
            (report.solution.touched_vertices().into_iter().collect(), edges)
        }
        Payload::Infeasible => (Vec::new(), Vec::new()),
    };
    let query_sizes = oracle.snapshot().calls.iter().map(|c| c.vertices).collect();
    Ok(Run {
        value: report.solution.value,
        marked,
        marked_edges,
        report,
        query_sizes,
    })
}

/// One generated instance, one run, everything the page draws.
pub fn run_kernel_json(problem: &str, n: usize, k: usize, p: f64, seed: u64, eps: f64, scale: f64) -> Result<String, String> {
    let kind = ProblemKind::parse(problem).map_err(|e| e.to_string())?;
    let (g, td) = instance(&kind, n, k, p, seed)?;
    let r = run(&kind, &g, &td, eps, scale)?;
    let opt = exact_opt(&kind, &g, &td);
    let view = KernelView {
        problem: kind.name(),
        engine: engine_for(&kind).name(),
        n: g.n(),
        edges: g.edges().collect(),
        width: td.width(),
        marked: r.marked,
        marked_edges: r.marked_edges,
        value: r.value,
        opt,
        ratio: opt.map(|o| ratio(r.value, o)),
        guarantee: guarantee(&kind, eps),
        recursion_depth: r.report.recursion_depth,
        query_sizes: r.query_sizes,
        declared_bound: r.report.declared_query_bound,
        flags: r.report.flags,
    };
    Ok(serde_json::to_string(&view).expect("view serializes"))
}

/// Realized ratio and largest oracle query over a grid of epsilons.
pub fn sweep_epsilon_json(problem: &str, n: usize, k: usize, p: f64, seed: u64, scale: f64, steps: usize) -> Result<String, String> {
    let kind = ProblemKind::parse(problem).map_err(|e| e.to_string())?;
    let (g, td) = instance(&kind, n, k, p, seed)?;
    let opt = exact_opt(&kind, &g, &td);
    let steps = steps.clamp(2, 40);
    let mut points = Vec::with_capacity(steps);
    for i in 0..steps {
        let eps = 0.1 + 0.9 * i as f64 / (steps - 1) as f64;
        let r = run(&kind, &g, &td, eps, scale)?;
        points.push(SweepPoint {
            epsilon: eps,
            value: r.value,
            ratio: opt.map(|o| ratio(r.value, o)),
            guarantee: guarantee(&kind, eps),
            max_query: r.query_sizes.iter().copied().max().unwrap_or(0),
            declared_bound: r.report.declared_query_bound,
            calls: r.query_sizes.len(),
        });
    }
    let sweep = Sweep {
        problem: kind.name(),
        n: g.n(),
        opt,
        points,
    };
    Ok(serde_json::to_string(&sweep).expect("sweep serializes"))
}

#[wasm_bindgen]
pub fn run_kernel(problem: &str, n: usize, k: usize, p: f64, seed: u64, eps: f64, scale: f64) -> Result<String, JsValue> {
    run_kernel_json(problem, n, k, p, seed, eps, scale).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sweep_epsilon(problem: &str, n: usize, k: usize, p: f64, seed: u64, scale: f64, steps: usize) -> Result<String, JsValue> {
    sweep_epsilon_json(problem, n, k, p, seed, scale, steps).map_err(|e| JsValue::from_str(&e))
}
