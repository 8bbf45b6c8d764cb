//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use atk_core::approx::{
    connectify_vertex_cover, cvc_2approx, degeneracy_is, eds_2approx, fvs_2approx, greedy_triangle_packing,
    maximal_h_packing, nt_partition, vc_2approx,
};
use atk_core::exact;
use atk_core::friendly::{approx_friendly_turing, builtin_instances, FriendlyProblem};
use atk_core::gen::{connected_partial_ktree, partial_ktree};
use atk_core::graph::{Graph, VertexSet};
use atk_core::harness::{exact_opt, run_one, Engine, Instance, RunRow};
use atk_core::kernel::Reduced;
use atk_core::oracle::{AuditedOracle, BruteForceOracle, Oracle, SizeCap, TdDpOracle};
use atk_core::pace;
use atk_core::problem::{is_feasible, pattern, Direction, ProblemKind, Solution};
use atk_core::td::{heuristic_td, make_nice, make_subconnected, TreeDecomposition};
use atk_core::turing::{approx_cvc_turing, approx_ecc_turing, approx_etp_turing, KernelConfig};
use common::*;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

struct Family {
    k: usize,
    inst: Instance,
}

fn ktree_family() -> Vec<Family> {
    (0..200u64)
        .map(|i| {
            let k = 2 + (i % 3) as usize;
            let n = 20 + (i as usize * 53) % 381;
            let p = 0.6 + 0.05 * (i % 7) as f64;
            let seed = 1000 + i;
            let (graph, td) = partial_ktree(n, k, p, seed).unwrap();
            Family {
                k,
                inst: Instance {
                    graph,
                    td,
                    td_source: "generator".into(),
                    seed: Some(seed),
                },
            }
        })
        .collect()
}

const EPS3: [f64; 3] = [0.25, 0.5, 1.0];

/// Runs `kind` over the family at every epsilon with `check` on each row.
fn sweep(kind: &ProblemKind, oracle: &str, check: impl Fn(&Family, &RunRow) -> Result<(), String>) -> Check {
    let fam = ktree_family();
    let mut worst_ratio = match kind.direction() {
        Direction::Min => 0.0f64,
        Direction::Max => f64::INFINITY,
    };
    let mut worst_query = 0.0f64;
    let mut runs = 0;
    let mut deep = 0;
    for f in &fam {
        let opt = exact_opt(kind, &f.inst.graph, &f.inst.td);
        ensure!(opt.is_some(), "no OPT for seed {:?}", f.inst.seed);
        for eps in EPS3 {
            let cfg = KernelConfig::new(eps).map_err(e)?;
            let row = run_one(kind, Engine::Direct, &cfg, oracle, &f.inst, opt).map_err(e)?;
            ensure!(row.error.is_none(), "seed {:?}: {}", row.seed, row.error.unwrap());
            ensure!(row.feasible == Some(true), "seed {:?} eps {eps}: infeasible", row.seed);
            check(f, &row).map_err(|m| format!("seed {:?} eps {eps}: {m}", row.seed))?;
            let r = row.ratio.unwrap();
            worst_ratio = match kind.direction() {
                Direction::Min => worst_ratio.max(r),
                Direction::Max => worst_ratio.min(r),
            };
            worst_query = worst_query.max(row.max_query_vertices as f64 * eps / (f.k + 1) as f64);
            runs += 1;
            deep += (row.recursion_depth > 0) as usize;
        }
    }
    Ok(format!(
        "{runs} runs ({deep} recursive), worst value/OPT {worst_ratio:.4}, worst query*eps/(k+1) {worst_query:.2}"
    ))
}

fn c1_vc() -> Check {
    sweep(&ProblemKind::VertexCover, "exact-dp", |f, r| {
        let (v, opt) = (r.value.unwrap() as f64, r.opt.unwrap() as f64);
        ensure!(v <= (1.0 + r.epsilon) * opt, "value {v} above (1+eps)*{opt}");
        let cap = 16.0 * (f.k + 1) as f64 / r.epsilon;
        ensure!(r.max_query_vertices as f64 <= cap, "query {} above {cap}", r.max_query_vertices);
        Ok(())
    })
}

fn c2_lossy() -> Check {
    sweep(&ProblemKind::VertexCover, "lossy:1.5", |_, r| {
        let (v, opt) = (r.value.unwrap() as f64, r.opt.unwrap() as f64);
        ensure!(v <= 1.5 * (1.0 + r.epsilon) * opt, "value {v} above 1.5(1+eps)*{opt}");
        Ok(())
    })
}

fn c3_is() -> Check {
    sweep(&ProblemKind::IndependentSet, "exact-dp", |f, r| {
        let (v, opt) = (r.value.unwrap() as f64, r.opt.unwrap() as f64);
        ensure!(v * (1.0 + r.epsilon) >= opt, "value {v} below OPT/(1+eps), OPT {opt}");
        let cap = 10.0 * ((f.k + 1) * (f.k + 1)) as f64 / r.epsilon;
        ensure!(r.max_query_vertices as f64 <= cap, "query {} above {cap}", r.max_query_vertices);
        Ok(())
    })
}

fn c4_ecc() -> Check {
    let kind = ProblemKind::EdgeCliqueCover;
    let mut worst = 0.0f64;
    let mut max_q = 0;
    let mut deep = 0;
    for i in 0..100u64 {
        let n = 50 + (i as usize * 149) % 1451;
        let (g, td) = partial_ktree(n, 1, 0.9, 5000 + i).map_err(e)?;
        for eps in [0.5, 1.0] {
            let audited = AuditedOracle::new(Arc::new(TdDpOracle));
            let rep = approx_ecc_turing(&g, &td, &KernelConfig::new(eps).map_err(e)?, &audited).map_err(e)?;
            ensure!(is_feasible(&kind, &g, &rep.solution), "forest {i}: infeasible cover");
            let v = rep.solution.value as f64;
            ensure!(v <= (1.0 + eps) * g.m() as f64, "forest {i} eps {eps}: {v} > (1+eps)*{}", g.m());
            let q = audited.snapshot().max_query_vertices();
            let cap = 4.0 * (1.0 + eps) / eps * 16.0 + 2.0;
            ensure!(q as f64 <= cap, "forest {i} eps {eps}: query {q} above {cap}");
            if g.m() > 0 {
                worst = worst.max(v / g.m() as f64);
            }
            max_q = max_q.max(q);
            deep += (rep.recursion_depth > 0) as usize;
        }
    }
    let mut worst_bf = 0.0f64;
    for i in 0..50u64 {
        let n = 4 + (i as usize % 7);
        let (g, td) = partial_ktree(n, 2, 0.8, 7000 + i).map_err(e)?;
        let opt = exact::min_edge_clique_cover(&g).len();
        for eps in [0.5, 1.0] {
            let rep = approx_ecc_turing(&g, &td, &KernelConfig::new(eps).map_err(e)?, &BruteForceOracle).map_err(e)?;
            ensure!(is_feasible(&kind, &g, &rep.solution), "tw2 graph {i}: infeasible cover");
            let v = rep.solution.value as f64;
            ensure!(v <= (1.0 + eps) * opt as f64, "tw2 graph {i}: {v} > (1+eps)*{opt}");
            if opt > 0 {
                worst_bf = worst_bf.max(v / opt as f64);
            }
        }
    }
    Ok(format!(
        "200 forest runs ({deep} recursive), worst value/|E| {worst:.4}, max query {max_q}; 100 brute-force runs, worst ratio {worst_bf:.4}"
    ))
}

/// No triangle of `g` has all three edges unused by the packing.
fn maximal_packing(g: &Graph, packing: &[VertexSet]) -> bool {
    let mut used = BTreeSet::new();
    for t in packing {
        let v: Vec<_> = t.iter().copied().collect();
        used.extend([(v[0], v[1]), (v[0], v[2]), (v[1], v[2])]);
    }
    g.triangles()
        .iter()
        .all(|t| used.contains(&(t[0], t[1])) || used.contains(&(t[0], t[2])) || used.contains(&(t[1], t[2])))
}

fn c5_etp() -> Check {
    let kind = ProblemKind::EdgeTrianglePacking;
    let mut r = rng(55);
    let mut worst = f64::INFINITY;
    for i in 0..100 {
        let n = r.random_range(4..=10);
        let g = gnp_capped(n, 0.6, 24, &mut r);
        let opt = exact::max_edge_triangle_packing(&g).len();
        let td = heuristic_td(&g);
        let eps = [0.5, 1.0][i % 2];
        let rep = approx_etp_turing(&g, &td, &KernelConfig::new(eps).map_err(e)?, &BruteForceOracle).map_err(e)?;
        ensure!(is_feasible(&kind, &g, &rep.solution), "graph {i}: infeasible packing");
        let v = rep.solution.value as f64;
        ensure!(v * (1.0 + eps) >= opt as f64, "graph {i}: {v} < {opt}/(1+eps)");
        if opt > 0 {
            worst = worst.min(v / opt as f64);
        }
    }
    let mut deep = 0;
    let mut runs = 0;
    for i in 0..60u64 {
        let k = 2 + (i % 2) as usize;
        let n = 20 + (i as usize * 7) % 60;
        let (g, td) = partial_ktree(n, k, 0.8, 9000 + i).map_err(e)?;
        for (eps, scale) in [(1.0, 1.0), (0.5, 0.02), (1.0, 0.005)] {
            let cfg = KernelConfig::new(eps).and_then(|c| c.with_scale(scale)).map_err(e)?;
            let rep = approx_etp_turing(&g, &td, &cfg, &BruteForceOracle).map_err(e)?;
            let packing = rep.solution.as_family().ok_or("no family payload")?;
            ensure!(is_feasible(&kind, &g, &rep.solution), "ktree {i} scale {scale}: infeasible");
            ensure!(maximal_packing(&g, packing), "ktree {i} scale {scale}: packing not maximal");
            deep += (rep.recursion_depth > 0) as usize;
            runs += 1;
        }
    }
    ensure!(deep > 0, "threshold override never reached the recursive branch");
    Ok(format!(
        "100 brute-force runs, worst value/OPT {worst:.4}; {runs} feasibility/maximality runs, {deep} recursive"
    ))
}

fn c6_cvc() -> Check {
    let kind = ProblemKind::ConnectedVertexCover;
    let mut r = rng(66);
    let mut worst = 0.0f64;
    let mut max_q = 0;
    for i in 0..100 {
        let n = r.random_range(3..=16);
        let g = connected_gnp(n, 0.15, &mut r);
        let opt = exact::min_connected_vertex_cover(&g).ok_or("no CVC on a connected graph")?.len();
        let eps = [0.5, 1.0][i % 2];
        let audited = AuditedOracle::new(Arc::new(BruteForceOracle));
        let rep = approx_cvc_turing(&g, &heuristic_td(&g), &KernelConfig::new(eps).map_err(e)?, &audited).map_err(e)?;
        ensure!(is_feasible(&kind, &g, &rep.solution), "graph {i}: not a connected vertex cover");
        let v = rep.solution.value as f64;
        ensure!(v <= (1.0 + eps) * opt as f64, "graph {i}: {v} > (1+eps)*{opt}");
        worst = worst.max(v / opt.max(1) as f64);
        max_q = max_q.max(audited.snapshot().max_query_vertices());
    }
    // recursive regime on larger connected partial k-trees, feasibility only
    let mut deep = 0;
    for i in 0..30u64 {
        let (g, td) = connected_partial_ktree(30 + i as usize, 2, 0.7, 300 + i).map_err(e)?;
        let cfg = KernelConfig::new(1.0).and_then(|c| c.with_scale(0.001)).map_err(e)?;
        let rep = approx_cvc_turing(&g, &td, &cfg, &BruteForceOracle).map_err(e)?;
        ensure!(is_feasible(&kind, &g, &rep.solution), "ktree {i}: not a connected vertex cover");
        deep += (rep.recursion_depth > 0) as usize;
    }
    for i in 0..200 {
        let n = r.random_range(2..=14);
        let g = connected_gnp(n, 0.2, &mut r);
        let x = random_subset_at_most(&g, 4, &mut r);
        let mut s = vc_2approx(&g);
        s.extend(random_subset(&g, 0.2, &mut r));
        let out = connectify_vertex_cover(&g, &x, &s, None).map_err(e)?;
        let sol = Solution::vertices(out.clone());
        ensure!(is_feasible(&kind, &g, &sol), "triple {i}: not a connected vertex cover");
        ensure!(x.is_subset(&out), "triple {i}: X missing from the output");
        ensure!(out.len() <= s.len() + 2 * x.len(), "triple {i}: {} > |S| + 2|X|", out.len());
    }
    let mut max_children = 0;
    for i in 0..100u64 {
        let k = 1 + (i % 4) as usize;
        let p = if k == 1 { 1.0 } else { 0.9 };
        let (g, td) = connected_partial_ktree(10 + (i as usize * 13) % 90, k, p, 400 + i).map_err(e)?;
        let nice = make_nice(&g, &td).map_err(e)?;
        let sc = make_subconnected(&g, nice.td()).map_err(e)?;
        ensure!(sc.validate(&g).valid, "ktree {i}: rebuilt decomposition invalid");
        ensure!(sc.width() <= td.width(), "ktree {i}: width grew to {}", sc.width());
        ensure!(sc.max_children() <= 2 * k + 2, "ktree {i}: {} children", sc.max_children());
        for t in 0..sc.len() {
            ensure!(g.induces_connected(&sc.subtree_vertices(t)), "ktree {i}: G[V_{t}] disconnected");
        }
        max_children = max_children.max(sc.max_children());
    }
    Ok(format!(
        "100 brute-force runs, worst ratio {worst:.4}, max query {max_q}; 30 scaled runs ({deep} recursive); 200 connectify triples; 100 subconnected rebuilds, max children {max_children}"
    ))
}

fn opt_of(kind: &ProblemKind, g: &Graph) -> Result<usize, String> {
    exact::brute_force(kind, g).map(|s| s.value).map_err(e)
}

/// Capped objective used by approximate kernels.
fn capped(v: usize, k: usize) -> usize {
    v.min(k + 1)
}

fn c7_friendly() -> Check {
    let mut r = rng(77);
    let problems = builtin_instances();
    for p in &problems {
        let kind = p.kind();
        let dir = p.direction();
        // union additivity with split and merge
        for i in 0..100 {
            let g1 = gnp_capped(r.random_range(1..=6), 0.4, 12, &mut r);
            let g2 = gnp_capped(r.random_range(1..=6), 0.4, 12, &mut r).shifted(100);
            let u = g1.disjoint_union(&g2).map_err(e)?;
            let (o1, o2, ou) = (opt_of(kind, &g1)?, opt_of(kind, &g2)?, exact::brute_force(kind, &u).map_err(e)?);
            ensure!(ou.value == o1 + o2, "{}: union {i}: OPT {} != {o1} + {o2}", p.name(), ou.value);
            let (s1, s2) = p.split(&g1.vertex_set(), &g2.vertex_set(), &ou);
            ensure!(is_feasible(kind, &g1, &s1) && is_feasible(kind, &g2, &s2), "{}: union {i}: split infeasible", p.name());
            ensure!(s1.value + s2.value == ou.value, "{}: union {i}: split not additive", p.name());
            let back = p.merge(s1, s2).map_err(e)?;
            ensure!(back.value == ou.value && is_feasible(kind, &u, &back), "{}: union {i}: merge broken", p.name());
        }
        // deletion effect via extend
        for i in 0..100 {
            let g = gnp_capped(r.random_range(2..=9), 0.4, 20, &mut r);
            let x = random_subset_at_most(&g, 5, &mut r);
            let rest = g.remove_vertices(&x).map_err(e)?;
            let s = exact::brute_force(kind, &rest).map_err(e)?;
            let fx = p.f(x.len() as f64);
            let ext = p.extend(&g, &x, s.clone());
            ensure!(is_feasible(kind, &g, &ext), "{}: pair {i}: extended solution infeasible", p.name());
            match dir {
                Direction::Min => ensure!(ext.value as f64 <= s.value as f64 + fx, "{}: pair {i}: extend costs too much", p.name()),
                Direction::Max => {
                    let opt = opt_of(kind, &g)?;
                    ensure!(opt as f64 <= s.value as f64 + fx, "{}: pair {i}: deletion lost too much", p.name());
                    ensure!(ext.value == s.value, "{}: pair {i}: extend changed the value", p.name());
                }
            }
        }
        // phi contract
        for i in 0..100 {
            let g = gnp_capped(r.random_range(1..=10), 0.35, 20, &mut r);
            let l = heuristic_td(&g).width();
            let v = p.phi_approx(&g);
            ensure!(is_feasible(kind, &g, &v), "{}: graph {i}: phi-approximation infeasible", p.name());
            let opt = opt_of(kind, &g)? as f64;
            match dir {
                Direction::Min => ensure!(v.value as f64 <= p.phi(opt, l), "{}: graph {i}: {} > phi({opt})", p.name(), v.value),
                Direction::Max => ensure!(p.phi(v.value as f64, l) >= opt, "{}: graph {i}: phi({}) < {opt}", p.name(), v.value),
            }
        }
        // kernel 1-safety
        if p.psaks_is_real() {
            let psaks = p.psaks(SizeCap::UNBOUNDED);
            for i in 0..100 {
                let g = gnp(r.random_range(1..=10), 0.3, &mut r);
                let opt = opt_of(kind, &g)?;
                for budget in 0..=g.n() + 1 {
                    let Reduced::Instance(red) = psaks.reduce(&g, budget) else {
                        return Err(format!("{}: kernel refused", p.name()));
                    };
                    if let Some(b) = psaks.size_bound(budget) {
                        ensure!(red.graph.n() <= b.max(1), "{}: graph {i}: kernel size {} > {b}", p.name(), red.graph.n());
                    }
                    let inner = exact::brute_force(kind, &red.graph).map_err(e)?;
                    let lifted = psaks.lift(&red, inner);
                    ensure!(is_feasible(kind, &g, &lifted), "{}: graph {i}: lifted solution infeasible", p.name());
                    let ok = match dir {
                        Direction::Min => capped(lifted.value, budget) <= capped(opt, budget),
                        Direction::Max => capped(lifted.value, budget) >= capped(opt, budget),
                    };
                    ensure!(ok, "{}: graph {i} budget {budget}: lifted {} vs OPT {opt}", p.name(), lifted.value);
                }
            }
        }
    }

    // end to end at unscaled thresholds
    let mut runs = 0;
    let mut worst_min = 0.0f64;
    let mut worst_max = f64::INFINITY;
    let mut note = |dir: Direction, ratio: f64| match dir {
        Direction::Min => worst_min = worst_min.max(ratio),
        Direction::Max => worst_max = worst_max.min(ratio),
    };
    for name in ["vc", "is"] {
        let p = FriendlyProblem::by_name(name).map_err(e)?;
        for i in 0..24u64 {
            let k = 2 + (i % 3) as usize;
            let (g, td) = partial_ktree(40 + (i as usize * 61) % 361, k, 0.7, 11000 + i).map_err(e)?;
            let opt = exact_opt(p.kind(), &g, &td).ok_or("no TD-DP optimum")?;
            for eps in EPS3 {
                let rep = approx_friendly_turing(&g, &td, &KernelConfig::new(eps).map_err(e)?, &p, &TdDpOracle).map_err(e)?;
                let v = rep.solution.value;
                ensure!(within(p.direction(), v, opt, eps), "{name} ktree {i} eps {eps}: {v} vs OPT {opt}");
                note(p.direction(), v as f64 / opt.max(1) as f64);
                runs += 1;
            }
        }
    }
    for p in problems.iter().filter(|p| !matches!(p.kind(), ProblemKind::VertexCover | ProblemKind::IndependentSet)) {
        for i in 0..30u64 {
            let (g, td) = partial_ktree(4 + (i as usize % 11), 1 + (i % 3) as usize, 0.7, 12000 + i).map_err(e)?;
            if exact::brute_force_refusal(p.kind(), &g).is_some() {
                continue;
            }
            let opt = opt_of(p.kind(), &g)?;
            for eps in [0.5, 1.0] {
                let rep = approx_friendly_turing(&g, &td, &KernelConfig::new(eps).map_err(e)?, p, &BruteForceOracle).map_err(e)?;
                let v = rep.solution.value;
                ensure!(within(p.direction(), v, opt, eps), "{} graph {i} eps {eps}: {v} vs OPT {opt}", p.name());
                note(p.direction(), if opt == 0 { 1.0 } else { v as f64 / opt as f64 });
                runs += 1;
            }
            let scaled = KernelConfig::new(1.0).and_then(|c| c.with_scale(0.05)).map_err(e)?;
            let rep = approx_friendly_turing(&g, &td, &scaled, p, &BruteForceOracle).map_err(e)?;
            ensure!(is_feasible(p.kind(), &g, &rep.solution), "{} graph {i}: scaled run infeasible", p.name());
        }
    }
    Ok(format!(
        "contract battery on {} problems; {runs} end-to-end runs, worst min ratio {worst_min:.4}, worst max ratio {worst_max:.4}",
        problems.len()
    ))
}

fn within(dir: Direction, v: usize, opt: usize, eps: f64) -> bool {
    match dir {
        Direction::Min => v as f64 <= (1.0 + eps) * opt as f64,
        Direction::Max => v as f64 * (1.0 + eps) >= opt as f64,
    }
}

fn c8_nt() -> Check {
    let mut r = rng(88);
    for i in 0..300 {
        let g = gnp(r.random_range(1..=10), r.random_range(0.1..0.7), &mut r);
        let p = nt_partition(&g);
        let all: VertexSet = p.v0.iter().chain(&p.v_half).chain(&p.v1).copied().collect();
        ensure!(all == g.vertex_set() && all.len() == g.n(), "graph {i}: not a partition");
        for (u, v) in g.edges() {
            ensure!(!(p.v0.contains(&u) && p.v0.contains(&v)), "graph {i}: V0-internal edge {u}-{v}");
            let mixed = (p.v0.contains(&u) && p.v_half.contains(&v)) || (p.v0.contains(&v) && p.v_half.contains(&u));
            ensure!(!mixed, "graph {i}: V0-Vhalf edge {u}-{v}");
        }
        let opt = exact::min_vertex_cover(&g).len() as f64;
        ensure!(p.lp_value() <= opt && opt <= 2.0 * p.lp_value(), "graph {i}: lp {} vs OPT {opt}", p.lp_value());
        let half = exact::min_vertex_cover(&g.induced_subgraph(&p.v_half).map_err(e)?).len();
        ensure!(opt as usize == p.v1.len() + half, "graph {i}: persistence fails");
    }
    Ok("300 graphs: partition legal, LP sandwich and persistence hold".into())
}

fn c9_subroutines() -> Check {
    let mut r = rng(99);
    let mut counts = [0usize; 7];
    for i in 0..320 {
        let n = r.random_range(1..=11);
        let g = gnp_capped(n, r.random_range(0.15..0.6), 26, &mut r);
        let vc = vc_2approx(&g);
        ensure!(g.is_vertex_cover(&vc), "graph {i}: vc_2approx infeasible");
        ensure!(vc.len() <= 2 * exact::min_vertex_cover(&g).len(), "graph {i}: vc_2approx ratio");
        counts[0] += 1;
        let fvs = fvs_2approx(&g);
        ensure!(g.remove_vertices(&fvs).map_err(e)?.is_forest(), "graph {i}: fvs_2approx infeasible");
        ensure!(fvs.len() <= 2 * exact::min_feedback_vertex_set(&g).len(), "graph {i}: fvs_2approx ratio");
        counts[1] += 1;
        let eds = eds_2approx(&g);
        ensure!(is_feasible(&ProblemKind::EdgeDominatingSet, &g, &Solution::edges(eds.clone())), "graph {i}: eds infeasible");
        ensure!(eds.len() <= 2 * exact::min_edge_dominating_set(&g).len(), "graph {i}: eds_2approx ratio");
        counts[2] += 1;
        let tp = greedy_triangle_packing(&g);
        ensure!(is_feasible(&ProblemKind::EdgeTrianglePacking, &g, &Solution::family(tp.clone())), "graph {i}: packing infeasible");
        ensure!(3 * tp.len() >= exact::max_edge_triangle_packing(&g).len(), "graph {i}: greedy packing ratio");
        counts[3] += 1;
        for h in ["k2", "k3", "p3"] {
            let hg = pattern(h).map_err(e)?;
            let kind = ProblemKind::HPacking(hg.clone());
            let hp = maximal_h_packing(&g, &hg);
            ensure!(is_feasible(&kind, &g, &Solution::family(hp.clone())), "graph {i}: {h}-packing infeasible");
            ensure!(hg.n() * hp.len() >= exact::max_h_packing(&g, &hg).len(), "graph {i}: {h}-packing ratio");
        }
        counts[4] += 1;
        let is = degeneracy_is(&g);
        ensure!(g.is_independent(&is), "graph {i}: degeneracy_is not independent");
        ensure!(is.len() * (degeneracy(&g) + 1) >= g.n(), "graph {i}: degeneracy_is too small");
        counts[5] += 1;
        let c = connected_gnp(n.max(2), 0.2, &mut r);
        let cvc = cvc_2approx(&c).ok_or("cvc_2approx refused a connected graph")?;
        ensure!(is_feasible(&ProblemKind::ConnectedVertexCover, &c, &Solution::vertices(cvc.clone())), "graph {i}: cvc infeasible");
        let opt = exact::min_connected_vertex_cover(&c).unwrap().len();
        ensure!(cvc.len() <= 2 * opt, "graph {i}: cvc_2approx {} > 2*{opt}", cvc.len());
        counts[6] += 1;
    }
    Ok(format!("{} instances per subroutine", counts.iter().min().unwrap()))
}

fn c10_infrastructure() -> Check {
    let mut r = rng(1010);
    for i in 0..100 {
        let g = gnp(r.random_range(0..=20), 0.3, &mut r);
        let text = pace::write_gr(&g).map_err(e)?;
        ensure!(pace::parse_gr(&text).map_err(e)? == g, "graph {i}: .gr round trip differs");
        let td = heuristic_td(&g);
        let tdt = pace::write_td(&td, g.n()).map_err(e)?;
        let back = pace::parse_td(&tdt).map_err(e)?;
        ensure!(back.bags() == td.bags(), "graph {i}: .td bags differ");
        let undirected = |t: &TreeDecomposition| {
            let mut v: Vec<_> = t.tree_edges().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
            v.sort();
            v
        };
        let (e1, e2) = (undirected(&td), undirected(&back));
        ensure!(e1 == e2 && back.validate(&g).valid, "graph {i}: .td tree differs");
    }
    // seeded violations on P4 with bags {0,1},{1,2},{2,3}
    let p4 = Graph::from_edges([], [(0, 1), (1, 2), (2, 3)]).unwrap();
    let path = |bags: Vec<Vec<u32>>| {
        let n = bags.len();
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(bags.into_iter().map(|b| b.into_iter().collect()).collect(), &edges).unwrap()
    };
    let good = path(vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
    ensure!(good.validate(&p4).valid, "valid decomposition rejected");
    let rep = path(vec![vec![0, 1], vec![1, 2]]).validate(&p4);
    ensure!(!rep.valid && rep.uncovered_vertices == vec![3], "missing vertex not reported");
    let rep = path(vec![vec![0, 1], vec![1], vec![2, 3]]).validate(&p4);
    ensure!(!rep.valid && rep.uncovered_edges == vec![(1, 2)], "missing edge not reported");
    let rep = path(vec![vec![0, 1, 3], vec![1, 2], vec![2, 3]]).validate(&p4);
    ensure!(!rep.valid && rep.disconnected_traces == vec![3], "broken trace not reported");
    let rep = path(vec![vec![0, 1], vec![1, 2], vec![2, 3, 9]]).validate(&p4);
    ensure!(!rep.valid && rep.unknown_vertices == vec![9], "unknown vertex not reported");
    for seed in 0..200u64 {
        let k = 1 + (seed % 5) as usize;
        let (g, td) = partial_ktree(k + 1 + (seed as usize * 7) % 80, k, (seed % 10) as f64 / 10.0, seed).map_err(e)?;
        ensure!(td.validate(&g).valid && td.width() == k, "generator seed {seed}: bad decomposition");
    }
    let inner: Arc<dyn Oracle> = Arc::new(BruteForceOracle);
    let audited = AuditedOracle::new(inner.clone());
    let kinds = ["vc", "is", "ecc", "etp", "cvc", "fvs", "eds", "cc", "hpack:p3"];
    let mut calls = 0;
    for i in 0..60 {
        let g = connected_gnp(r.random_range(2..=8), 0.3, &mut r);
        for name in kinds {
            let kind = ProblemKind::parse(name).map_err(e)?;
            let a = audited.solve(&kind, &g, None).map_err(e)?;
            let b = inner.solve(&kind, &g, None).map_err(e)?;
            ensure!(a == b, "graph {i}: audited {name} answer differs");
            calls += 1;
        }
    }
    ensure!(audited.snapshot().num_calls() == calls, "audit missed calls");
    Ok(format!("100 round trips, 4 violation classes, 200 generator seeds, {calls} audited calls"))
}

use rand::Rng;

fn main() {
    let criteria: [(&str, f64, fn() -> Check); 10] = [
        ("vc-turing-kernel", 120.0, c1_vc),
        ("lossy-composition", 120.0, c2_lossy),
        ("is-turing-kernel", 120.0, c3_is),
        ("ecc-turing-kernel", 180.0, c4_ecc),
        ("etp-turing-kernel", 180.0, c5_etp),
        ("cvc-turing-kernel", 180.0, c6_cvc),
        ("friendly-framework", 240.0, c7_friendly),
        ("nt-reduction", 60.0, c8_nt),
        ("approximation-subroutines", 120.0, c9_subroutines),
        ("infrastructure", 30.0, c10_infrastructure),
    ];
    let only: Option<usize> = std::env::var("ATK_CRITERION").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match out {
            Ok(d) if secs < limit => (true, d),
            Ok(d) => (false, format!("{d}; took {secs:.1}s, limit {limit}s")),
            Err(m) => (false, m),
        };
        failed += (!pass) as usize;
        println!(
            "{} {:>2} {name}: {detail} [{secs:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
