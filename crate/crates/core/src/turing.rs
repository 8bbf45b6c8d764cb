//! Approximate Turing kernels for vertex cover, independent set, edge clique
//! cover, edge-disjoint triangle packing and connected vertex cover.
//!
//! Each engine works on a graph with a tree decomposition of width `l` and
//! only talks to the oracle on graphs whose size is bounded by a function of
//! `l` and `epsilon`. All thresholds are computed from the width of the input
//! decomposition and stay fixed through the recursion.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::approx::{augment_triangle_packing, connectify_vertex_cover, cvc_2approx, greedy_triangle_packing, nt_partition, vc_2approx};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::kernel::{ApproximateKernel, PassThrough, Reduced, TriangleSupport};
use crate::oracle::Oracle;
use crate::problem::{better, check_feasible, Direction, ProblemKind, Solution};
use crate::td::{find_node_by_local_size, make_nice_unchecked, make_subconnected, NiceTreeDecomposition, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelConfig {
    pub epsilon: f64,
    /// Multiplies every internal threshold. Values below 1 force the
    /// recursive branches on small graphs; guarantees only hold at 1.
    pub threshold_scale: f64,
}

impl KernelConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        KernelConfig {
            epsilon,
            threshold_scale: 1.0,
        }
        .checked()
    }

    pub fn with_scale(self, threshold_scale: f64) -> Result<Self> {
        KernelConfig {
            threshold_scale,
            ..self
        }
        .checked()
    }

    pub fn checked(self) -> Result<Self> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::invalid(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        if !(self.threshold_scale > 0.0 && self.threshold_scale.is_finite()) {
            return Err(Error::invalid(format!(
                "threshold scale must be positive, got {}",
                self.threshold_scale
            )));
        }
        Ok(self)
    }

    pub fn is_unscaled(&self) -> bool {
        self.threshold_scale == 1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub problem: String,
    pub solution: Solution,
    /// Number of pieces cut off before the final oracle call.
    pub recursion_depth: usize,
    /// Width of the input decomposition, used in every threshold.
    pub width: usize,
    pub epsilon: f64,
    pub threshold_scale: f64,
    pub thresholds: BTreeMap<String, f64>,
    /// Promised bound on the vertices of any oracle query, when there is one.
    pub declared_query_bound: Option<f64>,
    pub flags: Vec<String>,
}

impl RunReport {
    pub(crate) fn new(kind: &ProblemKind, width: usize, cfg: &KernelConfig) -> Self {
        let flags = if cfg.is_unscaled() { Vec::new() } else { vec!["scaled-thresholds".to_string()] };
        RunReport {
            problem: kind.name(),
            solution: Solution::empty(kind.payload_shape()),
            recursion_depth: 0,
            width,
            epsilon: cfg.epsilon,
            threshold_scale: cfg.threshold_scale,
            thresholds: BTreeMap::new(),
            declared_query_bound: None,
            flags,
        }
    }

    pub(crate) fn flag(&mut self, f: &str) {
        if !self.flags.iter().any(|x| x == f) {
            self.flags.push(f.to_string());
        }
    }
}

/// Queries the oracle and checks the answer, enforcing `bound` at scale 1.
pub(crate) fn ask(
    oracle: &dyn Oracle,
    kind: &ProblemKind,
    g: &Graph,
    td: Option<&TreeDecomposition>,
    bound: Option<f64>,
) -> Result<Solution> {
    if let Some(b) = bound {
        if g.n() as f64 > b + 1e-9 {
            return Err(Error::invariant(format!(
                "{kind} query on {} vertices exceeds the declared bound {b:.2}",
                g.n()
            )));
        }
    }
    let sol = oracle.solve(kind, g, td)?;
    check_feasible(kind, g, &sol)
        .map_err(|e| Error::invariant(format!("oracle returned an infeasible {kind} solution: {e}")))?;
    Ok(sol)
}

/// No edge may leave `V_t \ X_t` except into `X_t`.
fn check_separator(g: &Graph, local: &VertexSet, vt: &VertexSet) -> Result<()> {
    for &v in local {
        if let Some(w) = g.neighbors(v).find(|w| !vt.contains(w)) {
            return Err(Error::invariant(format!(
                "bag does not separate: edge {{{v},{w}}} leaves the subtree"
            )));
        }
    }
    Ok(())
}

fn finish(kind: &ProblemKind, g: &Graph, report: &RunReport) -> Result<()> {
    check_feasible(kind, g, &report.solution)
        .map_err(|e| Error::invariant(format!("assembled {kind} solution is infeasible: {e}")))
}

fn start(g: &Graph, td: &TreeDecomposition, cfg: &KernelConfig) -> Result<usize> {
    cfg.checked()?;
    td.ensure_valid(g)?;
    Ok(td.width())
}

/// Descends from the root while `value(t)` exceeds `limit`, moving to the only
/// child or to the child of larger value at joins (ties to the smaller id).
fn descend(
    ntd: &NiceTreeDecomposition,
    limit: f64,
    mut value: impl FnMut(usize) -> usize,
) -> Result<(usize, usize)> {
    let mut t = ntd.root();
    let mut vt = value(t);
    while vt as f64 > limit {
        let kids = ntd.children(t).to_vec();
        match kids.len() {
            0 => return Err(Error::invariant("descent reached a leaf above the threshold")),
            1 => {
                t = kids[0];
                vt = value(t);
            }
            _ => {
                let (a, b) = (kids[0].min(kids[1]), kids[0].max(kids[1]));
                let (va, vb) = (value(a), value(b));
                (t, vt) = if vb > va { (b, vb) } else { (a, va) };
            }
        }
    }
    Ok((t, vt))
}

/// Vertex cover through the LP kernel: query `G[V_half]`, add `V_1`.
pub fn solve_vc_small(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    oracle: &dyn Oracle,
    bound: Option<f64>,
) -> Result<VertexSet> {
    let p = nt_partition(g);
    let mut out = p.v1.clone();
    if !p.v_half.is_empty() {
        let sub = g.induced_unchecked(&p.v_half);
        let sub_td = td.map(|t| t.restrict(&p.v_half));
        let s = ask(oracle, &ProblemKind::VertexCover, &sub, sub_td.as_ref(), bound)?;
        out.extend(s.as_vertices().expect("vertex payload").iter().copied());
    }
    Ok(out)
}

/// Descends to a node whose part `G[V_t \ X_t]` has a 2-approximate cover of
/// size at most `limit`, while its parent's part exceeds it.
pub fn find_t_vc(g: &Graph, ntd: &NiceTreeDecomposition, limit: f64) -> Result<usize> {
    let (mut t, _) = descend(ntd, limit, |t| vc_2approx(&g.induced_unchecked(&ntd.local_vertices(t))).len())?;
    if ntd.local_vertices(t).is_empty() {
        t = ntd.td().parent(t).ok_or_else(|| Error::invariant("empty descent at the root"))?;
    }
    Ok(t)
}

pub fn approx_vc_turing(g: &Graph, td: &TreeDecomposition, cfg: &KernelConfig, oracle: &dyn Oracle) -> Result<RunReport> {
    let kind = ProblemKind::VertexCover;
    let l = start(g, td, cfg)?;
    let big_l = (l + 1) as f64 / cfg.epsilon;
    let limit = 8.0 * big_l * cfg.threshold_scale;
    let declared = 16.0 * big_l;
    let bound = cfg.is_unscaled().then_some(declared);
    let mut report = RunReport::new(&kind, l, cfg);
    report.thresholds.insert("approx_limit".into(), limit);
    report.declared_query_bound = Some(declared);

    let mut cover = VertexSet::new();
    let (mut cur, mut cur_td) = (g.clone(), td.clone());
    while cur.m() > 0 {
        if vc_2approx(&cur).len() as f64 <= limit {
            cover.extend(solve_vc_small(&cur, Some(&cur_td), oracle, bound)?);
            break;
        }
        let ntd = make_nice_unchecked(&cur_td);
        let t = find_t_vc(&cur, &ntd, limit)?;
        let local = ntd.local_vertices(t);
        let xt = ntd.bag(t).clone();
        let mut vt = local.clone();
        vt.extend(xt.iter().copied());
        check_separator(&cur, &local, &vt)?;
        let piece = cur.induced_unchecked(&local);
        let piece_td = cur_td.restrict(&local);
        cover.extend(solve_vc_small(&piece, Some(&piece_td), oracle, bound)?);
        cover.extend(xt.iter().copied());
        cur = cur.remove_vertices(&vt)?;
        cur_td = ntd.td().remove_subtree(t, false, &cur.vertex_set());
        report.recursion_depth += 1;
    }
    report.solution = Solution::vertices(cover);
    finish(&kind, g, &report)?;
    Ok(report)
}

fn window(lo: f64, hi: f64) -> (usize, usize) {
    let lo = (lo.ceil() as usize).max(1);
    let hi = (hi.floor() as usize).max(lo).max(2 * lo - 2);
    (lo, hi)
}

pub fn approx_is_turing(g: &Graph, td: &TreeDecomposition, cfg: &KernelConfig, oracle: &dyn Oracle) -> Result<RunReport> {
    let kind = ProblemKind::IndependentSet;
    let l = start(g, td, cfg)?;
    let sq = ((l + 1) * (l + 1)) as f64 / cfg.epsilon;
    let s = cfg.threshold_scale;
    let declared = 10.0 * sq;
    let bound = cfg.is_unscaled().then_some(declared);
    let (lo, hi) = window(sq * s, 10.0 * sq * s);
    let mut report = RunReport::new(&kind, l, cfg);
    report.thresholds.insert("base_size".into(), 10.0 * sq * s);
    report.thresholds.insert("window_lo".into(), lo as f64);
    report.thresholds.insert("window_hi".into(), hi as f64);
    report.declared_query_bound = Some(declared);

    let mut set = VertexSet::new();
    let (mut cur, mut cur_td) = (g.clone(), td.clone());
    while !cur.is_empty() {
        if cur.n() as f64 <= 10.0 * sq * s || cur.n() <= hi {
            let sol = ask(oracle, &kind, &cur, Some(&cur_td), bound)?;
            set.extend(sol.as_vertices().unwrap().iter().copied());
            break;
        }
        let ntd = make_nice_unchecked(&cur_td);
        let t = find_node_by_local_size(&ntd, lo, hi)?;
        let local = ntd.local_vertices(t);
        let vt = ntd.subtree_vertices(t);
        check_separator(&cur, &local, &vt)?;
        let piece = cur.induced_unchecked(&local);
        let sol = ask(oracle, &kind, &piece, Some(&cur_td.restrict(&local)), bound)?;
        set.extend(sol.as_vertices().unwrap().iter().copied());
        cur = cur.remove_vertices(&vt)?;
        cur_td = ntd.td().remove_subtree(t, false, &cur.vertex_set());
        report.recursion_depth += 1;
    }
    report.solution = Solution::vertices(set);
    finish(&kind, g, &report)?;
    Ok(report)
}

pub fn approx_ecc_turing(g: &Graph, td: &TreeDecomposition, cfg: &KernelConfig, oracle: &dyn Oracle) -> Result<RunReport> {
    let kind = ProblemKind::EdgeCliqueCover;
    let l = start(g, td, cfg)?;
    let a = (1.0 + cfg.epsilon) / cfg.epsilon * ((l + 1) as f64).powi(4);
    let s = cfg.threshold_scale;
    let declared = 4.0 * a + (l + 1) as f64;
    let bound = cfg.is_unscaled().then_some(declared);
    let (lo, hi) = window(2.0 * a * s, 4.0 * a * s);
    let mut report = RunReport::new(&kind, l, cfg);
    report.thresholds.insert("base_size".into(), 2.0 * a * s);
    report.thresholds.insert("window_lo".into(), lo as f64);
    report.thresholds.insert("window_hi".into(), hi as f64);
    report.declared_query_bound = Some(declared);

    let mut family: Vec<VertexSet> = Vec::new();
    let mut work: Vec<(Graph, TreeDecomposition)> = Vec::new();
    let push_components = |h: &Graph, htd: &TreeDecomposition, work: &mut Vec<(Graph, TreeDecomposition)>| {
        for comp in h.connected_components().into_iter().rev() {
            if comp.len() > 1 {
                work.push((h.induced_unchecked(&comp), htd.restrict(&comp)));
            }
        }
    };
    push_components(g, td, &mut work);
    while let Some((h, htd)) = work.pop() {
        if h.m() == 0 {
            continue;
        }
        if h.n() as f64 <= 2.0 * a * s || h.n() <= hi {
            let sol = ask(oracle, &kind, &h, Some(&htd), bound)?;
            family.extend(sol.as_family().unwrap().iter().cloned());
            continue;
        }
        let ntd = make_nice_unchecked(&htd);
        let t = find_node_by_local_size(&ntd, lo, hi)?;
        let local = ntd.local_vertices(t);
        let vt = ntd.subtree_vertices(t);
        check_separator(&h, &local, &vt)?;
        let piece = h.induced_unchecked(&vt);
        let sol = ask(oracle, &kind, &piece, Some(&htd.restrict(&vt)), bound)?;
        family.extend(sol.as_family().unwrap().iter().cloned());
        let rest = h.remove_vertices(&local)?;
        let rest_td = ntd.td().remove_subtree(t, true, &rest.vertex_set());
        push_components(&rest, &rest_td, &mut work);
        report.recursion_depth += 1;
    }
    report.solution = Solution::family(family);
    finish(&kind, g, &report)?;
    Ok(report)
}

/// Triangle packing on a small instance: greedy packing, support kernel at
/// budget `k`, oracle, lift, best of the two. A refusing kernel degrades the
/// answer to the greedy packing.
pub fn solve_etp_small(g: &Graph, k: usize, oracle: &dyn Oracle, report: &mut RunReport) -> Result<Solution> {
    let kind = ProblemKind::EdgeTrianglePacking;
    let greedy = Solution::family(greedy_triangle_packing(g));
    if greedy.value == 0 {
        return Ok(greedy);
    }
    let kernel = TriangleSupport {
        cap: oracle.size_cap(&kind),
    };
    match kernel.reduce(g, k) {
        Reduced::Instance(r) => {
            let sol = ask(oracle, &kind, &r.graph, None, None)?;
            let lifted = kernel.lift(&r, sol);
            Ok(better(Direction::Max, lifted, greedy))
        }
        Reduced::Refused { .. } => {
            report.flag("degraded");
            Ok(greedy)
        }
    }
}

pub fn approx_etp_turing(g: &Graph, td: &TreeDecomposition, cfg: &KernelConfig, oracle: &dyn Oracle) -> Result<RunReport> {
    let kind = ProblemKind::EdgeTrianglePacking;
    let l = start(g, td, cfg)?;
    let sq = ((l + 1) * (l + 1)) as f64 / cfg.epsilon;
    let global = 18.0 * sq * cfg.threshold_scale;
    let local_limit = 6.0 * sq * cfg.threshold_scale;
    let mut report = RunReport::new(&kind, l, cfg);
    report.thresholds.insert("global_limit".into(), global);
    report.thresholds.insert("local_limit".into(), local_limit);

    let mut packing: Vec<VertexSet> = Vec::new();
    let (mut cur, mut cur_td) = (g.clone(), td.clone());
    while cur.m() > 0 {
        let approx = greedy_triangle_packing(&cur).len();
        if approx as f64 <= global {
            let sol = solve_etp_small(&cur, 3 * approx, oracle, &mut report)?;
            packing.extend(sol.as_family().unwrap().iter().cloned());
            break;
        }
        let ntd = make_nice_unchecked(&cur_td);
        let g_t = |t: usize| -> Graph {
            let vt = ntd.subtree_vertices(t);
            cur.induced_unchecked(&vt).delete_edges_within(ntd.bag(t)).expect("bag inside V_t")
        };
        let (t, value) = descend(&ntd, local_limit, |t| greedy_triangle_packing(&g_t(t)).len())?;
        let local = ntd.local_vertices(t);
        check_separator(&cur, &local, &ntd.subtree_vertices(t))?;
        let sol = solve_etp_small(&g_t(t), 3 * value, oracle, &mut report)?;
        packing.extend(sol.as_family().unwrap().iter().cloned());
        cur = cur.remove_vertices(&local)?;
        cur_td = ntd.td().remove_subtree(t, true, &cur.vertex_set());
        report.recursion_depth += 1;
    }
    // local improvement keeps the guarantee and makes the output maximal
    report.solution = Solution::family(augment_triangle_packing(g, &packing));
    finish(&kind, g, &report)?;
    Ok(report)
}

enum Obtained {
    Solved(VertexSet),
    TooBig,
}

struct CvcCtx<'a> {
    oracle: &'a dyn Oracle,
    big: f64,
}

impl CvcCtx<'_> {
    /// A connected cover of `h` within the kernel's guarantee, or `TooBig`
    /// when the 2-approximation exceeds the size threshold.
    fn obtain(&self, h: &Graph, report: &mut RunReport) -> Result<Obtained> {
        let kind = ProblemKind::ConnectedVertexCover;
        if h.m() == 0 {
            return Ok(Obtained::Solved(VertexSet::new()));
        }
        let approx = cvc_2approx(h).ok_or_else(|| Error::invariant("cvc piece is not connected"))?;
        if approx.len() as f64 > self.big {
            return Ok(Obtained::TooBig);
        }
        let kernel = PassThrough {
            cap: self.oracle.size_cap(&kind),
        };
        let approx = Solution::vertices(approx);
        let sol = match kernel.reduce(h, approx.value) {
            Reduced::Instance(r) => {
                let sol = ask(self.oracle, &kind, &r.graph, None, None)?;
                kernel.lift(&r, sol)
            }
            Reduced::Refused { vertices, cap } => {
                if self.oracle.admits(&kind, h) {
                    report.flag("direct-oracle");
                    ask(self.oracle, &kind, h, None, None)?
                } else {
                    return Err(Error::KernelRefused { vertices, cap });
                }
            }
        };
        let best = better(Direction::Min, sol, approx);
        Ok(Obtained::Solved(best.as_vertices().unwrap().clone()))
    }
}

/// `G[V_t]` with `X_t` identified into `z` (plain `G[V_t]` when `X_t` is empty).
fn cvc_piece(g: &Graph, vt: &VertexSet, xt: &VertexSet, z: Vertex) -> Result<Graph> {
    let h = g.induced_unchecked(vt);
    if xt.is_empty() {
        Ok(h)
    } else {
        h.identify_vertices(xt, z)
    }
}

pub fn approx_cvc_turing(g: &Graph, td: &TreeDecomposition, cfg: &KernelConfig, oracle: &dyn Oracle) -> Result<RunReport> {
    let kind = ProblemKind::ConnectedVertexCover;
    let l = start(g, td, cfg)?;
    let delta = cfg.epsilon / 3.0;
    let lf = l as f64;
    let big = 200.0 * lf * lf / delta * cfg.threshold_scale;
    let pick = 10.0 * lf / delta * cfg.threshold_scale;
    let mut report = RunReport::new(&kind, l, cfg);
    report.thresholds.insert("too_big".into(), big);
    report.thresholds.insert("pick".into(), pick);

    let nontrivial: Vec<VertexSet> = g.connected_components().into_iter().filter(|c| c.len() > 1).collect();
    if nontrivial.is_empty() {
        return Ok(report);
    }
    if nontrivial.len() > 1 {
        report.solution = Solution::infeasible();
        return Ok(report);
    }
    let ctx = CvcCtx { oracle, big };
    let mut cur = g.induced_unchecked(&nontrivial[0]);
    let mut cur_td = td.restrict(&nontrivial[0]);
    let mut next_z = g.max_vertex().unwrap() + 1;
    let mut pieces: Vec<(VertexSet, Vertex)> = Vec::new();
    let mut cover;
    loop {
        if let Obtained::Solved(s) = ctx.obtain(&cur, &mut report)? {
            cover = s;
            break;
        }
        let sc = make_subconnected(&cur, make_nice_unchecked(&cur_td).td())?;
        let found = cvc_find_t(&ctx, &cur, &sc, next_z, cfg, pick, &mut report)?;
        let Some((t, s_t)) = found else {
            report.flag("exhausted-fallback");
            cover = cvc_2approx(&cur).unwrap();
            break;
        };
        let vt = sc.subtree_vertices(t);
        let xt = sc.bag(t).clone();
        let local: VertexSet = vt.difference(&xt).copied().collect();
        let z = (!xt.is_empty()).then_some(next_z);
        let s_t = connectify_vertex_cover(&cur.induced_unchecked(&vt), &xt, &s_t, z)?;
        report.recursion_depth += 1;
        if xt.is_empty() {
            // V_t is the whole graph
            cover = s_t;
            break;
        }
        let rest = cur.remove_vertices(&local)?;
        let next = rest.identify_vertices(&xt, next_z)?;
        let next_td = sc.remove_subtree(t, true, &rest.vertex_set()).replace_vertices(&xt, next_z);
        next_td
            .ensure_valid(&next)
            .map_err(|e| Error::invariant(format!("contracted decomposition broke: {e}")))?;
        pieces.push((s_t, next_z));
        next_z += 1;
        cur = next;
        cur_td = next_td;
    }
    for (piece, z) in pieces.into_iter().rev() {
        cover.extend(piece);
        cover.remove(&z);
    }
    report.solution = Solution::vertices(cover);
    finish(&kind, g, &report)?;
    Ok(report)
}

/// Walks the subconnected decomposition looking for a child whose piece is
/// small enough to solve but carries a large enough solution.
fn cvc_find_t(
    ctx: &CvcCtx,
    g: &Graph,
    sc: &TreeDecomposition,
    z: Vertex,
    cfg: &KernelConfig,
    pick: f64,
    report: &mut RunReport,
) -> Result<Option<(usize, VertexSet)>> {
    let mut t = sc.root().ok_or_else(|| Error::invariant("empty decomposition"))?;
    'walk: loop {
        let mut solved: Vec<(usize, VertexSet, usize)> = Vec::new();
        for &c in sc.children(t) {
            let vt = sc.subtree_vertices(c);
            let h = cvc_piece(g, &vt, sc.bag(c), z)?;
            match ctx.obtain(&h, report)? {
                Obtained::TooBig => {
                    t = c;
                    continue 'walk;
                }
                Obtained::Solved(s) => {
                    if s.len() as f64 >= pick {
                        return Ok(Some((c, s)));
                    }
                    solved.push((c, s, vt.len()));
                }
            }
        }
        if cfg.is_unscaled() {
            return Err(Error::invariant(
                "no child qualifies although the piece above was too big",
            ));
        }
        // scaled thresholds void the counting argument; take the heaviest piece
        report.flag("scaled-fallback");
        let best = solved
            .into_iter()
            .filter(|(_, _, size)| *size >= 2)
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)));
        return Ok(best.map(|(c, s, _)| (c, s)));
    }
}
