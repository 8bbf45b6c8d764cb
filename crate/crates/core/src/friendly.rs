//! Generic Turing kernel for friendly problems: additive over disjoint unions,
//! cheap to repair after deleting a few vertices, equipped with an
//! approximate kernel and a φ-approximation.

use std::collections::BTreeMap;

use crate::approx::{clique_cover_trivial, degeneracy_is, eds_2approx, fvs_2approx, incident_edges, maximal_h_packing, vc_2approx};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::kernel::{ApproximateKernel, CliqueCoverTrivializer, IsTrivializer, NtKernel, PassThrough, Reduced};
use crate::oracle::{Oracle, SizeCap};
use crate::problem::{better, check_feasible, Direction, Payload, ProblemKind, Solution};
use crate::td::{make_nice_unchecked, NiceTreeDecomposition, TreeDecomposition};
use crate::turing::{ask, KernelConfig, RunReport};

/// Descriptor of one of the built-in friendly problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FriendlyProblem {
    kind: ProblemKind,
}

impl FriendlyProblem {
    pub fn new(kind: ProblemKind) -> Result<Self> {
        match kind {
            ProblemKind::VertexCover
            | ProblemKind::IndependentSet
            | ProblemKind::CliqueCover
            | ProblemKind::FeedbackVertexSet
            | ProblemKind::EdgeDominatingSet
            | ProblemKind::HPacking(_) => Ok(FriendlyProblem { kind }),
            other => Err(Error::invalid(format!("{other} is not a built-in friendly problem"))),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Self::new(ProblemKind::parse(name)?)
    }

    pub fn kind(&self) -> &ProblemKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        self.kind.name()
    }

    pub fn direction(&self) -> Direction {
        self.kind.direction()
    }

    /// Cost of repairing a solution after deleting `x` vertices.
    pub fn f(&self, x: f64) -> f64 {
        x
    }

    /// Ratio function of the polynomial approximation.
    pub fn phi(&self, s: f64, l: usize) -> f64 {
        match &self.kind {
            ProblemKind::VertexCover | ProblemKind::FeedbackVertexSet | ProblemKind::EdgeDominatingSet => 2.0 * s,
            ProblemKind::IndependentSet | ProblemKind::CliqueCover => (l + 1) as f64 * s,
            ProblemKind::HPacking(h) => h.n() as f64 * s,
            _ => unreachable!("checked in new"),
        }
    }

    /// Size function of the problem's approximate kernel, as published.
    pub fn h(&self, _delta: f64, m: f64) -> Option<f64> {
        match &self.kind {
            ProblemKind::VertexCover => Some(2.0 * m),
            ProblemKind::IndependentSet => Some((m + 1.0) * (m + 1.0)),
            ProblemKind::CliqueCover => Some(m * (m + 1.0)),
            ProblemKind::FeedbackVertexSet => Some(4.0 * m * m),
            ProblemKind::EdgeDominatingSet => Some(4.0 * m * m + 4.0 * m),
            _ => None,
        }
    }

    /// Whether the kernel slot is implemented here, rather than passing
    /// instances through to the oracle.
    pub fn psaks_is_real(&self) -> bool {
        matches!(
            self.kind,
            ProblemKind::VertexCover | ProblemKind::IndependentSet | ProblemKind::CliqueCover
        )
    }

    pub fn psaks(&self, cap: SizeCap) -> Box<dyn ApproximateKernel> {
        match self.kind {
            ProblemKind::VertexCover => Box::new(NtKernel),
            ProblemKind::IndependentSet => Box::new(IsTrivializer),
            ProblemKind::CliqueCover => Box::new(CliqueCoverTrivializer),
            _ => Box::new(PassThrough { cap }),
        }
    }

    /// Query bound promised for `epsilon` at width `l`, when the kernel is real.
    pub fn declared_query_bound(&self, epsilon: f64, l: usize) -> Option<f64> {
        if !self.psaks_is_real() {
            return None;
        }
        let k = 6.0 * self.f((l + 1) as f64) / epsilon + self.f(1.0);
        self.h(epsilon / 3.0, self.phi(k, l) + l as f64)
    }

    pub fn phi_approx(&self, g: &Graph) -> Solution {
        match &self.kind {
            ProblemKind::VertexCover => Solution::vertices(vc_2approx(g)),
            ProblemKind::IndependentSet => Solution::vertices(degeneracy_is(g)),
            ProblemKind::CliqueCover => Solution::family(clique_cover_trivial(g)),
            ProblemKind::FeedbackVertexSet => Solution::vertices(fvs_2approx(g)),
            ProblemKind::EdgeDominatingSet => Solution::edges(eds_2approx(g)),
            ProblemKind::HPacking(h) => Solution::family(maximal_h_packing(g, h)),
            _ => unreachable!("checked in new"),
        }
    }

    /// Turns a solution of `G - X` into one of `G`. Costs at most `f(|X|)` for
    /// minimisation problems; the identity for maximisation problems.
    pub fn extend(&self, g: &Graph, x: &VertexSet, s: Solution) -> Solution {
        match (&self.kind, s.payload) {
            (ProblemKind::VertexCover | ProblemKind::FeedbackVertexSet, Payload::Vertices(mut v)) => {
                v.extend(x.iter().copied());
                Solution::vertices(v)
            }
            (ProblemKind::CliqueCover, Payload::Family(mut f)) => {
                f.extend(x.iter().map(|&v| VertexSet::from([v])));
                Solution::family(f)
            }
            (ProblemKind::EdgeDominatingSet, Payload::Edges(mut d)) => {
                d.extend(incident_edges(g, x));
                Solution::edges(d)
            }
            (_, payload) => Solution {
                value: s.value,
                payload,
            },
        }
    }

    /// Splits a solution of `G1 + G2` into its two parts.
    pub fn split(&self, left: &VertexSet, right: &VertexSet, s: &Solution) -> (Solution, Solution) {
        (s.restrict(left), s.restrict(right))
    }

    pub fn merge(&self, a: Solution, b: Solution) -> Result<Solution> {
        a.merge(b)
    }
}

/// The registry: VC, IS, clique cover, FVS, EDS and H-packing for K2, K3, P3.
pub fn builtin_instances() -> Vec<FriendlyProblem> {
    ["vc", "is", "cc", "fvs", "eds", "hpack:k2", "hpack:k3", "hpack:p3"]
        .into_iter()
        .map(|n| FriendlyProblem::by_name(n).expect("built-in names parse"))
        .collect()
}

/// Outcome of the node search.
#[derive(Clone, Debug)]
pub enum FoundT {
    /// The whole graph was solved directly.
    Direct(Solution),
    /// `solution` is an approximate solution of `G[V_t \ X_t]`.
    Node { t: usize, solution: Solution },
}

struct Ctx<'a> {
    problem: &'a FriendlyProblem,
    oracle: &'a dyn Oracle,
    budget: usize,
    bound: Option<f64>,
}

impl Ctx<'_> {
    /// Kernel, oracle and lifting on `h`, returning the better of the lifted
    /// answer and `guard`.
    fn solve_small(&self, h: &Graph, h_td: &TreeDecomposition, guard: Solution, report: &mut RunReport) -> Result<Solution> {
        let kind = self.problem.kind();
        let dir = self.problem.direction();
        if h.is_empty() {
            return Ok(guard);
        }
        let kernel = self.problem.psaks(self.oracle.size_cap(kind));
        match kernel.reduce(h, self.budget) {
            Reduced::Instance(r) => {
                let sol = if r.graph.is_empty() {
                    Solution::empty(kind.payload_shape())
                } else {
                    let hint = r.subgraph.then(|| h_td.restrict(&r.graph.vertex_set()));
                    ask(self.oracle, kind, &r.graph, hint.as_ref(), self.bound)?
                };
                Ok(better(dir, kernel.lift(&r, sol), guard))
            }
            Reduced::Refused { vertices, cap } => {
                if self.oracle.admits(kind, h) {
                    report.flag("direct-oracle");
                    let sol = ask(self.oracle, kind, h, Some(h_td), None)?;
                    Ok(better(dir, sol, guard))
                } else {
                    Err(Error::KernelRefused { vertices, cap })
                }
            }
        }
    }
}

/// Either solves `g` directly or finds a node `t` whose part `G[V_t \ X_t]`
/// has a large optimum yet a small approximate solution, and solves that part.
pub fn find_t_friendly(
    g: &Graph,
    td: &TreeDecomposition,
    ntd: &NiceTreeDecomposition,
    cfg: &KernelConfig,
    width: usize,
    problem: &FriendlyProblem,
    oracle: &dyn Oracle,
    report: &mut RunReport,
) -> Result<FoundT> {
    let delta = cfg.epsilon / 3.0;
    let k = 2.0 * problem.f((width + 1) as f64) / delta + problem.f(1.0);
    let phik = problem.phi(k, width);
    let budget = (phik + width as f64).floor() as usize;
    let bound = if cfg.is_unscaled() {
        problem.declared_query_bound(cfg.epsilon, width)
    } else {
        None
    };
    let ctx = Ctx {
        problem,
        oracle,
        budget,
        bound,
    };
    let dir = problem.direction();
    let s = cfg.threshold_scale;
    let limit = match dir {
        Direction::Min => phik * s,
        Direction::Max => k * s,
    };

    let whole = problem.phi_approx(g);
    if whole.value as f64 <= limit {
        return Ok(FoundT::Direct(ctx.solve_small(g, td, whole, report)?));
    }

    let mut cache: BTreeMap<usize, (VertexSet, Solution)> = BTreeMap::new();
    let mut eval = |t: usize| -> (VertexSet, Solution) {
        cache
            .entry(t)
            .or_insert_with(|| {
                let local = ntd.local_vertices(t);
                let sol = problem.phi_approx(&g.induced_unchecked(&local));
                (local, sol)
            })
            .clone()
    };

    // highest node above the limit whose children are all at most the limit
    let mut p = ntd.root();
    loop {
        let heavy = ntd
            .children(p)
            .iter()
            .map(|&c| (c, eval(c).1.value))
            .filter(|&(_, v)| v as f64 > limit)
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)));
        match heavy {
            Some((c, _)) => p = c,
            None => break,
        }
    }
    let kids = ntd.children(p).to_vec();
    let (mut t, mut guard) = match kids.len() {
        0 => return Err(Error::invariant("friendly descent stopped at a leaf")),
        1 => (kids[0], eval(kids[0]).1),
        _ => {
            let (a, b) = (kids[0].min(kids[1]), kids[0].max(kids[1]));
            let ((la, sa), (lb, sb)) = (eval(a), eval(b));
            match dir {
                Direction::Min => {
                    let half = phik / 2.0 * s;
                    if sa.value as f64 <= half && sb.value as f64 <= half {
                        (p, sa.merge(sb)?)
                    } else if sb.value > sa.value {
                        (b, sb)
                    } else {
                        (a, sa)
                    }
                }
                Direction::Max => {
                    let sp = eval(p).1;
                    let (pa, pb) = problem.split(&la, &lb, &sp);
                    if pa.value + pb.value != sp.value {
                        return Err(Error::invariant("split of a join solution is not additive"));
                    }
                    if pb.value > pa.value {
                        (b, sb)
                    } else {
                        (a, sa)
                    }
                }
            }
        }
    };
    if eval(t).0.is_empty() {
        // only reachable with scaled thresholds
        t = p;
        guard = eval(p).1;
    }
    let local = eval(t).0;
    let piece = g.induced_unchecked(&local);
    let piece_td = td.restrict(&local);
    let solution = ctx.solve_small(&piece, &piece_td, guard, report)?;
    Ok(FoundT::Node { t, solution })
}

pub fn approx_friendly_turing(
    g: &Graph,
    td: &TreeDecomposition,
    cfg: &KernelConfig,
    problem: &FriendlyProblem,
    oracle: &dyn Oracle,
) -> Result<RunReport> {
    cfg.checked()?;
    td.ensure_valid(g)?;
    let kind = problem.kind().clone();
    let l = td.width();
    let delta = cfg.epsilon / 3.0;
    let k = 2.0 * problem.f((l + 1) as f64) / delta + problem.f(1.0);
    let mut report = RunReport::new(&kind, l, cfg);
    report.thresholds = BTreeMap::from([
        ("k".to_string(), k),
        ("phi_k".to_string(), problem.phi(k, l)),
        ("budget".to_string(), (problem.phi(k, l) + l as f64).floor()),
    ]);
    report.declared_query_bound = problem.declared_query_bound(cfg.epsilon, l);

    let mut levels: Vec<(Graph, VertexSet, Solution)> = Vec::new();
    let (mut cur, mut cur_td) = (g.clone(), td.clone());
    let mut result = Solution::empty(kind.payload_shape());
    while !cur.is_empty() {
        let ntd = make_nice_unchecked(&cur_td);
        match find_t_friendly(&cur, &cur_td, &ntd, cfg, l, problem, oracle, &mut report)? {
            FoundT::Direct(s) => {
                result = s;
                break;
            }
            FoundT::Node { t, solution } => {
                let vt = ntd.subtree_vertices(t);
                let xt = ntd.bag(t).clone();
                let next = cur.remove_vertices(&vt)?;
                if next.n() >= cur.n() {
                    return Err(Error::invariant("friendly recursion made no progress"));
                }
                cur_td = if next.is_empty() {
                    TreeDecomposition::single_bag(VertexSet::new())
                } else {
                    ntd.td().remove_subtree(t, false, &next.vertex_set())
                };
                levels.push((cur, xt, solution));
                cur = next;
                report.recursion_depth += 1;
            }
        }
    }
    for (level, xt, s_t) in levels.into_iter().rev() {
        result = problem.extend(&level, &xt, result.merge(s_t)?);
    }
    check_feasible(&kind, g, &result)
        .map_err(|e| Error::invariant(format!("assembled {kind} solution is infeasible: {e}")))?;
    report.solution = result;
    Ok(report)
}
