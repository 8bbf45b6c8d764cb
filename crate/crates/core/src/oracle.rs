//! Oracles answer bounded-size queries. Kernels only ever reach them through
//! the [`Oracle`] trait, so audited, lossy and exact oracles are interchangeable.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, BRUTE_FORCE_EDGE_CAP, BRUTE_FORCE_VERTEX_CAP, TD_DP_WIDTH_CAP};
use crate::graph::{Graph, VertexSet};
use crate::problem::{Direction, Payload, ProblemKind, Solution};
use crate::td::TreeDecomposition;

/// Largest instance an oracle accepts; `None` means unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SizeCap {
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
}

impl SizeCap {
    pub const UNBOUNDED: SizeCap = SizeCap {
        vertices: None,
        edges: None,
    };

    pub fn admits(&self, g: &Graph) -> bool {
        self.vertices.is_none_or(|c| g.n() <= c) && self.edges.is_none_or(|c| g.m() <= c)
    }

    /// Cap on the vertex count, or on the edge count when only that is bounded.
    pub fn headline(&self) -> usize {
        self.vertices.or(self.edges).unwrap_or(usize::MAX)
    }
}

pub trait Oracle: Send + Sync {
    fn name(&self) -> String;

    /// Approximation ratio the oracle promises (1 for exact oracles).
    fn declared_ratio(&self) -> f64 {
        1.0
    }

    fn size_cap(&self, kind: &ProblemKind) -> SizeCap;

    fn admits(&self, kind: &ProblemKind, g: &Graph) -> bool {
        self.size_cap(kind).admits(g)
    }

    /// Solves `kind` on `g`. A decomposition of `g` may be supplied as a hint.
    fn solve(&self, kind: &ProblemKind, g: &Graph, td: Option<&TreeDecomposition>) -> Result<Solution>;
}

fn brute_cap(kind: &ProblemKind) -> SizeCap {
    match kind {
        ProblemKind::EdgeCliqueCover | ProblemKind::EdgeTrianglePacking => SizeCap {
            vertices: None,
            edges: Some(BRUTE_FORCE_EDGE_CAP),
        },
        _ => SizeCap {
            vertices: Some(BRUTE_FORCE_VERTEX_CAP),
            edges: None,
        },
    }
}

/// Exhaustive search on small graphs.
#[derive(Clone, Copy, Debug, Default)]
pub struct BruteForceOracle;

impl Oracle for BruteForceOracle {
    fn name(&self) -> String {
        "exact-bf".into()
    }

    fn size_cap(&self, kind: &ProblemKind) -> SizeCap {
        brute_cap(kind)
    }

    fn solve(&self, kind: &ProblemKind, g: &Graph, _td: Option<&TreeDecomposition>) -> Result<Solution> {
        exact::brute_force(kind, g)
    }
}

/// Exact vertex cover and independent set by tree decomposition DP, exact edge
/// clique cover on triangle-free graphs, exhaustive search for everything else.
#[derive(Clone, Copy, Debug, Default)]
pub struct TdDpOracle;

impl TdDpOracle {
    fn dp_is(g: &Graph, td: Option<&TreeDecomposition>) -> Result<VertexSet> {
        let ntd = exact::nice_for(g, td);
        if ntd.width() > TD_DP_WIDTH_CAP && g.n() <= BRUTE_FORCE_VERTEX_CAP {
            return Ok(exact::max_independent_set(g));
        }
        exact::max_independent_set_td(g, &ntd).map_err(|e| Error::OracleRefused {
            problem: "is".into(),
            vertices: g.n(),
            edges: g.m(),
            reason: e.to_string(),
        })
    }
}

impl Oracle for TdDpOracle {
    fn name(&self) -> String {
        "exact-dp".into()
    }

    fn size_cap(&self, kind: &ProblemKind) -> SizeCap {
        match kind {
            ProblemKind::VertexCover | ProblemKind::IndependentSet => SizeCap::UNBOUNDED,
            _ => brute_cap(kind),
        }
    }

    fn admits(&self, kind: &ProblemKind, g: &Graph) -> bool {
        match kind {
            ProblemKind::EdgeCliqueCover if g.is_triangle_free() => true,
            _ => self.size_cap(kind).admits(g),
        }
    }

    fn solve(&self, kind: &ProblemKind, g: &Graph, td: Option<&TreeDecomposition>) -> Result<Solution> {
        match kind {
            ProblemKind::IndependentSet => Ok(Solution::vertices(Self::dp_is(g, td)?)),
            ProblemKind::VertexCover => {
                let is = Self::dp_is(g, td)?;
                Ok(Solution::vertices(g.vertices().filter(|v| !is.contains(v)).collect()))
            }
            ProblemKind::EdgeCliqueCover if g.is_triangle_free() => {
                Ok(Solution::family(g.edges().map(|(u, v)| VertexSet::from([u, v])).collect()))
            }
            _ => exact::brute_force(kind, g),
        }
    }
}

/// Degrades an exact oracle to ratio `c`: minimisation answers are padded to
/// `floor(c * opt)`, maximisation answers truncated to `ceil(opt / c)`.
pub struct LossyOracle {
    inner: Arc<dyn Oracle>,
    c: f64,
}

impl LossyOracle {
    pub fn new(inner: Arc<dyn Oracle>, c: f64) -> Result<Self> {
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::invalid(format!("lossy ratio must be at least 1, got {c}")));
        }
        Ok(LossyOracle { inner, c })
    }
}

impl Oracle for LossyOracle {
    fn name(&self) -> String {
        format!("lossy:{}({})", self.c, self.inner.name())
    }

    fn declared_ratio(&self) -> f64 {
        self.c * self.inner.declared_ratio()
    }

    fn size_cap(&self, kind: &ProblemKind) -> SizeCap {
        self.inner.size_cap(kind)
    }

    fn admits(&self, kind: &ProblemKind, g: &Graph) -> bool {
        self.inner.admits(kind, g)
    }

    fn solve(&self, kind: &ProblemKind, g: &Graph, td: Option<&TreeDecomposition>) -> Result<Solution> {
        let sol = self.inner.solve(kind, g, td)?;
        Ok(degrade(kind, g, sol, self.c))
    }
}

/// Worsens a feasible solution by the factor `c` while keeping it feasible.
pub fn degrade(kind: &ProblemKind, g: &Graph, sol: Solution, c: f64) -> Solution {
    if sol.is_infeasible() {
        return sol;
    }
    let v = sol.value;
    match kind.direction() {
        Direction::Max => {
            let target = (v as f64 / c - 1e-9).ceil().max(0.0) as usize;
            match sol.payload {
                Payload::Vertices(s) => Solution::vertices(s.into_iter().take(target).collect()),
                Payload::Family(f) => Solution::family(f.into_iter().take(target).collect()),
                Payload::Edges(e) => Solution::edges(e.into_iter().take(target).collect()),
                Payload::Infeasible => Solution::infeasible(),
            }
        }
        Direction::Min => {
            let target = (c * v as f64 + 1e-9).floor() as usize;
            match sol.payload {
                Payload::Vertices(mut s) => {
                    let connected = *kind == ProblemKind::ConnectedVertexCover;
                    while s.len() < target {
                        let next = if connected {
                            g.vertices().find(|w| !s.contains(w) && g.neighbors(*w).any(|u| s.contains(&u)))
                        } else {
                            g.vertices().find(|w| !s.contains(w))
                        };
                        match next {
                            Some(w) => s.insert(w),
                            None => break,
                        };
                    }
                    Solution::vertices(s)
                }
                Payload::Edges(mut d) => {
                    for e in g.edges() {
                        if d.len() >= target {
                            break;
                        }
                        d.insert(e);
                    }
                    Solution::edges(d)
                }
                Payload::Family(mut f) => {
                    let present: BTreeSet<VertexSet> = f.iter().cloned().collect();
                    let extra = g
                        .edges()
                        .map(|(u, w)| VertexSet::from([u, w]))
                        .chain(g.vertices().map(|u| VertexSet::from([u])))
                        .filter(|s| !present.contains(s));
                    for s in extra {
                        if f.len() >= target {
                            break;
                        }
                        f.push(s);
                    }
                    Solution::family(f)
                }
                Payload::Infeasible => Solution::infeasible(),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCall {
    pub problem: String,
    pub vertices: usize,
    pub edges: usize,
    /// `None` when the oracle refused or failed.
    pub value: Option<usize>,
}

/// Every query that reached the oracle, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleAudit {
    pub calls: Vec<OracleCall>,
}

impl OracleAudit {
    pub fn num_calls(&self) -> usize {
        self.calls.len()
    }

    pub fn max_query_vertices(&self) -> usize {
        self.calls.iter().map(|c| c.vertices).max().unwrap_or(0)
    }

    pub fn max_query_edges(&self) -> usize {
        self.calls.iter().map(|c| c.edges).max().unwrap_or(0)
    }

    pub fn total_query_vertices(&self) -> usize {
        self.calls.iter().map(|c| c.vertices).sum()
    }
}

pub type AuditHandle = Arc<Mutex<OracleAudit>>;

/// Forwards every call to the inner oracle and records it.
pub struct AuditedOracle {
    inner: Arc<dyn Oracle>,
    audit: AuditHandle,
}

impl AuditedOracle {
    pub fn new(inner: Arc<dyn Oracle>) -> Self {
        AuditedOracle {
            inner,
            audit: Arc::new(Mutex::new(OracleAudit::default())),
        }
    }

    pub fn handle(&self) -> AuditHandle {
        Arc::clone(&self.audit)
    }

    pub fn snapshot(&self) -> OracleAudit {
        self.audit.lock().expect("audit lock poisoned").clone()
    }

    /// Clears the log, e.g. between repetitions that share one oracle.
    pub fn reset(&self) {
        self.audit.lock().expect("audit lock poisoned").calls.clear();
    }
}

impl Oracle for AuditedOracle {
    fn name(&self) -> String {
        self.inner.name()
    }

    fn declared_ratio(&self) -> f64 {
        self.inner.declared_ratio()
    }

    fn size_cap(&self, kind: &ProblemKind) -> SizeCap {
        self.inner.size_cap(kind)
    }

    fn admits(&self, kind: &ProblemKind, g: &Graph) -> bool {
        self.inner.admits(kind, g)
    }

    fn solve(&self, kind: &ProblemKind, g: &Graph, td: Option<&TreeDecomposition>) -> Result<Solution> {
        let out = self.inner.solve(kind, g, td);
        self.audit.lock().expect("audit lock poisoned").calls.push(OracleCall {
            problem: kind.name(),
            vertices: g.n(),
            edges: g.m(),
            value: out.as_ref().ok().map(|s| s.value),
        });
        out
    }
}

/// `exact-dp`, `exact-bf`, or `lossy:<c>` (exact-dp degraded by `c`).
pub fn oracle_from_name(name: &str) -> Result<Arc<dyn Oracle>> {
    match name {
        "exact-dp" => Ok(Arc::new(TdDpOracle)),
        "exact-bf" | "brute-force" => Ok(Arc::new(BruteForceOracle)),
        _ => match name.strip_prefix("lossy:") {
            Some(c) => {
                let c: f64 = c
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad lossy ratio in '{name}'")))?;
                Ok(Arc::new(LossyOracle::new(Arc::new(TdDpOracle), c)?))
            }
            None => Err(Error::invalid(format!("unknown oracle '{name}'"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::is_feasible;

    #[test]
    fn lossy_padding_keeps_feasibility() {
        let g = Graph::from_edges([], [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let exact = BruteForceOracle;
        for name in ["vc", "cvc", "eds", "fvs", "ecc", "cc", "is", "hpack:p3"] {
            let kind = ProblemKind::parse(name).unwrap();
            let s = exact.solve(&kind, &g, None).unwrap();
            let d = degrade(&kind, &g, s.clone(), 1.5);
            assert!(is_feasible(&kind, &g, &d), "{name}");
            match kind.direction() {
                Direction::Min => assert!(d.value as f64 <= 1.5 * s.value as f64),
                Direction::Max => assert!(d.value as f64 * 1.5 >= s.value as f64),
            }
        }
    }

    #[test]
    fn audit_is_transparent() {
        let g = Graph::from_edges([], [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let audited = AuditedOracle::new(Arc::new(TdDpOracle));
        let a = audited.solve(&ProblemKind::VertexCover, &g, None).unwrap();
        let b = TdDpOracle.solve(&ProblemKind::VertexCover, &g, None).unwrap();
        assert_eq!(a, b);
        let snap = audited.snapshot();
        assert_eq!(snap.num_calls(), 1);
        assert_eq!(snap.max_query_vertices(), 4);
    }

    #[test]
    fn names() {
        assert!(oracle_from_name("exact-dp").is_ok());
        assert!(oracle_from_name("lossy:1.5").unwrap().declared_ratio() == 1.5);
        assert!(oracle_from_name("lossy:0.5").is_err());
        assert!(oracle_from_name("magic").is_err());
    }
}
