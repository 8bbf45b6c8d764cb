//! Problem descriptors, solutions and feasibility checks.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    VertexCover,
    IndependentSet,
    EdgeCliqueCover,
    EdgeTrianglePacking,
    ConnectedVertexCover,
    FeedbackVertexSet,
    EdgeDominatingSet,
    CliqueCover,
    /// Vertex-disjoint copies of a fixed connected pattern.
    HPacking(Graph),
}

impl ProblemKind {
    pub fn direction(&self) -> Direction {
        match self {
            ProblemKind::IndependentSet | ProblemKind::EdgeTrianglePacking | ProblemKind::HPacking(_) => {
                Direction::Max
            }
            _ => Direction::Min,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ProblemKind::VertexCover => "vc".into(),
            ProblemKind::IndependentSet => "is".into(),
            ProblemKind::EdgeCliqueCover => "ecc".into(),
            ProblemKind::EdgeTrianglePacking => "etp".into(),
            ProblemKind::ConnectedVertexCover => "cvc".into(),
            ProblemKind::FeedbackVertexSet => "fvs".into(),
            ProblemKind::EdgeDominatingSet => "eds".into(),
            ProblemKind::CliqueCover => "cc".into(),
            ProblemKind::HPacking(h) => match pattern_name(h) {
                Some(p) => format!("hpack:{p}"),
                None => "hpack".into(),
            },
        }
    }

    pub fn parse(name: &str) -> Result<ProblemKind> {
        Ok(match name {
            "vc" => ProblemKind::VertexCover,
            "is" => ProblemKind::IndependentSet,
            "ecc" => ProblemKind::EdgeCliqueCover,
            "etp" => ProblemKind::EdgeTrianglePacking,
            "cvc" => ProblemKind::ConnectedVertexCover,
            "fvs" => ProblemKind::FeedbackVertexSet,
            "eds" => ProblemKind::EdgeDominatingSet,
            "cc" => ProblemKind::CliqueCover,
            "hpack:k2" => ProblemKind::HPacking(pattern("k2")?),
            "hpack:k3" => ProblemKind::HPacking(pattern("k3")?),
            "hpack:p3" => ProblemKind::HPacking(pattern("p3")?),
            other => return Err(Error::invalid(format!("unknown problem '{other}'"))),
        })
    }

    /// Which payload shape solutions of this problem carry.
    pub fn payload_shape(&self) -> PayloadShape {
        match self {
            ProblemKind::VertexCover
            | ProblemKind::IndependentSet
            | ProblemKind::ConnectedVertexCover
            | ProblemKind::FeedbackVertexSet => PayloadShape::Vertices,
            ProblemKind::EdgeDominatingSet => PayloadShape::Edges,
            _ => PayloadShape::Family,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Pattern graphs for H-packing: `k2`, `k3` or `p3`.
pub fn pattern(name: &str) -> Result<Graph> {
    match name {
        "k2" => Graph::from_edges([], [(0, 1)]),
        "k3" => Graph::from_edges([], [(0, 1), (1, 2), (0, 2)]),
        "p3" => Graph::from_edges([], [(0, 1), (1, 2)]),
        other => Err(Error::invalid(format!("unknown pattern '{other}'"))),
    }
}

fn pattern_name(h: &Graph) -> Option<&'static str> {
    ["k2", "k3", "p3"].into_iter().find(|p| pattern(p).is_ok_and(|q| &q == h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PayloadShape {
    Vertices,
    Edges,
    Family,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Vertices(VertexSet),
    Edges(BTreeSet<Edge>),
    Family(Vec<VertexSet>),
    /// No feasible solution exists.
    Infeasible,
}

/// A solution together with its objective value. The value is always the
/// size of the payload; `Infeasible` evaluates to `usize::MAX`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub payload: Payload,
    pub value: usize,
}

impl Solution {
    pub fn vertices(s: VertexSet) -> Self {
        let value = s.len();
        Solution {
            payload: Payload::Vertices(s),
            value,
        }
    }

    pub fn edges(s: BTreeSet<Edge>) -> Self {
        let value = s.len();
        Solution {
            payload: Payload::Edges(s),
            value,
        }
    }

    pub fn family(s: Vec<VertexSet>) -> Self {
        let value = s.len();
        Solution {
            payload: Payload::Family(s),
            value,
        }
    }

    pub fn infeasible() -> Self {
        Solution {
            payload: Payload::Infeasible,
            value: usize::MAX,
        }
    }

    pub fn empty(shape: PayloadShape) -> Self {
        match shape {
            PayloadShape::Vertices => Solution::vertices(VertexSet::new()),
            PayloadShape::Edges => Solution::edges(BTreeSet::new()),
            PayloadShape::Family => Solution::family(Vec::new()),
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self.payload, Payload::Infeasible)
    }

    pub fn as_vertices(&self) -> Option<&VertexSet> {
        match &self.payload {
            Payload::Vertices(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_edges(&self) -> Option<&BTreeSet<Edge>> {
        match &self.payload {
            Payload::Edges(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_family(&self) -> Option<&[VertexSet]> {
        match &self.payload {
            Payload::Family(s) => Some(s),
            _ => None,
        }
    }

    /// Every vertex mentioned by the payload.
    pub fn touched_vertices(&self) -> VertexSet {
        match &self.payload {
            Payload::Vertices(s) => s.clone(),
            Payload::Edges(es) => es.iter().flat_map(|&(u, v)| [u, v]).collect(),
            Payload::Family(f) => f.iter().flatten().copied().collect(),
            Payload::Infeasible => VertexSet::new(),
        }
    }

    /// Union of two solutions of the same shape.
    pub fn merge(self, other: Solution) -> Result<Solution> {
        match (self.payload, other.payload) {
            (Payload::Vertices(mut a), Payload::Vertices(b)) => {
                a.extend(b);
                Ok(Solution::vertices(a))
            }
            (Payload::Edges(mut a), Payload::Edges(b)) => {
                a.extend(b);
                Ok(Solution::edges(a))
            }
            (Payload::Family(mut a), Payload::Family(b)) => {
                a.extend(b);
                Ok(Solution::family(a))
            }
            _ => Err(Error::invariant("merging solutions of different shapes")),
        }
    }

    /// The part of the solution that lives inside `keep`.
    pub fn restrict(&self, keep: &VertexSet) -> Solution {
        match &self.payload {
            Payload::Vertices(s) => Solution::vertices(s.intersection(keep).copied().collect()),
            Payload::Edges(es) => Solution::edges(
                es.iter()
                    .filter(|(u, v)| keep.contains(u) && keep.contains(v))
                    .copied()
                    .collect(),
            ),
            Payload::Family(f) => Solution::family(
                f.iter().filter(|s| s.iter().all(|v| keep.contains(v))).cloned().collect(),
            ),
            Payload::Infeasible => Solution::infeasible(),
        }
    }
}

/// Is `a` at least as good as `b` for the given direction?
pub fn at_least_as_good(dir: Direction, a: &Solution, b: &Solution) -> bool {
    match dir {
        Direction::Min => a.value <= b.value,
        Direction::Max => a.value >= b.value,
    }
}

/// Returns the better of two solutions, preferring `a` on ties.
pub fn better(dir: Direction, a: Solution, b: Solution) -> Solution {
    if at_least_as_good(dir, &a, &b) {
        a
    } else {
        b
    }
}

/// Checks feasibility, returning a human-readable reason on failure.
pub fn check_feasible(kind: &ProblemKind, g: &Graph, sol: &Solution) -> std::result::Result<(), String> {
    let vs = |s: &VertexSet| match s.iter().find(|v| !g.contains(**v)) {
        Some(v) => Err(format!("vertex {v} is not in the graph")),
        None => Ok(()),
    };
    match (&sol.payload, kind) {
        (Payload::Infeasible, ProblemKind::ConnectedVertexCover) => {
            if g.m() > 0 && g.connected_components().iter().filter(|c| c.len() > 1).count() > 1 {
                Ok(())
            } else {
                Err("graph has a connected vertex cover".into())
            }
        }
        (Payload::Infeasible, _) => Err("problem always has a feasible solution".into()),
        (Payload::Vertices(s), ProblemKind::VertexCover) => {
            vs(s)?;
            cover_check(g, s)
        }
        (Payload::Vertices(s), ProblemKind::ConnectedVertexCover) => {
            vs(s)?;
            cover_check(g, s)?;
            if g.induces_connected(s) {
                Ok(())
            } else {
                Err("cover does not induce a connected subgraph".into())
            }
        }
        (Payload::Vertices(s), ProblemKind::IndependentSet) => {
            vs(s)?;
            match g.edges().find(|(u, v)| s.contains(u) && s.contains(v)) {
                Some((u, v)) => Err(format!("edge {{{u},{v}}} inside the set")),
                None => Ok(()),
            }
        }
        (Payload::Vertices(s), ProblemKind::FeedbackVertexSet) => {
            vs(s)?;
            if g.remove_vertices(s).map_err(|e| e.to_string())?.is_forest() {
                Ok(())
            } else {
                Err("remaining graph has a cycle".into())
            }
        }
        (Payload::Edges(d), ProblemKind::EdgeDominatingSet) => {
            let mut touched = VertexSet::new();
            for &(u, v) in d {
                if !g.has_edge(u, v) {
                    return Err(format!("{{{u},{v}}} is not an edge"));
                }
                touched.insert(u);
                touched.insert(v);
            }
            match g.edges().find(|(u, v)| !touched.contains(u) && !touched.contains(v)) {
                Some((u, v)) => Err(format!("edge {{{u},{v}}} is not dominated")),
                None => Ok(()),
            }
        }
        (Payload::Family(f), ProblemKind::EdgeCliqueCover) => {
            let mut covered = BTreeSet::new();
            for s in f {
                clique_check(g, s)?;
                let list: Vec<Vertex> = s.iter().copied().collect();
                for (i, &a) in list.iter().enumerate() {
                    for &b in &list[i + 1..] {
                        covered.insert(edge(a, b));
                    }
                }
            }
            match g.edges().find(|e| !covered.contains(e)) {
                Some((u, v)) => Err(format!("edge {{{u},{v}}} is not covered")),
                None => Ok(()),
            }
        }
        (Payload::Family(f), ProblemKind::CliqueCover) => {
            let mut covered = VertexSet::new();
            for s in f {
                clique_check(g, s)?;
                covered.extend(s.iter().copied());
            }
            match g.vertices().find(|v| !covered.contains(v)) {
                Some(v) => Err(format!("vertex {v} is not covered")),
                None => Ok(()),
            }
        }
        (Payload::Family(f), ProblemKind::EdgeTrianglePacking) => {
            let mut used = BTreeSet::new();
            for s in f {
                if s.len() != 3 {
                    return Err(format!("{s:?} is not a triangle"));
                }
                clique_check(g, s)?;
                let t: Vec<Vertex> = s.iter().copied().collect();
                for e in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                    if !used.insert(e) {
                        return Err(format!("edge {e:?} used twice"));
                    }
                }
            }
            Ok(())
        }
        (Payload::Family(f), ProblemKind::HPacking(h)) => {
            let mut used = VertexSet::new();
            for s in f {
                vs(s)?;
                if s.len() != h.n() {
                    return Err(format!("{s:?} has the wrong size"));
                }
                if !hosts_pattern(&g.induced_unchecked(s), h) {
                    return Err(format!("{s:?} does not contain the pattern"));
                }
                for &v in s {
                    if !used.insert(v) {
                        return Err(format!("vertex {v} used twice"));
                    }
                }
            }
            Ok(())
        }
        _ => Err(format!("payload shape does not fit problem {kind}")),
    }
}

pub fn is_feasible(kind: &ProblemKind, g: &Graph, sol: &Solution) -> bool {
    check_feasible(kind, g, sol).is_ok()
}

fn cover_check(g: &Graph, s: &VertexSet) -> std::result::Result<(), String> {
    match g.edges().find(|(u, v)| !s.contains(u) && !s.contains(v)) {
        Some((u, v)) => Err(format!("edge {{{u},{v}}} is not covered")),
        None => Ok(()),
    }
}

fn clique_check(g: &Graph, s: &VertexSet) -> std::result::Result<(), String> {
    if s.is_empty() {
        return Err("empty clique".into());
    }
    if let Some(v) = s.iter().find(|v| !g.contains(**v)) {
        return Err(format!("vertex {v} is not in the graph"));
    }
    if g.is_clique(s) {
        Ok(())
    } else {
        Err(format!("{s:?} is not a clique"))
    }
}

/// Does `host` (on exactly `|V(h)|` vertices) contain `h` as a subgraph?
pub(crate) fn hosts_pattern(host: &Graph, h: &Graph) -> bool {
    let hv: Vec<Vertex> = h.vertices().collect();
    let gv: Vec<Vertex> = host.vertices().collect();
    if hv.len() != gv.len() || host.m() < h.m() {
        return false;
    }
    let mut perm: Vec<usize> = (0..gv.len()).collect();
    loop {
        let ok = h.edges().all(|(a, b)| {
            let ia = hv.iter().position(|&x| x == a).unwrap();
            let ib = hv.iter().position(|&x| x == b).unwrap();
            host.has_edge(gv[perm[ia]], gv[perm[ib]])
        });
        if ok {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
