//! Approximate kernels: size-reducing preprocessing with a solution lifting map.

use crate::approx::{degeneracy_is, nt_partition};
use crate::graph::{Graph, VertexSet};
use crate::oracle::SizeCap;
use crate::problem::Solution;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Lift {
    Identity,
    /// Add these vertices to the reduced solution.
    AddVertices(VertexSet),
    /// Ignore the reduced solution and return this one.
    Replace(Solution),
}

/// A reduced instance produced by [`ApproximateKernel::reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub graph: Graph,
    pub budget: usize,
    /// The reduced graph is a subgraph of the input on a subset of its
    /// vertices, so a decomposition of the input restricts to it.
    pub subgraph: bool,
    lift: Lift,
}

impl Reduction {
    pub fn identity(g: &Graph, budget: usize) -> Self {
        Reduction {
            graph: g.clone(),
            budget,
            subgraph: true,
            lift: Lift::Identity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduced {
    Instance(Reduction),
    /// The kernel cannot shrink the input below `cap`.
    Refused { vertices: usize, cap: usize },
}

pub trait ApproximateKernel: Send + Sync {
    fn name(&self) -> &'static str;

    /// Factor lost by lifting.
    fn ratio(&self) -> f64 {
        1.0
    }

    /// Bound on the reduced size for a given budget; `None` if not guaranteed.
    fn size_bound(&self, budget: usize) -> Option<usize>;

    fn reduce(&self, g: &Graph, budget: usize) -> Reduced;

    fn lift(&self, reduction: &Reduction, sol: Solution) -> Solution {
        match &reduction.lift {
            Lift::Identity => sol,
            Lift::AddVertices(extra) => match sol.as_vertices() {
                Some(s) => {
                    let mut s = s.clone();
                    s.extend(extra.iter().copied());
                    Solution::vertices(s)
                }
                None => sol,
            },
            Lift::Replace(s) => s.clone(),
        }
    }
}

/// Hands the instance to the oracle unchanged when it fits under `cap`.
#[derive(Clone, Copy, Debug)]
pub struct PassThrough {
    pub cap: SizeCap,
}

impl ApproximateKernel for PassThrough {
    fn name(&self) -> &'static str {
        "pass-through"
    }

    fn size_bound(&self, _budget: usize) -> Option<usize> {
        None
    }

    fn reduce(&self, g: &Graph, budget: usize) -> Reduced {
        if self.cap.admits(g) {
            Reduced::Instance(Reduction::identity(g, budget))
        } else {
            Reduced::Refused {
                vertices: g.n(),
                cap: self.cap.headline(),
            }
        }
    }
}

/// LP-based vertex cover kernel: keep `G[V_half]`, add `V_1` when lifting.
/// When the LP already exceeds the budget every cover is capped anyway, so the
/// instance is trivialised and lifting returns `V_1 + V_half`.
#[derive(Clone, Copy, Debug, Default)]
pub struct NtKernel;

impl ApproximateKernel for NtKernel {
    fn name(&self) -> &'static str {
        "nt"
    }

    fn size_bound(&self, budget: usize) -> Option<usize> {
        Some(2 * budget)
    }

    fn reduce(&self, g: &Graph, budget: usize) -> Reduced {
        let p = nt_partition(g);
        if p.lp_half_units() > 2 * budget {
            let mut all = p.v1.clone();
            all.extend(p.v_half.iter().copied());
            return Reduced::Instance(Reduction {
                graph: Graph::new(),
                budget: 0,
                subgraph: true,
                lift: Lift::Replace(Solution::vertices(all)),
            });
        }
        Reduced::Instance(Reduction {
            graph: g.induced_unchecked(&p.v_half),
            budget: budget - p.v1.len().min(budget),
            subgraph: true,
            lift: Lift::AddVertices(p.v1),
        })
    }
}

/// Independent set: on graphs larger than `(budget+1)^2` a greedy independent
/// set already reaches the budget, so the instance becomes a trivial one.
#[derive(Clone, Copy, Debug, Default)]
pub struct IsTrivializer;

impl ApproximateKernel for IsTrivializer {
    fn name(&self) -> &'static str {
        "is-trivialize"
    }

    fn size_bound(&self, budget: usize) -> Option<usize> {
        Some((budget + 1) * (budget + 1))
    }

    fn reduce(&self, g: &Graph, budget: usize) -> Reduced {
        if g.n() > (budget + 1) * (budget + 1) {
            let is = degeneracy_is(g);
            if is.len() > budget {
                let keep: VertexSet = is.into_iter().take(budget + 1).collect();
                return Reduced::Instance(Reduction {
                    graph: Graph::edgeless(budget as u32 + 1),
                    budget,
                    subgraph: false,
                    lift: Lift::Replace(Solution::vertices(keep)),
                });
            }
        }
        Reduced::Instance(Reduction::identity(g, budget))
    }
}

/// Clique cover: above `budget*(budget+1)` vertices the singleton cover
/// already exceeds the budget.
#[derive(Clone, Copy, Debug, Default)]
pub struct CliqueCoverTrivializer;

impl ApproximateKernel for CliqueCoverTrivializer {
    fn name(&self) -> &'static str {
        "cc-trivialize"
    }

    fn size_bound(&self, budget: usize) -> Option<usize> {
        Some(budget * (budget + 1))
    }

    fn reduce(&self, g: &Graph, budget: usize) -> Reduced {
        if g.n() > budget * (budget + 1) {
            return Reduced::Instance(Reduction {
                graph: Graph::edgeless(budget as u32 + 1),
                budget,
                subgraph: false,
                lift: Lift::Replace(Solution::family(crate::approx::clique_cover_trivial(g))),
            });
        }
        Reduced::Instance(Reduction::identity(g, budget))
    }
}

/// Triangle packing cleanup: edges on no triangle and isolated vertices are
/// irrelevant. Refuses when the remainder is still above `cap`.
#[derive(Clone, Copy, Debug)]
pub struct TriangleSupport {
    pub cap: SizeCap,
}

impl ApproximateKernel for TriangleSupport {
    fn name(&self) -> &'static str {
        "triangle-support"
    }

    fn size_bound(&self, _budget: usize) -> Option<usize> {
        None
    }

    fn reduce(&self, g: &Graph, budget: usize) -> Reduced {
        let mut support = std::collections::BTreeSet::new();
        for t in g.triangles() {
            support.insert((t[0], t[1]));
            support.insert((t[0], t[2]));
            support.insert((t[1], t[2]));
        }
        let reduced = Graph::from_edges([], support).expect("triangle edges are simple");
        if self.cap.admits(&reduced) {
            Reduced::Instance(Reduction {
                graph: reduced,
                budget,
                subgraph: true,
                lift: Lift::Identity,
            })
        } else {
            Reduced::Refused {
                vertices: reduced.n(),
                cap: self.cap.headline(),
            }
        }
    }
}
