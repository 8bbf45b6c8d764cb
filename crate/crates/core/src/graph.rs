//! Simple undirected graphs with stable vertex identities.
//!
//! Every surgery returns a new [`Graph`] and keeps the identifiers of the
//! surviving vertices, so a solution computed on a piece of a graph is a
//! solution fragment of the parent graph without any relabelling.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type VertexSet = BTreeSet<Vertex>;

/// Unordered vertex pair, always stored with the smaller endpoint first.
pub type Edge = (Vertex, Vertex);

pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Vertex, VertexSet>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from a vertex list and an edge list.
    ///
    /// Endpoints that are not in `vertices` are added. Self-loops and
    /// repeated edges are rejected.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (u, v) in edges {
            g.add_vertex(u);
            g.add_vertex(v);
            if !g.add_edge(u, v)? {
                return Err(Error::invalid(format!("duplicate edge {{{u},{v}}}")));
            }
        }
        Ok(g)
    }

    /// Edgeless graph on `0..n`.
    pub fn edgeless(n: u32) -> Self {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, VertexSet::new());
        true
    }

    /// Inserts `{u, v}`; returns `false` when the edge was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        if u == v {
            return Err(Error::invalid(format!("self-loop on vertex {u}")));
        }
        if !self.adj.contains_key(&u) || !self.adj.contains_key(&v) {
            return Err(Error::invalid(format!("edge {{{u},{v}}} has an unknown endpoint")));
        }
        let fresh = self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        if fresh {
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.adj.keys().next_back().copied()
    }

    /// Edges in lexicographic order, smaller endpoint first.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flat_map(|ns| ns.iter().copied())
    }

    pub fn neighbor_set(&self, v: Vertex) -> Option<&VertexSet> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, |ns| ns.len())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|ns| ns.contains(&v))
    }

    fn check_subset(&self, s: &VertexSet) -> Result<()> {
        match s.iter().find(|v| !self.contains(**v)) {
            Some(v) => Err(Error::invalid(format!("vertex {v} is not in the graph"))),
            None => Ok(()),
        }
    }

    /// `G[S]`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        self.check_subset(s)?;
        Ok(self.induced_unchecked(s))
    }

    pub(crate) fn induced_unchecked(&self, s: &VertexSet) -> Graph {
        let mut adj = BTreeMap::new();
        let mut twice = 0;
        for &v in s {
            let Some(ns) = self.adj.get(&v) else { continue };
            let kept: VertexSet = if ns.len() < s.len() {
                ns.iter().filter(|u| s.contains(u)).copied().collect()
            } else {
                s.iter().filter(|u| ns.contains(u)).copied().collect()
            };
            twice += kept.len();
            adj.insert(v, kept);
        }
        Graph {
            adj,
            edge_count: twice / 2,
        }
    }

    /// `G - X`.
    pub fn remove_vertices(&self, x: &VertexSet) -> Result<Graph> {
        self.check_subset(x)?;
        let keep: VertexSet = self.vertices().filter(|v| !x.contains(v)).collect();
        Ok(self.induced_unchecked(&keep))
    }

    /// Deletes every edge with both endpoints in `x`; the vertex set is unchanged.
    pub fn delete_edges_within(&self, x: &VertexSet) -> Result<Graph> {
        self.check_subset(x)?;
        let mut g = self.clone();
        for &u in x {
            let inside: Vec<Vertex> = g.adj[&u].iter().filter(|w| x.contains(w)).copied().collect();
            for w in inside {
                if g.adj.get_mut(&u).unwrap().remove(&w) {
                    g.adj.get_mut(&w).unwrap().remove(&u);
                    g.edge_count -= 1;
                }
            }
        }
        Ok(g)
    }

    /// Identifies all vertices of `x` into the single vertex `z`.
    ///
    /// `z` may be a member of `x` but must not collide with any vertex that
    /// survives the operation. Loops and parallel edges are collapsed.
    pub fn identify_vertices(&self, x: &VertexSet, z: Vertex) -> Result<Graph> {
        if x.is_empty() {
            return Err(Error::invalid("cannot identify an empty vertex set"));
        }
        self.check_subset(x)?;
        if self.contains(z) && !x.contains(&z) {
            return Err(Error::invalid(format!("vertex {z} collides with a surviving vertex")));
        }
        let mut z_neighbors = VertexSet::new();
        for &u in x {
            z_neighbors.extend(self.adj[&u].iter().filter(|w| !x.contains(w)));
        }
        let mut g = Graph::new();
        for v in self.vertices().filter(|v| !x.contains(v)) {
            g.add_vertex(v);
        }
        g.add_vertex(z);
        for (u, v) in self.edges() {
            if !x.contains(&u) && !x.contains(&v) {
                g.add_edge(u, v)?;
            }
        }
        for w in z_neighbors {
            g.add_edge(z, w)?;
        }
        Ok(g)
    }

    /// Connected components, ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen.contains(&s) {
                continue;
            }
            let comp = self.reachable_from(s, |_| true);
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `start` through vertices accepted by `allow`.
    pub(crate) fn reachable_from(&self, start: Vertex, allow: impl Fn(Vertex) -> bool) -> VertexSet {
        let mut seen = VertexSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if allow(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// True for graphs with exactly one component. The empty graph is not connected.
    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => false,
            Some(s) => self.reachable_from(s, |_| true).len() == self.n(),
        }
    }

    /// Whether `G[s]` is connected; the empty set counts as connected.
    pub fn induces_connected(&self, s: &VertexSet) -> bool {
        match s.iter().next() {
            None => true,
            Some(&start) => self.reachable_from(start, |w| s.contains(&w)).len() == s.len(),
        }
    }

    pub fn is_vertex_cover(&self, s: &VertexSet) -> bool {
        self.edges().all(|(u, v)| s.contains(&u) || s.contains(&v))
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|&v| self.neighbors(v).all(|w| !s.contains(&w)))
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter()
            .all(|&u| s.iter().all(|&v| u == v || self.has_edge(u, v)))
    }

    /// True when the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        self.m() + self.connected_components().len() == self.n()
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges()
            .all(|(u, v)| self.adj[&u].iter().all(|w| *w == v || !self.adj[&v].contains(w)))
    }

    /// All triangles `[a, b, c]` with `a < b < c`, in lexicographic order.
    pub fn triangles(&self) -> Vec<[Vertex; 3]> {
        let mut out = Vec::new();
        for (a, b) in self.edges() {
            for &c in self.adj[&b].range(b + 1..) {
                if self.adj[&a].contains(&c) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// Disjoint union with `other`; fails if the vertex sets overlap.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        if other.vertices().any(|v| self.contains(v)) {
            return Err(Error::invalid("disjoint union of overlapping graphs"));
        }
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Copy of the graph with every vertex id shifted by `offset`.
    pub fn shifted(&self, offset: Vertex) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(v + offset);
        }
        for (u, v) in self.edges() {
            g.add_edge(u + offset, v + offset).expect("shift preserves simplicity");
        }
        g
    }
}

/// Compact bitmask view of a small graph, used by exhaustive searches.
#[derive(Clone, Debug)]
pub(crate) struct MaskGraph {
    pub labels: Vec<Vertex>,
    pub adj: Vec<u64>,
}

impl MaskGraph {
    pub fn new(g: &Graph) -> Self {
        assert!(g.n() <= 64, "mask graphs hold at most 64 vertices");
        let labels: Vec<Vertex> = g.vertices().collect();
        let index: BTreeMap<Vertex, usize> =
            labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = labels
            .iter()
            .map(|&v| g.neighbors(v).fold(0u64, |acc, w| acc | 1 << index[&w]))
            .collect();
        MaskGraph { labels, adj }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn to_set(&self, mask: u64) -> VertexSet {
        (0..self.n())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.labels[i])
            .collect()
    }

    /// `G[mask]` is connected (the empty mask counts as connected).
    pub fn connected(&self, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        let mut seen = mask & mask.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[i] & mask & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == mask
    }
}
