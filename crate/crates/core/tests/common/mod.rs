#![allow(dead_code)]

use atk_core::graph::{Graph, Vertex, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) on `0..n`.
pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(0..n as Vertex, edges).unwrap()
}

/// G(n, p) with at most `max_m` edges, dropping the surplus at random.
pub fn gnp_capped(n: usize, p: f64, max_m: usize, rng: &mut ChaCha8Rng) -> Graph {
    let g = gnp(n, p, rng);
    if g.m() <= max_m {
        return g;
    }
    let mut edges: Vec<_> = g.edges().collect();
    while edges.len() > max_m {
        let i = rng.random_range(0..edges.len());
        edges.swap_remove(i);
    }
    Graph::from_edges(0..n as Vertex, edges).unwrap()
}

/// Random connected graph: a random spanning tree plus G(n, p) edges.
pub fn connected_gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = gnp(n, p, rng);
    for v in 1..n as Vertex {
        let u = rng.random_range(0..v);
        if !g.has_edge(u, v) {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

pub fn random_subset(g: &Graph, p: f64, rng: &mut ChaCha8Rng) -> VertexSet {
    g.vertices().filter(|_| rng.random_bool(p)).collect()
}

pub fn random_subset_at_most(g: &Graph, max: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    let mut vs: Vec<Vertex> = g.vertices().collect();
    let take = rng.random_range(0..=max.min(vs.len()));
    let mut out = VertexSet::new();
    for _ in 0..take {
        let i = rng.random_range(0..vs.len());
        out.insert(vs.swap_remove(i));
    }
    out
}

/// Smallest d such that every subgraph has a vertex of degree at most d.
pub fn degeneracy(g: &Graph) -> usize {
    let mut h = g.clone();
    let mut d = 0;
    while !h.is_empty() {
        let v = h.vertices().min_by_key(|&v| h.degree(v)).unwrap();
        d = d.max(h.degree(v));
        h = h.remove_vertices(&VertexSet::from([v])).unwrap();
    }
    d
}
