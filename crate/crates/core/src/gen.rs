//! Seeded generators for partial k-trees together with a width-k decomposition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::td::TreeDecomposition;

/// A random partial k-tree on `0..n` and a decomposition of width exactly `k`.
///
/// Starts from a `(k+1)`-clique and attaches every further vertex to a random
/// k-clique of an existing bag. Edges outside the seed clique survive with
/// probability `p`.
pub fn partial_ktree(n: usize, k: usize, p: f64, seed: u64) -> Result<(Graph, TreeDecomposition)> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if n <= k {
        return Err(Error::invalid(format!("need more than k = {k} vertices, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    for v in 0..n as Vertex {
        g.add_vertex(v);
    }
    let seed_bag: VertexSet = (0..=k as Vertex).collect();
    for a in 0..=k as Vertex {
        for b in a + 1..=k as Vertex {
            g.add_edge(a, b)?;
        }
    }
    let mut bags = vec![seed_bag];
    let mut tree = Vec::new();
    for v in (k + 1) as Vertex..n as Vertex {
        let host = rng.random_range(0..bags.len());
        let mut clique: Vec<Vertex> = bags[host].iter().copied().collect();
        clique.remove(rng.random_range(0..clique.len()));
        for &u in &clique {
            if rng.random_bool(p) {
                g.add_edge(u, v)?;
            }
        }
        let mut bag: VertexSet = clique.into_iter().collect();
        bag.insert(v);
        tree.push((host, bags.len()));
        bags.push(bag);
    }
    let td = TreeDecomposition::new(bags, &tree)?;
    Ok((g, td))
}

/// Like [`partial_ktree`] but retries derived seeds until the graph is connected.
pub fn connected_partial_ktree(n: usize, k: usize, p: f64, seed: u64) -> Result<(Graph, TreeDecomposition)> {
    for attempt in 0..10_000u64 {
        let s = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let (g, td) = partial_ktree(n, k, p, s)?;
        if g.is_connected() {
            return Ok((g, td));
        }
    }
    Err(Error::invalid(format!("no connected sample for n={n}, k={k}, p={p}")))
}
