//! Polynomial-time approximation subroutines.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, Vertex, VertexSet};

/// Greedy maximal matching, scanning edges in lexicographic order.
///
/// The greedy choice on an edge depends only on earlier edges sharing an
/// endpoint, so the result on a disjoint union is the union of the results.
pub fn maximal_matching(g: &Graph) -> Vec<Edge> {
    let mut matched = VertexSet::new();
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if !matched.contains(&u) && !matched.contains(&v) {
            matched.insert(u);
            matched.insert(v);
            out.push((u, v));
        }
    }
    out
}

/// Endpoints of a maximal matching: a vertex cover of size at most twice optimal.
pub fn vc_2approx(g: &Graph) -> VertexSet {
    maximal_matching(g).into_iter().flat_map(|(u, v)| [u, v]).collect()
}

/// A maximal matching is an edge dominating set of size at most twice optimal.
pub fn eds_2approx(g: &Graph) -> BTreeSet<Edge> {
    maximal_matching(g).into_iter().collect()
}

/// Hopcroft-Karp on a bipartite graph given as left adjacency lists.
/// Returns the partner of every left vertex.
pub fn bipartite_matching(left: usize, right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let mut ml: Vec<Option<usize>> = vec![None; left];
    let mut mr: Vec<Option<usize>> = vec![None; right];
    let mut dist = vec![INF; left];
    loop {
        let mut queue = VecDeque::new();
        for u in 0..left {
            if ml[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                match mr[w] {
                    None => found = true,
                    Some(p) if dist[p] == INF => {
                        dist[p] = dist[u] + 1;
                        queue.push_back(p);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        // iterative layered augmenting search
        let mut next = vec![0usize; left];
        for s in 0..left {
            if ml[s].is_some() {
                continue;
            }
            let mut path: Vec<usize> = vec![s];
            while let Some(&u) = path.last() {
                if next[u] == adj[u].len() {
                    dist[u] = INF;
                    path.pop();
                    continue;
                }
                let w = adj[u][next[u]];
                next[u] += 1;
                match mr[w] {
                    None => {
                        // augment along the path
                        let mut w = w;
                        for &x in path.iter().rev() {
                            let prev = ml[x];
                            ml[x] = Some(w);
                            mr[w] = Some(x);
                            match prev {
                                Some(p) => w = p,
                                None => break,
                            }
                        }
                        path.clear();
                    }
                    Some(p) if dist[p] == dist[u] + 1 => path.push(p),
                    _ => {}
                }
            }
        }
    }
    ml
}

/// Half-integral optimum of the vertex cover LP, split by value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtPartition {
    pub v0: VertexSet,
    pub v_half: VertexSet,
    pub v1: VertexSet,
}

impl NtPartition {
    /// LP optimum, in half units.
    pub fn lp_half_units(&self) -> usize {
        2 * self.v1.len() + self.v_half.len()
    }

    pub fn lp_value(&self) -> f64 {
        self.lp_half_units() as f64 / 2.0
    }
}

/// Optimal half-integral LP solution via a minimum vertex cover of the
/// bipartite double cover (Konig's theorem).
pub fn nt_partition(g: &Graph) -> NtPartition {
    let verts: Vec<Vertex> = g.vertices().collect();
    let index: BTreeMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();
    let adj: Vec<Vec<usize>> = verts.iter().map(|&v| g.neighbors(v).map(|w| index[&w]).collect()).collect();
    let ml = bipartite_matching(n, n, &adj);
    let mut mr = vec![None; n];
    for (u, w) in ml.iter().enumerate() {
        if let Some(w) = w {
            mr[*w] = Some(u);
        }
    }
    // alternating reachability from free left vertices
    let mut zl = vec![false; n];
    let mut zr = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&u| ml[u].is_none()).collect();
    for &u in &queue {
        zl[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !zr[w] {
                zr[w] = true;
                if let Some(p) = mr[w] {
                    if !zl[p] {
                        zl[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
    }
    let mut part = NtPartition {
        v0: VertexSet::new(),
        v_half: VertexSet::new(),
        v1: VertexSet::new(),
    };
    for (i, &v) in verts.iter().enumerate() {
        // cover = (L \ Z) + (R & Z)
        match (!zl[i]) as u8 + zr[i] as u8 {
            0 => part.v0.insert(v),
            1 => part.v_half.insert(v),
            _ => part.v1.insert(v),
        };
    }
    part
}

/// Minimum-degree greedy independent set: at least `n / (d + 1)` vertices on
/// a `d`-degenerate graph, so an `(l+1)`-approximation at treewidth `l`.
pub fn degeneracy_is(g: &Graph) -> VertexSet {
    let mut deg: BTreeMap<Vertex, usize> = g.vertices().map(|v| (v, g.degree(v))).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = deg.iter().map(|(&v, &d)| (d, v)).collect();
    let mut out = VertexSet::new();
    while let Some((_, v)) = queue.pop_first() {
        deg.remove(&v);
        out.insert(v);
        let removed: Vec<Vertex> = g.neighbors(v).filter(|w| deg.contains_key(w)).collect();
        for &w in &removed {
            queue.remove(&(deg[&w], w));
            deg.remove(&w);
        }
        for &w in &removed {
            for x in g.neighbors(w) {
                if let Some(d) = deg.get_mut(&x) {
                    queue.remove(&(*d, x));
                    *d -= 1;
                    queue.insert((*d, x));
                }
            }
        }
    }
    out
}

fn tri_edges(t: &VertexSet) -> [Edge; 3] {
    let v: Vec<Vertex> = t.iter().copied().collect();
    [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])]
}

/// Greedy edge-disjoint triangle packing in lexicographic order. Maximal,
/// hence a 3-approximation.
pub fn greedy_triangle_packing(g: &Graph) -> Vec<VertexSet> {
    let mut used: BTreeSet<Edge> = BTreeSet::new();
    let mut out = Vec::new();
    for t in g.triangles() {
        let es = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
        if es.iter().all(|e| !used.contains(e)) {
            used.extend(es);
            out.push(t.into_iter().collect());
        }
    }
    out
}

/// Improves a packing with two local rules until neither applies: add any
/// triangle on unused edges, or replace one triangle by two that only clash
/// with it.
pub fn augment_triangle_packing(g: &Graph, packing: &[VertexSet]) -> Vec<VertexSet> {
    let mut pack: Vec<VertexSet> = packing.to_vec();
    loop {
        let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
        for (i, t) in pack.iter().enumerate() {
            for e in tri_edges(t) {
                owner.insert(e, i);
            }
        }
        let free = |t: &[Vertex; 3], owner: &BTreeMap<Edge, usize>| {
            [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])].iter().all(|e| !owner.contains_key(e))
        };
        if let Some(t) = g.triangles().into_iter().find(|t| free(t, &owner)) {
            pack.push(t.into_iter().collect());
            continue;
        }
        let mut swapped = false;
        'outer: for i in 0..pack.len() {
            let base = tri_edges(&pack[i]);
            let mut cands: Vec<[Vertex; 3]> = Vec::new();
            for &(a, b) in &base {
                let common: Vec<Vertex> = g
                    .neighbors(a)
                    .filter(|&c| g.has_edge(b, c) && !pack[i].contains(&c))
                    .collect();
                for c in common {
                    let mut t = [a, b, c];
                    t.sort_unstable();
                    let ok = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
                        .iter()
                        .all(|e| owner.get(e).is_none_or(|&o| o == i));
                    if ok && !cands.contains(&t) {
                        cands.push(t);
                    }
                }
            }
            for x in 0..cands.len() {
                for y in x + 1..cands.len() {
                    let ex = [(cands[x][0], cands[x][1]), (cands[x][0], cands[x][2]), (cands[x][1], cands[x][2])];
                    let ey = [(cands[y][0], cands[y][1]), (cands[y][0], cands[y][2]), (cands[y][1], cands[y][2])];
                    if ex.iter().all(|e| !ey.contains(e)) {
                        pack[i] = cands[x].into_iter().collect();
                        pack.push(cands[y].into_iter().collect());
                        swapped = true;
                        break 'outer;
                    }
                }
            }
        }
        if !swapped {
            return pack;
        }
    }
}

/// Internal vertices of a DFS tree: a connected vertex cover within twice the
/// optimum. `None` when the edges span more than one component.
pub fn cvc_2approx(g: &Graph) -> Option<VertexSet> {
    let nontrivial: Vec<VertexSet> = g.connected_components().into_iter().filter(|c| c.len() > 1).collect();
    match nontrivial.len() {
        0 => return Some(VertexSet::new()),
        1 => {}
        _ => return None,
    }
    let root = *nontrivial[0].first().unwrap();
    let mut internal = VertexSet::new();
    let mut seen = VertexSet::from([root]);
    let mut stack: Vec<(Vertex, Vec<Vertex>)> = vec![(root, g.neighbors(root).collect())];
    while let Some((v, pending)) = stack.last_mut() {
        let v = *v;
        match pending.iter().position(|w| !seen.contains(w)) {
            Some(i) => {
                let w = pending[i];
                pending.drain(..=i);
                seen.insert(w);
                internal.insert(v);
                stack.push((w, g.neighbors(w).collect()));
            }
            None => {
                stack.pop();
            }
        }
    }
    Some(internal)
}

/// Turns a connected vertex cover `s` of `G_t` (the graph `g` with `x`
/// identified into `z`) into a connected vertex cover of `g` containing `x`.
///
/// Starts from `(s - z) + x` and, while the induced subgraph is disconnected,
/// adds the smallest outside vertex adjacent to at least two of its components.
pub fn connectify_vertex_cover(g: &Graph, x: &VertexSet, s: &VertexSet, z: Option<Vertex>) -> Result<VertexSet> {
    let mut cur: VertexSet = s.iter().filter(|&&v| Some(v) != z).copied().collect();
    cur.extend(x.iter().copied());
    if let Some(v) = cur.iter().find(|v| !g.contains(**v)) {
        return Err(Error::invalid(format!("vertex {v} is not in the graph")));
    }
    loop {
        let comps = g.induced_unchecked(&cur).connected_components();
        if comps.len() <= 1 {
            return Ok(cur);
        }
        let label: BTreeMap<Vertex, usize> =
            comps.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&v| (v, i))).collect();
        let pick = g.vertices().filter(|v| !cur.contains(v)).find(|&w| {
            let touched: BTreeSet<usize> = g.neighbors(w).filter_map(|u| label.get(&u).copied()).collect();
            touched.len() >= 2
        });
        match pick {
            Some(w) => {
                cur.insert(w);
            }
            None => {
                return Err(Error::invariant(
                    "no vertex joins two components; cover or connectivity precondition failed",
                ))
            }
        }
    }
}

fn is_forest_after(g: &Graph, removed: &VertexSet) -> bool {
    g.remove_vertices(removed).map(|h| h.is_forest()).unwrap_or(false)
}

/// Local-ratio 2-approximation for feedback vertex set (semidisjoint cycles or
/// degree-weighted reductions, then reverse deletion).
pub fn fvs_2approx(g: &Graph) -> VertexSet {
    const TOL: f64 = 1e-9;
    let mut h = g.clone();
    let mut weight: BTreeMap<Vertex, f64> = g.vertices().map(|v| (v, 1.0)).collect();
    let mut stack: Vec<Vertex> = Vec::new();
    loop {
        // strip vertices of degree at most one
        loop {
            let low: VertexSet = h.vertices().filter(|&v| h.degree(v) <= 1).collect();
            if low.is_empty() {
                break;
            }
            h = h.remove_vertices(&low).unwrap();
        }
        if h.is_empty() {
            break;
        }
        let cycle = semidisjoint_cycle(&h);
        match cycle {
            Some(c) => {
                let gamma = c.iter().map(|v| weight[v]).fold(f64::INFINITY, f64::min);
                for v in &c {
                    *weight.get_mut(v).unwrap() -= gamma;
                }
            }
            None => {
                let gamma = h
                    .vertices()
                    .map(|v| weight[&v] / (h.degree(v) as f64 - 1.0))
                    .fold(f64::INFINITY, f64::min);
                for v in h.vertices() {
                    *weight.get_mut(&v).unwrap() -= gamma * (h.degree(v) as f64 - 1.0);
                }
            }
        }
        let zero: VertexSet = h.vertices().filter(|v| weight[v] <= TOL).collect();
        stack.extend(zero.iter().copied());
        h = h.remove_vertices(&zero).unwrap();
    }
    let mut f: VertexSet = stack.iter().copied().collect();
    for &v in stack.iter().rev() {
        f.remove(&v);
        if !is_forest_after(g, &f) {
            f.insert(v);
        }
    }
    f
}

/// A cycle in which every vertex but at most one has degree two (the graph has
/// minimum degree two).
fn semidisjoint_cycle(h: &Graph) -> Option<Vec<Vertex>> {
    let deg2: VertexSet = h.vertices().filter(|&v| h.degree(v) == 2).collect();
    let mut seen = VertexSet::new();
    for &s in &deg2 {
        if seen.contains(&s) {
            continue;
        }
        let comp = h.reachable_from(s, |w| deg2.contains(&w));
        seen.extend(comp.iter().copied());
        let outside: BTreeSet<Vertex> = comp
            .iter()
            .flat_map(|&v| h.neighbors(v))
            .filter(|w| !comp.contains(w))
            .collect();
        match outside.len() {
            0 => return Some(comp.into_iter().collect()),
            1 => {
                let mut c: Vec<Vertex> = comp.into_iter().collect();
                c.push(*outside.first().unwrap());
                return Some(c);
            }
            _ => {}
        }
    }
    None
}

/// Greedy maximal packing of vertex-disjoint copies of a connected pattern.
pub fn maximal_h_packing(g: &Graph, h: &Graph) -> Vec<VertexSet> {
    let k = h.n();
    let mut used = VertexSet::new();
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for v in g.vertices() {
        if used.contains(&v) {
            continue;
        }
        if let Some(c) = find_copy(g, h, v, &used) {
            used.extend(c.iter().copied());
            out.push(c);
        }
    }
    out
}

fn find_copy(g: &Graph, h: &Graph, v: Vertex, used: &VertexSet) -> Option<VertexSet> {
    let k = h.n();
    // grow connected sets containing v from unused vertices
    let mut stack: Vec<VertexSet> = vec![VertexSet::from([v])];
    let mut tried: BTreeSet<VertexSet> = BTreeSet::new();
    while let Some(s) = stack.pop() {
        if s.len() == k {
            if crate::problem::hosts_pattern(&g.induced_unchecked(&s), h) {
                return Some(s);
            }
            continue;
        }
        let frontier: VertexSet = s
            .iter()
            .flat_map(|&u| g.neighbors(u))
            .filter(|w| !s.contains(w) && !used.contains(w))
            .collect();
        for w in frontier.into_iter().rev() {
            let mut t = s.clone();
            t.insert(w);
            if tried.insert(t.clone()) {
                stack.push(t);
            }
        }
    }
    None
}

/// All singletons; within `l + 1` of optimal since cliques have at most `l + 1` vertices.
pub fn clique_cover_trivial(g: &Graph) -> Vec<VertexSet> {
    g.vertices().map(|v| VertexSet::from([v])).collect()
}

/// Smallest-id neighbor of every non-isolated vertex of `x`.
pub(crate) fn incident_edges(g: &Graph, x: &VertexSet) -> BTreeSet<Edge> {
    x.iter().filter_map(|&v| g.neighbors(v).next().map(|w| edge(v, w))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;

    fn cycle(n: u32) -> Graph {
        Graph::from_edges([], (0..n).map(|i| edge(i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn nt_on_star_and_cycles() {
        let star = Graph::from_edges([], (1..6).map(|i| (0, i))).unwrap();
        let p = nt_partition(&star);
        assert_eq!(p.v1, VertexSet::from([0]));
        assert!(p.v_half.is_empty());
        let c5 = cycle(5);
        let p = nt_partition(&c5);
        assert_eq!(p.v_half.len(), 5);
        assert_eq!(p.lp_half_units(), 5);
        let k2 = Graph::from_edges([], [(0, 1)]).unwrap();
        assert_eq!(nt_partition(&k2).lp_half_units(), 2);
    }

    #[test]
    fn degeneracy_bound() {
        let c7 = cycle(7);
        let is = degeneracy_is(&c7);
        assert!(c7.is_independent(&is));
        assert!(is.len() >= 3);
    }

    #[test]
    fn triangle_swaps_improve() {
        // central triangle 0-1-2 with a triangle hanging on each edge
        let g = Graph::from_edges(
            [],
            [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5)],
        )
        .unwrap();
        let start = vec![VertexSet::from([0, 1, 2])];
        let better = augment_triangle_packing(&g, &start);
        assert_eq!(better.len(), 3);
    }

    #[test]
    fn cvc_examples() {
        let k2 = Graph::from_edges([], [(0, 1)]).unwrap();
        assert_eq!(cvc_2approx(&k2).unwrap().len(), 1);
        let p5 = Graph::from_edges([], [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let s = cvc_2approx(&p5).unwrap();
        assert_eq!(s, VertexSet::from([0, 1, 2, 3]));
        assert!(cvc_2approx(&Graph::from_edges([], [(0, 1), (2, 3)]).unwrap()).is_none());
    }

    #[test]
    fn connectify_paths() {
        let p5 = Graph::from_edges([], [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let out = connectify_vertex_cover(&p5, &VertexSet::from([0, 4]), &VertexSet::from([2, 99]), Some(99)).unwrap();
        assert!(p5.is_vertex_cover(&out) && p5.induces_connected(&out));
        assert!(out.contains(&0) && out.contains(&4));
    }

    #[test]
    fn fvs_examples() {
        let k4 = Graph::from_edges([], [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let f = fvs_2approx(&k4);
        assert!(k4.remove_vertices(&f).unwrap().is_forest());
        assert!(f.len() <= 4);
        let c6 = cycle(6);
        assert_eq!(fvs_2approx(&c6).len(), 1);
        assert!(fvs_2approx(&Graph::from_edges([], [(0, 1), (1, 2)]).unwrap()).is_empty());
    }

    #[test]
    fn h_packing_examples() {
        let p3 = crate::problem::pattern("p3").unwrap();
        let c6 = cycle(6);
        let pack = maximal_h_packing(&c6, &p3);
        assert_eq!(pack.len(), 2);
        assert!(pack.len() * 3 >= exact::max_h_packing(&c6, &p3).len());
    }
}
