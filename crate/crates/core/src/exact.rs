//! Exact solvers: exhaustive search for small graphs and dynamic programming
//! over nice tree decompositions for vertex cover and independent set.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, MaskGraph, Vertex, VertexSet};
use crate::problem::{hosts_pattern, ProblemKind, Solution};
use crate::td::{make_nice_unchecked, NiceTreeDecomposition, NodeKind, TreeDecomposition};

/// Largest vertex count handled by the vertex-indexed exhaustive searches.
pub const BRUTE_FORCE_VERTEX_CAP: usize = 18;
/// Largest edge count handled by clique cover over edges and triangle packing.
pub const BRUTE_FORCE_EDGE_CAP: usize = 30;
/// Widest decomposition the DP accepts.
pub const TD_DP_WIDTH_CAP: usize = 12;

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn non_isolated(g: &Graph) -> Graph {
    let keep: VertexSet = g.vertices().filter(|&v| g.degree(v) > 0).collect();
    g.induced_unchecked(&keep)
}

/// Maximum independent set by branching on a highest-degree vertex.
pub fn max_independent_set(g: &Graph) -> VertexSet {
    let mg = MaskGraph::new(g);
    let all = if mg.n() == 64 { u64::MAX } else { (1u64 << mg.n()) - 1 };
    let mut best = (0u32, 0u64);
    mis_branch(&mg, all, 0, &mut best);
    mg.to_set(best.1)
}

fn mis_branch(mg: &MaskGraph, mut cand: u64, mut chosen: u64, best: &mut (u32, u64)) {
    // take vertices of degree <= 1 greedily; always safe
    loop {
        let mut changed = false;
        for i in bits(cand) {
            if (mg.adj[i] & cand).count_ones() <= 1 {
                chosen |= 1 << i;
                cand &= !(mg.adj[i] | 1 << i);
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }
    let count = chosen.count_ones();
    if cand == 0 {
        if count > best.0 {
            *best = (count, chosen);
        }
        return;
    }
    if count + cand.count_ones() <= best.0 {
        return;
    }
    let v = bits(cand).max_by_key(|&i| ((mg.adj[i] & cand).count_ones(), usize::MAX - i)).unwrap();
    mis_branch(mg, cand & !(mg.adj[v] | 1 << v), chosen | 1 << v, best);
    mis_branch(mg, cand & !(1 << v), chosen, best);
}

pub fn min_vertex_cover(g: &Graph) -> VertexSet {
    let is = max_independent_set(g);
    g.vertices().filter(|v| !is.contains(v)).collect()
}

/// Minimum connected vertex cover, or `None` when the edges span several components.
pub fn min_connected_vertex_cover(g: &Graph) -> Option<VertexSet> {
    let mg = MaskGraph::new(g);
    let n = mg.n();
    let mut best: Option<u64> = None;
    for mask in 0u64..(1u64 << n) {
        if best.is_some_and(|b| b.count_ones() <= mask.count_ones()) {
            continue;
        }
        let covers = (0..n).all(|i| mask >> i & 1 == 1 || mg.adj[i] & !mask == 0);
        if covers && mg.connected(mask) {
            best = Some(mask);
        }
    }
    best.map(|m| mg.to_set(m))
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(u64) -> bool) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << n;
    let mut c = (1u64 << k) - 1;
    while c < limit {
        if f(c) {
            return;
        }
        let low = c & c.wrapping_neg();
        let r = c + low;
        c = (((r ^ c) >> 2) / low) | r;
    }
}

fn is_forest_mask(mg: &MaskGraph, keep: u64) -> bool {
    let edges: u32 = bits(keep).map(|i| (mg.adj[i] & keep).count_ones()).sum::<u32>() / 2;
    let mut comps = 0;
    let mut rest = keep;
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = mg.adj[i] & keep & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        rest &= !seen;
        comps += 1;
    }
    edges + comps == keep.count_ones()
}

pub fn min_feedback_vertex_set(g: &Graph) -> VertexSet {
    let mg = MaskGraph::new(g);
    let n = mg.n();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for k in 0..=n {
        let mut found = None;
        combinations(n, k, |c| {
            if is_forest_mask(&mg, all & !c) {
                found = Some(c);
                true
            } else {
                false
            }
        });
        if let Some(c) = found {
            return mg.to_set(c);
        }
    }
    unreachable!("removing every vertex leaves a forest")
}

/// Maximum matchings of every vertex subset, indexed by mask.
fn matching_table(mg: &MaskGraph) -> Vec<u8> {
    let n = mg.n();
    let mut nu = vec![0u8; 1 << n];
    for mask in 1usize..(1 << n) {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = nu[rest];
        for j in bits(mg.adj[i] & rest as u64) {
            best = best.max(1 + nu[rest & !(1 << j)]);
        }
        nu[mask] = best;
    }
    nu
}

fn matching_of(mg: &MaskGraph, nu: &[u8], mut mask: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        if nu[mask] == nu[rest] {
            mask = rest;
            continue;
        }
        let j = bits(mg.adj[i] & rest as u64)
            .find(|&j| 1 + nu[rest & !(1 << j)] == nu[mask])
            .expect("matching table is consistent");
        out.push((i, j));
        mask = rest & !(1 << j);
    }
    out
}

/// Maximum matching for small graphs.
pub fn max_matching_small(g: &Graph) -> BTreeSet<Edge> {
    let mg = MaskGraph::new(g);
    let nu = matching_table(&mg);
    matching_of(&mg, &nu, (1 << mg.n()) - 1)
        .into_iter()
        .map(|(i, j)| edge(mg.labels[i], mg.labels[j]))
        .collect()
}

/// Minimum edge dominating set: the minimum over vertex covers `C` without
/// isolated vertices of `|C| - nu(G[C])`.
pub fn min_edge_dominating_set(g: &Graph) -> BTreeSet<Edge> {
    let mg = MaskGraph::new(g);
    let n = mg.n();
    let nu = matching_table(&mg);
    let isolated: u64 = (0..n).filter(|&i| mg.adj[i] == 0).fold(0, |a, i| a | 1 << i);
    let mut best: Option<(usize, usize)> = None;
    for mask in 0usize..(1 << n) {
        let m = mask as u64;
        if m & isolated != 0 {
            continue;
        }
        let covers = (0..n).all(|i| m >> i & 1 == 1 || mg.adj[i] & !m == 0);
        if !covers {
            continue;
        }
        let cost = m.count_ones() as usize - nu[mask] as usize;
        if best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, mask));
        }
    }
    let (_, mask) = best.expect("the full non-isolated set is a cover");
    let matching = matching_of(&mg, &nu, mask);
    let mut covered = 0u64;
    let mut out = BTreeSet::new();
    for (i, j) in matching {
        covered |= 1 << i | 1 << j;
        out.insert(edge(mg.labels[i], mg.labels[j]));
    }
    for i in bits(mask as u64 & !covered) {
        let j = mg.adj[i].trailing_zeros() as usize;
        out.insert(edge(mg.labels[i], mg.labels[j]));
    }
    out
}

/// Maximal cliques (Bron-Kerbosch with pivoting), as masks.
fn maximal_cliques(mg: &MaskGraph) -> Vec<u64> {
    fn bk(mg: &MaskGraph, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = bits(p | x).max_by_key(|&u| (mg.adj[u] & p).count_ones()).unwrap();
        for v in bits(p & !mg.adj[pivot]) {
            bk(mg, r | 1 << v, p & mg.adj[v], x & mg.adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut out = Vec::new();
    let n = mg.n();
    if n > 0 {
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        bk(mg, 0, all, 0, &mut out);
    }
    out.sort_unstable();
    out
}

/// Exact set cover of `universe` by `sets` (all masks). Returns chosen indices.
fn exact_set_cover(universe: u64, sets: &[u64]) -> Vec<usize> {
    fn greedy(universe: u64, sets: &[u64]) -> Vec<usize> {
        let mut left = universe;
        let mut out = Vec::new();
        while left != 0 {
            let i = (0..sets.len()).max_by_key(|&i| ((sets[i] & left).count_ones(), usize::MAX - i)).unwrap();
            out.push(i);
            left &= !sets[i];
        }
        out
    }
    fn go(left: u64, sets: &[u64], max_size: u32, chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
        if left == 0 {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        let lower = left.count_ones().div_ceil(max_size) as usize;
        if chosen.len() + lower >= best.len() {
            return;
        }
        let e = bits(left)
            .min_by_key(|&e| sets.iter().filter(|&&s| s >> e & 1 == 1).count())
            .unwrap();
        let mut options: Vec<usize> = (0..sets.len()).filter(|&i| sets[i] >> e & 1 == 1).collect();
        options.sort_by_key(|&i| std::cmp::Reverse((sets[i] & left).count_ones()));
        for i in options {
            chosen.push(i);
            go(left & !sets[i], sets, max_size, chosen, best);
            chosen.pop();
        }
    }
    let mut best = greedy(universe, sets);
    let max_size = sets.iter().map(|s| s.count_ones()).max().unwrap_or(1).max(1);
    go(universe, sets, max_size, &mut Vec::new(), &mut best);
    best.sort_unstable();
    best
}

pub fn min_edge_clique_cover(g: &Graph) -> Vec<VertexSet> {
    let core = non_isolated(g);
    if core.m() == 0 {
        return Vec::new();
    }
    let mg = MaskGraph::new(&core);
    let edges: Vec<(usize, usize)> = (0..mg.n())
        .flat_map(|i| bits(mg.adj[i]).filter(move |&j| j > i).map(move |j| (i, j)))
        .collect();
    assert!(edges.len() <= 64, "edge clique cover search holds at most 64 edges");
    let cliques = maximal_cliques(&mg);
    let sets: Vec<u64> = cliques
        .iter()
        .map(|&c| {
            edges
                .iter()
                .enumerate()
                .filter(|(_, (i, j))| c >> i & 1 == 1 && c >> j & 1 == 1)
                .fold(0u64, |a, (k, _)| a | 1 << k)
        })
        .collect();
    let universe = if edges.len() == 64 { u64::MAX } else { (1u64 << edges.len()) - 1 };
    exact_set_cover(universe, &sets).into_iter().map(|i| mg.to_set(cliques[i])).collect()
}

pub fn min_clique_cover(g: &Graph) -> Vec<VertexSet> {
    if g.is_empty() {
        return Vec::new();
    }
    let mg = MaskGraph::new(g);
    let cliques = maximal_cliques(&mg);
    let universe = if mg.n() == 64 { u64::MAX } else { (1u64 << mg.n()) - 1 };
    // report a partition: later cliques drop vertices already covered
    let mut covered = 0u64;
    let mut out = Vec::new();
    for i in exact_set_cover(universe, &cliques) {
        let part = cliques[i] & !covered;
        covered |= part;
        out.push(mg.to_set(part));
    }
    out
}

pub fn max_edge_triangle_packing(g: &Graph) -> Vec<VertexSet> {
    let core = non_isolated(g);
    let tris = core.triangles();
    if tris.is_empty() {
        return Vec::new();
    }
    let mut index: BTreeMap<Edge, usize> = BTreeMap::new();
    for (u, v) in core.edges() {
        let k = index.len();
        index.insert((u, v), k);
    }
    assert!(index.len() <= 64, "triangle packing search holds at most 64 edges");
    let masks: Vec<u64> = tris
        .iter()
        .map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])].iter().fold(0, |a, e| a | 1 << index[e]))
        .collect();
    fn go(blocked: u64, masks: &[u64], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
        let avail: Vec<usize> = (0..masks.len()).filter(|&i| masks[i] & blocked == 0).collect();
        if avail.is_empty() {
            if chosen.len() > best.len() {
                *best = chosen.clone();
            }
            return;
        }
        let free = avail.iter().fold(0u64, |a, &i| a | masks[i]);
        let bound = (free.count_ones() / 3) as usize;
        if chosen.len() + bound.min(avail.len()) <= best.len() {
            return;
        }
        let e = free.trailing_zeros();
        for &i in avail.iter().filter(|&&i| masks[i] >> e & 1 == 1) {
            chosen.push(i);
            go(blocked | masks[i], masks, chosen, best);
            chosen.pop();
        }
        go(blocked | 1 << e, masks, chosen, best);
    }
    let mut best = Vec::new();
    go(0, &masks, &mut Vec::new(), &mut best);
    best.sort_unstable();
    best.into_iter().map(|i| tris[i].iter().copied().collect()).collect()
}

/// Maximum number of vertex-disjoint copies of `h`.
pub fn max_h_packing(g: &Graph, h: &Graph) -> Vec<VertexSet> {
    let mg = MaskGraph::new(g);
    let n = mg.n();
    let k = h.n();
    if k == 0 || k > n {
        return Vec::new();
    }
    // host sets grouped by their lowest vertex
    let mut by_low: Vec<Vec<u64>> = vec![Vec::new(); n];
    combinations(n, k, |c| {
        let set = mg.to_set(c);
        if hosts_pattern(&g.induced_unchecked(&set), h) {
            by_low[c.trailing_zeros() as usize].push(c);
        }
        false
    });
    let mut memo: Vec<u8> = vec![u8::MAX; 1 << n];
    fn f(mask: usize, by_low: &[Vec<u64>], memo: &mut [u8]) -> u8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask] != u8::MAX {
            return memo[mask];
        }
        let v = mask.trailing_zeros() as usize;
        let mut best = f(mask & !(1 << v), by_low, memo);
        for &c in &by_low[v] {
            if c as usize & !mask == 0 {
                best = best.max(1 + f(mask & !(c as usize), by_low, memo));
            }
        }
        memo[mask] = best;
        best
    }
    let mut mask = (1usize << n) - 1;
    let total = f(mask, &by_low, &mut memo);
    let mut out = Vec::with_capacity(total as usize);
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        let here = f(mask, &by_low, &mut memo);
        if f(mask & !(1 << v), &by_low, &mut memo) == here {
            mask &= !(1 << v);
            continue;
        }
        let c = *by_low[v]
            .iter()
            .find(|&&c| c as usize & !mask == 0 && 1 + f(mask & !(c as usize), &by_low, &mut memo) == here)
            .expect("memo table is consistent");
        out.push(mg.to_set(c));
        mask &= !(c as usize);
    }
    out
}

/// Why a graph is outside the exhaustive search range, if it is.
pub fn brute_force_refusal(kind: &ProblemKind, g: &Graph) -> Option<String> {
    match kind {
        ProblemKind::EdgeCliqueCover | ProblemKind::EdgeTrianglePacking => {
            (g.m() > BRUTE_FORCE_EDGE_CAP).then(|| format!("more than {BRUTE_FORCE_EDGE_CAP} edges"))
        }
        _ => (g.n() > BRUTE_FORCE_VERTEX_CAP).then(|| format!("more than {BRUTE_FORCE_VERTEX_CAP} vertices")),
    }
}

/// Exhaustive search for any supported problem.
pub fn brute_force(kind: &ProblemKind, g: &Graph) -> Result<Solution> {
    if let Some(reason) = brute_force_refusal(kind, g) {
        return Err(Error::OracleRefused {
            problem: kind.name(),
            vertices: g.n(),
            edges: g.m(),
            reason,
        });
    }
    Ok(match kind {
        ProblemKind::VertexCover => Solution::vertices(min_vertex_cover(g)),
        ProblemKind::IndependentSet => Solution::vertices(max_independent_set(g)),
        ProblemKind::ConnectedVertexCover => match min_connected_vertex_cover(g) {
            Some(s) => Solution::vertices(s),
            None => Solution::infeasible(),
        },
        ProblemKind::FeedbackVertexSet => Solution::vertices(min_feedback_vertex_set(g)),
        ProblemKind::EdgeDominatingSet => Solution::edges(min_edge_dominating_set(g)),
        ProblemKind::EdgeCliqueCover => Solution::family(min_edge_clique_cover(g)),
        ProblemKind::CliqueCover => Solution::family(min_clique_cover(g)),
        ProblemKind::EdgeTrianglePacking => Solution::family(max_edge_triangle_packing(g)),
        ProblemKind::HPacking(h) => Solution::family(max_h_packing(g, h)),
    })
}

/// Maximum independent set by DP over a nice tree decomposition.
pub fn max_independent_set_td(g: &Graph, ntd: &NiceTreeDecomposition) -> Result<VertexSet> {
    if ntd.width() > TD_DP_WIDTH_CAP {
        return Err(Error::invalid(format!(
            "decomposition width {} exceeds the DP cap {TD_DP_WIDTH_CAP}",
            ntd.width()
        )));
    }
    const NEG: i32 = i32::MIN / 4;
    let bag_list = |t: usize| -> Vec<Vertex> { ntd.bag(t).iter().copied().collect() };
    let mut tables: Vec<Vec<i32>> = vec![Vec::new(); ntd.len()];
    let order = ntd.td().post_order();
    for &t in &order {
        let bag = bag_list(t);
        let size = 1usize << bag.len();
        let table = match ntd.kind(t) {
            NodeKind::Leaf => vec![0],
            NodeKind::Introduce(v) => {
                let c = ntd.children(t)[0];
                let p = bag.iter().position(|&x| x == v).unwrap();
                let nbr: usize = bag
                    .iter()
                    .enumerate()
                    .filter(|(_, &u)| g.has_edge(u, v))
                    .fold(0, |a, (i, _)| a | 1 << i);
                let low = (1usize << p) - 1;
                (0..size)
                    .map(|m| {
                        let cm = (m & low) | ((m >> (p + 1)) << p);
                        if m >> p & 1 == 1 {
                            if m & nbr != 0 || tables[c][cm] == NEG {
                                NEG
                            } else {
                                tables[c][cm] + 1
                            }
                        } else {
                            tables[c][cm]
                        }
                    })
                    .collect()
            }
            NodeKind::Forget(v) => {
                let c = ntd.children(t)[0];
                let cbag = bag_list(c);
                let p = cbag.iter().position(|&x| x == v).unwrap();
                let low = (1usize << p) - 1;
                (0..size)
                    .map(|m| {
                        let c0 = (m & low) | ((m & !low) << 1);
                        tables[c][c0].max(tables[c][c0 | 1 << p])
                    })
                    .collect()
            }
            NodeKind::Join => {
                let (a, b) = (ntd.children(t)[0], ntd.children(t)[1]);
                (0..size)
                    .map(|m| {
                        if tables[a][m] == NEG || tables[b][m] == NEG {
                            NEG
                        } else {
                            tables[a][m] + tables[b][m] - m.count_ones() as i32
                        }
                    })
                    .collect()
            }
        };
        tables[t] = table;
    }
    let mut out = VertexSet::new();
    let mut stack = vec![(ntd.root(), 0usize)];
    while let Some((t, m)) = stack.pop() {
        let bag = bag_list(t);
        match ntd.kind(t) {
            NodeKind::Leaf => {}
            NodeKind::Introduce(v) => {
                let p = bag.iter().position(|&x| x == v).unwrap();
                if m >> p & 1 == 1 {
                    out.insert(v);
                }
                let low = (1usize << p) - 1;
                stack.push((ntd.children(t)[0], (m & low) | ((m >> (p + 1)) << p)));
            }
            NodeKind::Forget(v) => {
                let c = ntd.children(t)[0];
                let p = bag_list(c).iter().position(|&x| x == v).unwrap();
                let low = (1usize << p) - 1;
                let c0 = (m & low) | ((m & !low) << 1);
                let cm = if tables[c][c0 | 1 << p] > tables[c][c0] { c0 | 1 << p } else { c0 };
                stack.push((c, cm));
            }
            NodeKind::Join => {
                for &c in ntd.children(t) {
                    stack.push((c, m));
                }
            }
        }
    }
    Ok(out)
}

/// Uses `td` when it is valid for `g`, otherwise a min-fill decomposition.
pub(crate) fn nice_for(g: &Graph, td: Option<&TreeDecomposition>) -> NiceTreeDecomposition {
    match td {
        Some(td) if td.validate(g).valid => make_nice_unchecked(td),
        _ => make_nice_unchecked(&crate::td::heuristic_td(g)),
    }
}
