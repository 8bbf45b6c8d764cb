//! Tree decompositions, their nice form, subconnected form and a min-fill heuristic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex, VertexSet};

/// A rooted tree of bags. Node ids are dense indices `0..len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub width: usize,
    pub nodes: usize,
    pub uncovered_vertices: Vec<Vertex>,
    pub uncovered_edges: Vec<Edge>,
    pub disconnected_traces: Vec<Vertex>,
    /// Bag members that are not vertices of the graph.
    pub unknown_vertices: Vec<Vertex>,
}

impl TreeDecomposition {
    /// Builds a decomposition from bags and undirected tree edges, rooted at node 0.
    pub fn new(bags: Vec<VertexSet>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = bags.len();
        if n == 0 {
            if !edges.is_empty() {
                return Err(Error::invalid("tree edges given without bags"));
            }
            return Ok(Self::from_parents(bags, Vec::new()));
        }
        if edges.len() != n - 1 {
            return Err(Error::invalid(format!(
                "{} tree edges for {n} bags; a tree needs {}",
                edges.len(),
                n - 1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("tree edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::invalid(format!("tree edge ({a},{a}) is a loop")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            adj[u].sort_unstable();
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("tree edges do not form a tree"));
        }
        Ok(Self::from_parents(bags, parent))
    }

    pub fn single_bag(bag: VertexSet) -> Self {
        Self::from_parents(vec![bag], vec![None])
    }

    /// `parent` must describe a rooted tree (exactly one `None`).
    pub(crate) fn from_parents(bags: Vec<VertexSet>, parent: Vec<Option<usize>>) -> Self {
        let mut children = vec![Vec::new(); bags.len()];
        let mut root = None;
        for (t, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(t),
                None => root = Some(t),
            }
        }
        TreeDecomposition {
            bags,
            parent,
            children,
            root,
        }
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn bag(&self, t: usize) -> &VertexSet {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Largest bag size minus one (0 for decompositions without vertices).
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn max_children(&self) -> usize {
        self.children.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// `(parent, child)` pairs.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(t, p)| p.map(|p| (p, t)))
            .collect()
    }

    /// Nodes in post-order (children before parents).
    pub fn post_order(&self) -> Vec<usize> {
        let Some(root) = self.root else { return Vec::new() };
        self.post_order_from(root)
    }

    pub(crate) fn post_order_from(&self, start: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(start, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.children[t].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn subtree_nodes(&self, t: usize) -> Vec<usize> {
        self.post_order_from(t)
    }

    /// `V_t`: the union of all bags in the subtree rooted at `t`.
    pub fn subtree_vertices(&self, t: usize) -> VertexSet {
        let mut out = VertexSet::new();
        for s in self.post_order_from(t) {
            out.extend(self.bags[s].iter().copied());
        }
        out
    }

    pub fn validate(&self, g: &Graph) -> ValidationReport {
        let mut report = ValidationReport {
            width: self.width(),
            nodes: self.len(),
            ..Default::default()
        };
        let mut trace: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        let mut unknown = VertexSet::new();
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if g.contains(v) {
                    trace.entry(v).or_default().push(t);
                } else {
                    unknown.insert(v);
                }
            }
        }
        report.unknown_vertices = unknown.into_iter().collect();
        report.uncovered_vertices = g.vertices().filter(|v| !trace.contains_key(v)).collect();
        for (u, v) in g.edges() {
            let (Some(tu), Some(tv)) = (trace.get(&u), trace.get(&v)) else {
                report.uncovered_edges.push((u, v));
                continue;
            };
            let (short, other) = if tu.len() <= tv.len() { (tu, v) } else { (tv, u) };
            if !short.iter().any(|&t| self.bags[t].contains(&other)) {
                report.uncovered_edges.push((u, v));
            }
        }
        for (&v, nodes) in &trace {
            // a vertex set of a rooted tree is connected iff exactly one member
            // has its parent outside the set
            let tops = nodes
                .iter()
                .filter(|&&t| self.parent[t].is_none_or(|p| !self.bags[p].contains(&v)))
                .count();
            if tops != 1 {
                report.disconnected_traces.push(v);
            }
        }
        report.valid = report.uncovered_vertices.is_empty()
            && report.uncovered_edges.is_empty()
            && report.disconnected_traces.is_empty()
            && report.unknown_vertices.is_empty();
        report
    }

    pub(crate) fn ensure_valid(&self, g: &Graph) -> Result<()> {
        let r = self.validate(g);
        if r.valid {
            return Ok(());
        }
        let mut msg = String::from("tree decomposition is not valid for the graph:");
        if let Some(v) = r.uncovered_vertices.first() {
            msg += &format!(" vertex {v} uncovered;");
        }
        if let Some((u, v)) = r.uncovered_edges.first() {
            msg += &format!(" edge {{{u},{v}}} uncovered;");
        }
        if let Some(v) = r.disconnected_traces.first() {
            msg += &format!(" trace of {v} disconnected;");
        }
        if let Some(v) = r.unknown_vertices.first() {
            msg += &format!(" unknown vertex {v};");
        }
        msg.pop();
        Err(Error::invalid(msg))
    }

    /// Intersects every bag with `keep`; valid for any subgraph living on `keep`.
    pub fn restrict(&self, keep: &VertexSet) -> TreeDecomposition {
        let bags = self
            .bags
            .iter()
            .map(|b| b.iter().filter(|v| keep.contains(v)).copied().collect())
            .collect();
        TreeDecomposition {
            bags,
            parent: self.parent.clone(),
            children: self.children.clone(),
            root: self.root,
        }
    }

    /// Drops the subtree below `t` (and `t` itself unless `keep_t`), then restricts
    /// the remaining bags to `keep`.
    pub(crate) fn remove_subtree(&self, t: usize, keep_t: bool, keep: &VertexSet) -> TreeDecomposition {
        let mut dropped = vec![false; self.len()];
        for s in self.post_order_from(t) {
            dropped[s] = true;
        }
        if keep_t {
            dropped[t] = false;
        }
        let mut index = vec![usize::MAX; self.len()];
        let mut bags = Vec::new();
        for s in 0..self.len() {
            if !dropped[s] {
                index[s] = bags.len();
                bags.push(self.bags[s].iter().filter(|v| keep.contains(v)).copied().collect());
            }
        }
        let mut parent = vec![None; bags.len()];
        for s in 0..self.len() {
            if dropped[s] {
                continue;
            }
            if let Some(p) = self.parent[s] {
                parent[index[s]] = Some(index[p]);
            }
        }
        TreeDecomposition::from_parents(bags, parent)
    }

    /// Replaces every occurrence of a member of `set` by `z`.
    pub(crate) fn replace_vertices(&self, set: &VertexSet, z: Vertex) -> TreeDecomposition {
        let bags = self
            .bags
            .iter()
            .map(|b| {
                let mut nb: VertexSet = b.iter().filter(|v| !set.contains(v)).copied().collect();
                if nb.len() != b.len() {
                    nb.insert(z);
                }
                nb
            })
            .collect();
        TreeDecomposition {
            bags,
            parent: self.parent.clone(),
            children: self.children.clone(),
            root: self.root,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    td: TreeDecomposition,
    kinds: Vec<NodeKind>,
}

/// `V_t` for every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeIndex {
    sets: Vec<VertexSet>,
}

impl SubtreeIndex {
    pub fn get(&self, t: usize) -> &VertexSet {
        &self.sets[t]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

struct NiceBuilder {
    bags: Vec<VertexSet>,
    kinds: Vec<NodeKind>,
    parent: Vec<Option<usize>>,
}

impl NiceBuilder {
    fn push(&mut self, bag: VertexSet, kind: NodeKind, children: &[usize]) -> usize {
        let id = self.bags.len();
        self.bags.push(bag);
        self.kinds.push(kind);
        self.parent.push(None);
        for &c in children {
            self.parent[c] = Some(id);
        }
        id
    }

    /// Walks from node `from` to a node with bag `target`: forgets first, then introduces.
    fn chain(&mut self, mut from: usize, target: &VertexSet) -> usize {
        let mut bag = self.bags[from].clone();
        let extra: Vec<Vertex> = bag.difference(target).copied().collect();
        for v in extra {
            bag.remove(&v);
            from = self.push(bag.clone(), NodeKind::Forget(v), &[from]);
        }
        let missing: Vec<Vertex> = target.difference(&bag).copied().collect();
        for v in missing {
            bag.insert(v);
            from = self.push(bag.clone(), NodeKind::Introduce(v), &[from]);
        }
        from
    }
}

/// Contracts tree edges whose bags are nested. Returns (bags, undirected adjacency).
fn compress(td: &TreeDecomposition) -> (Vec<VertexSet>, Vec<BTreeSet<usize>>) {
    let n = td.len();
    let mut bags = td.bags.clone();
    let mut adj = vec![BTreeSet::new(); n];
    for (p, c) in td.tree_edges() {
        adj[p].insert(c);
        adj[c].insert(p);
    }
    let mut alive = vec![true; n];
    let mut work: VecDeque<usize> = (0..n).collect();
    while let Some(u) = work.pop_front() {
        if !alive[u] {
            continue;
        }
        let target = adj[u]
            .iter()
            .copied()
            .find(|&w| bags[u].is_subset(&bags[w]) || bags[w].is_subset(&bags[u]));
        let Some(w) = target else { continue };
        // keep the larger bag in `keep`, fold `gone` into it
        let (keep, gone) = if bags[u].is_subset(&bags[w]) { (w, u) } else { (u, w) };
        let moved: Vec<usize> = adj[gone].iter().copied().filter(|&x| x != keep).collect();
        for x in moved {
            adj[x].remove(&gone);
            adj[x].insert(keep);
            adj[keep].insert(x);
        }
        adj[keep].remove(&gone);
        adj[gone].clear();
        alive[gone] = false;
        bags[gone].clear();
        work.push_back(keep);
        work.extend(adj[keep].iter().copied());
    }
    let index: Vec<usize> = {
        let mut next = 0;
        (0..n)
            .map(|t| {
                if alive[t] {
                    next += 1;
                    next - 1
                } else {
                    usize::MAX
                }
            })
            .collect()
    };
    let mut out_bags = Vec::new();
    let mut out_adj = Vec::new();
    for t in 0..n {
        if alive[t] {
            out_bags.push(std::mem::take(&mut bags[t]));
            out_adj.push(adj[t].iter().map(|&w| index[w]).collect());
        }
    }
    (out_bags, out_adj)
}

/// Converts a valid decomposition into nice form with the same width.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    td.ensure_valid(g)?;
    Ok(make_nice_unchecked(td))
}

pub(crate) fn make_nice_unchecked(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let (bags, adj) = compress(td);
    let mut b = NiceBuilder {
        bags: Vec::new(),
        kinds: Vec::new(),
        parent: Vec::new(),
    };
    if bags.is_empty() {
        b.push(VertexSet::new(), NodeKind::Leaf, &[]);
    } else {
        // orient the compressed tree from node 0
        let n = bags.len();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in adj[u].iter().rev() {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut kids = vec![Vec::new(); n];
        for &u in &order[1..] {
            kids[parent[u]].push(u);
        }
        let mut top = vec![usize::MAX; n];
        for &u in order.iter().rev() {
            let bag = &bags[u];
            let mut heads = Vec::new();
            for &c in &kids[u] {
                heads.push(b.chain(top[c], bag));
            }
            top[u] = match heads.len() {
                0 => {
                    let leaf = b.push(VertexSet::new(), NodeKind::Leaf, &[]);
                    b.chain(leaf, bag)
                }
                1 => heads[0],
                _ => {
                    let mut acc = heads[0];
                    for &h in &heads[1..] {
                        acc = b.push(bag.clone(), NodeKind::Join, &[acc, h]);
                    }
                    acc
                }
            };
        }
        b.chain(top[0], &VertexSet::new());
    }
    NiceTreeDecomposition {
        td: TreeDecomposition::from_parents(b.bags, b.parent),
        kinds: b.kinds,
    }
}

impl NiceTreeDecomposition {
    pub fn new(g: &Graph, td: &TreeDecomposition) -> Result<Self> {
        make_nice(g, td)
    }

    pub fn td(&self) -> &TreeDecomposition {
        &self.td
    }

    pub fn into_td(self) -> TreeDecomposition {
        self.td
    }

    pub fn len(&self) -> usize {
        self.td.len()
    }

    pub fn is_empty(&self) -> bool {
        self.td.is_empty()
    }

    pub fn root(&self) -> usize {
        self.td.root.expect("nice decompositions always have a root")
    }

    pub fn width(&self) -> usize {
        self.td.width()
    }

    pub fn bag(&self, t: usize) -> &VertexSet {
        self.td.bag(t)
    }

    pub fn children(&self, t: usize) -> &[usize] {
        self.td.children(t)
    }

    pub fn kind(&self, t: usize) -> NodeKind {
        self.kinds[t]
    }

    /// Checks the structural rules of the nice form.
    pub fn check_nice(&self) -> std::result::Result<(), String> {
        let root = self.root();
        if !self.bag(root).is_empty() {
            return Err("root bag is not empty".into());
        }
        for t in 0..self.len() {
            let ch = self.children(t);
            let bag = self.bag(t);
            let ok = match self.kinds[t] {
                NodeKind::Leaf => ch.is_empty() && bag.is_empty(),
                NodeKind::Join => {
                    ch.len() == 2 && ch.iter().all(|&c| self.bag(c) == bag)
                }
                NodeKind::Introduce(v) => {
                    ch.len() == 1 && bag.contains(&v) && {
                        let mut cb = self.bag(ch[0]).clone();
                        cb.insert(v);
                        !self.bag(ch[0]).contains(&v) && &cb == bag
                    }
                }
                NodeKind::Forget(v) => {
                    ch.len() == 1 && !bag.contains(&v) && {
                        let mut b2 = bag.clone();
                        b2.insert(v);
                        &b2 == self.bag(ch[0])
                    }
                }
            };
            if !ok {
                return Err(format!("node {t} violates the {:?} rule", self.kinds[t]));
            }
        }
        Ok(())
    }

    /// `|V_t \ X_t|` for every node, which in nice form is the number of forget
    /// nodes in the subtree of `t` (including `t`).
    pub fn local_sizes(&self) -> Vec<usize> {
        let mut size = vec![0; self.len()];
        for t in self.td.post_order() {
            let mut s: usize = self.children(t).iter().map(|&c| size[c]).sum();
            if matches!(self.kinds[t], NodeKind::Forget(_)) {
                s += 1;
            }
            size[t] = s;
        }
        size
    }

    /// `V_t \ X_t`.
    pub fn local_vertices(&self, t: usize) -> VertexSet {
        self.td
            .post_order_from(t)
            .into_iter()
            .filter_map(|s| match self.kinds[s] {
                NodeKind::Forget(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    pub fn subtree_vertices(&self, t: usize) -> VertexSet {
        let mut out = self.local_vertices(t);
        out.extend(self.bag(t).iter().copied());
        out
    }

    /// `V_t` for all nodes, computed bottom-up.
    pub fn subtree_index(&self) -> SubtreeIndex {
        let mut sets = vec![VertexSet::new(); self.len()];
        for t in self.td.post_order() {
            let mut s = self.bag(t).clone();
            for &c in self.children(t) {
                s.extend(sets[c].iter().copied());
            }
            sets[t] = s;
        }
        SubtreeIndex { sets }
    }
}

/// Descends from the root to a node whose local size `|V_t \ X_t|` lies in `[lo, hi]`.
///
/// At one-child nodes the local size drops by at most one and at join nodes it
/// splits between the children, so the descent never skips the window as long as
/// `hi >= 2*lo - 2`.
pub fn find_node_by_local_size(ntd: &NiceTreeDecomposition, lo: usize, hi: usize) -> Result<usize> {
    let sizes = ntd.local_sizes();
    let root = ntd.root();
    if lo == 0 {
        return Err(Error::invalid("window lower bound must be at least 1"));
    }
    if hi < lo || hi + 2 < 2 * lo {
        return Err(Error::invalid(format!("window [{lo},{hi}] is too narrow")));
    }
    if sizes[root] < lo {
        return Err(Error::invalid(format!(
            "graph has {} vertices, fewer than the window lower bound {lo}",
            sizes[root]
        )));
    }
    let mut t = root;
    while sizes[t] > hi {
        t = *ntd
            .children(t)
            .iter()
            .max_by(|&&a, &&b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
            .ok_or_else(|| Error::invariant("descent reached a leaf above the window"))?;
    }
    if sizes[t] < lo {
        return Err(Error::invariant(format!("descent overshot the window at node {t}")));
    }
    Ok(t)
}

/// Rebuilds the decomposition so that `G[V_t]` is connected for every node.
///
/// Post-order walk; a node whose subtree induces `p > 1` components is split into
/// `p` siblings, one per component, each keeping the bag part and the child
/// subtrees that live inside its component. Nodes with empty `V_t` are dropped.
pub fn make_subconnected(g: &Graph, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    if !g.is_connected() {
        return Err(Error::invalid("subconnected decompositions need a connected graph"));
    }
    td.ensure_valid(g)?;
    let mut bags: Vec<VertexSet> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    // per original node: the (new id, V) pairs of its copies
    let mut copies: Vec<Vec<(usize, VertexSet)>> = vec![Vec::new(); td.len()];
    for t in td.post_order() {
        let mut child_parts: Vec<(usize, VertexSet)> = Vec::new();
        for &c in td.children(t) {
            child_parts.append(&mut copies[c]);
        }
        let mut vt = td.bag(t).clone();
        for (_, s) in &child_parts {
            vt.extend(s.iter().copied());
        }
        if vt.is_empty() {
            continue;
        }
        let comps = g.induced_unchecked(&vt).connected_components();
        let mut mine = Vec::with_capacity(comps.len());
        for comp in comps {
            let id = bags.len();
            bags.push(td.bag(t).intersection(&comp).copied().collect());
            parent.push(None);
            for (cid, s) in &child_parts {
                if s.iter().next().is_some_and(|v| comp.contains(v)) {
                    parent[*cid] = Some(id);
                }
            }
            mine.push((id, comp));
        }
        copies[t] = mine;
    }
    let roots = parent.iter().filter(|p| p.is_none()).count();
    if roots != 1 {
        return Err(Error::invariant(format!("subconnected rebuild produced {roots} roots")));
    }
    Ok(TreeDecomposition::from_parents(bags, parent))
}

/// Greedy min-fill elimination (ties: smaller degree, then smaller id).
pub fn heuristic_td(g: &Graph) -> TreeDecomposition {
    if g.is_empty() {
        return TreeDecomposition::single_bag(VertexSet::new());
    }
    let mut adj: BTreeMap<Vertex, VertexSet> =
        g.vertices().map(|v| (v, g.neighbor_set(v).unwrap().clone())).collect();
    let fill = |adj: &BTreeMap<Vertex, VertexSet>, v: Vertex| -> usize {
        let ns: Vec<Vertex> = adj[&v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !adj[&a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut order = Vec::with_capacity(g.n());
    let mut neighborhoods = Vec::with_capacity(g.n());
    let mut fills: BTreeMap<Vertex, usize> = adj.keys().map(|&v| (v, fill(&adj, v))).collect();
    while !adj.is_empty() {
        let v = *adj
            .keys()
            .min_by_key(|&&v| (fills[&v], adj[&v].len(), v))
            .unwrap();
        let ns = adj.remove(&v).unwrap();
        fills.remove(&v);
        let list: Vec<Vertex> = ns.iter().copied().collect();
        for &a in &list {
            adj.get_mut(&a).unwrap().remove(&v);
            for &b in &list {
                if a != b {
                    adj.get_mut(&a).unwrap().insert(b);
                }
            }
        }
        // fill values change only within distance two of v
        let mut touched = VertexSet::new();
        for &a in &list {
            touched.insert(a);
            touched.extend(adj[&a].iter().copied());
        }
        for u in touched {
            fills.insert(u, fill(&adj, u));
        }
        order.push(v);
        neighborhoods.push(ns);
    }
    let position: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = order.len();
    let mut parent = vec![None; n];
    let mut last_root: Option<usize> = None;
    for i in (0..n).rev() {
        match neighborhoods[i].iter().map(|u| position[u]).min() {
            Some(p) => parent[i] = Some(p),
            None => {
                // separate components hang off the previous root to keep a single tree
                if let Some(r) = last_root {
                    parent[i] = Some(r);
                }
                last_root = Some(i);
            }
        }
    }
    let bags = order
        .iter()
        .zip(neighborhoods)
        .map(|(&v, mut ns)| {
            ns.insert(v);
            ns
        })
        .collect();
    TreeDecomposition::from_parents(bags, parent)
}
