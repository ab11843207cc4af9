//! Exact minor containment by branch-set search.
//!
//! Pattern nodes are placed in BFS order. Each node gets a connected branch
//! set touching the set of its BFS parent; sets touching the parent are
//! enumerated once each by anchoring on their smallest frontier vertex. Nodes
//! that have no later neighbors and at most one earlier neighbor get singleton
//! sets, which loses nothing for minimal models. Paths, cycles and the
//! triangle with a pendant edge have direct structural routes.

use std::collections::HashSet;

use crate::certificate::{MinorWitness, SimpleCycle};
use crate::graph::{Graph, Vertex};
use crate::pattern::Pattern;

use super::cycles::{exact_find_cycle, find_long_cycle, find_simple_path};
use super::{local_adjacency, too_large, ExactError, ExactLimits};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(MinorWitness),
    Absent,
    /// The work cap was hit before the search finished.
    GaveUp,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MinorSearchOptions {
    /// Maximum number of candidate branch sets examined.
    pub work_cap: Option<u64>,
    /// Require the branch set of pattern node `.0` to contain vertex `.1`.
    pub root: Option<(usize, Vertex)>,
}

/// Exact minor test within the default size limits.
pub fn exact_has_minor(g: &Graph, h: &Pattern) -> Result<Option<MinorWitness>, ExactError> {
    exact_has_minor_with(g, h, &ExactLimits::default())
}

pub fn exact_has_minor_with(
    g: &Graph,
    h: &Pattern,
    limits: &ExactLimits,
) -> Result<Option<MinorWitness>, ExactError> {
    let limit = if h.is_forest() { limits.minor_tree_vertices } else { limits.minor_pattern_vertices };
    too_large("minor pattern", h.size, limit)?;
    if !has_structural_route(h) {
        too_large("minor host graph", g.n(), limits.minor_graph_vertices)?;
    }
    match search_minor(g, h, &MinorSearchOptions::default()) {
        SearchOutcome::Found(w) => Ok(Some(w)),
        SearchOutcome::Absent => Ok(None),
        SearchOutcome::GaveUp => unreachable!("uncapped search always finishes"),
    }
}

fn has_structural_route(h: &Pattern) -> bool {
    h.as_path().is_some() || h.as_cycle().is_some() || h.is_triangle_plus_edge()
}

/// Minor search without size limits, optionally capped.
pub fn search_minor(g: &Graph, h: &Pattern, opts: &MinorSearchOptions) -> SearchOutcome {
    if h.size == 0 {
        return SearchOutcome::Found(MinorWitness {
            pattern: h.clone(),
            branch_sets: Vec::new(),
            connecting_edges: Vec::new(),
            root: None,
        });
    }
    if opts.root.is_none() {
        if let Some(out) = structural(g, h) {
            return out;
        }
    }
    BranchSearch::new(g, h, opts).run()
}

fn structural(g: &Graph, h: &Pattern) -> Option<SearchOutcome> {
    if let Some(m) = h.as_path() {
        let out = match find_simple_path(g, m) {
            None => SearchOutcome::Absent,
            Some(path) => {
                // pattern path nodes may be numbered in any order
                let order = path_order(h);
                let mut sets = vec![Vec::new(); h.size];
                for (i, &node) in order.iter().enumerate() {
                    sets[node] = vec![path[i]];
                }
                SearchOutcome::Found(MinorWitness::from_branch_sets(g, h.clone(), sets)?)
            }
        };
        return Some(out);
    }
    if let Some(k) = h.as_cycle() {
        let out = match find_long_cycle(g, k) {
            None => SearchOutcome::Absent,
            Some(c) => {
                let order = cycle_order(h);
                let mut sets = vec![Vec::new(); k];
                for (i, &node) in order.iter().enumerate() {
                    sets[node] = if i + 1 < k { vec![c.vertices[i]] } else { c.vertices[i..].to_vec() };
                }
                SearchOutcome::Found(MinorWitness::from_branch_sets(g, h.clone(), sets)?)
            }
        };
        return Some(out);
    }
    if h.is_triangle_plus_edge() {
        for comp in g.components() {
            if comp.len() < 4 {
                continue;
            }
            let (sub, map) = g.induced(&comp);
            let Some(c) = exact_find_cycle(&sub) else { continue };
            let cyc = SimpleCycle::new(c.vertices.iter().map(|&v| map[v as usize - 1]).collect());
            if let Some(w) = paw_witness_from_cycle(g, &cyc.vertices) {
                return Some(SearchOutcome::Found(relabel_paw(g, h, w)?));
            }
        }
        return Some(SearchOutcome::Absent);
    }
    None
}

fn path_order(h: &Pattern) -> Vec<usize> {
    let adj = h.adjacency();
    let mut cur = (0..h.size).find(|&i| adj[i].len() <= 1).unwrap_or(0);
    let mut order = vec![cur];
    let mut prev = usize::MAX;
    while order.len() < h.size {
        let next = adj[cur].iter().copied().find(|&x| x != prev).expect("path pattern");
        prev = cur;
        cur = next;
        order.push(cur);
    }
    order
}

fn cycle_order(h: &Pattern) -> Vec<usize> {
    let adj = h.adjacency();
    let mut order = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    while order.len() < h.size {
        let next = adj[cur].iter().copied().find(|&x| x != prev && x != 0).expect("cycle pattern");
        prev = cur;
        cur = next;
        order.push(cur);
    }
    order
}

/// Maps the standard paw witness (triangle 0,1,2 and pendant 3 on 0) onto
/// the node numbering of `h`.
fn relabel_paw(g: &Graph, h: &Pattern, w: MinorWitness) -> Option<MinorWitness> {
    let deg = h.degrees();
    let hub = (0..4).find(|&i| deg[i] == 3)?;
    let pendant = (0..4).find(|&i| deg[i] == 1)?;
    let others: Vec<usize> = (0..4).filter(|&i| deg[i] == 2).collect();
    let mut sets = vec![Vec::new(); 4];
    sets[hub] = w.branch_sets[0].clone();
    sets[others[0]] = w.branch_sets[1].clone();
    sets[others[1]] = w.branch_sets[2].clone();
    sets[pendant] = w.branch_sets[3].clone();
    MinorWitness::from_branch_sets(g, h.clone(), sets)
}

/// Given a simple cycle of `g`, builds a triangle-plus-pendant witness from a
/// cycle vertex of degree above 2, or `None` if every cycle vertex has degree
/// 2 (the cycle is then a whole component). Node 0 is the degree-3 node and
/// node 3 the pendant.
pub fn paw_witness_from_cycle(g: &Graph, cycle: &[Vertex]) -> Option<MinorWitness> {
    let m = cycle.len();
    if m < 3 {
        return None;
    }
    let on_cycle: HashSet<Vertex> = cycle.iter().copied().collect();
    for (i, &x) in cycle.iter().enumerate() {
        if g.degree(x) <= 2 {
            continue;
        }
        let prev = cycle[(i + m - 1) % m];
        let next = cycle[(i + 1) % m];
        // rotate so that x comes first
        let rot: Vec<Vertex> = (0..m).map(|j| cycle[(i + j) % m]).collect();
        if let Some(&y) = g.neighbors(x).iter().find(|y| !on_cycle.contains(y)) {
            let split = 1 + (m - 1) / 2;
            let sets = vec![vec![x], rot[1..split].to_vec(), rot[split..].to_vec(), vec![y]];
            return MinorWitness::from_branch_sets(g, Pattern::triangle_plus_edge(), sets);
        }
        if let Some(&z) = g.neighbors(x).iter().find(|&&z| z != prev && z != next && z != x) {
            // chord x-z: one arc closes a triangle with the chord, the other
            // arc hangs off x as the pendant
            let zpos = rot.iter().position(|&v| v == z)?;
            let arc1 = rot[1..zpos].to_vec();
            let arc2 = rot[zpos + 1..].to_vec();
            let sets = vec![vec![x], vec![z], arc1, arc2];
            return MinorWitness::from_branch_sets(g, Pattern::triangle_plus_edge(), sets);
        }
    }
    None
}

/// Minimum number of edge deletions that make `g` free of `h`-minors.
pub fn exact_distance_to_minor_free(g: &Graph, h: &Pattern) -> Result<usize, ExactError> {
    let limits = ExactLimits::default();
    too_large("edge-subset enumeration", g.edge_count(), limits.distance_edges)?;
    let edges = g.edges();
    let m = edges.len();
    for r in 0..=m {
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            let mut sub = g.clone();
            for &i in &idx {
                sub.remove_edge(edges[i].u, edges[i].v);
            }
            if search_minor(&sub, h, &MinorSearchOptions::default()) == SearchOutcome::Absent {
                return Ok(r);
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    Ok(m)
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let r = idx.len();
    for i in (0..r).rev() {
        if idx[i] < m - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

const FREE: usize = usize::MAX;

enum Flow {
    Continue,
    Found,
    Stop,
}

struct BranchSearch<'a> {
    g: &'a Graph,
    pattern: &'a Pattern,
    adj: Vec<Vec<usize>>,
    hadj: Vec<Vec<usize>>,
    order: Vec<usize>,
    pos: Vec<usize>,
    bfs_parent: Vec<Option<usize>>,
    owner: Vec<usize>,
    sets: Vec<Vec<usize>>,
    free: usize,
    work: u64,
    cap: Option<u64>,
    root: Option<(usize, usize)>,
}

impl<'a> BranchSearch<'a> {
    fn new(g: &'a Graph, h: &'a Pattern, opts: &MinorSearchOptions) -> Self {
        let hadj = h.adjacency();
        let root = opts.root.map(|(node, v)| (node, v as usize - 1));
        let mut comps = h.components();
        // bigger components first; the rooted component leads
        comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
        if let Some((rn, _)) = root {
            if let Some(i) = comps.iter().position(|c| c.contains(&rn)) {
                let c = comps.remove(i);
                comps.insert(0, c);
            }
        }
        let mut order = Vec::with_capacity(h.size);
        let mut bfs_parent = vec![None; h.size];
        for comp in comps {
            let start = match root {
                Some((rn, _)) if comp.contains(&rn) => rn,
                _ => *comp.iter().max_by_key(|&&x| (hadj[x].len(), std::cmp::Reverse(x))).unwrap(),
            };
            let mut seen = HashSet::from([start]);
            let mut i = order.len();
            order.push(start);
            while i < order.len() {
                let x = order[i];
                let mut nb = hadj[x].clone();
                nb.sort_by_key(|&y| std::cmp::Reverse(hadj[y].len()));
                for y in nb {
                    if seen.insert(y) {
                        bfs_parent[y] = Some(x);
                        order.push(y);
                    }
                }
                i += 1;
            }
        }
        let mut pos = vec![0; h.size];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        BranchSearch {
            g,
            pattern: h,
            adj: local_adjacency(g),
            hadj,
            order,
            pos,
            bfs_parent,
            owner: vec![FREE; g.n()],
            sets: vec![Vec::new(); h.size],
            free: g.n(),
            work: 0,
            cap: opts.work_cap,
            root,
        }
    }

    fn run(mut self) -> SearchOutcome {
        if self.pattern.size > self.g.n() {
            return SearchOutcome::Absent;
        }
        match self.place(0) {
            Flow::Found => {
                let sets = self
                    .sets
                    .iter()
                    .map(|s| {
                        let mut v: Vec<Vertex> = s.iter().map(|&x| x as Vertex + 1).collect();
                        v.sort_unstable();
                        v
                    })
                    .collect();
                let mut w = MinorWitness::from_branch_sets(self.g, self.pattern.clone(), sets)
                    .expect("search only accepts realized edges");
                if let Some((node, v)) = self.root {
                    w = w.rooted_at(node, v as Vertex + 1);
                }
                SearchOutcome::Found(w)
            }
            Flow::Continue => SearchOutcome::Absent,
            Flow::Stop => SearchOutcome::GaveUp,
        }
    }

    fn place(&mut self, i: usize) -> Flow {
        if i == self.order.len() {
            return Flow::Found;
        }
        let h = self.order[i];
        let remaining = self.order.len() - i - 1;
        if self.free < remaining + 1 {
            return Flow::Continue;
        }
        let earlier = self.hadj[h].iter().filter(|&&y| self.pos[y] < i).count();
        let later = self.hadj[h].len() - earlier;
        let max_size = if later == 0 && earlier <= 1 { 1 } else { self.free - remaining };
        let n = self.adj.len();
        let mut ban = vec![false; n];
        let mut lo = 0usize;
        let anchors: Vec<usize> = match (self.root, self.bfs_parent[h]) {
            (Some((rn, rv)), _) if rn == h => {
                if self.owner[rv] != FREE {
                    return Flow::Continue;
                }
                vec![rv]
            }
            (_, Some(p)) => {
                let mut a: Vec<usize> = self.sets[p]
                    .iter()
                    .flat_map(|&x| self.adj[x].iter().copied())
                    .filter(|&y| self.owner[y] == FREE)
                    .collect();
                a.sort_unstable();
                a.dedup();
                a
            }
            (_, None) => {
                lo = 1;
                (0..n).filter(|&x| self.owner[x] == FREE).collect()
            }
        };
        for &a in &anchors {
            let mut seen = vec![false; n];
            seen[a] = true;
            let mut marks = Vec::new();
            let mut ext = Vec::new();
            let allowed = |x: usize, owner: &[usize], ban: &[bool]| {
                owner[x] == FREE && !ban[x] && (lo == 0 || x > a)
            };
            if max_size > 1 {
                for &w in &self.adj[a] {
                    if !seen[w] && allowed(w, &self.owner, &ban) {
                        seen[w] = true;
                        marks.push(w);
                        ext.push(w);
                    }
                }
            }
            let mut set = vec![a];
            match self.grow(i, h, &mut set, ext, &mut seen, &mut marks, max_size, &ban, lo, a) {
                Flow::Continue => {}
                other => return other,
            }
            ban[a] = true;
        }
        Flow::Continue
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &mut self,
        i: usize,
        h: usize,
        set: &mut Vec<usize>,
        mut ext: Vec<usize>,
        seen: &mut [bool],
        marks: &mut Vec<usize>,
        max_size: usize,
        ban: &[bool],
        lo: usize,
        anchor: usize,
    ) -> Flow {
        match self.try_set(i, h, set) {
            Flow::Continue => {}
            other => return other,
        }
        if set.len() == max_size {
            return Flow::Continue;
        }
        while let Some(w) = ext.pop() {
            let mark = marks.len();
            let mut child = ext.clone();
            for idx in 0..self.adj[w].len() {
                let u = self.adj[w][idx];
                if !seen[u] && self.owner[u] == FREE && !ban[u] && (lo == 0 || u > anchor) {
                    seen[u] = true;
                    marks.push(u);
                    child.push(u);
                }
            }
            set.push(w);
            let flow = self.grow(i, h, set, child, seen, marks, max_size, ban, lo, anchor);
            set.pop();
            for u in marks.drain(mark..) {
                seen[u] = false;
            }
            match flow {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }

    fn try_set(&mut self, i: usize, h: usize, set: &[usize]) -> Flow {
        self.work += 1;
        if let Some(cap) = self.cap {
            if self.work > cap {
                return Flow::Stop;
            }
        }
        // every earlier pattern neighbor must be touched
        for &y in &self.hadj[h] {
            if self.pos[y] < i && !set.iter().any(|&x| self.adj[x].iter().any(|&z| self.owner[z] == y)) {
                return Flow::Continue;
            }
        }
        for &x in set {
            self.owner[x] = h;
        }
        self.free -= set.len();
        self.sets[h] = set.to_vec();
        let flow = if self.feasible(i) { self.place(i + 1) } else { Flow::Continue };
        if let Flow::Found = flow {
            return Flow::Found;
        }
        for &x in set {
            self.owner[x] = FREE;
        }
        self.free += set.len();
        self.sets[h].clear();
        flow
    }

    /// Each placed node needs a distinct free frontier vertex per unplaced
    /// pattern neighbor.
    fn feasible(&self, i: usize) -> bool {
        if self.free < self.order.len() - i - 1 {
            return false;
        }
        for &x in &self.order[..=i] {
            let pending = self.hadj[x].iter().filter(|&&y| self.pos[y] > i).count();
            if pending == 0 {
                continue;
            }
            let mut frontier: Vec<usize> = self.sets[x]
                .iter()
                .flat_map(|&v| self.adj[v].iter().copied())
                .filter(|&y| self.owner[y] == FREE)
                .collect();
            frontier.sort_unstable();
            frontier.dedup();
            if frontier.len() < pending {
                return false;
            }
        }
        true
    }
}
