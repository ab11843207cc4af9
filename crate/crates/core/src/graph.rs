//! Adjacency-list graphs with a degree bound, canonical edges and the text
//! file format shared by every tool in the crate.
//!
//! Vertices are `1..=n`; `0` is reserved as the null answer of the
//! incidence-list oracle.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex id in `1..=n`.
pub type Vertex = u32;

/// The null answer returned for missing neighbors.
pub const NULL_VERTEX: Vertex = 0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} outside 1..={n}")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("self-loop at {0} in a simple graph")]
    SelfLoop(Vertex),
    #[error("parallel edge {0}-{1} in a simple graph")]
    ParallelEdge(Vertex, Vertex),
    #[error("vertex {v} would exceed degree bound {d}")]
    DegreeBound { v: Vertex, d: usize },
    #[error("adjacency of {u} and {v} is not symmetric")]
    Asymmetric { u: Vertex, v: Vertex },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

/// An undirected edge in canonical orientation `u <= v`.
///
/// `mult` distinguishes parallel copies in multigraphs and is 0 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalEdge {
    pub u: Vertex,
    pub v: Vertex,
    #[serde(default)]
    pub mult: u32,
}

impl CanonicalEdge {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        Self::with_mult(a, b, 0)
    }

    pub fn with_mult(a: Vertex, b: Vertex, mult: u32) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        CanonicalEdge { u, v, mult }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// An immutable-after-load graph with a degree bound `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    d: usize,
    multi: bool,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn new(n: usize, d: usize) -> Self {
        Graph { n, d, multi: false, adj: vec![Vec::new(); n] }
    }

    pub fn new_multi(n: usize, d: usize) -> Self {
        Graph { n, d, multi: true, adj: vec![Vec::new(); n] }
    }

    /// Builds a simple graph from an edge list.
    pub fn from_edges<I>(n: usize, d: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n, d);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a simple graph whose degree bound is its own maximum degree
    /// (at least 1).
    pub fn from_edges_tight<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut deg = vec![0usize; n + 1];
        for &(u, v) in &edges {
            for x in [u, v] {
                if (x as usize) <= n {
                    deg[x as usize] += 1;
                }
            }
        }
        let d = deg.iter().copied().max().unwrap_or(0).max(1);
        Graph::from_edges(n, d, edges)
    }

    pub fn from_edges_multi<I>(n: usize, d: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new_multi(n, d);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_multigraph(&self) -> bool {
        self.multi
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        1..=self.n as Vertex
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v as usize > self.n {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v >= 1 && v as usize <= self.n
    }

    /// Neighbor list of `v` in load order. A self-loop contributes two entries.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize - 1]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize - 1].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains_vertex(u) && self.contains_vertex(v) && self.neighbors(u).contains(&v)
    }

    pub fn edge_multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        let c = self.neighbors(u).iter().filter(|&&w| w == v).count();
        if u == v {
            c / 2
        } else {
            c
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.multi {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if self.has_edge(u, v) {
                return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
            }
        }
        let need_u = if u == v { 2 } else { 1 };
        if self.degree(u) + need_u > self.d {
            return Err(GraphError::DegreeBound { v: u, d: self.d });
        }
        if u != v && self.degree(v) + 1 > self.d {
            return Err(GraphError::DegreeBound { v, d: self.d });
        }
        self.adj[u as usize - 1].push(v);
        self.adj[v as usize - 1].push(u);
        Ok(())
    }

    /// Removes one copy of the edge; returns false if it was absent.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if !self.contains_vertex(u) || !self.contains_vertex(v) {
            return false;
        }
        let au = &mut self.adj[u as usize - 1];
        let Some(pos) = au.iter().position(|&w| w == v) else {
            return false;
        };
        au.remove(pos);
        let av = &mut self.adj[v as usize - 1];
        let pos = av.iter().position(|&w| w == u).expect("symmetric adjacency");
        av.remove(pos);
        true
    }

    /// Removes every edge incident to `v`, returning them.
    pub fn isolate(&mut self, v: Vertex) -> Vec<CanonicalEdge> {
        let nb: Vec<Vertex> = self.neighbors(v).to_vec();
        let mut removed = Vec::new();
        for u in nb {
            if self.remove_edge(v, u) {
                removed.push(CanonicalEdge::new(v, u));
            }
        }
        removed
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges in canonical form, sorted.
    pub fn edges(&self) -> Vec<CanonicalEdge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in self.vertices() {
            let mut seen: HashMap<Vertex, u32> = HashMap::new();
            for &w in self.neighbors(u) {
                if w < u {
                    continue;
                }
                let c = seen.entry(w).or_insert(0);
                if w == u {
                    // loops appear twice in adj(u)
                    if *c % 2 == 0 {
                        out.push(CanonicalEdge::with_mult(u, w, *c / 2));
                    }
                } else {
                    out.push(CanonicalEdge::with_mult(u, w, *c));
                }
                *c += 1;
            }
        }
        out.sort();
        out
    }

    /// Checks symmetry, loop and degree-bound invariants.
    pub fn validate(&self) -> Result<(), GraphError> {
        for u in self.vertices() {
            let nb = self.neighbors(u);
            if nb.len() > self.d {
                return Err(GraphError::DegreeBound { v: u, d: self.d });
            }
            for &w in nb {
                self.check_vertex(w)?;
                if w == u && !self.multi {
                    return Err(GraphError::SelfLoop(u));
                }
                if w != u {
                    let a = nb.iter().filter(|&&x| x == w).count();
                    let b = self.neighbors(w).iter().filter(|&&x| x == u).count();
                    if a != b {
                        return Err(GraphError::Asymmetric { u, v: w });
                    }
                    if a > 1 && !self.multi {
                        return Err(GraphError::ParallelEdge(u.min(w), u.max(w)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Same graph with a different degree bound.
    pub fn with_degree_bound(mut self, d: usize) -> Result<Self, GraphError> {
        self.d = d;
        self.validate()?;
        Ok(self)
    }

    /// Same edge set with every adjacency list shuffled.
    pub fn shuffled_adjacency<R: Rng + ?Sized>(&self, rng: &mut R) -> Graph {
        let mut g = self.clone();
        for list in &mut g.adj {
            list.shuffle(rng);
        }
        g
    }

    /// Relabels vertex `v` as `perm[v-1]`.
    pub fn relabeled(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![Vec::new(); self.n];
        for u in self.vertices() {
            let pu = perm[u as usize - 1];
            adj[pu as usize - 1] = self.neighbors(u).iter().map(|&w| perm[w as usize - 1]).collect();
        }
        Graph { n: self.n, d: self.d, multi: self.multi, adj }
    }

    /// A uniformly random relabeling.
    pub fn random_isomorphic_copy<R: Rng + ?Sized>(&self, rng: &mut R) -> Graph {
        let mut perm: Vec<Vertex> = self.vertices().collect();
        perm.shuffle(rng);
        self.relabeled(&perm)
    }

    /// Connected components, each sorted, in order of smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n + 1];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s as usize] {
                continue;
            }
            seen[s as usize] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_count() == 1
    }

    /// BFS distances from `s` (index = vertex; `usize::MAX` = unreachable).
    pub fn distances_from(&self, s: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n + 1];
        dist[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in self.neighbors(x) {
                if dist[y as usize] == usize::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Vertices within distance `radius` of `s`, sorted.
    pub fn ball(&self, s: Vertex, radius: usize) -> Vec<Vertex> {
        let mut dist: HashMap<Vertex, usize> = HashMap::from([(s, 0)]);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            if dx == radius {
                continue;
            }
            for &y in self.neighbors(x) {
                if !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Vertex> = dist.into_keys().collect();
        out.sort_unstable();
        out
    }

    /// Subgraph induced by `vertices`, relabeled `1..=k` in the given order.
    /// Returns the subgraph and the map from new ids to old ids.
    pub fn induced(&self, vertices: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let index: HashMap<Vertex, Vertex> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i as Vertex + 1)).collect();
        let mut sub = Graph {
            n: vertices.len(),
            d: self.d,
            multi: self.multi,
            adj: vec![Vec::new(); vertices.len()],
        };
        for (i, &v) in vertices.iter().enumerate() {
            sub.adj[i] = self
                .neighbors(v)
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect();
        }
        (sub, vertices.to_vec())
    }

    pub fn vertex_set(vertices: &[Vertex]) -> BTreeSet<Vertex> {
        vertices.iter().copied().collect()
    }

    /// Parses the text format: `N d [multi]` then one `u v` line per edge.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "empty input".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad = |msg: &str| GraphError::Parse { line: hl, msg: msg.to_string() };
        if fields.len() < 2 || fields.len() > 3 {
            return Err(bad("expected header `N d [multi]`"));
        }
        let n: usize = fields[0].parse().map_err(|_| bad("bad vertex count"))?;
        let d: usize = fields[1].parse().map_err(|_| bad("bad degree bound"))?;
        let multi = match fields.get(2) {
            None => false,
            Some(&"multi") => true,
            Some(_) => return Err(bad("third header field must be `multi`")),
        };
        let mut g = if multi { Graph::new_multi(n, d) } else { Graph::new(n, d) };
        for (ln, line) in lines {
            let mut it = line.split_whitespace();
            let perr = |msg: &str| GraphError::Parse { line: ln, msg: msg.to_string() };
            let u: Vertex = it.next().ok_or_else(|| perr("missing u"))?.parse().map_err(|_| perr("bad u"))?;
            let v: Vertex = it.next().ok_or_else(|| perr("missing v"))?.parse().map_err(|_| perr("bad v"))?;
            if it.next().is_some() {
                return Err(perr("trailing fields"));
            }
            g.add_edge(u, v).map_err(|e| GraphError::Parse { line: ln, msg: e.to_string() })?;
        }
        Ok(g)
    }

    /// Serializes with edges sorted; `parse(to_text(g))` reproduces the edge set
    /// and `to_text` is byte-stable for equal edge sets.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if self.multi {
            writeln!(s, "{} {} multi", self.n, self.d).unwrap();
        } else {
            writeln!(s, "{} {}", self.n, self.d).unwrap();
        }
        for e in self.edges() {
            writeln!(s, "{} {}", e.u, e.v).unwrap();
        }
        s
    }

    pub fn load(path: &Path) -> Result<Graph, GraphError> {
        let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io(e.to_string()))?;
        Graph::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), GraphError> {
        std::fs::write(path, self.to_text()).map_err(|e| GraphError::Io(e.to_string()))
    }

    /// Same edges, adjacency lists sorted ascending.
    pub fn sorted(&self) -> Graph {
        let mut g = self.clone();
        for list in &mut g.adj {
            list.sort_unstable();
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> Graph {
        Graph::from_edges(3, 3, [(1, 2), (2, 3), (3, 1)]).unwrap()
    }

    #[test]
    fn rejects_loops_and_parallel_edges_in_simple_graphs() {
        let mut g = Graph::new(3, 3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        g.add_edge(1, 2).unwrap();
        assert_eq!(g.add_edge(2, 1), Err(GraphError::ParallelEdge(1, 2)));
    }

    #[test]
    fn enforces_degree_bound() {
        let mut g = Graph::new(4, 2);
        g.add_edge(1, 2).unwrap();
        g.add_edge(1, 3).unwrap();
        assert_eq!(g.add_edge(1, 4), Err(GraphError::DegreeBound { v: 1, d: 2 }));
    }

    #[test]
    fn multigraph_edges_carry_multiplicity() {
        let g = Graph::from_edges_multi(2, 4, [(1, 2), (2, 1), (1, 1)]).unwrap();
        let e = g.edges();
        assert_eq!(
            e,
            vec![
                CanonicalEdge::with_mult(1, 1, 0),
                CanonicalEdge::with_mult(1, 2, 0),
                CanonicalEdge::with_mult(1, 2, 1)
            ]
        );
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(1), 4);
        g.validate().unwrap();
    }

    #[test]
    fn text_round_trip_is_byte_stable() {
        let g = Graph::from_edges(5, 3, [(3, 4), (1, 2), (5, 1), (2, 3)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "5 3\n1 2\n1 5\n2 3\n3 4\n");
        let back = Graph::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = Graph::parse("3 2\n1 2\n1 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        let err = Graph::parse("3 2 simple\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn components_and_balls() {
        let g = Graph::from_edges(6, 3, [(1, 2), (2, 3), (4, 5)]).unwrap();
        assert_eq!(g.components(), vec![vec![1, 2, 3], vec![4, 5], vec![6]]);
        assert_eq!(g.ball(1, 1), vec![1, 2]);
        assert_eq!(g.ball(1, 5), vec![1, 2, 3]);
    }

    #[test]
    fn shuffling_keeps_edge_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Graph::from_edges(5, 4, [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3)]).unwrap();
        let h = g.shuffled_adjacency(&mut rng);
        assert_eq!(g.edges(), h.edges());
        h.validate().unwrap();
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = triangle();
        let (sub, map) = g.induced(&[3, 1]);
        assert_eq!(map, vec![3, 1]);
        assert_eq!(sub.edges(), vec![CanonicalEdge::new(1, 2)]);
    }
}
