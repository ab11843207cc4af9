//! Small pattern graphs `H` and rooted trees.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("io error: {0}")]
    Io(String),
}

/// A pattern graph on nodes `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn new(size: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        Pattern { size, edges }
    }

    /// Path with `m` edges.
    pub fn path(m: usize) -> Self {
        Pattern::new(m + 1, (0..m).map(|i| (i, i + 1)).collect())
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3);
        Pattern::new(k, (0..k).map(|i| (i, (i + 1) % k)).collect())
    }

    /// `K_{1,m}` with centre 0.
    pub fn star(m: usize) -> Self {
        Pattern::new(m + 1, (1..=m).map(|i| (0, i)).collect())
    }

    pub fn complete(k: usize) -> Self {
        let mut e = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                e.push((a, b));
            }
        }
        Pattern::new(k, e)
    }

    /// Triangle `0,1,2` with a pendant node 3 on node 0.
    pub fn triangle_plus_edge() -> Self {
        Pattern::new(4, vec![(0, 1), (1, 2), (0, 2), (0, 3)])
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.size];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for s in 0..self.size {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        q.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.size <= 1 || self.components().len() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.size
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.is_forest()
    }

    /// `Some(m)` if this is the path with `m >= 1` edges.
    pub fn as_path(&self) -> Option<usize> {
        if self.size < 2 || !self.is_tree() {
            return None;
        }
        self.degrees().iter().all(|&d| d <= 2).then_some(self.size - 1)
    }

    /// `Some(k)` if this is the cycle `C_k`.
    pub fn as_cycle(&self) -> Option<usize> {
        (self.size >= 3
            && self.is_connected()
            && self.edges.len() == self.size
            && self.degrees().iter().all(|&d| d == 2))
        .then_some(self.size)
    }

    /// `Some((centre, m))` if this is `K_{1,m}` with `m >= 2`.
    pub fn as_star(&self) -> Option<(usize, usize)> {
        if self.size < 3 || !self.is_tree() {
            return None;
        }
        let deg = self.degrees();
        let centre = (0..self.size).find(|&i| deg[i] == self.size - 1)?;
        Some((centre, self.size - 1))
    }

    pub fn is_triangle_plus_edge(&self) -> bool {
        if self.size != 4 || self.edges.len() != 4 || !self.is_connected() {
            return false;
        }
        let mut deg = self.degrees();
        deg.sort_unstable();
        deg == vec![1, 2, 2, 3]
    }

    /// Disjoint union.
    pub fn union(parts: &[Pattern]) -> Pattern {
        let mut size = 0;
        let mut edges = Vec::new();
        for p in parts {
            edges.extend(p.edges.iter().map(|&(a, b)| (a + size, b + size)));
            size += p.size;
        }
        Pattern::new(size, edges)
    }

    /// Sub-pattern induced by `nodes` (relabelled in order).
    pub fn induced(&self, nodes: &[usize]) -> Pattern {
        let pos = |x: usize| nodes.iter().position(|&y| y == x);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect();
        Pattern::new(nodes.len(), edges)
    }

    /// The pattern as a simple graph on `1..=size`.
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges_tight(
            self.size,
            self.edges.iter().map(|&(a, b)| (a as Vertex + 1, b as Vertex + 1)),
        )
        .expect("pattern edges are simple")
    }
}

/// A rooted tree on nodes `0..k` given by a parent array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    pub root: usize,
    /// `parent[root] == None`.
    pub parent: Vec<Option<usize>>,
}

impl RootedTree {
    pub fn from_parents(root: usize, parent: Vec<Option<usize>>) -> Result<Self, PatternError> {
        let t = RootedTree { root, parent };
        t.validate()?;
        Ok(t)
    }

    pub fn single() -> Self {
        RootedTree { root: 0, parent: vec![None] }
    }

    /// Path on `m` edges rooted at an end.
    pub fn path(m: usize) -> Self {
        let parent = (0..=m).map(|i| i.checked_sub(1)).collect();
        RootedTree { root: 0, parent }
    }

    /// `K_{1,m}` rooted at its centre.
    pub fn star(m: usize) -> Self {
        let parent = (0..=m).map(|i| if i == 0 { None } else { Some(0) }).collect();
        RootedTree { root: 0, parent }
    }

    /// Spider with the given leg lengths, rooted at the centre 0.
    pub fn spider(legs: &[usize]) -> Self {
        let mut parent = vec![None];
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                parent.push(Some(prev));
                prev = parent.len() - 1;
            }
        }
        RootedTree { root: 0, parent }
    }

    pub fn from_pattern(p: &Pattern, root: usize) -> Result<Self, PatternError> {
        if !p.is_tree() {
            return Err(PatternError::NotATree("pattern is not a tree".into()));
        }
        let adj = p.adjacency();
        let mut parent = vec![None; p.size];
        let mut seen = vec![false; p.size];
        seen[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    q.push_back(y);
                }
            }
        }
        Ok(RootedTree { root, parent })
    }

    pub fn size(&self) -> usize {
        self.parent.len()
    }

    fn validate(&self) -> Result<(), PatternError> {
        let k = self.parent.len();
        if self.root >= k || self.parent[self.root].is_some() {
            return Err(PatternError::NotATree("root must have no parent".into()));
        }
        for (i, p) in self.parent.iter().enumerate() {
            match p {
                None if i != self.root => {
                    return Err(PatternError::NotATree(format!("node {i} has no parent")))
                }
                Some(p) if *p >= k => {
                    return Err(PatternError::NotATree(format!("parent of {i} out of range")))
                }
                _ => {}
            }
        }
        // every node must reach the root
        for start in 0..k {
            let mut x = start;
            for _ in 0..=k {
                match self.parent[x] {
                    None => break,
                    Some(p) => x = p,
                }
            }
            if x != self.root {
                return Err(PatternError::NotATree(format!("node {start} is on a cycle")));
            }
        }
        Ok(())
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.size()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(i);
            }
        }
        ch
    }

    pub fn to_pattern(&self) -> Pattern {
        let edges = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, p)))
            .collect();
        Pattern::new(self.size(), edges)
    }

    /// Nodes of the subtree hanging below `x` (inclusive), sorted.
    pub fn subtree(&self, x: usize) -> Vec<usize> {
        let ch = self.children();
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            out.extend(ch[out[i]].iter().copied());
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Restriction to `nodes` (which must be closed under parent except for
    /// `new_root`), relabelled in sorted order. Returns the tree and the map
    /// from new to old node ids.
    pub fn restrict(&self, nodes: &[usize], new_root: usize) -> (RootedTree, Vec<usize>) {
        let mut map: Vec<usize> = nodes.to_vec();
        map.sort_unstable();
        let pos = |x: usize| map.binary_search(&x).ok();
        let parent = map
            .iter()
            .map(|&x| if x == new_root { None } else { self.parent[x].and_then(pos) })
            .collect();
        let root = pos(new_root).expect("root in node set");
        (RootedTree { root, parent }, map)
    }

    /// Text format: `k root` (1-based) then `k-1` lines `child parent`.
    pub fn parse(text: &str) -> Result<Self, PatternError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, msg: &str| PatternError::Parse { line, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 2 {
            return Err(perr(hl, "expected header `k root`"));
        }
        let k: usize = f[0].parse().map_err(|_| perr(hl, "bad k"))?;
        let root: usize = f[1].parse().map_err(|_| perr(hl, "bad root"))?;
        if k == 0 || root == 0 || root > k {
            return Err(perr(hl, "root outside 1..=k"));
        }
        let mut parent = vec![None; k];
        let mut count = 0;
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 2 {
                return Err(perr(ln, "expected `child parent`"));
            }
            let c: usize = f[0].parse().map_err(|_| perr(ln, "bad child"))?;
            let p: usize = f[1].parse().map_err(|_| perr(ln, "bad parent"))?;
            if c == 0 || c > k || p == 0 || p > k || c == p {
                return Err(perr(ln, "node outside 1..=k"));
            }
            if parent[c - 1].is_some() {
                return Err(perr(ln, "child listed twice"));
            }
            parent[c - 1] = Some(p - 1);
            count += 1;
        }
        if count + 1 != k {
            return Err(PatternError::NotATree(format!("expected {} edges, found {count}", k - 1)));
        }
        RootedTree::from_parents(root - 1, parent)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.size(), self.root + 1);
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                writeln!(s, "{} {}", i + 1, p + 1).unwrap();
            }
        }
        s
    }
}
