//! Cached adjacency of the part of the input a tester has explored.

use std::collections::HashMap;

use crate::graph::{Graph, Vertex};
use crate::oracle::{QueryError, QueryOracle};

/// Neighbor lists fetched through the oracle, each fetched at most once.
/// Lists are deduplicated and exclude self-loops.
pub struct Explorer<'o, 'g> {
    oracle: &'o mut QueryOracle<'g>,
    adj: HashMap<Vertex, Vec<Vertex>>,
}

impl<'o, 'g> Explorer<'o, 'g> {
    pub fn new(oracle: &'o mut QueryOracle<'g>) -> Self {
        Explorer { oracle, adj: HashMap::new() }
    }

    pub fn n(&self) -> usize {
        self.oracle.n()
    }

    pub fn d(&self) -> usize {
        self.oracle.d()
    }

    pub fn oracle(&mut self) -> &mut QueryOracle<'g> {
        self.oracle
    }

    pub fn neighbors(&mut self, v: Vertex) -> Result<&[Vertex], QueryError> {
        if !self.adj.contains_key(&v) {
            let mut list = self.oracle.all_neighbors(v)?;
            let mut seen = Vec::with_capacity(list.len());
            list.retain(|&u| {
                if u == v || seen.contains(&u) {
                    false
                } else {
                    seen.push(u);
                    true
                }
            });
            self.adj.insert(v, list);
        }
        Ok(&self.adj[&v])
    }

    pub fn is_known(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    /// Known adjacency without querying.
    pub fn known(&self, v: Vertex) -> Option<&[Vertex]> {
        self.adj.get(&v).map(Vec::as_slice)
    }

    pub fn explored(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    /// Every edge seen so far, as a simple graph on the input's vertex ids.
    pub fn subgraph(&self) -> Graph {
        let mut g = Graph::new(self.n(), self.d().max(1));
        let mut keys: Vec<Vertex> = self.adj.keys().copied().collect();
        keys.sort_unstable();
        for v in keys {
            for &u in &self.adj[&v] {
                if (u > v || !self.adj.contains_key(&u)) && !g.has_edge(u, v) {
                    g.add_edge(v, u).expect("explored edges respect the degree bound");
                }
            }
        }
        g
    }
}

/// The subgraph of `g` induced by `set`, with local ids `1..=|set|` in the
/// order of `set`.
pub fn induced_on(adj: impl Fn(Vertex) -> Vec<Vertex>, set: &[Vertex]) -> Graph {
    let index: HashMap<Vertex, Vertex> = set.iter().enumerate().map(|(i, &v)| (v, i as Vertex + 1)).collect();
    let mut edges = Vec::new();
    for &v in set {
        for u in adj(v) {
            if let Some(&j) = index.get(&u) {
                if index[&v] < j {
                    edges.push((index[&v], j));
                }
            }
        }
    }
    Graph::from_edges_tight(set.len(), edges).expect("induced edges are simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caches_and_counts_once() {
        let g = Graph::from_edges(4, 3, [(1, 2), (2, 3), (3, 1), (3, 4)]).unwrap();
        let mut o = QueryOracle::new(&g);
        let mut ex = Explorer::new(&mut o);
        assert_eq!(ex.neighbors(3).unwrap(), &[2, 1, 4][..]);
        ex.neighbors(3).unwrap();
        ex.neighbors(1).unwrap();
        let sub = ex.subgraph();
        assert_eq!(sub.edge_count(), 4);
        assert_eq!(o.counts().neighbor, 3 + 3);
    }
}
