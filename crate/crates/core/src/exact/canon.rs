//! Canonical forms of small simple graphs and isomorphism-free enumeration.
//!
//! The canonical form is the lexicographically largest adjacency matrix over
//! all orderings reachable by colour refinement plus individualization.
//! Twin vertices (equal neighborhoods) are individualized only once per
//! twin class.

use std::collections::{BTreeSet, HashMap};

use crate::graph::{Graph, Vertex};

/// Adjacency rows in canonical vertex order (bit `j` of `rows[i]` is the
/// edge between canonical vertices `i` and `j`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalGraph {
    pub n: usize,
    pub rows: Vec<u32>,
}

impl CanonicalGraph {
    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].count_ones() as usize
    }

    /// Simple graph on `1..=n` with degree bound `d`.
    pub fn to_graph(&self, d: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.rows[i] & (1 << j) != 0 {
                    edges.push((i as Vertex + 1, j as Vertex + 1));
                }
            }
        }
        Graph::from_edges(self.n, d, edges).expect("canonical rows are simple")
    }

    fn from_rows(rows: &[u32]) -> Self {
        canonicalize(rows)
    }
}

/// Canonical form of a simple graph with at most 32 vertices.
pub fn canonical_form(g: &Graph) -> CanonicalGraph {
    assert!(g.n() <= 32, "canonical forms support at most 32 vertices");
    let rows: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << (w - 1)))
        .collect();
    canonicalize(&rows)
}

fn canonicalize(rows: &[u32]) -> CanonicalGraph {
    let n = rows.len();
    if n == 0 {
        return CanonicalGraph { n: 0, rows: Vec::new() };
    }
    let colors = refine(rows, vec![0; n]);
    let mut best: Option<Vec<u32>> = None;
    search(rows, colors, &mut best);
    CanonicalGraph { n, rows: best.expect("at least one leaf") }
}

/// Iterated colour refinement; colours are dense ranks `0..c`.
fn refine(rows: &[u32], mut colors: Vec<usize>) -> Vec<usize> {
    let n = rows.len();
    let mut classes = colors.iter().collect::<BTreeSet<_>>().len();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| rows[v] & (1 << w) != 0).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = sigs.iter().collect();
        let rank: HashMap<&(usize, Vec<usize>), usize> = distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| rank[s]).collect();
        let nclasses = distinct.len();
        colors = next;
        if nclasses == classes {
            return colors;
        }
        classes = nclasses;
    }
}

fn search(rows: &[u32], colors: Vec<usize>, best: &mut Option<Vec<u32>>) {
    let n = rows.len();
    let mut count = vec![0usize; n];
    for &c in &colors {
        count[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| count[c] > 1) else {
        let mut perm = vec![0usize; n];
        for v in 0..n {
            perm[colors[v]] = v;
        }
        let code: Vec<u32> = (0..n)
            .map(|i| {
                (0..n).fold(0u32, |acc, j| if rows[perm[i]] & (1 << perm[j]) != 0 { acc | 1 << j } else { acc })
            })
            .collect();
        if best.as_ref().map_or(true, |b| code > *b) {
            *best = Some(code);
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| colors[v] == cell).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        // twins give isomorphic branches
        if tried.iter().any(|&u| {
            let mask = !((1u32 << u) | (1u32 << v));
            rows[u] & mask == rows[v] & mask
        }) {
            continue;
        }
        tried.push(v);
        // individualize v: it keeps the cell colour, the rest move up
        let split: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| if c > cell || (c == cell && w != v) { c + 1 } else { c })
            .collect();
        search(rows, refine(rows, split), best);
    }
}

fn extend_all(
    classes: &BTreeSet<CanonicalGraph>,
    mut extend: impl FnMut(&CanonicalGraph, &mut dyn FnMut(Vec<u32>)),
) -> BTreeSet<CanonicalGraph> {
    let mut out = BTreeSet::new();
    for g in classes {
        extend(g, &mut |rows| {
            out.insert(CanonicalGraph::from_rows(&rows));
        });
    }
    out
}

/// All connected graphs with maximum degree at most 3 on `1..=max_n`
/// vertices, one per isomorphism class, ordered by vertex count.
pub fn connected_subcubic_graphs(max_n: usize) -> Vec<CanonicalGraph> {
    let mut layer: BTreeSet<CanonicalGraph> = BTreeSet::from([CanonicalGraph { n: 1, rows: vec![0] }]);
    let mut all: Vec<CanonicalGraph> = layer.iter().cloned().collect();
    for _ in 1..max_n {
        layer = extend_all(&layer, |g, emit| {
            let open: Vec<usize> = (0..g.n).filter(|&i| g.degree(i) < 3).collect();
            for mask in 1u32..(1 << open.len()) {
                if mask.count_ones() > 3 {
                    continue;
                }
                let mut rows = g.rows.clone();
                let mut new_row = 0u32;
                for (b, &i) in open.iter().enumerate() {
                    if mask & (1 << b) != 0 {
                        rows[i] |= 1 << g.n;
                        new_row |= 1 << i;
                    }
                }
                rows.push(new_row);
                emit(rows);
            }
        });
        all.extend(layer.iter().cloned());
    }
    all
}

/// All connected graphs with at most `max_m` edges (including the single
/// vertex), one per isomorphism class, ordered by edge count.
pub fn connected_graphs_up_to_edges(max_m: usize) -> Vec<CanonicalGraph> {
    let mut layer: BTreeSet<CanonicalGraph> = BTreeSet::from([CanonicalGraph { n: 1, rows: vec![0] }]);
    let mut all: Vec<CanonicalGraph> = layer.iter().cloned().collect();
    for _ in 0..max_m {
        layer = extend_all(&layer, |g, emit| {
            for i in 0..g.n {
                // pendant vertex
                let mut rows = g.rows.clone();
                rows[i] |= 1 << g.n;
                rows.push(1 << i);
                emit(rows);
                for j in i + 1..g.n {
                    if g.rows[i] & (1 << j) == 0 {
                        let mut rows = g.rows.clone();
                        rows[i] |= 1 << j;
                        rows[j] |= 1 << i;
                        emit(rows);
                    }
                }
            }
        });
        all.extend(layer.iter().cloned());
    }
    all
}

/// All connected graphs on `1..=max_n` vertices, one per isomorphism class.
pub fn connected_graphs_up_to_vertices(max_n: usize) -> Vec<CanonicalGraph> {
    let mut layer: BTreeSet<CanonicalGraph> = BTreeSet::from([CanonicalGraph { n: 1, rows: vec![0] }]);
    let mut all: Vec<CanonicalGraph> = layer.iter().cloned().collect();
    for _ in 1..max_n {
        layer = extend_all(&layer, |g, emit| {
            for mask in 1u32..(1 << g.n) {
                let mut rows = g.rows.clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if mask & (1 << i) != 0 {
                        *row |= 1 << g.n;
                    }
                }
                rows.push(mask);
                emit(rows);
            }
        });
        all.extend(layer.iter().cloned());
    }
    all
}
