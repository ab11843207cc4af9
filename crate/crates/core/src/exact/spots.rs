//! Spot enumeration by exhaustive subset search.
//!
//! A `k`-spot is a vertex set `S` with `|S| >= 3` whose induced subgraph is
//! 2-connected and has no cycle of length `>= k`, such that every path
//! between two distinct vertices of `S` with all intermediate vertices
//! outside `S` (and at least one of them) has length `>= 2k`.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::graph::{Graph, Vertex};

use super::cycles::{find_long_cycle, is_two_connected};
use super::{too_large, ExactError, ExactLimits};

/// Shortest path between distinct vertices of `set` whose interior is
/// non-empty and avoids `set`, if its length is below `limit`.
pub fn shortest_external_path(g: &Graph, set: &[Vertex], limit: usize) -> Option<Vec<Vertex>> {
    let inside: HashSet<Vertex> = set.iter().copied().collect();
    let mut best: Option<Vec<Vertex>> = None;
    for &s in set {
        let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
        let mut dist: HashMap<Vertex, usize> = HashMap::new();
        let mut q = VecDeque::new();
        for &x in g.neighbors(s) {
            if !inside.contains(&x) && !dist.contains_key(&x) {
                dist.insert(x, 1);
                parent.insert(x, s);
                q.push_back(x);
            }
        }
        while let Some(x) = q.pop_front() {
            let dx = dist[&x];
            let cap = best.as_ref().map_or(limit, |p| p.len() - 1);
            if dx + 1 >= cap {
                break;
            }
            if let Some(&t) = g.neighbors(x).iter().find(|&&t| t != s && inside.contains(&t)) {
                let mut path = vec![t, x];
                let mut y = x;
                while let Some(&p) = parent.get(&y) {
                    path.push(p);
                    y = p;
                }
                path.reverse();
                best = Some(path);
                break;
            }
            for &y in g.neighbors(x) {
                if !inside.contains(&y) && !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    parent.insert(y, x);
                    q.push_back(y);
                }
            }
        }
    }
    best
}

/// Checks the three spot conditions for `set` in `g`.
pub fn spot_is_valid(g: &Graph, set: &[Vertex], k: usize) -> bool {
    if set.len() < 3 || !is_two_connected(g, set) {
        return false;
    }
    if shortest_external_path(g, set, 2 * k).is_some() {
        return false;
    }
    let (sub, _) = g.induced(set);
    find_long_cycle(&sub, k).is_none()
}

/// All `k`-spots of `g`, each sorted, in lexicographic order.
pub fn exact_spots(g: &Graph, k: usize) -> Result<Vec<Vec<Vertex>>, ExactError> {
    too_large("spot enumeration", g.n(), ExactLimits::default().spots_vertices)?;
    let n = g.n();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let set: Vec<Vertex> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| i as Vertex + 1).collect();
        if spot_is_valid(g, &set, k) {
            out.push(set);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Graph {
        Graph::from_edges(n as usize, 3, (1..=n).map(|i| (i, i % n + 1))).unwrap()
    }

    #[test]
    fn isolated_k4_is_a_five_spot() {
        let k4 = Graph::from_edges(4, 3, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(exact_spots(&k4, 5).unwrap(), vec![vec![1, 2, 3, 4]]);
    }

    #[test]
    fn triangle_is_a_four_spot() {
        assert_eq!(exact_spots(&cycle(3), 4).unwrap(), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn c6_has_no_four_spots() {
        assert!(exact_spots(&cycle(6), 4).unwrap().is_empty());
    }

    #[test]
    fn triangles_close_together_are_not_spots() {
        // two triangles joined by a 2-edge path: external path too short
        let g = Graph::from_edges(7, 3, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 7), (7, 5), (1, 6)])
            .unwrap();
        let spots = exact_spots(&g, 4).unwrap();
        assert!(!spots.contains(&vec![1, 2, 3]));
    }

    #[test]
    fn external_path_reporting() {
        let g = Graph::from_edges(5, 3, [(1, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 2)]).unwrap();
        let p = shortest_external_path(&g, &[1, 2, 3], 10).unwrap();
        assert_eq!(p.len(), 4);
        assert!(shortest_external_path(&g, &[1, 2, 3], 3).is_none());
    }
}
