//! Brute-force ground truth for desk-scale instances.
//!
//! Every oracle fails loudly with [`ExactError::InstanceTooLarge`] past its
//! configured size limit instead of approximating.

mod canon;
mod coloring;
mod cycles;
mod expansion;
mod minor;
mod spots;

pub use canon::{
    canonical_form, connected_graphs_up_to_edges, connected_graphs_up_to_vertices, connected_subcubic_graphs,
    CanonicalGraph,
};
pub use coloring::{exact_min_violations, is_parity_bipartite, Coloring};
pub use cycles::{
    biconnected_blocks, exact_distance_to_cycle_free, exact_find_cycle, exact_is_cycle_free, find_long_cycle,
    find_simple_path, is_two_connected, two_disjoint_paths,
};
pub use expansion::{check_expansion, ExpansionViolation};
pub use minor::{
    exact_distance_to_minor_free, exact_has_minor, exact_has_minor_with, paw_witness_from_cycle, search_minor, MinorSearchOptions,
    SearchOutcome,
};
pub use spots::{exact_spots, shortest_external_path, spot_is_valid};

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance too large for {what}: {size} > {limit}")]
    InstanceTooLarge { what: &'static str, size: usize, limit: usize },
}

/// Size limits of the brute-force oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    pub minor_graph_vertices: usize,
    pub minor_pattern_vertices: usize,
    pub minor_tree_vertices: usize,
    pub coloring_component: usize,
    pub distance_edges: usize,
    pub spots_vertices: usize,
    pub expansion_ball: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            minor_graph_vertices: 20,
            minor_pattern_vertices: 6,
            minor_tree_vertices: 8,
            coloring_component: 24,
            distance_edges: 16,
            spots_vertices: 12,
            expansion_ball: 18,
        }
    }
}

pub(crate) fn too_large(what: &'static str, size: usize, limit: usize) -> Result<(), ExactError> {
    if size > limit {
        Err(ExactError::InstanceTooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

/// 0-based adjacency lists of `g` (vertex `v` becomes `v - 1`).
pub(crate) fn local_adjacency(g: &Graph) -> Vec<Vec<usize>> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().map(|&w| w as usize - 1).collect())
        .collect()
}

/// Enumerates every connected vertex set that contains `root`, uses only
/// vertices accepted by `allowed`, and has at most `max_size` vertices. Each
/// set is visited exactly once. The visitor returns `false` to stop; the
/// function returns `false` iff it was stopped.
pub(crate) fn for_each_connected_set(
    adj: &[Vec<usize>],
    root: usize,
    max_size: usize,
    allowed: &dyn Fn(usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if max_size == 0 || !allowed(root) {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    let mut marks = Vec::new();
    seen[root] = true;
    let mut ext = Vec::new();
    for &w in &adj[root] {
        if !seen[w] && allowed(w) {
            seen[w] = true;
            marks.push(w);
            ext.push(w);
        }
    }
    let mut set = vec![root];
    grow(adj, &mut set, ext, &mut seen, &mut marks, max_size, allowed, visit)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    adj: &[Vec<usize>],
    set: &mut Vec<usize>,
    mut ext: Vec<usize>,
    seen: &mut [bool],
    marks: &mut Vec<usize>,
    max_size: usize,
    allowed: &dyn Fn(usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if !visit(set) {
        return false;
    }
    if set.len() == max_size {
        return true;
    }
    while let Some(w) = ext.pop() {
        let mark = marks.len();
        let mut child = ext.clone();
        for &u in &adj[w] {
            if !seen[u] && allowed(u) {
                seen[u] = true;
                marks.push(u);
                child.push(u);
            }
        }
        set.push(w);
        let go_on = grow(adj, set, child, seen, marks, max_size, allowed, visit);
        set.pop();
        for u in marks.drain(mark..) {
            seen[u] = false;
        }
        if !go_on {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn count_by_bitmask(adj: &[Vec<usize>], root: usize, max: usize) -> usize {
        let n = adj.len();
        let mut count = 0;
        for mask in 0u32..(1 << n) {
            if mask & (1 << root) == 0 || mask.count_ones() as usize > max {
                continue;
            }
            let mut reach = 1u32 << root;
            loop {
                let mut next = reach;
                for v in 0..n {
                    if reach & (1 << v) != 0 {
                        for &w in &adj[v] {
                            if mask & (1 << w) != 0 {
                                next |= 1 << w;
                            }
                        }
                    }
                }
                if next == reach {
                    break;
                }
                reach = next;
            }
            if reach == mask {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn connected_set_enumeration_matches_bitmask_count() {
        let g = Graph::from_edges(7, 4, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 4), (6, 7), (2, 7)])
            .unwrap();
        let adj = local_adjacency(&g);
        for root in 0..7 {
            for max in 1..=7 {
                let mut seen = BTreeSet::new();
                let mut total = 0;
                for_each_connected_set(&adj, root, max, &|_| true, &mut |s| {
                    let mut s = s.to_vec();
                    s.sort_unstable();
                    seen.insert(s);
                    total += 1;
                    true
                });
                assert_eq!(total, seen.len(), "duplicates for root {root}");
                assert_eq!(total, count_by_bitmask(&adj, root, max));
            }
        }
    }
}
