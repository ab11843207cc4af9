//! Generalized 2-colouring: exact minimum violations and parity checks.

use std::collections::VecDeque;

use crate::graph::{CanonicalEdge, Graph};
use crate::labeling::EdgeParity;

use super::{too_large, ExactError};

/// A colouring `colors[v - 1] ∈ {0, 1}` and its violation count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub violations: usize,
    pub colors: Vec<u8>,
}

/// Minimum number of edges violated by any 2-colouring, where an edge of
/// parity 1 wants different colours and parity 0 wants equal colours.
/// Enumerates each component separately with a Gray code.
pub fn exact_min_violations(
    g: &Graph,
    parity: &dyn EdgeParity,
    max_component: usize,
) -> Result<Coloring, ExactError> {
    let mut colors = vec![0u8; g.n()];
    let mut total = 0;
    let edges = g.edges();
    for comp in g.components() {
        too_large("min-violation colouring", comp.len(), max_component)?;
        if comp.len() == 1 {
            // loops are always violated when they demand a colour change
            total += edges
                .iter()
                .filter(|e| e.u == comp[0] && e.is_loop() && parity.parity(**e) == 1)
                .count();
            continue;
        }
        let mut pos = vec![usize::MAX; g.n() + 1];
        for (i, &v) in comp.iter().enumerate() {
            pos[v as usize] = i;
        }
        let local: Vec<(usize, usize, u8)> = edges
            .iter()
            .filter(|e| pos[e.u as usize] != usize::MAX)
            .map(|e| (pos[e.u as usize], pos[e.v as usize], parity.parity(*e)))
            .collect();
        let s = comp.len();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); s];
        for (i, &(a, b, _)) in local.iter().enumerate() {
            incident[a].push(i);
            if b != a {
                incident[b].push(i);
            }
        }
        let violated = |c: &[u8], (a, b, p): (usize, usize, u8)| (c[a] ^ c[b]) != p;
        let mut c = vec![0u8; s];
        let mut cur = local.iter().filter(|&&e| violated(&c, e)).count();
        let mut best = cur;
        let mut best_c = c.clone();
        // vertex 0 stays fixed: flipping every colour preserves violations
        let steps: u64 = 1u64 << (s - 1);
        for step in 1..steps {
            let bit = step.trailing_zeros() as usize + 1;
            for &ei in &incident[bit] {
                if violated(&c, local[ei]) {
                    cur -= 1;
                }
            }
            c[bit] ^= 1;
            for &ei in &incident[bit] {
                if violated(&c, local[ei]) {
                    cur += 1;
                }
            }
            if cur < best {
                best = cur;
                best_c.copy_from_slice(&c);
                if best == 0 {
                    break;
                }
            }
        }
        total += best;
        for (i, &v) in comp.iter().enumerate() {
            colors[v as usize - 1] = best_c[i];
        }
    }
    Ok(Coloring { violations: total, colors })
}

/// Whether a violation-free colouring exists (BFS propagation).
pub fn is_parity_bipartite(g: &Graph, parity: &dyn EdgeParity) -> bool {
    let mut color = vec![u8::MAX; g.n() + 1];
    for s in g.vertices() {
        if color[s as usize] != u8::MAX {
            continue;
        }
        color[s as usize] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            let mut mult = std::collections::HashMap::new();
            for &y in g.neighbors(x) {
                let m = mult.entry(y).or_insert(0u32);
                let e = CanonicalEdge::with_mult(x, y, if x == y { *m / 2 } else { *m });
                *m += 1;
                let want = color[x as usize] ^ parity.parity(e);
                if color[y as usize] == u8::MAX {
                    color[y as usize] = want;
                    q.push_back(y);
                } else if color[y as usize] != want {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::PlainParity;
    use std::collections::HashMap;

    fn cycle(n: u32) -> Graph {
        Graph::from_edges(n as usize, 2, (1..=n).map(|i| (i, i % n + 1))).unwrap()
    }

    fn brute(g: &Graph, parity: &dyn EdgeParity) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .map(|mask| {
                g.edges()
                    .iter()
                    .filter(|e| {
                        let cu = (mask >> (e.u - 1)) & 1;
                        let cv = (mask >> (e.v - 1)) & 1;
                        (cu ^ cv) as u8 != parity.parity(**e)
                    })
                    .count()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn even_cycle_is_colourable() {
        let r = exact_min_violations(&cycle(6), &PlainParity, 24).unwrap();
        assert_eq!(r.violations, 0);
        assert!(is_parity_bipartite(&cycle(6), &PlainParity));
    }

    #[test]
    fn odd_cycle_needs_one_violation() {
        let g = cycle(5);
        assert_eq!(exact_min_violations(&g, &PlainParity, 24).unwrap().violations, 1);
        assert_eq!(brute(&g, &PlainParity), 1);
    }

    #[test]
    fn c6_with_one_eq_edge() {
        let g = cycle(6);
        let eq = CanonicalEdge::new(1, 2);
        let lab = move |e: CanonicalEdge| u8::from(e != eq);
        assert_eq!(exact_min_violations(&g, &lab, 24).unwrap().violations, 1);
        assert_eq!(brute(&g, &lab), 1);
        assert!(!is_parity_bipartite(&g, &lab));
    }

    #[test]
    fn matches_brute_force_on_random_labels() {
        let g = Graph::from_edges(7, 4, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 7), (7, 4), (2, 6)])
            .unwrap();
        for seed in 0..40u64 {
            let labels: HashMap<CanonicalEdge, u8> = g
                .edges()
                .into_iter()
                .enumerate()
                .map(|(i, e)| (e, ((seed >> (i % 6)) & 1) as u8 ^ (i as u8 & 1)))
                .collect();
            let lab = |e: CanonicalEdge| labels[&e];
            let r = exact_min_violations(&g, &lab, 24).unwrap();
            assert_eq!(r.violations, brute(&g, &lab));
            let recount = g
                .edges()
                .iter()
                .filter(|e| (r.colors[e.u as usize - 1] ^ r.colors[e.v as usize - 1]) != lab(**e))
                .count();
            assert_eq!(recount, r.violations);
            assert_eq!(r.violations == 0, is_parity_bipartite(&g, &lab));
        }
    }

    #[test]
    fn refuses_large_components() {
        let g = cycle(30);
        assert!(matches!(
            exact_min_violations(&g, &PlainParity, 24),
            Err(ExactError::InstanceTooLarge { size: 30, .. })
        ));
    }
}
