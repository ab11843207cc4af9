//! Local expansion: every connected set near `s` must have a large cut.

use crate::certificate::cut_edges;
use crate::graph::{Graph, Vertex};

use super::{for_each_connected_set, local_adjacency, too_large, ExactError, ExactLimits};

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionViolation {
    pub set: Vec<Vertex>,
    pub cut: usize,
}

/// Returns the first connected set within distance `radius` of `s` whose cut
/// in `g` has fewer than `eps * |S| * d` edges, or `None` if there is none.
pub fn check_expansion(g: &Graph, s: Vertex, radius: usize, eps: f64) -> Result<Option<ExpansionViolation>, ExactError> {
    let ball = g.ball(s, radius);
    too_large("expansion ball", ball.len(), ExactLimits::default().expansion_ball)?;
    let (sub, map) = g.induced(&ball);
    let adj = local_adjacency(&sub);
    let d = g.d() as f64;
    let mut found = None;
    for root in 0..ball.len() {
        let done = for_each_connected_set(&adj, root, ball.len(), &|x| x >= root, &mut |set| {
            let verts: Vec<Vertex> = set.iter().map(|&i| map[i]).collect();
            let cut = cut_edges(g, &verts).len();
            if (cut as f64) < eps * verts.len() as f64 * d {
                let mut verts = verts;
                verts.sort_unstable();
                found = Some(ExpansionViolation { set: verts, cut });
                return false;
            }
            true
        });
        if !done {
            break;
        }
    }
    Ok(found)
}
