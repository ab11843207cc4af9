//! Cycle detection, biconnected blocks, long cycles and long paths.

use std::collections::VecDeque;

use crate::certificate::SimpleCycle;
use crate::graph::{Graph, Vertex};

use super::local_adjacency;

/// Some cycle of `g`, if any. In multigraphs a loop or a doubled edge counts.
pub fn exact_find_cycle(g: &Graph) -> Option<SimpleCycle> {
    if g.is_multigraph() {
        for e in g.edges() {
            if e.is_loop() {
                return Some(SimpleCycle::new(vec![e.u]));
            }
            if e.mult > 0 {
                return Some(SimpleCycle::new(vec![e.u, e.v]));
            }
        }
    }
    let n = g.n();
    let mut parent = vec![0 as Vertex; n + 1];
    let mut depth = vec![usize::MAX; n + 1];
    for s in g.vertices() {
        if depth[s as usize] != usize::MAX {
            continue;
        }
        depth[s as usize] = 0;
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let nb = g.neighbors(v);
            if *i == nb.len() {
                stack.pop();
                continue;
            }
            let w = nb[*i];
            *i += 1;
            if w == parent[v as usize] {
                continue;
            }
            if depth[w as usize] == usize::MAX {
                depth[w as usize] = depth[v as usize] + 1;
                parent[w as usize] = v;
                stack.push((w, 0));
            } else if depth[w as usize] < depth[v as usize] {
                // back edge to an ancestor
                let mut cyc = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x as usize];
                    cyc.push(x);
                }
                cyc.reverse();
                return Some(SimpleCycle::new(cyc));
            }
        }
    }
    None
}

pub fn exact_is_cycle_free(g: &Graph) -> bool {
    exact_find_cycle(g).is_none()
}

/// Edges to delete to reach a forest: `|E| - N + c`.
pub fn exact_distance_to_cycle_free(g: &Graph) -> usize {
    g.edge_count() + g.component_count() - g.n()
}

/// Vertex sets of the biconnected blocks (bridges give 2-vertex blocks;
/// isolated vertices give none). Local 0-based indices.
pub fn biconnected_blocks(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        if disc[s] != UNSEEN {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        // (vertex, parent, next index, parent edge skipped)
        let mut stack = vec![(s, UNSEEN, 0usize, false)];
        while !stack.is_empty() {
            let top = stack.len() - 1;
            let (v, p, i, skipped) = stack[top];
            if i < adj[v].len() {
                stack[top].2 += 1;
                let w = adj[v][i];
                if w == p && !skipped {
                    stack[top].3 = true;
                    continue;
                }
                if disc[w] == UNSEEN {
                    edges.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0, false));
                } else if disc[w] < disc[v] {
                    edges.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, ..)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some((a, b)) = edges.pop() {
                            block.push(a);
                            block.push(b);
                            if (a, b) == (u, v) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        block.dedup();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Whether the subgraph induced by `set` is 2-connected with at least 3
/// vertices.
pub fn is_two_connected(g: &Graph, set: &[Vertex]) -> bool {
    if set.len() < 3 {
        return false;
    }
    let (sub, _) = g.induced(set);
    let adj = local_adjacency(&sub);
    let blocks = biconnected_blocks(&adj);
    blocks.len() == 1 && blocks[0].len() == set.len()
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist
}

/// Two internally vertex-disjoint `s`–`t` paths (unit vertex capacities).
pub fn two_disjoint_paths(adj: &[Vec<usize>], s: usize, t: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    // node x splits into in = 2x and out = 2x + 1
    let n = adj.len();
    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<i32> = Vec::new();
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let add = |a: usize, b: usize, c: i32, to: &mut Vec<usize>, cap: &mut Vec<i32>, head: &mut Vec<Vec<usize>>| {
        head[a].push(to.len());
        to.push(b);
        cap.push(c);
        head[b].push(to.len());
        to.push(a);
        cap.push(0);
    };
    for x in 0..n {
        let c = if x == s || x == t { 2 } else { 1 };
        add(2 * x, 2 * x + 1, c, &mut to, &mut cap, &mut head);
        for &y in &adj[x] {
            add(2 * x + 1, 2 * y, 1, &mut to, &mut cap, &mut head);
        }
    }
    let source = 2 * s + 1;
    let sink = 2 * t;
    for _ in 0..2 {
        let mut prev = vec![usize::MAX; 2 * n];
        let mut seen = vec![false; 2 * n];
        seen[source] = true;
        let mut q = VecDeque::from([source]);
        while let Some(x) = q.pop_front() {
            if x == sink {
                break;
            }
            for &e in &head[x] {
                if cap[e] > 0 && !seen[to[e]] {
                    seen[to[e]] = true;
                    prev[to[e]] = e;
                    q.push_back(to[e]);
                }
            }
        }
        if !seen[sink] {
            return None;
        }
        let mut x = sink;
        while x != source {
            let e = prev[x];
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            x = to[e ^ 1];
        }
    }
    // decompose the flow along saturated out->in arcs
    let mut paths = Vec::new();
    let mut used = vec![false; to.len()];
    for _ in 0..2 {
        let mut path = vec![s];
        let mut x = source;
        let mut guard = 0;
        while x != sink {
            guard += 1;
            if guard > 4 * n + 4 {
                return None;
            }
            let e = head[x]
                .iter()
                .copied()
                .find(|&e| e % 2 == 0 && cap[e] == 0 && !used[e] && to[e] != x ^ 1)?;
            used[e] = true;
            let y = to[e];
            // y is an in-node; move through its split arc unless it is the sink
            if y == sink {
                path.push(t);
                break;
            }
            path.push(y / 2);
            x = y + 1;
        }
        paths.push(path);
    }
    let b = paths.pop()?;
    let a = paths.pop()?;
    Some((a, b))
}

/// A simple cycle of length at least `k` in `g`, if one exists (exact).
pub fn find_long_cycle(g: &Graph, k: usize) -> Option<SimpleCycle> {
    let adj = local_adjacency(g);
    for block in biconnected_blocks(&adj) {
        if block.len() < 3 || block.len() < k {
            continue;
        }
        let mut index = vec![usize::MAX; adj.len()];
        for (i, &v) in block.iter().enumerate() {
            index[v] = i;
        }
        let badj: Vec<Vec<usize>> = block
            .iter()
            .map(|&v| adj[v].iter().filter(|&&w| index[w] != usize::MAX).map(|&w| index[w]).collect())
            .collect();
        if let Some(c) = long_cycle_in_block(&badj, k) {
            return Some(SimpleCycle::new(c.into_iter().map(|i| block[i] as Vertex + 1).collect()));
        }
    }
    None
}

fn long_cycle_in_block(adj: &[Vec<usize>], k: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    // a far pair in a 2-connected block yields a cycle of length >= 2 dist
    let mut start = 0;
    for _ in 0..n.min(4) {
        let dist = bfs(adj, start);
        let (far, &df) = dist.iter().enumerate().max_by_key(|&(i, &d)| (d, std::cmp::Reverse(i)))?;
        if 2 * df >= k {
            let (p, q) = two_disjoint_paths(adj, start, far)?;
            let mut cyc = p;
            cyc.extend(q.iter().rev().skip(1).take(q.len().saturating_sub(2)));
            if cyc.len() >= k {
                return Some(cyc);
            }
        }
        start = far;
    }
    let mut ecc_max = 0;
    for s in 0..n {
        let dist = bfs(adj, s);
        let (far, &df) = dist.iter().enumerate().max_by_key(|&(_, &d)| d)?;
        ecc_max = ecc_max.max(df);
        if 2 * df >= k {
            let (p, q) = two_disjoint_paths(adj, s, far)?;
            let mut cyc = p;
            cyc.extend(q.iter().rev().skip(1).take(q.len().saturating_sub(2)));
            if cyc.len() >= k {
                return Some(cyc);
            }
        }
    }
    exhaustive_long_cycle(adj, k)
}

fn exhaustive_long_cycle(adj: &[Vec<usize>], k: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut path = vec![s];
        on_path[s] = true;
        if let Some(c) = dfs_cycle(adj, s, k, &mut path, &mut on_path) {
            return Some(c);
        }
        on_path[s] = false;
    }
    None
}

fn dfs_cycle(adj: &[Vec<usize>], s: usize, k: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> Option<Vec<usize>> {
    let v = *path.last().unwrap();
    for &w in &adj[v] {
        if w == s && path.len() >= k.max(3) {
            return Some(path.clone());
        }
        if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            let r = dfs_cycle(adj, s, k, path, on_path);
            path.pop();
            on_path[w] = false;
            if r.is_some() {
                return r;
            }
        }
    }
    None
}

/// A simple path with exactly `m` edges, if one exists.
pub fn find_simple_path(g: &Graph, m: usize) -> Option<Vec<Vertex>> {
    let adj = local_adjacency(g);
    let n = adj.len();
    if m + 1 > n {
        return None;
    }
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut path = vec![s];
        on_path[s] = true;
        if dfs_path(&adj, m, &mut path, &mut on_path) {
            return Some(path.into_iter().map(|i| i as Vertex + 1).collect());
        }
        on_path[s] = false;
    }
    None
}

fn dfs_path(adj: &[Vec<usize>], m: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
    if path.len() == m + 1 {
        return true;
    }
    let v = *path.last().unwrap();
    for &w in &adj[v] {
        if !on_path[w] {
            on_path[w] = true;
            path.push(w);
            if dfs_path(adj, m, path, on_path) {
                return true;
            }
            path.pop();
            on_path[w] = false;
        }
    }
    false
}
