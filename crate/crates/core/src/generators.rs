//! Seeded instance families with attached ground truth.
//!
//! Every generator is a deterministic function of its parameters and seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::MinorWitness;
use crate::exact::exact_distance_to_cycle_free;
use crate::graph::{Graph, Vertex};
use crate::pattern::{Pattern, RootedTree};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edges of a uniformly grown random tree on `0..n` with maximum degree `d`
/// (`d >= 2`, or `n <= 2`).
fn random_tree_edges<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut deg = vec![0usize; n];
    let mut open: Vec<usize> = Vec::new();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 0..n {
        if v > 0 {
            let i = rng.gen_range(0..open.len());
            let u = open[i];
            edges.push((u, v));
            deg[u] += 1;
            deg[v] += 1;
            if deg[u] >= d {
                open.swap_remove(i);
            }
        }
        if deg[v] < d {
            open.push(v);
        }
    }
    edges
}

fn to_vertex(i: usize) -> Vertex {
    i as Vertex + 1
}

/// Random forest: a degree-capped random tree with each edge kept with
/// probability 0.9.
pub fn gen_forest(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParameter("n must be at least 1".into()));
    }
    if d == 0 {
        return Ok(Graph::new(n, 0));
    }
    let mut rng = rng_for(seed);
    let mut g = Graph::new(n, d);
    if d == 1 {
        for i in (0..n - 1).step_by(2) {
            g.add_edge(to_vertex(i), to_vertex(i + 1)).expect("matching fits d=1");
        }
        return Ok(g);
    }
    for (u, v) in random_tree_edges(n, d, &mut rng) {
        if rng.gen_bool(0.9) {
            g.add_edge(to_vertex(u), to_vertex(v)).expect("tree respects d");
        }
    }
    Ok(g)
}

/// Connected graph with `n - 1 + ceil(eps d n)` edges: a random spanning tree
/// plus random extra edges, so the distance to cycle-freeness is exactly
/// `ceil(eps d n)`.
pub fn gen_far_from_cycle_free(n: usize, d: usize, eps: f64, seed: u64) -> Result<Graph, GenError> {
    if n < 2 || d < 2 {
        return Err(GenError::BadParameter("need n >= 2 and d >= 2".into()));
    }
    let extra = (eps * d as f64 * n as f64).ceil() as usize;
    if n - 1 + extra > d * n / 2 {
        return Err(GenError::Infeasible(format!("{extra} extra edges do not fit degree bound {d}")));
    }
    let mut rng = rng_for(seed);
    'attempt: for _ in 0..64 {
        let mut g = Graph::new(n, d);
        for (u, v) in random_tree_edges(n, d, &mut rng) {
            g.add_edge(to_vertex(u), to_vertex(v)).expect("tree respects d");
        }
        let mut open: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) < d).collect();
        let mut added = 0;
        let mut misses = 0;
        while added < extra {
            if open.len() < 2 || misses > 1000 {
                continue 'attempt;
            }
            let i = rng.gen_range(0..open.len());
            let j = rng.gen_range(0..open.len());
            let (a, b) = (open[i], open[j]);
            if a == b || g.has_edge(a, b) {
                misses += 1;
                continue;
            }
            misses = 0;
            g.add_edge(a, b).expect("both endpoints have spare degree");
            added += 1;
            open.retain(|&v| g.degree(v) < d);
        }
        return Ok(g);
    }
    Err(GenError::Infeasible("could not place extra edges".into()))
}

/// The cycle `1, 2, ..., n, 1` plus a uniformly random perfect matching that
/// avoids cycle edges (resampled until it does).
pub fn gen_lower_bound_family(n: usize, seed: u64) -> Result<Graph, GenError> {
    if n % 2 != 0 || n < 6 {
        return Err(GenError::BadParameter(format!("n = {n} must be even and at least 6")));
    }
    let mut rng = rng_for(seed);
    let mut perm: Vec<Vertex> = (1..=n as Vertex).collect();
    loop {
        let mut g = Graph::new(n, 3);
        for i in 1..=n as Vertex {
            g.add_edge(i, i % n as Vertex + 1).expect("cycle fits");
        }
        perm.shuffle(&mut rng);
        if perm.chunks(2).all(|p| g.add_edge(p[0], p[1]).is_ok()) {
            return Ok(g);
        }
    }
}

/// Adds `pattern` as a subgraph on randomly chosen vertices of `base`,
/// deleting base edges at chosen vertices when the degree bound requires it.
/// Returns the new graph and a singleton-branch-set witness.
pub fn gen_planted_minor(base: &Graph, pattern: &Pattern, seed: u64) -> Result<(Graph, MinorWitness), GenError> {
    let k = pattern.size;
    if k > base.n() {
        return Err(GenError::Infeasible(format!("pattern has {k} nodes, graph has {}", base.n())));
    }
    let d = base.d();
    if pattern.degrees().into_iter().max().unwrap_or(0) > d {
        return Err(GenError::Infeasible(format!("pattern degree exceeds bound {d}")));
    }
    let mut rng = rng_for(seed);
    let mut verts: Vec<Vertex> = base.vertices().collect();
    verts.shuffle(&mut rng);
    let image: Vec<Vertex> = verts[..k].to_vec();
    let mut g = base.clone();
    let mut planted: Vec<(Vertex, Vertex)> = Vec::new();
    let is_planted = |p: &[(Vertex, Vertex)], a: Vertex, b: Vertex| p.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
    for &(a, b) in &pattern.edges {
        let (x, y) = (image[a], image[b]);
        if !g.has_edge(x, y) {
            for z in [x, y] {
                if g.degree(z) >= d {
                    let victim = *g
                        .neighbors(z)
                        .iter()
                        .find(|&&w| !is_planted(&planted, z, w))
                        .expect("a non-planted edge exists below the pattern degree");
                    g.remove_edge(z, victim);
                }
            }
            g.add_edge(x, y).expect("room was made");
        }
        planted.push((x, y));
    }
    let sets = image.iter().map(|&v| vec![v]).collect();
    let w = MinorWitness::from_branch_sets(&g, pattern.clone(), sets).expect("pattern edges are present");
    Ok((g, w))
}

/// `n / block` disjoint blocks, each a random tree with `pattern` planted in
/// it; leftover vertices stay isolated.
pub fn gen_planted_blocks(
    n: usize,
    d: usize,
    pattern: &Pattern,
    block: usize,
    seed: u64,
) -> Result<(Graph, Vec<MinorWitness>), GenError> {
    if block < pattern.size || block == 0 {
        return Err(GenError::Infeasible(format!("block {block} smaller than pattern")));
    }
    if d < 2 {
        return Err(GenError::BadParameter("need d >= 2".into()));
    }
    let mut rng = rng_for(seed);
    let mut g = Graph::new(n, d);
    let mut witnesses = Vec::new();
    for b in 0..n / block {
        let mut local = Graph::new(block, d);
        for (u, v) in random_tree_edges(block, d, &mut rng) {
            local.add_edge(to_vertex(u), to_vertex(v)).expect("tree respects d");
        }
        let (local, w) = gen_planted_minor(&local, pattern, rng.gen())?;
        let off = (b * block) as Vertex;
        for e in local.edges() {
            g.add_edge(e.u + off, e.v + off).expect("block edges fit");
        }
        let sets = w.branch_sets.iter().map(|s| s.iter().map(|&v| v + off).collect()).collect();
        witnesses.push(MinorWitness::from_branch_sets(&g, pattern.clone(), sets).expect("shifted witness"));
    }
    Ok((g, witnesses))
}

/// Disjoint union of the cycle `C_{n - s}` and the clique `K_s`, `s = sqrt(n)`.
pub fn gen_clique_plus_cycle(n: usize) -> Result<Graph, GenError> {
    let s = perfect_square_root(n)?;
    let mut g = Graph::new(n, s.max(3));
    add_cycle(&mut g, 1, n - s);
    let first = (n - s + 1) as Vertex;
    for a in first..=n as Vertex {
        for b in a + 1..=n as Vertex {
            g.add_edge(a, b).expect("clique fits");
        }
    }
    Ok(g)
}

/// The companion of [`gen_clique_plus_cycle`]: the same cycle plus `sqrt(n)`
/// isolated vertices.
pub fn gen_cycle_plus_isolated(n: usize) -> Result<Graph, GenError> {
    let s = perfect_square_root(n)?;
    let mut g = Graph::new(n, s.max(3));
    add_cycle(&mut g, 1, n - s);
    Ok(g)
}

fn perfect_square_root(n: usize) -> Result<usize, GenError> {
    let s = (n as f64).sqrt().round() as usize;
    if s * s != n || s < 4 {
        return Err(GenError::BadParameter(format!("n = {n} must be a perfect square with root >= 4")));
    }
    Ok(s)
}

fn add_cycle(g: &mut Graph, first: Vertex, len: usize) {
    let len = len as Vertex;
    for i in 0..len {
        g.add_edge(first + i, first + (i + 1) % len).expect("cycle fits");
    }
}

/// `n / k` disjoint `k`-cycles joined into a tree by bridges between
/// randomly chosen cycle vertices; leftover vertices hang off as a path.
/// Exactly one edge per cycle must go to remove every `C_k` minor.
pub fn gen_disjoint_cycles(n: usize, k: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if k < 3 || d < 3 || n < k {
        return Err(GenError::BadParameter("need k >= 3, d >= 3, n >= k".into()));
    }
    let mut rng = rng_for(seed);
    let c = n / k;
    let mut g = Graph::new(n, d);
    for i in 0..c {
        add_cycle(&mut g, (i * k) as Vertex + 1, k);
    }
    let mut open: Vec<Vertex> = (1..=k as Vertex).collect();
    for i in 1..c {
        let first = (i * k) as Vertex + 1;
        let j = rng.gen_range(0..open.len());
        let u = open.swap_remove(j);
        let v = first + rng.gen_range(0..k as Vertex);
        g.add_edge(u, v).expect("both have spare degree");
        open.extend((first..first + k as Vertex).filter(|&x| x != v));
    }
    let mut prev = open[rng.gen_range(0..open.len())];
    for v in (c * k) as Vertex + 1..=n as Vertex {
        g.add_edge(prev, v).expect("path tail fits");
        prev = v;
    }
    Ok(g)
}

/// `n / (k + 1)` copies of `K_{1,k}` with leaf 1 of each copy joined to
/// leaf 2 of the next; leftover vertices stay isolated.
pub fn gen_linked_stars(n: usize, k: usize) -> Result<Graph, GenError> {
    if k < 2 {
        return Err(GenError::BadParameter("need k >= 2".into()));
    }
    let c = n / (k + 1);
    let mut g = Graph::new(n, k.max(3));
    for i in 0..c {
        let centre = (i * (k + 1)) as Vertex + 1;
        for l in 1..=k as Vertex {
            g.add_edge(centre, centre + l).expect("star fits");
        }
        if i > 0 {
            let prev_leaf = centre - (k as Vertex + 1) + 1;
            g.add_edge(prev_leaf, centre + 2.min(k as Vertex)).expect("link fits");
        }
    }
    Ok(g)
}

/// Disjoint paths and cycles (maximum degree 2): `K_{1,3}`-minor-free.
pub fn gen_star_free(n: usize, seed: u64) -> Graph {
    let mut rng = rng_for(seed);
    let mut g = Graph::new(n, 3);
    let mut v = 1usize;
    while v <= n {
        let len = rng.gen_range(1..=12).min(n - v + 1);
        for i in 0..len - 1 {
            g.add_edge((v + i) as Vertex, (v + i + 1) as Vertex).expect("path fits");
        }
        if len >= 3 && rng.gen_bool(0.5) {
            g.add_edge(v as Vertex, (v + len - 1) as Vertex).expect("closing edge fits");
        }
        v += len;
    }
    g
}

/// Disjoint random trees with at most `m` vertices each: `P_m`-minor-free.
pub fn gen_path_free(n: usize, d: usize, m: usize, seed: u64) -> Graph {
    small_components(n, d, m.max(1), seed)
}

/// Disjoint random trees with fewer vertices than the pattern: free of any
/// minor with more nodes.
pub fn gen_tree_free(n: usize, d: usize, tree: &RootedTree, seed: u64) -> Graph {
    small_components(n, d, tree.size().saturating_sub(1).max(1), seed)
}

fn small_components(n: usize, d: usize, max_size: usize, seed: u64) -> Graph {
    let mut rng = rng_for(seed);
    let mut g = Graph::new(n, d.max(2));
    let mut v = 0usize;
    while v < n {
        let size = rng.gen_range(1..=max_size).min(n - v);
        for (a, b) in random_tree_edges(size, d.max(2), &mut rng) {
            g.add_edge(to_vertex(v + a), to_vertex(v + b)).expect("tree fits");
        }
        v += size;
    }
    g
}

/// Random cactus whose cycles all have length below `k`, so it is
/// `C_k`-minor-free. Components are joined by random bridges.
pub fn gen_cactus(n: usize, k: usize, seed: u64) -> Result<Graph, GenError> {
    if k < 4 {
        return Err(GenError::BadParameter("cycles shorter than k need k >= 4".into()));
    }
    let mut rng = rng_for(seed);
    let mut g = Graph::new(n, 3);
    let mut v = 1usize;
    while v <= n {
        let len = match rng.gen_range(1..k) {
            2 => 1,
            l => l,
        }
        .min(n - v + 1);
        let first = v as Vertex;
        if len >= 3 {
            add_cycle(&mut g, first, len);
        }
        // a bridge to a random earlier vertex keeps every block a cycle or an edge
        let open: Vec<Vertex> = (1..first).filter(|&x| g.degree(x) < 3).collect();
        if let Some(&u) = open.choose(&mut rng) {
            g.add_edge(u, first).expect("bridge fits");
        }
        v += len;
    }
    Ok(g)
}

/// Disjoint triangles (plus up to two leftover isolated vertices).
pub fn gen_disjoint_triangles(n: usize) -> Graph {
    let mut g = Graph::new(n, 3);
    for i in 0..n / 3 {
        add_cycle(&mut g, (3 * i) as Vertex + 1, 3);
    }
    g
}

/// A perfect matching on `2 * (n / 2)` vertices.
pub fn gen_matching(n: usize) -> Graph {
    let mut g = Graph::new(n, 3);
    for i in 0..n / 2 {
        g.add_edge((2 * i + 1) as Vertex, (2 * i + 2) as Vertex).expect("matching fits");
    }
    g
}

/// Instance families addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Forest,
    FarFromCycleFree,
    LowerBound,
    CliquePlusCycle,
    CyclePlusIsolated,
    DisjointCycles,
    LinkedStars,
    PlantedSpiders,
    StarFree,
    PathFree,
    TreeFree,
    Cactus,
    DisjointTriangles,
    Matching,
}

impl Family {
    pub const ALL: [Family; 14] = [
        Family::Forest,
        Family::FarFromCycleFree,
        Family::LowerBound,
        Family::CliquePlusCycle,
        Family::CyclePlusIsolated,
        Family::DisjointCycles,
        Family::LinkedStars,
        Family::PlantedSpiders,
        Family::StarFree,
        Family::PathFree,
        Family::TreeFree,
        Family::Cactus,
        Family::DisjointTriangles,
        Family::Matching,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Forest => "forest",
            Family::FarFromCycleFree => "far_from_cycle_free",
            Family::LowerBound => "lower_bound",
            Family::CliquePlusCycle => "clique_plus_cycle",
            Family::CyclePlusIsolated => "cycle_plus_isolated",
            Family::DisjointCycles => "disjoint_cycles",
            Family::LinkedStars => "linked_stars",
            Family::PlantedSpiders => "planted_spiders",
            Family::StarFree => "star_free",
            Family::PathFree => "path_free",
            Family::TreeFree => "tree_free",
            Family::Cactus => "cactus",
            Family::DisjointTriangles => "disjoint_triangles",
            Family::Matching => "matching",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

fn default_d() -> usize {
    3
}

fn default_k() -> usize {
    3
}

fn default_legs() -> Vec<usize> {
    vec![2, 1, 1]
}

fn default_block() -> usize {
    64
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default)]
    pub eps: f64,
    /// Cycle length, star size or path length, depending on the family.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Spider legs for planted and tree-free families.
    #[serde(default = "default_legs")]
    pub legs: Vec<usize>,
    #[serde(default = "default_block")]
    pub block: usize,
    #[serde(default)]
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family, n: usize) -> Self {
        InstanceSpec {
            family,
            n,
            d: default_d(),
            eps: 0.0,
            k: default_k(),
            legs: default_legs(),
            block: default_block(),
            seed: 0,
        }
    }
}

/// Ground-truth metadata written next to a generated graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub spec: InstanceSpec,
    pub n: usize,
    pub d: usize,
    pub edges: usize,
    pub components: usize,
    pub max_degree: usize,
    /// `|E| - n + #components`.
    pub cycle_distance: usize,
    /// Pattern the instance is free of by construction, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_of: Option<Pattern>,
    /// Lower bound on the number of edge removals needed to kill `planted`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted_distance_lb: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<MinorWitness>,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub truth: GroundTruth,
}

pub fn generate(spec: &InstanceSpec) -> Result<Instance, GenError> {
    let InstanceSpec { family, n, d, eps, k, seed, .. } = *spec;
    let spider = || RootedTree::spider(&spec.legs).to_pattern();
    let mut free_of = None;
    let mut planted_lb = None;
    let mut witnesses = Vec::new();
    let graph = match family {
        Family::Forest => {
            free_of = Some(Pattern::cycle(3));
            gen_forest(n, d, seed)?
        }
        Family::FarFromCycleFree => gen_far_from_cycle_free(n, d, eps, seed)?,
        Family::LowerBound => gen_lower_bound_family(n, seed)?,
        Family::CliquePlusCycle => gen_clique_plus_cycle(n)?,
        Family::CyclePlusIsolated => {
            free_of = Some(Pattern::star(3));
            gen_cycle_plus_isolated(n)?
        }
        Family::DisjointCycles => {
            planted_lb = Some(n / k);
            gen_disjoint_cycles(n, k, d, seed)?
        }
        Family::LinkedStars => {
            planted_lb = Some(n / (k + 1));
            gen_linked_stars(n, k)?
        }
        Family::PlantedSpiders => {
            let (g, w) = gen_planted_blocks(n, d, &spider(), spec.block, seed)?;
            planted_lb = Some(w.len());
            witnesses = w;
            g
        }
        Family::StarFree => {
            free_of = Some(Pattern::star(3));
            gen_star_free(n, seed)
        }
        Family::PathFree => {
            free_of = Some(Pattern::path(k));
            gen_path_free(n, d, k, seed)
        }
        Family::TreeFree => {
            let t = RootedTree::spider(&spec.legs);
            free_of = Some(t.to_pattern());
            gen_tree_free(n, d, &t, seed)
        }
        Family::Cactus => {
            free_of = Some(Pattern::cycle(k));
            gen_cactus(n, k, seed)?
        }
        Family::DisjointTriangles => {
            free_of = Some(Pattern::cycle(4));
            gen_disjoint_triangles(n)
        }
        Family::Matching => {
            free_of = Some(Pattern::path(2));
            gen_matching(n)
        }
    };
    let truth = GroundTruth {
        spec: spec.clone(),
        n: graph.n(),
        d: graph.d(),
        edges: graph.edge_count(),
        components: graph.component_count(),
        max_degree: graph.max_degree(),
        cycle_distance: exact_distance_to_cycle_free(&graph),
        free_of,
        planted_distance_lb: planted_lb,
        witnesses,
    };
    Ok(Instance { graph, truth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{verify_certificate, Certificate};
    use crate::exact::{exact_has_minor, exact_is_cycle_free};

    #[test]
    fn forests_are_cycle_free() {
        assert_eq!(gen_forest(1, 3, 0).unwrap().n(), 1);
        for seed in 0..20 {
            let g = gen_forest(200, 3, seed).unwrap();
            assert!(exact_is_cycle_free(&g));
            assert!(g.max_degree() <= 3);
            assert_eq!(exact_distance_to_cycle_free(&g), 0);
        }
    }

    #[test]
    fn far_instance_has_exact_distance() {
        let g = gen_far_from_cycle_free(100, 4, 0.05, 7).unwrap();
        assert!(g.is_connected());
        assert_eq!(exact_distance_to_cycle_free(&g), 20);
        let t = gen_far_from_cycle_free(100, 4, 0.0, 7).unwrap();
        assert_eq!(exact_distance_to_cycle_free(&t), 0);
        assert!(matches!(gen_far_from_cycle_free(10, 3, 0.9, 1), Err(GenError::Infeasible(_))));
    }

    #[test]
    fn lower_bound_family_is_cubic() {
        let g = gen_lower_bound_family(512, 3).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        g.validate().unwrap();
        assert!(gen_lower_bound_family(11, 3).is_err());
    }

    #[test]
    fn deterministic_in_seed() {
        let a = gen_far_from_cycle_free(300, 3, 0.1, 9).unwrap();
        let b = gen_far_from_cycle_free(300, 3, 0.1, 9).unwrap();
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn planted_star_in_path() {
        let path = Graph::from_edges(20, 3, (1..20).map(|i| (i, i + 1))).unwrap();
        let (g, w) = gen_planted_minor(&path, &Pattern::star(3), 4).unwrap();
        g.validate().unwrap();
        verify_certificate(&g, &Certificate::MinorWitness(w)).unwrap();
        assert!(exact_has_minor(&g, &Pattern::star(3)).unwrap().is_some());
        let (g, w) = gen_planted_minor(&path, &Pattern::cycle(5), 4).unwrap();
        verify_certificate(&g, &Certificate::MinorWitness(w)).unwrap();
    }

    #[test]
    fn planted_blocks_carry_witnesses() {
        let (g, ws) = gen_planted_blocks(256, 3, &RootedTree::spider(&[2, 1, 1]).to_pattern(), 64, 1).unwrap();
        assert_eq!(ws.len(), 4);
        for w in ws {
            verify_certificate(&g, &Certificate::MinorWitness(w)).unwrap();
        }
    }

    #[test]
    fn clique_plus_cycle_shapes() {
        let g = gen_clique_plus_cycle(100).unwrap();
        let mut sizes: Vec<usize> = g.components().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![10, 90]);
        let h = gen_cycle_plus_isolated(100).unwrap();
        assert_eq!(h.max_degree(), 2);
        assert!(gen_clique_plus_cycle(99).is_err());
    }

    #[test]
    fn free_families_are_free() {
        let check = |g: &Graph, h: &Pattern| {
            for comp in g.components() {
                let (sub, _) = g.induced(&comp);
                if sub.n() <= 20 {
                    assert!(exact_has_minor(&sub, h).unwrap().is_none());
                }
            }
        };
        check(&gen_star_free(200, 1), &Pattern::star(3));
        check(&gen_path_free(200, 3, 4, 1), &Pattern::path(4));
        check(&gen_tree_free(200, 3, &RootedTree::spider(&[2, 1, 1]), 1), &RootedTree::spider(&[2, 1, 1]).to_pattern());
        check(&gen_disjoint_triangles(30), &Pattern::cycle(4));
        check(&gen_matching(30), &Pattern::path(2));
        for seed in 0..10 {
            let g = gen_cactus(300, 5, seed).unwrap();
            g.validate().unwrap();
            assert!(crate::exact::find_long_cycle(&g, 5).is_none());
        }
    }

    #[test]
    fn disjoint_cycles_structure() {
        let g = gen_disjoint_cycles(2050, 4, 3, 2).unwrap();
        assert!(g.is_connected());
        assert_eq!(exact_distance_to_cycle_free(&g), 512);
        assert!(g.max_degree() <= 3);
    }

    #[test]
    fn generate_dispatch_round_trips_spec() {
        let mut spec = InstanceSpec::new(Family::FarFromCycleFree, 100);
        spec.eps = 0.05;
        spec.d = 4;
        let inst = generate(&spec).unwrap();
        assert_eq!(inst.truth.cycle_distance, 20);
        let json = serde_json::to_string(&inst.truth).unwrap();
        let back: GroundTruth = serde_json::from_str(&json).unwrap();
        assert_eq!(back, inst.truth);
        for f in Family::ALL {
            assert_eq!(Family::from_name(f.name()), Some(f));
        }
    }
}
