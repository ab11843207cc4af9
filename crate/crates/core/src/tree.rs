//! Testers for path, star, tree and forest minors, and the minor-or-sparse-cut
//! search together with the decomposition it drives.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{verify_certificate, Certificate, MinorWitness, SparseCut, Verdict};
use crate::error::{require, TestError};
use crate::exact::{search_minor, ExactError, MinorSearchOptions, SearchOutcome};
use crate::explore::Explorer;
use crate::graph::{CanonicalEdge, Graph, Vertex, NULL_VERTEX};
use crate::oracle::QueryOracle;
use crate::pattern::{Pattern, RootedTree};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// The path tester runs `ceil(c d^k / eps)` walks.
    pub path_trials_c: f64,
    /// Vertices a single tree-tester trial may discover before giving up.
    pub explored_cap: usize,
    /// Work cap of the minor search on an explored subgraph.
    pub search_work_cap: u64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig { path_trials_c: 2.2, explored_cap: 100_000, search_work_cap: 2_000_000 }
    }
}

/// Verdict of a BFS-based tester plus whether any trial was cut short.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeRun {
    pub verdict: Verdict,
    /// Some trial hit the explored-vertex cap or the search work cap and
    /// accepted without a full check.
    pub truncated: bool,
}

fn check_eps(eps: f64) -> Result<(), TestError> {
    require(eps > 0.0 && eps <= 1.0, || format!("eps = {eps} outside (0, 1]"))
}

/// Saturating conversion of a real-valued depth to a BFS depth; anything past
/// `n` already exhausts every component.
fn depth_of(x: f64, n: usize) -> usize {
    if !x.is_finite() || x >= (n + 1) as f64 {
        n + 1
    } else {
        x.max(0.0).ceil() as usize
    }
}

/// One uniform start and a `k`-step walk through uniform slots. Returns the
/// walk if it is a simple path with `k` edges.
pub fn pk_trial<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    k: usize,
    rng: &mut R,
) -> Result<Option<Vec<Vertex>>, TestError> {
    let n = oracle.n() as Vertex;
    let d = oracle.d();
    let mut walk = vec![rng.gen_range(1..=n)];
    for _ in 0..k {
        let u = oracle.neighbor(*walk.last().expect("walk is non-empty"), rng.gen_range(1..=d))?;
        if u == NULL_VERTEX || walk.contains(&u) {
            return Ok(None);
        }
        walk.push(u);
    }
    Ok(Some(walk))
}

fn path_witness(walk: &[Vertex]) -> MinorWitness {
    MinorWitness {
        pattern: Pattern::path(walk.len() - 1),
        branch_sets: walk.iter().map(|&v| vec![v]).collect(),
        connecting_edges: walk.windows(2).map(|w| (w[0], w[1])).collect(),
        root: None,
    }
}

pub fn test_pk_minor_free<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    k: usize,
    eps: f64,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    require(k >= 1, || "path length must be at least 1".into())?;
    check_eps(eps)?;
    let trials = (cfg.path_trials_c * (oracle.d() as f64).powi(k as i32) / eps).ceil() as u64;
    for _ in 0..trials {
        if let Some(walk) = pk_trial(oracle, k, rng)? {
            return Ok(Verdict::Reject(Certificate::MinorWitness(path_witness(&walk))));
        }
    }
    Ok(Verdict::Accept)
}

/// Subgraph on `set` using every adjacency the explorer knows, with local ids
/// in the order of `set`. Edges between two unexpanded vertices are unknown
/// and left out.
fn explored_graph(ex: &Explorer<'_, '_>, set: &[Vertex]) -> Graph {
    known_graph(|v| ex.known(v), set)
}

pub(crate) fn known_graph<'a>(known: impl Fn(Vertex) -> Option<&'a [Vertex]>, set: &[Vertex]) -> Graph {
    let index: HashMap<Vertex, Vertex> = set.iter().enumerate().map(|(i, &v)| (v, i as Vertex + 1)).collect();
    let mut edges = HashSet::new();
    for &v in set {
        for &u in known(v).unwrap_or(&[]) {
            if let Some(&j) = index.get(&u) {
                let i = index[&v];
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    Graph::from_edges_tight(set.len(), edges).expect("explored edges are simple")
}

pub(crate) fn globalize(w: MinorWitness, map: &[Vertex]) -> MinorWitness {
    let g = |v: Vertex| map[v as usize - 1];
    MinorWitness {
        pattern: w.pattern,
        branch_sets: w.branch_sets.iter().map(|s| s.iter().map(|&v| g(v)).collect()).collect(),
        connecting_edges: w.connecting_edges.iter().map(|&(a, b)| (g(a), g(b))).collect(),
        root: w.root.map(|(h, v)| (h, g(v))),
    }
}

/// Exact `K_{1,k}`-minor search. Graphs of maximum degree 2 have none for
/// `k >= 3`; a vertex of degree `k` is a star outright.
pub(crate) fn search_star(g: &Graph, k: usize, work_cap: u64) -> SearchOutcome {
    if let Some(c) = g.vertices().find(|&v| g.degree(v) >= k) {
        let mut sets = vec![vec![c]];
        sets.extend(g.neighbors(c)[..k].iter().map(|&u| vec![u]));
        let w = MinorWitness::from_branch_sets(g, Pattern::star(k), sets).expect("star edges exist");
        return SearchOutcome::Found(w);
    }
    if k >= 3 && g.max_degree() <= 2 {
        return SearchOutcome::Absent;
    }
    search_minor(g, &Pattern::star(k), &MinorSearchOptions { work_cap: Some(work_cap), root: None })
}

pub fn test_star_minor_free<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    k: usize,
    eps: f64,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    Ok(star_tester_run(oracle, k, eps, cfg, rng)?.verdict)
}

pub fn star_tester_run<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    k: usize,
    eps: f64,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<TreeRun, TestError> {
    require(k >= 2, || "star size must be at least 2".into())?;
    check_eps(eps)?;
    let n = oracle.n() as Vertex;
    let trials = (4.0 / eps).ceil() as u64;
    let max_layers = depth_of(2.0 * k as f64 / eps, oracle.n());
    let mut ex = Explorer::new(oracle);
    let mut truncated = false;
    for _ in 0..trials {
        let s = rng.gen_range(1..=n);
        let mut seen: HashSet<Vertex> = HashSet::from([s]);
        let mut order = vec![s];
        let mut layer = vec![s];
        for _ in 0..max_layers {
            let mut next = Vec::new();
            for &x in &layer {
                for &y in ex.neighbors(x)? {
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            if next.len() >= k {
                // everything before this layer is connected and touches it
                let mut sets = vec![order.clone()];
                sets.extend(next[..k].iter().map(|&u| vec![u]));
                let w = star_from_sets(&ex, k, sets);
                return Ok(TreeRun { verdict: Verdict::Reject(Certificate::MinorWitness(w)), truncated });
            }
            if next.is_empty() {
                break;
            }
            order.extend(&next);
            layer = next;
        }
        let local = explored_graph(&ex, &order);
        match search_star(&local, k, cfg.search_work_cap) {
            SearchOutcome::Found(w) => {
                let w = globalize(w, &order);
                return Ok(TreeRun { verdict: Verdict::Reject(Certificate::MinorWitness(w)), truncated });
            }
            SearchOutcome::Absent => {}
            SearchOutcome::GaveUp => truncated = true,
        }
    }
    Ok(TreeRun { verdict: Verdict::Accept, truncated })
}

/// Star witness from a centre set and leaf singletons, with connecting edges
/// read off the explored adjacency.
fn star_from_sets(ex: &Explorer<'_, '_>, k: usize, sets: Vec<Vec<Vertex>>) -> MinorWitness {
    let centre: HashSet<Vertex> = sets[0].iter().copied().collect();
    let connecting = sets[1..]
        .iter()
        .map(|leaf| {
            let y = leaf[0];
            let x = *ex
                .known(y)
                .and_then(|nb| nb.iter().find(|x| centre.contains(x)))
                .or_else(|| sets[0].iter().find(|&&x| ex.known(x).is_some_and(|nb| nb.contains(&y))))
                .expect("leaf was discovered from the centre set");
            (x, y)
        })
        .collect();
    let mut branch_sets = sets;
    branch_sets[0].sort_unstable();
    MinorWitness { pattern: Pattern::star(k), branch_sets, connecting_edges: connecting, root: None }
}

/// Depth of the tree tester's BFS: `k (8d/eps)^(4k+2)`, saturated at `n`.
pub fn tree_depth(k: usize, d: usize, eps: f64, n: usize) -> usize {
    depth_of(k as f64 * (8.0 * d as f64 / eps).powi(4 * k as i32 + 2), n)
}

struct TreeTrials {
    witness: Option<MinorWitness>,
    visited: HashSet<Vertex>,
    truncated: bool,
}

/// `ceil(4/eps) * reps` trials of the tree tester on the input minus
/// `forbidden`.
fn tree_trials<R: Rng + ?Sized>(
    ex: &mut Explorer<'_, '_>,
    pattern: &Pattern,
    eps: f64,
    reps: usize,
    forbidden: &HashSet<Vertex>,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<TreeTrials, TestError> {
    let n = ex.n();
    let depth = tree_depth(pattern.size, ex.d(), eps, n);
    let trials = (4.0 / eps).ceil() as usize * reps;
    let mut out = TreeTrials { witness: None, visited: HashSet::new(), truncated: false };
    for _ in 0..trials {
        let Some(s) = (0..64).map(|_| rng.gen_range(1..=n as Vertex)).find(|v| !forbidden.contains(v)) else {
            continue;
        };
        let mut seen: HashSet<Vertex> = HashSet::from([s]);
        let mut order = vec![s];
        let mut layer = vec![s];
        let mut capped = false;
        'bfs: for _ in 0..depth {
            let mut next = Vec::new();
            for &x in &layer {
                for &y in ex.neighbors(x)? {
                    if !forbidden.contains(&y) && seen.insert(y) {
                        next.push(y);
                        if seen.len() > cfg.explored_cap {
                            capped = true;
                            break 'bfs;
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            order.extend(&next);
            layer = next;
        }
        out.visited.extend(&order);
        if capped {
            out.truncated = true;
            continue;
        }
        let local = explored_graph(ex, &order);
        let opts = MinorSearchOptions { work_cap: Some(cfg.search_work_cap), root: None };
        match search_minor(&local, pattern, &opts) {
            SearchOutcome::Found(w) => {
                out.witness = Some(globalize(w, &order));
                return Ok(out);
            }
            SearchOutcome::Absent => {}
            SearchOutcome::GaveUp => out.truncated = true,
        }
    }
    Ok(out)
}

pub fn test_tree_minor_free<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    tree: &RootedTree,
    eps: f64,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    Ok(tree_tester_run(oracle, tree, eps, cfg, rng)?.verdict)
}

pub fn tree_tester_run<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    tree: &RootedTree,
    eps: f64,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<TreeRun, TestError> {
    require(tree.size() >= 2, || "tree must have at least 2 nodes".into())?;
    check_eps(eps)?;
    let mut ex = Explorer::new(oracle);
    let out = tree_trials(&mut ex, &tree.to_pattern(), eps, 1, &HashSet::new(), cfg, rng)?;
    let verdict = match out.witness {
        Some(w) => Verdict::Reject(Certificate::MinorWitness(w)),
        None => Verdict::Accept,
    };
    Ok(TreeRun { verdict, truncated: out.truncated })
}

/// Tests for a forest minor one component at a time, each on the input minus
/// everything the earlier components' runs visited.
pub fn test_forest_minor_free<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    forest: &Pattern,
    eps: f64,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    Ok(forest_tester_run(oracle, forest, eps, cfg, rng)?.verdict)
}

pub fn forest_tester_run<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    forest: &Pattern,
    eps: f64,
    cfg: &TreeConfig,
    rng: &mut R,
) -> Result<TreeRun, TestError> {
    require(forest.size >= 1 && forest.is_forest(), || "pattern must be a non-empty forest".into())?;
    check_eps(eps)?;
    let comps = forest.components();
    let m = comps.len();
    // each component run repeats until its error is below 1/(3m)
    let reps = ((3.0 * m as f64).ln() / 3f64.ln()).ceil().max(1.0) as usize;
    let n = oracle.n() as Vertex;
    let mut ex = Explorer::new(oracle);
    let mut forbidden: HashSet<Vertex> = HashSet::new();
    let mut parts = Vec::with_capacity(m);
    let mut truncated = false;
    for comp in &comps {
        let sub = forest.induced(comp);
        let w = if sub.size == 1 {
            let pick = (0..64).map(|_| rng.gen_range(1..=n)).find(|v| !forbidden.contains(v));
            pick.map(|v| {
                forbidden.insert(v);
                MinorWitness { pattern: sub.clone(), branch_sets: vec![vec![v]], connecting_edges: Vec::new(), root: None }
            })
        } else {
            let out = tree_trials(&mut ex, &sub, eps / 2.0, reps, &forbidden, cfg, rng)?;
            truncated |= out.truncated;
            forbidden.extend(out.visited);
            out.witness
        };
        match w {
            Some(w) => parts.push(w),
            None => return Ok(TreeRun { verdict: Verdict::Accept, truncated }),
        }
    }
    let w = compose_forest(forest, &comps, &parts);
    Ok(TreeRun { verdict: Verdict::Reject(Certificate::MinorWitness(w)), truncated })
}

fn compose_forest(forest: &Pattern, comps: &[Vec<usize>], parts: &[MinorWitness]) -> MinorWitness {
    let mut branch_sets = vec![Vec::new(); forest.size];
    let mut place: Vec<(usize, usize)> = vec![(0, 0); forest.size];
    for (i, comp) in comps.iter().enumerate() {
        for (j, &node) in comp.iter().enumerate() {
            branch_sets[node] = parts[i].branch_sets[j].clone();
            place[node] = (i, j);
        }
    }
    let connecting_edges = forest
        .edges
        .iter()
        .map(|&(a, b)| {
            let ((i, ja), (_, jb)) = (place[a], place[b]);
            let idx = parts[i]
                .pattern
                .edges
                .iter()
                .position(|&e| e == (ja.min(jb), ja.max(jb)))
                .expect("component edge");
            let (x, y) = parts[i].connecting_edges[idx];
            if ja < jb {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    MinorWitness { pattern: forest.clone(), branch_sets, connecting_edges, root: None }
}

/// Result of a BFS from a set that either stalls or keeps growing.
#[derive(Debug, Clone, PartialEq)]
pub enum Dichotomy {
    /// Some prefix `R` had a next level of at most `zeta |R| / 2` vertices.
    Cut(SparseCut),
    /// `t` levels were added; `reached` includes `M`.
    Expanded { reached: Vec<Vertex>, last_level: Vec<Vertex> },
}

/// BFS from `m` in `g - f` for up to `t` levels, stopping at the first
/// prefix whose next level is small.
pub fn bfs_dichotomy(g: &Graph, m: &[Vertex], f: &HashSet<Vertex>, t: usize, zeta: f64) -> Dichotomy {
    let mut seen: HashSet<Vertex> = HashSet::new();
    let mut reached: Vec<Vertex> = m.iter().copied().filter(|&v| seen.insert(v)).collect();
    let mut level = reached.clone();
    for _ in 0..t {
        let mut next = Vec::new();
        for &x in &level {
            for &y in g.neighbors(x) {
                if !f.contains(&y) && seen.insert(y) {
                    next.push(y);
                }
            }
        }
        if next.len() as f64 <= zeta * reached.len() as f64 / 2.0 {
            return Dichotomy::Cut(SparseCut::of(g, &reached, zeta));
        }
        reached.extend(&next);
        level = next;
    }
    Dichotomy::Expanded { reached, last_level: level }
}

/// Vertices of `m` with a neighbor outside `m` and `f`.
pub fn boundary(g: &Graph, m: &HashSet<Vertex>, f: &HashSet<Vertex>) -> Vec<Vertex> {
    let mut out: Vec<Vertex> =
        m.iter().copied().filter(|&x| g.neighbors(x).iter().any(|y| !m.contains(y) && !f.contains(y))).collect();
    out.sort_unstable();
    out
}

fn interior(g: &Graph, m: &HashSet<Vertex>, f: &HashSet<Vertex>) -> Vec<Vertex> {
    let b: HashSet<Vertex> = boundary(g, m, f).into_iter().collect();
    m.iter().copied().filter(|x| !b.contains(x)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum CutOrGood {
    Cut(SparseCut),
    /// A boundary vertex of `M` and its depth-`t` ball avoiding the interior
    /// of `M` and `F`.
    Good { v: Vertex, set: Vec<Vertex> },
}

/// BFS within `t` steps from `s`, avoiding `avoid`; sorted.
fn ball_avoiding(g: &Graph, s: Vertex, t: usize, avoid: &HashSet<Vertex>) -> Vec<Vertex> {
    let mut dist: HashMap<Vertex, usize> = HashMap::from([(s, 0)]);
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        if dist[&x] == t {
            continue;
        }
        for &y in g.neighbors(x) {
            if !avoid.contains(&y) && !dist.contains_key(&y) {
                dist.insert(y, dist[&x] + 1);
                q.push_back(y);
            }
        }
    }
    let mut out: Vec<Vertex> = dist.into_keys().collect();
    out.sort_unstable();
    out
}

pub fn cut_or_good(g: &Graph, m: &[Vertex], f: &HashSet<Vertex>, t: usize, zeta: f64) -> CutOrGood {
    if let Dichotomy::Cut(c) = bfs_dichotomy(g, m, f, t, zeta) {
        return CutOrGood::Cut(c);
    }
    let mset: HashSet<Vertex> = m.iter().copied().collect();
    let bd = boundary(g, &mset, f);
    let mut avoid: HashSet<Vertex> = interior(g, &mset, f).into_iter().collect();
    avoid.extend(f);
    let mut best: Option<(Vertex, Vec<Vertex>)> = None;
    for &v in &bd {
        let u = ball_avoiding(g, v, t, &avoid);
        if best.as_ref().map_or(true, |(_, b)| u.len() > b.len()) {
            best = Some((v, u));
        }
    }
    match best {
        Some((v, set)) => CutOrGood::Good { v, set },
        // a closed set is its own cut
        None => CutOrGood::Cut(SparseCut::of(g, m, zeta)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FindParams {
    pub zeta: f64,
    /// Floor of `f`; `None` means `k (4d/zeta)^(4k+2)`.
    pub f0: Option<f64>,
}

impl FindParams {
    pub fn new(zeta: f64) -> Self {
        FindParams { zeta, f0: None }
    }

    pub fn with_f0(mut self, f0: f64) -> Self {
        self.f0 = Some(f0);
        self
    }

    fn f(&self, k: usize, d: usize, forbidden: usize) -> f64 {
        let floor = self.f0.unwrap_or_else(|| k as f64 * (4.0 * d as f64 / self.zeta).powi(4 * k as i32 + 2));
        floor.max(forbidden as f64)
    }

    /// Bound on the distance from `v` to any vertex of a returned set.
    pub fn distance_bound(&self, k: usize, d: usize, forbidden: usize) -> f64 {
        let khat = 4 * k as i32 - 2;
        (4.0 * d as f64 / self.zeta).powi(khat) * (self.f(k, d, forbidden) / self.zeta).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma {
    Minor,
    Cut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FindOutput {
    pub sigma: Sigma,
    pub set: Vec<Vertex>,
    pub witness: Option<MinorWitness>,
    pub cut: Option<SparseCut>,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FindError {
    #[error("find precondition violated: {0}")]
    Precondition(String),
    #[error("find postcondition violated: {0}")]
    Postcondition(String),
}

/// Distances from `s` in `g - f`.
fn distances_avoiding(g: &Graph, sources: &[Vertex], f: &HashSet<Vertex>) -> HashMap<Vertex, usize> {
    let mut dist: HashMap<Vertex, usize> = sources.iter().map(|&s| (s, 0)).collect();
    let mut q: VecDeque<Vertex> = sources.iter().copied().collect();
    while let Some(x) = q.pop_front() {
        for &y in g.neighbors(x) {
            if !f.contains(&y) && !dist.contains_key(&y) {
                dist.insert(y, dist[&x] + 1);
                q.push_back(y);
            }
        }
    }
    dist
}

/// Searches near `v` for a `tree`-minor rooted at `v` or a sparse cut, in
/// `g` with `f` forbidden. `u` is a seed set around `v`.
pub fn find(
    g: &Graph,
    v: Vertex,
    u: &[Vertex],
    tree: &RootedTree,
    f: &HashSet<Vertex>,
    params: &FindParams,
) -> Result<FindOutput, FindError> {
    let (k, d, zeta) = (tree.size(), g.d(), params.zeta);
    let fv = params.f(k, d, f.len());
    let pre = |ok: bool, msg: &dyn Fn() -> String| if ok { Ok(()) } else { Err(FindError::Precondition(msg())) };
    pre(u.contains(&v), &|| format!("v = {v} not in U"))?;
    pre(!u.iter().any(|x| f.contains(x)), &|| "U meets F".into())?;
    pre(u.len() as f64 >= 4.0 * fv / zeta, &|| format!("|U| = {} below 4f/zeta = {:.1}", u.len(), 4.0 * fv / zeta))?;
    let dist = distances_avoiding(g, &[v], f);
    let ecc = u.iter().map(|x| dist.get(x).copied().unwrap_or(usize::MAX)).max().unwrap_or(0);
    let limit = 4.0 / zeta * (fv / zeta).ln();
    pre(ecc as f64 <= limit, &|| format!("U reaches distance {ecc} > {limit:.2}"))?;

    let out = find_step(g, v, u, tree, f, params, fv, &dist)?;
    check_find_output(g, v, tree, f, params, &dist, &out)?;
    Ok(out)
}

fn check_find_output(
    g: &Graph,
    v: Vertex,
    tree: &RootedTree,
    f: &HashSet<Vertex>,
    params: &FindParams,
    dist: &HashMap<Vertex, usize>,
    out: &FindOutput,
) -> Result<(), FindError> {
    let post = |ok: bool, msg: String| if ok { Ok(()) } else { Err(FindError::Postcondition(msg)) };
    post(!out.set.iter().any(|x| f.contains(x)), "S meets F".into())?;
    let bound = params.distance_bound(tree.size(), g.d(), f.len());
    for x in &out.set {
        let dx = dist.get(x).copied();
        post(dx.is_some(), format!("{x} unreachable from {v}"))?;
        post(dx.unwrap() as f64 <= bound, format!("{x} at distance {} > {bound:.2}", dx.unwrap()))?;
    }
    match out.sigma {
        Sigma::Minor => {
            let w = out.witness.as_ref().ok_or_else(|| FindError::Postcondition("minor without witness".into()))?;
            post(w.root == Some((tree.root, v)), "witness not rooted at v".into())?;
            post(verify_certificate(g, &Certificate::MinorWitness(w.clone())).is_ok(), "witness does not verify".into())?;
            let set: HashSet<Vertex> = out.set.iter().copied().collect();
            post(w.vertices().iter().all(|x| set.contains(x)), "witness leaves S".into())?;
        }
        Sigma::Cut => {
            let c = out.cut.as_ref().ok_or_else(|| FindError::Postcondition("cut without certificate".into()))?;
            post(c.side == out.set, "cut side differs from S".into())?;
            post(c.is_sparse(g.d()), format!("cut sparsity {:.4} above {}", c.sparsity(g.d()), c.zeta))?;
        }
    }
    Ok(())
}

fn cut_output(c: SparseCut) -> FindOutput {
    FindOutput { sigma: Sigma::Cut, set: c.side.clone(), witness: None, cut: Some(c) }
}

#[allow(clippy::too_many_arguments)]
fn find_step(
    g: &Graph,
    v: Vertex,
    u: &[Vertex],
    tree: &RootedTree,
    f: &HashSet<Vertex>,
    params: &FindParams,
    fv: f64,
    dist: &HashMap<Vertex, usize>,
) -> Result<FindOutput, FindError> {
    let (k, d, zeta, n) = (tree.size(), g.d(), params.zeta, g.n());
    let mut uset: Vec<Vertex> = u.to_vec();
    uset.sort_unstable();
    uset.dedup();
    if k == 1 {
        let w = MinorWitness {
            pattern: Pattern::new(1, Vec::new()),
            branch_sets: vec![vec![v]],
            connecting_edges: Vec::new(),
            root: Some((0, v)),
        };
        return Ok(FindOutput { sigma: Sigma::Minor, set: uset, witness: Some(w), cut: None });
    }

    // drop the farthest vertices (largest id first among ties) down to 4f/zeta
    let keep = (4.0 * fv / zeta).ceil() as usize;
    uset.sort_by_key(|x| (dist[x], *x));
    uset.truncate(keep.max(1));
    uset.sort_unstable();

    // split at the root edge with the largest far side
    let children = tree.children();
    let c = *children[tree.root]
        .iter()
        .max_by_key(|&&c| (tree.subtree(c).len(), std::cmp::Reverse(c)))
        .expect("a tree with two nodes has a root edge");
    let far = tree.subtree(c);
    let near: Vec<usize> = (0..k).filter(|x| far.binary_search(x).is_err()).collect();
    let (t1, map1) = tree.restrict(&near, tree.root);
    let (t2, map2) = tree.restrict(&far, c);

    let k1 = t1.size() as i32;
    let d1 = (4.0 * d as f64 / zeta).powi(4 * k1 - 2) * (6.0 * fv / (zeta * zeta)).ln();
    let a = match bfs_dichotomy(g, &uset, f, depth_of(2.0 * d1, n), zeta) {
        Dichotomy::Cut(c) => return Ok(cut_output(c)),
        Dichotomy::Expanded { reached, .. } => reached,
    };

    // the far subtree, beyond A
    let aset: HashSet<Vertex> = a.iter().copied().collect();
    let mut f2: HashSet<Vertex> = f.clone();
    f2.extend(interior(g, &aset, f));
    let t2_depth = depth_of(3.0 / zeta * (4.0 * f2.len() as f64 / zeta).ln(), n);
    let (v2, u2) = match cut_or_good(g, &a, f, t2_depth, zeta) {
        CutOrGood::Cut(c) => return Ok(cut_output(c)),
        CutOrGood::Good { v, set } => (v, set),
    };
    let s2 = find(g, v2, &u2, &t2, &f2, params)?;
    if s2.sigma == Sigma::Cut {
        return Ok(s2);
    }
    let w2 = s2.witness.expect("minor output has a witness");

    // the near subtree, around U and off the path to v2
    let from_u = distances_avoiding(g, &uset, f);
    let path = path_back(g, &from_u, v2);
    let inu: HashSet<Vertex> = uset.iter().copied().collect();
    let mut f1: HashSet<Vertex> = f.clone();
    f1.extend(path.iter().filter(|x| !inu.contains(x)));
    let f_prime = f1.clone();
    f1.extend(interior(g, &inu, &f_prime));
    let f1v = params.f(t1.size(), d, f1.len());
    let t1_depth = depth_of(3.0 / zeta * (4.0 * f1v / zeta).ln(), n);
    let (v1, u1) = match cut_or_good(g, &uset, &f_prime, t1_depth, zeta) {
        CutOrGood::Cut(c) => return Ok(cut_output(c)),
        CutOrGood::Good { v, set } => (v, set),
    };
    let s1 = find(g, v1, &u1, &t1, &f1, params)?;
    if s1.sigma == Sigma::Cut {
        return Ok(s1);
    }
    let w1 = s1.witness.expect("minor output has a witness");

    let mut sets = vec![Vec::new(); k];
    for (i, &old) in map1.iter().enumerate() {
        sets[old] = w1.branch_sets[i].clone();
    }
    for (i, &old) in map2.iter().enumerate() {
        sets[old] = w2.branch_sets[i].clone();
    }
    let w = join_root(g, tree, c, sets, v, f)?;
    let mut set = w.vertices();
    set.dedup();
    Ok(FindOutput { sigma: Sigma::Minor, set, witness: Some(w), cut: None })
}

/// Shortest path from the BFS sources of `dist` to `target`, source first.
fn path_back(g: &Graph, dist: &HashMap<Vertex, usize>, target: Vertex) -> Vec<Vertex> {
    let mut path = vec![target];
    let mut x = target;
    while dist[&x] > 0 {
        x = *g
            .neighbors(x)
            .iter()
            .filter(|y| dist.get(y) == Some(&(dist[&x] - 1)))
            .min()
            .expect("BFS predecessor");
        path.push(x);
    }
    path.reverse();
    path
}

/// Grows the root branch set so it contains `v` and touches the branch set
/// of `c`, through vertices no other branch set uses.
fn join_root(
    g: &Graph,
    tree: &RootedTree,
    c: usize,
    mut sets: Vec<Vec<Vertex>>,
    v: Vertex,
    f: &HashSet<Vertex>,
) -> Result<MinorWitness, FindError> {
    let fail = |msg: &str| FindError::Postcondition(format!("joining sub-minors: {msg}"));
    let mut owner: HashMap<Vertex, usize> = HashMap::new();
    for (h, s) in sets.iter().enumerate() {
        for &x in s {
            if owner.insert(x, h).is_some() {
                return Err(fail("branch sets overlap"));
            }
        }
    }
    let r = tree.root;
    let extend_to = |sets: &mut Vec<Vec<Vertex>>, goal: &dyn Fn(Vertex) -> bool| -> Result<(), FindError> {
        let blocked = |y: &Vertex| f.contains(y) || owner.get(y).is_some_and(|&h| h != r);
        let mut prev: HashMap<Vertex, Vertex> = HashMap::new();
        let mut seen: HashSet<Vertex> = sets[r].iter().copied().collect();
        let mut q: VecDeque<Vertex> = sets[r].iter().copied().collect();
        while let Some(x) = q.pop_front() {
            for &y in g.neighbors(x) {
                if goal(y) {
                    let mut z = x;
                    while let Some(&p) = prev.get(&z) {
                        sets[r].push(z);
                        z = p;
                    }
                    if !owner.contains_key(&y) {
                        sets[r].push(y);
                    }
                    sets[r].sort_unstable();
                    sets[r].dedup();
                    return Ok(());
                }
                if !blocked(&y) && seen.insert(y) {
                    prev.insert(y, x);
                    q.push_back(y);
                }
            }
        }
        Err(fail("no free connecting path"))
    };
    if !sets[r].contains(&v) {
        if owner.get(&v).is_some_and(|&h| h != r) {
            return Err(fail("v lies in another branch set"));
        }
        extend_to(&mut sets, &|y| y == v)?;
    }
    let target: HashSet<Vertex> = sets[c].iter().copied().collect();
    extend_to(&mut sets, &|y| target.contains(&y))?;
    for (h, s) in sets.iter().enumerate() {
        if h != r && s.iter().any(|x| sets[r].contains(x)) {
            return Err(fail("root set grew into another branch set"));
        }
    }
    MinorWitness::from_branch_sets(g, tree.to_pattern(), sets)
        .map(|w| w.rooted_at(r, v))
        .ok_or_else(|| fail("a tree edge is not realized"))
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DecomposeError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Find(#[from] FindError),
    #[error("decomposition left a minor in component {0:?}")]
    MinorLeft(Vec<Vertex>),
    #[error("decomposition precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecomposeParams {
    /// Radius that decides bad vertices; `None` means `k (4d/zeta)^(4k+2)`.
    pub radius: Option<usize>,
    /// Floor of `f` handed to `find`; `None` uses its default.
    pub f0: Option<f64>,
    pub search_work_cap: u64,
}

impl Default for DecomposeParams {
    fn default() -> Self {
        DecomposeParams { radius: None, f0: None, search_work_cap: 2_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub removed: Vec<CanonicalEdge>,
    /// Vertices whose neighborhood of the decision radius holds a minor.
    pub bad: Vec<Vertex>,
    pub rho_hat: f64,
    /// Components of the final graph, each checked minor-free.
    pub components: Vec<Vec<Vertex>>,
    /// `(rho_hat + eps/2) d n`.
    pub budget: f64,
    pub find_calls: usize,
}

impl Decomposition {
    pub fn within_budget(&self) -> bool {
        self.removed.len() as f64 <= self.budget
    }
}

fn has_tree_minor(g: &Graph, set: &[Vertex], pattern: &Pattern, cap: u64) -> Result<bool, ExactError> {
    if set.len() < pattern.size {
        return Ok(false);
    }
    let (sub, _) = g.induced(set);
    match search_minor(&sub, pattern, &MinorSearchOptions { work_cap: Some(cap), root: None }) {
        SearchOutcome::Found(_) => Ok(true),
        SearchOutcome::Absent => Ok(false),
        SearchOutcome::GaveUp => {
            Err(ExactError::InstanceTooLarge { what: "tree minor search", size: set.len(), limit: pattern.size })
        }
    }
}

/// Removes edges until `g` has no `tree`-minor: first every edge at a bad
/// vertex, then sparse cuts around the remaining large components.
pub fn decompose_to_minor_free(
    g: &Graph,
    tree: &RootedTree,
    eps: f64,
    params: &DecomposeParams,
) -> Result<Decomposition, DecomposeError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(DecomposeError::Precondition(format!("eps = {eps} outside (0, 1]")));
    }
    let (k, d, n) = (tree.size(), g.d(), g.n());
    let zeta = eps / 2.0;
    let pattern = tree.to_pattern();
    let radius = params
        .radius
        .unwrap_or_else(|| depth_of(k as f64 * (4.0 * d as f64 / zeta).powi(4 * k as i32 + 2), n));
    let fparams = FindParams { zeta, f0: params.f0 };
    let d0 = depth_of(3.0 / zeta * (4.0 * fparams.f(k, d, 0) / zeta).ln(), n);
    if d0 > radius {
        return Err(DecomposeError::Precondition(format!("BFS depth {d0} exceeds decision radius {radius}")));
    }

    let mut work = g.clone();
    let mut removed = Vec::new();
    let mut bad = Vec::new();
    // balls that cover a whole component share one answer
    let mut comp_of = vec![0usize; n + 1];
    let comps = g.components();
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v as usize] = i;
        }
    }
    let mut comp_answer: HashMap<usize, bool> = HashMap::new();
    for v in g.vertices() {
        let ball = g.ball(v, radius);
        let ci = comp_of[v as usize];
        let has = if ball.len() == comps[ci].len() {
            match comp_answer.get(&ci) {
                Some(&a) => a,
                None => {
                    let a = has_tree_minor(g, &ball, &pattern, params.search_work_cap)?;
                    comp_answer.insert(ci, a);
                    a
                }
            }
        } else {
            has_tree_minor(g, &ball, &pattern, params.search_work_cap)?
        };
        if has {
            bad.push(v);
        }
    }
    for &v in &bad {
        removed.extend(work.isolate(v));
    }

    let mut marked: HashSet<Vertex> = HashSet::new();
    let mut find_calls = 0;
    loop {
        let open: Vec<Vec<Vertex>> =
            work.components().into_iter().filter(|c| !c.iter().any(|v| marked.contains(v))).collect();
        if open.is_empty() {
            break;
        }
        let mut progress = false;
        for comp in open {
            let (sub, map) = work.induced(&comp);
            let small = comp.len() == 1
                || (1..=sub.n() as Vertex).any(|x| sub.distances_from(x)[1..].iter().all(|&dx| dx <= radius));
            if small {
                marked.extend(&comp);
                progress = true;
                continue;
            }
            let s = map[0];
            let cut = match bfs_dichotomy(&work, &[s], &HashSet::new(), d0, zeta) {
                Dichotomy::Cut(c) => {
                    // within d0 <= radius of a good vertex: minor-free
                    marked.extend(&c.side);
                    c
                }
                Dichotomy::Expanded { reached, .. } => {
                    find_calls += 1;
                    let out = find(&work, s, &reached, tree, &HashSet::new(), &fparams)?;
                    match out.sigma {
                        Sigma::Minor => return Err(DecomposeError::MinorLeft(comp)),
                        Sigma::Cut => out.cut.expect("cut output"),
                    }
                }
            };
            for e in &cut.crossing_edges {
                if work.remove_edge(e.u, e.v) {
                    removed.push(*e);
                    progress = true;
                }
            }
        }
        if !progress {
            break;
        }
    }

    let components = work.components();
    for c in &components {
        if has_tree_minor(&work, c, &pattern, params.search_work_cap)? {
            return Err(DecomposeError::MinorLeft(c.clone()));
        }
    }
    removed.sort();
    let rho_hat = bad.len() as f64 / n as f64;
    Ok(Decomposition {
        removed,
        bad,
        rho_hat,
        components,
        budget: (rho_hat + eps / 2.0) * d as f64 * n as f64,
        find_calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_linked_stars, gen_matching, gen_planted_blocks};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path_graph(n: usize, d: usize) -> Graph {
        Graph::from_edges(n, d, (1..n as Vertex).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle_graph(n: usize, d: usize) -> Graph {
        Graph::from_edges(n, d, (1..=n as Vertex).map(|i| (i, i % n as Vertex + 1))).unwrap()
    }

    fn rejects(v: &Verdict, g: &Graph) -> bool {
        match v {
            Verdict::Accept => false,
            Verdict::Reject(c) => {
                verify_certificate(g, c).unwrap();
                true
            }
        }
    }

    #[test]
    fn path_tester_on_matching_and_path() {
        let cfg = TreeConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = gen_matching(200);
        for _ in 0..20 {
            let v = test_pk_minor_free(&mut QueryOracle::new(&m), 2, 0.2, &cfg, &mut rng).unwrap();
            assert_eq!(v, Verdict::Accept);
        }
        let p = path_graph(100, 2);
        let v = test_pk_minor_free(&mut QueryOracle::new(&p), 3, 0.3, &cfg, &mut rng).unwrap();
        assert!(rejects(&v, &p));
        let w = match v.certificate() {
            Some(Certificate::MinorWitness(w)) => w.clone(),
            _ => unreachable!(),
        };
        assert_eq!(w.branch_sets.len(), 4);
    }

    #[test]
    fn walk_on_long_cycle_is_simple_one_time_in_eight() {
        // two of the sixteen direction patterns never turn back
        let g = cycle_graph(1024, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 20_000;
        let mut o = QueryOracle::new(&g);
        let hits = (0..trials).filter(|_| pk_trial(&mut o, 4, &mut rng).unwrap().is_some()).count();
        let p = 1.0 / 8.0;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 3.0 * sigma, "{hits}");
    }

    #[test]
    fn star_tester_cases() {
        let cfg = TreeConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let star = Graph::from_edges(5, 4, [(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        let v = test_star_minor_free(&mut QueryOracle::new(&star), 4, 1.0, &cfg, &mut rng).unwrap();
        assert!(rejects(&v, &star));
        let p = path_graph(300, 3);
        for _ in 0..10 {
            let v = test_star_minor_free(&mut QueryOracle::new(&p), 3, 0.2, &cfg, &mut rng).unwrap();
            assert_eq!(v, Verdict::Accept);
        }
        let linked = gen_linked_stars(400, 3).unwrap();
        let hits = (0..40)
            .filter(|_| rejects(&test_star_minor_free(&mut QueryOracle::new(&linked), 3, 0.1, &cfg, &mut rng).unwrap(), &linked))
            .count();
        assert!(hits >= 30, "{hits}");
    }

    #[test]
    fn star_search_beyond_degree() {
        // a caterpillar has K_{1,4} only through a contracted spine
        let g = Graph::from_edges(6, 3, [(1, 2), (2, 3), (3, 4), (2, 5), (3, 6)]).unwrap();
        assert!(matches!(search_star(&g, 4, 1_000_000), SearchOutcome::Found(_)));
        assert_eq!(search_star(&g, 5, 1_000_000), SearchOutcome::Absent);
    }

    #[test]
    fn tree_tester_cases() {
        let cfg = TreeConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = gen_matching(100);
        let v = test_tree_minor_free(&mut QueryOracle::new(&m), &RootedTree::path(2), 0.2, &cfg, &mut rng).unwrap();
        assert_eq!(v, Verdict::Accept);
        let spider = RootedTree::spider(&[2, 1, 1]);
        let p = path_graph(60, 3);
        let v = test_tree_minor_free(&mut QueryOracle::new(&p), &spider, 0.2, &cfg, &mut rng).unwrap();
        assert_eq!(v, Verdict::Accept);
        let (g, _) = gen_planted_blocks(1024, 3, &spider.to_pattern(), 64, 9).unwrap();
        let run = tree_tester_run(&mut QueryOracle::new(&g), &spider, 0.2, &cfg, &mut rng).unwrap();
        assert!(rejects(&run.verdict, &g));
        assert!(!run.truncated);
    }

    #[test]
    fn forest_tester_cases() {
        let cfg = TreeConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let two_edges = Pattern::union(&[Pattern::path(1), Pattern::path(1)]);
        let e = Graph::from_edges(2, 3, [(1, 2)]).unwrap();
        for _ in 0..10 {
            let v = test_forest_minor_free(&mut QueryOracle::new(&e), &two_edges, 0.5, &cfg, &mut rng).unwrap();
            assert_eq!(v, Verdict::Accept);
        }
        let h = Pattern::union(&[Pattern::path(2), Pattern::path(2)]);
        let (g, _) = gen_planted_blocks(512, 3, &RootedTree::spider(&[2, 1, 1]).to_pattern(), 64, 3).unwrap();
        let v = test_forest_minor_free(&mut QueryOracle::new(&g), &h, 0.2, &cfg, &mut rng).unwrap();
        assert!(rejects(&v, &g));
    }

    #[test]
    fn dichotomy_examples() {
        let p = path_graph(50, 3);
        let all: Vec<Vertex> = p.vertices().collect();
        match bfs_dichotomy(&p, &all, &HashSet::new(), 5, 0.1) {
            Dichotomy::Cut(c) => assert!(c.crossing_edges.is_empty()),
            other => panic!("{other:?}"),
        }
        // a path never grows by more than one vertex per side
        match bfs_dichotomy(&p, &[25], &HashSet::new(), 40, 0.5) {
            Dichotomy::Cut(c) => {
                assert!(c.is_sparse(3));
                assert!(c.side.len() < 50);
            }
            other => panic!("{other:?}"),
        }
        // complete binary tree: levels double
        let n = 255;
        let t = Graph::from_edges(n, 3, (2..=n as Vertex).map(|i| (i / 2, i))).unwrap();
        match bfs_dichotomy(&t, &[1], &HashSet::new(), 5, 0.2) {
            Dichotomy::Expanded { reached, last_level } => {
                assert_eq!(reached.len(), 63);
                assert_eq!(last_level.len(), 32);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cut_or_good_examples() {
        // M is the leaves of a star, which are all boundary
        let star = Graph::from_edges(6, 5, [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        let m = [2, 3, 4, 5, 6];
        let mset: HashSet<Vertex> = m.iter().copied().collect();
        assert_eq!(boundary(&star, &mset, &HashSet::new()), vec![2, 3, 4, 5, 6]);
        let two = Graph::from_edges(8, 3, [(1, 2), (2, 3), (5, 6)]).unwrap();
        match cut_or_good(&two, &[1, 2, 3], &HashSet::new(), 3, 0.1) {
            CutOrGood::Cut(c) => assert!(c.crossing_edges.is_empty()),
            other => panic!("{other:?}"),
        }
        let n = 255;
        let t = Graph::from_edges(n, 3, (2..=n as Vertex).map(|i| (i / 2, i))).unwrap();
        match cut_or_good(&t, &[1, 2, 3], &HashSet::new(), 3, 0.2) {
            CutOrGood::Good { v, set } => {
                assert!(v == 2 || v == 3);
                assert!(set.len() as f64 >= (0.2f64 / 3.0 * 3.0).exp());
                assert!(!set.contains(&1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn find_single_node_returns_the_seed() {
        let p = path_graph(20, 3);
        let u: Vec<Vertex> = (1..=8).collect();
        let out = find(&p, 3, &u, &RootedTree::single(), &HashSet::new(), &FindParams::new(0.5).with_f0(1.0)).unwrap();
        assert_eq!(out.sigma, Sigma::Minor);
        assert_eq!(out.set, u);
        assert_eq!(out.witness.unwrap().branch_sets, vec![vec![3]]);
    }

    #[test]
    fn find_on_barbell_cuts_the_bridge() {
        let mut edges = Vec::new();
        for a in 1..=10u32 {
            for b in a + 1..=10 {
                edges.push((a, b));
                edges.push((a + 10, b + 10));
            }
        }
        edges.push((10, 11));
        let g = Graph::from_edges(20, 10, edges).unwrap();
        let u: Vec<Vertex> = (1..=10).collect();
        let out = find(&g, 1, &u, &RootedTree::path(1), &HashSet::new(), &FindParams::new(0.5).with_f0(1.25)).unwrap();
        assert_eq!(out.sigma, Sigma::Cut);
        let cut = out.cut.unwrap();
        assert_eq!(cut.crossing_edges, vec![CanonicalEdge::new(10, 11)]);
        verify_certificate(&g, &Certificate::SparseCut(cut)).unwrap();
    }

    #[test]
    fn find_reports_preconditions() {
        let p = path_graph(20, 3);
        let err = find(&p, 1, &[1, 2], &RootedTree::path(1), &HashSet::new(), &FindParams::new(0.5)).unwrap_err();
        assert!(matches!(err, FindError::Precondition(_)));
        let err = find(&p, 1, &[2, 3], &RootedTree::path(1), &HashSet::new(), &FindParams::new(0.5).with_f0(0.1));
        assert!(matches!(err, Err(FindError::Precondition(_))));
    }

    #[test]
    fn root_set_grows_to_v_and_the_far_subtree() {
        let p = path_graph(6, 3);
        let tree = RootedTree::path(2);
        let w = join_root(&p, &tree, 1, vec![vec![2], vec![5], vec![6]], 1, &HashSet::new()).unwrap();
        assert_eq!(w.branch_sets[0], vec![1, 2, 3, 4]);
        assert_eq!(w.root, Some((0, 1)));
        verify_certificate(&p, &Certificate::MinorWitness(w)).unwrap();
        let blocked = join_root(&p, &tree, 1, vec![vec![2], vec![5], vec![6]], 1, &HashSet::from([3]));
        assert!(matches!(blocked, Err(FindError::Postcondition(_))));
    }

    #[test]
    fn decompose_free_and_planted() {
        let spider = RootedTree::spider(&[2, 1, 1]);
        let p = path_graph(100, 3);
        let dec = decompose_to_minor_free(&p, &spider, 0.2, &DecomposeParams::default()).unwrap();
        assert!(dec.removed.is_empty());
        let (g, _) = gen_planted_blocks(256, 3, &spider.to_pattern(), 64, 4).unwrap();
        let dec = decompose_to_minor_free(&g, &spider, 0.2, &DecomposeParams::default()).unwrap();
        assert!(!dec.removed.is_empty());
        assert!(dec.within_budget());
        let mut h = g.clone();
        for e in &dec.removed {
            h.remove_edge(e.u, e.v);
        }
        for b in 0..4u32 {
            let block: Vec<Vertex> = (64 * b + 1..=64 * b + 64).collect();
            assert!(cut_touches(&dec.removed, &block));
        }
    }

    fn cut_touches(edges: &[CanonicalEdge], block: &[Vertex]) -> bool {
        edges.iter().any(|e| block.contains(&e.u))
    }
}
