//! Testers for `C_k`-minor-freeness with `k >= 4`.
//!
//! Both reductions replace local 2-connected pieces of the input by hub
//! vertices and then test the result for cycle-freeness. For `k = 4` the
//! pieces are triangles; for larger `k` they are spots, which are grown from
//! short cycles through a vertex by repeatedly adjoining short external paths.
//! A cycle of the reduced graph is lifted back to a simple cycle of length at
//! least `k` in the input.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, SimpleCycle, Verdict};
use crate::cycle::{find_virtual_cycle, CycleConfig, VirtualGraph, VirtualOutcome};
use crate::error::{require, TestError};
use crate::exact::{biconnected_blocks, find_long_cycle, paw_witness_from_cycle};
use crate::explore::{induced_on, Explorer};
use crate::graph::{Graph, Vertex};
use crate::labeling::mix;
use crate::oracle::{QueryError, QueryOracle};
use crate::walker::StepError;

/// Largest supported `k`; spot neighborhoods grow like `d^k`.
pub const MAX_K: usize = 6;

/// A `k`-spot together with the short cycle it was grown from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spot {
    /// Sorted.
    pub vertices: Vec<Vertex>,
    pub k: usize,
    pub anchor: Vec<Vertex>,
}

impl Spot {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpotSearch {
    Spots(Vec<Spot>),
    /// A simple cycle of length at least `k` met during the search.
    LongCycleFound(SimpleCycle),
}

fn check_k(k: usize) -> Result<(), TestError> {
    require(k >= 4, || format!("k = {k}: use the cycle-freeness tester for k = 3"))?;
    require(k <= MAX_K, || format!("k = {k} above the supported maximum {MAX_K}"))
}

/// All `k`-spots containing `v`, or a long cycle if one turns up first.
pub fn find_spots(oracle: &mut QueryOracle<'_>, v: Vertex, k: usize) -> Result<SpotSearch, TestError> {
    check_k(k)?;
    let mut ex = Explorer::new(oracle);
    Ok(spots_through(&mut ex, v, k)?)
}

fn spots_through(ex: &mut Explorer<'_, '_>, v: Vertex, k: usize) -> Result<SpotSearch, QueryError> {
    let mut anchors: BTreeSet<Vec<Vertex>> = BTreeSet::new();
    let mut path = vec![v];
    if let Some(c) = short_cycles(ex, k, &mut path, &mut anchors)? {
        return Ok(SpotSearch::LongCycleFound(SimpleCycle::new(c)));
    }
    if let Some(c) = long_cycle_near(ex, v, k) {
        return Ok(SpotSearch::LongCycleFound(c));
    }
    let mut spots: Vec<Spot> = Vec::new();
    for anchor in anchors {
        if spots.iter().any(|s| anchor.iter().all(|&x| s.contains(x))) {
            continue;
        }
        match closure(ex, &anchor, k)? {
            Ok(vertices) => {
                debug_assert!(
                    spots.iter().all(|s| vertices.iter().filter(|&&x| s.contains(x)).count() <= 1),
                    "distinct spots share at most one vertex"
                );
                spots.push(Spot { vertices, k, anchor });
            }
            Err(c) => return Ok(SpotSearch::LongCycleFound(c)),
        }
    }
    Ok(SpotSearch::Spots(spots))
}

/// A long cycle among the edges at vertices within distance `k - 1` of `v`,
/// all of which the short-cycle search has already fetched.
fn long_cycle_near(ex: &Explorer<'_, '_>, v: Vertex, k: usize) -> Option<SimpleCycle> {
    let mut dist: HashMap<Vertex, usize> = HashMap::from([(v, 0)]);
    let mut q = VecDeque::from([v]);
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    while let Some(x) = q.pop_front() {
        let nbrs = ex.known(x).expect("ball vertices are explored");
        for &y in nbrs {
            edges.insert((x.min(y), x.max(y)));
            if dist[&x] + 1 < k && !dist.contains_key(&y) {
                dist.insert(y, dist[&x] + 1);
                q.push_back(y);
            }
        }
    }
    cycle_in_edges(&edges, k)
}

/// A simple cycle of length at least `k` in the graph formed by `edges`.
fn cycle_in_edges(edges: &BTreeSet<(Vertex, Vertex)>, k: usize) -> Option<SimpleCycle> {
    let verts: Vec<Vertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect::<BTreeSet<_>>().into_iter().collect();
    let index: HashMap<Vertex, Vertex> = verts.iter().enumerate().map(|(i, &v)| (v, i as Vertex + 1)).collect();
    let h = Graph::from_edges_tight(verts.len(), edges.iter().map(|(a, b)| (index[a], index[b]))).ok()?;
    find_long_cycle(&h, k).map(|c| SimpleCycle::new(c.vertices.iter().map(|&i| verts[i as usize - 1]).collect()))
}

/// Collects the vertex sets of simple cycles through `path[0]` shorter than
/// `k`; returns the first cycle of length `k` it meets.
fn short_cycles(
    ex: &mut Explorer<'_, '_>,
    k: usize,
    path: &mut Vec<Vertex>,
    anchors: &mut BTreeSet<Vec<Vertex>>,
) -> Result<Option<Vec<Vertex>>, QueryError> {
    let last = *path.last().expect("non-empty path");
    let nbrs = ex.neighbors(last)?.to_vec();
    for y in nbrs {
        if y == path[0] && path.len() >= 3 {
            if path.len() >= k {
                return Ok(Some(path.clone()));
            }
            let mut set = path.clone();
            set.sort_unstable();
            anchors.insert(set);
        } else if path.len() < k && !path.contains(&y) {
            path.push(y);
            let found = short_cycles(ex, k, path, anchors)?;
            path.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

/// Grows `anchor` by external paths shorter than `2k` until none is left.
fn closure(ex: &mut Explorer<'_, '_>, anchor: &[Vertex], k: usize) -> Result<Result<Vec<Vertex>, SimpleCycle>, QueryError> {
    let mut set: BTreeSet<Vertex> = anchor.iter().copied().collect();
    loop {
        let members: Vec<Vertex> = set.iter().copied().collect();
        for &x in &members {
            ex.neighbors(x)?;
        }
        let sub = induced_on(|x| ex.known(x).expect("members are explored").to_vec(), &members);
        if let Some(c) = find_long_cycle(&sub, k) {
            return Ok(Err(SimpleCycle::new(c.vertices.iter().map(|&i| members[i as usize - 1]).collect())));
        }
        let blocks = biconnected_blocks(&local_adj(&sub));
        assert!(blocks.len() == 1 && blocks[0].len() == members.len(), "closures stay 2-connected");
        match external_path(ex, &set, 2 * k)? {
            None => return Ok(Ok(members)),
            Some(p) => set.extend(p),
        }
    }
}

fn local_adj(g: &Graph) -> Vec<Vec<usize>> {
    g.vertices().map(|v| g.neighbors(v).iter().map(|&u| u as usize - 1).collect()).collect()
}

/// Interior of some path shorter than `limit` between distinct members of
/// `set` whose interior is non-empty and avoids `set`.
fn external_path(ex: &mut Explorer<'_, '_>, set: &BTreeSet<Vertex>, limit: usize) -> Result<Option<Vec<Vertex>>, QueryError> {
    for &s in set {
        let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
        let mut q = VecDeque::new();
        for &x in ex.neighbors(s)?.to_vec().iter() {
            if !set.contains(&x) && !parent.contains_key(&x) {
                parent.insert(x, s);
                q.push_back((x, 1usize));
            }
        }
        while let Some((x, dx)) = q.pop_front() {
            let nbrs = ex.neighbors(x)?.to_vec();
            if dx + 1 < limit && nbrs.iter().any(|&t| t != s && set.contains(&t)) {
                let mut interior = vec![x];
                let mut y = x;
                while parent[&y] != s {
                    y = parent[&y];
                    interior.push(y);
                }
                return Ok(Some(interior));
            }
            if dx + 2 < limit {
                for y in nbrs {
                    if !set.contains(&y) && !parent.contains_key(&y) {
                        parent.insert(y, x);
                        q.push_back((y, dx + 1));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// A vertex of the reduced graph: an input vertex or a hub standing for the
/// spot with the given index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GVertex {
    Orig(Vertex),
    Spot(u32),
}

/// Query access to the reduced graph: intra-spot edges removed, one hub per
/// spot adjacent to exactly its members. For `k = 4` the spots are all
/// triangles.
pub struct GPrimeView<'o, 'g> {
    ex: Explorer<'o, 'g>,
    k: usize,
    d: usize,
    spots: Vec<Spot>,
    spot_ids: HashMap<Vec<Vertex>, u32>,
    spots_of: HashMap<Vertex, Vec<u32>>,
    lists: HashMap<Vertex, Vec<GVertex>>,
}

impl<'o, 'g> GPrimeView<'o, 'g> {
    pub fn new(oracle: &'o mut QueryOracle<'g>, k: usize) -> Result<Self, TestError> {
        check_k(k)?;
        let d = oracle.d().max(3);
        Ok(GPrimeView {
            ex: Explorer::new(oracle),
            k,
            d,
            spots: Vec::new(),
            spot_ids: HashMap::new(),
            spots_of: HashMap::new(),
            lists: HashMap::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spot(&self, id: u32) -> &Spot {
        &self.spots[id as usize]
    }

    pub fn explorer(&self) -> &Explorer<'o, 'g> {
        &self.ex
    }

    fn intern(&mut self, spot: Spot) -> u32 {
        if let Some(&id) = self.spot_ids.get(&spot.vertices) {
            return id;
        }
        let id = self.spots.len() as u32;
        self.spot_ids.insert(spot.vertices.clone(), id);
        self.spots.push(spot);
        id
    }

    /// Ids of the spots containing `v`.
    pub fn spots_of(&mut self, v: Vertex) -> Result<Vec<u32>, StepError> {
        if let Some(ids) = self.spots_of.get(&v) {
            return Ok(ids.clone());
        }
        let found = if self.k == 4 { self.triangles_through(v)? } else {
            match spots_through(&mut self.ex, v, self.k)? {
                SpotSearch::Spots(s) => s,
                SpotSearch::LongCycleFound(c) => return Err(StepError::Witness(Certificate::SimpleCycle(c))),
            }
        };
        let ids: Vec<u32> = found.into_iter().map(|s| self.intern(s)).collect();
        self.spots_of.insert(v, ids.clone());
        Ok(ids)
    }

    fn triangles_through(&mut self, v: Vertex) -> Result<Vec<Spot>, QueryError> {
        let nb = self.ex.neighbors(v)?.to_vec();
        let mut out = Vec::new();
        for (a, &u) in nb.iter().enumerate() {
            let nu = self.ex.neighbors(u)?.to_vec();
            for &w in &nb[a + 1..] {
                if nu.contains(&w) {
                    let mut vertices = vec![v, u, w];
                    vertices.sort_unstable();
                    out.push(Spot { anchor: vertices.clone(), vertices, k: 4 });
                }
            }
        }
        Ok(out)
    }

    /// Neighbor list of an input vertex in the reduced graph.
    pub fn neighbors_of(&mut self, v: Vertex) -> Result<Vec<GVertex>, StepError> {
        if let Some(l) = self.lists.get(&v) {
            return Ok(l.clone());
        }
        let ids = self.spots_of(v)?;
        let nb = self.ex.neighbors(v)?.to_vec();
        let mut list: Vec<GVertex> = nb
            .into_iter()
            .filter(|&u| !ids.iter().any(|&s| self.spots[s as usize].contains(u)))
            .map(GVertex::Orig)
            .collect();
        list.extend(ids.iter().map(|&s| GVertex::Spot(s)));
        assert!(list.len() <= self.degree_bound(), "reduced degree exceeds its bound");
        self.lists.insert(v, list.clone());
        Ok(list)
    }

    fn pick_pair<R: Rng + ?Sized>(rng: &mut R, m: usize) -> (usize, usize) {
        let a = rng.gen_range(0..m);
        let mut b = rng.gen_range(0..m - 1);
        if b >= a {
            b += 1;
        }
        (a, b)
    }

    /// Lifts a simple cycle of the reduced graph to a simple cycle of length
    /// at least `k` of the input, using the cycle's input edges and the
    /// induced subgraphs of its spots.
    pub fn lift_cycle(&self, cycle: &[GVertex]) -> Option<SimpleCycle> {
        let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
        let m = cycle.len();
        for i in 0..m {
            match (cycle[i], cycle[(i + 1) % m]) {
                (GVertex::Orig(a), GVertex::Orig(b)) => {
                    edges.insert((a.min(b), a.max(b)));
                }
                (GVertex::Spot(s), _) => {
                    let set = &self.spots[s as usize].vertices;
                    for &x in set {
                        for &y in self.ex.known(x).unwrap_or(&[]) {
                            if x < y && set.binary_search(&y).is_ok() {
                                edges.insert((x, y));
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        cycle_in_edges(&edges, self.k).or_else(|| find_long_cycle(&self.ex.subgraph(), self.k))
    }
}

impl VirtualGraph for GPrimeView<'_, '_> {
    type V = GVertex;

    fn degree_bound(&self) -> usize {
        self.d.pow(self.k as u32 - 1)
    }

    fn vertex_estimate(&self) -> usize {
        let n = self.ex.n();
        if self.k == 4 {
            n + n * self.d * (self.d - 1) / 6
        } else {
            n + n * self.d / 6
        }
    }

    fn attempt_success(&self) -> f64 {
        if self.k == 4 {
            0.5 / (self.d * self.d) as f64
        } else {
            0.5 / self.d as f64
        }
    }

    fn key(&self, x: GVertex) -> u64 {
        match x {
            GVertex::Orig(v) => v as u64,
            GVertex::Spot(s) => {
                let words: Vec<u64> = self.spots[s as usize].vertices.iter().map(|&v| v as u64).collect();
                mix(0x5907, &words) | 1 << 63
            }
        }
    }

    fn sample_attempt<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<GVertex>, StepError> {
        let v = rng.gen_range(1..=self.ex.n() as Vertex);
        let d = self.d as f64;
        if rng.gen_bool(0.5) {
            let p = if self.k == 4 { 1.0 / (d * d) } else { 1.0 / d };
            return Ok(rng.gen_bool(p).then_some(GVertex::Orig(v)));
        }
        if self.k == 4 {
            let nb = self.ex.neighbors(v)?.to_vec();
            let m = nb.len();
            if m < 2 {
                return Ok(None);
            }
            let (a, b) = Self::pick_pair(rng, m);
            let (u, w) = (nb[a], nb[b]);
            if !self.ex.neighbors(u)?.contains(&w) {
                return Ok(None);
            }
            let p = (m * (m - 1) / 2) as f64 / (3.0 * d * d);
            if !rng.gen_bool(p) {
                return Ok(None);
            }
            let mut vertices = vec![v, u, w];
            vertices.sort_unstable();
            let id = self.intern(Spot { anchor: vertices.clone(), vertices, k: 4 });
            return Ok(Some(GVertex::Spot(id)));
        }
        let ids = self.spots_of(v)?;
        if ids.is_empty() {
            return Ok(None);
        }
        let s = ids[rng.gen_range(0..ids.len())];
        let p = ids.len() as f64 / (d * self.spots[s as usize].vertices.len() as f64);
        Ok(rng.gen_bool(p).then_some(GVertex::Spot(s)))
    }

    fn neighbor(&mut self, x: GVertex, i: usize) -> Result<Option<GVertex>, StepError> {
        match x {
            GVertex::Orig(v) => Ok(self.neighbors_of(v)?.get(i - 1).copied()),
            GVertex::Spot(s) => Ok(self.spots[s as usize].vertices.get(i - 1).copied().map(GVertex::Orig)),
        }
    }

    fn roots(&self) -> Vec<GVertex> {
        (1..=self.ex.n() as Vertex).map(GVertex::Orig).collect()
    }
}

/// The reduced graph built from a whole graph: vertices `1..=N` are the
/// input's, hub `N + 1 + i` stands for `spots[i]`.
#[derive(Debug, Clone)]
pub struct MaterializedGPrime {
    pub graph: Graph,
    pub spots: Vec<Spot>,
}

/// Builds the reduced graph of `g`, or returns a long cycle met on the way.
pub fn materialize_gprime(g: &Graph, k: usize) -> Result<Result<MaterializedGPrime, SimpleCycle>, TestError> {
    let mut oracle = QueryOracle::new(g);
    let mut view = GPrimeView::new(&mut oracle, k)?;
    let mut lists = Vec::new();
    for v in g.vertices() {
        match view.neighbors_of(v) {
            Ok(l) => lists.push((v, l)),
            Err(StepError::Witness(Certificate::SimpleCycle(c))) => return Ok(Err(c)),
            Err(StepError::Witness(_)) => unreachable!("spot search only yields cycles"),
            Err(StepError::Query(e)) => return Err(e.into()),
        }
    }
    let n = g.n() as Vertex;
    let hub = |s: u32| n + 1 + s;
    let mut out = Graph::new(g.n() + view.spots.len(), view.degree_bound());
    for (v, l) in lists {
        for x in l {
            match x {
                GVertex::Orig(u) if u > v => out.add_edge(v, u).expect("reduced degree bound"),
                GVertex::Spot(s) => out.add_edge(v, hub(s)).expect("reduced degree bound"),
                _ => {}
            }
        }
    }
    Ok(Ok(MaterializedGPrime { graph: out, spots: view.spots }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkConfig {
    pub cycle: CycleConfig,
    /// The reduced graph is tested with proximity `c_eps * eps * d^-k`.
    pub c_eps: f64,
}

impl Default for CkConfig {
    fn default() -> Self {
        CkConfig { cycle: CycleConfig::default(), c_eps: 500.0 }
    }
}

/// Proximity handed to the cycle tester on the reduced graph.
pub fn ck_reduced_eps(d: usize, k: usize, eps: f64, cfg: &CkConfig) -> f64 {
    (cfg.c_eps * eps / (d.max(3) as f64).powi(k as i32)).min(1.0)
}

/// One-sided `C_k`-minor-freeness tester (`4 <= k <= MAX_K`). Rejections carry
/// a simple cycle of length at least `k`.
pub fn test_ck_minor_free<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    k: usize,
    eps: f64,
    cfg: &CkConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    require(eps > 0.0 && eps <= 1.0, || format!("eps = {eps} outside (0, 1]"))?;
    let reduced_eps = ck_reduced_eps(oracle.d(), k, eps, cfg);
    let mut view = GPrimeView::new(oracle, k)?;
    match find_virtual_cycle(&mut view, reduced_eps, &cfg.cycle, rng)? {
        VirtualOutcome::Accept => Ok(Verdict::Accept),
        VirtualOutcome::Witness(c) => Ok(Verdict::Reject(c)),
        VirtualOutcome::Cycle(c) => match view.lift_cycle(&c) {
            Some(cycle) => Ok(Verdict::Reject(Certificate::SimpleCycle(cycle))),
            None => {
                debug_assert!(false, "reduced cycle {c:?} did not lift");
                Ok(Verdict::Accept)
            }
        },
    }
}

/// The input graph as a virtual graph, minus components set aside.
struct PlainView<'o, 'g> {
    ex: Explorer<'o, 'g>,
    d: usize,
    removed: HashSet<Vertex>,
}

impl VirtualGraph for PlainView<'_, '_> {
    type V = Vertex;

    fn degree_bound(&self) -> usize {
        self.d
    }

    fn vertex_estimate(&self) -> usize {
        self.ex.n()
    }

    fn attempt_success(&self) -> f64 {
        // removed vertices lower the true rate; the retry count only needs a
        // rough bound
        0.5
    }

    fn key(&self, x: Vertex) -> u64 {
        x as u64
    }

    fn sample_attempt<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<Vertex>, StepError> {
        let v = rng.gen_range(1..=self.ex.n() as Vertex);
        Ok((!self.removed.contains(&v)).then_some(v))
    }

    fn neighbor(&mut self, x: Vertex, i: usize) -> Result<Option<Vertex>, StepError> {
        Ok(self.ex.neighbors(x)?.get(i - 1).copied())
    }

    fn roots(&self) -> Vec<Vertex> {
        (1..=self.ex.n() as Vertex).filter(|v| !self.removed.contains(v)).collect()
    }
}

/// How many times the paw tester restarts after setting aside an isolated
/// cycle.
pub const PAW_ROUNDS: usize = 32;

/// One-sided tester for freeness of the triangle-with-pendant-edge minor.
/// Cycles found by the cycle tester are scanned for a vertex of degree above
/// two; cycles that form whole components are set aside and the search
/// restarts without them.
pub fn test_triangle_plus_edge<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    eps: f64,
    cfg: &CycleConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    require(eps > 0.0 && eps <= 1.0, || format!("eps = {eps} outside (0, 1]"))?;
    let d = oracle.d().max(3);
    let mut view = PlainView { ex: Explorer::new(oracle), d, removed: HashSet::new() };
    for _ in 0..PAW_ROUNDS {
        match find_virtual_cycle(&mut view, eps, cfg, rng)? {
            VirtualOutcome::Accept => return Ok(Verdict::Accept),
            VirtualOutcome::Witness(c) => return Ok(Verdict::Reject(c)),
            VirtualOutcome::Cycle(c) => {
                for &x in &c {
                    view.ex.neighbors(x)?;
                }
                if let Some(w) = paw_witness_from_cycle(&view.ex.subgraph(), &c) {
                    return Ok(Verdict::Reject(Certificate::MinorWitness(w)));
                }
                view.removed.extend(c);
            }
        }
    }
    Ok(Verdict::Accept)
}
