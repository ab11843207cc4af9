//! Cycle-freeness testers.
//!
//! The bounded-degree tester subdivides a random half of the edges and runs
//! the bipartiteness walker on the result; an odd cycle there contracts to a
//! cycle of the input. The direct tester instead draws random `eq`/`neq`
//! labels and tests generalized two-colourability of the input itself.

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, SimpleCycle, Verdict};
use crate::error::{require, TestError};
use crate::graph::{CanonicalEdge, Graph, Vertex, NULL_VERTEX};
use crate::labeling::{EdgeLabeling, Label};
use crate::oracle::QueryOracle;
use crate::walker::{walk_view, BaseView, StepError, WalkGraph, WalkOutcome, WalkerConfig, WalkerParams};

/// A vertex of the subdivided graph: an input vertex or the midpoint of a
/// subdivided edge `{u, v}` with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TauVertex {
    Orig(Vertex),
    Aux(Vertex, Vertex),
}

/// Query access to the graph with every `tau = 2` edge subdivided.
pub struct GTauView<'o, 'g> {
    oracle: &'o mut QueryOracle<'g>,
    tau: EdgeLabeling,
    d: usize,
    attempts: usize,
}

impl<'o, 'g> GTauView<'o, 'g> {
    /// `d` is the degree bound of the view (at least the graph's).
    pub fn new(oracle: &'o mut QueryOracle<'g>, tau: EdgeLabeling, d: usize) -> Self {
        let n = oracle.n().max(2) as f64;
        let attempts = (4.0 * n.log2()).ceil() as usize;
        let d = d.max(oracle.d());
        GTauView { oracle, tau, d, attempts }
    }

    pub fn tau(&self) -> EdgeLabeling {
        self.tau
    }

    pub fn oracle(&self) -> &QueryOracle<'g> {
        self.oracle
    }

    /// One attempt of the sampler: every virtual vertex is returned with
    /// probability exactly `1 / ((d + 1) N)`.
    pub fn sample_attempt<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<TauVertex>, StepError> {
        let n = self.oracle.n() as Vertex;
        let v = rng.gen_range(1..=n);
        if rng.gen_range(0..=self.d) == 0 {
            return Ok(Some(TauVertex::Orig(v)));
        }
        let i = rng.gen_range(1..=self.d);
        let w = self.oracle.neighbor(v, i)?;
        if w == NULL_VERTEX || self.tau.label(CanonicalEdge::new(v, w)) != Label::Two {
            return Ok(None);
        }
        if rng.gen_bool(0.5) {
            Ok(Some(aux(v, w)))
        } else {
            Ok(None)
        }
    }
}

fn aux(a: Vertex, b: Vertex) -> TauVertex {
    TauVertex::Aux(a.min(b), a.max(b))
}

/// Neighbor rule of the subdivided graph, given the base neighbor answer.
pub fn gtau_translate(tau: &EdgeLabeling, v: Vertex, w: Vertex) -> Option<TauVertex> {
    if w == NULL_VERTEX {
        None
    } else if tau.label(CanonicalEdge::new(v, w)) == Label::One {
        Some(TauVertex::Orig(w))
    } else {
        Some(aux(v, w))
    }
}

impl WalkGraph for GTauView<'_, '_> {
    type V = TauVertex;

    fn degree_bound(&self) -> usize {
        self.d
    }

    fn n_estimate(&self) -> usize {
        (self.d + 1) * self.oracle.n()
    }

    fn sample_vertex<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<TauVertex>, StepError> {
        for _ in 0..self.attempts {
            if let Some(x) = self.sample_attempt(rng)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    fn step(&mut self, x: TauVertex, i: usize) -> Result<Option<(TauVertex, u8)>, StepError> {
        match x {
            TauVertex::Orig(v) => {
                let w = self.oracle.neighbor(v, i)?;
                Ok(gtau_translate(&self.tau, v, w).map(|y| (y, 1)))
            }
            TauVertex::Aux(u, v) => Ok(match i {
                1 => Some((TauVertex::Orig(u), 1)),
                2 => Some((TauVertex::Orig(v), 1)),
                _ => None,
            }),
        }
    }

    fn roots(&self) -> Vec<TauVertex> {
        (1..=self.oracle.n() as Vertex).map(TauVertex::Orig).collect()
    }
}

/// Materializes the subdivided graph: vertices `1..=N` are the input's, the
/// midpoints follow in sorted edge order.
pub fn materialize_gtau(g: &Graph, tau: &EdgeLabeling) -> Graph {
    let subdivided: Vec<CanonicalEdge> = g.edges().into_iter().filter(|e| tau.label(*e) == Label::Two).collect();
    let mut out = Graph::new(g.n() + subdivided.len(), g.d().max(2));
    for e in g.edges() {
        if tau.label(e) == Label::One {
            out.add_edge(e.u, e.v).expect("kept edge fits");
        }
    }
    for (i, e) in subdivided.iter().enumerate() {
        let a = (g.n() + i + 1) as Vertex;
        out.add_edge(e.u, a).expect("subdivision fits");
        out.add_edge(a, e.v).expect("subdivision fits");
    }
    out
}

/// Drops midpoints from a subdivided-graph cycle.
pub fn contract_tau_cycle(cycle: &[TauVertex]) -> Vec<Vertex> {
    cycle
        .iter()
        .filter_map(|x| match x {
            TauVertex::Orig(v) => Some(*v),
            TauVertex::Aux(..) => None,
        })
        .collect()
}

/// Query access to a virtual simple graph, for running the cycle-freeness
/// tester on graphs built on top of the input.
pub trait VirtualGraph {
    type V: Copy + Eq + Hash + Ord + Debug;

    fn degree_bound(&self) -> usize;

    /// Upper estimate of the vertex count.
    fn vertex_estimate(&self) -> usize;

    /// Lower bound on the chance that one sampler attempt returns a vertex.
    fn attempt_success(&self) -> f64;

    /// Stable key used to label edges.
    fn key(&self, x: Self::V) -> u64;

    /// One sampler attempt; every vertex is returned with the same probability.
    fn sample_attempt<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<Self::V>, StepError>;

    /// The `i`-th neighbor (1-based); lists are packed, so `None` ends them.
    fn neighbor(&mut self, x: Self::V, i: usize) -> Result<Option<Self::V>, StepError>;

    /// Vertices from which every vertex is reachable.
    fn roots(&self) -> Vec<Self::V>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sub<V> {
    Orig(V),
    Mid(V, V),
}

fn mid<V: Ord>(a: V, b: V) -> Sub<V> {
    if a <= b {
        Sub::Mid(a, b)
    } else {
        Sub::Mid(b, a)
    }
}

/// A virtual graph with every `tau = 2` edge subdivided.
pub struct Subdivided<'a, G: VirtualGraph> {
    inner: &'a mut G,
    tau: EdgeLabeling,
    attempts: usize,
}

impl<'a, G: VirtualGraph> Subdivided<'a, G> {
    pub fn new(inner: &'a mut G, tau: EdgeLabeling) -> Self {
        let n = inner.vertex_estimate().max(2) as f64;
        let p = inner.attempt_success() / (inner.degree_bound() + 1) as f64;
        let attempts = (3.0 * n.ln() / p).ceil() as usize;
        Subdivided { inner, tau, attempts }
    }

    fn translate(&self, x: G::V, y: G::V) -> Sub<G::V> {
        if self.tau.label_keys(self.inner.key(x), self.inner.key(y), 0) == Label::One {
            Sub::Orig(y)
        } else {
            mid(x, y)
        }
    }

    /// One attempt; uniform over the subdivided graph when the inner sampler
    /// is uniform.
    pub fn sample_attempt<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<Sub<G::V>>, StepError> {
        let Some(x) = self.inner.sample_attempt(rng)? else {
            return Ok(None);
        };
        let d = self.inner.degree_bound();
        if rng.gen_range(0..=d) == 0 {
            return Ok(Some(Sub::Orig(x)));
        }
        let i = rng.gen_range(1..=d);
        let Some(y) = self.inner.neighbor(x, i)? else {
            return Ok(None);
        };
        if self.tau.label_keys(self.inner.key(x), self.inner.key(y), 0) == Label::Two && rng.gen_bool(0.5) {
            Ok(Some(mid(x, y)))
        } else {
            Ok(None)
        }
    }
}

impl<G: VirtualGraph> WalkGraph for Subdivided<'_, G> {
    type V = Sub<G::V>;

    fn degree_bound(&self) -> usize {
        self.inner.degree_bound()
    }

    fn n_estimate(&self) -> usize {
        (self.inner.degree_bound() + 1) * self.inner.vertex_estimate()
    }

    fn sample_vertex<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<Self::V>, StepError> {
        for _ in 0..self.attempts {
            if let Some(x) = self.sample_attempt(rng)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    fn step(&mut self, x: Self::V, i: usize) -> Result<Option<(Self::V, u8)>, StepError> {
        match x {
            Sub::Orig(v) => Ok(self.inner.neighbor(v, i)?.map(|w| (self.translate(v, w), 1))),
            Sub::Mid(a, b) => Ok(match i {
                1 => Some((Sub::Orig(a), 1)),
                2 => Some((Sub::Orig(b), 1)),
                _ => None,
            }),
        }
    }

    fn roots(&self) -> Vec<Self::V> {
        self.inner.roots().into_iter().map(Sub::Orig).collect()
    }
}

/// Result of hunting for a cycle in a virtual graph.
#[derive(Debug, Clone, PartialEq)]
pub enum VirtualOutcome<V> {
    Accept,
    Witness(Certificate),
    /// A simple cycle of the virtual graph.
    Cycle(Vec<V>),
}

/// Runs the cycle-freeness tester on a virtual graph with proximity `eps`.
pub fn find_virtual_cycle<G: VirtualGraph, R: Rng + ?Sized>(
    view: &mut G,
    eps: f64,
    cfg: &CycleConfig,
    rng: &mut R,
) -> Result<VirtualOutcome<G::V>, TestError> {
    let walker_eps = cycle_walker_eps(view.degree_bound(), eps.min(1.0), cfg);
    let tau = EdgeLabeling::tau(rng.gen());
    let mut sub = Subdivided::new(view, tau);
    Ok(match walk_view(&mut sub, walker_eps, &cfg.walker, rng)? {
        WalkOutcome::Accept => VirtualOutcome::Accept,
        WalkOutcome::Witness(c) => VirtualOutcome::Witness(c),
        WalkOutcome::OddCycle(c) => VirtualOutcome::Cycle(
            c.into_iter()
                .filter_map(|x| match x {
                    Sub::Orig(v) => Some(v),
                    Sub::Mid(..) => None,
                })
                .collect(),
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub walker: WalkerConfig,
    /// The walker runs with proximity `c3 * eps / (2d)`, or `c3 * eps / 2`
    /// in the direct tester.
    pub c3: f64,
    /// Walker constants of [`test_cycle_free_direct`].
    #[serde(default = "default_direct_walker")]
    pub direct_walker: WalkerConfig,
}

/// Walks `L = 128`, `K = 32`, `T = 2` on 4096 vertices at `eps = 0.1`.
fn default_direct_walker() -> WalkerConfig {
    WalkerConfig::anchored(4096, 0.25 * 0.1 / 2.0, 128, 32, 2)
}

impl CycleConfig {
    /// Nominal walker constants everywhere.
    pub fn nominal() -> Self {
        CycleConfig { walker: WalkerConfig::nominal(), c3: 0.25, direct_walker: WalkerConfig::nominal() }
    }
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig { walker: WalkerConfig::default(), c3: 0.25, direct_walker: default_direct_walker() }
    }
}

/// Degree bound and proximity after lifting `d < 3` to `d = 3`.
pub fn lift_degree(d: usize, eps: f64) -> (usize, f64) {
    if d >= 3 {
        (d, eps)
    } else {
        (3, eps * d.max(1) as f64 / 3.0)
    }
}

/// Walker proximity used by [`test_cycle_free`].
pub fn cycle_walker_eps(d: usize, eps: f64, cfg: &CycleConfig) -> f64 {
    let (d, eps) = lift_degree(d, eps);
    (cfg.c3 * eps / (2.0 * d as f64)).min(1.0)
}

/// Walk parameters [`test_cycle_free`] uses on an `n`-vertex input.
pub fn cycle_walker_params(n: usize, d: usize, eps: f64, cfg: &CycleConfig) -> WalkerParams {
    let (dl, _) = lift_degree(d, eps);
    WalkerParams::schedule((dl + 1) * n, cycle_walker_eps(d, eps, cfg), &cfg.walker)
}

/// One-sided cycle-freeness tester for bounded-degree graphs.
pub fn test_cycle_free<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    eps: f64,
    cfg: &CycleConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    require(eps > 0.0 && eps <= 1.0, || format!("eps = {eps} outside (0, 1]"))?;
    let (d, _) = lift_degree(oracle.d(), eps);
    let walker_eps = cycle_walker_eps(oracle.d(), eps, cfg);
    let tau = EdgeLabeling::tau(rng.gen());
    let mut view = GTauView::new(oracle, tau, d);
    match walk_view(&mut view, walker_eps, &cfg.walker, rng)? {
        WalkOutcome::Accept => Ok(Verdict::Accept),
        WalkOutcome::Witness(c) => Ok(Verdict::Reject(c)),
        WalkOutcome::OddCycle(c) => {
            let vertices = contract_tau_cycle(&c);
            assert!(vertices.len() >= 3, "odd cycles of the subdivision contract to cycles");
            Ok(Verdict::Reject(Certificate::SimpleCycle(SimpleCycle::new(vertices))))
        }
    }
}

/// Cycle-freeness via random `eq`/`neq` labels on the input itself. Needs no
/// degree bound beyond what the oracle reports.
pub fn test_cycle_free_direct<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    eps: f64,
    cfg: &CycleConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    require(eps > 0.0 && eps <= 1.0, || format!("eps = {eps} outside (0, 1]"))?;
    let labeling = EdgeLabeling::lambda(rng.gen());
    let mut view = BaseView { oracle, labeling: Some(labeling) };
    match walk_view(&mut view, (cfg.c3 * eps / 2.0).min(1.0), &cfg.direct_walker, rng)? {
        WalkOutcome::Accept => Ok(Verdict::Accept),
        WalkOutcome::Witness(c) => Ok(Verdict::Reject(c)),
        WalkOutcome::OddCycle(vertices) => {
            Ok(Verdict::Reject(Certificate::SimpleCycle(SimpleCycle { vertices, labeling: Some(labeling) })))
        }
    }
}

/// Double cover of a labelled simple graph: `v` and its twin `N + v` are
/// joined by `2 |Γ(v)|` parallel edges, `neq` edges connect matching copies
/// and `eq` edges connect opposite copies.
pub fn build_double_cover(g: &Graph, labeling: &EdgeLabeling) -> Graph {
    let n = g.n() as Vertex;
    let mut cover = Graph::new_multi(2 * g.n(), 3 * g.d().max(1));
    for e in g.edges() {
        let (u, v) = (e.u, e.v);
        if labeling.label(e) == Label::Eq {
            cover.add_edge(u, n + v).expect("cover edge fits");
            cover.add_edge(n + u, v).expect("cover edge fits");
        } else {
            cover.add_edge(u, v).expect("cover edge fits");
            cover.add_edge(n + u, n + v).expect("cover edge fits");
        }
    }
    for v in g.vertices() {
        for _ in 0..2 * g.degree(v) {
            cover.add_edge(v, n + v).expect("twin edges fit");
        }
    }
    cover
}
