//! Testers for graphs without a useful degree bound, where distance is
//! measured against the number of edges, and the experiment behind the
//! square-root lower bound for star minors.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, MinorWitness, Verdict};
use crate::cycle::{test_cycle_free_direct, CycleConfig};
use crate::error::{require, TestError};
use crate::exact::SearchOutcome;
use crate::generators::{gen_clique_plus_cycle, gen_cycle_plus_isolated, rng_for, GenError};
use crate::graph::{CanonicalEdge, Graph, Vertex, NULL_VERTEX};
use crate::oracle::{QueryError, QueryOracle};
use crate::pattern::Pattern;
use crate::tree::{globalize, known_graph, search_star};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerMethod {
    /// Accept a uniform vertex with probability `deg / d`, where `d` is the
    /// oracle's slot count. Exactly uniform over edges.
    KnownBound,
    /// Like `KnownBound` with `d` replaced by the largest degree seen so far
    /// (at least `initial`). Vertices above the running maximum are
    /// under-sampled until it catches up.
    Adaptive { initial: usize },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SampleError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("no edge accepted in {attempts} attempts; the graph has too few edges")]
    SamplingFailed { attempts: u64 },
}

impl From<SampleError> for TestError {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::Query(q) => TestError::Query(q),
            SampleError::SamplingFailed { .. } => TestError::Precondition(e.to_string()),
        }
    }
}

/// Near-uniform edge sampling through degree and neighbor queries.
#[derive(Debug, Clone)]
pub struct EdgeSampler {
    pub method: SamplerMethod,
    /// Attempts per sample are capped at `attempt_factor * d_max`; with at
    /// least `n/2` edges a sample fails with probability below
    /// `exp(-attempt_factor)`.
    pub attempt_factor: u64,
    d_max: usize,
}

impl EdgeSampler {
    pub fn new(method: SamplerMethod, d: usize) -> Self {
        let d_max = match method {
            SamplerMethod::KnownBound => d,
            SamplerMethod::Adaptive { initial } => initial.max(1),
        };
        EdgeSampler { method, attempt_factor: 20, d_max: d_max.max(1) }
    }

    pub fn for_oracle(oracle: &QueryOracle<'_>) -> Self {
        EdgeSampler::new(SamplerMethod::KnownBound, oracle.d())
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Largest ratio between two edges' sampling probabilities once the
    /// running maximum has reached the true maximum degree (1 for both
    /// methods).
    pub fn bias_bound(&self) -> f64 {
        1.0
    }

    /// One edge, oriented from the vertex that was accepted.
    pub fn sample_edge<R: Rng + ?Sized>(
        &mut self,
        oracle: &mut QueryOracle<'_>,
        rng: &mut R,
    ) -> Result<CanonicalEdge, SampleError> {
        self.sample_arc(oracle, rng).map(|(u, v)| CanonicalEdge::new(u, v))
    }

    fn sample_arc<R: Rng + ?Sized>(
        &mut self,
        oracle: &mut QueryOracle<'_>,
        rng: &mut R,
    ) -> Result<(Vertex, Vertex), SampleError> {
        let n = oracle.n() as Vertex;
        let attempts = self.attempt_factor * self.d_max as u64;
        for _ in 0..attempts {
            let v = rng.gen_range(1..=n);
            let deg = oracle.degree(v)?;
            if let SamplerMethod::Adaptive { .. } = self.method {
                self.d_max = self.d_max.max(deg);
            }
            if deg == 0 || rng.gen_range(0..self.d_max) >= deg {
                continue;
            }
            let u = oracle.neighbor(v, rng.gen_range(1..=deg))?;
            return Ok((v, u));
        }
        Err(SampleError::SamplingFailed { attempts })
    }
}

/// Cycle-freeness needs no degree bound: the direct tester's walk parameters
/// do not depend on `d`.
pub fn test_cycle_free_unbounded<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    eps: f64,
    cfg: &CycleConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    test_cycle_free_direct(oracle, eps, cfg, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnboundedStarConfig {
    /// Edge samples drawn after the bounded-degree emulation: `ceil(c / eps)`.
    pub edge_samples_c: f64,
    pub search_work_cap: u64,
}

impl Default for UnboundedStarConfig {
    fn default() -> Self {
        UnboundedStarConfig { edge_samples_c: 3.0, search_work_cap: 2_000_000 }
    }
}

/// Stops exploration at the first vertex of degree at least `k`.
struct LowDegreeView<'o, 'g> {
    oracle: &'o mut QueryOracle<'g>,
    k: usize,
    adj: HashMap<Vertex, Vec<Vertex>>,
}

enum Fetch {
    Low,
    High(MinorWitness),
}

impl LowDegreeView<'_, '_> {
    fn fetch(&mut self, v: Vertex) -> Result<Fetch, QueryError> {
        if self.adj.contains_key(&v) {
            return Ok(Fetch::Low);
        }
        let deg = self.oracle.degree(v)?;
        let take = deg.min(self.k);
        let mut nb = Vec::with_capacity(take);
        for i in 1..=take {
            let u = self.oracle.neighbor(v, i)?;
            if u != NULL_VERTEX && u != v && !nb.contains(&u) {
                nb.push(u);
            }
        }
        if deg >= self.k && nb.len() >= self.k {
            return Ok(Fetch::High(high_degree_star(v, &nb[..self.k])));
        }
        self.adj.insert(v, nb);
        Ok(Fetch::Low)
    }
}

fn high_degree_star(v: Vertex, leaves: &[Vertex]) -> MinorWitness {
    let mut branch_sets = vec![vec![v]];
    branch_sets.extend(leaves.iter().map(|&u| vec![u]));
    MinorWitness {
        pattern: Pattern::star(leaves.len()),
        branch_sets,
        connecting_edges: leaves.iter().map(|&u| (v, u)).collect(),
        root: None,
    }
}

/// Star-minor tester for the unbounded-degree model: the bounded-degree star
/// tester emulated with `d = k - 1`, then a check of the endpoints of
/// `O(1/eps)` sampled edges. Any vertex of degree `k` or more is a star.
pub fn test_star_unbounded<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    k: usize,
    eps: f64,
    cfg: &UnboundedStarConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    require(k >= 3, || "star size must be at least 3".into())?;
    require(eps > 0.0 && eps <= 1.0, || format!("eps = {eps} outside (0, 1]"))?;
    let reject = |w: MinorWitness| Ok(Verdict::Reject(Certificate::MinorWitness(w)));
    let n = oracle.n() as Vertex;
    let d = oracle.d();
    let inner_eps = eps / (4.0 * k as f64);
    let trials = (4.0 / inner_eps).ceil() as u64;
    let max_layers = (2.0 * k as f64 / inner_eps).ceil() as usize;
    {
        let mut view = LowDegreeView { oracle, k, adj: HashMap::new() };
        for _ in 0..trials {
            let s = rng.gen_range(1..=n);
            let mut seen: HashSet<Vertex> = HashSet::from([s]);
            let mut order = vec![s];
            let mut layer = vec![s];
            for _ in 0..max_layers {
                let mut next = Vec::new();
                for &x in &layer {
                    if let Fetch::High(w) = view.fetch(x)? {
                        return reject(w);
                    }
                    for &y in &view.adj[&x] {
                        if seen.insert(y) {
                            next.push(y);
                        }
                    }
                }
                if next.len() >= k {
                    let mut sets = vec![order.clone()];
                    sets.extend(next[..k].iter().map(|&u| vec![u]));
                    let mut all = order.clone();
                    all.extend(&next);
                    return reject(star_in_view(&view.adj, &all, k, sets));
                }
                if next.is_empty() {
                    break;
                }
                order.extend(&next);
                layer = next;
            }
            let local = known_graph(|v| view.adj.get(&v).map(Vec::as_slice), &order);
            if let SearchOutcome::Found(w) = search_star(&local, k, cfg.search_work_cap) {
                return reject(globalize(w, &order));
            }
        }
    }
    let mut sampler = EdgeSampler::new(SamplerMethod::KnownBound, d);
    let samples = (cfg.edge_samples_c / eps).ceil() as u64;
    for _ in 0..samples {
        let e = sampler.sample_edge(oracle, rng)?;
        for v in [e.u, e.v] {
            if oracle.degree(v)? >= k {
                let mut view = LowDegreeView { oracle, k, adj: HashMap::new() };
                if let Fetch::High(w) = view.fetch(v)? {
                    return reject(w);
                }
            }
        }
    }
    Ok(Verdict::Accept)
}

/// Star witness with a connected centre set, built on the known adjacency.
fn star_in_view(adj: &HashMap<Vertex, Vec<Vertex>>, all: &[Vertex], k: usize, sets: Vec<Vec<Vertex>>) -> MinorWitness {
    let local = known_graph(|v| adj.get(&v).map(Vec::as_slice), all);
    let pos: HashMap<Vertex, Vertex> = all.iter().enumerate().map(|(i, &v)| (v, i as Vertex + 1)).collect();
    let local_sets = sets.iter().map(|s| s.iter().map(|v| pos[v]).collect()).collect();
    let w = MinorWitness::from_branch_sets(&local, Pattern::star(k), local_sets).expect("BFS layers realize the star");
    globalize(w, all)
}

/// Detection rates of a high-degree vertex under a query budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishStats {
    pub n: usize,
    pub budget: u64,
    pub trials: usize,
    /// Fraction of runs on the clique-plus-cycle graph that saw a vertex of
    /// degree at least 3.
    pub detect_clique: f64,
    /// The same on the cycle-plus-isolated graph (always 0: it has none).
    pub detect_isolated: f64,
}

/// Random starts, each expanded by BFS to `radius` hops, until `budget`
/// queries are spent. Reports whether a third neighbor was ever seen.
pub fn generic_explorer<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    radius: usize,
    rng: &mut R,
) -> Result<bool, QueryError> {
    let n = oracle.n() as Vertex;
    let slots = oracle.d().min(3);
    if slots < 3 {
        return Ok(false);
    }
    let mut expanded: HashSet<Vertex> = HashSet::new();
    while expanded.len() < n as usize {
        let s = rng.gen_range(1..=n);
        let mut layer = vec![s];
        for depth in 0..=radius {
            let mut next = Vec::new();
            for &x in &layer {
                if !expanded.insert(x) {
                    continue;
                }
                for i in 1..=slots {
                    let u = match oracle.neighbor(x, i) {
                        Ok(u) => u,
                        Err(QueryError::BudgetExhausted { .. }) => return Ok(false),
                        Err(e) => return Err(e),
                    };
                    if u == NULL_VERTEX {
                        break;
                    }
                    if i == 3 {
                        return Ok(true);
                    }
                    if depth < radius {
                        next.push(u);
                    }
                }
            }
            layer = next;
        }
    }
    Ok(false)
}

/// Runs the explorer on fresh random copies of both graphs.
pub fn distinguishing_experiment(
    n: usize,
    budget: u64,
    trials: usize,
    radius: usize,
    seed: u64,
) -> Result<DistinguishStats, GenError> {
    let clique = gen_clique_plus_cycle(n)?;
    let isolated = gen_cycle_plus_isolated(n)?;
    let mut rng = rng_for(seed);
    let rate = |g: &Graph, rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
        let hits = (0..trials)
            .filter(|_| {
                let copy = g.random_isomorphic_copy(rng);
                let mut o = QueryOracle::with_budget(&copy, Some(budget));
                generic_explorer(&mut o, radius, rng).expect("explorer only fails on the budget")
            })
            .count();
        hits as f64 / trials.max(1) as f64
    };
    let detect_clique = rate(&clique, &mut rng);
    let detect_isolated = rate(&isolated, &mut rng);
    Ok(DistinguishStats { n, budget, trials, detect_clique, detect_isolated })
}
