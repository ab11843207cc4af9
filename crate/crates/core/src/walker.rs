//! Random-walk two-colourability tester over query-access views.
//!
//! A view exposes a vertex sampler and labelled neighbor steps; the walker
//! runs many lazy random walks from each sampled start and records the
//! generalized parity with which every vertex was first reached. Two arrivals
//! at the same vertex with different parities close an odd walk, which is
//! reduced to a simple odd cycle.

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, SimpleCycle, Verdict};
use crate::error::{require, TestError};
use crate::graph::{CanonicalEdge, Vertex, NULL_VERTEX};
use crate::labeling::{EdgeLabeling, EdgeParity, PlainParity};
use crate::oracle::{QueryError, QueryOracle};

/// Why a view step could not return a neighbor.
#[derive(Debug, Clone)]
pub enum StepError {
    Query(QueryError),
    /// The view found a rejection certificate on its own.
    Witness(Certificate),
}

impl From<QueryError> for StepError {
    fn from(e: QueryError) -> Self {
        StepError::Query(e)
    }
}

/// Query access to a (possibly virtual) graph with labelled edges.
pub trait WalkGraph {
    type V: Copy + Eq + Hash + Debug;

    fn degree_bound(&self) -> usize;

    /// Estimate of the vertex count, used by the parameter schedule.
    fn n_estimate(&self) -> usize;

    /// A (near-)uniform vertex, or `None` when sampling failed.
    fn sample_vertex<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<Self::V>, StepError>;

    /// The `i`-th neighbor of `v` with the parity of the connecting edge.
    fn step(&mut self, v: Self::V, i: usize) -> Result<Option<(Self::V, u8)>, StepError>;

    /// Vertices from which an exhaustive search reaches every vertex.
    fn roots(&self) -> Vec<Self::V>;
}

/// Calibration constants of the parameter schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkerConfig {
    pub c_l: f64,
    pub c_k: f64,
    pub c_t: f64,
    /// Disable the exhaustive small-instance fallback.
    #[serde(default)]
    pub no_fallback: bool,
}

impl WalkerConfig {
    /// Uncalibrated constants `c_L = 4`, `c_K = 1`, `c_T = 8`.
    pub fn nominal() -> Self {
        WalkerConfig { c_l: 4.0, c_k: 1.0, c_t: 8.0, no_fallback: false }
    }

    /// Constants under which the schedule on `n` vertices at proximity `eps`
    /// walks exactly `walk_length`, `walks_per_start` and `starts`.
    pub fn anchored(n: usize, eps: f64, walk_length: usize, walks_per_start: usize, starts: usize) -> Self {
        let n = n.max(2) as f64;
        let log = n.log2();
        // stay just below the integers so that rounding up lands on them
        let shave = 1.0 - 1e-9;
        WalkerConfig {
            c_l: walk_length as f64 * eps.powi(3) / log * shave,
            c_k: walks_per_start as f64 * eps.powi(2) / (n.sqrt() * log) * shave,
            c_t: starts as f64 * eps * shave,
            no_fallback: false,
        }
    }

    /// Calibrated for [`test_2colorable`] at `eps = 0.1`: `L = 128`,
    /// `K = 32`, `T = 2` on 4096 vertices.
    pub fn direct() -> Self {
        WalkerConfig::anchored(4096, 0.1, 128, 32, 2)
    }
}

/// Calibrated so that the cycle tester (`c3 = 0.25`, `eps = 0.1`, `d = 3`)
/// walks `L = 128`, `K = 32`, `T = 2` on 4096-vertex inputs.
impl Default for WalkerConfig {
    fn default() -> Self {
        WalkerConfig { c_l: 6.6e-7, c_k: 3.1e-7, c_t: 0.0083, no_fallback: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkerParams {
    pub walks_per_start: usize,
    pub walk_length: usize,
    pub starts: usize,
}

impl WalkerParams {
    /// `L = c_L log n / eps^3`, `K = c_K sqrt(n) log n / eps^2`, `T = c_T / eps`,
    /// each rounded up and at least 1.
    pub fn schedule(n: usize, eps: f64, cfg: &WalkerConfig) -> Self {
        let n = n.max(2) as f64;
        let log = n.log2();
        let up = |x: f64| (x.ceil() as usize).max(1);
        WalkerParams {
            walk_length: up(cfg.c_l * log / eps.powi(3)),
            walks_per_start: up(cfg.c_k * n.sqrt() * log / eps.powi(2)),
            starts: up(cfg.c_t / eps),
        }
    }

    pub fn total_steps(&self) -> u128 {
        self.walks_per_start as u128 * self.walk_length as u128 * self.starts as u128
    }
}

/// A walk with the cumulative parity at every visited vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkRecord<V> {
    pub steps: Vec<(V, u8)>,
}

impl<V: Copy + Eq + Hash + Debug> WalkRecord<V> {
    pub fn start(&self) -> Option<V> {
        self.steps.first().map(|s| s.0)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("walk records are empty")]
    Empty,
    #[error("walks start at different vertices")]
    DifferentStarts,
    #[error("walks end at different vertices")]
    DifferentEnds,
    #[error("walks reach their end with equal parity")]
    EqualParity,
}

/// Splices two walks from a common start that reach a common end with
/// different parities into a simple cycle of odd generalized length.
pub fn extract_odd_cycle<V: Copy + Eq + Hash + Debug>(
    a: &WalkRecord<V>,
    b: &WalkRecord<V>,
) -> Result<Vec<V>, ExtractError> {
    let (Some(&(sa, _)), Some(&(sb, _))) = (a.steps.first(), b.steps.first()) else {
        return Err(ExtractError::Empty);
    };
    if sa != sb {
        return Err(ExtractError::DifferentStarts);
    }
    let (&(ea, pa), &(eb, pb)) = (a.steps.last().expect("non-empty"), b.steps.last().expect("non-empty"));
    if ea != eb {
        return Err(ExtractError::DifferentEnds);
    }
    if pa == pb {
        return Err(ExtractError::EqualParity);
    }
    let mut verts: Vec<V> = a.steps.iter().map(|s| s.0).collect();
    let mut parities: Vec<u8> = a.steps.windows(2).map(|w| w[0].1 ^ w[1].1).collect();
    for w in b.steps.windows(2).rev() {
        verts.push(w[0].0);
        parities.push(w[0].1 ^ w[1].1);
    }
    Ok(reduce_odd_closed_walk(verts, parities))
}

/// Reduces a closed walk `v_0, ..., v_m = v_0` with odd total parity to a
/// simple odd cycle by repeatedly cutting at the first repeated vertex and
/// keeping whichever side is odd. `parities[i]` belongs to `v_i v_{i+1}`.
pub fn reduce_odd_closed_walk<V: Copy + Eq + Hash + Debug>(mut verts: Vec<V>, mut parities: Vec<u8>) -> Vec<V> {
    debug_assert_eq!(verts.len(), parities.len() + 1);
    debug_assert_eq!(verts.first(), verts.last());
    debug_assert_eq!(parities.iter().fold(0, |a, p| a ^ p), 1);
    loop {
        let m = parities.len();
        let mut seen: HashMap<V, usize> = HashMap::new();
        let mut repeat = None;
        for (j, &v) in verts[..m].iter().enumerate() {
            if let Some(&i) = seen.get(&v) {
                repeat = Some((i, j));
                break;
            }
            seen.insert(v, j);
        }
        let Some((i, j)) = repeat else {
            verts.pop();
            return verts;
        };
        let inner = parities[i..j].iter().fold(0, |a, p| a ^ p);
        if inner == 1 {
            verts = verts[i..=j].to_vec();
            parities = parities[i..j].to_vec();
        } else {
            verts.drain(i + 1..=j);
            parities.drain(i..j);
        }
    }
}

/// Outcome of a walker run in view coordinates.
#[derive(Debug, Clone)]
pub enum WalkOutcome<V> {
    Accept,
    OddCycle(Vec<V>),
    Witness(Certificate),
}

fn lift<V>(r: Result<V, StepError>) -> Result<Result<V, Certificate>, QueryError> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(StepError::Query(e)) => Err(e),
        Err(StepError::Witness(c)) => Ok(Err(c)),
    }
}

macro_rules! step_or_return {
    ($e:expr) => {
        match lift($e)? {
            Ok(v) => v,
            Err(c) => return Ok(WalkOutcome::Witness(c)),
        }
    };
}

/// Runs the walker on a view with proximity `eps`. Falls back to exhaustive
/// two-colouring when the walk budget would exceed `n d` steps.
pub fn walk_view<W: WalkGraph, R: Rng + ?Sized>(
    view: &mut W,
    eps: f64,
    cfg: &WalkerConfig,
    rng: &mut R,
) -> Result<WalkOutcome<W::V>, QueryError> {
    let params = WalkerParams::schedule(view.n_estimate(), eps, cfg);
    if !cfg.no_fallback && params.total_steps() >= (view.n_estimate() * view.degree_bound().max(1)) as u128 {
        return exhaustive_two_coloring(view);
    }
    walk_with_params(view, &params, rng)
}

/// The walk phase with explicit parameters.
pub fn walk_with_params<W: WalkGraph, R: Rng + ?Sized>(
    view: &mut W,
    params: &WalkerParams,
    rng: &mut R,
) -> Result<WalkOutcome<W::V>, QueryError> {
    let d = view.degree_bound().max(1);
    for _ in 0..params.starts {
        let Some(s) = step_or_return!(view.sample_vertex(rng)) else {
            continue;
        };
        let mut walks: Vec<WalkRecord<W::V>> = Vec::with_capacity(params.walks_per_start);
        let mut first: HashMap<W::V, (u8, usize, usize)> = HashMap::new();
        first.insert(s, (0, usize::MAX, 0));
        for w in 0..params.walks_per_start {
            let mut rec = WalkRecord { steps: vec![(s, 0u8)] };
            let (mut v, mut p) = (s, 0u8);
            for _ in 0..params.walk_length {
                let i = rng.gen_range(1..=d);
                let Some((u, e)) = step_or_return!(view.step(v, i)) else {
                    continue;
                };
                v = u;
                p ^= e;
                rec.steps.push((v, p));
                match first.get(&v) {
                    None => {
                        first.insert(v, (p, w, rec.steps.len() - 1));
                    }
                    Some(&(q, _, _)) if q == p => {}
                    Some(&(_, ow, opos)) => {
                        let other = if ow == usize::MAX {
                            WalkRecord { steps: vec![(s, 0)] }
                        } else if ow == w {
                            WalkRecord { steps: rec.steps[..=opos].to_vec() }
                        } else {
                            WalkRecord { steps: walks[ow].steps[..=opos].to_vec() }
                        };
                        let cycle = extract_odd_cycle(&other, &rec).expect("collision satisfies the splice precondition");
                        return Ok(WalkOutcome::OddCycle(cycle));
                    }
                }
            }
            walks.push(rec);
        }
    }
    Ok(WalkOutcome::Accept)
}

/// Exact BFS two-colouring of everything reachable from the view's roots.
pub fn exhaustive_two_coloring<W: WalkGraph>(view: &mut W) -> Result<WalkOutcome<W::V>, QueryError> {
    let d = view.degree_bound();
    // vertex -> (colour, parent, parity of the parent edge)
    let mut color: HashMap<W::V, (u8, Option<W::V>, u8)> = HashMap::new();
    for r in view.roots() {
        if color.contains_key(&r) {
            continue;
        }
        color.insert(r, (0, None, 0));
        let mut q = VecDeque::from([r]);
        while let Some(x) = q.pop_front() {
            let cx = color[&x].0;
            for i in 1..=d {
                let Some((y, e)) = step_or_return!(view.step(x, i)) else {
                    break;
                };
                match color.get(&y) {
                    None => {
                        color.insert(y, (cx ^ e, Some(x), e));
                        q.push_back(y);
                    }
                    Some(&(cy, _, _)) if cy == cx ^ e => {}
                    Some(_) => {
                        let up = |mut v: W::V| {
                            let mut path = vec![v];
                            let mut pars = Vec::new();
                            while let (_, Some(p), e) = color[&v] {
                                pars.push(e);
                                path.push(p);
                                v = p;
                            }
                            (path, pars)
                        };
                        let (px, ex) = up(x);
                        let (py, ey) = up(y);
                        let mut verts: Vec<W::V> = px.into_iter().rev().collect();
                        let mut pars: Vec<u8> = ex.into_iter().rev().collect();
                        pars.push(e);
                        verts.extend(py);
                        pars.extend(ey);
                        return Ok(WalkOutcome::OddCycle(reduce_odd_closed_walk(verts, pars)));
                    }
                }
            }
        }
    }
    Ok(WalkOutcome::Accept)
}

/// The input graph itself, with parities from an optional labeling (all
/// edges odd when absent).
pub struct BaseView<'o, 'g> {
    pub oracle: &'o mut QueryOracle<'g>,
    pub labeling: Option<EdgeLabeling>,
}

impl WalkGraph for BaseView<'_, '_> {
    type V = Vertex;

    fn degree_bound(&self) -> usize {
        self.oracle.d()
    }

    fn n_estimate(&self) -> usize {
        self.oracle.n()
    }

    fn sample_vertex<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<Vertex>, StepError> {
        Ok(Some(rng.gen_range(1..=self.oracle.n() as Vertex)))
    }

    fn step(&mut self, v: Vertex, i: usize) -> Result<Option<(Vertex, u8)>, StepError> {
        let w = self.oracle.neighbor(v, i)?;
        if w == NULL_VERTEX {
            return Ok(None);
        }
        let e = CanonicalEdge::new(v, w);
        let p = match &self.labeling {
            Some(l) => l.parity(e),
            None => PlainParity.parity(e),
        };
        Ok(Some((w, p)))
    }

    fn roots(&self) -> Vec<Vertex> {
        (1..=self.oracle.n() as Vertex).collect()
    }
}

/// Tests (generalized) two-colourability of the input graph. Rejections
/// carry a simple cycle of odd generalized length; the labeling, if any, is
/// attached so the parity can be re-verified.
pub fn test_2colorable<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    eps: f64,
    labeling: Option<EdgeLabeling>,
    cfg: &WalkerConfig,
    rng: &mut R,
) -> Result<Verdict, TestError> {
    require(eps > 0.0 && eps <= 1.0, || format!("eps = {eps} outside (0, 1]"))?;
    let mut view = BaseView { oracle, labeling };
    match walk_view(&mut view, eps, cfg, rng)? {
        WalkOutcome::Accept => Ok(Verdict::Accept),
        WalkOutcome::Witness(c) => Ok(Verdict::Reject(c)),
        WalkOutcome::OddCycle(vertices) => Ok(Verdict::Reject(Certificate::SimpleCycle(SimpleCycle {
            vertices,
            labeling: view.labeling,
        }))),
    }
}
