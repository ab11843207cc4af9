//! Rejection certificates and their verification against the full graph.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CanonicalEdge, Graph, Vertex};
use crate::labeling::{EdgeLabeling, EdgeParity};
use crate::pattern::Pattern;

/// A simple cycle `v_0, ..., v_{m-1}` closed by the edge `v_{m-1} v_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleCycle {
    pub vertices: Vec<Vertex>,
    /// Seed of the parity labeling under which the cycle is odd, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<EdgeLabeling>,
}

impl SimpleCycle {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        SimpleCycle { vertices, labeling: None }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |i| (self.vertices[i], self.vertices[(i + 1) % m]))
    }
}

/// Branch sets realizing a pattern as a minor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub pattern: Pattern,
    /// `branch_sets[h]` realizes pattern node `h`.
    pub branch_sets: Vec<Vec<Vertex>>,
    /// One `G`-edge per pattern edge, aligned with `pattern.edges`.
    pub connecting_edges: Vec<(Vertex, Vertex)>,
    /// Pattern root and a vertex its branch set must contain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<(usize, Vertex)>,
}

impl MinorWitness {
    /// Fills in connecting edges from the branch sets; `None` if some pattern
    /// edge has no realizing `G`-edge.
    pub fn from_branch_sets(g: &Graph, pattern: Pattern, branch_sets: Vec<Vec<Vertex>>) -> Option<Self> {
        let mut owner: HashMap<Vertex, usize> = HashMap::new();
        for (h, set) in branch_sets.iter().enumerate() {
            for &v in set {
                owner.insert(v, h);
            }
        }
        let mut connecting = Vec::with_capacity(pattern.edges.len());
        for &(a, b) in &pattern.edges {
            let e = branch_sets[a].iter().find_map(|&x| {
                g.neighbors(x).iter().find(|&&y| owner.get(&y) == Some(&b)).map(|&y| (x, y))
            })?;
            connecting.push(e);
        }
        Some(MinorWitness { pattern, branch_sets, connecting_edges: connecting, root: None })
    }

    pub fn rooted_at(mut self, node: usize, v: Vertex) -> Self {
        self.root = Some((node, v));
        self
    }

    pub fn size(&self) -> usize {
        self.branch_sets.iter().map(Vec::len).sum()
    }

    /// All vertices used by branch sets.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.branch_sets.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseCut {
    pub side: Vec<Vertex>,
    pub crossing_edges: Vec<CanonicalEdge>,
    /// Claimed bound on `|crossing| / (|side| d)`.
    pub zeta: f64,
}

impl SparseCut {
    /// The exact cut of `side` in `g`.
    pub fn of(g: &Graph, side: &[Vertex], zeta: f64) -> Self {
        let mut side = side.to_vec();
        side.sort_unstable();
        side.dedup();
        SparseCut { crossing_edges: cut_edges(g, &side), side, zeta }
    }

    pub fn sparsity(&self, d: usize) -> f64 {
        if self.side.is_empty() {
            return f64::INFINITY;
        }
        self.crossing_edges.len() as f64 / (self.side.len() as f64 * d as f64)
    }

    pub fn is_sparse(&self, d: usize) -> bool {
        self.crossing_edges.len() as f64 <= self.zeta * self.side.len() as f64 * d as f64
    }
}

/// Edges with exactly one endpoint in `side`, sorted, one entry per copy.
pub fn cut_edges(g: &Graph, side: &[Vertex]) -> Vec<CanonicalEdge> {
    let set: HashSet<Vertex> = side.iter().copied().collect();
    let mut out = Vec::new();
    for &u in &set {
        let mut mult: HashMap<Vertex, u32> = HashMap::new();
        for &w in g.neighbors(u) {
            if !set.contains(&w) {
                let m = mult.entry(w).or_insert(0);
                out.push(CanonicalEdge::with_mult(u, w, *m));
                *m += 1;
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    SimpleCycle(SimpleCycle),
    MinorWitness(MinorWitness),
    SparseCut(SparseCut),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::SimpleCycle(_) => "simple_cycle",
            Certificate::MinorWitness(_) => "minor_witness",
            Certificate::SparseCut(_) => "sparse_cut",
        }
    }

    /// Cycle length, branch-set volume or cut side size.
    pub fn size(&self) -> usize {
        match self {
            Certificate::SimpleCycle(c) => c.len(),
            Certificate::MinorWitness(w) => w.size(),
            Certificate::SparseCut(c) => c.side.len(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "certificate", rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject(Certificate),
}

impl Verdict {
    pub fn is_reject(&self) -> bool {
        matches!(self, Verdict::Reject(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(c) => Some(c),
        }
    }
}

/// Why a certificate failed verification.
#[derive(Debug, Clone, Error, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateFault {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("cycle is too short ({0} vertices)")]
    CycleTooShort(usize),
    #[error("cycle repeats vertex {0}")]
    RepeatedVertex(Vertex),
    #[error("{0}-{1} is not an edge")]
    MissingEdge(Vertex, Vertex),
    #[error("cycle has even generalized length")]
    EvenParity,
    #[error("expected {expected} branch sets, found {found}")]
    BranchSetCount { expected: usize, found: usize },
    #[error("branch set {0} is empty")]
    EmptyBranchSet(usize),
    #[error("branch sets overlap at vertex {0}")]
    OverlappingBranchSets(Vertex),
    #[error("branch set {0} is not connected")]
    DisconnectedBranchSet(usize),
    #[error("pattern edge {0} has no valid connecting edge")]
    BadConnectingEdge(usize),
    #[error("root vertex {1} not in branch set of node {0}")]
    BadRoot(usize, Vertex),
    #[error("cut side is empty")]
    EmptyCut,
    #[error("listed crossing edges differ from the actual cut")]
    WrongCrossingSet,
    #[error("cut sparsity {actual} exceeds claimed {claimed}")]
    NotSparse { actual: String, claimed: String },
}

pub fn verify_certificate(g: &Graph, cert: &Certificate) -> Result<(), CertificateFault> {
    match cert {
        Certificate::SimpleCycle(c) => verify_cycle(g, c),
        Certificate::MinorWitness(w) => verify_minor(g, w),
        Certificate::SparseCut(c) => verify_cut(g, c),
    }
}

fn verify_cycle(g: &Graph, c: &SimpleCycle) -> Result<(), CertificateFault> {
    for &v in &c.vertices {
        if !g.contains_vertex(v) {
            return Err(CertificateFault::UnknownVertex(v));
        }
    }
    let m = c.vertices.len();
    let mut seen = HashSet::new();
    for &v in &c.vertices {
        if !seen.insert(v) {
            return Err(CertificateFault::RepeatedVertex(v));
        }
    }
    // in multigraphs a loop or a doubled edge is already a cycle
    let min_len = if g.is_multigraph() { 1 } else { 3 };
    if m < min_len {
        return Err(CertificateFault::CycleTooShort(m));
    }
    if m == 1 && g.edge_multiplicity(c.vertices[0], c.vertices[0]) == 0 {
        return Err(CertificateFault::MissingEdge(c.vertices[0], c.vertices[0]));
    }
    if m == 2 && g.edge_multiplicity(c.vertices[0], c.vertices[1]) < 2 {
        return Err(CertificateFault::CycleTooShort(2));
    }
    for (a, b) in c.edges() {
        if !g.has_edge(a, b) {
            return Err(CertificateFault::MissingEdge(a, b));
        }
    }
    if let Some(lab) = &c.labeling {
        let parity: u32 = c.edges().map(|(a, b)| lab.parity(CanonicalEdge::new(a, b)) as u32).sum();
        if parity % 2 == 0 {
            return Err(CertificateFault::EvenParity);
        }
    }
    Ok(())
}

fn verify_minor(g: &Graph, w: &MinorWitness) -> Result<(), CertificateFault> {
    let h = w.pattern.size;
    if w.branch_sets.len() != h {
        return Err(CertificateFault::BranchSetCount { expected: h, found: w.branch_sets.len() });
    }
    let mut owner: HashMap<Vertex, usize> = HashMap::new();
    for (i, set) in w.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(CertificateFault::EmptyBranchSet(i));
        }
        for &v in set {
            if !g.contains_vertex(v) {
                return Err(CertificateFault::UnknownVertex(v));
            }
            if owner.insert(v, i).is_some() {
                return Err(CertificateFault::OverlappingBranchSets(v));
            }
        }
    }
    for (i, set) in w.branch_sets.iter().enumerate() {
        if !is_connected_set(g, set) {
            return Err(CertificateFault::DisconnectedBranchSet(i));
        }
    }
    if w.connecting_edges.len() != w.pattern.edges.len() {
        return Err(CertificateFault::BadConnectingEdge(w.connecting_edges.len().min(w.pattern.edges.len())));
    }
    for (idx, (&(a, b), &(x, y))) in w.pattern.edges.iter().zip(&w.connecting_edges).enumerate() {
        let ox = owner.get(&x).copied();
        let oy = owner.get(&y).copied();
        let matches = (ox == Some(a) && oy == Some(b)) || (ox == Some(b) && oy == Some(a));
        if !matches || !g.has_edge(x, y) {
            return Err(CertificateFault::BadConnectingEdge(idx));
        }
    }
    if let Some((node, v)) = w.root {
        if node >= h || !w.branch_sets[node].contains(&v) {
            return Err(CertificateFault::BadRoot(node, v));
        }
    }
    Ok(())
}

fn verify_cut(g: &Graph, c: &SparseCut) -> Result<(), CertificateFault> {
    if c.side.is_empty() {
        return Err(CertificateFault::EmptyCut);
    }
    for &v in &c.side {
        if !g.contains_vertex(v) {
            return Err(CertificateFault::UnknownVertex(v));
        }
    }
    let mut side = c.side.clone();
    side.sort_unstable();
    side.dedup();
    let mut listed = c.crossing_edges.clone();
    listed.sort();
    if listed != cut_edges(g, &side) {
        return Err(CertificateFault::WrongCrossingSet);
    }
    let actual = listed.len() as f64 / (side.len() as f64 * g.d() as f64);
    if actual > c.zeta + 1e-12 {
        return Err(CertificateFault::NotSparse { actual: format!("{actual:.6}"), claimed: format!("{:.6}", c.zeta) });
    }
    Ok(())
}

/// Whether `set` induces a connected subgraph of `g`.
pub fn is_connected_set(g: &Graph, set: &[Vertex]) -> bool {
    let Some(&start) = set.first() else {
        return false;
    };
    let members: HashSet<Vertex> = set.iter().copied().collect();
    let mut seen = HashSet::from([start]);
    let mut q = VecDeque::from([start]);
    while let Some(x) = q.pop_front() {
        for &y in g.neighbors(x) {
            if members.contains(&y) && seen.insert(y) {
                q.push_back(y);
            }
        }
    }
    seen.len() == members.len()
}
