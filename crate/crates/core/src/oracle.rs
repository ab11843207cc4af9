//! The incidence-list query oracle with per-run counters and an optional budget.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, NULL_VERTEX};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub neighbor: u64,
    pub degree: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.neighbor + self.degree
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("vertex {v} outside 1..={n}")]
    VertexOutOfRange { v: Vertex, n: usize },
    #[error("slot {i} outside 1..={d}")]
    SlotOutOfRange { i: usize, d: usize },
}

/// Oracle access to a graph. Every successful access increments exactly one
/// counter; an access that would exceed the budget fails without counting.
#[derive(Debug)]
pub struct QueryOracle<'g> {
    graph: &'g Graph,
    counts: QueryCounts,
    budget: Option<u64>,
}

impl<'g> QueryOracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        QueryOracle { graph, counts: QueryCounts::default(), budget: None }
    }

    pub fn with_budget(graph: &'g Graph, budget: Option<u64>) -> Self {
        QueryOracle { graph, counts: QueryCounts::default(), budget }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn d(&self) -> usize {
        self.graph.d()
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    /// The graph behind the oracle. Testers must not call this; it exists for
    /// harness bookkeeping and certificate verification.
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    fn charge(&mut self) -> Result<(), QueryError> {
        if let Some(budget) = self.budget {
            if self.counts.total() >= budget {
                return Err(QueryError::BudgetExhausted { budget });
            }
        }
        Ok(())
    }

    fn check(&self, v: Vertex) -> Result<(), QueryError> {
        if self.graph.contains_vertex(v) {
            Ok(())
        } else {
            Err(QueryError::VertexOutOfRange { v, n: self.graph.n() })
        }
    }

    /// The `i`-th neighbor of `v` (1-based), or `NULL_VERTEX` past the degree.
    pub fn neighbor(&mut self, v: Vertex, i: usize) -> Result<Vertex, QueryError> {
        self.check(v)?;
        if i == 0 {
            return Err(QueryError::SlotOutOfRange { i, d: self.graph.d() });
        }
        self.charge()?;
        self.counts.neighbor += 1;
        Ok(self.graph.neighbors(v).get(i - 1).copied().unwrap_or(NULL_VERTEX))
    }

    pub fn degree(&mut self, v: Vertex) -> Result<usize, QueryError> {
        self.check(v)?;
        self.charge()?;
        self.counts.degree += 1;
        Ok(self.graph.degree(v))
    }

    /// Queries slots `1..=d` until the first null answer.
    pub fn all_neighbors(&mut self, v: Vertex) -> Result<Vec<Vertex>, QueryError> {
        let mut out = Vec::new();
        for i in 1..=self.graph.d() {
            let u = self.neighbor(v, i)?;
            if u == NULL_VERTEX {
                break;
            }
            out.push(u);
        }
        Ok(out)
    }
}
