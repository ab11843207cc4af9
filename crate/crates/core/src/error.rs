use thiserror::Error;

use crate::exact::ExactError;
use crate::generators::GenError;
use crate::oracle::QueryError;

/// Failure of a tester run. A run that fails never produces a verdict.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum TestError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

impl TestError {
    pub fn is_budget(&self) -> bool {
        matches!(self, TestError::Query(QueryError::BudgetExhausted { .. }))
    }
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestError> {
    if cond {
        Ok(())
    } else {
        Err(TestError::Precondition(msg()))
    }
}
