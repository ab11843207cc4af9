//! One-sided property testers for graph minors in the incidence-list query
//! model, with exact brute-force oracles and seeded instance generators.

pub mod certificate;
pub mod ck;
pub mod cycle;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod explore;
pub mod generators;
pub mod graph;
pub mod labeling;
pub mod oracle;
pub mod pattern;
pub mod tree;
pub mod unbounded;
pub mod walker;

pub use certificate::{verify_certificate, Certificate, CertificateFault, MinorWitness, SimpleCycle, SparseCut, Verdict};
pub use graph::{CanonicalEdge, Graph, GraphError, Vertex, NULL_VERTEX};
pub use labeling::{EdgeLabeling, EdgeParity, Label, LabelDomain};
pub use oracle::{QueryCounts, QueryError, QueryOracle};
pub use pattern::{Pattern, PatternError, RootedTree};
pub use error::TestError;
