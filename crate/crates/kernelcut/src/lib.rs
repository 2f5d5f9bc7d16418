//! Kernelization (data-reduction) rules and FPT algorithms for path and cycle
//! problems under structural parameterizations, together with exact
//! brute-force oracles at desk scale and generators for hardness
//! constructions used as a certified stress corpus.
//!
//! The crate is organized around four layers:
//!
//! * [`graph`] / [`instance`] / [`structure`] — the shared data model:
//!   graphs, labeled multigraphs, problem instances with structural
//!   witnesses, and the witness / degree-2 decomposition predicates.
//! * [`matching`] — maximum bipartite matching and the restriction
//!   property that powers all marking rules.
//! * [`vc`] / [`maxleaf`] / [`cluster`] — the kernelizers, one module per
//!   parameterization.
//! * [`oracle`] / [`gen`] / [`suites`] — exact solvers, instance
//!   generators, and the verification suites wired into the CLI.

pub mod caps;
pub mod cluster;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod maxleaf;
pub mod oracle;
pub mod structure;
pub mod suites;
pub mod vc;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid witness: {0}")]
    Witness(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A configured resource cap (vertex count, step budget) was exceeded.
    /// Oracles surface this instead of returning a silently wrong answer.
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
