//! Descriptive-complexity toolkit core.
//!
//! Finite structures over initial segments `{0..n-1}`, first- and second-order
//! formulas with the numeric built-ins (`=`, `<=`, `<`, `BIT`, `suc`, `0`, `max`),
//! a brute-force model checker, first-order queries and projections, the dual
//! operator on formulas, and exhaustive verifiers for reductions and canonical
//! decompositions of complete problems.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! and threaded execution live in the `fopkit` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canonical;
pub mod dual;
pub mod eval;
pub mod exec;
pub mod logic;
pub mod model;
pub mod query;

pub use canonical::{builtin, Builtin, Library, Problem, Threshold};
pub use dual::{syntactic_dual, DualResult};
pub use eval::{eval_fo, eval_so, find_witness, models, Assignment, Witness};
pub use exec::{Executor, Sequential, Verdict};
pub use logic::{parse_formula, parse_sentence, Formula, Term};
pub use model::{Structure, TupleSet, Vocabulary};
pub use query::{apply_query, Fop, Query};

/// Default cap on enumerated interpretations (and on enumerated structures in
/// exhaustive checks).
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Union of the per-module errors, convenient for front ends.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Parse(#[from] logic::ParseError),
    #[error(transparent)]
    Logic(#[from] logic::LogicError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Query(#[from] query::QueryError),
    #[error(transparent)]
    Dual(#[from] dual::DualError),
    #[error(transparent)]
    Canon(#[from] canonical::CanonError),
}
