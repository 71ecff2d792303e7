//! Query answering over RDF graphs under RDFS semantics.
//!
//! Two strategies are offered: saturate the graph with the RDFS rules and
//! evaluate plainly ([`closure`]), or rewrite the query into a path-expression
//! dialect that encodes the rules ([`rewrite`]) and evaluate it with the
//! product-automaton engine in [`path`].

pub mod bench;
pub mod closure;
pub mod error;
pub mod filter;
pub mod graph;
pub mod homomorphism;
mod lexer;
pub mod ntriples;
#[cfg(feature = "test-support")]
pub mod oracle;
pub mod path;
pub mod query;
pub mod rewrite;
pub mod semantics;
pub mod term;

pub use error::{Error, Result};
pub use semantics::{answer, render_rows, EntailmentMode};
pub use graph::{Axis, AxisKind, AxisStep, Graph};
pub use term::{Prefixes, Term, Triple};
