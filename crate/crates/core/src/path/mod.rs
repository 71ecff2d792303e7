//! Regular, nested and constrained path expressions.

mod ast;
mod eval;
mod nfa;
mod parse;

pub use ast::{trans, Constraint, Dialect, PathExpr};
pub use eval::{constraint_sat, eval_all_pairs, eval_pair, label, Evaluator};
pub use nfa::{build_nfa, Nfa, StateId};
pub use parse::{parse_path, parse_path_with};

pub(crate) use parse::{parse_filter_call, parse_triple_pattern};
