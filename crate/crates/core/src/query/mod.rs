//! Graph patterns, queries and their evaluation.

pub mod eval;
pub mod map;
pub mod parse;
pub mod pattern;

pub use eval::{answer_query, answer_query_in, answers_via_closure, eval_pattern, eval_triple};
pub use map::{AnswerSet, Map, Var};
pub use parse::{parse_query, parse_query_with};
pub use pattern::{Dataset, GraphPattern, Predicate, Query, Select, TriplePattern};
