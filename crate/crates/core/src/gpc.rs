//! GPC patterns with restrictors: surface syntax, well-formedness, the
//! direct denotational semantics (the oracle every other route is tested
//! against), normal-form rewriting, the pattern-to-automaton compiler, and
//! restrictor evaluation over the grounded automaton.

mod ast;
mod compile;
mod eval;
mod normalize;
mod parser;
mod query;

pub use ast::{
    all_vars, free_vars, validate, Condition, GpcError, GpcQuery, Pattern, Restrictor, Var,
};
pub use compile::compile;
pub use eval::{eval_enum, eval_condition, Mapping, MatchSet};
pub use normalize::{is_normal_form, normalize};
pub use parser::{parse_pattern, parse_query};
pub use query::{eval_query, eval_query_with_cap, restrictor_oracle, satisfies};
