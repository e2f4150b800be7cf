//! Cost-size tuple semantics for weak call-by-value rewriting.
//!
//! Every type is interpreted as a set of tuples `⟨(n, f^c), f^s⟩`: a cost
//! number, a cost function describing the cost of further applications,
//! and a size component. Terms are interpreted compositionally, and the
//! cost number of a ground term bounds its derivation height.
//!
//! Everything here is generic over the [`Natural`] scalar.

mod expr;
mod interp;
mod order;
mod scalar;
mod shape;
mod value;

use thiserror::Error;

pub use expr::MonoExpr;
pub use interp::{interpret_term, sem_apply, CsTuple, Interpretation, SymbolInterpretation, Valuation};
pub use order::{compare, compare_tuples, sample_function_expr, sample_values, Grid, Order, SampleFn, Verdict, Witness};
pub use scalar::Natural;
pub use shape::{cost_fn_shape, size_shape, type_interpretation, InterpretationKey, SemType, TypeShape};
pub use value::{eval, eval_closed, zero_cost, zero_cost_expr, Closure, Env, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemError {
    #[error("no interpretation key for base type `{0}`")]
    MissingKey(String),
    #[error("interpretation key for `{0}` must be at least 1")]
    InvalidKey(String),
    #[error("no interpretation for symbol `{0}`")]
    MissingSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is interpreted twice")]
    Duplicate(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("valuation gives `{0}` a nonzero cost number")]
    Valuation(String),
    #[error("arithmetic overflow (try the arbitrary-precision scalar)")]
    Overflow,
    #[error("sample grid needs {needed} points, budget is {budget}")]
    GridTooLarge { needed: usize, budget: usize },
    #[error("bad grid specification: {0}")]
    Grid(String),
}
