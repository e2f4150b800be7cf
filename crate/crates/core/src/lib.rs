//! Weak call-by-value higher-order rewriting and cost-size tuple
//! interpretations.
//!
//! * [`types`], [`term`], [`subst`]: simply typed terms, capture-avoiding
//!   substitution and alpha-equivalence.
//! * [`trs`], [`engine`]: rewrite systems, the call-by-value step relation,
//!   normalization and exhaustive derivation height.
//! * [`semantics`]: cost-size tuples, generic over the [`semantics::Natural`]
//!   scalar.
//! * [`parse`]: the `.trs` and `.csint` formats.
//! * [`analyzer`]: bounds, rule verification and the bound-vs-height harness.
//!
//! ```
//! use cbvtc_core::{bundled, extract_bound, parse_term};
//!
//! let trs = bundled::add_system();
//! let interp = bundled::add_interpretation::<u64>();
//! let t = parse_term(trs.signature(), "add (add 2 3)").unwrap();
//! assert_eq!(extract_bound(&t, &interp).unwrap(), 4);
//! ```

pub mod analyzer;
pub mod bundled;
pub mod engine;
pub mod error;
pub mod parse;
pub mod semantics;
pub mod subst;
pub mod term;
pub mod trs;
pub mod types;

use num_bigint::BigUint;

pub use analyzer::{bound_vs_actual, extract_bound, verify_rules, TermGenerator, VerificationReport};
pub use engine::{derivation_height, normalize, step, EngineError, Fuel};
pub use error::TermError;
pub use parse::{parse_expr, parse_interpretation, parse_term, parse_trs, ParseError};
pub use semantics::{Grid, MonoExpr, SemError};
pub use term::{Term, Var};
pub use trs::{Rule, Trs};
pub use types::{Signature, SimpleType};

/// Semantic values over machine words; arithmetic overflow is an error.
pub type Value = semantics::Value<u64>;
pub type CsTuple = semantics::CsTuple<u64>;
pub type Interpretation = semantics::Interpretation<u64>;
pub type Valuation = semantics::Valuation<u64>;

/// Arbitrary-precision counterparts.
pub type BigValue = semantics::Value<BigUint>;
pub type BigCsTuple = semantics::CsTuple<BigUint>;
pub type BigInterpretation = semantics::Interpretation<BigUint>;
pub type BigValuation = semantics::Valuation<BigUint>;
