//! Formula trees, grounding over a finite domain and evaluation.
//!
//! Ground formulas are compiled into a [`FlatFormula`] (post-order node
//! array) for repeated forward and reverse passes.

mod ast;
mod config;
mod eval;
mod ground;
mod kb;
mod sexpr;

use thiserror::Error;

pub use ast::{Formula, PropId, Quantifier, WeightedFormula};
pub use config::{ImplicationFlavor, LogicConfig};
pub use eval::{attainable_range, evaluate, Adjoints, EvalTrace, FlatFormula, Node};
pub use ground::{ground, GroundAtom, Interpretation};
pub use kb::KnowledgeBase;
pub use sexpr::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulaError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed knowledge base: {0}")]
    Json(String),
    #[error("malformed ground atom '{0}'")]
    BadAtom(String),
    #[error("constant {0} outside [0, 1]")]
    InvalidConstant(f64),
    #[error("formula weight must be positive and finite, got {0}")]
    InvalidWeight(f64),
    #[error("'{0}' needs at least one operand")]
    EmptyConnective(&'static str),
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("variable '{0}' is bound twice on one path")]
    VariableRebound(String),
    #[error("cannot ground a quantifier over an empty domain")]
    EmptyDomain,
    #[error("too many quantifier instances")]
    TooManyInstances,
    #[error("unknown predicate '{0}'")]
    UnknownPredicate(String),
    #[error("unknown domain object '{0}'")]
    UnknownObject(String),
    #[error("predicate '{predicate}' has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("no truth value for ground atom {0}")]
    MissingAtom(String),
    #[error("formula still contains atoms or quantifiers; ground it first")]
    NotGround,
    #[error("truth vector of length {0} does not cover every proposition")]
    MissingAssignment(usize),
    #[error("the log-product aggregator is only allowed at the root")]
    LogProductNotOutermost,
    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),
    #[error("range is only defined for a single connective over literals and constants")]
    UnsupportedNesting,
}
