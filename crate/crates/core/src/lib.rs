//! Bounded model checking for strategic ability under imperfect information
//! with perfect recall and distributed knowledge.

pub mod fixpoint;
pub mod format;
pub mod formula;
pub mod harness;
pub mod history;
pub mod model;
pub mod semantics;
pub mod strategy;

pub use fixpoint::eval_fixedpoint;
pub use formula::{parse, resolve, Formula, Resolved, ResolvedFormula};
pub use history::{equiv_class, parse_history, History};
pub use model::{validate_model, Model, ModelBuilder};
pub use semantics::{eval, Checker, EvalError, EvalOptions, VerdictReport};
pub use strategy::StrategyProfile;
