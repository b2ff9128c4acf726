//! Workbench for explicit-substitution lambda calculi.
//!
//! Eight calculi (pure named/De Bruijn, lambda-x, lambda-upsilon,
//! lambda-sigma, named lambda-sigma, lambda-wsn with explicit weakening, and
//! the lambda-bar-mu-mu-tilde sequent calculus) share one rewriting kernel.
//! Each calculus ships its rule table, a simple-type checker, an expansion
//! of explicit substitutions into pure redexes, and — where the expansion
//! alone cannot reverse reduction — the simulation machinery (flattening,
//! skeleton orders, initialization witnesses, step simulation) that the
//! `technique` module drives generically.
//!
//! Everything is exercised at desk scale by the `checks` registry:
//! small-term enumeration, witness construction and reduction-graph search,
//! with every emitted trace replayed step by step.

pub mod kernel;
pub mod types;
pub mod syntax;
pub mod pure;
pub mod lx;
pub mod lu;

pub use kernel::{
    apply_rule_at, is_sn, normalize, reachable, redexes, replay, validate_trace, KernelError,
    Normalized, Path, ReductionStep, RewriteSystem, RuleLabel, SnVerdict, StepInstr, TermLike,
    Trace,
};
pub use types::{env_split_db, types_equal, DbEnv, NamedEnv, SimpleType, TwoSidedEnv, TypeError};
