//! Theories, derivable equality, and generated scoped theories.

mod param;
mod search;
mod theory;

pub use param::{
    generate_param_theory, once_oracle, scope_oracle, Choices, ParamError, ParamOracle,
    Representatives,
};
pub use search::{
    apply_rewrite, depth_at, derivably_equal, derivably_equal_with, explore, match_instance,
    replay, rewrites, Captures, DerivationTrace, Direction, ReplayError, Rewrite, SearchError,
    SearchLimits, SearchOutcome,
};
pub use theory::{builtin_theory, BuiltinTheory, Equation, Theory, TheoryError};
