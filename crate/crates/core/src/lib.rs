//! Parameterized algebraic theories for scoped effects: signatures, nameless
//! terms under a stack discipline for parameters, equational reasoning, and
//! graded free models.

pub mod builtin;
pub mod enumerate;
pub mod eq;
pub mod model;
pub mod sig;
pub mod syntax;
pub mod term;

pub use builtin::{
    decide_equal_via_model, eval_rho, normalize, reify, roundtrip_check, state_models_agree,
    AnyModel, BuiltinError, Gen, SemValue,
};
pub use enumerate::{enumerate_terms, TermEnumerator};
pub use eq::{builtin_theory, BuiltinTheory, Equation, Theory, TheoryError};
pub use model::{
    check_model, count_fixedpoint, count_free_terms, free_bind, free_strength, free_unit,
    interpret, lift_scoped_op, CheckBudget, DayPair, FreeElem, FreeError, GradedCarrier,
    ModelError, ModelReport, Structure, Violation,
};
pub use sig::{encode_scoped_signature, OpName, ParamArity, ScopedSignature, Signature, CLOSE};
pub use syntax::{
    parse_ctx, parse_judgement, parse_term, parse_theory, ParseError, SurfaceContext,
};
pub use term::{
    check_term, substitute, weaken, CompContext, Judgement, SubstError, Term, TermViolation,
};
