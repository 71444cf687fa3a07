use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::sig::Signature;
use crate::syntax::{parse_theory, ParseError};
use crate::term::{check_term, CompContext, Term, TermViolation};

/// `ctx | depth ⊢ lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    /// Short name used in traces; may be empty.
    pub label: String,
    pub ctx: CompContext,
    pub depth: usize,
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(
        label: impl Into<String>,
        ctx: CompContext,
        depth: usize,
        lhs: Term,
        rhs: Term,
    ) -> Self {
        Equation {
            label: label.into(),
            ctx,
            depth,
            lhs,
            rhs,
        }
    }

    pub fn validate(&self, sig: &Signature) -> Vec<TermViolation> {
        let mut v = crate::term::violations(sig, &self.ctx, self.depth, &self.lhs);
        v.extend(crate::term::violations(
            sig, &self.ctx, self.depth, &self.rhs,
        ));
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("equation {index} ({label}) is ill-formed: {violations:?}")]
    BadEquation {
        index: usize,
        label: String,
        violations: Vec<TermViolation>,
    },
    #[error("unknown builtin theory `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A signature with a list of equations, each validated against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub sig: Signature,
    pub eqns: Vec<Equation>,
}

impl Theory {
    pub fn new(sig: Signature, eqns: Vec<Equation>) -> Result<Self, TheoryError> {
        for (index, e) in eqns.iter().enumerate() {
            let violations = e.validate(&sig);
            if !violations.is_empty() {
                return Err(TheoryError::BadEquation {
                    index,
                    label: e.label.clone(),
                    violations,
                });
            }
        }
        Ok(Theory { sig, eqns })
    }

    /// The same theory with every equation labelled `label` dropped.
    pub fn without(&self, label: &str) -> Theory {
        Theory {
            sig: self.sig.clone(),
            eqns: self
                .eqns
                .iter()
                .filter(|e| e.label != label)
                .cloned()
                .collect(),
        }
    }

    pub fn equation(&self, label: &str) -> Option<&Equation> {
        self.eqns.iter().find(|e| e.label == label)
    }

    pub fn check(
        &self,
        ctx: &CompContext,
        depth: usize,
        t: &Term,
    ) -> Result<(), Vec<TermViolation>> {
        check_term(&self.sig, ctx, depth, t)
    }
}

/// The example theories shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinTheory {
    NondetOnce,
    Exceptions,
    StateLocal,
    StateLocalNoClose,
    NondetCut,
    ExplicitNondet,
    GlobalState,
}

impl BuiltinTheory {
    pub const ALL: [BuiltinTheory; 7] = [
        BuiltinTheory::NondetOnce,
        BuiltinTheory::Exceptions,
        BuiltinTheory::StateLocal,
        BuiltinTheory::StateLocalNoClose,
        BuiltinTheory::NondetCut,
        BuiltinTheory::ExplicitNondet,
        BuiltinTheory::GlobalState,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinTheory::NondetOnce => "nondet_once",
            BuiltinTheory::Exceptions => "exceptions",
            BuiltinTheory::StateLocal => "state_local",
            BuiltinTheory::StateLocalNoClose => "state_local_noclose",
            BuiltinTheory::NondetCut => "nondet_cut",
            BuiltinTheory::ExplicitNondet => "explicit_nondet",
            BuiltinTheory::GlobalState => "global_state",
        }
    }

    /// Source text in the theory-file format.
    pub fn source(self) -> &'static str {
        match self {
            BuiltinTheory::NondetOnce => include_str!("../../theories/nondet_once.thy"),
            BuiltinTheory::Exceptions => include_str!("../../theories/exceptions.thy"),
            BuiltinTheory::StateLocal => include_str!("../../theories/state_local.thy"),
            BuiltinTheory::StateLocalNoClose => {
                include_str!("../../theories/state_local_noclose.thy")
            }
            BuiltinTheory::NondetCut => include_str!("../../theories/nondet_cut.thy"),
            BuiltinTheory::ExplicitNondet => include_str!("../../theories/explicit_nondet.thy"),
            BuiltinTheory::GlobalState => include_str!("../../theories/global_state.thy"),
        }
    }

    pub fn theory(self) -> Theory {
        parse_theory(self.source()).expect("builtin theory sources parse")
    }
}

impl fmt::Display for BuiltinTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinTheory {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinTheory::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| TheoryError::UnknownBuiltin(s.to_owned()))
    }
}

/// Looks up a builtin theory by name.
pub fn builtin_theory(name: &str) -> Result<Theory, TheoryError> {
    Ok(name.parse::<BuiltinTheory>()?.theory())
}
