//! Surface syntax: the theory-file format, terms with named parameters, and a
//! printer that emits the same grammar.
//!
//! ```text
//! op or : (0 | 0, 0)
//! op once : (0 | 1)
//! op close : (1 | 0)
//! eq [once-close] x:0 | - |- once(a. close(a; x)) = x
//! ```
//!
//! Parameter names are resolved against the stack of open parameters while
//! parsing and then erased; the printer invents fresh ones (`a`, `b`, … by
//! stack position).

mod lex;
mod parse;
mod print;

use std::fmt;

use thiserror::Error;

pub use parse::{parse_ctx, parse_judgement, parse_scoped_signature, parse_term, parse_theory};
pub use print::{
    param_name, print_equation, print_judgement, print_signature, print_term, print_theory,
};

use crate::sig::Signature;
use crate::term::CompContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownName,
    /// A parameter used out of stack order, twice, or never bound.
    ParamDiscipline,
    Declaration,
    IllFormed,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(
        kind: ParseErrorKind,
        line: usize,
        col: usize,
        message: impl Into<String>,
    ) -> Self {
        ParseError {
            kind,
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

/// A context with surface names: computation variables with arities, then
/// the open parameters bottom to top.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurfaceContext {
    pub vars: Vec<(String, usize)>,
    pub params: Vec<String>,
}

impl SurfaceContext {
    pub fn comp_context(&self) -> CompContext {
        CompContext(self.vars.iter().map(|(_, m)| *m).collect())
    }

    pub fn depth(&self) -> usize {
        self.params.len()
    }

    /// Default names for a nameless context: `x, y, z, u, v, w`, then `x6`,
    /// `x7`, … (skipping anything that is an operation of `sig`), and
    /// parameters named by stack position.
    pub fn fresh(sig: &Signature, ctx: &CompContext, depth: usize) -> Self {
        const BASE: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
        let mut names = Vec::with_capacity(ctx.len());
        let mut k = 0usize;
        while names.len() < ctx.len() {
            let cand = match BASE.get(k) {
                Some(b) => (*b).to_owned(),
                None => format!("x{k}"),
            };
            k += 1;
            if !sig.contains(&cand) {
                names.push(cand);
            }
        }
        SurfaceContext {
            vars: names.into_iter().zip(ctx.0.iter().copied()).collect(),
            params: (0..depth).map(param_name).collect(),
        }
    }

    pub fn var_name(&self, i: usize) -> Option<&str> {
        self.vars.get(i).map(|(n, _)| n.as_str())
    }
}

impl fmt::Display for SurfaceContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            f.write_str("-")?;
        } else {
            for (i, (n, m)) in self.vars.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{n}:{m}")?;
            }
        }
        f.write_str(" | ")?;
        if self.params.is_empty() {
            f.write_str("-")
        } else {
            f.write_str(&self.params.join(", "))
        }
    }
}
