//! Nameless terms over a parameterized signature.
//!
//! The parameter context is a stack and every parameter is consumed exactly
//! once, innermost first, so a term only needs to know how deep the stack is.
//! Computation variables are positions into a [`CompContext`].

use std::fmt;

use thiserror::Error;

use crate::sig::{OpName, Signature};

/// A path from the root: the i-th entry selects a continuation.
pub type Position = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// `x_i(a_1 … a_m)`: consumes the whole stack, which must have exactly the
    /// variable's arity.
    Var(usize),
    App(OpName, Vec<Term>),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "#{i}"),
            Term::App(op, conts) if conts.is_empty() => write!(f, "{op}"),
            Term::App(op, conts) => {
                write!(f, "{op}(")?;
                for (i, c) in conts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c:?}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Term {
    pub fn app(op: &str, conts: Vec<Term>) -> Term {
        Term::App(op.into(), conts)
    }

    pub fn constant(op: &str) -> Term {
        Term::App(op.into(), Vec::new())
    }

    /// Number of `App` nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, conts) => 1 + conts.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Length of the longest root-to-leaf chain of `App` nodes.
    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, conts) => 1 + conts.iter().map(Term::height).max().unwrap_or(0),
        }
    }

    pub fn subterm(&self, pos: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in pos {
            match t {
                Term::App(_, conts) => t = conts.get(i)?,
                Term::Var(_) => return None,
            }
        }
        Some(t)
    }

    /// Returns a copy with the subterm at `pos` replaced.
    pub fn replace_at(&self, pos: &[usize], new: Term) -> Option<Term> {
        match pos.split_first() {
            None => Some(new),
            Some((&i, rest)) => match self {
                Term::App(op, conts) if i < conts.len() => {
                    let mut conts = conts.clone();
                    conts[i] = conts[i].replace_at(rest, new)?;
                    Some(Term::App(op.clone(), conts))
                }
                _ => None,
            },
        }
    }

    /// Replaces every `Var(i)` leaf by `f(i)`.
    pub fn graft(&self, f: &mut impl FnMut(usize) -> Term) -> Term {
        match self {
            Term::Var(i) => f(*i),
            Term::App(op, conts) => {
                Term::App(op.clone(), conts.iter().map(|c| c.graft(f)).collect())
            }
        }
    }

    /// Renames variables.
    pub fn map_vars(&self, f: &mut impl FnMut(usize) -> usize) -> Term {
        self.graft(&mut |i| Term::Var(f(i)))
    }

    /// Visits every variable occurrence.
    pub fn for_each_var(&self, f: &mut impl FnMut(usize)) {
        match self {
            Term::Var(i) => f(*i),
            Term::App(_, conts) => conts.iter().for_each(|c| c.for_each_var(f)),
        }
    }

    /// Visits every subterm in pre-order (left to right), with its position
    /// and local stack depth. Needs the signature to track depths.
    pub fn walk<'a>(
        &'a self,
        sig: &Signature,
        depth: usize,
        f: &mut impl FnMut(&[usize], usize, &'a Term),
    ) {
        let mut pos = Vec::new();
        walk_inner(self, sig, depth, &mut pos, f);
    }
}

fn walk_inner<'a>(
    t: &'a Term,
    sig: &Signature,
    depth: usize,
    pos: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize], usize, &'a Term),
) {
    f(pos, depth, t);
    if let Term::App(op, conts) = t {
        let Some(ar) = sig.arity(op) else { return };
        if depth < ar.params {
            return;
        }
        for (i, c) in conts.iter().enumerate() {
            let Some(&m) = ar.binders.get(i) else { return };
            pos.push(i);
            walk_inner(c, sig, depth - ar.params + m, pos, f);
            pos.pop();
        }
    }
}

/// Arities of the computation variables, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompContext(pub Vec<usize>);

impl CompContext {
    pub fn new(arities: impl Into<Vec<usize>>) -> Self {
        CompContext(arities.into())
    }

    /// `n` variables of arity 0.
    pub fn truncated(n: usize) -> Self {
        CompContext(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn arity(&self, i: usize) -> Option<usize> {
        self.0.get(i).copied()
    }

    pub fn is_truncated(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }
}

/// One reason a term fails to check, with where it happened.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TermViolation {
    #[error("at {pos:?}: unknown operation `{op}`")]
    UnknownOp { pos: Position, op: String },
    #[error("at {pos:?}: `{op}` expects {expected} continuations, got {found}")]
    ContCount {
        pos: Position,
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("at {pos:?}: `{op}` consumes {needed} parameters but only {depth} are open")]
    StackUnderflow {
        pos: Position,
        op: String,
        needed: usize,
        depth: usize,
    },
    #[error("at {pos:?}: variable #{var} has arity {arity} but {depth} parameters are open")]
    VarDepth {
        pos: Position,
        var: usize,
        arity: usize,
        depth: usize,
    },
    #[error("at {pos:?}: variable #{var} is not in the context")]
    UnboundVar { pos: Position, var: usize },
}

/// All violations of the formation rules for `t` at `(ctx, depth)`.
pub fn violations(
    sig: &Signature,
    ctx: &CompContext,
    depth: usize,
    t: &Term,
) -> Vec<TermViolation> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    check_inner(sig, ctx, depth, t, &mut pos, &mut out);
    out
}

fn check_inner(
    sig: &Signature,
    ctx: &CompContext,
    depth: usize,
    t: &Term,
    pos: &mut Vec<usize>,
    out: &mut Vec<TermViolation>,
) {
    match t {
        Term::Var(i) => match ctx.arity(*i) {
            None => out.push(TermViolation::UnboundVar {
                pos: pos.clone(),
                var: *i,
            }),
            Some(m) if m != depth => out.push(TermViolation::VarDepth {
                pos: pos.clone(),
                var: *i,
                arity: m,
                depth,
            }),
            Some(_) => {}
        },
        Term::App(op, conts) => {
            let Some(ar) = sig.arity(op) else {
                out.push(TermViolation::UnknownOp {
                    pos: pos.clone(),
                    op: op.to_string(),
                });
                return;
            };
            if ar.conts() != conts.len() {
                out.push(TermViolation::ContCount {
                    pos: pos.clone(),
                    op: op.to_string(),
                    expected: ar.conts(),
                    found: conts.len(),
                });
                return;
            }
            if depth < ar.params {
                out.push(TermViolation::StackUnderflow {
                    pos: pos.clone(),
                    op: op.to_string(),
                    needed: ar.params,
                    depth,
                });
                return;
            }
            for (i, (c, &m)) in conts.iter().zip(&ar.binders).enumerate() {
                pos.push(i);
                check_inner(sig, ctx, depth - ar.params + m, c, pos, out);
                pos.pop();
            }
        }
    }
}

/// Succeeds iff `t` is derivable at `ctx | depth`.
pub fn check_term(
    sig: &Signature,
    ctx: &CompContext,
    depth: usize,
    t: &Term,
) -> Result<(), Vec<TermViolation>> {
    let v = violations(sig, ctx, depth, t);
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("expected {expected} substitution arguments, got {found}")]
    ArgCount { expected: usize, found: usize },
    #[error("argument {index} is ill-formed at depth {depth}: {violations:?}")]
    IllFormedArg {
        index: usize,
        depth: usize,
        violations: Vec<TermViolation>,
    },
    #[error("term is ill-formed: {0:?}")]
    IllFormed(Vec<TermViolation>),
}

/// A term together with the context it checks in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Judgement {
    pub ctx: CompContext,
    pub depth: usize,
    pub body: Term,
}

impl Judgement {
    /// Checks `body` before building the judgement.
    pub fn new(
        sig: &Signature,
        ctx: CompContext,
        depth: usize,
        body: Term,
    ) -> Result<Self, SubstError> {
        check_term(sig, &ctx, depth, &body).map_err(SubstError::IllFormed)?;
        Ok(Judgement { ctx, depth, body })
    }

    /// Skips the check; for terms known to be well-formed by construction.
    pub fn new_unchecked(ctx: CompContext, depth: usize, body: Term) -> Self {
        Judgement { ctx, depth, body }
    }
}

/// Simultaneous substitution: grafts `args[i]` at every `Var(i)` of `target`.
///
/// `args[i]` must check at `(outer_ctx, outer_depth + m_i)`; the result checks
/// at `(outer_ctx, outer_depth + target.depth)`. Parameters of the grafted
/// argument are re-pointed to the ones the variable consumed, which in
/// nameless form is the identity.
pub fn substitute(
    sig: &Signature,
    target: &Judgement,
    outer_ctx: &CompContext,
    outer_depth: usize,
    args: &[Term],
) -> Result<Judgement, SubstError> {
    if args.len() != target.ctx.len() {
        return Err(SubstError::ArgCount {
            expected: target.ctx.len(),
            found: args.len(),
        });
    }
    for (index, (arg, &m)) in args.iter().zip(&target.ctx.0).enumerate() {
        let depth = outer_depth + m;
        check_term(sig, outer_ctx, depth, arg).map_err(|violations| SubstError::IllFormedArg {
            index,
            depth,
            violations,
        })?;
    }
    let body = target.body.graft(&mut |i| args[i].clone());
    Ok(Judgement {
        ctx: outer_ctx.clone(),
        depth: outer_depth + target.depth,
        body,
    })
}

/// Adds `extra` parameters at the bottom of the stack: every variable arity
/// and the depth grow by `extra`, the body is unchanged.
pub fn weaken(sig: &Signature, j: &Judgement, extra: usize) -> Result<Judgement, SubstError> {
    let outer_ctx = CompContext(j.ctx.0.iter().map(|m| m + extra).collect());
    let args: Vec<Term> = (0..j.ctx.len()).map(Term::Var).collect();
    substitute(sig, j, &outer_ctx, extra, &args)
}
