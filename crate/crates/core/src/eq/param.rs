use std::collections::BTreeMap;

use thiserror::Error;

use super::{BuiltinTheory, Equation, Theory, TheoryError};
use crate::builtin::{default_gens, eval_rho, ListTree, SemValue};
use crate::sig::{encode_scoped_signature, ScopedSignature, SigError, CLOSE};
use crate::term::{CompContext, Judgement, Term};

/// A list of generator indices: the normal form of an explicit-nondeterminism
/// term over `x_0 … x_{n-1}`.
pub type Choices = Vec<usize>;

/// The semantics of a scoped operation on the base monad, one argument per
/// continuation. `None` signals that the oracle is undefined on the input.
pub type ParamOracle<'a> = &'a dyn Fn(&[Choices]) -> Option<Choices>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("base theory `{0}` has no list normal forms")]
    UnsupportedBase(BuiltinTheory),
    #[error("oracle failed on {0:?}")]
    Oracle(Vec<Choices>),
    #[error(transparent)]
    Signature(#[from] SigError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Which term stands for each class of base terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Representatives {
    /// `fail`, `x`, `or(x, or(y, …))` without a trailing `fail`.
    #[default]
    Minimal,
    /// The reified form: `or(x, or(y, … fail))`.
    Reified,
}

/// `once`: the first result, if any.
pub fn once_oracle(args: &[Choices]) -> Option<Choices> {
    Some(args.first()?.iter().take(1).copied().collect())
}

/// `scope` over a base without `cut`: the choices unchanged.
pub fn scope_oracle(args: &[Choices]) -> Option<Choices> {
    args.first().cloned()
}

fn minimal(choices: &[usize]) -> Term {
    match choices {
        [] => Term::constant("fail"),
        [x] => Term::Var(*x),
        [x, rest @ ..] => Term::app("or", vec![Term::Var(*x), minimal(rest)]),
    }
}

fn reified(choices: &[usize]) -> Term {
    choices
        .iter()
        .rev()
        .fold(Term::constant("fail"), |acc, &x| {
            Term::app("or", vec![Term::Var(x), acc])
        })
}

fn representatives(n: usize, size_bound: usize, reps: Representatives) -> Vec<Term> {
    let mut out = Vec::new();
    let mut layer: Vec<Choices> = vec![Vec::new()];
    for len in 0.. {
        let size = match (reps, len) {
            (Representatives::Minimal, 0) => 1,
            (Representatives::Minimal, l) => l - 1,
            (Representatives::Reified, l) => l + 1,
        };
        if size > size_bound && len > 0 {
            break;
        }
        if size <= size_bound {
            out.extend(layer.iter().map(|c| match reps {
                Representatives::Minimal => minimal(c),
                Representatives::Reified => reified(c),
            }));
        }
        if n == 0 {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|c| {
                (0..n).map(move |x| {
                    let mut d = c.clone();
                    d.push(x);
                    d
                })
            })
            .collect();
    }
    out
}

// all k-tuples over 0..m, last position fastest
fn index_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn choices(base: BuiltinTheory, n: usize, t: &Term) -> Choices {
    let gens = default_gens(n);
    let j = Judgement::new_unchecked(CompContext::truncated(n), 0, t.clone());
    let Ok(SemValue::Once(ListTree::List(items))) = eval_rho(base, &gens, &j) else {
        unreachable!("base terms evaluate to lists")
    };
    items
        .iter()
        .map(|leaf| match leaf {
            ListTree::Leaf(g) => gens.iter().position(|h| h == g).expect("generator"),
            ListTree::List(_) => unreachable!("level 0"),
        })
        .collect()
}

/// The theory of `base` extended with a scoped operation `sc` with `k`
/// continuations, whose meaning on the base monad is `oracle`. For each
/// `n ≤ var_bound` and each `k`-tuple of representatives of size at most
/// `size_bound` over `x_0:0 … x_{n-1}:0`, it adds the equation
/// `sc(a. t_1[close(a; x)/x], …) = t′` with `t′` the minimal term for the
/// oracle's answer.
pub fn generate_param_theory(
    base: BuiltinTheory,
    sc: &str,
    k: usize,
    oracle: ParamOracle<'_>,
    var_bound: usize,
    size_bound: usize,
    reps: Representatives,
) -> Result<Theory, ParamError> {
    if base != BuiltinTheory::ExplicitNondet {
        return Err(ParamError::UnsupportedBase(base));
    }
    let base_thy = base.theory();
    let algebraic: BTreeMap<String, usize> = base_thy
        .sig
        .ops()
        .map(|(name, ar)| (name.to_string(), ar.conts()))
        .collect();
    let scoped = BTreeMap::from([(sc.to_owned(), k)]);
    let sig = encode_scoped_signature(&ScopedSignature { algebraic, scoped })?;
    let mut eqns = base_thy.eqns.clone();
    for n in 0..=var_bound {
        let reps = representatives(n, size_bound, reps);
        for (index, tuple) in index_tuples(reps.len(), k).into_iter().enumerate() {
            let ts: Vec<&Term> = tuple.iter().map(|&i| &reps[i]).collect();
            let args: Vec<Choices> = ts.iter().map(|t| choices(base, n, t)).collect();
            let out = oracle(&args).ok_or_else(|| ParamError::Oracle(args.clone()))?;
            if out.iter().any(|&x| x >= n) {
                return Err(ParamError::Oracle(args));
            }
            let conts = ts
                .iter()
                .map(|t| t.graft(&mut |x| Term::app(CLOSE, vec![Term::Var(x)])))
                .collect();
            eqns.push(Equation::new(
                format!("{sc}-n{n}-{index}"),
                CompContext::truncated(n),
                0,
                Term::app(sc, conts),
                minimal(&out),
            ));
        }
    }
    Ok(Theory::new(sig, eqns)?)
}
