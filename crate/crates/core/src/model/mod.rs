//! Graded Σ-structures: interpretation of terms, model checking, free
//! models over generators, and the counting comparison between terms and the
//! fixed point of the scoped-syntax functor.

mod count;
mod free;
mod graded;

use std::fmt::Debug;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use count::{count_fixedpoint, count_free_terms};
pub use free::{free_bind, free_strength, free_unit, lift_scoped_op, FreeElem, FreeError};
pub use graded::{DayPair, GradedCarrier};

use crate::eq::Theory;
use crate::sig::Signature;
use crate::term::{Judgement, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("operation `{0}` is not interpreted")]
    UnknownOp(String),
    #[error("`{op}` at level {level} got an argument of the wrong shape")]
    BadArgument { op: String, level: usize },
    #[error("environment has {found} values for {expected} variables")]
    EnvLength { expected: usize, found: usize },
    #[error("value for variable {var} is not at level {level}")]
    EnvLevel { var: usize, level: usize },
    #[error("term is ill-formed at its context")]
    IllFormed,
}

/// A graded carrier with an interpretation of each operation: for
/// `O : (p | m_1 … m_k)` and a level `n`, a function from the product of the
/// carriers at `n + m_i` to the carrier at `n + p`.
pub trait Structure {
    type Value: Clone + Eq + Hash + Debug;

    fn signature(&self) -> &Signature;

    /// `O_n(args)`; `level` is `n`.
    fn apply(
        &self,
        op: &str,
        level: usize,
        args: &[Self::Value],
    ) -> Result<Self::Value, ModelError>;

    /// Whether `v` is an element of the carrier at `level`.
    fn at_level(&self, v: &Self::Value, level: usize) -> bool;

    /// The elements at `level`, lists capped at `list_cap` entries per
    /// layer, or `None` if there are more than `limit`. Deterministic order.
    fn elements(&self, level: usize, list_cap: usize, limit: usize) -> Option<Vec<Self::Value>>;

    /// Whether [`Structure::elements`] with an unbounded cap would be finite,
    /// i.e. whether a capped enumeration is the whole carrier.
    fn finite_levels(&self) -> bool;

    /// A pseudo-random element at `level` with lists of at most `max_len`.
    fn sample(&self, level: usize, max_len: usize, rng: &mut ChaCha8Rng) -> Self::Value;
}

/// The denotation of `j` at offset `n`: variables are looked up in `env`
/// (the i-th value at level `n + ctx[i]`) and the result is at level
/// `n + j.depth`.
pub fn interpret<S: Structure>(
    m: &S,
    j: &Judgement,
    offset: usize,
    env: &[S::Value],
) -> Result<S::Value, ModelError> {
    if env.len() != j.ctx.len() {
        return Err(ModelError::EnvLength {
            expected: j.ctx.len(),
            found: env.len(),
        });
    }
    for (i, (v, &a)) in env.iter().zip(&j.ctx.0).enumerate() {
        if !m.at_level(v, offset + a) {
            return Err(ModelError::EnvLevel {
                var: i,
                level: offset + a,
            });
        }
    }
    eval(m, &j.body, &j.ctx.0, offset, j.depth, env)
}

fn eval<S: Structure>(
    m: &S,
    t: &Term,
    ctx: &[usize],
    offset: usize,
    depth: usize,
    env: &[S::Value],
) -> Result<S::Value, ModelError> {
    match t {
        Term::Var(i) => {
            if ctx.get(*i) != Some(&depth) {
                return Err(ModelError::IllFormed);
            }
            Ok(env[*i].clone())
        }
        Term::App(op, conts) => {
            let ar = m
                .signature()
                .arity(op)
                .ok_or_else(|| ModelError::UnknownOp(op.to_string()))?;
            if depth < ar.params || conts.len() != ar.conts() {
                return Err(ModelError::IllFormed);
            }
            let base = depth - ar.params;
            let args = conts
                .iter()
                .zip(&ar.binders)
                .map(|(c, &mi)| eval(m, c, ctx, offset, base + mi, env))
                .collect::<Result<Vec<_>, _>>()?;
            m.apply(op, offset + base, &args)
        }
    }
}

/// How hard [`check_model`] looks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckBudget {
    /// Lists in enumerated carriers have at most this many entries per layer.
    pub list_cap: usize,
    /// Enumerate every environment when there are at most this many.
    pub max_envs: usize,
    /// Otherwise draw this many random environments.
    pub samples: usize,
    /// Extra random environments with lists up to `list_cap + 2`, for
    /// carriers that capping truncates.
    pub long_samples: usize,
    pub seed: u64,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            list_cap: 3,
            max_envs: 70_000,
            samples: 2_000,
            long_samples: 200,
            seed: 0x5eed,
        }
    }
}

/// An equation whose two sides denote different values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation<V> {
    pub equation: usize,
    pub label: String,
    pub offset: usize,
    pub env: Vec<V>,
    pub lhs: V,
    pub rhs: V,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelReport<V> {
    pub violations: Vec<Violation<V>>,
    /// Number of (equation, offset, environment) comparisons made.
    pub checked: usize,
    /// True when every comparison came from a full enumeration of a finite
    /// carrier.
    pub exhaustive: bool,
}

impl<V> ModelReport<V> {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Environments for `arities` at `offset`: every combination when that is
/// small enough, otherwise a seeded sample. Returns whether the set is the
/// full product of complete carriers.
pub fn environments<S: Structure>(
    m: &S,
    arities: &[usize],
    offset: usize,
    budget: &CheckBudget,
    rng: &mut ChaCha8Rng,
) -> (Vec<Vec<S::Value>>, bool) {
    let mut pools = Vec::with_capacity(arities.len());
    let mut total: usize = 1;
    for &a in arities {
        match m.elements(offset + a, budget.list_cap, budget.max_envs) {
            Some(p) if !p.is_empty() => {
                total = total.saturating_mul(p.len());
                pools.push(Some(p));
            }
            Some(_) => return (Vec::new(), m.finite_levels()),
            None => {
                total = usize::MAX;
                pools.push(None);
            }
        }
    }
    let mut envs = Vec::new();
    let exhaustive = if total <= budget.max_envs {
        let pools: Vec<Vec<S::Value>> = pools.into_iter().map(|p| p.expect("enumerated")).collect();
        cartesian(&pools, &mut Vec::new(), &mut envs);
        m.finite_levels()
    } else {
        for _ in 0..budget.samples {
            let env = arities
                .iter()
                .zip(&pools)
                .map(|(&a, pool)| match pool {
                    Some(p) => p[rng.gen_range(0..p.len())].clone(),
                    None => m.sample(offset + a, budget.list_cap, rng),
                })
                .collect();
            envs.push(env);
        }
        false
    };
    if !m.finite_levels() {
        for _ in 0..budget.long_samples {
            envs.push(
                arities
                    .iter()
                    .map(|&a| m.sample(offset + a, budget.list_cap + 2, rng))
                    .collect(),
            );
        }
    }
    (envs, exhaustive)
}

fn cartesian<V: Clone>(pools: &[Vec<V>], acc: &mut Vec<V>, out: &mut Vec<Vec<V>>) {
    match pools.split_first() {
        None => out.push(acc.clone()),
        Some((first, rest)) => {
            for v in first {
                acc.push(v.clone());
                cartesian(rest, acc, out);
                acc.pop();
            }
        }
    }
}

/// Compares both sides of every equation of `thy` at offsets
/// `0..=max_offset` over the environments chosen by [`environments`].
pub fn check_model<S: Structure>(
    m: &S,
    thy: &Theory,
    max_offset: usize,
    budget: &CheckBudget,
) -> Result<ModelReport<S::Value>, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut report = ModelReport {
        violations: Vec::new(),
        checked: 0,
        exhaustive: true,
    };
    for (ei, e) in thy.eqns.iter().enumerate() {
        let lhs = Judgement::new_unchecked(e.ctx.clone(), e.depth, e.lhs.clone());
        let rhs = Judgement::new_unchecked(e.ctx.clone(), e.depth, e.rhs.clone());
        for offset in 0..=max_offset {
            let (envs, exhaustive) = environments(m, &e.ctx.0, offset, budget, &mut rng);
            report.exhaustive &= exhaustive;
            for env in envs {
                let l = interpret(m, &lhs, offset, &env)?;
                let r = interpret(m, &rhs, offset, &env)?;
                report.checked += 1;
                if l != r {
                    report.violations.push(Violation {
                        equation: ei,
                        label: e.label.clone(),
                        offset,
                        env,
                        lhs: l,
                        rhs: r,
                    });
                }
            }
        }
    }
    Ok(report)
}
