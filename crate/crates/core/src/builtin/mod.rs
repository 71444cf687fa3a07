//! Concrete free models of the builtin theories over a finite set of
//! generators, with normal forms (reification), evaluation, and the
//! model-based equality test for contexts of arity-0 variables.

mod exc;
mod lists;
mod state;

use std::fmt;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use exc::{CatchModel, ExcVal};
pub use lists::{CutModel, CutTree, ListTree, OnceModel};
pub use state::{StateModel, StateVal};

use crate::enumerate::enumerate_terms;
use crate::eq::BuiltinTheory;
use crate::model::{interpret, ModelError, Structure};
use crate::sig::{Signature, CLOSE};
use crate::term::{check_term, CompContext, Judgement, Term};

/// A generator token: an element of the level-0 set the free model is
/// built on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(Arc<str>);

impl Gen {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Gen {
    fn from(s: &str) -> Self {
        Gen(Arc::from(s))
    }
}

impl From<String> for Gen {
    fn from(s: String) -> Self {
        Gen(Arc::from(s))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `x0, x1, …`: one generator per context variable.
pub fn default_gens(n: usize) -> Vec<Gen> {
    (0..n).map(|i| Gen::from(format!("x{i}"))).collect()
}

/// All lists over `items` of length at most `cap`, shortest first, or `None`
/// if there are more than `limit`.
pub(crate) fn lists_up_to<T: Clone>(items: &[T], cap: usize, limit: usize) -> Option<Vec<Vec<T>>> {
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..=cap {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(items.len());
    }
    if total > limit {
        return None;
    }
    let mut out = vec![Vec::new()];
    let mut prev = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for xs in &prev {
            for x in items {
                let mut ys: Vec<T> = xs.clone();
                ys.push(x.clone());
                next.push(ys);
            }
        }
        out.extend(next.iter().cloned());
        prev = next;
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemValue {
    Once(ListTree),
    Exc(ExcVal),
    State(StateVal),
    Cut(CutTree),
}

impl fmt::Display for SemValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemValue::Once(v) => v.fmt(f),
            SemValue::Exc(v) => v.fmt(f),
            SemValue::State(v) => v.fmt(f),
            SemValue::Cut(v) => v.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("context must only contain variables of arity 0")]
    NotTruncated,
    #[error("the two judgements have different contexts or depths")]
    ContextMismatch,
    #[error("{found} generators given for a context of {expected} variables")]
    GenCount { expected: usize, found: usize },
    #[error("`{0}` is not a generator")]
    UnknownGen(String),
    #[error("{value} is not an element at level {level}")]
    Malformed { level: usize, value: String },
    #[error("normal form is ill-formed: {0}")]
    IllFormed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The free model of a builtin theory on a finite set of generators.
#[derive(Clone, Debug)]
pub enum AnyModel {
    Once(OnceModel),
    Catch(CatchModel),
    State(StateModel),
    Cut(CutModel),
}

impl AnyModel {
    pub fn new(theory: BuiltinTheory, gens: Vec<Gen>) -> Self {
        let sig = theory.theory().sig;
        match theory {
            BuiltinTheory::NondetOnce | BuiltinTheory::ExplicitNondet => {
                AnyModel::Once(OnceModel::new(sig, gens))
            }
            BuiltinTheory::Exceptions => AnyModel::Catch(CatchModel::new(sig, gens)),
            BuiltinTheory::StateLocal | BuiltinTheory::GlobalState => {
                AnyModel::State(StateModel::new(sig, gens))
            }
            BuiltinTheory::StateLocalNoClose => {
                AnyModel::State(StateModel::keeping_state(sig, gens))
            }
            BuiltinTheory::NondetCut => AnyModel::Cut(CutModel::new(sig, gens)),
        }
    }

    pub fn gens(&self) -> &[Gen] {
        match self {
            AnyModel::Once(m) => m.gens(),
            AnyModel::Catch(m) => m.gens(),
            AnyModel::State(m) => m.gens(),
            AnyModel::Cut(m) => m.gens(),
        }
    }

    /// The image of a generator at level 0.
    pub fn unit(&self, g: Gen) -> SemValue {
        match self {
            AnyModel::Once(_) => SemValue::Once(OnceModel::unit(g)),
            AnyModel::Catch(_) => SemValue::Exc(CatchModel::unit(g)),
            AnyModel::State(_) => SemValue::State(StateModel::unit(g)),
            AnyModel::Cut(_) => SemValue::Cut(CutModel::unit(g)),
        }
    }
}

fn unwrap_all<T: Clone>(args: &[SemValue], f: impl Fn(&SemValue) -> Option<&T>) -> Option<Vec<T>> {
    args.iter().map(|a| f(a).cloned()).collect()
}

impl Structure for AnyModel {
    type Value = SemValue;

    fn signature(&self) -> &Signature {
        match self {
            AnyModel::Once(m) => m.signature(),
            AnyModel::Catch(m) => m.signature(),
            AnyModel::State(m) => m.signature(),
            AnyModel::Cut(m) => m.signature(),
        }
    }

    fn apply(&self, op: &str, level: usize, args: &[SemValue]) -> Result<SemValue, ModelError> {
        let bad = || ModelError::BadArgument {
            op: op.to_owned(),
            level,
        };
        match self {
            AnyModel::Once(m) => {
                let args = unwrap_all(args, |v| {
                    if let SemValue::Once(x) = v {
                        Some(x)
                    } else {
                        None
                    }
                })
                .ok_or_else(bad)?;
                m.apply(op, level, &args).map(SemValue::Once)
            }
            AnyModel::Catch(m) => {
                let args = unwrap_all(args, |v| {
                    if let SemValue::Exc(x) = v {
                        Some(x)
                    } else {
                        None
                    }
                })
                .ok_or_else(bad)?;
                m.apply(op, level, &args).map(SemValue::Exc)
            }
            AnyModel::State(m) => {
                let args = unwrap_all(args, |v| {
                    if let SemValue::State(x) = v {
                        Some(x)
                    } else {
                        None
                    }
                })
                .ok_or_else(bad)?;
                m.apply(op, level, &args).map(SemValue::State)
            }
            AnyModel::Cut(m) => {
                let args = unwrap_all(args, |v| {
                    if let SemValue::Cut(x) = v {
                        Some(x)
                    } else {
                        None
                    }
                })
                .ok_or_else(bad)?;
                m.apply(op, level, &args).map(SemValue::Cut)
            }
        }
    }

    fn at_level(&self, v: &SemValue, level: usize) -> bool {
        match (self, v) {
            (AnyModel::Once(m), SemValue::Once(x)) => m.at_level(x, level),
            (AnyModel::Catch(m), SemValue::Exc(x)) => m.at_level(x, level),
            (AnyModel::State(m), SemValue::State(x)) => m.at_level(x, level),
            (AnyModel::Cut(m), SemValue::Cut(x)) => m.at_level(x, level),
            _ => false,
        }
    }

    fn elements(&self, level: usize, list_cap: usize, limit: usize) -> Option<Vec<SemValue>> {
        Some(match self {
            AnyModel::Once(m) => m
                .elements(level, list_cap, limit)?
                .into_iter()
                .map(SemValue::Once)
                .collect(),
            AnyModel::Catch(m) => m
                .elements(level, list_cap, limit)?
                .into_iter()
                .map(SemValue::Exc)
                .collect(),
            AnyModel::State(m) => m
                .elements(level, list_cap, limit)?
                .into_iter()
                .map(SemValue::State)
                .collect(),
            AnyModel::Cut(m) => m
                .elements(level, list_cap, limit)?
                .into_iter()
                .map(SemValue::Cut)
                .collect(),
        })
    }

    fn finite_levels(&self) -> bool {
        matches!(self, AnyModel::Catch(_) | AnyModel::State(_))
    }

    fn sample(&self, level: usize, max_len: usize, rng: &mut ChaCha8Rng) -> SemValue {
        match self {
            AnyModel::Once(m) => SemValue::Once(m.sample(level, max_len, rng)),
            AnyModel::Catch(m) => SemValue::Exc(m.sample(level, max_len, rng)),
            AnyModel::State(m) => SemValue::State(m.sample(level, max_len, rng)),
            AnyModel::Cut(m) => SemValue::Cut(m.sample(level, max_len, rng)),
        }
    }
}

/// Interprets a judgement over arity-0 variables at offset 0, sending the
/// i-th variable to the unit image of `gens[i]`.
pub fn eval_rho(
    theory: BuiltinTheory,
    gens: &[Gen],
    j: &Judgement,
) -> Result<SemValue, BuiltinError> {
    if !j.ctx.is_truncated() {
        return Err(BuiltinError::NotTruncated);
    }
    if gens.len() != j.ctx.len() {
        return Err(BuiltinError::GenCount {
            expected: j.ctx.len(),
            found: gens.len(),
        });
    }
    let m = AnyModel::new(theory, gens.to_vec());
    let env: Vec<SemValue> = gens.iter().map(|g| m.unit(g.clone())).collect();
    Ok(interpret(&m, j, 0, &env)?)
}

struct Reifier<'a> {
    gens: &'a [Gen],
}

impl Reifier<'_> {
    fn var(&self, g: &Gen) -> Result<Term, BuiltinError> {
        self.gens
            .iter()
            .position(|h| h == g)
            .map(Term::Var)
            .ok_or_else(|| BuiltinError::UnknownGen(g.to_string()))
    }

    fn malformed(level: usize, v: &dyn fmt::Display) -> BuiltinError {
        BuiltinError::Malformed {
            level,
            value: v.to_string(),
        }
    }

    // or(h_1, or(h_2, … fail)) where h_i is the leaf itself at level 0 and a
    // closed lower normal form above
    fn chain<T>(
        &self,
        items: &[T],
        mut head: impl FnMut(&T) -> Result<Term, BuiltinError>,
    ) -> Result<Term, BuiltinError> {
        let mut acc = Term::constant("fail");
        for x in items.iter().rev() {
            acc = Term::app("or", vec![head(x)?, acc]);
        }
        Ok(acc)
    }

    fn once(&self, v: &ListTree, level: usize) -> Result<Term, BuiltinError> {
        let items = v.items().ok_or_else(|| Self::malformed(level, v))?;
        self.chain(items, |x| match (x, level) {
            (ListTree::Leaf(g), 0) => self.var(g),
            (x, n) if n > 0 => Ok(Term::app(CLOSE, vec![self.once(x, n - 1)?])),
            (x, n) => Err(Self::malformed(n, x)),
        })
    }

    fn cut(&self, v: &CutTree, level: usize) -> Result<Term, BuiltinError> {
        let CutTree::List { items, star } = v else {
            return Err(Self::malformed(level, v));
        };
        let body = self.chain(items, |x| match (x, level) {
            (CutTree::Leaf(g), 0) => self.var(g),
            (x, n) if n > 0 => Ok(Term::app(CLOSE, vec![self.cut(x, n - 1)?])),
            (x, n) => Err(Self::malformed(n, x)),
        })?;
        Ok(if *star {
            Term::app("cut", vec![body])
        } else {
            body
        })
    }

    fn exc(&self, v: &ExcVal, level: usize) -> Result<Term, BuiltinError> {
        let (mut t, closes) = match v {
            ExcVal::Gen(g) => (self.var(g)?, level),
            ExcVal::Throw(j) if *j <= level => (Term::constant("throw"), level - j),
            ExcVal::Throw(_) => return Err(Self::malformed(level, v)),
        };
        for _ in 0..closes {
            t = Term::app(CLOSE, vec![t]);
        }
        Ok(t)
    }

    fn state(&self, v: &StateVal, level: usize) -> Result<Term, BuiltinError> {
        let put = |b: bool, t: Term| Term::app(if b { "put1" } else { "put0" }, vec![t]);
        let branches = match (v, level) {
            (StateVal::Ret(t), 0) => [
                put(t[0].1, self.var(&t[0].0)?),
                put(t[1].1, self.var(&t[1].0)?),
            ],
            (StateVal::Fun(t), n) if n > 0 => [
                Term::app(CLOSE, vec![self.state(&t[0], n - 1)?]),
                Term::app(CLOSE, vec![self.state(&t[1], n - 1)?]),
            ],
            (StateVal::FunS(t), n) if n > 0 => [
                put(t[0].1, Term::app(CLOSE, vec![self.state(&t[0].0, n - 1)?])),
                put(t[1].1, Term::app(CLOSE, vec![self.state(&t[1].0, n - 1)?])),
            ],
            _ => return Err(Self::malformed(level, v)),
        };
        Ok(Term::app("get", branches.to_vec()))
    }
}

/// The normal form of `v` at `level`, over one arity-0 variable per
/// generator in `gens` order.
pub fn reify(
    theory: BuiltinTheory,
    gens: &[Gen],
    level: usize,
    v: &SemValue,
) -> Result<Judgement, BuiltinError> {
    let r = Reifier { gens };
    let body = match v {
        SemValue::Once(x) => r.once(x, level)?,
        SemValue::Cut(x) => r.cut(x, level)?,
        SemValue::Exc(x) => r.exc(x, level)?,
        SemValue::State(x) => r.state(x, level)?,
    };
    let sig = theory.theory().sig;
    Judgement::new(&sig, CompContext::truncated(gens.len()), level, body)
        .map_err(|e| BuiltinError::IllFormed(e.to_string()))
}

/// `reify(eval_rho(j))`.
pub fn normalize(
    theory: BuiltinTheory,
    gens: &[Gen],
    j: &Judgement,
) -> Result<Judgement, BuiltinError> {
    let v = eval_rho(theory, gens, j)?;
    reify(theory, gens, j.depth, &v)
}

/// Whether two judgements over arity-0 variables denote the same element of
/// the free model, i.e. are derivably equal.
pub fn decide_equal_via_model(
    theory: BuiltinTheory,
    lhs: &Judgement,
    rhs: &Judgement,
) -> Result<bool, BuiltinError> {
    if lhs.ctx != rhs.ctx || lhs.depth != rhs.depth {
        return Err(BuiltinError::ContextMismatch);
    }
    let gens = default_gens(lhs.ctx.len());
    Ok(eval_rho(theory, &gens, lhs)? == eval_rho(theory, &gens, rhs)?)
}

const ENUM_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub failures: Vec<String>,
    /// Carrier elements for which `ρ(σ(v)) = v` was checked.
    pub values: usize,
    /// Terms for which `σ(ρ(t))` was checked.
    pub terms: usize,
}

impl RoundtripReport {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `σ` and `ρ` are mutually inverse on a finite fragment: every
/// carrier element at levels `≤ level_bound` (lists capped at `list_cap`),
/// and every term over `gen_count` generators of size `≤ size_budget` at
/// those depths. For terms, `σ(ρ(t))` must be well-formed, equal to `t` in
/// the model, and a fixed point of `σ ∘ ρ`.
pub fn roundtrip_check(
    theory: BuiltinTheory,
    gen_count: usize,
    level_bound: usize,
    list_cap: usize,
    size_budget: usize,
) -> RoundtripReport {
    let gens = default_gens(gen_count);
    let m = AnyModel::new(theory, gens.clone());
    let sig = theory.theory().sig;
    let ctx = CompContext::truncated(gen_count);
    let mut report = RoundtripReport::default();
    for level in 0..=level_bound {
        let Some(values) = m.elements(level, list_cap, ENUM_LIMIT) else {
            report
                .failures
                .push(format!("level {level} is too large to enumerate"));
            continue;
        };
        for v in values {
            report.values += 1;
            let back = reify(theory, &gens, level, &v).and_then(|j| eval_rho(theory, &gens, &j));
            match back {
                Ok(w) if w == v => {}
                Ok(w) => report
                    .failures
                    .push(format!("level {level}: rho(sigma({v})) = {w}")),
                Err(e) => report
                    .failures
                    .push(format!("level {level}: sigma({v}): {e}")),
            }
        }
        for t in enumerate_terms(&sig, &ctx, level, size_budget) {
            report.terms += 1;
            let j = Judgement::new_unchecked(ctx.clone(), level, t);
            let check = || -> Result<Option<String>, BuiltinError> {
                let nf = normalize(theory, &gens, &j)?;
                if check_term(&sig, &nf.ctx, nf.depth, &nf.body).is_err() {
                    return Ok(Some("ill-formed normal form".into()));
                }
                if !decide_equal_via_model(theory, &j, &nf)? {
                    return Ok(Some("normal form denotes a different value".into()));
                }
                if normalize(theory, &gens, &nf)? != nf {
                    return Ok(Some("normal form is not stable".into()));
                }
                Ok(None)
            };
            match check() {
                Ok(None) => {}
                Ok(Some(msg)) => report
                    .failures
                    .push(format!("level {level}: {:?}: {msg}", j.body)),
                Err(e) => report
                    .failures
                    .push(format!("level {level}: {:?}: {e}", j.body)),
            }
        }
    }
    report
}

/// A term on which the two local-state models disagree at level 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateDisagreement {
    pub term: Judgement,
    pub env: Vec<StateVal>,
    pub resetting: StateVal,
    pub keeping: StateVal,
}

/// Interprets every closed-scope term over `n ≤ max_vars` arity-0 variables
/// of size `≤ size_bound` in both local-state models at offset 0, under
/// every environment of level-0 values over `gen_count` generators.
pub fn state_models_agree(
    size_bound: usize,
    max_vars: usize,
    gen_count: usize,
) -> Vec<StateDisagreement> {
    let sig = BuiltinTheory::StateLocal.theory().sig;
    let gens = default_gens(gen_count);
    let resetting = StateModel::new(sig.clone(), gens.clone());
    let keeping = StateModel::keeping_state(sig.clone(), gens);
    let values = resetting
        .elements(0, 0, ENUM_LIMIT)
        .expect("level 0 is small");
    let mut out = Vec::new();
    for n in 0..=max_vars {
        let ctx = CompContext::truncated(n);
        let pools = vec![values.clone(); n];
        let mut envs = Vec::new();
        product(&pools, &mut Vec::new(), &mut envs);
        for t in enumerate_terms(&sig, &ctx, 0, size_bound) {
            let j = Judgement::new_unchecked(ctx.clone(), 0, t);
            for env in &envs {
                let l = interpret(&resetting, &j, 0, env).expect("well-formed term");
                let r = interpret(&keeping, &j, 0, env).expect("well-formed term");
                if l != r {
                    out.push(StateDisagreement {
                        term: j.clone(),
                        env: env.clone(),
                        resetting: l,
                        keeping: r,
                    });
                }
            }
        }
    }
    out
}

fn product<V: Clone>(pools: &[Vec<V>], acc: &mut Vec<V>, out: &mut Vec<Vec<V>>) {
    match pools.split_first() {
        None => out.push(acc.clone()),
        Some((first, rest)) => {
            for v in first {
                acc.push(v.clone());
                product(rest, acc, out);
                acc.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_judgement;

    fn gens(names: &[&str]) -> Vec<Gen> {
        names.iter().map(|s| Gen::from(*s)).collect()
    }

    fn judge(thy: BuiltinTheory, ctx: &str, t: &str) -> Judgement {
        parse_judgement(ctx, t, &thy.theory().sig).unwrap()
    }

    #[test]
    fn capped_lists() {
        let all = lists_up_to(&[1, 2], 2, 100).unwrap();
        assert_eq!(all.len(), 7);
        assert_eq!(all[0], Vec::<i32>::new());
        assert_eq!(all[6], vec![2, 2]);
        assert!(lists_up_to(&[1, 2], 2, 6).is_none());
    }

    #[test]
    fn reify_examples() {
        let t = BuiltinTheory::NondetOnce;
        let gs = gens(&["g1", "g2"]);
        let v = SemValue::Once(ListTree::List(vec![
            ListTree::Leaf(Gen::from("g1")),
            ListTree::Leaf(Gen::from("g2")),
        ]));
        let j = reify(t, &gs, 0, &v).unwrap();
        assert_eq!(j, judge(t, "g1:0, g2:0", "or(g1, or(g2, fail))"));

        let c = BuiltinTheory::Exceptions;
        let j = reify(c, &gs, 2, &SemValue::Exc(ExcVal::Throw(1))).unwrap();
        assert_eq!(j, judge(c, "g1:0, g2:0 | a, b", "close(b; throw)"));
        let j = reify(c, &gs, 2, &SemValue::Exc(ExcVal::Gen(Gen::from("g2")))).unwrap();
        assert_eq!(j, judge(c, "g1:0, g2:0 | a, b", "close(b; close(a; g2))"));

        let s = BuiltinTheory::NondetCut;
        let v = SemValue::Cut(CutTree::list(vec![CutTree::Leaf(Gen::from("g1"))], true));
        assert_eq!(
            reify(s, &gs, 0, &v).unwrap(),
            judge(s, "g1:0, g2:0", "cut(or(g1, fail))")
        );
    }

    #[test]
    fn reify_rejects_wrong_levels() {
        let gs = gens(&["g"]);
        let v = SemValue::Exc(ExcVal::Throw(3));
        assert!(matches!(
            reify(BuiltinTheory::Exceptions, &gs, 1, &v),
            Err(BuiltinError::Malformed { .. })
        ));
        let v = SemValue::Once(ListTree::List(vec![ListTree::Leaf(Gen::from("h"))]));
        assert_eq!(
            reify(BuiltinTheory::NondetOnce, &gs, 0, &v),
            Err(BuiltinError::UnknownGen("h".into()))
        );
    }

    #[test]
    fn motivating_term_evaluates_to_or_of_first_two() {
        let t = BuiltinTheory::NondetOnce;
        let ctx = "w:0, x:0, y:0, z:0";
        let j = judge(
            t,
            ctx,
            "once(a. or(fail, or(close(a; or(w, x)), close(a; or(y, z)))))",
        );
        let gs = gens(&["1", "2", "3", "4"]);
        assert_eq!(eval_rho(t, &gs, &j).unwrap().to_string(), "[1, 2]");
        assert!(decide_equal_via_model(t, &j, &judge(t, ctx, "or(w, x)")).unwrap());
        assert_eq!(
            normalize(t, &gs, &j).unwrap(),
            judge(t, ctx, "or(w, or(x, fail))")
        );
    }

    #[test]
    fn semantic_equalities() {
        let c = BuiltinTheory::Exceptions;
        assert!(decide_equal_via_model(
            c,
            &judge(c, "-", "catch(a. throw, b. throw)"),
            &judge(c, "-", "throw")
        )
        .unwrap());
        let o = BuiltinTheory::NondetOnce;
        assert!(!decide_equal_via_model(
            o,
            &judge(o, "x:0, y:0", "or(x, y)"),
            &judge(o, "x:0, y:0", "or(y, x)")
        )
        .unwrap());
        assert_eq!(
            decide_equal_via_model(o, &judge(o, "x:0", "x"), &judge(o, "x:0, y:0", "x")),
            Err(BuiltinError::ContextMismatch)
        );
        assert_eq!(
            eval_rho(o, &gens(&["g"]), &judge(o, "x:1", "once(a. x(a))")),
            Err(BuiltinError::NotTruncated)
        );
    }

    #[test]
    fn state_eval_of_put_get() {
        let s = BuiltinTheory::StateLocal;
        let j = judge(s, "x:0, y:0", "put1(get(x, y))");
        let v = eval_rho(s, &gens(&["p", "q"]), &j).unwrap();
        assert_eq!(v.to_string(), "{0 -> (q, 1), 1 -> (q, 1)}");
    }

    #[test]
    fn local_close_agrees_across_state_models() {
        let s = BuiltinTheory::StateLocal;
        let j = judge(s, "x:0", "local0(a. close(a; x))");
        let gs = gens(&["g"]);
        let v = eval_rho(s, &gs, &j).unwrap();
        assert_eq!(
            v,
            eval_rho(BuiltinTheory::StateLocalNoClose, &gs, &j).unwrap()
        );
        assert_eq!(v, SemValue::State(StateVal::ret(Gen::from("g"))));
    }
}
