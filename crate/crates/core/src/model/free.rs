use thiserror::Error;

use super::DayPair;
use crate::sig::{ParamArity, Signature, CLOSE};
use crate::term::{check_term, CompContext, Judgement, Term, TermViolation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error("image of generator {index} has level {found}, expected {expected}")]
    LevelMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("`{0}` is not a scoped operation with one binder per continuation")]
    NotScoped(String),
    #[error("`{op}` takes {expected} arguments, got {found}")]
    ArgCount {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {0} is not at level 0 over generators of arity 0")]
    NotTruncated(usize),
    #[error("result is ill-formed: {0:?}")]
    IllFormed(Vec<TermViolation>),
}

/// An element of the syntactic free model: a term over generator-labelled
/// variables. The context is canonical: one variable per distinct
/// `(generator, arity)` that occurs, sorted, so elements that differ only by
/// renaming, reordering, duplicating or dropping variables are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeElem<G> {
    pub gens: Vec<(G, usize)>,
    pub depth: usize,
    pub body: Term,
}

impl<G: Ord + Clone> FreeElem<G> {
    /// Canonicalizes `(gens, depth, body)`; `body` refers to `gens` by index.
    pub fn new(gens: Vec<(G, usize)>, depth: usize, body: Term) -> Self {
        let mut used = vec![false; gens.len()];
        body.for_each_var(&mut |i| used[i] = true);
        let mut keys: Vec<(G, usize)> = gens
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(g, _)| g.clone())
            .collect();
        keys.sort();
        keys.dedup();
        let remap: Vec<usize> = gens
            .iter()
            .map(|g| keys.binary_search(g).unwrap_or(usize::MAX))
            .collect();
        let body = body.map_vars(&mut |i| remap[i]);
        FreeElem {
            gens: keys,
            depth,
            body,
        }
    }

    pub fn ctx(&self) -> CompContext {
        CompContext(self.gens.iter().map(|(_, m)| *m).collect())
    }

    pub fn judgement(&self) -> Judgement {
        Judgement::new_unchecked(self.ctx(), self.depth, self.body.clone())
    }

    /// Applies `f` to every generator (a map of generating families).
    pub fn rename<H: Ord + Clone>(&self, mut f: impl FnMut(&G) -> H) -> FreeElem<H> {
        FreeElem::new(
            self.gens.iter().map(|(g, m)| (f(g), *m)).collect(),
            self.depth,
            self.body.clone(),
        )
    }
}

/// `c ∈ X(n)` as the element `(x:n | a_1 … a_n ⊢ x(a_1 … a_n))` tagged `c`.
pub fn free_unit<G: Ord + Clone>(g: G, level: usize) -> FreeElem<G> {
    FreeElem {
        gens: vec![(g, level)],
        depth: level,
        body: Term::Var(0),
    }
}

/// Grafts `k(g, m)` (which must be at level `m`) at every leaf labelled by
/// the generator `g` of arity `m`.
pub fn free_bind<G, H>(
    sig: &Signature,
    e: &FreeElem<G>,
    mut k: impl FnMut(&G, usize) -> FreeElem<H>,
) -> Result<FreeElem<H>, FreeError>
where
    G: Ord + Clone,
    H: Ord + Clone,
{
    let mut gens = Vec::new();
    let mut images = Vec::with_capacity(e.gens.len());
    for (index, (g, m)) in e.gens.iter().enumerate() {
        let r = k(g, *m);
        if r.depth != *m {
            return Err(FreeError::LevelMismatch {
                index,
                expected: *m,
                found: r.depth,
            });
        }
        let shift = gens.len();
        gens.extend(r.gens.iter().cloned());
        images.push(r.body.map_vars(&mut |i| i + shift));
    }
    let body = e.body.graft(&mut |i| images[i].clone());
    let out = FreeElem::new(gens, e.depth, body);
    check_term(sig, &out.ctx(), out.depth, &out.body).map_err(FreeError::IllFormed)?;
    Ok(out)
}

/// The strength `X(p) ⊗ F Y(n) → F(X ⊗ Y)(p + n)` at `c ∈ X(p)`: each
/// generator `d ∈ Y(m)` becomes `(c, d)` in the `X(p) × Y(m)` summand, and
/// the term is weakened by `p`.
pub fn free_strength<X, Y>(c: &X, p: usize, e: &FreeElem<Y>) -> FreeElem<DayPair<X, Y>>
where
    X: Ord + Clone,
    Y: Ord + Clone,
{
    let gens = e
        .gens
        .iter()
        .map(|(d, m)| {
            (
                DayPair {
                    left_level: p,
                    right_level: *m,
                    left: c.clone(),
                    right: d.clone(),
                },
                p + m,
            )
        })
        .collect();
    FreeElem::new(gens, p + e.depth, e.body.clone())
}

/// The scoped operation `sc` on level-0 elements: a `close` is put at every
/// generator leaf of each argument (the map into the shifted free model),
/// then `sc` binds the new parameter.
pub fn lift_scoped_op<G: Ord + Clone>(
    sig: &Signature,
    sc: &str,
    args: &[FreeElem<G>],
) -> Result<FreeElem<G>, FreeError> {
    let ar = sig
        .arity(sc)
        .ok_or_else(|| FreeError::UnknownOp(sc.to_owned()))?;
    if ar.params != 0 || ar.binders.iter().any(|&m| m != 1) {
        return Err(FreeError::NotScoped(sc.to_owned()));
    }
    if sig.arity(CLOSE) != Some(&ParamArity::closer()) {
        return Err(FreeError::UnknownOp(CLOSE.to_owned()));
    }
    if ar.conts() != args.len() {
        return Err(FreeError::ArgCount {
            op: sc.to_owned(),
            expected: ar.conts(),
            found: args.len(),
        });
    }
    let mut gens = Vec::new();
    let mut conts = Vec::with_capacity(args.len());
    for (i, a) in args.iter().enumerate() {
        if a.depth != 0 || a.gens.iter().any(|(_, m)| *m != 0) {
            return Err(FreeError::NotTruncated(i));
        }
        let shift = gens.len();
        gens.extend(a.gens.iter().cloned());
        conts.push(
            a.body
                .graft(&mut |v| Term::app(CLOSE, vec![Term::Var(v + shift)])),
        );
    }
    let out = FreeElem::new(gens, 0, Term::app(sc, conts));
    check_term(sig, &out.ctx(), 0, &out.body).map_err(FreeError::IllFormed)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eq::BuiltinTheory;
    use crate::syntax::parse_judgement;

    fn once_sig() -> Signature {
        BuiltinTheory::NondetOnce.theory().sig
    }

    fn elem(sig: &Signature, gens: &[u32], t: &str) -> FreeElem<u32> {
        let ctx: Vec<String> = gens.iter().map(|g| format!("g{g}:0")).collect();
        let j = parse_judgement(&ctx.join(", "), t, sig).unwrap();
        FreeElem::new(gens.iter().map(|&g| (g, 0)).collect(), j.depth, j.body)
    }

    #[test]
    fn canonical_contexts() {
        let sig = once_sig();
        let a = elem(&sig, &[2, 1], "or(g2, g1)");
        let b = elem(&sig, &[1, 2, 3], "or(g2, g1)");
        assert_eq!(a, b);
        assert_eq!(a.gens, vec![(1, 0), (2, 0)]);
        assert_eq!(a.body, Term::app("or", vec![Term::Var(1), Term::Var(0)]));
        let dup = FreeElem::new(
            vec![(5, 0), (5, 0)],
            0,
            Term::app("or", vec![Term::Var(0), Term::Var(1)]),
        );
        assert_eq!(dup.gens, vec![(5, 0)]);
    }

    #[test]
    fn unit_at_level_two() {
        let u = free_unit('g', 2);
        assert_eq!(u.ctx(), CompContext::new([2]));
        assert_eq!(u.depth, 2);
        assert_eq!(u.body, Term::Var(0));
    }

    #[test]
    fn motivating_bind() {
        // once(or(1, 3)) >>= λx. or(x, x + 1)
        let sig = once_sig();
        let m = lift_scoped_op(&sig, "once", &[elem(&sig, &[1, 3], "or(g1, g3)")]).unwrap();
        let k = |g: &u32, _| elem(&sig, &[*g, g + 1], &format!("or(g{g}, g{})", g + 1));
        let out = free_bind(&sig, &m, k).unwrap();
        let expected = elem(
            &sig,
            &[1, 2, 3, 4],
            "once(a. or(close(a; or(g1, g2)), close(a; or(g3, g4))))",
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn bind_checks_levels() {
        let sig = once_sig();
        let e = free_unit(0u32, 1);
        let err = free_bind(&sig, &e, |_, _| free_unit(0u32, 0)).unwrap_err();
        assert_eq!(
            err,
            FreeError::LevelMismatch {
                index: 0,
                expected: 1,
                found: 0
            }
        );
    }

    #[test]
    fn strength_on_a_unit() {
        let e = free_unit('d', 0);
        let s = free_strength(&'c', 1, &e);
        assert_eq!(s.depth, 1);
        assert_eq!(s.body, Term::Var(0));
        assert_eq!(
            s.gens,
            vec![(
                DayPair {
                    left_level: 1,
                    right_level: 0,
                    left: 'c',
                    right: 'd'
                },
                1
            )]
        );
    }

    #[test]
    fn lift_single_leaf_and_errors() {
        let sig = once_sig();
        let out = lift_scoped_op(&sig, "once", &[free_unit(7u32, 0)]).unwrap();
        assert_eq!(
            out.body,
            Term::app("once", vec![Term::app("close", vec![Term::Var(0)])])
        );
        assert_eq!(
            lift_scoped_op(&sig, "or", &[free_unit(7u32, 0)]),
            Err(FreeError::NotScoped("or".into()))
        );
        assert_eq!(
            lift_scoped_op(&sig, "once", &[free_unit(7u32, 1)]),
            Err(FreeError::NotTruncated(0))
        );
    }
}
