//! Single rewrite steps and a bounded bidirectional search for derivable
//! equality.
//!
//! A step replaces a subterm that is an instance of one side of an equation
//! by the same instance of the other side. Because a variable occurrence
//! consumes its whole stack, an instance is found by first-order matching:
//! variable leaves capture plain subterms, and the equation is implicitly
//! weakened by the difference between the local depth and its own depth.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Equation, Theory};
use crate::sig::Signature;
use crate::term::{check_term, CompContext, Judgement, Position, Term, TermViolation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// lhs to rhs.
    Forward,
    /// rhs to lhs.
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// Captured subterm per equation variable; `None` for variables that occur
/// on neither side.
pub type Captures = Vec<Option<Term>>;

/// One rewrite step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rewrite {
    pub position: Position,
    pub equation: usize,
    pub direction: Direction,
    pub subst: Captures,
}

impl Rewrite {
    /// The same step taken backwards.
    pub fn inverse(&self) -> Rewrite {
        Rewrite {
            direction: self.direction.flip(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationTrace {
    pub steps: Vec<Rewrite>,
}

impl DerivationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Equal(DerivationTrace),
    /// Not found within the budget. Says nothing about disequality.
    Unknown,
}

impl SearchOutcome {
    pub fn is_equal(&self) -> bool {
        matches!(self, SearchOutcome::Equal(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("terms live in different contexts")]
    ContextMismatch,
    #[error("term is ill-formed: {0:?}")]
    IllFormed(Vec<TermViolation>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: no subterm at {position:?}")]
    BadPosition { step: usize, position: Position },
    #[error("step {step}: no equation {equation}")]
    BadEquation { step: usize, equation: usize },
    #[error("step {step}: subterm is not an instance of the cited side")]
    NotAnInstance { step: usize },
    #[error("step {step}: substitution misses a variable of the rewritten side")]
    MissingCapture { step: usize },
    #[error("replay ends at a different term")]
    WrongEnd,
    #[error("replay produced an ill-formed term: {0:?}")]
    IllFormed(Vec<TermViolation>),
}

/// Budget for [`derivably_equal_with`] and [`explore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Total number of rewrite steps in a derivation.
    pub step_bound: usize,
    /// Intermediate terms may have at most this many more `App` nodes than
    /// the larger endpoint.
    pub size_slack: usize,
    /// Stop with `Unknown` once this many distinct terms have been seen.
    pub max_states: usize,
}

impl SearchLimits {
    pub fn steps(step_bound: usize) -> Self {
        SearchLimits {
            step_bound,
            ..Self::default()
        }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            step_bound: 10,
            size_slack: 6,
            max_states: 200_000,
        }
    }
}

/// Local stack depth at `pos`, or `None` if `pos` leaves the term or passes
/// an unknown operation.
pub fn depth_at(sig: &Signature, t: &Term, depth: usize, pos: &[usize]) -> Option<usize> {
    let (mut t, mut d) = (t, depth);
    for &i in pos {
        let Term::App(op, conts) = t else { return None };
        let ar = sig.arity(op)?;
        d = d.checked_sub(ar.params)? + ar.binders.get(i)?;
        t = conts.get(i)?;
    }
    Some(d)
}

/// Matches `pattern` (a side of an equation with `vars` variables) against
/// `subject`, extending `caps`. Structural: a pattern variable captures the
/// aligned subterm, repeated variables must capture equal subterms.
fn match_into(pattern: &Term, subject: &Term, caps: &mut Captures) -> bool {
    match (pattern, subject) {
        (Term::Var(i), s) => match &caps[*i] {
            Some(prev) => prev == s,
            None => {
                caps[*i] = Some(s.clone());
                true
            }
        },
        (Term::App(po, pc), Term::App(so, sc)) => {
            po == so
                && pc.len() == sc.len()
                && pc.iter().zip(sc).all(|(p, s)| match_into(p, s, caps))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

fn sides(e: &Equation, dir: Direction) -> (&Term, &Term) {
    match dir {
        Direction::Forward => (&e.lhs, &e.rhs),
        Direction::Backward => (&e.rhs, &e.lhs),
    }
}

/// Captures making `subject` (at local depth `local_depth`) an instance of
/// the `dir` source side of `e`.
fn match_side(
    e: &Equation,
    dir: Direction,
    subject: &Term,
    local_depth: usize,
) -> Option<Captures> {
    if local_depth < e.depth {
        return None;
    }
    let mut caps = vec![None; e.ctx.len()];
    match_into(sides(e, dir).0, subject, &mut caps).then_some(caps)
}

fn instantiate(t: &Term, caps: &Captures) -> Option<Term> {
    let mut ok = true;
    let out = t.graft(&mut |i| match caps.get(i).and_then(Option::as_ref) {
        Some(c) => c.clone(),
        None => {
            ok = false;
            Term::Var(i)
        }
    });
    ok.then_some(out)
}

/// Captures making the subterm of `subject` at `position` an instance of
/// `eqn.lhs`, or `None` if it is not one.
pub fn match_instance(
    thy: &Theory,
    eqn: &Equation,
    subject: &Judgement,
    position: &[usize],
) -> Option<Captures> {
    let local = depth_at(&thy.sig, &subject.body, subject.depth, position)?;
    let sub = subject.body.subterm(position)?;
    match_side(eqn, Direction::Forward, sub, local)
}

/// Every single-step rewrite of `t` at `(ctx, depth)`: positions in
/// pre-order, equations in declaration order, forward before backward.
///
/// A variable of the produced side that the matched side does not capture
/// may be any term; it is instantiated with each context variable of the
/// right arity in turn (and the step is skipped if there is none).
pub fn rewrites(thy: &Theory, ctx: &CompContext, depth: usize, t: &Term) -> Vec<(Rewrite, Term)> {
    let mut out = Vec::new();
    t.walk(&thy.sig, depth, &mut |pos, local, sub| {
        for (ei, e) in thy.eqns.iter().enumerate() {
            for dir in [Direction::Forward, Direction::Backward] {
                let Some(caps) = match_side(e, dir, sub, local) else {
                    continue;
                };
                let target = sides(e, dir).1;
                for caps in fill_fresh(e, target, caps, ctx, local - e.depth) {
                    let new_sub = instantiate(target, &caps).expect("all variables filled");
                    if &new_sub == sub {
                        continue;
                    }
                    let new = t
                        .replace_at(pos, new_sub)
                        .expect("walk yields valid positions");
                    out.push((
                        Rewrite {
                            position: pos.to_vec(),
                            equation: ei,
                            direction: dir,
                            subst: caps,
                        },
                        new,
                    ));
                }
            }
        }
    });
    out
}

fn fill_fresh(
    e: &Equation,
    target: &Term,
    caps: Captures,
    ctx: &CompContext,
    shift: usize,
) -> Vec<Captures> {
    let mut missing = Vec::new();
    target.for_each_var(&mut |i| {
        if caps[i].is_none() && !missing.contains(&i) {
            missing.push(i);
        }
    });
    let mut out = vec![caps];
    for i in missing {
        let want = e.ctx.0[i] + shift;
        let pool: Vec<usize> = (0..ctx.len()).filter(|&j| ctx.0[j] == want).collect();
        out = out
            .into_iter()
            .flat_map(|c| {
                pool.iter().map(move |&j| {
                    let mut c = c.clone();
                    c[i] = Some(Term::Var(j));
                    c
                })
            })
            .collect();
    }
    out
}

/// Applies one step, checking that it is an instance of the cited equation.
pub fn apply_rewrite(
    thy: &Theory,
    t: &Term,
    depth: usize,
    r: &Rewrite,
    step: usize,
) -> Result<Term, ReplayError> {
    let e = thy.eqns.get(r.equation).ok_or(ReplayError::BadEquation {
        step,
        equation: r.equation,
    })?;
    let bad_pos = || ReplayError::BadPosition {
        step,
        position: r.position.clone(),
    };
    let local = depth_at(&thy.sig, t, depth, &r.position).ok_or_else(bad_pos)?;
    let sub = t.subterm(&r.position).ok_or_else(bad_pos)?;
    if local < e.depth {
        return Err(ReplayError::NotAnInstance { step });
    }
    let (from, to) = sides(e, r.direction);
    let from = instantiate(from, &r.subst).ok_or(ReplayError::MissingCapture { step })?;
    if &from != sub {
        return Err(ReplayError::NotAnInstance { step });
    }
    let to = instantiate(to, &r.subst).ok_or(ReplayError::MissingCapture { step })?;
    t.replace_at(&r.position, to).ok_or_else(bad_pos)
}

/// Replays `trace` from `start`, returning every intermediate term
/// (including both ends). Fails unless the last term is `end`.
pub fn replay(
    thy: &Theory,
    start: &Judgement,
    trace: &DerivationTrace,
    end: &Term,
) -> Result<Vec<Term>, ReplayError> {
    let mut terms = vec![start.body.clone()];
    for (i, r) in trace.steps.iter().enumerate() {
        let next = apply_rewrite(thy, terms.last().expect("nonempty"), start.depth, r, i)?;
        check_term(&thy.sig, &start.ctx, start.depth, &next).map_err(ReplayError::IllFormed)?;
        terms.push(next);
    }
    if terms.last() != Some(end) {
        return Err(ReplayError::WrongEnd);
    }
    Ok(terms)
}

/// Breadth-first search state for one side.
struct Side {
    terms: Vec<Term>,
    // parent index and the step from parent to this node
    parent: Vec<Option<(usize, Rewrite)>>,
    index: HashMap<Term, usize>,
    frontier: Vec<usize>,
    radius: usize,
}

impl Side {
    fn new(root: Term) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side {
            terms: vec![root],
            parent: vec![None],
            index,
            frontier: vec![0],
            radius: 0,
        }
    }

    fn dist(&self, mut i: usize) -> usize {
        let mut d = 0;
        while let Some((p, _)) = &self.parent[i] {
            i = *p;
            d += 1;
        }
        d
    }

    /// Steps from the root to node `i`.
    fn path(&self, mut i: usize) -> Vec<Rewrite> {
        let mut steps = Vec::new();
        while let Some((p, r)) = &self.parent[i] {
            steps.push(r.clone());
            i = *p;
        }
        steps.reverse();
        steps
    }
}

fn expand(
    thy: &Theory,
    ctx: &CompContext,
    depth: usize,
    max_size: usize,
    side: &mut Side,
    other: &Side,
) -> Option<(usize, usize)> {
    let mut next = Vec::new();
    let mut best: Option<(usize, usize, usize)> = None;
    let frontier = std::mem::take(&mut side.frontier);
    for &n in &frontier {
        let t = side.terms[n].clone();
        for (r, new) in rewrites(thy, ctx, depth, &t) {
            if side.index.contains_key(&new) || new.size() > max_size {
                continue;
            }
            let id = side.terms.len();
            side.index.insert(new.clone(), id);
            if let Some(&o) = other.index.get(&new) {
                let total = other.dist(o);
                if best.is_none_or(|(b, _, _)| total < b) {
                    best = Some((total, id, o));
                }
            }
            side.terms.push(new);
            side.parent.push(Some((n, r)));
            next.push(id);
        }
    }
    side.frontier = next;
    side.radius += 1;
    best.map(|(_, mine, theirs)| (mine, theirs))
}

/// [`derivably_equal_with`] using the default size slack and state budget.
pub fn derivably_equal(
    thy: &Theory,
    lhs: &Judgement,
    rhs: &Judgement,
    step_bound: usize,
) -> Result<SearchOutcome, SearchError> {
    derivably_equal_with(thy, lhs, rhs, SearchLimits::steps(step_bound))
}

/// Bidirectional breadth-first search for a chain of at most
/// `limits.step_bound` rewrites from `lhs` to `rhs`. The smaller frontier
/// is expanded first (the `lhs` side on ties). A returned trace always
/// replays.
pub fn derivably_equal_with(
    thy: &Theory,
    lhs: &Judgement,
    rhs: &Judgement,
    limits: SearchLimits,
) -> Result<SearchOutcome, SearchError> {
    if lhs.ctx != rhs.ctx || lhs.depth != rhs.depth {
        return Err(SearchError::ContextMismatch);
    }
    for j in [lhs, rhs] {
        check_term(&thy.sig, &j.ctx, j.depth, &j.body).map_err(SearchError::IllFormed)?;
    }
    if lhs.body == rhs.body {
        return Ok(SearchOutcome::Equal(DerivationTrace::default()));
    }
    let max_size = lhs.body.size().max(rhs.body.size()) + limits.size_slack;
    let mut a = Side::new(lhs.body.clone());
    let mut b = Side::new(rhs.body.clone());
    while a.radius + b.radius < limits.step_bound {
        if a.frontier.is_empty() || b.frontier.is_empty() {
            break;
        }
        if a.terms.len() + b.terms.len() > limits.max_states {
            break;
        }
        let from_a = a.frontier.len() <= b.frontier.len();
        let meet = if from_a {
            expand(thy, &lhs.ctx, lhs.depth, max_size, &mut a, &b)
        } else {
            expand(thy, &lhs.ctx, lhs.depth, max_size, &mut b, &a)
        };
        if let Some((mine, theirs)) = meet {
            let (ia, ib) = if from_a {
                (mine, theirs)
            } else {
                (theirs, mine)
            };
            let mut steps = a.path(ia);
            steps.extend(b.path(ib).iter().rev().map(Rewrite::inverse));
            return Ok(SearchOutcome::Equal(DerivationTrace { steps }));
        }
    }
    Ok(SearchOutcome::Unknown)
}

/// Every term reachable from `start` in at most `limits.step_bound` steps
/// with at most `start.size() + limits.size_slack` nodes, with its distance,
/// in discovery order.
pub fn explore(thy: &Theory, start: &Judgement, limits: SearchLimits) -> Vec<(Term, usize)> {
    let max_size = start.body.size() + limits.size_slack;
    let mut side = Side::new(start.body.clone());
    let empty = Side::new(Term::Var(usize::MAX));
    let mut dist = vec![0];
    while side.radius < limits.step_bound
        && !side.frontier.is_empty()
        && side.terms.len() <= limits.max_states
    {
        expand(thy, &start.ctx, start.depth, max_size, &mut side, &empty);
        dist.resize(side.terms.len(), side.radius);
    }
    side.terms.into_iter().zip(dist).collect()
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eq::BuiltinTheory;
    use crate::syntax::parse_judgement;

    fn j(thy: &Theory, ctx: &str, t: &str) -> Judgement {
        parse_judgement(ctx, t, &thy.sig).unwrap()
    }

    #[test]
    fn matches_or_fail_at_root() {
        let thy = BuiltinTheory::NondetOnce.theory();
        let s = j(&thy, "1:0, 2:0 | -", "or(or(1, 2), fail)");
        let caps = match_instance(&thy, thy.equation("or-fail").unwrap(), &s, &[]).unwrap();
        assert_eq!(
            caps,
            vec![Some(Term::app("or", vec![Term::Var(0), Term::Var(1)]))]
        );
    }

    #[test]
    fn nonlinear_pattern_needs_equal_captures() {
        let thy = BuiltinTheory::NondetOnce.theory();
        let s = j(
            &thy,
            "1:0, 2:0 | -",
            "once(a. or(close(a; 1), close(a; 2)))",
        );
        assert_eq!(
            match_instance(&thy, thy.equation("once-or-idem").unwrap(), &s, &[]),
            None
        );
        let s = j(&thy, "1:0 | -", "once(a. or(close(a; 1), close(a; 1)))");
        assert!(match_instance(&thy, thy.equation("once-or-idem").unwrap(), &s, &[]).is_some());
    }

    #[test]
    fn matches_the_motivating_term() {
        let thy = BuiltinTheory::NondetOnce.theory();
        let s = j(
            &thy,
            "1:0, 2:0, 3:0, 4:0 | -",
            "once(a. or(close(a; or(1, 2)), close(a; or(3, 4))))",
        );
        let caps = match_instance(&thy, thy.equation("once-or-close").unwrap(), &s, &[]).unwrap();
        assert_eq!(
            caps[0],
            Some(Term::app("or", vec![Term::Var(0), Term::Var(1)]))
        );
        assert_eq!(
            caps[1],
            Some(Term::app(
                "close",
                vec![Term::app("or", vec![Term::Var(2), Term::Var(3)])]
            ))
        );
    }

    #[test]
    fn matching_under_a_binder_weakens_the_equation() {
        let thy = BuiltinTheory::NondetOnce.theory();
        let s = j(&thy, "x:1 | -", "once(a. or(x(a), fail))");
        let caps = match_instance(&thy, thy.equation("or-fail").unwrap(), &s, &[0]).unwrap();
        assert_eq!(caps, vec![Some(Term::Var(0))]);
    }

    #[test]
    fn reflexivity_needs_no_steps() {
        let thy = BuiltinTheory::GlobalState.theory();
        let t = j(&thy, "x:0 | -", "put0(x)");
        assert_eq!(
            derivably_equal(&thy, &t, &t, 0).unwrap(),
            SearchOutcome::Equal(DerivationTrace::default())
        );
    }

    #[test]
    fn once_close_from_the_others() {
        let thy = BuiltinTheory::NondetOnce.theory().without("once-close");
        let lhs = j(&thy, "x:0 | -", "once(a. close(a; x))");
        let rhs = j(&thy, "x:0 | -", "x");
        let SearchOutcome::Equal(trace) = derivably_equal(&thy, &lhs, &rhs, 4).unwrap() else {
            panic!("not found")
        };
        assert_eq!(trace.len(), 2);
        replay(&thy, &lhs, &trace, &rhs.body).unwrap();
    }

    #[test]
    fn context_mismatch() {
        let thy = BuiltinTheory::NondetOnce.theory();
        let a = j(&thy, "x:0 | -", "x");
        let b = j(&thy, "x:0, y:0 | -", "x");
        assert_eq!(
            derivably_equal(&thy, &a, &b, 3),
            Err(SearchError::ContextMismatch)
        );
    }

    #[test]
    fn symmetry_is_not_derivable() {
        let thy = BuiltinTheory::ExplicitNondet.theory();
        let a = j(&thy, "x:0, y:0 | -", "or(x, y)");
        let b = j(&thy, "x:0, y:0 | -", "or(y, x)");
        assert_eq!(
            derivably_equal(&thy, &a, &b, 5).unwrap(),
            SearchOutcome::Unknown
        );
    }

    #[test]
    fn replay_rejects_forged_steps() {
        let thy = BuiltinTheory::ExplicitNondet.theory();
        let start = j(&thy, "x:0 | -", "or(x, fail)");
        let forged = DerivationTrace {
            steps: vec![Rewrite {
                position: vec![],
                equation: 2, // fail-or does not match or(x, fail)
                direction: Direction::Forward,
                subst: vec![Some(Term::Var(0))],
            }],
        };
        assert_eq!(
            replay(&thy, &start, &forged, &Term::Var(0)),
            Err(ReplayError::NotAnInstance { step: 0 })
        );
    }

    #[test]
    fn explore_reports_distances() {
        let thy = BuiltinTheory::ExplicitNondet.theory();
        let start = j(&thy, "x:0 | -", "or(x, fail)");
        let ball = explore(
            &thy,
            &start,
            SearchLimits {
                step_bound: 1,
                size_slack: 0,
                max_states: 1000,
            },
        );
        assert_eq!(ball[0], (start.body.clone(), 0));
        assert!(ball.contains(&(Term::Var(0), 1)));
        assert!(ball.iter().all(|(t, _)| t.size() <= 2));
    }
}
