//! Bounded enumeration of well-formed terms.

use std::collections::HashMap;
use std::rc::Rc;

use crate::sig::{OpName, ParamArity, Signature};
use crate::term::{CompContext, Term};

/// Enumerates terms of exact sizes at a given stack depth, memoized per
/// `(depth, size)`.
///
/// Order within one size: variables by index, then operations by name, then
/// continuation size splits in lexicographic order, then the product of the
/// continuation lists in lexicographic order.
pub struct TermEnumerator<'a> {
    sig: &'a Signature,
    ctx: &'a CompContext,
    ops: Vec<(OpName, ParamArity)>,
    memo: HashMap<(usize, usize), Rc<Vec<Term>>>,
}

impl<'a> TermEnumerator<'a> {
    pub fn new(sig: &'a Signature, ctx: &'a CompContext) -> Self {
        let ops = sig.ops().map(|(n, a)| (n.clone(), a.clone())).collect();
        TermEnumerator {
            sig,
            ctx,
            ops,
            memo: HashMap::new(),
        }
    }

    pub fn signature(&self) -> &Signature {
        self.sig
    }

    /// Well-formed terms with exactly `size` `App` nodes at `depth`.
    pub fn exact(&mut self, depth: usize, size: usize) -> Rc<Vec<Term>> {
        if let Some(v) = self.memo.get(&(depth, size)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if size == 0 {
            out.extend(
                self.ctx
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m == depth)
                    .map(|(i, _)| Term::Var(i)),
            );
        } else {
            let ops = self.ops.clone();
            for (op, ar) in &ops {
                if ar.params > depth {
                    continue;
                }
                let base = depth - ar.params;
                for split in compositions(size - 1, ar.conts()) {
                    let pools: Vec<Rc<Vec<Term>>> = split
                        .iter()
                        .zip(&ar.binders)
                        .map(|(&s, &m)| self.exact(base + m, s))
                        .collect();
                    product(&pools, &mut |conts| {
                        out.push(Term::App(op.clone(), conts.to_vec()))
                    });
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert((depth, size), out.clone());
        out
    }

    /// All terms with at most `bound` `App` nodes, smallest first.
    pub fn up_to(&mut self, depth: usize, bound: usize) -> Vec<Term> {
        let mut out = Vec::new();
        for s in 0..=bound {
            out.extend(self.exact(depth, s).iter().cloned());
        }
        out
    }
}

/// Exactly the well-formed terms at `(ctx, depth)` with at most `size_bound`
/// `App` nodes.
pub fn enumerate_terms(
    sig: &Signature,
    ctx: &CompContext,
    depth: usize,
    size_bound: usize,
) -> Vec<Term> {
    TermEnumerator::new(sig, ctx).up_to(depth, size_bound)
}

/// Ordered ways to write `total` as a sum of `parts` naturals, lexicographic.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

fn product(pools: &[Rc<Vec<Term>>], f: &mut impl FnMut(&[Term])) {
    fn go(pools: &[Rc<Vec<Term>>], acc: &mut Vec<Term>, f: &mut impl FnMut(&[Term])) {
        match pools.split_first() {
            None => f(acc),
            Some((first, rest)) => {
                for t in first.iter() {
                    acc.push(t.clone());
                    go(rest, acc, f);
                    acc.pop();
                }
            }
        }
    }
    go(pools, &mut Vec::with_capacity(pools.len()), f);
}
