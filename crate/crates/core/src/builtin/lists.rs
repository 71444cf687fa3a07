use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{lists_up_to, Gen};
use crate::model::{ModelError, Structure};
use crate::sig::Signature;

/// Level `n` of the `once` model: lists nested exactly `n + 1` deep with
/// generator leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ListTree {
    Leaf(Gen),
    List(Vec<ListTree>),
}

impl ListTree {
    pub fn items(&self) -> Option<&[ListTree]> {
        match self {
            ListTree::List(xs) => Some(xs),
            ListTree::Leaf(_) => None,
        }
    }
}

impl fmt::Display for ListTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ListTree::Leaf(g) => write!(f, "{g}"),
            ListTree::List(xs) => write_list(f, xs, false),
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T], star: bool) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]{}", if star { "*" } else { "" })
}

fn bad(op: &str, level: usize) -> ModelError {
    ModelError::BadArgument {
        op: op.to_owned(),
        level,
    }
}

/// Nondeterminism with `once`: `or` concatenates, `fail` is `[]`, `close`
/// wraps a singleton and `once` takes the head.
#[derive(Clone, Debug)]
pub struct OnceModel {
    sig: Signature,
    gens: Vec<Gen>,
}

impl OnceModel {
    pub fn new(sig: Signature, gens: Vec<Gen>) -> Self {
        OnceModel { sig, gens }
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn unit(g: Gen) -> ListTree {
        ListTree::List(vec![ListTree::Leaf(g)])
    }
}

impl Structure for OnceModel {
    type Value = ListTree;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: &str, level: usize, args: &[ListTree]) -> Result<ListTree, ModelError> {
        let list = |i: usize| {
            args.get(i)
                .and_then(ListTree::items)
                .ok_or_else(|| bad(op, level))
        };
        match op {
            "or" => {
                let mut out = list(0)?.to_vec();
                out.extend_from_slice(list(1)?);
                Ok(ListTree::List(out))
            }
            "fail" => Ok(ListTree::List(Vec::new())),
            "close" => Ok(ListTree::List(vec![args
                .first()
                .ok_or_else(|| bad(op, level))?
                .clone()])),
            "once" => Ok(list(0)?
                .first()
                .cloned()
                .unwrap_or(ListTree::List(Vec::new()))),
            _ => Err(ModelError::UnknownOp(op.to_owned())),
        }
    }

    fn at_level(&self, v: &ListTree, level: usize) -> bool {
        match v {
            ListTree::Leaf(_) => false,
            ListTree::List(xs) => xs.iter().all(|x| match (x, level) {
                (ListTree::Leaf(g), 0) => self.gens.contains(g),
                (_, 0) => false,
                (x, n) => self.at_level(x, n - 1),
            }),
        }
    }

    fn elements(&self, level: usize, list_cap: usize, limit: usize) -> Option<Vec<ListTree>> {
        let mut items: Vec<ListTree> = self.gens.iter().cloned().map(ListTree::Leaf).collect();
        for _ in 0..=level {
            items = lists_up_to(&items, list_cap, limit)?
                .into_iter()
                .map(ListTree::List)
                .collect();
        }
        Some(items)
    }

    fn finite_levels(&self) -> bool {
        false
    }

    fn sample(&self, level: usize, max_len: usize, rng: &mut ChaCha8Rng) -> ListTree {
        if level == 0 && self.gens.is_empty() {
            return ListTree::List(Vec::new());
        }
        let len = rng.gen_range(0..=max_len);
        ListTree::List(
            (0..len)
                .map(|_| match level {
                    0 => ListTree::Leaf(self.gens[rng.gen_range(0..self.gens.len())].clone()),
                    n => self.sample(n - 1, max_len, rng),
                })
                .collect(),
        )
    }
}

/// Level `n` of the `cut` model: like [`ListTree`], but every list layer may
/// carry a star, meaning "the remaining choices were discarded".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutTree {
    Leaf(Gen),
    List { items: Vec<CutTree>, star: bool },
}

impl CutTree {
    pub fn list(items: Vec<CutTree>, star: bool) -> Self {
        CutTree::List { items, star }
    }

    fn parts(&self) -> Option<(&[CutTree], bool)> {
        match self {
            CutTree::List { items, star } => Some((items, *star)),
            CutTree::Leaf(_) => None,
        }
    }
}

impl fmt::Display for CutTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutTree::Leaf(g) => write!(f, "{g}"),
            CutTree::List { items, star } => write_list(f, items, *star),
        }
    }
}

/// Nondeterminism with `cut` delimited by `scope`.
#[derive(Clone, Debug)]
pub struct CutModel {
    sig: Signature,
    gens: Vec<Gen>,
}

impl CutModel {
    pub fn new(sig: Signature, gens: Vec<Gen>) -> Self {
        CutModel { sig, gens }
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn unit(g: Gen) -> CutTree {
        CutTree::list(vec![CutTree::Leaf(g)], false)
    }

    fn or(xs: &[CutTree], xstar: bool, ys: &[CutTree], ystar: bool) -> CutTree {
        if xstar {
            return CutTree::list(xs.to_vec(), true);
        }
        let mut out = xs.to_vec();
        out.extend_from_slice(ys);
        CutTree::list(out, ystar)
    }

    // scope(x :: xs) = or(x, scope(xs)), stars erased on the outer layer
    fn scope(items: &[CutTree], op: &str, level: usize) -> Result<CutTree, ModelError> {
        let mut acc = CutTree::list(Vec::new(), false);
        for x in items.iter().rev() {
            let (xs, xstar) = x.parts().ok_or_else(|| bad(op, level))?;
            let (ys, ystar) = acc.parts().expect("list");
            acc = Self::or(xs, xstar, ys, ystar);
        }
        Ok(acc)
    }
}

impl Structure for CutModel {
    type Value = CutTree;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: &str, level: usize, args: &[CutTree]) -> Result<CutTree, ModelError> {
        let arg = |i: usize| {
            args.get(i)
                .and_then(CutTree::parts)
                .ok_or_else(|| bad(op, level))
        };
        match op {
            "or" => {
                let (xs, xstar) = arg(0)?;
                let (ys, ystar) = arg(1)?;
                Ok(Self::or(xs, xstar, ys, ystar))
            }
            "fail" => Ok(CutTree::list(Vec::new(), false)),
            "cut" => Ok(CutTree::list(arg(0)?.0.to_vec(), true)),
            "close" => Ok(CutTree::list(
                vec![args.first().ok_or_else(|| bad(op, level))?.clone()],
                false,
            )),
            "scope" => Self::scope(arg(0)?.0, op, level),
            _ => Err(ModelError::UnknownOp(op.to_owned())),
        }
    }

    fn at_level(&self, v: &CutTree, level: usize) -> bool {
        match v {
            CutTree::Leaf(_) => false,
            CutTree::List { items, .. } => items.iter().all(|x| match (x, level) {
                (CutTree::Leaf(g), 0) => self.gens.contains(g),
                (_, 0) => false,
                (x, n) => self.at_level(x, n - 1),
            }),
        }
    }

    fn elements(&self, level: usize, list_cap: usize, limit: usize) -> Option<Vec<CutTree>> {
        let mut items: Vec<CutTree> = self.gens.iter().cloned().map(CutTree::Leaf).collect();
        for _ in 0..=level {
            let lists = lists_up_to(&items, list_cap, limit / 2)?;
            items = lists
                .into_iter()
                .flat_map(|xs| [CutTree::list(xs.clone(), false), CutTree::list(xs, true)])
                .collect();
        }
        Some(items)
    }

    fn finite_levels(&self) -> bool {
        false
    }

    fn sample(&self, level: usize, max_len: usize, rng: &mut ChaCha8Rng) -> CutTree {
        let star = rng.gen_bool(0.3);
        if level == 0 && self.gens.is_empty() {
            return CutTree::list(Vec::new(), star);
        }
        let len = rng.gen_range(0..=max_len);
        let items = (0..len)
            .map(|_| match level {
                0 => CutTree::Leaf(self.gens[rng.gen_range(0..self.gens.len())].clone()),
                n => self.sample(n - 1, max_len, rng),
            })
            .collect();
        CutTree::list(items, star)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eq::BuiltinTheory;

    fn g(s: &str) -> Gen {
        Gen::from(s)
    }

    fn leaf_list(gs: &[&str]) -> ListTree {
        ListTree::List(gs.iter().map(|s| ListTree::Leaf(g(s))).collect())
    }

    #[test]
    fn once_table() {
        let m = OnceModel::new(BuiltinTheory::NondetOnce.theory().sig, vec![g("1"), g("2")]);
        let inner = ListTree::List(vec![leaf_list(&["1"]), leaf_list(&["2"])]);
        assert_eq!(m.apply("once", 0, &[inner]).unwrap(), leaf_list(&["1"]));
        assert_eq!(
            m.apply("once", 0, &[ListTree::List(vec![])]).unwrap(),
            leaf_list(&[])
        );
        assert_eq!(
            m.apply("or", 0, &[leaf_list(&["1"]), leaf_list(&["2", "1"])])
                .unwrap(),
            leaf_list(&["1", "2", "1"])
        );
        assert_eq!(
            m.apply("close", 0, &[leaf_list(&["2"])]).unwrap(),
            ListTree::List(vec![leaf_list(&["2"])])
        );
        assert!(matches!(
            m.apply("cut", 0, &[]),
            Err(ModelError::UnknownOp(_))
        ));
    }

    #[test]
    fn once_levels_and_counts() {
        let m = OnceModel::new(BuiltinTheory::NondetOnce.theory().sig, vec![g("a"), g("b")]);
        // 1 + 2 + 4 lists of length <= 2 at level 0
        assert_eq!(m.elements(0, 2, 100).unwrap().len(), 7);
        assert_eq!(m.elements(1, 2, 100).unwrap().len(), 1 + 7 + 49);
        assert!(m.elements(2, 2, 100).is_none());
        assert!(m.at_level(&leaf_list(&["a"]), 0));
        assert!(!m.at_level(&leaf_list(&["a"]), 1));
        assert!(m.at_level(&ListTree::List(vec![]), 3));
        assert!(!m.at_level(&leaf_list(&["c"]), 0));
    }

    #[test]
    fn cut_table() {
        let m = CutModel::new(BuiltinTheory::NondetCut.theory().sig, vec![g("1"), g("2")]);
        let l = |gs: &[&str], star| {
            CutTree::list(gs.iter().map(|s| CutTree::Leaf(g(s))).collect(), star)
        };
        assert_eq!(
            m.apply("or", 0, &[l(&["1"], true), l(&["2"], false)])
                .unwrap(),
            l(&["1"], true)
        );
        assert_eq!(
            m.apply("or", 0, &[l(&["1"], false), l(&["2"], true)])
                .unwrap(),
            l(&["1", "2"], true)
        );
        assert_eq!(
            m.apply("cut", 0, &[l(&["1"], true)]).unwrap(),
            l(&["1"], true)
        );
        assert_eq!(m.apply("cut", 0, &[l(&[], false)]).unwrap(), l(&[], true));
        // scope over [[1], [2]*, [1]] = or([1], or([2]*, ...)) = [1, 2]*
        let inner = CutTree::list(
            vec![l(&["1"], false), l(&["2"], true), l(&["1"], false)],
            true,
        );
        assert_eq!(m.apply("scope", 0, &[inner]).unwrap(), l(&["1", "2"], true));
        assert_eq!(m.elements(0, 1, 100).unwrap().len(), 6);
        assert_eq!(l(&["1", "2"], true).to_string(), "[1, 2]*");
    }
}
