use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Gen;
use crate::model::{ModelError, Structure};
use crate::sig::Signature;

/// A function on the state bit, tabulated. Level 0 returns a generator and
/// the final state; higher levels return the computation that runs once the
/// innermost scope is closed (paired with the state at the close, for the
/// variant where closing does not reset the state).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateVal {
    Ret([(Gen, bool); 2]),
    Fun(Box<[StateVal; 2]>),
    FunS(Box<[(StateVal, bool); 2]>),
}

impl StateVal {
    pub fn ret(g: Gen) -> Self {
        StateVal::Ret([(g.clone(), false), (g, true)])
    }

    // λs. [e_{pick(0)}, e_{pick(1)}]: builds `put` and `get`
    fn select(parts: [&StateVal; 2]) -> Option<StateVal> {
        Some(match parts {
            [StateVal::Ret(a), StateVal::Ret(b)] => StateVal::Ret([a[0].clone(), b[1].clone()]),
            [StateVal::Fun(a), StateVal::Fun(b)] => {
                StateVal::Fun(Box::new([a[0].clone(), b[1].clone()]))
            }
            [StateVal::FunS(a), StateVal::FunS(b)] => {
                StateVal::FunS(Box::new([a[0].clone(), b[1].clone()]))
            }
            _ => return None,
        })
    }

    fn constant(&self, i: usize) -> StateVal {
        match self {
            StateVal::Ret(t) => StateVal::Ret([t[i].clone(), t[i].clone()]),
            StateVal::Fun(t) => StateVal::Fun(Box::new([t[i].clone(), t[i].clone()])),
            StateVal::FunS(t) => StateVal::FunS(Box::new([t[i].clone(), t[i].clone()])),
        }
    }
}

fn bit(b: bool) -> u8 {
    b as u8
}

impl fmt::Display for StateVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateVal::Ret([(g0, b0), (g1, b1)]) => {
                write!(
                    f,
                    "{{0 -> ({g0}, {}), 1 -> ({g1}, {})}}",
                    bit(*b0),
                    bit(*b1)
                )
            }
            StateVal::Fun(t) => write!(f, "{{0 -> {}, 1 -> {}}}", t[0], t[1]),
            StateVal::FunS(t) => write!(
                f,
                "{{0 -> ({}, {}), 1 -> ({}, {})}}",
                t[0].0,
                bit(t[0].1),
                t[1].0,
                bit(t[1].1)
            ),
        }
    }
}

/// One bit of state with `local`. With `keeps_state` the carrier above
/// level 0 also records the state at each `close`, which is the model of
/// the theory without the put/close equations.
#[derive(Clone, Debug)]
pub struct StateModel {
    sig: Signature,
    gens: Vec<Gen>,
    keeps_state: bool,
}

impl StateModel {
    pub fn new(sig: Signature, gens: Vec<Gen>) -> Self {
        StateModel {
            sig,
            gens,
            keeps_state: false,
        }
    }

    pub fn keeping_state(sig: Signature, gens: Vec<Gen>) -> Self {
        StateModel {
            sig,
            gens,
            keeps_state: true,
        }
    }

    pub fn keeps_state(&self) -> bool {
        self.keeps_state
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn unit(g: Gen) -> StateVal {
        StateVal::ret(g)
    }
}

impl Structure for StateModel {
    type Value = StateVal;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: &str, level: usize, args: &[StateVal]) -> Result<StateVal, ModelError> {
        let bad = || ModelError::BadArgument {
            op: op.to_owned(),
            level,
        };
        let arg = |i: usize| args.get(i).ok_or_else(bad);
        match op {
            "put0" => Ok(arg(0)?.constant(0)),
            "put1" => Ok(arg(0)?.constant(1)),
            "get" => StateVal::select([arg(0)?, arg(1)?]).ok_or_else(bad),
            "close" => {
                let x = arg(0)?.clone();
                Ok(if self.keeps_state {
                    StateVal::FunS(Box::new([(x.clone(), false), (x, true)]))
                } else {
                    StateVal::Fun(Box::new([x.clone(), x]))
                })
            }
            "local0" | "local1" => {
                let i = usize::from(op == "local1");
                match arg(0)? {
                    StateVal::Fun(t) if !self.keeps_state => Ok(t[i].clone()),
                    StateVal::FunS(t) if self.keeps_state => Ok(t[i].0.clone()),
                    _ => Err(bad()),
                }
            }
            _ => Err(ModelError::UnknownOp(op.to_owned())),
        }
    }

    fn at_level(&self, v: &StateVal, level: usize) -> bool {
        match (v, level) {
            (StateVal::Ret(t), 0) => t.iter().all(|(g, _)| self.gens.contains(g)),
            (StateVal::Fun(t), n) if n > 0 && !self.keeps_state => {
                t.iter().all(|x| self.at_level(x, n - 1))
            }
            (StateVal::FunS(t), n) if n > 0 && self.keeps_state => {
                t.iter().all(|(x, _)| self.at_level(x, n - 1))
            }
            _ => false,
        }
    }

    fn elements(&self, level: usize, _list_cap: usize, limit: usize) -> Option<Vec<StateVal>> {
        let entries: Vec<(Gen, bool)> = self
            .gens
            .iter()
            .flat_map(|g| [(g.clone(), false), (g.clone(), true)])
            .collect();
        if entries.len().saturating_mul(entries.len()) > limit {
            return None;
        }
        let mut out: Vec<StateVal> = Vec::new();
        for a in &entries {
            for b in &entries {
                out.push(StateVal::Ret([a.clone(), b.clone()]));
            }
        }
        for _ in 0..level {
            let width = if self.keeps_state {
                2 * out.len()
            } else {
                out.len()
            };
            if width.saturating_mul(width) > limit {
                return None;
            }
            let mut next = Vec::with_capacity(width * width);
            if self.keeps_state {
                let pairs: Vec<(StateVal, bool)> = out
                    .iter()
                    .flat_map(|x| [(x.clone(), false), (x.clone(), true)])
                    .collect();
                for a in &pairs {
                    for b in &pairs {
                        next.push(StateVal::FunS(Box::new([a.clone(), b.clone()])));
                    }
                }
            } else {
                for a in &out {
                    for b in &out {
                        next.push(StateVal::Fun(Box::new([a.clone(), b.clone()])));
                    }
                }
            }
            out = next;
        }
        Some(out)
    }

    fn finite_levels(&self) -> bool {
        true
    }

    fn sample(&self, level: usize, _max_len: usize, rng: &mut ChaCha8Rng) -> StateVal {
        if level == 0 {
            let mut entry = || {
                (
                    self.gens[rng.gen_range(0..self.gens.len())].clone(),
                    rng.gen_bool(0.5),
                )
            };
            return StateVal::Ret([entry(), entry()]);
        }
        let mut inner = || self.sample(level - 1, 0, rng);
        if self.keeps_state {
            let a = (inner(), rng.gen_bool(0.5));
            let b = (self.sample(level - 1, 0, rng), rng.gen_bool(0.5));
            StateVal::FunS(Box::new([a, b]))
        } else {
            StateVal::Fun(Box::new([inner(), inner()]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eq::BuiltinTheory;

    fn model(keeps: bool, gens: &[&str]) -> StateModel {
        let gens = gens.iter().map(|s| Gen::from(*s)).collect();
        let sig = BuiltinTheory::StateLocal.theory().sig;
        if keeps {
            StateModel::keeping_state(sig, gens)
        } else {
            StateModel::new(sig, gens)
        }
    }

    #[test]
    fn carrier_sizes() {
        let m = model(false, &["a", "b"]);
        assert_eq!(m.elements(0, 0, 1 << 20).unwrap().len(), 16);
        assert_eq!(m.elements(1, 0, 1 << 20).unwrap().len(), 256);
        let m = model(false, &["a"]);
        assert_eq!(m.elements(1, 0, 100).unwrap().len(), 16);
        let p = model(true, &["a"]);
        assert_eq!(p.elements(1, 0, 100).unwrap().len(), 64);
        assert!(model(false, &["a", "b"]).elements(2, 0, 1000).is_none());
    }

    #[test]
    fn put_then_get_selects_the_branch() {
        // put1(get(x, y)) is put1(y): both sides on every level-0 pair
        let m = model(false, &["a", "b"]);
        let all = m.elements(0, 0, 100).unwrap();
        for x in &all {
            for y in &all {
                let got = m.apply("get", 0, &[x.clone(), y.clone()]).unwrap();
                let lhs = m.apply("put1", 0, &[got]).unwrap();
                assert_eq!(lhs, m.apply("put1", 0, &[y.clone()]).unwrap());
            }
        }
    }

    #[test]
    fn local_and_close() {
        let m = model(false, &["a"]);
        let x = StateVal::ret(Gen::from("a"));
        let closed = m.apply("close", 0, &[x.clone()]).unwrap();
        assert_eq!(m.apply("local1", 0, &[closed]).unwrap(), x);
        let p = model(true, &["a"]);
        let closed = p.apply("close", 0, &[x.clone()]).unwrap();
        let put = p.apply("put1", 1, &[closed.clone()]).unwrap();
        assert_ne!(put, closed);
        assert_eq!(p.apply("local0", 0, &[put]).unwrap(), x);
        assert_eq!(x.to_string(), "{0 -> (a, 0), 1 -> (a, 1)}");
    }
}
