use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Gen;
use crate::model::{ModelError, Structure};
use crate::sig::Signature;

/// A returned generator, or `e_i`: an exception raised from inside `i` open
/// scopes. The index is kept when closing scopes, so `close` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExcVal {
    Gen(Gen),
    Throw(usize),
}

impl fmt::Display for ExcVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExcVal::Gen(g) => write!(f, "{g}"),
            ExcVal::Throw(i) => write!(f, "e{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatchModel {
    sig: Signature,
    gens: Vec<Gen>,
}

impl CatchModel {
    pub fn new(sig: Signature, gens: Vec<Gen>) -> Self {
        CatchModel { sig, gens }
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn unit(g: Gen) -> ExcVal {
        ExcVal::Gen(g)
    }
}

impl Structure for CatchModel {
    type Value = ExcVal;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn apply(&self, op: &str, level: usize, args: &[ExcVal]) -> Result<ExcVal, ModelError> {
        let bad = || ModelError::BadArgument {
            op: op.to_owned(),
            level,
        };
        match op {
            "throw" => Ok(ExcVal::Throw(level)),
            "close" => args.first().cloned().ok_or_else(bad),
            "catch" => {
                let [x, y] = args else { return Err(bad()) };
                let inner = ExcVal::Throw(level + 1);
                Ok(if *x != inner {
                    x.clone()
                } else if *y != inner {
                    y.clone()
                } else {
                    ExcVal::Throw(level)
                })
            }
            _ => Err(ModelError::UnknownOp(op.to_owned())),
        }
    }

    fn at_level(&self, v: &ExcVal, level: usize) -> bool {
        match v {
            ExcVal::Gen(g) => self.gens.contains(g),
            ExcVal::Throw(i) => *i <= level,
        }
    }

    fn elements(&self, level: usize, _list_cap: usize, limit: usize) -> Option<Vec<ExcVal>> {
        let out: Vec<ExcVal> = self
            .gens
            .iter()
            .cloned()
            .map(ExcVal::Gen)
            .chain((0..=level).map(ExcVal::Throw))
            .collect();
        (out.len() <= limit).then_some(out)
    }

    fn finite_levels(&self) -> bool {
        true
    }

    fn sample(&self, level: usize, _max_len: usize, rng: &mut ChaCha8Rng) -> ExcVal {
        let k = rng.gen_range(0..self.gens.len() + level + 1);
        match self.gens.get(k) {
            Some(g) => ExcVal::Gen(g.clone()),
            None => ExcVal::Throw(k - self.gens.len()),
        }
    }
}
