//! Parameterized signatures and the encoding of algebraic/scoped signatures
//! into them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Name of the scope-closing operation added by [`encode_scoped_signature`].
pub const CLOSE: &str = "close";

/// An operation name. Cheap to clone; compared by content.
pub type OpName = Arc<str>;

/// Arity `(p | m_1 … m_k)`: the operation consumes `p` parameters from the top
/// of the stack and takes `k` continuations, the i-th binding `m_i` fresh ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamArity {
    pub params: usize,
    pub binders: Vec<usize>,
}

impl ParamArity {
    pub fn new(params: usize, binders: impl Into<Vec<usize>>) -> Self {
        ParamArity {
            params,
            binders: binders.into(),
        }
    }

    /// `(0 | 0,…,0)` with `k` continuations.
    pub fn algebraic(k: usize) -> Self {
        ParamArity::new(0, vec![0; k])
    }

    /// `(0 | 1,…,1)` with `k` continuations.
    pub fn scoped(k: usize) -> Self {
        ParamArity::new(0, vec![1; k])
    }

    /// `(1 | 0)`.
    pub fn closer() -> Self {
        ParamArity::new(1, vec![0])
    }

    pub fn conts(&self) -> usize {
        self.binders.len()
    }
}

impl fmt::Display for ParamArity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | ", self.params)?;
        if self.binders.is_empty() {
            f.write_str("-")?;
        } else {
            for (i, m) in self.binders.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{m}")?;
            }
        }
        f.write_str(")")
    }
}

/// Problems found by [`validate_declarations`] and [`Signature::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SigViolation {
    #[error("operation `{0}` declared more than once")]
    Duplicate(String),
    #[error("`{0}` is not a valid operation name")]
    BadName(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SigError {
    #[error("`close` is reserved and cannot be declared in a scoped signature")]
    ReservedName,
    #[error("`{0}` is declared both as an algebraic and as a scoped operation")]
    Duplicate(String),
    #[error("invalid signature: {0:?}")]
    Invalid(Vec<SigViolation>),
}

/// True for nonempty tokens over `[A-Za-z0-9_']`.
pub fn is_token(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// A finite set of named operations with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    ops: BTreeMap<OpName, ParamArity>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a signature from declarations, rejecting duplicates and bad names.
    pub fn from_decls<I, S>(decls: I) -> Result<Self, SigError>
    where
        I: IntoIterator<Item = (S, ParamArity)>,
        S: AsRef<str>,
    {
        let decls: Vec<(String, ParamArity)> = decls
            .into_iter()
            .map(|(n, a)| (n.as_ref().to_owned(), a))
            .collect();
        let report = validate_declarations(&decls);
        if !report.is_empty() {
            return Err(SigError::Invalid(report));
        }
        let mut sig = Signature::new();
        for (name, arity) in decls {
            sig.ops.insert(name.into(), arity);
        }
        Ok(sig)
    }

    /// Adds or replaces an operation.
    pub fn insert(&mut self, name: &str, arity: ParamArity) {
        self.ops.insert(name.into(), arity);
    }

    pub fn arity(&self, name: &str) -> Option<&ParamArity> {
        self.ops.get(name)
    }

    /// The interned name for `name`, if declared.
    pub fn op(&self, name: &str) -> Option<OpName> {
        self.ops.get_key_value(name).map(|(k, _)| k.clone())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.ops.contains_key(name)
    }

    /// Operations in name order.
    pub fn ops(&self) -> impl Iterator<Item = (&OpName, &ParamArity)> {
        self.ops.iter()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Every invariant violation; empty iff valid.
    pub fn validate(&self) -> Vec<SigViolation> {
        self.ops
            .keys()
            .filter(|n| !is_token(n))
            .map(|n| SigViolation::BadName(n.to_string()))
            .collect()
    }
}

/// Checks a raw declaration list, the form a theory file produces before it
/// becomes a map. Duplicates are reported once per repeated name.
pub fn validate_declarations(decls: &[(String, ParamArity)]) -> Vec<SigViolation> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (name, _) in decls {
        if !is_token(name) {
            out.push(SigViolation::BadName(name.clone()));
        }
        let count = seen.entry(name.as_str()).or_insert(0usize);
        *count += 1;
        if *count == 2 {
            out.push(SigViolation::Duplicate(name.clone()));
        }
    }
    out
}

/// Algebraic and scoped operations with plain natural arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScopedSignature {
    pub algebraic: BTreeMap<String, usize>,
    pub scoped: BTreeMap<String, usize>,
}

impl ScopedSignature {
    pub fn new<A, S>(algebraic: A, scoped: S) -> Self
    where
        A: IntoIterator<Item = (&'static str, usize)>,
        S: IntoIterator<Item = (&'static str, usize)>,
    {
        ScopedSignature {
            algebraic: algebraic
                .into_iter()
                .map(|(n, k)| (n.to_owned(), k))
                .collect(),
            scoped: scoped.into_iter().map(|(n, k)| (n.to_owned(), k)).collect(),
        }
    }

    /// Explicit nondeterminism with `once`.
    pub fn once() -> Self {
        Self::new([("or", 2), ("fail", 0)], [("once", 1)])
    }

    /// Exceptions with `catch`.
    pub fn exceptions() -> Self {
        Self::new([("throw", 0)], [("catch", 2)])
    }

    /// Nondeterminism with `cut`, with `scope` as the scoped operation.
    pub fn cut() -> Self {
        Self::new([("or", 2), ("fail", 0), ("cut", 1)], [("scope", 1)])
    }
}

/// Algebraic `o:k` becomes `(0 | 0^k)`, scoped `s:k` becomes `(0 | 1^k)`, and a
/// single shared `close : (1 | 0)` is added.
pub fn encode_scoped_signature(s: &ScopedSignature) -> Result<Signature, SigError> {
    if s.algebraic.contains_key(CLOSE) || s.scoped.contains_key(CLOSE) {
        return Err(SigError::ReservedName);
    }
    if let Some(dup) = s.algebraic.keys().find(|n| s.scoped.contains_key(*n)) {
        return Err(SigError::Duplicate(dup.clone()));
    }
    let decls = s
        .algebraic
        .iter()
        .map(|(n, &k)| (n.as_str(), ParamArity::algebraic(k)))
        .chain(
            s.scoped
                .iter()
                .map(|(n, &k)| (n.as_str(), ParamArity::scoped(k))),
        )
        .chain(std::iter::once((CLOSE, ParamArity::closer())));
    Signature::from_decls(decls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arity_of(sig: &Signature, name: &str) -> ParamArity {
        sig.arity(name).cloned().unwrap()
    }

    #[test]
    fn encodes_once_signature() {
        let sig = encode_scoped_signature(&ScopedSignature::once()).unwrap();
        assert_eq!(sig.len(), 4);
        assert_eq!(arity_of(&sig, "or"), ParamArity::new(0, [0, 0]));
        assert_eq!(arity_of(&sig, "fail"), ParamArity::new(0, []));
        assert_eq!(arity_of(&sig, "once"), ParamArity::new(0, [1]));
        assert_eq!(arity_of(&sig, "close"), ParamArity::new(1, [0]));
    }

    #[test]
    fn empty_scoped_signature_still_gets_close() {
        let sig = encode_scoped_signature(&ScopedSignature::default()).unwrap();
        assert_eq!(sig.len(), 1);
        assert_eq!(arity_of(&sig, CLOSE), ParamArity::closer());
    }

    #[test]
    fn encodes_catch_signature() {
        let sig = encode_scoped_signature(&ScopedSignature::exceptions()).unwrap();
        assert_eq!(arity_of(&sig, "throw").to_string(), "(0 | -)");
        assert_eq!(arity_of(&sig, "catch").to_string(), "(0 | 1, 1)");
        assert_eq!(sig.len(), 3);
    }

    #[test]
    fn rejects_reserved_and_duplicate_names() {
        let s = ScopedSignature::new([("close", 1)], []);
        assert_eq!(encode_scoped_signature(&s), Err(SigError::ReservedName));
        let s = ScopedSignature::new([("op", 1)], [("op", 1)]);
        assert_eq!(
            encode_scoped_signature(&s),
            Err(SigError::Duplicate("op".into()))
        );
    }

    #[test]
    fn validation_reports() {
        let ok = vec![("or".to_string(), ParamArity::algebraic(2))];
        assert!(validate_declarations(&ok).is_empty());

        let dup = vec![
            ("or".to_string(), ParamArity::algebraic(2)),
            ("or".to_string(), ParamArity::algebraic(1)),
        ];
        assert_eq!(
            validate_declarations(&dup),
            vec![SigViolation::Duplicate("or".into())]
        );

        // several closers are fine in a raw signature
        let sig = Signature::from_decls([
            ("close", ParamArity::closer()),
            ("close2", ParamArity::closer()),
        ])
        .unwrap();
        assert!(sig.validate().is_empty());

        let bad = vec![("a b".to_string(), ParamArity::algebraic(0))];
        assert_eq!(
            validate_declarations(&bad),
            vec![SigViolation::BadName("a b".into())]
        );
    }

    #[test]
    fn raw_signatures_allow_mixed_valences() {
        let sig = Signature::from_decls([("varcatch", ParamArity::new(0, [1, 0]))]).unwrap();
        assert_eq!(arity_of(&sig, "varcatch").to_string(), "(0 | 1, 0)");
    }

    fn scoped_sig() -> impl Strategy<Value = ScopedSignature> {
        (
            prop::collection::btree_map("[a-m]{1,3}", 0usize..4, 0..4),
            prop::collection::btree_map("[n-z]{1,3}", 0usize..4, 0..4),
        )
            .prop_map(|(algebraic, scoped)| ScopedSignature { algebraic, scoped })
    }

    proptest! {
        #[test]
        fn encoded_arities_have_the_three_shapes(s in scoped_sig()) {
            let sig = encode_scoped_signature(&s).unwrap();
            prop_assert_eq!(sig.len(), s.algebraic.len() + s.scoped.len() + 1);
            for (name, a) in sig.ops() {
                let shape_ok = (a.params == 0 && a.binders.iter().all(|&m| m == 0))
                    || (a.params == 0 && a.binders.iter().all(|&m| m == 1))
                    || (a.params == 1 && a.binders == [0]);
                prop_assert!(shape_ok, "{} has {}", name, a);
            }
        }

        #[test]
        fn encoding_is_injective_on_arities(a in scoped_sig(), b in scoped_sig()) {
            let (ea, eb) = (encode_scoped_signature(&a).unwrap(), encode_scoped_signature(&b).unwrap());
            if a != b {
                prop_assert_ne!(ea, eb);
            }
        }
    }
}
