use std::collections::HashMap;

use crate::enumerate::compositions;
use crate::sig::{encode_scoped_signature, ScopedSignature, Signature};

/// Well-formed terms of the encoded signature at level `level` over
/// `gens` variables of arity 0, with at most `max_size` `App` nodes.
pub fn count_free_terms(s: &ScopedSignature, gens: usize, level: usize, max_size: usize) -> u128 {
    let sig = encode_scoped_signature(s).expect("valid scoped signature");
    let mut memo = HashMap::new();
    (0..=max_size)
        .map(|k| exact(&sig, gens, level, k, &mut memo))
        .sum()
}

fn exact(
    sig: &Signature,
    gens: usize,
    depth: usize,
    size: usize,
    memo: &mut HashMap<(usize, usize), u128>,
) -> u128 {
    if size == 0 {
        return if depth == 0 { gens as u128 } else { 0 };
    }
    if let Some(&n) = memo.get(&(depth, size)) {
        return n;
    }
    let mut total = 0u128;
    for (_, ar) in sig.ops() {
        if ar.params > depth {
            continue;
        }
        let base = depth - ar.params;
        for split in compositions(size - 1, ar.conts()) {
            let mut prod = 1u128;
            for (&s, &m) in split.iter().zip(&ar.binders) {
                prod = prod.saturating_mul(exact(sig, gens, base + m, s, memo));
                if prod == 0 {
                    break;
                }
            }
            total = total.saturating_add(prod);
        }
    }
    memo.insert((depth, size), total);
    total
}

// Power series in the size variable, truncated at a fixed degree.
type Series = Vec<u128>;

fn mul(a: &Series, b: &Series) -> Series {
    let mut out = vec![0u128; a.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(a.len() - i) {
            out[i + j] = out[i + j].saturating_add(x.saturating_mul(y));
        }
    }
    out
}

fn pow(a: &Series, k: usize) -> Series {
    let mut out = vec![0u128; a.len()];
    out[0] = 1;
    for _ in 0..k {
        out = mul(&out, a);
    }
    out
}

// z · a
fn shift(a: &Series) -> Series {
    let mut out = vec![0u128; a.len()];
    out[1..].copy_from_slice(&a[..a.len() - 1]);
    out
}

/// Elements at level `level` of the size-`max_size` approximant of the least
/// fixed point of `Y ↦ ↑A + Σ̄Y + Σ̄′(◁Y) + ▷Y`, where every constructor
/// costs one unit of size and generators none.
///
/// Computed by iterating the functor on size-graded counts, independently
/// of the term grammar.
pub fn count_fixedpoint(s: &ScopedSignature, gens: usize, level: usize, max_size: usize) -> u128 {
    let width = max_size + 1;
    // a subterm j levels up has at most max_size - j nodes
    let top = level + max_size + 1;
    let zero: Series = vec![0; width];
    let mut y: Vec<Series> = vec![zero.clone(); top + 1];
    for _ in 0..=max_size {
        let mut next = vec![zero.clone(); top + 1];
        for n in 0..=top {
            let mut acc = zero.clone();
            if n == 0 {
                acc[0] = gens as u128;
            }
            for &k in s.algebraic.values() {
                add(&mut acc, &shift(&pow(&y[n], k)));
            }
            let earlier = y.get(n + 1).unwrap_or(&zero);
            for &k in s.scoped.values() {
                add(&mut acc, &shift(&pow(earlier, k)));
            }
            if n >= 1 {
                add(&mut acc, &shift(&y[n - 1]));
            }
            next[n] = acc;
        }
        y = next;
    }
    y[level].iter().copied().fold(0u128, u128::saturating_add)
}

fn add(acc: &mut Series, b: &Series) {
    for (a, b) in acc.iter_mut().zip(b) {
        *a = a.saturating_add(*b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_terms;
    use crate::term::CompContext;

    #[test]
    fn once_small_cases() {
        let s = ScopedSignature::once();
        assert_eq!(count_free_terms(&s, 1, 0, 0), 1);
        assert_eq!(count_fixedpoint(&s, 1, 0, 0), 1);
        assert_eq!(count_free_terms(&s, 1, 0, 1), count_fixedpoint(&s, 1, 0, 1));
    }

    #[test]
    fn term_count_matches_enumeration() {
        for s in [
            ScopedSignature::once(),
            ScopedSignature::exceptions(),
            ScopedSignature::cut(),
        ] {
            let sig = encode_scoped_signature(&s).unwrap();
            for gens in 0..=2 {
                for level in 0..=2 {
                    let ctx = CompContext::truncated(gens);
                    let n = enumerate_terms(&sig, &ctx, level, 3).len() as u128;
                    assert_eq!(
                        count_free_terms(&s, gens, level, 3),
                        n,
                        "{s:?} {gens} {level}"
                    );
                }
            }
        }
    }

    #[test]
    fn both_counts_agree() {
        for s in [
            ScopedSignature::once(),
            ScopedSignature::exceptions(),
            ScopedSignature::cut(),
        ] {
            for gens in 0..=2 {
                for level in 0..=2 {
                    for d in 0..=4 {
                        assert_eq!(
                            count_free_terms(&s, gens, level, d),
                            count_fixedpoint(&s, gens, level, d),
                            "{s:?} gens {gens} level {level} size {d}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn empty_signature_has_only_generators_and_closes() {
        let s = ScopedSignature::default();
        // level 1: close(a; x) for each generator
        assert_eq!(count_fixedpoint(&s, 2, 1, 1), 2);
        assert_eq!(count_free_terms(&s, 2, 1, 1), 2);
    }
}
