use std::fmt::Write as _;

use super::SurfaceContext;
use crate::eq::{Equation, Theory};
use crate::sig::Signature;
use crate::term::{Judgement, Term};

/// Name of the parameter at stack position `i` (0 = bottom): `a` … `z`, then
/// `a26`, `a27`, ….
pub fn param_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("a{i}")
    }
}

fn write_term(out: &mut String, sig: &Signature, ctx: &SurfaceContext, depth: usize, t: &Term) {
    match t {
        Term::Var(i) => {
            match ctx.var_name(*i) {
                Some(n) => out.push_str(n),
                None => {
                    let _ = write!(out, "#{i}");
                }
            }
            if depth > 0 {
                out.push('(');
                let names: Vec<String> = (0..depth).map(|k| name_at(ctx, k)).collect();
                out.push_str(&names.join(", "));
                out.push(')');
            }
        }
        Term::App(op, conts) => {
            out.push_str(op);
            let Some(ar) = sig
                .arity(op)
                .filter(|a| a.conts() == conts.len() && a.params <= depth)
            else {
                // Not well-formed; print the shape without parameters.
                if !conts.is_empty() {
                    out.push('(');
                    for (i, c) in conts.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_term(out, sig, ctx, depth, c);
                    }
                    out.push(')');
                }
                return;
            };
            if ar.params == 0 && conts.is_empty() {
                return;
            }
            out.push('(');
            let base = depth - ar.params;
            if ar.params > 0 {
                let names: Vec<String> = (base..depth).map(|k| name_at(ctx, k)).collect();
                out.push_str(&names.join(", "));
                out.push(';');
                if !conts.is_empty() {
                    out.push(' ');
                }
            }
            for (i, (c, &m)) in conts.iter().zip(&ar.binders).enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                if m > 0 {
                    let names: Vec<String> = (base..base + m).map(|k| name_at(ctx, k)).collect();
                    out.push_str(&names.join(" "));
                    out.push_str(". ");
                }
                write_term(out, sig, ctx, base + m, c);
            }
            out.push(')');
        }
    }
}

// Parameters declared in the context keep their names; the rest are named by
// position.
fn name_at(ctx: &SurfaceContext, k: usize) -> String {
    match ctx.params.get(k) {
        Some(n) => n.clone(),
        None => param_name(k),
    }
}

/// Prints `t` at `depth` using the names of `ctx`.
///
/// Only the context's parameters below `depth` are printed with their own
/// names; parameters bound inside `t` are named by stack position, so the
/// context should use positional names too if it might clash.
pub fn print_term(sig: &Signature, ctx: &SurfaceContext, depth: usize, t: &Term) -> String {
    let mut out = String::new();
    let ctx = SurfaceContext {
        vars: ctx.vars.clone(),
        params: ctx.params.iter().take(depth).cloned().collect(),
    };
    write_term(&mut out, sig, &ctx, depth, t);
    out
}

/// `ctx |- body` with fresh names.
pub fn print_judgement(sig: &Signature, j: &Judgement) -> String {
    let ctx = SurfaceContext::fresh(sig, &j.ctx, j.depth);
    format!("{ctx} |- {}", print_term(sig, &ctx, j.depth, &j.body))
}

/// `eq [label] ctx |- lhs = rhs`, in the theory-file format.
pub fn print_equation(sig: &Signature, e: &Equation) -> String {
    let ctx = SurfaceContext::fresh(sig, &e.ctx, e.depth);
    let mut out = String::from("eq ");
    if !e.label.is_empty() {
        let _ = write!(out, "[{}] ", e.label);
    }
    let _ = write!(
        out,
        "{ctx} |- {} = {}",
        print_term(sig, &ctx, e.depth, &e.lhs),
        print_term(sig, &ctx, e.depth, &e.rhs)
    );
    out
}

/// One `op name : (p | …)` line per operation.
pub fn print_signature(sig: &Signature) -> String {
    sig.ops().map(|(n, a)| format!("op {n} : {a}\n")).collect()
}

/// A complete theory file.
pub fn print_theory(thy: &Theory) -> String {
    let mut out = print_signature(&thy.sig);
    if !thy.eqns.is_empty() {
        out.push('\n');
    }
    for e in &thy.eqns {
        out.push_str(&print_equation(&thy.sig, e));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_terms;
    use crate::eq::BuiltinTheory;
    use crate::syntax::{parse_judgement, parse_term, parse_theory};
    use crate::term::CompContext;

    #[test]
    fn prints_binders_and_parameters() {
        let sig = BuiltinTheory::NondetOnce.theory().sig;
        let j = parse_judgement("x:0, y:1 | -", "once(p. or(close(p; x), y(p)))", &sig).unwrap();
        assert_eq!(
            print_judgement(&sig, &j),
            "x:0, y:1 | - |- once(a. or(close(a; x), y(a)))"
        );
    }

    #[test]
    fn parameters_only_and_open_context() {
        let sig = Signature::from_decls([
            ("end", crate::sig::ParamArity::new(1, [])),
            ("both", crate::sig::ParamArity::new(0, [2])),
        ])
        .unwrap();
        // operations without continuations may leave parameters below theirs
        let j = parse_judgement("- | -", "both(p q. end(q;))", &sig).unwrap();
        assert_eq!(print_judgement(&sig, &j), "- | - |- both(a b. end(b;))");
        assert!(parse_judgement("- | -", "both(p q. end(p;))", &sig).is_err());
        let j = parse_judgement("- | r", "end(r;)", &sig).unwrap();
        assert_eq!(print_judgement(&sig, &j), "- | a |- end(a;)");
    }

    #[test]
    fn theories_round_trip() {
        for b in BuiltinTheory::ALL {
            let thy = b.theory();
            let again = parse_theory(&print_theory(&thy)).unwrap();
            assert_eq!(again, thy, "{b}");
        }
    }

    #[test]
    fn parse_print_identity_on_enumerated_terms() {
        for b in [
            BuiltinTheory::NondetOnce,
            BuiltinTheory::Exceptions,
            BuiltinTheory::NondetCut,
        ] {
            let sig = b.theory().sig;
            for (ctx, depth) in [
                (CompContext::truncated(2), 0),
                (CompContext::new([0, 1]), 1),
                (CompContext::new([1, 2]), 2),
            ] {
                let surface = SurfaceContext::fresh(&sig, &ctx, depth);
                for t in enumerate_terms(&sig, &ctx, depth, 3) {
                    let text = print_term(&sig, &surface, depth, &t);
                    let back =
                        parse_term(&text, &sig, &surface).unwrap_or_else(|e| panic!("{text}: {e}"));
                    assert_eq!(back.body, t, "{text}");
                }
            }
        }
    }
}
