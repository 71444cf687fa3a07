use std::collections::{BTreeMap, HashMap};

use super::lex::{lex, Spanned, Tok};
use super::{ParseError, ParseErrorKind, SurfaceContext};
use crate::eq::{Equation, Theory, TheoryError};
use crate::sig::{ParamArity, ScopedSignature, Signature, CLOSE};
use crate::term::{check_term, Judgement, Term};

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.at];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(kind, line, col, msg)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.err(
            ParseErrorKind::Syntax,
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn ident(&mut self) -> PResult<(String, usize, usize)> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Word(w) => {
                self.bump();
                Ok((w, line, col))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn nat(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Word(w) => match w.parse() {
                Ok(n) => {
                    self.bump();
                    Ok(n)
                }
                Err(_) => Err(self.unexpected("a natural number")),
            },
            _ => Err(self.unexpected("a natural number")),
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // ctx = comps [ "|" params ]
    fn ctx(&mut self, sig: &Signature) -> PResult<SurfaceContext> {
        let mut out = SurfaceContext::default();
        if !self.eat(&Tok::Dash) {
            loop {
                let (name, line, col) = self.ident()?;
                if sig.contains(&name) {
                    return Err(ParseError::new(
                        ParseErrorKind::Declaration,
                        line,
                        col,
                        format!("variable `{name}` has the same name as an operation"),
                    ));
                }
                if out.vars.iter().any(|(n, _)| *n == name) {
                    return Err(ParseError::new(
                        ParseErrorKind::Declaration,
                        line,
                        col,
                        format!("variable `{name}` declared twice"),
                    ));
                }
                self.expect(Tok::Colon)?;
                let m = self.nat()?;
                out.vars.push((name, m));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if self.eat(&Tok::Bar) && !self.eat(&Tok::Dash) {
            loop {
                let (name, _, _) = self.ident()?;
                out.params.push(name);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// Name resolution state for one term.
struct Scope<'a> {
    sig: &'a Signature,
    vars: HashMap<&'a str, (usize, usize)>,
    stack: Vec<String>,
    consumed: Vec<String>,
}

impl<'a> Scope<'a> {
    fn new(sig: &'a Signature, ctx: &'a SurfaceContext) -> Self {
        Scope {
            sig,
            vars: ctx
                .vars
                .iter()
                .enumerate()
                .map(|(i, (n, m))| (n.as_str(), (i, *m)))
                .collect(),
            stack: ctx.params.clone(),
            consumed: Vec::new(),
        }
    }

    /// Pops the top `given.len()` parameters, which must be `given` in order
    /// (innermost last).
    fn consume(&mut self, given: &[(String, usize, usize)]) -> PResult<Vec<String>> {
        let d = self.stack.len();
        let p = given.len();
        for (j, (name, line, col)) in given.iter().enumerate() {
            let expected = (d >= p).then(|| &self.stack[d - p + j]);
            if expected == Some(name) {
                continue;
            }
            let msg = if self.stack.contains(name) {
                format!("parameter `{name}` used out of order")
            } else if self.consumed.contains(name) {
                format!("parameter `{name}` already consumed")
            } else {
                format!("parameter `{name}` unbound")
            };
            return Err(ParseError::new(
                ParseErrorKind::ParamDiscipline,
                *line,
                *col,
                msg,
            ));
        }
        let taken = self.stack.split_off(d - p);
        self.consumed.extend(taken.iter().cloned());
        Ok(taken)
    }

    fn restore(&mut self, taken: Vec<String>, consumed_len: usize) {
        self.consumed.truncate(consumed_len);
        self.stack.extend(taken);
    }
}

fn term(p: &mut Parser, sc: &mut Scope<'_>) -> PResult<Term> {
    let (name, line, col) = p.ident()?;
    if let Some(ar) = sc.sig.arity(&name).cloned() {
        let op = sc.sig.op(&name).expect("declared");
        if ar.params == 0 && ar.conts() == 0 {
            if *p.peek() == Tok::LParen && *p.peek_at(1) == Tok::RParen {
                p.bump();
                p.bump();
            }
            return Ok(Term::App(op, Vec::new()));
        }
        if *p.peek() != Tok::LParen {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                line,
                col,
                format!("`{name}` : {ar} needs arguments"),
            ));
        }
        p.bump();
        let mut given = Vec::with_capacity(ar.params);
        for j in 0..ar.params {
            if j > 0 {
                p.expect(Tok::Comma)?;
            }
            given.push(p.ident()?);
        }
        if ar.params > 0 && !p.eat(&Tok::Semi) && ar.conts() > 0 {
            p.expect(Tok::Comma)?;
        }
        let consumed_len = sc.consumed.len();
        let taken = sc.consume(&given)?;
        let mut conts = Vec::with_capacity(ar.conts());
        for (i, &m) in ar.binders.iter().enumerate() {
            if i > 0 {
                p.expect(Tok::Comma)?;
            }
            conts.push(cont(p, sc, &name, i, m)?);
        }
        p.expect(Tok::RParen)?;
        sc.restore(taken, consumed_len);
        return Ok(Term::App(op, conts));
    }
    let Some(&(index, arity)) = sc.vars.get(name.as_str()) else {
        return Err(ParseError::new(
            ParseErrorKind::UnknownName,
            line,
            col,
            format!("unknown name `{name}`"),
        ));
    };
    let mut given = Vec::new();
    if p.eat(&Tok::LParen) && !p.eat(&Tok::RParen) {
        loop {
            given.push(p.ident()?);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        p.expect(Tok::RParen)?;
    }
    if given.len() != arity {
        return Err(ParseError::new(
            ParseErrorKind::ParamDiscipline,
            line,
            col,
            format!(
                "variable `{name}` has arity {arity} but is given {} parameters",
                given.len()
            ),
        ));
    }
    let consumed_len = sc.consumed.len();
    let taken = sc.consume(&given)?;
    if let Some(open) = sc.stack.last() {
        return Err(ParseError::new(
            ParseErrorKind::ParamDiscipline,
            line,
            col,
            format!("variable `{name}` leaves parameter `{open}` unconsumed"),
        ));
    }
    sc.restore(taken, consumed_len);
    Ok(Term::Var(index))
}

fn cont(p: &mut Parser, sc: &mut Scope<'_>, op: &str, i: usize, m: usize) -> PResult<Term> {
    let mut binders = Vec::new();
    let mut k = 0;
    while matches!(p.peek_at(k), Tok::Word(_)) {
        k += 1;
    }
    if k > 0 && *p.peek_at(k) == Tok::Dot {
        for _ in 0..k {
            binders.push(p.ident()?.0);
        }
        p.bump();
    }
    if binders.len() != m {
        return Err(p.err(
            ParseErrorKind::ParamDiscipline,
            format!(
                "continuation {} of `{op}` binds {m} parameters, {} named",
                i + 1,
                binders.len()
            ),
        ));
    }
    let base = sc.stack.len();
    sc.stack.extend(binders);
    let t = term(p, sc)?;
    sc.stack.truncate(base);
    Ok(t)
}

fn checked(sig: &Signature, ctx: &SurfaceContext, body: Term) -> PResult<Judgement> {
    let cc = ctx.comp_context();
    check_term(sig, &cc, ctx.depth(), &body).map_err(|v| {
        ParseError::new(
            ParseErrorKind::IllFormed,
            1,
            1,
            format!("term is ill-formed: {}", v[0]),
        )
    })?;
    Ok(Judgement::new_unchecked(cc, ctx.depth(), body))
}

/// Parses a context such as `x:0, y:1 | a` (or `- | -`).
pub fn parse_ctx(text: &str, sig: &Signature) -> Result<SurfaceContext, ParseError> {
    let mut p = Parser::new(text)?;
    let ctx = p.ctx(sig)?;
    p.expect_eof()?;
    Ok(ctx)
}

/// Parses a term in a context whose parameters are all open.
pub fn parse_term(
    text: &str,
    sig: &Signature,
    ctx: &SurfaceContext,
) -> Result<Judgement, ParseError> {
    let mut p = Parser::new(text)?;
    let mut sc = Scope::new(sig, ctx);
    let body = term(&mut p, &mut sc)?;
    p.expect_eof()?;
    checked(sig, ctx, body)
}

/// Parses a context and a term together.
pub fn parse_judgement(ctx: &str, term: &str, sig: &Signature) -> Result<Judgement, ParseError> {
    parse_term(term, sig, &parse_ctx(ctx, sig)?)
}

/// Parses a theory file. Operations must be declared before equations use
/// them.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut p = Parser::new(text)?;
    let mut sig = Signature::new();
    let mut eqns = Vec::new();
    let mut eq_lines = Vec::new();
    loop {
        match p.peek().clone() {
            Tok::Eof => break,
            Tok::Word(w) if w == "op" => {
                p.bump();
                let (name, line, col) = p.ident()?;
                if sig.contains(&name) {
                    return Err(ParseError::new(
                        ParseErrorKind::Declaration,
                        line,
                        col,
                        format!("operation `{name}` declared twice"),
                    ));
                }
                p.expect(Tok::Colon)?;
                p.expect(Tok::LParen)?;
                let params = p.nat()?;
                p.expect(Tok::Bar)?;
                let mut binders = Vec::new();
                if !p.eat(&Tok::Dash) {
                    loop {
                        binders.push(p.nat()?);
                        if !p.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                p.expect(Tok::RParen)?;
                sig.insert(&name, ParamArity::new(params, binders));
            }
            Tok::Word(w) if w == "eq" => {
                let (line, col) = p.here();
                p.bump();
                let label = match p.peek().clone() {
                    Tok::Label(l) => {
                        p.bump();
                        l
                    }
                    _ => String::new(),
                };
                let ctx = p.ctx(&sig)?;
                p.expect(Tok::Turnstile)?;
                let lhs = term(&mut p, &mut Scope::new(&sig, &ctx))?;
                p.expect(Tok::Equals)?;
                let rhs = term(&mut p, &mut Scope::new(&sig, &ctx))?;
                eqns.push(Equation::new(
                    label,
                    ctx.comp_context(),
                    ctx.depth(),
                    lhs,
                    rhs,
                ));
                eq_lines.push((line, col));
            }
            _ => return Err(p.unexpected("`op` or `eq`")),
        }
    }
    Theory::new(sig, eqns).map_err(|e| match e {
        TheoryError::BadEquation { index, .. } => {
            let (line, col) = eq_lines[index];
            ParseError::new(ParseErrorKind::IllFormed, line, col, e.to_string())
        }
        other => ParseError::new(ParseErrorKind::IllFormed, 1, 1, other.to_string()),
    })
}

/// Parses a scoped signature: lines `alg NAME : K` and `scoped NAME : K`.
pub fn parse_scoped_signature(text: &str) -> Result<ScopedSignature, ParseError> {
    let mut p = Parser::new(text)?;
    let mut algebraic = BTreeMap::new();
    let mut scoped = BTreeMap::new();
    loop {
        let (line, col) = p.here();
        let target = match p.peek().clone() {
            Tok::Eof => break,
            Tok::Word(w) if w == "alg" => &mut algebraic,
            Tok::Word(w) if w == "scoped" => &mut scoped,
            _ => return Err(p.unexpected("`alg` or `scoped`")),
        };
        p.bump();
        let (name, nline, ncol) = p.ident()?;
        p.expect(Tok::Colon)?;
        let k = p.nat()?;
        if name == CLOSE {
            return Err(ParseError::new(
                ParseErrorKind::Declaration,
                nline,
                ncol,
                "`close` is reserved",
            ));
        }
        if target.insert(name.clone(), k).is_some() {
            return Err(ParseError::new(
                ParseErrorKind::Declaration,
                line,
                col,
                format!("`{name}` declared twice"),
            ));
        }
    }
    if let Some(dup) = algebraic.keys().find(|n| scoped.contains_key(*n)) {
        return Err(ParseError::new(
            ParseErrorKind::Declaration,
            1,
            1,
            format!("`{dup}` is both algebraic and scoped"),
        ));
    }
    Ok(ScopedSignature { algebraic, scoped })
}
