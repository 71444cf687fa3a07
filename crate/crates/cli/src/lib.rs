//! Command-line front end. [`run`] does all the work and returns the exit
//! status with the text to print, so it can be tested without a process.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paramscope_core::builtin::{default_gens, AnyModel, Gen};
use paramscope_core::eq::{
    derivably_equal, generate_param_theory, once_oracle, replay, scope_oracle, ParamOracle,
    Representatives, SearchOutcome,
};
use paramscope_core::model::{check_model, CheckBudget};
use paramscope_core::syntax::{
    parse_ctx, parse_scoped_signature, parse_term, print_signature, print_term, print_theory,
    ParseErrorKind,
};
use paramscope_core::{
    count_fixedpoint, count_free_terms, decide_equal_via_model, encode_scoped_signature, eval_rho,
    normalize, parse_theory, BuiltinTheory, Judgement, ParseError, ScopedSignature, SurfaceContext,
    Theory,
};

pub const EXIT_OK: i32 = 0;
/// `check` found violations, `eq` found the sides unequal, `count` mismatched.
pub const EXIT_NEGATIVE: i32 = 1;
/// `eq` could not decide within its budget.
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(
    name = "paramscope",
    version,
    about = "Parameterized algebraic theories of scoped effects"
)]
struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct TermArgs {
    /// Builtin theory name or path to a theory file.
    #[arg(long)]
    theory: String,
    /// Context, e.g. `x:0, y:1 | a`.
    #[arg(long, default_value = "-")]
    ctx: String,
    /// Term, or `-` to read it from stdin.
    #[arg(long)]
    term: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check that a term is well-formed in its context.
    Check(TermArgs),
    /// Search for a derivation of `lhs = rhs`.
    Eq {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value = "-")]
        ctx: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Decide with the free model (builtin theories, arity-0 contexts).
        #[arg(long)]
        semantic: bool,
    },
    /// Print the normal form of a term of a builtin theory.
    Normalize(TermArgs),
    /// Print the value of a term in the free model of a builtin theory.
    Eval(TermArgs),
    /// Compare the term count with the fixed-point count.
    Count {
        #[arg(long = "scoped-sig")]
        scoped_sig: PathBuf,
        #[arg(long)]
        gens: usize,
        #[arg(long)]
        level: usize,
        /// Size bound (operation nodes).
        #[arg(long)]
        depth: usize,
    },
    /// Print the parameterized signature of a scoped signature.
    Encode {
        #[arg(long = "scoped-sig")]
        scoped_sig: PathBuf,
    },
    /// Generate the theory of a scoped operation over a base theory.
    Genparam {
        #[arg(long, default_value = "explicit_nondet")]
        base: String,
        #[arg(long, value_enum)]
        sc: ScopedOp,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 2)]
        size: usize,
        /// Use `or(x, … fail)` forms as representatives.
        #[arg(long)]
        reified: bool,
    },
    /// Print a theory in the input syntax.
    ShowTheory {
        #[arg(long)]
        theory: String,
    },
    /// Check a builtin model against its theory.
    ModelCheck {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value_t = 2)]
        gens: usize,
        #[arg(long, default_value_t = 2)]
        offsets: usize,
        #[arg(long = "list-cap", default_value_t = 3)]
        list_cap: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScopedOp {
    Once,
    Scope,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Parse(String),
    Internal(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

type Res = Result<(i32, String), Failure>;

/// Runs the command line `argv` (including the program name), reading
/// `--term -` from `stdin`.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli, stdin) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Parse(m) => (EXIT_PARSE, format!("parse error: {m}")),
                Failure::Internal(m) => (EXIT_INTERNAL, format!("internal error: {m}")),
            };
            Outcome {
                code,
                stdout: String::new(),
                stderr: format!("{msg}\n"),
            }
        }
    }
}

fn load_theory(arg: &str) -> Result<(Theory, Option<BuiltinTheory>), Failure> {
    if let Ok(b) = arg.parse::<BuiltinTheory>() {
        return Ok((b.theory(), Some(b)));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| {
        Failure::Usage(format!(
            "--theory `{arg}`: not a builtin theory and not readable: {e}"
        ))
    })?;
    Ok((
        parse_theory(&text).map_err(|e| Failure::Parse(format!("{arg}:{e}")))?,
        None,
    ))
}

fn builtin(arg: &str) -> Result<(Theory, BuiltinTheory), Failure> {
    let b = arg.parse::<BuiltinTheory>().map_err(|_| {
        let names: Vec<&str> = BuiltinTheory::ALL.iter().map(|b| b.name()).collect();
        Failure::Usage(format!("--theory must be one of {}", names.join(", ")))
    })?;
    Ok((b.theory(), b))
}

fn load_scoped_sig(path: &PathBuf) -> Result<ScopedSignature, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("--scoped-sig `{}`: {e}", path.display())))?;
    parse_scoped_signature(&text).map_err(|e| Failure::Parse(format!("{}:{e}", path.display())))
}

fn term_text(arg: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    if arg != "-" {
        return Ok(arg.to_owned());
    }
    let mut s = String::new();
    stdin
        .read_to_string(&mut s)
        .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
    Ok(s)
}

fn gens_of(ctx: &SurfaceContext) -> Vec<Gen> {
    ctx.vars
        .iter()
        .map(|(n, _)| Gen::from(n.as_str()))
        .collect()
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> Res {
    match cli.cmd {
        Cmd::Check(a) => {
            let (thy, _) = load_theory(&a.theory)?;
            let ctx = parse_ctx(&a.ctx, &thy.sig)?;
            let text = term_text(&a.term, stdin)?;
            match parse_term(&text, &thy.sig, &ctx) {
                Ok(_) => Ok((EXIT_OK, "OK\n".into())),
                Err(e)
                    if matches!(
                        e.kind,
                        ParseErrorKind::ParamDiscipline | ParseErrorKind::IllFormed
                    ) =>
                {
                    Ok((EXIT_NEGATIVE, format!("VIOLATION {e}\n")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Eq {
            theory,
            ctx,
            lhs,
            rhs,
            steps,
            semantic,
        } => eq(&theory, &ctx, &lhs, &rhs, steps, semantic, stdin),
        Cmd::Normalize(a) => {
            let (thy, b) = builtin(&a.theory)?;
            let ctx = parse_ctx(&a.ctx, &thy.sig)?;
            let j = parse_term(&term_text(&a.term, stdin)?, &thy.sig, &ctx)?;
            let nf = normalize(b, &gens_of(&ctx), &j).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok((
                EXIT_OK,
                format!("{}\n", print_term(&thy.sig, &ctx, nf.depth, &nf.body)),
            ))
        }
        Cmd::Eval(a) => {
            let (thy, b) = builtin(&a.theory)?;
            let ctx = parse_ctx(&a.ctx, &thy.sig)?;
            let j = parse_term(&term_text(&a.term, stdin)?, &thy.sig, &ctx)?;
            let v = eval_rho(b, &gens_of(&ctx), &j).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok((EXIT_OK, format!("{v}\n")))
        }
        Cmd::Count {
            scoped_sig,
            gens,
            level,
            depth,
        } => {
            let s = load_scoped_sig(&scoped_sig)?;
            let terms = count_free_terms(&s, gens, level, depth);
            let fixed = count_fixedpoint(&s, gens, level, depth);
            let verdict = if terms == fixed { "MATCH" } else { "MISMATCH" };
            let code = if terms == fixed {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            Ok((
                code,
                format!("terms: {terms}\nfixed point: {fixed}\n{verdict}\n"),
            ))
        }
        Cmd::Encode { scoped_sig } => {
            let s = load_scoped_sig(&scoped_sig)?;
            let sig = encode_scoped_signature(&s).map_err(|e| Failure::Parse(e.to_string()))?;
            Ok((EXIT_OK, print_signature(&sig)))
        }
        Cmd::Genparam {
            base,
            sc,
            vars,
            size,
            reified,
        } => {
            let (_, b) = builtin(&base)?;
            let (name, oracle): (&str, ParamOracle<'_>) = match sc {
                ScopedOp::Once => ("once", &once_oracle),
                ScopedOp::Scope => ("scope", &scope_oracle),
            };
            let reps = if reified {
                Representatives::Reified
            } else {
                Representatives::Minimal
            };
            let thy = generate_param_theory(b, name, 1, oracle, vars, size, reps)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok((EXIT_OK, print_theory(&thy)))
        }
        Cmd::ShowTheory { theory } => {
            let (thy, _) = load_theory(&theory)?;
            Ok((EXIT_OK, print_theory(&thy)))
        }
        Cmd::ModelCheck {
            theory,
            gens,
            offsets,
            list_cap,
        } => {
            let (thy, b) = builtin(&theory)?;
            let m = AnyModel::new(b, default_gens(gens));
            let budget = CheckBudget {
                list_cap,
                seed: cli.seed,
                ..CheckBudget::default()
            };
            let report = check_model(&m, &thy, offsets, &budget)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            let mut out = String::new();
            for v in report.violations.iter().take(10) {
                let env: Vec<String> = v.env.iter().map(|x| x.to_string()).collect();
                out += &format!(
                    "VIOLATION [{}] offset {}: env [{}]: {} vs {}\n",
                    v.label,
                    v.offset,
                    env.join(", "),
                    v.lhs,
                    v.rhs
                );
            }
            let mode = if report.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            };
            out += &format!(
                "{} comparisons ({mode}), {} violations\n",
                report.checked,
                report.violations.len()
            );
            Ok((
                if report.is_empty() {
                    EXIT_OK
                } else {
                    EXIT_NEGATIVE
                },
                out,
            ))
        }
    }
}

fn eq(
    theory: &str,
    ctx: &str,
    lhs: &str,
    rhs: &str,
    steps: usize,
    semantic: bool,
    stdin: &mut dyn Read,
) -> Res {
    let (thy, b) = load_theory(theory)?;
    let sctx = parse_ctx(ctx, &thy.sig)?;
    let l = parse_term(&term_text(lhs, stdin)?, &thy.sig, &sctx)?;
    let r = parse_term(&term_text(rhs, stdin)?, &thy.sig, &sctx)?;
    let mut out = String::new();
    let mut model_equal = None;
    if semantic {
        let Some(b) = b else {
            return Err(Failure::Usage("--semantic needs a builtin theory".into()));
        };
        if !l.ctx.is_truncated() {
            return Err(Failure::Usage(
                "--semantic needs a context of arity-0 variables".into(),
            ));
        }
        let same =
            decide_equal_via_model(b, &l, &r).map_err(|e| Failure::Internal(e.to_string()))?;
        if !same {
            return Ok((EXIT_NEGATIVE, "UNEQUAL\n".into()));
        }
        model_equal = Some(same);
    }
    match derivably_equal(&thy, &l, &r, steps).map_err(|e| Failure::Internal(e.to_string()))? {
        SearchOutcome::Equal(trace) => {
            let n = trace.len();
            out += &format!("EQUAL ({n} step{})\n", if n == 1 { "" } else { "s" });
            out += &render_trace(&thy, &sctx, &l, &r, &trace)?;
            Ok((EXIT_OK, out))
        }
        SearchOutcome::Unknown if model_equal == Some(true) => {
            out += "EQUAL (in the free model; no derivation found within the step bound)\n";
            Ok((EXIT_OK, out))
        }
        SearchOutcome::Unknown => Ok((EXIT_UNKNOWN, "UNKNOWN\n".into())),
    }
}

fn render_trace(
    thy: &Theory,
    ctx: &SurfaceContext,
    l: &Judgement,
    r: &Judgement,
    trace: &paramscope_core::eq::DerivationTrace,
) -> Result<String, Failure> {
    let terms = replay(thy, l, trace, &r.body)
        .map_err(|e| Failure::Internal(format!("trace does not replay: {e}")))?;
    let show = |t| print_term(&thy.sig, ctx, l.depth, t);
    let mut out = format!("  {}\n", show(&terms[0]));
    for (step, t) in trace.steps.iter().zip(&terms[1..]) {
        let e = &thy.eqns[step.equation];
        let pos = if step.position.is_empty() {
            "root".to_owned()
        } else {
            step.position
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        out += &format!(
            "  = {}    [{}] {} at {pos}\n",
            show(t),
            e.label,
            step.direction
        );
    }
    Ok(out)
}
