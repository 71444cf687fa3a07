use std::path::PathBuf;

use paramscope_cli::{run, Outcome, EXIT_NEGATIVE, EXIT_OK, EXIT_PARSE, EXIT_UNKNOWN, EXIT_USAGE};

fn cli(args: &[&str]) -> Outcome {
    cli_stdin(args, "")
}

fn cli_stdin(args: &[&str], input: &str) -> Outcome {
    let mut argv = vec!["paramscope"];
    argv.extend_from_slice(args);
    run(argv, &mut input.as_bytes())
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_accepts_and_rejects() {
    let ok = cli(&[
        "check",
        "--theory",
        "nondet_once",
        "--ctx",
        "x:0 | -",
        "--term",
        "once(a. or(fail, close(a; x)))",
    ]);
    assert_eq!((ok.code, ok.stdout.as_str()), (EXIT_OK, "OK\n"));
    let bad = cli(&[
        "check",
        "--theory",
        "nondet_once",
        "--ctx",
        "x:0 | -",
        "--term",
        "close(a; x)",
    ]);
    assert_eq!(bad.code, EXIT_NEGATIVE);
    assert!(bad.stdout.contains("`a`"), "{}", bad.stdout);
    let syntax = cli(&[
        "check",
        "--theory",
        "nondet_once",
        "--ctx",
        "x:0",
        "--term",
        "or(x,",
    ]);
    assert_eq!(syntax.code, EXIT_PARSE);
}

#[test]
fn term_from_stdin() {
    let out = cli_stdin(
        &[
            "normalize",
            "--theory",
            "nondet_once",
            "--ctx",
            "x:0",
            "--term",
            "-",
        ],
        "once(a. or(close(a; x), close(a; x)))\n",
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, "or(x, fail)\n");
}

#[test]
fn eq_outcomes() {
    let derived = cli(&[
        "eq",
        "--theory",
        "nondet_once",
        "--ctx",
        "x:0",
        "--lhs",
        "once(a. close(a; x))",
        "--rhs",
        "x",
        "--steps",
        "4",
    ]);
    assert_eq!(derived.code, EXIT_OK);
    assert!(
        derived.stdout.starts_with("EQUAL (1 step)\n"),
        "{}",
        derived.stdout
    );

    let swap = [
        "--theory",
        "nondet_once",
        "--ctx",
        "x:0, y:0",
        "--lhs",
        "or(x, y)",
        "--rhs",
        "or(y, x)",
    ];
    let semantic = cli(&[&["eq"], &swap[..], &["--semantic"]].concat());
    assert_eq!(
        (semantic.code, semantic.stdout.as_str()),
        (EXIT_NEGATIVE, "UNEQUAL\n")
    );
    let search = cli(&[&["eq"], &swap[..]].concat());
    assert_eq!(
        (search.code, search.stdout.as_str()),
        (EXIT_UNKNOWN, "UNKNOWN\n")
    );
}

#[test]
fn eq_trace_replays_each_step() {
    let thy = scratch("once_minus.thy", &{
        let full = cli(&["show-theory", "--theory", "nondet_once"]).stdout;
        full.lines()
            .filter(|l| !l.contains("[once-close]"))
            .collect::<Vec<_>>()
            .join("\n")
    });
    let out = cli(&[
        "eq",
        "--theory",
        thy.to_str().unwrap(),
        "--ctx",
        "x:0",
        "--lhs",
        "once(a. close(a; x))",
        "--rhs",
        "x",
        "--steps",
        "4",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}{}", out.stdout, out.stderr);
    assert!(
        out.stdout.starts_with("EQUAL (2 steps)\n"),
        "{}",
        out.stdout
    );
    assert_eq!(
        out.stdout.lines().filter(|l| l.starts_with("  =")).count(),
        2
    );
}

#[test]
fn eval_prints_values() {
    let cut = cli(&[
        "eval",
        "--theory",
        "nondet_cut",
        "--ctx",
        "x:0, y:0",
        "--term",
        "or(x, cut(y))",
    ]);
    assert_eq!(cut.stdout, "[x, y]*\n");
    let exc = cli(&[
        "eval",
        "--theory",
        "exceptions",
        "--ctx",
        "x:0",
        "--term",
        "throw",
    ]);
    assert_eq!(exc.stdout, "e0\n");
    let state = cli(&[
        "eval",
        "--theory",
        "state_local",
        "--ctx",
        "x:0",
        "--term",
        "put1(x)",
    ]);
    assert_eq!(state.stdout, "{0 -> (x, 1), 1 -> (x, 1)}\n");
}

#[test]
fn count_and_encode() {
    let sig = scratch("once.ssig", "alg or : 2\nalg fail : 0\nscoped once : 1\n");
    let sig = sig.to_str().unwrap();
    let count = cli(&[
        "count",
        "--scoped-sig",
        sig,
        "--gens",
        "2",
        "--level",
        "1",
        "--depth",
        "3",
    ]);
    assert_eq!(count.code, EXIT_OK, "{}", count.stderr);
    assert!(
        count.stdout.trim_end().ends_with("MATCH"),
        "{}",
        count.stdout
    );
    let enc = cli(&["encode", "--scoped-sig", sig]);
    assert_eq!(enc.code, EXIT_OK);
    assert!(enc.stdout.contains("close"), "{}", enc.stdout);
}

#[test]
fn genparam_output_parses_back() {
    let out = cli(&["genparam", "--sc", "once", "--vars", "1", "--size", "1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let path = scratch("once_param.thy", &out.stdout);
    let check = cli(&[
        "check",
        "--theory",
        path.to_str().unwrap(),
        "--ctx",
        "x:0",
        "--term",
        "once(a. close(a; x))",
    ]);
    assert_eq!(check.code, EXIT_OK, "{}", check.stderr);
}

#[test]
fn model_check_reports() {
    let ok = cli(&["model-check", "--theory", "exceptions", "--offsets", "1"]);
    assert_eq!(ok.code, EXIT_OK, "{}{}", ok.stdout, ok.stderr);
    let keeping = cli(&[
        "model-check",
        "--theory",
        "state_local_noclose",
        "--offsets",
        "0",
    ]);
    assert_eq!(
        keeping.code, EXIT_OK,
        "{}{}",
        keeping.stdout, keeping.stderr
    );
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["eq", "--theory", "nondet_once"]).code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
    let unknown = cli(&["check", "--theory", "no_such_theory", "--term", "x"]);
    assert_ne!(unknown.code, EXIT_OK);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "model-check",
        "--theory",
        "nondet_once",
        "--offsets",
        "1",
        "--seed",
        "7",
    ];
    assert_eq!(cli(&args), cli(&args));
}
