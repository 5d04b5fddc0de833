use std::path::Path;
use std::process::Command;

use fopkit::report::{Report, Verdict, SCHEMA};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fopkit(dir: &Path, args: &[&str]) -> Run {
    fopkit_env(dir, args, &[])
}

fn fopkit_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fopkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("FOPKIT_BUDGET")
        .envs(env.iter().copied())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(dir: &Path, args: &[&str]) -> (i32, Report) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let r = fopkit(dir, &all);
    let report = Report::from_json(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout));
    assert_eq!(report.schema, SCHEMA);
    assert_eq!(i32::from(report.verdict.exit_code()), r.code);
    (r.code, report)
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        (
            "tri.fms",
            "struct tri : graph { size = 3; E = {(0,1),(0,2),(1,0),(1,2),(2,0),(2,1)}; k = 1; }\n",
        ),
        ("empty3.fms", "struct empty3 : graph { size = 3; E = {}; k = 1; }\n"),
        ("g.fms", "# a path\nstruct g : graph { size = 3; E = {(0,1),(1,2)}; k = 0; }\n"),
        ("bad.fml", "all x. E(x)\n"),
        ("f.fml", "ex x. E(x,k) & x != 0\n"),
        ("bit.fml", "all x. BIT(x,0) -> E(x,x)\n"),
        (
            "pairs.q",
            "query pairs : graph -> graph arity 2 {\n  universe: true;\n  E(x1,x2,y1,y2): E(x1,y1) & E(x2,y2);\n  k: x1 = k & x2 = k;\n}\n",
        ),
        (
            "comp.q",
            "query comp : graph -> graph arity 1 { universe: true; E: !E(x1,y1); k: x1 = k; }\n",
        ),
        (
            "custom.fms",
            "vocab path { rel R/1; const c; }\nstruct p : path { size = 2; R = {(1)}; c = 0; }\n",
        ),
    ];
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn eval_examples() {
    let dir = workspace();
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "tri.fms", "--builtin", "IS"],
    );
    assert_eq!(r.code, 1);
    assert_eq!(
        r.stdout,
        "false\nstruct tri : graph { size = 3; E = {(0,1),(0,2),(1,0),(1,2),(2,0),(2,1)}; k = 1; }\n"
    );
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "empty3.fms", "--builtin", "IS"],
    );
    assert_eq!((r.code, r.stdout.as_str()), (0, "true\n"));
    let r = fopkit(
        dir.path(),
        &[
            "eval",
            "--struct",
            "empty3.fms",
            "--builtin",
            "IS",
            "--witness",
        ],
    );
    assert_eq!(r.stdout, "true\nf = {(0,0),(1,1),(2,2)}\n");
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "tri.fms", "--formula", "bad.fml"],
    );
    assert_eq!(r.code, 2);
    assert_eq!(
        r.stderr,
        "error: bad.fml: `E` at 1:8 has arity 2, used with 1 arguments\n"
    );
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "g.fms", "--formula", "f.fml"],
    );
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (
            1,
            "false\nstruct g : graph { size = 3; E = {(0,1),(1,2)}; k = 0; }\n"
        )
    );
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "g.fms", "--builtin", "SUBGRAPHISO"],
    );
    assert_eq!(r.code, 2);
    assert!(
        r.stderr.contains("is over `sgi`, expected `graph`"),
        "{}",
        r.stderr
    );
}

#[test]
fn counterexamples_feed_back_into_eval() {
    let dir = workspace();
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "tri.fms", "--builtin", "IS"],
    );
    let payload = r.stdout.lines().nth(1).unwrap();
    std::fs::write(dir.path().join("again.fms"), payload).unwrap();
    let again = fopkit(
        dir.path(),
        &["eval", "--struct", "again.fms", "--builtin", "IS"],
    );
    assert_eq!(again.stdout, r.stdout);
}

#[test]
fn apply_examples() {
    let dir = workspace();
    let r = fopkit(
        dir.path(),
        &["apply", "--builtin", "fop_padding", "--string", "10"],
    );
    assert_eq!((r.code, r.stdout.as_str()), (0, "101\n"));
    let r = fopkit(
        dir.path(),
        &[
            "apply",
            "--builtin",
            "fop_complement",
            "--struct",
            "g.fms",
            "--out",
            "out.fms",
        ],
    );
    let expected =
        "struct g : graph { size = 3; E = {(0,0),(0,2),(1,0),(1,1),(2,0),(2,1),(2,2)}; k = 0; }\n";
    assert_eq!(r.stdout, expected);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("out.fms")).unwrap(),
        expected
    );
    let r = fopkit(
        dir.path(),
        &["apply", "--query", "comp.q", "--struct", "g.fms"],
    );
    assert_eq!(r.stdout, expected);
    let original = std::fs::read_to_string(dir.path().join("tri.fms")).unwrap();
    let r = fopkit(
        dir.path(),
        &["apply", "--builtin", "id_query", "--struct", "tri.fms"],
    );
    assert_eq!(r.stdout, original);
    let r = fopkit(
        dir.path(),
        &["apply", "--builtin", "fop_padding", "--string", "12"],
    );
    assert_eq!(r.code, 2);
    assert_eq!(r.stderr, "error: invalid bit character '2'\n");
}

#[test]
fn verify_examples() {
    let dir = workspace();
    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "reduction",
            "--fop",
            "fop_complement",
            "--source",
            "IS",
            "--target",
            "CLIQUE",
            "--max-size",
            "4",
        ],
    );
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "verified for sizes 1..=4, 263714 structures checked\n"
    );
    assert!(r.stderr.starts_with("elapsed: "));

    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "decomposition",
            "--case",
            "subgraphiso",
            "--max-size",
            "3",
        ],
    );
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout,
        "verified for sizes 1..=3, 786948 structures checked\nnote: this case uses strict thresholds\n"
    );

    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "reduction",
            "--fop",
            "fop_complement",
            "--source",
            "IS",
            "--target",
            "IS",
            "--max-size",
            "3",
        ],
    );
    assert_eq!(r.code, 1);
    assert_eq!(
        r.stdout,
        "counterexample for sizes 1..=3, 4 structures checked\n\
         struct counterexample : graph { size = 2; E = {}; k = 1; }\n  \
         A in IS: true\n  \
         fop_complement(A) in IS: false\n  \
         fop_complement(A) = struct image : graph { size = 2; E = {(0,0),(0,1),(1,0),(1,1)}; k = 1; }\n"
    );
}

#[test]
fn other_verifiers() {
    let dir = workspace();
    let strict = ["--threshold", "strict"];
    let mut args = vec![
        "verify",
        "reduction",
        "--fop",
        "fop_clique_to_sgi",
        "--source",
        "CLIQUE",
        "--target",
        "SUBGRAPHISO",
    ];
    let r = fopkit(dir.path(), &args);
    assert_eq!(r.code, 1, "verbatim thresholds do not match");
    args.extend(strict);
    assert_eq!(fopkit(dir.path(), &args).code, 0);

    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "condition-c",
            "--back",
            "query_sgi_back",
            "--fop",
            "fop_clique_to_sgi",
            "--problem",
            "CLIQUE",
        ],
    );
    assert_eq!(r.code, 0);
    let (code, rep) = json(
        dir.path(),
        &[
            "verify",
            "characteristic",
            "--beta",
            "beta_sgi",
            "--fop",
            "fop_clique_to_sgi",
            "--max-size",
            "2",
        ],
    );
    assert_eq!(code, 1);
    let cx = rep.counterexample.unwrap();
    assert_eq!(cx.memberships.len(), 2);
    assert_ne!(cx.memberships[0].value, cx.memberships[1].value);
    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "characteristic",
            "--beta",
            "beta_sgi_image",
            "--fop",
            "fop_clique_to_sgi",
        ],
    );
    assert_eq!(r.code, 0);
    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "injective",
            "--fop",
            "fop_padding",
            "--min-size",
            "2",
        ],
    );
    assert_eq!(r.code, 0);
    let r = fopkit(dir.path(), &["verify", "injective", "--fop", "fop_padding"]);
    assert_eq!(r.code, 0, "images of different lengths never collide");
}

#[test]
fn custom_decomposition_and_fast_profile() {
    let dir = workspace();
    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "decomposition",
            "--fop",
            "fop_complement",
            "--back",
            "fop_complement",
            "--psi",
            "IS",
            "--beta",
            "beta_true",
            "--target",
            "CLIQUE",
            "--print",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (sentence, verdict) = r.stdout.split_once('\n').unwrap();
    assert!(sentence.starts_with("true & (EX2 f/2 inj. "), "{sentence}");
    assert!(sentence.ends_with(" | !true & false"), "{sentence}");
    assert_eq!(
        verdict,
        "verified for sizes 1..=3, 1570 structures checked\n"
    );
    let r = fopkit(
        dir.path(),
        &[
            "verify",
            "decomposition",
            "--case",
            "subgraphiso-no-residue",
            "--fast",
        ],
    );
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("counterexample for sizes 1..=2"));
    let r = fopkit(dir.path(), &["verify", "decomposition", "--case", "nope"]);
    assert_eq!(
        (r.code, r.stderr.as_str()),
        (2, "error: no built-in named `nope`\n")
    );
}

#[test]
fn dual_examples() {
    let dir = workspace();
    let r = fopkit(
        dir.path(),
        &[
            "dual",
            "--query",
            "fop_complement",
            "--builtin",
            "IS",
            "--simplify",
        ],
    );
    assert_eq!(r.code, 0);
    let clique = fopkit_core::canonical::Library::default()
        .sentence("CLIQUE")
        .unwrap()
        .1;
    assert_eq!(r.stdout, format!("{clique}\n"));

    let r = fopkit(
        dir.path(),
        &[
            "dual",
            "--query",
            "id",
            "--formula",
            "f.fml",
            "--out",
            "d.fml",
        ],
    );
    assert_eq!(r.stdout, "ex x. E(x,k) & x != 0\n");
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "g.fms", "--formula", "d.fml"],
    );
    assert_eq!(r.code, 1);

    let r = fopkit(
        dir.path(),
        &["dual", "--query", "pairs.q", "--formula", "bit.fml"],
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("BIT"), "{}", r.stderr);

    let r = fopkit(
        dir.path(),
        &[
            "dual",
            "--query",
            "pairs.q",
            "--formula",
            "f.fml",
            "--semantic-check",
            "2",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(
        r.stdout
            .ends_with("verified for sizes 1..=2, 34 structures checked\n"),
        "{}",
        r.stdout
    );
}

#[test]
fn image_and_listing() {
    let dir = workspace();
    let r = fopkit(
        dir.path(),
        &["image", "--query", "fop_padding", "--string", "1011"],
    );
    assert_eq!((r.code, r.stdout.as_str()), (0, "101\n"));
    let r = fopkit(
        dir.path(),
        &["image", "--query", "fop_padding", "--string", "1010"],
    );
    assert_eq!(
        (r.code, r.stdout.as_str()),
        (1, "no preimage of size at most 4\n")
    );
    let r = fopkit(dir.path(), &["list"]);
    assert!(r
        .stdout
        .contains("problems: IS, CLIQUE, SUBGRAPHISO, PARITY, PARITY_PADDED"));
    let r = fopkit(dir.path(), &["show", "fop_complement"]);
    assert_eq!(
        r.stdout,
        "query fop_complement : graph -> graph arity 1 {\n  universe(x1): true;\n  E(x1,y1): !E(x1,y1);\n  k(x1): x1 = k;\n}\n"
    );
    std::fs::write(dir.path().join("shown.q"), &r.stdout).unwrap();
    let again = fopkit(
        dir.path(),
        &["apply", "--query", "shown.q", "--struct", "g.fms"],
    );
    let direct = fopkit(
        dir.path(),
        &["apply", "--builtin", "fop_complement", "--struct", "g.fms"],
    );
    assert_eq!(again.stdout, direct.stdout);
    let r = fopkit(dir.path(), &["show", "sgi"]);
    assert_eq!(r.stdout, "vocab sgi { rel F/2; rel H/2; const k; }\n");
}

#[test]
fn declared_vocabularies() {
    let dir = workspace();
    std::fs::write(dir.path().join("r.fml"), "R(max) & c = 0\n").unwrap();
    let r = fopkit(
        dir.path(),
        &["eval", "--struct", "custom.fms", "--formula", "r.fml"],
    );
    assert_eq!((r.code, r.stdout.as_str()), (0, "true\n"));
}

#[test]
fn json_reports_and_exit_codes() {
    let dir = workspace();
    let (code, r) = json(
        dir.path(),
        &["eval", "--struct", "empty3.fms", "--builtin", "IS"],
    );
    assert_eq!((code, r.verdict, r.value), (0, Verdict::Ok, Some(true)));
    let (code, r) = json(
        dir.path(),
        &[
            "verify",
            "reduction",
            "--fop",
            "fop_complement",
            "--source",
            "IS",
            "--target",
            "IS",
        ],
    );
    assert_eq!(
        (code, r.verdict, r.checked),
        (1, Verdict::Counterexample, Some(4))
    );
    let cx = r.counterexample.unwrap();
    assert!(cx.structure.starts_with("struct counterexample : graph {"));
    let (code, r) = json(
        dir.path(),
        &["eval", "--struct", "missing.fms", "--builtin", "IS"],
    );
    assert_eq!((code, r.verdict), (2, Verdict::Error));
    assert!(r.message.unwrap().starts_with("missing.fms: "));
    let round = Report::from_json(&r_json(dir.path())).unwrap();
    assert_eq!(round.command, "verify reduction");
}

fn r_json(dir: &Path) -> String {
    fopkit(
        dir,
        &[
            "--json",
            "verify",
            "reduction",
            "--fop",
            "fop_complement",
            "--source",
            "IS",
            "--target",
            "CLIQUE",
        ],
    )
    .stdout
}

#[test]
fn budget_and_usage_errors() {
    let dir = workspace();
    let r = fopkit_env(
        dir.path(),
        &[
            "verify",
            "reduction",
            "--fop",
            "fop_complement",
            "--source",
            "IS",
            "--target",
            "CLIQUE",
            "--max-size",
            "4",
        ],
        &[("FOPKIT_BUDGET", "1000")],
    );
    assert_eq!(r.code, 2);
    assert_eq!(
        r.stderr,
        "error: 263714 structures to check, over the budget of 1000; try a smaller bound such as 3\n"
    );
    let r = fopkit_env(
        dir.path(),
        &["eval", "--struct", "tri.fms", "--builtin", "IS"],
        &[("FOPKIT_BUDGET", "lots")],
    );
    assert_eq!(r.code, 2);
    let r = fopkit(
        dir.path(),
        &["verify", "reduction", "--fop", "fop_complement"],
    );
    assert_eq!(r.code, 2);
    let r = fopkit(dir.path(), &["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("Usage: fopkit"));
}

#[test]
fn results_do_not_depend_on_jobs() {
    let dir = workspace();
    let args = |jobs: &'static str| -> Vec<&'static str> {
        vec![
            "--jobs",
            jobs,
            "verify",
            "decomposition",
            "--case",
            "subgraphiso-verbatim",
            "--max-size",
            "2",
        ]
    };
    let one = fopkit(dir.path(), &args("1"));
    for jobs in ["2", "5"] {
        let many = fopkit(dir.path(), &args(jobs));
        assert_eq!((many.code, &many.stdout), (one.code, &one.stdout));
    }
    assert_eq!(one.code, 1);
}
