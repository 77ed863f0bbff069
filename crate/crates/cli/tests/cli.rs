//! End-to-end checks of the command-line driver: verb dispatch, exit codes,
//! JSON determinism and round-tripping of printed expressions.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idealcalc"))
        .args(args)
        .env_remove("IDEALCALC_SEED")
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idealcalc"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn member_exit_codes() {
    assert_eq!(code(&run(&["member", "FIN", "fin{1,2,3}"])), 0);
    assert_eq!(code(&run(&["member", "FIN", "ap(0,2)"])), 1);
    assert_eq!(
        code(&run(&[
            "member",
            "PERP(FUBINI(FIN,FIN))",
            "cols(cofin{}, cofin{})"
        ])),
        2
    );
    assert_eq!(code(&run(&["member", "FIN", "fin{1,"])), 3);
    assert_eq!(code(&run(&["member", "NOSUCH", "fin{}"])), 3);
    // Unknown verbs are usage errors, not undecidable questions.
    assert_eq!(code(&run(&["no-such-verb"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn member_retargets_generic_ideals() {
    // FIN follows the set's domain.
    let out = run(&["member", "SUM(FIN)", "cols(fin{3}, cofin{})"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("column 3"));
    let out = run(&[
        "member",
        "FUBINI(FIN, FIN)",
        "cols(fin{3}, cofin{})",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"columns\":\"fin{3}\""));
}

#[test]
fn classify_emits_cited_flags() {
    let out = run(&["classify", "P[1]", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["frechet"]["value"], serde_json::json!(true));
    assert_eq!(v["tall"]["value"], serde_json::json!(false));
    assert_eq!(v["meager"]["value"], serde_json::json!(true));
    assert!(v["meager"]["note"].as_str().unwrap().len() > 5);
    // Non-catalog expressions carry no metadata.
    assert_eq!(code(&run(&["classify", "FUBINI(FIN,FIN)"])), 3);
}

#[test]
fn katetov_counterexample() {
    let out = run(&["check-katetov", "id", "POW", "FIN"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("cofin{}"));
    assert_eq!(code(&run(&["check-katetov", "id", "FIN", "POW"])), 0);
}

#[test]
fn verify_op_reports_are_seed_deterministic() {
    let args = [
        "verify-op",
        "op(perm{0->1,1->0})",
        "FIN",
        "FIN",
        "--format",
        "json",
        "--trials",
        "60",
        "--seed",
        "99",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(
        stdout(&a),
        stdout(&b),
        "same command + seed must be byte-identical"
    );
}

#[test]
fn seed_env_variable_sets_the_default() {
    let args = [
        "verify-op",
        "op(id)",
        "FIN",
        "FIN",
        "--format",
        "json",
        "--trials",
        "40",
    ];
    let with_env = run_env(&args, "IDEALCALC_SEED", "123");
    let v: serde_json::Value = serde_json::from_str(stdout(&with_env).trim()).unwrap();
    assert_eq!(v["seed"], serde_json::json!(123));
    // An explicit flag wins over the environment.
    let mut args_flag = args.to_vec();
    args_flag.extend(["--seed", "7"]);
    let with_flag = run_env(&args_flag, "IDEALCALC_SEED", "123");
    let v: serde_json::Value = serde_json::from_str(stdout(&with_flag).trim()).unwrap();
    assert_eq!(v["seed"], serde_json::json!(7));
}

#[test]
fn limsup_prints_exact_fractions_and_minus_infinity() {
    let out = run(&["limsup", "FIN", "seq[1/2*chi(ap(0,2)) + 2*chi(fin{1})]"]);
    assert_eq!(stdout(&out).trim(), "1/2");
    let out = run(&["limsup", "POW", "seq[1*chi(ap(0,2))]"]);
    assert_eq!(stdout(&out).trim(), "-inf");
}

#[test]
fn decompose_splits_along_a_join() {
    let out = run(&[
        "decompose",
        "PERP(SUM(FIN))",
        "SUM(FIN)",
        "seq[1*chi(cols(fin{1}, cofin{})) + 1*chi(cols(cofin{1}, fin{0,1,2,3}))]",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("left"), "{text}");
    assert!(text.contains("right"), "{text}");
}

#[test]
fn iso_and_tensor_verbs() {
    let out = run(&[
        "iso-directsum",
        "SUM(FIN)",
        "seq[1*chi(cols(cofin{}, fin{0,1,2,3}))]",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("norm identity: exact"));

    let out = run(&[
        "iso-omegaperp",
        "SUM(FIN)",
        "seq[1*chi(cols(fin{0,1}, cofin{}))]",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("vanishing bound: 1"));

    let out = run(&[
        "fubini-map",
        "FIN",
        "FIN",
        "seq[1*chi(cols(fin{3}, cofin{}))]",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("kernel: false"));

    let out = run(&[
        "tensor-norm",
        "tens[seq[1*chi(ap(0,2))] x (1,1), seq[1*chi(ap(0,2))] x (1,-1)]",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).trim().starts_with('2'));
}

#[test]
fn catalog_and_perp_verbs() {
    let out = run(&["catalog", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("SUM(FIN)"));
    let out = run(&["perp", "P[w]"]);
    assert_eq!(stdout(&out).trim(), "Q[w]");
    let out = run(&["perp", "PERP(WO)"]);
    assert_eq!(stdout(&out).trim(), "WO");
}

#[test]
fn corpus_round_trips_through_the_parser() {
    let out = run(&["corpus", "(N*N)", "--limit", "500"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut count = 0;
    for line in text.lines() {
        // Every printed corpus element reparses to itself.
        let again = run(&["member", "POW", line]);
        assert_eq!(code(&again), 0, "line failed to reparse: {line}");
        count += 1;
    }
    assert!(count >= 30);
}

#[test]
fn json_reports_for_failures_carry_counterexamples() {
    let out = run(&["member", "FIN", "ap(0,2)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["verdict"], serde_json::json!("fails"));
    let out = run(&["equiv", "FIN", "POW", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["verdict"], serde_json::json!("distinguished"));
    assert!(v["counterexample"].as_str().is_some());
}
