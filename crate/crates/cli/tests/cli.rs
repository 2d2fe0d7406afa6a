use std::process::{Command, Output};

use serde_json::Value;

fn nestsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nestsep")).args(args).env_remove("NESTSEP_BUDGET").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_out(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let o = nestsep(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("json on stdout"))
}

const SYM3: &str = r#"{"kind":"sym","n":3}"#;
const LATTICE: &str = r#"{"kind":"zoo","name":"lattice","matrix":[[2,1],[1,1]]}"#;
const INTEGERS: &str = r#"{"kind":"zoo","name":"integers"}"#;

#[test]
fn transposition_and_three_cycle_are_not_conjugate() {
    let o = nestsep(&[
        "twisted", "check", "--group", SYM3, "--phi", "id", "--psi", "id", "--g1", "(0 1)", "--g2", "(0 1 2)",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not twisted conjugate"));
}

#[test]
fn conjugate_transpositions_report_a_witness() {
    let (code, v) = json_out(&["twisted", "check", "--group", SYM3, "--g1", "(0 1)", "--g2", "(1 2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["conjugate"], true);
}

#[test]
fn lattice_singleton_separates_at_modulus_two() {
    let args = [
        "sep",
        "certify",
        "--group",
        LATTICE,
        "--target",
        r#"{"singleton":"identity"}"#,
        "--g",
        "((1,0),0)",
        "--budget",
        "8",
    ];
    let o = nestsep(&args);
    assert_eq!(o.status.code(), Some(0));
    let (_, v) = json_out(&args);
    assert_eq!(v["outcome"], "certified");
    assert_eq!(v["stage"], 0);
    assert_eq!(v["params"]["m"], 2);
    assert_eq!(v["verified"], true);
}

#[test]
fn theorem_a_on_cyclic_four() {
    let o = nestsep(&["verify", "theorem-a", "--group", r#"{"kind":"cyclic","n":4}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all data pass"));
}

#[test]
fn exhausted_budget_exits_two() {
    let args =
        ["sep", "certify", "--group", INTEGERS, "--target", r#"{"subgroup":["6"]}"#, "--g", "4", "--budget", "1"];
    let (code, v) = json_out(&args);
    assert_eq!(code, 2);
    assert_eq!(v["outcome"], "exhausted");
}

#[test]
fn budget_from_environment_and_flag_precedence() {
    let args = ["sep", "certify", "--group", INTEGERS, "--target", r#"{"subgroup":["6"]}"#, "--g", "4"];
    let env = |budget: &str, extra: &[&str]| {
        let mut all = args.to_vec();
        all.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_nestsep")).args(&all).env("NESTSEP_BUDGET", budget).output().unwrap()
    };
    assert_eq!(env("1", &[]).status.code(), Some(2));
    assert_eq!(env("1", &["--budget", "4"]).status.code(), Some(0));
    assert_eq!(env("4", &[]).status.code(), Some(0));
}

#[test]
fn element_in_finite_target_is_negative() {
    let args = ["sep", "certify", "--group", SYM3, "--target", r#"{"conjugacy_class":"(0 1)"}"#, "--g", "(1 2)"];
    assert_eq!(nestsep(&args).status.code(), Some(1));
}

#[test]
fn input_errors_exit_three_with_diagnostic() {
    for args in [
        vec!["twisted", "classes", "--group", r#"{"kind":"cyclic","n":6,"extra":1}"#],
        vec!["twisted", "check", "--group", SYM3, "--g1", "zz", "--g2", "1"],
        vec!["nest", "is-prenest", "--group", SYM3, "--pairs", "[]"],
        vec!["frobnicate"],
    ] {
        let o = nestsep(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}");
        let diag: Value = serde_json::from_slice(&o.stderr).expect("diagnostic is json");
        assert!(diag["error"].is_string() && diag["message"].is_string());
    }
}

#[test]
fn datum_commands() {
    let datum = r#"{"s1":["(0 1)","(0 1 2)"],"k1":["(0 1 2)"],"s2":["(0 1)","(0 1 2)"],"k2":["(0 1 2)"],"theta":"id"}"#;
    let (code, v) = json_out(&["nest", "from-datum", "--group", SYM3, "--datum", datum]);
    assert_eq!(code, 0);
    assert_eq!(v["size"], 18);
    assert_eq!(v["nest"].as_array().unwrap().len(), 3);
    let (code, v) = json_out(&["nest", "roundtrip", "--group", SYM3, "--datum", datum]);
    assert_eq!(code, 0);
    assert_eq!(v["roundtrip"], true);
    assert_eq!(v["hom_pair_realises_nest"], true);
}

#[test]
fn prenest_check() {
    let good = r#"[["1","1"],["(0 1)","(0 1)"]]"#;
    assert_eq!(nestsep(&["nest", "is-prenest", "--group", SYM3, "--pairs", good]).status.code(), Some(0));
    let bad = r#"[["(0 1 2)","1"]]"#;
    let (code, v) = json_out(&["nest", "is-prenest", "--group", SYM3, "--pairs", bad]);
    assert_eq!(code, 1);
    assert_eq!(v["prenest"], false);
}

#[test]
fn twisted_classes_count() {
    let (code, v) = json_out(&["twisted", "classes", "--group", SYM3]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 3);
    let (_, v) = json_out(&["twisted", "classes", "--group", SYM3, "--psi", "trivial"]);
    // [g]_{id,1} = H g: a single class
    assert_eq!(v["count"], 1);
}

#[test]
fn doublecoset_on_lattice() {
    let args =
        ["sep", "doublecoset", "--group", LATTICE, "--phi", "id", "--psi", "inner:t", "--g1", "t", "--g2", "((0,0),0)"];
    let (code, v) = json_out(&args);
    assert_eq!(code, 0);
    assert_eq!(v["converted"]["verified"], true);
    assert_eq!(v["product"]["stage"], v["converted"]["stage"]);
}

#[test]
fn doublecoset_search_stops_at_the_order_cap() {
    // with ψ = inner(t) the class of 1 is (A - I)Z^2 = Z^2, so (1,0) is inside
    let args = ["sep", "doublecoset", "--group", LATTICE, "--psi", "inner:t", "--g1", "((1,0),0)", "--g2", "1"];
    let (code, v) = json_out(&args);
    assert_eq!(code, 2);
    assert_eq!(v["product"]["outcome"], "exhausted");
    assert!(v["product"]["order_cap_at"].is_u64());
}

#[test]
fn zoo_list_names_every_entry() {
    let (code, v) = json_out(&["zoo", "list"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["integers", "lattice", "sol_lattice", "bs12", "menth"]);
}

#[test]
fn json_output_round_trips() {
    let (_, v) =
        json_out(&["sep", "certify", "--group", LATTICE, "--target", r#"{"conjugacy_class":"t"}"#, "--g", "a"]);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
}

#[test]
fn corpus_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let o = nestsep(&["corpus", "--filter", "separability", "--omit-timings", "--report", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let report: Value = serde_json::from_slice(&ra).unwrap();
    let ids: Vec<u64> =
        report["results"].as_array().unwrap().iter().map(|r| r["criterion"].as_u64().unwrap()).collect();
    assert_eq!(ids, [8, 9]);
}

#[test]
fn corpus_filter_nests_runs_only_nest_criteria() {
    let (code, v) = json_out(&["corpus", "--filter", "1", "--omit-timings"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
    assert_eq!(nestsep(&["corpus", "--filter", "nothing"]).status.code(), Some(3));
}

#[test]
fn corrupted_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("certs.jsonl");
    std::fs::write(&cache, "{not json\n").unwrap();
    let o = nestsep(&["corpus", "--filter", "8", "--cache", cache.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(!text.contains("{not json"));
    assert!(text.lines().count() >= 20);
    let o = nestsep(&["corpus", "--filter", "8", "--cache", cache.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}
