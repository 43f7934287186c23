//! End-to-end runs of the `cyclord` binary: exit codes, witnesses, and the
//! stability of the JSON reports.

use std::io::Write as _;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cyclord(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclord"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(input) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(input.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().expect("binary runs");
    Run {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", run.stdout);
    })
}

const C5: &str = r#"{"kind": "circular", "elements": ["0", "1", "2", "3", "4"]}"#;

#[test]
fn valid_cycles_pass_the_axiom_check() {
    let run = cyclord(&["check-order", "-"], Some(C5), &[]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let v = json(&run);
    assert_eq!(v["report"], "axioms: pass");
    assert_eq!(v["pass"], true);
    // The canonical relation echo round-trips through check-order itself.
    let echo = v["canonical"].to_string();
    let again = cyclord(&["check-order", "-"], Some(&echo), &[]);
    assert_eq!(again.code, 0);
    assert_eq!(json(&again)["canonical"], v["canonical"]);
}

#[test]
fn a_broken_relation_fails_with_a_named_axiom() {
    // Two triples asserting both rotations of (a, b, c): asymmetry breaks.
    let rel = r#"{
        "kind": "relation",
        "elements": ["a", "b", "c"],
        "triples": [["a", "b", "c"], ["c", "b", "a"]]
    }"#;
    let run = cyclord(&["check-order", "-"], Some(rel), &[]);
    assert_eq!(run.code, 1);
    let v = json(&run);
    assert_eq!(v["pass"], false);
    assert_eq!(v["axiom"], "Asymmetry");
    assert!(v["witness"].as_array().is_some());
}

#[test]
fn garbage_input_exits_two() {
    let run = cyclord(&["check-order", "-"], Some("not json"), &[]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("error:"));
}

#[test]
fn missing_files_exit_two() {
    let run = cyclord(&["check-order", "/nonexistent/input.json"], None, &[]);
    assert_eq!(run.code, 2);
}

const BAD4: &str = r#"{
    "domain": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
    "codomain": {"kind": "circular", "elements": ["0", "1"]},
    "table": {"0": "0", "1": "1", "2": "0", "3": "1"}
}"#;

#[test]
fn the_interleaved_two_value_map_fails_on_a_fiber() {
    let run = cyclord(&["cop-check", "-"], Some(BAD4), &[]);
    assert_eq!(run.code, 1);
    let v = json(&run);
    assert_eq!(v["report"], "cop: fail — fiber of 0 not convex");
    assert_eq!(v["witness"]["kind"], "fiber");
    assert_eq!(v["witness"]["fiber"], serde_json::json!(["0", "2"]));
}

const ROT4: &str = r#"{
    "domain": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
    "codomain": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
    "table": {"0": "1", "1": "2", "2": "3", "3": "0"}
}"#;

#[test]
fn rotations_pass_both_cop_routes() {
    let run = cyclord(&["cop-check", "-", "--via-cycles"], Some(ROT4), &[]);
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    let v = json(&run);
    assert_eq!(v["via_cycles"], true);
}

#[test]
fn tiny_budgets_exit_three() {
    let by_env = cyclord(
        &["cop-check", "-", "--via-cycles"],
        Some(ROT4),
        &[("CYCLORD_BUDGET", "3")],
    );
    assert_eq!(by_env.code, 3);
    assert!(by_env.stderr.contains("budget exceeded"));
    // The flag takes precedence over the environment.
    let by_flag = cyclord(
        &["cop-check", "-", "--via-cycles", "--budget", "1000000"],
        Some(ROT4),
        &[("CYCLORD_BUDGET", "3")],
    );
    assert_eq!(by_flag.code, 0);
}

#[test]
fn interval_intersections_report_their_case() {
    let input = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3", "4", "5"]},
        "first": ["0", "3"],
        "second": ["1", "4"]
    }"#;
    let run = cyclord(&["intersect", "-"], Some(input), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert!(v["case"].as_str().is_some());
    assert_eq!(v["components"][0]["type"], "interval");
}

#[test]
fn non_convex_member_sets_exit_one() {
    let input = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3", "4", "5"]},
        "members": ["0", "3"]
    }"#;
    let run = cyclord(&["convex", "-"], Some(input), &[]);
    assert_eq!(run.code, 1);
    assert_eq!(json(&run)["witness"], "the member set is not convex");
}

#[test]
fn complement_of_an_arc_is_the_opposite_arc() {
    let input = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3", "4", "5"]},
        "members": ["4", "5", "0", "1"]
    }"#;
    let run = cyclord(&["convex", "-", "--complement"], Some(input), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["members"], serde_json::json!(["2", "3"]));
}

#[test]
fn split_doubles_exactly_the_chosen_points() {
    let input = r#"{
        "order": {"kind": "circular", "elements": ["a", "b", "c"]},
        "split": ["b"]
    }"#;
    let run = cyclord(&["split", "-"], Some(input), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(
        v["order"]["elements"],
        serde_json::json!(["a", "b+", "b-", "c"])
    );
    assert_eq!(v["rules_ok"], true);
}

#[test]
fn not_cofinal_support_families_still_exit_zero() {
    let input = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
        "supports": [["0", "2"]]
    }"#;
    let run = cyclord(&["invlimit", "-"], Some(input), &[]);
    assert_eq!(run.code, 0);
    assert_eq!(json(&run)["cofinal"], false);
}

#[test]
fn cofinal_support_families_recover_the_host() {
    let input = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
        "supports": [["0", "2"], ["0", "1", "2", "3"]]
    }"#;
    let run = cyclord(&["invlimit", "-"], Some(input), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["cofinal"], true);
    assert_eq!(v["matches_host"], true);
    // A family missing its union is rejected as input, not as a violation.
    let undirected = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
        "supports": [["0", "2"], ["1", "3"]]
    }"#;
    let bad = cyclord(&["invlimit", "-"], Some(undirected), &[]);
    assert_eq!(bad.code, 2);
}

#[test]
fn novak_points_agree_with_the_host_bracket() {
    let input = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3", "4"]},
        "points": ["0", "2", "4"]
    }"#;
    let run = cyclord(&["novak-compare", "-"], Some(input), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["bracket"], true);
    assert_eq!(v["host_bracket"], true);
    assert_eq!(v["verified"], true);
}

const ZIGZAG: &str = r#"{
    "domain": {"kind": "linear", "elements": ["0", "1", "2", "3"]},
    "values": {"0": "0", "1": "3/2", "2": "1/2", "3": "2"}
}"#;

#[test]
fn variation_jordan_and_oscillation_agree_on_a_zigzag() {
    let run = cyclord(&["variation", "-"], Some(ZIGZAG), &[]);
    assert_eq!(run.code, 0);
    assert_eq!(json(&run)["variation"]["value"], "4");

    let run = cyclord(&["jordan", "-"], Some(ZIGZAG), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["variation"], "4");
    assert_eq!(v["recomposes"], true);
    assert_eq!(v["u"]["values"]["3"], "4");

    let run = cyclord(&["oscillation", "-", "--epsilon", "1"], Some(ZIGZAG), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["piecewise_ok"], true);
    assert!(v["count"].as_u64().unwrap() <= 5);
}

#[test]
fn circular_lifts_hold_at_every_split_point() {
    let input = r#"{
        "domain": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
        "values": {"0": "0", "1": "3/2", "2": "1/2", "3": "2"}
    }"#;
    for point in ["0", "1", "2", "3"] {
        let run = cyclord(&["variation", "-", "--lift", point], Some(input), &[]);
        assert_eq!(run.code, 0);
        assert_eq!(json(&run)["lift"]["ok"], true);
    }
}

#[test]
fn alternating_pairs_select_a_constant_subsequence() {
    let input = r#"{
        "periodic": true,
        "functions": [
            {"domain": {"kind": "linear", "elements": ["0", "1"]},
             "values": {"0": "0", "1": "1"}},
            {"domain": {"kind": "linear", "elements": ["0", "1"]},
             "values": {"0": "1", "1": "0"}}
        ]
    }"#;
    let run = cyclord(&["helly", "-", "--depth", "4"], Some(input), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["pointwise_constant"], true);
    let selected: Vec<u64> = v["selected"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    // All survivors come from one parity class of the alternating pair.
    assert!(selected.windows(2).all(|w| (w[1] - w[0]) % 2 == 0));
}

#[test]
fn the_four_bit_family_has_depth_four_at_the_quartiles() {
    let dom: Vec<String> = (0..16).map(|i| format!("\"{i}\"")).collect();
    let mut functions = Vec::new();
    for b in 0..4 {
        let vals: Vec<String> = (0..16)
            .map(|x| format!("\"{x}\": \"{}\"", (x >> (3 - b)) & 1))
            .collect();
        functions.push(format!(
            r#"{{"domain": {{"kind": "linear", "elements": [{}]}}, "values": {{{}}}}}"#,
            dom.join(", "),
            vals.join(", ")
        ));
    }
    let input = format!(r#"{{"functions": [{}]}}"#, functions.join(", "));
    let run = cyclord(&["independence", "-"], Some(&input), &[]);
    assert_eq!(run.code, 0);
    let v = json(&run);
    assert_eq!(v["depth"], 4);
    assert_eq!(v["thresholds"], serde_json::json!(["1/4", "3/4"]));
}

#[test]
fn golden_rotation_commands_reproduce_the_frozen_examples() {
    let word = cyclord(
        &[
            "sturmian", "code", "--alpha", "[0;(1)]", "--arc", "0:alpha", "--indices", "0..9",
            "--format", "text",
        ],
        None,
        &[],
    );
    assert_eq!(word.code, 0);
    assert_eq!(word.stdout.trim(), "1010110101");

    let cycle = cyclord(
        &[
            "sturmian", "cycle", "--alpha", "[0;1,1,1,...]", "--indices", "0,1,2", "--format",
            "text",
        ],
        None,
        &[],
    );
    assert_eq!(cycle.stdout.trim(), "0 2 1");

    let cmp = cyclord(
        &[
            "sturmian", "compare", "--alpha", "[0;(1)]", "-m", "2", "-n", "1", "--format", "text",
        ],
        None,
        &[],
    );
    assert_eq!(cmp.code, 0);
    assert_eq!(cmp.stdout.trim(), "less");

    let act = cyclord(
        &[
            "sturmian", "act", "--alpha", "[0;(1)]", "--indices", "0..2", "--split", "1",
            "--shift", "2",
        ],
        None,
        &[],
    );
    assert_eq!(act.code, 0);
    let v = json(&act);
    assert_eq!(v["map"]["table"]["1+"], "3+");
    assert_eq!(v["map"]["table"]["1-"], "3-");
}

#[test]
fn sturmian_budget_failures_exit_three() {
    let run = cyclord(
        &[
            "sturmian", "compare", "--alpha", "[0;(1)]", "-m", "987", "-n", "610", "--budget",
            "10",
        ],
        None,
        &[],
    );
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("budget exceeded"));
}

#[test]
fn sweeps_print_one_line_per_suite() {
    let run = cyclord(
        &["sweep", "--suite", "convex/intersect", "--n-max", "4", "--seed", "7"],
        None,
        &[],
    );
    assert_eq!(run.code, 0);
    let lines: Vec<&str> = run.stdout.trim().lines().collect();
    assert_eq!(lines[0], "sweep seed=7");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("convex/intersect"));
    assert!(lines[1].contains(" pass ("));

    let unknown = cyclord(&["sweep", "--suite", "nope"], None, &[]);
    assert_eq!(unknown.code, 2);
}

#[test]
fn dot_outputs_draw_the_requested_graphs() {
    let order = cyclord(&["check-order", "-", "--format", "dot"], Some(C5), &[]);
    assert_eq!(order.code, 0);
    assert!(order.stdout.contains("digraph cycle"));
    assert!(order.stdout.contains("\"4\" -> \"0\";"));

    let input = r#"{
        "order": {"kind": "circular", "elements": ["0", "1", "2", "3"]},
        "supports": [["0", "2"], ["0", "1", "2", "3"]]
    }"#;
    let limit = cyclord(&["invlimit", "-", "--format", "dot"], Some(input), &[]);
    assert_eq!(limit.code, 0);
    assert!(limit.stdout.contains("digraph bondings"));
    assert!(limit.stdout.contains("host -> q0"));

    let refused = cyclord(&["variation", "-", "--format", "dot"], Some(ZIGZAG), &[]);
    assert_eq!(refused.code, 2);
}
