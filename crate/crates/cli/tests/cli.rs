use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qpfu::document::FamilyDocument;
use qpfu::{parse_family, serialize_family};
use qpfu_core::pennyflip::{preset_family, Preset};
use serde_json::{json, Value};

const FAMILIES: [(&str, Preset); 7] = [
    ("example1.family", Preset::Example1),
    ("example2.family", Preset::Example2G),
    ("example2prime.family", Preset::Example2GPrime),
    ("example3.family", Preset::Example3),
    ("prop3.family", Preset::Prop3),
    ("prop4.family", Preset::Prop4),
    ("fig2.family", Preset::Fig2Message),
];

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn qpfu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpfu"))
        .args(args)
        .env_remove("QPFU_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixtures_match_the_presets() {
    for (name, preset) in FAMILIES {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(
            parse_family(&text).unwrap(),
            preset_family(preset),
            "{name}"
        );
    }
}

#[test]
fn families_round_trip() {
    for (name, preset) in FAMILIES {
        let f = preset_family(preset);
        let again = parse_family(&serialize_family(&f).unwrap()).unwrap();
        assert_eq!(again, f, "{name}");
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let doc = FamilyDocument::parse(&text).unwrap();
        let back: FamilyDocument =
            serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back, doc, "{name}");
    }
}

#[test]
fn solve_example1_reports_the_backward_solution() {
    let out = qpfu(&["solve", arg(&fixture("example1.family"))]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["schema"], "report/v1");
    assert_eq!(r["command"], "solve");
    let found = r["results"]["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| {
            let root = &e["views"][0];
            root["view"] == ""
                && root["strategies"]["1"] == json!({"a3": 1.0})
                && root["strategies"]["2"] == json!({"b1": 1.0})
                && e["modeler_payoff"] == json!([4.0, 0.0])
        });
    assert!(found);
}

#[test]
fn solve_example3_reports_hadamard_against_z() {
    let out = qpfu(&["solve", arg(&fixture("example3.family"))]);
    assert_eq!(code(&out), 0);
    let found = report(&out)["results"]["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| {
            e["views"][0]["strategies"]["1"] == json!({"HH": 1.0})
                && e["views"][0]["strategies"]["2"] == json!({"Z": 1.0})
                && (e["modeler_payoff"][0].as_f64().unwrap() + 1.0).abs() < 1e-9
        });
    assert!(found);
}

#[test]
fn constant_matching_pennies_has_a_unique_mixed_solution() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "schema": "family/v1",
        "players": [1, 2],
        "views": [],
        "otherwise": {"strategies": [["H", "T"], ["H", "T"]], "payoffs": [[1, -1], [-1, 1]]}
    });
    let path = write(dir.path(), "pennies.family", &doc.to_string());
    let r = report(&qpfu(&["solve", arg(&path)]));
    assert_eq!(r["results"]["count"], 1);
    let e = &r["results"]["equilibria"][0];
    assert_eq!(e["otherwise"]["1"], json!({"H": 0.5, "T": 0.5}));
    assert_eq!(e["otherwise"]["2"], json!({"H": 0.5, "T": 0.5}));
}

#[test]
fn exit_three_when_nothing_is_found() {
    let n = 13;
    let labels: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
    let payoffs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { -1.0 }).collect())
        .collect();
    let doc = json!({
        "schema": "family/v1",
        "players": [1, 2],
        "views": [],
        "otherwise": {"strategies": [labels, labels], "payoffs": payoffs}
    });
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "big.family", &doc.to_string());
    let out = qpfu(&["solve", arg(&path)]);
    assert_eq!(code(&out), 3);
    assert_eq!(report(&out)["results"]["count"], 0);
    let out = qpfu(&["solve", "--preset", "example1", "--max-solutions", "0"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.family",
        "{\n  \"schema\": \"family/v1\",\n  \"players\": [1, 2,\n}",
    );
    let out = qpfu(&["solve", arg(&path)]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains("line 4") && err.contains("column 1"), "{err}");
}

#[test]
fn non_canonical_views_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "schema": "family/v1",
        "players": [1, 2],
        "views": [{"view": "112", "game": "gamma1"}],
        "otherwise": "gamma2"
    });
    let path = write(dir.path(), "view.family", &doc.to_string());
    for cmd in ["solve", "validate"] {
        let out = qpfu(&[cmd, arg(&path)]);
        assert_eq!(code(&out), 2, "{cmd}");
        assert!(stderr(&out).contains("112"), "{}", stderr(&out));
    }
}

#[test]
fn superset_children_violate_property_two() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({
        "schema": "family/v1",
        "players": [1, 2],
        "views": [{"view": "", "game": "gamma2"}, {"view": "1", "game": "gamma1"}],
        "otherwise": "gamma2"
    });
    let path = write(dir.path(), "superset.family", &doc.to_string());
    let out = qpfu(&["solve", arg(&path)]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("property 2"), "{}", stderr(&out));
    let out = qpfu(&["validate", arg(&path)]);
    assert_eq!(code(&out), 2);
    let r = report(&out);
    assert_eq!(r["results"]["valid"], false);
    assert_eq!(r["results"]["violations"][0]["property"], 2);
}

#[test]
fn fixtures_validate() {
    for (name, _) in FAMILIES {
        let out = qpfu(&["validate", arg(&fixture(name))]);
        assert_eq!(code(&out), 0, "{name}");
        assert_eq!(report(&out)["results"]["valid"], true);
    }
}

fn without_timestamp(out: &Output) -> Value {
    let mut r = report(out);
    r.as_object_mut().unwrap().remove("timestamp");
    r
}

#[test]
fn reports_repeat_apart_from_the_timestamp() {
    for args in [
        vec!["verify", "lemma-v2", "--samples", "50"],
        vec!["verify", "eq65", "--samples", "2000"],
        vec!["solve", "--preset", "example3"],
    ] {
        let (a, b) = (qpfu(&args), qpfu(&args));
        assert_eq!(without_timestamp(&a), without_timestamp(&b), "{args:?}");
        let strip = |o: &Output| {
            String::from_utf8_lossy(&o.stdout)
                .lines()
                .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a), strip(&b));
    }
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let flag = report(&qpfu(&[
        "verify",
        "lemma-v2",
        "--samples",
        "5",
        "--seed",
        "7",
    ]));
    assert_eq!(flag["seed"], 7);
    let env = Command::new(env!("CARGO_BIN_EXE_qpfu"))
        .args(["verify", "lemma-v2", "--samples", "5"])
        .env("QPFU_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(
        without_timestamp(&env),
        without_timestamp(&qpfu(&[
            "verify",
            "lemma-v2",
            "--samples",
            "5",
            "--seed",
            "7"
        ]))
    );
    let other = report(&qpfu(&[
        "verify",
        "lemma-v2",
        "--samples",
        "5",
        "--seed",
        "8",
    ]));
    assert_ne!(flag["inputs_digest"], other["inputs_digest"]);
}

#[test]
fn verify_suites_pass_and_fail_with_codes() {
    for suite in [
        "lemma-v1v3",
        "lemma-v2",
        "lemma-w2",
        "eq56",
        "prop2",
        "axioms",
    ] {
        let out = qpfu(&["verify", suite, "--samples", "100"]);
        assert_eq!(code(&out), 0, "{suite}");
        assert_eq!(report(&out)["results"]["passed"], true);
    }
    let out = qpfu(&["verify", "eq65", "--samples", "100000"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(
        r["results"]["mean"].as_f64().unwrap().abs() <= r["results"]["bound"].as_f64().unwrap()
    );
    assert_eq!(r["results"]["values"].as_array().unwrap().len(), 20);
    let out = qpfu(&["verify", "lemma-v1v3", "--samples", "10", "--tol", "0"]);
    assert_eq!(code(&out), 4);
    let r = report(&out);
    assert_eq!(r["results"]["passed"], false);
    assert!(r["results"]["failures"][0]["params"]["gamma"].is_number());
}

fn payoff(u1: &str, u2: &str, u3: &str) -> Vec<f64> {
    let out = qpfu(&["payoff", "--u1", u1, "--u2", u2, "--u3", u3]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    report(&out)["results"]["payoff"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn payoff_examples() {
    for (u, expected) in [
        (["H", "I", "H"], [1.0, -1.0]),
        (["H", "Rz(pi)", "H"], [-1.0, 1.0]),
        (["I", "I", "I"], [1.0, -1.0]),
        (["V1(0, pi/2)", "X", "V1(0,pi/2)"], [1.0, -1.0]),
        (["phase(pi/3)*H", "Z", "H"], [-1.0, 1.0]),
    ] {
        let got = payoff(u[0], u[1], u[2]);
        assert!(
            (got[0] - expected[0]).abs() < 1e-12 && (got[1] - expected[1]).abs() < 1e-12,
            "{u:?}: {got:?}"
        );
    }
    let out = qpfu(&["payoff", "--u1", "H", "--u2", "Rz(", "--u3", "H"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).starts_with("error: "));
}

#[test]
fn reduce_fig1_and_example3() {
    let r = report(&qpfu(&["reduce", arg(&fixture("fig1.extensive"))]));
    assert_eq!(
        r["results"]["strategic"]["strategies"][0]
            .as_array()
            .unwrap()
            .len(),
        8
    );
    assert_eq!(
        r["results"]["reduced"]["strategies"][0]
            .as_array()
            .unwrap()
            .len(),
        4
    );
    assert_eq!(r["results"]["classes"][0][0], json!(["I1I3I4", "I1I3X4"]));

    let r = report(&qpfu(&["reduce", arg(&fixture("example3.game"))]));
    assert_eq!(
        r["results"]["classes"][0],
        json!([["II", "XX"], ["IX", "XI"], ["IH", "XH", "HI", "HX"], ["HH"]])
    );
    assert_eq!(
        r["results"]["reduced"]["payoffs"][3],
        json!([[1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])
    );

    let r = report(&qpfu(&["reduce", arg(&fixture("fig1_bottom.extensive"))]));
    assert_eq!(r["results"]["strategic"], r["results"]["reduced"]);
}

#[test]
fn text_format_is_plain() {
    let out = qpfu(&[
        "payoff", "--u1", "H", "--u2", "X", "--u3", "H", "--format", "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("payoff (1"), "{text}");
    let out = qpfu(&["verify", "axioms", "--format", "text"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .trim_end()
        .ends_with("PASS"));
}

#[test]
fn published_schemas_match_the_constants() {
    use qpfu::document::{EXTENSIVE_SCHEMA, FAMILY_SCHEMA, GAME_SCHEMA};
    use qpfu::report::REPORT_SCHEMA;
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas");
    for (file, id) in [
        ("family.schema.json", FAMILY_SCHEMA),
        ("game.schema.json", GAME_SCHEMA),
        ("extensive.schema.json", EXTENSIVE_SCHEMA),
        ("report.schema.json", REPORT_SCHEMA),
    ] {
        let schema: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join(file)).unwrap()).unwrap();
        assert_eq!(schema["$id"], id, "{file}");
    }
}
