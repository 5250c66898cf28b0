use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Workspace {
    dir: PathBuf,
}

impl Workspace {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("choicekit-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Self { dir }
    }

    fn file(&self, name: &str, content: &str) -> &Self {
        fs::write(self.dir.join(name), content).unwrap();
        self
    }

    fn run(&self, args: &[&str]) -> Output {
        self.run_with(args, None)
    }

    fn run_with(&self, args: &[&str], max_selections: Option<&str>) -> Output {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_choicekit"));
        cmd.args(args).current_dir(&self.dir).env_remove("CHOICEKIT_MAX_SELECTIONS");
        if let Some(limit) = max_selections {
            cmd.env("CHOICEKIT_MAX_SELECTIONS", limit);
        }
        cmd.output().unwrap()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

impl Drop for Workspace {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.dir);
    }
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const PARETO: &str = r#"{"cones": [{"dim": 2, "generators": [["1","0"]]}, {"dim": 2, "generators": [["0","1"]]}]}"#;
const GRID_BASIS: &str = r#"{"dim": 2, "basis": [[["1","0"]], [["0","1"]]]}"#;

#[test]
fn check_proper_verdicts() {
    let ws = Workspace::new("proper");
    ws.file("orthant.json", r#"{"dim": 2, "generators": [["1","0"],["0","1"]]}"#)
        .file("line.json", r#"{"dim": 2, "generators": [["1","0"],["-1","0"]]}"#);
    let out = ws.run(&["check-proper", "orthant.json"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "proper\n"));
    let out = ws.run(&["check-proper", "line.json"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (1, "not-blunt\n"));
}

#[test]
fn extend_reports_certificate() {
    let ws = Workspace::new("extend");
    ws.file("f.json", GRID_BASIS)
        .file("q.json", r#"[["-1","-1"]]"#)
        .file("member.json", r#"{"posi": [["1","2"],["-1","-1"]]}"#);
    let out = ws.run(&["extend", "f.json", "q.json"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (1, "non-member\n"));
    let out = ws.run(&["extend", "f.json", "q.json", "--certificate", "--output", "json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["verdict"], "non-member");
    assert_eq!(json["certificate"]["generators"], serde_json::json!([["0", "1"], ["1", "0"]]));
    let out = ws.run(&["extend", "f.json", "member.json"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "member\n"));
}

#[test]
fn choose_with_two_orders() {
    let ws = Workspace::new("choose");
    ws.file("pareto.json", PARETO).file("a.json", r#"[["0","0"],["1","0"],["0","1"]]"#);
    let out = ws.run(&["choose", "pareto.json", "a.json"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, "(0,1)\n(1,0)\n"));
}

#[test]
fn input_errors_exit_with_two() {
    let ws = Workspace::new("errors");
    ws.file("bad.json", "{ not json")
        .file("cone.json", r#"{"dim": 3, "generators": [["1","0"]]}"#)
        .file("empty.json", "[]")
        .file("pareto.json", PARETO);
    assert_eq!(code(&ws.run(&["check-proper", "bad.json"])), 2);
    assert_eq!(code(&ws.run(&["check-proper", "missing.json"])), 2);
    assert_eq!(code(&ws.run(&["check-proper", "cone.json"])), 2);
    assert_eq!(code(&ws.run(&["choose", "pareto.json", "empty.json"])), 2);
    assert_eq!(code(&ws.run(&["no-such-command"])), 2);
    let out = ws.run(&["check-proper", "bad.json"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
}

#[test]
fn selection_limit_exits_with_three() {
    let ws = Workspace::new("limit");
    ws.file(
        "f.json",
        r#"{"dim": 2, "basis": [[["1","0"],["0","1"]], [["1","0"],["0","1"]], [["1","1"],["2","1"]]]}"#,
    );
    assert_eq!(code(&ws.run(&["consistent", "f.json", "--max-selections", "7"])), 3);
    assert_eq!(code(&ws.run_with(&["consistent", "f.json"], Some("7"))), 3);
    assert_eq!(code(&ws.run_with(&["consistent", "f.json"], Some("8"))), 0);
    assert_eq!(code(&ws.run_with(&["consistent", "f.json", "--max-selections", "8"], Some("7"))), 0);
}

#[test]
fn emitted_documents_are_valid_inputs() {
    let ws = Workspace::new("roundtrip");
    ws.file("f.json", r#"{"dim": 2, "basis": [[["1","0"],["-1","1"]], [["0","1"]]]}"#)
        .file("model.json", r#"{"assessment": {"dim": 2, "basis": [[["1","0"],["-1","1"]], [["0","1"]]]}}"#)
        .file("a.json", r#"[["0","0"],["1","-1/2"],["-1","2"],["1/2","1/2"]]"#)
        .file("rules.json", r#"{"rules": [{"premises": [[["1","0"]]], "conclusion": {"openRay": {"base": ["1","0"], "direction": ["-1","-1"]}}}]}"#)
        .file("m.json", r#"[["0","1"]]"#)
        .file("params.json", r#"{"dim": 2, "probes": [["1","2"],["3","1"]]}"#);

    let represented = ws.run(&["represent", "f.json"]);
    fs::write(ws.path("cones.json"), &represented.stdout).unwrap();
    let direct = ws.run(&["choose", "model.json", "a.json"]);
    let via_cones = ws.run(&["choose", "cones.json", "a.json"]);
    assert_eq!(stdout(&direct), stdout(&via_cones));

    let chosen = ws.run(&["choose", "model.json", "a.json", "--output", "json"]);
    fs::write(ws.path("chosen.json"), &chosen.stdout).unwrap();
    let again = ws.run(&["choose", "model.json", "chosen.json"]);
    assert_eq!(stdout(&again), stdout(&direct));

    let grown = ws.run(&["monotonify", "rules.json", "m.json"]);
    assert_eq!(code(&grown), 0);
    fs::write(ws.path("grown.json"), &grown.stdout).unwrap();
    let regrown = ws.run(&["monotonify", "grown.json", "m.json"]);
    assert_eq!(code(&regrown), 0);
    assert_eq!(code(&ws.run(&["check-rules", "cones.json", "grown.json"])), code(&ws.run(&["check-rules", "cones.json", "rules.json"])));

    let rules = ws.run(&["instantiate", "coherence", "params.json"]);
    fs::write(ws.path("coherence.json"), &rules.stdout).unwrap();
    ws.file("orthant.json", r#"{"dim": 2, "generators": [["1","0"],["0","1"]]}"#);
    assert_eq!(code(&ws.run(&["check-rules", "orthant.json", "coherence.json"])), 0);
    assert_eq!(code(&ws.run(&["check-rules", "model.json", "coherence.json"])), 1);

    ws.file("single.json", r#"{"dim": 2, "generators": [["1","0"],["1","1"]]}"#)
        .file("probes.json", r#"[["1","0"],["1","1"],["0","1"],["2","1"]]"#);
    let order = ws.run(&["extract-order", "single.json", "probes.json"]);
    assert_eq!(code(&order), 0);
    fs::write(ws.path("order.json"), &order.stdout).unwrap();
    assert_eq!(stdout(&ws.run(&["check-proper", "order.json"])), "proper\n");
}

#[test]
fn verify_reports_on_stderr_only() {
    let ws = Workspace::new("verify");
    ws.file("f.json", GRID_BASIS).file("q.json", r#"[["-1","-1"],["1","1"]]"#);
    let plain = ws.run(&["extend", "f.json", "q.json"]);
    let verified = ws.run(&["extend", "f.json", "q.json", "--verify"]);
    assert_eq!(plain.stdout, verified.stdout);
    assert_eq!(code(&verified), 0);
    assert!(String::from_utf8_lossy(&verified.stderr).starts_with("verified "));
}

#[test]
fn scheme_checks() {
    let ws = Workspace::new("schemes");
    ws.file("orthant.json", r#"{"dim": 2, "generators": [["1","0"],["0","1"]]}"#)
        .file("down.json", r#"{"dim": 2, "generators": [["1","-2"],["-2","1"]]}"#);
    assert_eq!(stdout(&ws.run(&["coherent", "orthant.json"])), "true\n");
    let out = ws.run(&["coherent", "down.json", "--variant", "weak"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (1, "false\n"));
    assert_eq!(stdout(&ws.run(&["archimedean", "orthant.json"])), "false\n");
    assert_eq!(stdout(&ws.run(&["archimedean", "down.json"])), "true\n");
}

#[test]
fn workers_do_not_change_output() {
    let ws = Workspace::new("workers");
    ws.file(
        "f.json",
        r#"{"dim": 3, "basis": [[["1","0","0"],["0","1","0"],["-1","1","1"]], [["0","0","1"],["1","1","-1"]], [["1","-1","1"],["2","0","1"],["0","1","1"]]]}"#,
    )
    .file("model.json", r#"{"assessment": {"dim": 3, "basis": [[["1","0","0"],["0","1","0"],["-1","1","1"]], [["0","0","1"],["1","1","-1"]], [["1","-1","1"],["2","0","1"],["0","1","1"]]]}}"#)
    .file("a.json", r#"[["0","0","0"],["1","1","1"],["-1","2","0"],["1/2","-1","3"],["2","2","-1"]]"#);
    let path = Path::new("f.json").to_str().unwrap();
    for args in [vec!["represent", path], vec!["choose", "model.json", "a.json"]] {
        let outputs: Vec<Vec<u8>> = ["1", "2", "16"]
            .iter()
            .map(|w| {
                let mut full = args.clone();
                full.extend(["--workers", w]);
                ws.run(&full).stdout
            })
            .collect();
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}
