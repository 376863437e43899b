use std::io::Write;
use std::process::{Command, Output, Stdio};

fn mapgerm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapgerm")).args(args).output().expect("run mapgerm")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mapgerm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("mapgerm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

/// Graph lines of a boundary text output (comments dropped).
fn graph_text(out: &str) -> String {
    out.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

#[test]
fn invariants_text_and_json_agree() {
    for name in ["crosscap", "S_3", "H_2", "corank2"] {
        let text = mapgerm(&["invariants", "--catalog", name]);
        assert_eq!(code(&text), 0, "{name}");
        let json = mapgerm(&["invariants", "--catalog", name, "--format", "json"]);
        assert_eq!(code(&json), 0);
        let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
        let text = stdout(&text);
        for key in ["C", "T", "L", "Omega"] {
            let line = text.lines().find(|l| l.starts_with(&format!("{key}: "))).unwrap();
            assert_eq!(line[key.len() + 2..], v[key].to_string(), "{name} {key}");
        }
    }
    let v: serde_json::Value = serde_json::from_slice(&mapgerm(&["invariants", "--catalog", "corank2", "--format", "json"]).stdout).unwrap();
    assert_eq!((v["C"].as_u64(), v["T"].as_u64(), v["L"].as_i64()), (Some(3), Some(1), Some(0)));
}

#[test]
fn invariants_from_a_germ() {
    let o = mapgerm(&["invariants", "--germ", "s; t^2; t^3 + s^4*t"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("C: 4\n"));
    let o = mapgerm(&["invariants", "--catalog", "A4-cover"]);
    assert!(stdout(&o).contains("C: 24\n"));
    let o = mapgerm(&["invariants", "--catalog", "E7-cover"]);
    assert!(stdout(&o).contains("C: 383\n"));
}

#[test]
fn exit_codes() {
    // input errors
    assert_eq!(code(&mapgerm(&["invariants", "--germ", "s; t^2"])), 2);
    assert_eq!(code(&mapgerm(&["invariants", "--catalog", "no-such-germ"])), 2);
    assert_eq!(code(&mapgerm(&["no-such-command"])), 2);
    assert_eq!(code(&mapgerm(&["resolve", "--curve", "y^2 - 2*x^2"])), 2);
    assert_eq!(code(&mapgerm(&["normalize", "/definitely/not/here"])), 2);
    assert_eq!(code(&with_stdin(&["normalize", "-"], "v1 e=-1 g=0\nv1 -- v9 +\n")), 2);
    // undecided within the cap
    assert_eq!(code(&mapgerm(&["invariants", "--catalog", "E6-cover", "--degree-cap", "3"])), 3);
    // infinite C is an answer, not a failure
    let o = mapgerm(&["invariants", "--catalog", "cuspidal-edge"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("C: infinite"));
}

#[test]
fn resolve_reducible_curve() {
    let o = mapgerm(&["resolve", "--curve", "x*y"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "v1 e=-1 g=0\narrow b1 -> v1\narrow b2 -> v1\nm b1 v1 = 1\nm b2 v1 = 1\n");
    let o = mapgerm(&["resolve", "--curve", "y^2 - x^3"]);
    let text = stdout(&o);
    assert!(text.contains("m b1 v3 = 6"), "{text}");
    let o = mapgerm(&["resolve", "--curve", "x, y^2 + x^3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["resolution"]["euler"], serde_json::json!([-3, -2, -1]));
    assert_eq!(v["resolution"]["mult"], serde_json::json!([[1, 1, 2], [2, 3, 6]]));
}

#[test]
fn boundary_checks_pass() {
    for name in ["crosscap", "S_1", "B_3", "C_4", "H_2", "F_4", "corank2"] {
        let o = mapgerm(&["boundary", "--catalog", name, "--check"]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("# check #1: PASS"));
    }
    // a mismatching expectation is a check failure
    let pairing = temp_file("id.txt", "pairing { sigma: (1)(2); vi: { {1}: -9, {2}: -9 } }\n");
    let o = mapgerm(&["boundary", "--catalog", "B_2", "--pairing", pairing.to_str().unwrap(), "--check"]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn boundary_formats() {
    let text = stdout(&mapgerm(&["boundary", "--catalog", "crosscap"]));
    assert!(text.starts_with("# sigma: (1)\n"));
    let dot = stdout(&mapgerm(&["boundary", "--catalog", "crosscap", "--format", "dot"]));
    assert!(dot.starts_with("graph plumbing {"));
    let json = mapgerm(&["boundary", "--catalog", "crosscap", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), graph_text(&text).lines().filter(|l| l.contains(" e=")).count());
}

#[test]
fn boundary_from_input_file() {
    let f = temp_file("s1.txt", "germ { s; t^2; s^2*t + t^3 }\nbranches { s + i*t; s - i*t }\n");
    let from_file = stdout(&mapgerm(&["boundary", "--input", f.to_str().unwrap()]));
    let from_catalog = stdout(&mapgerm(&["boundary", "--catalog", "S_1"]));
    assert_eq!(graph_text(&from_file), graph_text(&from_catalog));
    // a locally reducible double curve must be split by hand
    let o = mapgerm(&["boundary", "--germ", "s; t^2; s^2*t + t^3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn normalize_round_trip_is_byte_stable() {
    let boundary = graph_text(&stdout(&mapgerm(&["boundary", "--catalog", "S_1"])));
    let once = with_stdin(&["normalize", "-"], &boundary);
    assert_eq!(code(&once), 0);
    // the −1 vertex on the double edge blows down to a −4 vertex with a ⊖ loop
    assert_eq!(stdout(&once), "v1 e=-4 g=0\nv1 -- v1 -\n");
    let twice = with_stdin(&["normalize", "-"], &stdout(&once));
    assert_eq!(stdout(&twice), stdout(&once));
    for name in ["B_3", "C_5", "corank2"] {
        let g = graph_text(&stdout(&mapgerm(&["boundary", "--catalog", name])));
        let a = stdout(&with_stdin(&["normalize", "-"], &g));
        let b = stdout(&with_stdin(&["normalize", "-"], &a));
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn verify_all_passes_in_catalog_order() {
    let o = mapgerm(&["verify-all"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let names: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix("PASS")).map(|l| l.split_whitespace().next().unwrap()).collect();
    let listed: Vec<String> = stdout(&mapgerm(&["list"])).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(names, listed);
    assert!(text.ends_with(&format!("{n} entries: {n} pass, 0 fail, 0 undecided\n", n = listed.len())));
}
