//! Runs the built binary end to end.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orthocyc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn construct_then_verify_round_trips() {
    let cases: &[&[&str]] = &[
        &["construct", "near-linear", "--q", "31", "--k", "3"],
        &["construct", "half-index", "--q", "23"],
        &["construct", "half-index", "--q", "3"],
        &["construct", "noncyclotomic", "--q", "16"],
        &["construct", "irregular", "--q", "8"],
        &[
            "construct",
            "orthogonal-set",
            "--q",
            "61",
            "--index-list",
            "2,3,5",
        ],
        &[
            "construct",
            "strong-orthogonal-set",
            "--q",
            "61",
            "--index-list",
            "2,3",
        ],
        &["construct", "dd-ortho-linear", "--q", "31", "--k", "3"],
        &[
            "construct",
            "near-linear",
            "--q",
            "25",
            "--k",
            "3",
            "--generator",
            "17",
        ],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let out = String::from_utf8(o.stdout).unwrap();
        let v = run_stdin(&["verify", "-"], &out);
        assert_eq!(v.status.code(), Some(0), "{args:?}");
        let report = json(&v);
        for m in report["maps"].as_array().unwrap() {
            assert_eq!(m["orthomorphism"], true, "{args:?}");
        }
        if report["maps"].as_array().unwrap().len() > 1 {
            assert_eq!(report["orthogonal"], true, "{args:?}");
        }
    }
}

#[test]
fn irregular_flag_and_half_index_least_index() {
    let v = json(&run(&["construct", "irregular", "--q", "8"]));
    assert_eq!(v["irregular"], true);
    let v = json(&run(&["construct", "half-index", "--q", "13"]));
    let rec = serde_json::to_string(&v["records"]).unwrap();
    let check = json(&run_stdin(&["verify", "-"], &rec));
    assert_eq!(check["maps"][0]["least_index"], 6);
}

#[test]
fn published_pair_verifies_under_default_labelling() {
    let v = json(&run(&[
        "verify", "--q", "61", "--map", "8,31", "--map", "14,44,44",
    ]));
    assert_eq!(v["orthogonal"], true);
    assert_eq!(v["maps"][1]["least_index"], 3);
}

#[test]
fn output_is_deterministic_and_sorted() {
    let args = [
        "construct",
        "orthogonal-set",
        "--q",
        "61",
        "--index-list",
        "2,3",
    ];
    let a = run(&args).stdout;
    assert_eq!(a, run(&args).stdout);
    let text = String::from_utf8(a).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap() + "\n", text);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["search", "pair", "--q", "9", "--a", "2", "--b", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["search", "pair", "--q", "61", "--a", "2", "--b", "3"])
            .status
            .code(),
        Some(0)
    );
    let o = run(&[
        "search",
        "dd-linear",
        "--q",
        "67",
        "--d",
        "33",
        "--budget",
        "10",
    ]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert_eq!(
        run(&["construct", "half-index", "--q", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["construct", "frobnicate", "--q", "5"]).status.code(),
        Some(1)
    );
    let o = run(&["count", "near-linear", "--q", "12", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["reason_code"], "not-a-prime-power");
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn counts_and_bounds() {
    assert_eq!(
        json(&run(&["count", "near-linear", "--q", "11", "--k", "2"]))["count"],
        12
    );
    assert_eq!(
        json(&run(&["count", "dk", "--q", "7", "--k", "3"]))["count"],
        0
    );
    assert_eq!(
        json(&run(&["count", "orthomorphisms", "--q", "7"]))["count"],
        133
    );
    let p = json(&run(&["count", "linear-partners", "--q", "31", "--k", "3"]));
    assert_eq!(p["formula"], 7);
    assert_eq!(
        json(&run(&["bounds", "q0", "--k", "6", "--t", "4"]))["q0"],
        9154945
    );
    let w = json(&run(&[
        "bounds", "weil", "--q", "61", "--k", "3", "--t", "2",
    ]));
    assert_eq!(w["within_babai"], true);
    assert!(w["babai_lower"].is_string());
}

#[test]
fn reproduce_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = run(&["reproduce", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("0/0 claims pass"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "pair-q9 orthogonal-pair q=9 a=2 b=4 expect=witness\n").unwrap();
    let o = run(&["reproduce", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(4));
    let v = json(&o);
    assert_eq!(v["passed"], 0);
    assert_eq!(v["claims"][0]["actual"], "proven-empty");

    let broken = dir.path().join("broken.txt");
    std::fs::write(&broken, "x orthogonal-pair q=9\n").unwrap();
    assert_eq!(
        run(&["reproduce", broken.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn shipped_manifest_passes() {
    let o = run(&["reproduce", "--jobs", "2"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn mols_files_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mols");
    let o = run(&[
        "mols",
        "--q",
        "61",
        "--map",
        "8,31",
        "--map",
        "14,44,44",
        "--map",
        "47,11,11,11,11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let side: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("mols.json")).unwrap()).unwrap();
    assert_eq!(side["squares"], 4);
    assert_eq!(side["order"], 61);
    let squares: Vec<orthocyc::latin::LatinSquare> = (0..4)
        .map(|i| {
            let text = std::fs::read_to_string(out.join(format!("L{i}.txt"))).unwrap();
            orthocyc::latin::LatinSquare::from_text(&text).unwrap()
        })
        .collect();
    assert!(orthocyc::latin::mutually_orthogonal(&squares));

    let o = run(&["mols", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 5);

    let o = run(&["mols", "--q", "61", "--map", "8,31", "--map", "8,31"]);
    assert_eq!(o.status.code(), Some(1));
}
