use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use raag_fp::character::Character;
use raag_fp::decider::{verify_witness, Convention, Witness};
use raag_fp::graph::{Clique, Graph, Limits};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_raag-fp"))
}

fn write(dir: &Path, name: &str, value: Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_vec(&value).unwrap()).unwrap();
    path
}

struct Files {
    _dir: TempDir,
    c4: PathBuf,
    ones: PathBuf,
    path3: PathBuf,
    e1: PathBuf,
    edge: PathBuf,
    full: PathBuf,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    Files {
        c4: write(
            d,
            "c4.json",
            json!({"vertices": ["1", "2", "3", "4"], "edges": [["1", "2"], ["2", "3"], ["3", "4"], ["4", "1"]]}),
        ),
        ones: write(
            d,
            "ones.json",
            json!({"values": {"1": "1", "2": "1", "3": "1", "4": "1"}}),
        ),
        path3: write(
            d,
            "path3.json",
            json!({"vertices": ["1", "2", "3"], "edges": [["1", "2"], ["2", "3"]]}),
        ),
        e1: write(d, "e1.json", json!({"values": {"1": "1"}})),
        edge: write(
            d,
            "edge.json",
            json!({"vertices": ["a", "b"], "edges": [["a", "b"]]}),
        ),
        full: write(d, "full.json", json!({"basis": [{"a": "1"}, {"b": "1"}]})),
        _dir: dir,
    }
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out: Output = bin().args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (
        out.status.code().unwrap(),
        value,
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fp_on_the_four_cycle() {
    let f = files();
    let (code, v, _) = run(&["fp", "--graph", s(&f.c4), "--char", s(&f.ones), "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], json!(false));
    assert_eq!(
        v["witness"],
        json!({"dead_clique": [], "degree": 1, "betti": 1})
    );
    let (code, v, _) = run(&["fp", "--graph", s(&f.c4), "--char", s(&f.ones), "--n", "1"]);
    assert_eq!((code, &v["holds"]), (0, &json!(true)));
}

#[test]
fn fg_reports_the_undominated_vertex() {
    let f = files();
    let (code, v, _) = run(&["fg", "--graph", s(&f.path3), "--char", s(&f.e1)]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], json!(false));
    assert_eq!(v["reason"], json!("not dominant"));
    assert_eq!(v["vertex"], json!("3"));
}

#[test]
fn oracle_table_for_the_four_cycle() {
    let f = files();
    let (code, v, _) = run(&[
        "oracle",
        "--graph",
        s(&f.c4),
        "--char",
        s(&f.ones),
        "--n",
        "2",
        "--max-degree",
        "6",
    ]);
    assert_eq!(code, 0);
    for d in 2..=6 {
        assert_eq!(v["H"]["2"][d.to_string()], json!(1));
    }
    assert_eq!(v["C_homology"]["1"], json!(1));
    assert_eq!(v["verdict"]["holds"], json!(false));
}

#[test]
fn ideal_and_thmg_on_the_edge() {
    let f = files();
    for cmd in ["ideal", "thmg"] {
        let (code, v, _) = run(&[
            cmd,
            "--graph",
            s(&f.edge),
            "--space",
            s(&f.full),
            "--n",
            "4",
            "--exit-status",
        ]);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(v["holds"], json!(true));
    }
}

#[test]
fn crosscheck_agrees() {
    let f = files();
    let (code, v, _) = run(&["crosscheck", "--graph", s(&f.path3), "--char", s(&f.e1)]);
    assert_eq!(code, 0);
    assert_eq!(v["holds"], json!(true));
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_status_mode() {
    let f = files();
    let (code, _, _) = run(&[
        "fp",
        "--graph",
        s(&f.c4),
        "--char",
        s(&f.ones),
        "--exit-status",
    ]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&[
        "fp",
        "--graph",
        s(&f.c4),
        "--char",
        s(&f.ones),
        "--n",
        "1",
        "--exit-status",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_with_two() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let bad_graph = write(
        dir.path(),
        "bad.json",
        json!({"vertices": ["a"], "edges": [["a", "a"]]}),
    );
    let bad_char = write(dir.path(), "bad_char.json", json!({"values": {"9": "1"}}));
    let zero = write(dir.path(), "zero.json", json!({"values": {"1": "0"}}));
    let cases: Vec<Vec<&str>> = vec![
        vec!["fp", "--graph", s(&bad_graph), "--char", s(&f.ones)],
        vec!["fp", "--graph", s(&f.c4), "--char", s(&bad_char)],
        vec!["fp", "--graph", s(&f.c4), "--char", s(&zero)],
        vec!["fp", "--graph", "/nonexistent.json", "--char", s(&f.ones)],
        vec![
            "fp",
            "--graph",
            s(&f.c4),
            "--char",
            s(&f.ones),
            "--field",
            "GF:4",
        ],
        vec!["fp", "--graph", s(&f.c4)],
    ];
    for args in cases {
        let (code, _, stderr) = run(&args);
        assert_eq!(code, 2, "{args:?}: {stderr}");
        assert!(!stderr.is_empty());
    }
    let (_, _, stderr) = run(&["fp", "--graph", s(&f.c4), "--char", s(&bad_char)]);
    assert!(stderr.contains("values.9"), "{stderr}");
}

#[test]
fn selftest_examples() {
    let (code, v, _) = run(&[
        "selftest",
        "--seed",
        "1",
        "--instances",
        "100",
        "--max-vertices",
        "7",
        "--field",
        "GF:5",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["all_passed"], json!(true));
    let (code, _, _) = run(&["selftest", "--seed", "1", "--convention", "uniform"]);
    assert_ne!(code, 0);
    let (code, _, _) = run(&["selftest", "--instances", "0"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["selftest", "--seed", "minus-one"]);
    assert_eq!(code, 2);
}

#[test]
fn reports_are_byte_deterministic() {
    let f = files();
    for args in [
        vec![
            "oracle",
            "--graph",
            s(&f.c4),
            "--char",
            s(&f.ones),
            "--n",
            "3",
        ],
        vec!["ideal", "--graph", s(&f.edge), "--space", s(&f.full)],
        vec!["selftest", "--seed", "9", "--instances", "20"],
    ] {
        let a = bin().args(&args).output().unwrap().stdout;
        let b = bin().args(&args).output().unwrap().stdout;
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn text_mode_names_the_finiteness_property() {
    let f = files();
    let out = bin()
        .args([
            "fp",
            "--graph",
            s(&f.c4),
            "--char",
            s(&f.ones),
            "--output",
            "text",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("not finitely presented"), "{text}");
    let out = bin()
        .args([
            "fp",
            "--graph",
            s(&f.c4),
            "--char",
            s(&f.ones),
            "--n",
            "1",
            "--output",
            "text",
        ])
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("(finitely generated)"));
}

#[test]
fn emitted_link_witness_reverifies() {
    let f = files();
    let (_, v, _) = run(&["fp", "--graph", s(&f.c4), "--char", s(&f.ones), "--n", "3"]);
    let g = Graph::parse(&std::fs::read(&f.c4).unwrap()).unwrap();
    let chi = Character::parse(&std::fs::read(&f.ones).unwrap(), &g, None).unwrap();
    let w = &v["witness"];
    let members = w["dead_clique"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| g.index_of(n.as_str().unwrap()).unwrap())
        .collect();
    let witness = Witness::Link {
        dead_clique: Clique::new(members),
        degree: w["degree"].as_i64().unwrap() as isize,
        betti: w["betti"].as_u64().unwrap() as usize,
    };
    assert!(verify_witness(
        &g,
        chi.support(),
        chi.field(),
        &witness,
        Convention::Shifted,
        &Limits::default()
    )
    .unwrap());
}
