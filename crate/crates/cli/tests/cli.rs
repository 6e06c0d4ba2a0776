use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use sailsym::cf_core::cf_from_coords;
use sailsym::intlat::IntMatrix;
use sailsym::numfield::{make_field, IntPolynomial, Labeling};
use sailsym::rational::rat;

const CANONICAL: [[i64; 4]; 4] = [[2, -6, 3, 1], [0, 0, 1, 0], [1, -2, 1, 0], [4, -9, 3, 0]];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sailsym")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn matrix_doc(m: &IntMatrix) -> Value {
    json!({ "matrix": m })
}

/// The worked quartic's class-1 continued fraction moved by `x`, as a
/// coordinate document, together with the witness `x⁻¹`.
fn conjugated_example(x: &IntMatrix) -> (Value, IntMatrix) {
    let k = make_field(&IntPolynomial::from_i64(&[14, 0, -8, 0, 1])).unwrap();
    let e = |c: [(i64, i64); 4]| k.element(c.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap();
    let cf = cf_from_coords(
        &k,
        Labeling(vec![3, 2, 0, 1]),
        e([(0, 1), (1, 1), (1, 1), (0, 1)]),
        e([(0, 1), (0, 1), (-1, 1), (1, 2)]),
        e([(0, 1), (-1, 1), (1, 1), (0, 1)]),
    )
    .unwrap();
    let moved = cf.transformed(x).unwrap();
    let doc = json!({
        "field": { "minpoly": [14, 0, -8, 0, 1] },
        "alpha": moved.alpha(),
        "beta": moved.beta(),
        "gamma": moved.gamma(),
        "labeling": moved.labeling(),
    });
    (doc, x.inverse().unwrap())
}

#[test]
fn field_report_for_the_example_quartic() {
    let o = run(&["field", "--minpoly", "14,0,-8,0,1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["tool"], "sailsym");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["result"]["automorphisms"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["normal"], false);
    assert_eq!(v["result"]["minpoly"], json!([14, 0, -8, 0, 1]));
}

#[test]
fn usage_errors_name_the_flag() {
    let o = run(&["field", "--minpoly", "1,0,1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--minpoly"));

    let o = run(&["field", "--minpoly", "1,x"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--minpoly"));

    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix_doc(&IntMatrix::from_i64(&CANONICAL.map(|r| r.to_vec()))));
    let o = run(&["sail", "--matrix", s(&a), "--bound", "3", "--margin", "1/3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--margin"));

    let o = run(&["sail", "--matrix", s(&a), "--bound", "3", "--cone", "++"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--cone"));

    let bad = write(&dir, "bad.json", &json!({ "matrix": [[1, 2], [3, 4]] }));
    let o = run(&["criterion", "--matrix", s(&a), "--witness", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--witness"));

    let o = run(&["symmetry", "--matrix", s(&dir.path().join("missing.json")), "--g", s(&a)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--matrix"));

    let o = run(&["lemma4", "sweep", "--bound", "0", "--samples", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--bound"));

    let o = run(&["--threads", "0", "example-paper"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--threads"));
}

#[test]
fn identity_matrix_is_rejected_as_reducible() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", &matrix_doc(&IntMatrix::identity(4)));
    let o = run(&["analyze", "--matrix", s(&id)]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("--matrix") && err.contains("reducible"), "{err}");
}

#[test]
fn analyze_finds_dirichlet_symmetries() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix_doc(&IntMatrix::from_i64(&CANONICAL.map(|r| r.to_vec()))));
    let o = run(&["analyze", "--matrix", s(&a)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert!(!v["result"]["dirichlet"].as_array().unwrap().is_empty());
    assert_eq!(v["result"]["hyperbolic"]["irreducible"], true);
}

#[test]
fn conjugated_example_with_witness_is_proper_class_one() {
    let dir = TempDir::new().unwrap();
    let x = IntMatrix::from_i64(&[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 2, 1, -1], vec![0, 0, 0, 1]]);
    let (doc, witness) = conjugated_example(&x);
    let cf = write(&dir, "cf.json", &doc);
    let w = write(&dir, "w.json", &matrix_doc(&witness));
    let o = run(&["criterion", "--cf", s(&cf), "--witness", s(&w)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["result"]["verdict"]["verdict"], "proper");
    assert_eq!(v["result"]["verdict"]["class"], 1);

    // The same input without a witness goes through the lattice search.
    let o = run(&["criterion", "--cf", s(&cf)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["result"]["verdict"]["class"], 1);
}

#[test]
fn negative_outcomes_exit_ten() {
    let dir = TempDir::new().unwrap();
    let (doc, _) = conjugated_example(&IntMatrix::identity(4));
    let cf = write(&dir, "cf.json", &doc);
    let swap = IntMatrix::from_i64(&[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    let g = write(&dir, "g.json", &matrix_doc(&swap));
    let o = run(&["symmetry", "--cf", s(&cf), "--g", s(&g)]);
    assert_eq!(code(&o), 10);
    assert_eq!(stdout_json(&o)["result"]["is_symmetry"], false);

    // A witness that lands in no class.
    let o = run(&["criterion", "--cf", s(&cf), "--witness", s(&g)]);
    assert_eq!(code(&o), 10);
    assert_eq!(stdout_json(&o)["result"]["verdict"]["verdict"], "not_in_class");

    // The canonical matrix at a small bound: the exit code follows the verdict.
    let a = write(&dir, "a.json", &matrix_doc(&IntMatrix::from_i64(&CANONICAL.map(|r| r.to_vec()))));
    let o = run(&["criterion", "--matrix", s(&a), "--bound", "1"]);
    let c = code(&o);
    assert!(c == 0 || c == 10, "{}", stderr(&o));
    let verdict = stdout_json(&o)["result"]["verdict"]["verdict"].clone();
    assert_eq!(c == 0, verdict == "proper");
}

#[test]
fn symmetry_report_for_the_class_matrix() {
    let dir = TempDir::new().unwrap();
    let (doc, _) = conjugated_example(&IntMatrix::identity(4));
    let cf = write(&dir, "cf.json", &doc);
    let g1 = sailsym::symmetry::canonical_matrix(1).unwrap();
    let g = write(&dir, "g.json", &matrix_doc(&g1));
    let o = run(&["symmetry", "--cf", s(&cf), "--g", s(&g)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = &stdout_json(&o)["result"]["report"];
    assert_eq!(r["sigma_cycles"], "(1 3)(2 4)");
    assert_eq!(r["kind"], "palindromic");
    assert_eq!(r["proper"], true);
}

#[test]
fn example_paper_reproduces_the_worked_example() {
    let o = run(&["example-paper"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    let r = &v["result"];
    assert_eq!(r["verdict"]["verdict"], "proper");
    assert_eq!(r["verdict"]["class"], 1);
    assert_eq!(r["cf"]["labeling"], json!([4, 3, 1, 2]));
    assert_eq!(r["tau"]["coords"], json!(["0", "-1", "0", "0"]));
    assert_eq!(r["psi_plus_tau_psi"]["coords"], json!(["0", "0", "-2", "0"]));
    assert_eq!(r["omega_plus_tau_omega"]["coords"], json!(["0", "0", "2", "0"]));
    assert_eq!(r["note"], "not normal, no cyclic symmetry");
    assert_eq!(r["properness"]["proper"], true);
    for c in r["class_checks"].as_array().unwrap() {
        assert_eq!(c["in_class"], c["proper_order_two"]);
    }
}

#[test]
fn output_is_byte_identical_across_threads_and_runs() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &matrix_doc(&IntMatrix::from_i64(&CANONICAL.map(|r| r.to_vec()))));
    let outs: Vec<Vec<u8>> = [None, Some("1"), Some("2"), None]
        .iter()
        .map(|t| {
            let mut args = vec!["sail", "--matrix", s(&a), "--bound", "3"];
            if let Some(t) = t {
                args.extend(["--threads", t]);
            }
            let o = run(&args);
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            o.stdout
        })
        .collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]));

    let reports: Vec<Vec<u8>> = ["1", "2"].iter().map(|t| run(&["--threads", t, "example-paper"]).stdout).collect();
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn input_hash_tracks_inputs_not_threads() {
    let h = |args: &[&str]| stdout_json(&run(args))["input_sha256"].as_str().unwrap().to_string();
    let base = h(&["field", "--minpoly", "14,0,-8,0,1"]);
    assert_eq!(base, h(&["--threads", "2", "field", "--minpoly", "14,0,-8,0,1"]));
    assert_ne!(base, h(&["field", "--minpoly", "2,0,-8,0,1"]));
}

#[test]
fn lemma4_sweep_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let args = ["lemma4", "sweep", "--bound", "2", "--samples", "30", "--seed", "7", "--out", s(&out)];
    let o = run(&args);
    let c = code(&o);
    assert!(o.stdout.is_empty());
    let bytes = std::fs::read(&out).unwrap();
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    let r = &v["result"];
    assert_eq!(r["samples"], 30);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["case_histogram"].as_array().unwrap().len(), 11);
    assert_eq!(c == 0, r["counterexamples"].as_array().unwrap().is_empty());

    let out2 = dir.path().join("again.json");
    let mut again = args.to_vec();
    let last = again.len() - 1;
    again[last] = s(&out2);
    again.extend(["--threads", "1"]);
    run(&again);
    assert_eq!(bytes, std::fs::read(&out2).unwrap());
}

#[test]
fn lemma4_classify_reads_a_quadruple() {
    let dir = TempDir::new().unwrap();
    let z = write(&dir, "z.json", &json!({ "z": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]] }));
    let o = run(&["lemma4", "classify", "--z", s(&z)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout_json(&o)["result"]["cases"], json!([2]));

    let singular = write(&dir, "s.json", &json!({ "z": [[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]] }));
    let o = run(&["lemma4", "classify", "--z", s(&singular)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--z"));
}
