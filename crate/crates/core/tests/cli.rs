use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trimmed-mpe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().expect("decimal string").to_owned())
        .collect()
}

const WORKED_POLY: &str = r#"{"p": "5", "n": 2, "d": 1, "D": 1, "terms": [
    {"exp": [0,0], "coeff": "2"}, {"exp": [1,0], "coeff": "3"}, {"exp": [0,1], "coeff": "4"}]}"#;

#[test]
fn eval_worked_example() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", WORKED_POLY);
    let o = run(&["eval", "--poly", &poly, "--grid-gen", "seq"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = json(&stdout(&o));
    assert_eq!(strings(&t["values"]), ["2", "0", "1"]);
    assert_eq!(t["p"], "5");
    assert_eq!(t["D"], 1);
}

#[test]
fn eval_with_grid_file_and_out_file() {
    let dir = TempDir::new().unwrap();
    let poly = write(
        &dir,
        "p.json",
        r#"{"p": "65537", "n": 3, "d": 2, "D": 4, "terms": [{"exp": [0,0,0], "coeff": "41"}]}"#,
    );
    let grid = write(
        &dir,
        "g.json",
        r#"{"p": "65537", "n": 3, "d": 2, "nodes": [["5","9","100"],["1","2","3"],["7","0","65536"]]}"#,
    );
    let out = dir.path().join("t.json");
    let o = run(&[
        "eval",
        "--poly",
        &poly,
        "--grid",
        &grid,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let t = json(&fs::read_to_string(&out).unwrap());
    let values = strings(&t["values"]);
    assert_eq!(values.len(), 23);
    assert!(values.iter().all(|v| v == "41"));
}

#[test]
fn eval_rejects_duplicate_nodes_naming_the_variable() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", WORKED_POLY);
    let grid = write(
        &dir,
        "g.json",
        r#"{"p": "5", "n": 2, "d": 1, "nodes": [["0","1"],["3","3"]]}"#,
    );
    let o = run(&["eval", "--poly", &poly, "--grid", &grid]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("variable 1"), "{}", stderr(&o));
}

#[test]
fn eval_validation_errors() {
    let dir = TempDir::new().unwrap();
    let bad_exp = write(
        &dir,
        "e.json",
        r#"{"p": "5", "n": 2, "d": 1, "D": 1, "terms": [{"exp": [1,1], "coeff": "1"}]}"#,
    );
    let small_p = write(
        &dir,
        "s.json",
        r#"{"p": "3", "n": 1, "d": 3, "D": 3, "terms": []}"#,
    );
    for file in [&bad_exp, &small_p, "/nonexistent/poly.json"] {
        let o = run(&["eval", "--poly", file, "--grid-gen", "seq"]);
        assert_eq!(code(&o), 1, "{file}");
        assert!(o.stdout.is_empty());
        assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));
    }
    let poly = write(&dir, "p.json", WORKED_POLY);
    let o = run(&["eval", "--poly", &poly]);
    assert_eq!(code(&o), 1, "grid source is required");
    let o = run(&[
        "eval",
        "--poly",
        &poly,
        "--grid-gen",
        "seq",
        "--grid",
        &poly,
    ]);
    assert_eq!(code(&o), 1, "grid sources are exclusive");
}

#[test]
fn interp_inverts_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let evals = write(
        &dir,
        "t.json",
        r#"{"p": "5", "n": 2, "d": 1, "D": 1, "values": ["2","0","1"]}"#,
    );
    let o = run(&["interp", "--evals", &evals, "--grid-gen", "seq"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&stdout(&o)), json(WORKED_POLY));
}

#[test]
fn interp_zero_table_and_bad_length() {
    let dir = TempDir::new().unwrap();
    let zero = write(
        &dir,
        "z.json",
        r#"{"p": "7", "n": 2, "d": 2, "D": 3, "values": ["0","0","0","0","0","0","0","0"]}"#,
    );
    let o = run(&[
        "interp",
        "--evals",
        &zero,
        "--grid-gen",
        "rand",
        "--seed",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&stdout(&o))["terms"], json("[]"));

    let short = write(
        &dir,
        "s.json",
        r#"{"p": "7", "n": 2, "d": 2, "D": 3, "values": ["0","0"]}"#,
    );
    let o = run(&["interp", "--evals", &short, "--grid-gen", "seq"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn eval_then_interp_through_files() {
    let dir = TempDir::new().unwrap();
    let poly_text = r#"{"p": "65537", "n": 3, "d": 2, "D": 4, "terms": [
        {"exp": [1,0,2], "coeff": "7"}, {"exp": [2,2,0], "coeff": "65536"}, {"exp": [0,0,0], "coeff": "12"}]}"#;
    let poly = write(&dir, "p.json", poly_text);
    let table = dir.path().join("t.json");
    let back = dir.path().join("b.json");
    let t = table.to_str().unwrap();
    assert_eq!(
        code(&run(&[
            "eval",
            "--poly",
            &poly,
            "--grid-gen",
            "rand",
            "--seed",
            "9",
            "--out",
            t
        ])),
        0
    );
    let o = run(&[
        "interp",
        "--evals",
        t,
        "--grid-gen",
        "rand",
        "--seed",
        "9",
        "--out",
        back.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut got = json(&fs::read_to_string(&back).unwrap());
    let mut want = json(poly_text);
    for v in [&mut got, &mut want] {
        v["terms"]
            .as_array_mut()
            .unwrap()
            .sort_by_key(|t| t["exp"].to_string());
    }
    assert_eq!(got, want);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", WORKED_POLY);
    let a = run(&["eval", "--poly", &poly, "--grid-gen", "rand", "--seed", "5"]);
    let b = run(&["eval", "--poly", &poly, "--grid-gen", "rand", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&[
        "roundtrip",
        "--n",
        "2",
        "--d",
        "2",
        "--D",
        "3",
        "--trials",
        "3",
    ]);
    let b = run(&[
        "roundtrip",
        "--n",
        "2",
        "--d",
        "2",
        "--D",
        "3",
        "--trials",
        "3",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn roundtrip_passes_and_reports_trials() {
    let o = run(&[
        "roundtrip",
        "--n",
        "4",
        "--d",
        "2",
        "--D",
        "5",
        "--prime",
        "65537",
        "--trials",
        "50",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with(": ok")).count(), 50);
    assert!(out.contains("50 of 50 trials passed"));

    let o = run(&[
        "roundtrip",
        "--n",
        "3",
        "--d",
        "1",
        "--D",
        "2",
        "--trials",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 of 0 trials passed"));
}

#[test]
fn roundtrip_corruption_is_caught() {
    let o = run(&[
        "roundtrip",
        "--n",
        "2",
        "--d",
        "2",
        "--D",
        "3",
        "--seed",
        "17",
        "--trials",
        "2",
        "--corrupt",
    ]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("--seed 17"), "{err}");
    assert!(err.contains("seed(s) 17, 18"), "{err}");
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn roundtrip_rejects_bad_parameters() {
    assert_eq!(
        code(&run(&[
            "roundtrip",
            "--n",
            "2",
            "--d",
            "2",
            "--D",
            "3",
            "--prime",
            "8"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "roundtrip",
            "--n",
            "2",
            "--d",
            "4",
            "--D",
            "3",
            "--prime",
            "3"
        ])),
        1
    );
    assert_eq!(code(&run(&["roundtrip", "--n", "2", "--d", "2"])), 1);
}

const HEADER: &str = "algo,n,d,D,p,N,wall_time_ns,mul,add,inv,mul_per_Nn";

#[test]
fn bench_single_instance_both_algos() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("b.csv");
    let o = run(&[
        "bench",
        "--sweep",
        "n=3;d=2;D=nd/2",
        "--algos",
        "trimmed,naive",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], HEADER);
    assert!(lines[1].starts_with("trimmed,3,2,3,65537,17,"));
    assert!(lines[2].starts_with("naive,3,2,3,65537,17,"));
}

#[test]
fn bench_scaling_shape() {
    let o = run(&[
        "bench",
        "--sweep",
        "n=2..8;d=2;D=nd/2",
        "--algos",
        "trimmed,naive",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>().join(","),
        HEADER
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let col = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    let trimmed: Vec<_> = rows.iter().filter(|r| &r[0] == "trimmed").collect();
    let naive: Vec<_> = rows.iter().filter(|r| &r[0] == "naive").collect();
    assert_eq!(trimmed.len(), 7);
    assert_eq!(naive.len(), 7);
    for r in &trimmed {
        assert!(col(r, 10) < 10.0, "mul/(N n) bounded: {r:?}");
    }
    // naive mul / (N^2 n) stays within a constant band while N grows ~20x
    let q: Vec<f64> = naive
        .iter()
        .map(|r| col(r, 7) / (col(r, 5) * col(r, 5) * col(r, 1)))
        .collect();
    let (lo, hi) = q
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo < 1.5, "{q:?}");
    assert!(col(naive[6], 5) / col(naive[0], 5) > 20.0);
}

#[test]
fn bench_skips_and_usage_errors() {
    let o = run(&["bench", "--sweep", "n=2;d=1", "--algos", ""]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert_eq!(
        code(&run(&["bench", "--sweep", "n=2;d=1", "--algos", "fast"])),
        1
    );
    assert_eq!(code(&run(&["bench", "--sweep", "d=1..2"])), 1);

    let o = run(&[
        "bench",
        "--sweep",
        "n=2;d=2;D=2,nd",
        "--algos",
        "yates,naive",
        "--naive-limit",
        "6",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "yates,2,2,2,65537,6,,,,,skipped");
    assert!(!lines[2].ends_with("skipped"));
    assert!(!lines[3].ends_with("skipped"));
    assert_eq!(lines[4], "naive,2,2,4,65537,9,,,,,skipped");

    let o = run(&["bench", "--sweep", "n=60;d=50", "--algos", "trimmed"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).lines().nth(1),
        Some("trimmed,60,50,3000,65537,,,,,,skipped")
    );
    assert!(stderr(&o).contains("2^63"));
}

#[test]
fn selftest_text_and_json() {
    let o = run(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("extended-pascal: pass"));
    assert!(out.lines().all(|l| l.ends_with(": pass")));

    let o = run(&["selftest", "--json"]);
    assert_eq!(code(&o), 0);
    let map = json(&stdout(&o));
    for suite in [
        "extended-pascal",
        "lu-reconstruction",
        "rank-unrank",
        "yates-consistency",
    ] {
        assert_eq!(map[suite], Value::Bool(true), "{suite}");
    }

    let o = run(&["selftest", "--suite", "rank-unrank"]);
    assert_eq!(stdout(&o), "rank-unrank: pass\n");
    assert_eq!(code(&run(&["selftest", "--suite", "bogus"])), 1);
}

#[test]
fn help_version_and_parse_errors() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("roundtrip"));
    assert_eq!(code(&run(&["--version"])), 0);
    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert_eq!(code(&run(&[])), 1);
    assert!(Path::new(env!("CARGO_BIN_EXE_trimmed-mpe")).exists());
}
