//! End-to-end tests of the `dvdbinom` binary: exit codes, output formats,
//! and schema round-trips of the JSON emitted by every subcommand.

use num_bigint::BigInt;
use serde::Deserialize;
use std::process::{Command, Output};

fn dvdbinom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvdbinom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = dvdbinom(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    dvdbinom(args).status.code().expect("no signal")
}

#[test]
fn coefficient_example() {
    let text = stdout_of(&["--model", "zp", "--p", "3", "coeff", "4", "5"]);
    assert!(text.contains("residue 2"), "{text}");
    assert!(text.contains("exact 5"), "{text}");
}

#[test]
fn composite_characteristic_is_a_config_error() {
    assert_eq!(exit_code(&["--model", "zp", "--p", "4", "info"]), 2);
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    assert_eq!(exit_code(&["frobnicate"]), 2);
    assert_eq!(exit_code(&["--help"]), 0);
    assert_eq!(exit_code(&["triangle", "5", "--format", "bmp"]), 2);
}

#[test]
fn verify_subcommands_pass_and_exit_0() {
    assert_eq!(
        exit_code(&["--model", "zp", "--p", "3", "verify", "gw", "--max", "500"]),
        0
    );
    assert_eq!(
        exit_code(&["--p", "5", "verify", "lucas", "--max", "40"]),
        0
    );
    assert_eq!(
        exit_code(&[
            "--model", "fqt", "--p", "2", "--d", "2", "verify", "vwdwo", "--max", "60", "--depth",
            "2"
        ]),
        0
    );
    assert_eq!(
        exit_code(&[
            "--p",
            "3",
            "--reps",
            "seed:11",
            "verify",
            "bijection",
            "--trials",
            "10",
            "--seed",
            "3",
            "--max-deg",
            "2"
        ]),
        0
    );
}

// ---------------------------------------------------------------------------
// JSON schemas: each output parses back into the documented shape
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct FieldJson {
    p: u64,
    d: u32,
    modulus: Vec<u16>,
    q: u64,
    primitive_root: u16,
}

#[derive(Deserialize)]
struct InfoJson {
    model: String,
    field: FieldJson,
    reps: Vec<String>,
}

#[test]
fn info_json_schema() {
    let raw = stdout_of(&["--model", "zp", "--p", "3", "--json", "info"]);
    let info: InfoJson = serde_json::from_str(&raw).unwrap();
    assert_eq!(info.model, "zp");
    assert_eq!((info.field.p, info.field.d, info.field.q), (3, 1, 3));
    assert!(info.field.modulus.is_empty());
    assert_eq!(info.field.primitive_root, 2);
    assert_eq!(info.reps, ["0", "1", "2"]);

    let raw = stdout_of(&["--model", "fqt", "--p", "2", "--d", "2", "--json", "info"]);
    let info: InfoJson = serde_json::from_str(&raw).unwrap();
    assert_eq!(info.field.modulus, vec![1, 1, 1]);
    assert_eq!(info.field.q, 4);
}

#[derive(Deserialize)]
struct UnJson {
    n: u64,
    element: String,
}

#[test]
fn un_json_schema() {
    let raw = stdout_of(&["--p", "3", "--json", "un", "7"]);
    let un: UnJson = serde_json::from_str(&raw).unwrap();
    assert_eq!((un.n, un.element.as_str()), (7, "7"));

    let raw = stdout_of(&["--model", "fqt", "--p", "2", "--json", "un", "3"]);
    let un: UnJson = serde_json::from_str(&raw).unwrap();
    assert_eq!(un.element, "1+1*t");
}

#[derive(Deserialize)]
struct CoeffJson {
    n: u64,
    m: u64,
    residue_code: u16,
    class: i64,
    exact: String,
    oracle_agrees: Option<bool>,
}

#[test]
fn coeff_json_schema() {
    let raw = stdout_of(&["--p", "3", "--json", "coeff", "4", "5", "--oracle"]);
    let c: CoeffJson = serde_json::from_str(&raw).unwrap();
    assert_eq!((c.n, c.m, c.residue_code, c.class), (4, 5, 2, 1));
    assert_eq!(c.exact, "5");
    assert_eq!(c.oracle_agrees, Some(true));

    let raw = stdout_of(&["--p", "5", "--json", "coeff", "3", "6"]);
    let c: CoeffJson = serde_json::from_str(&raw).unwrap();
    assert_eq!((c.residue_code, c.class), (0, -1)); // C(6,3) = 20 = 0 mod 5
    assert_eq!(c.exact, "20");
    assert_eq!(c.oracle_agrees, None);
}

#[derive(Deserialize)]
struct ExpandJson {
    element: String,
    depth: usize,
    digits: Vec<u16>,
}

#[test]
fn expand_json_schema() {
    let raw = stdout_of(&["--p", "3", "--json", "expand", "-1", "--depth", "3"]);
    let e: ExpandJson = serde_json::from_str(&raw).unwrap();
    assert_eq!(e.element, "-1");
    assert_eq!(e.depth, 3);
    assert_eq!(e.digits, vec![2, 2, 2]);

    let out = dvdbinom(&["--p", "5", "expand", "1/5", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(2)); // not integral
}

#[derive(Deserialize)]
struct DistJson {
    n: u64,
    eps: Vec<u64>,
    zero_count: u64,
}

#[test]
fn dist_json_schema() {
    let raw = stdout_of(&["--p", "3", "--json", "dist", "5"]);
    let d: DistJson = serde_json::from_str(&raw).unwrap();
    assert_eq!((d.n, d.eps, d.zero_count), (5, vec![4, 2], 0));
}

#[derive(Deserialize)]
struct GenpolyJson {
    q: u64,
    coeffs: Vec<u64>,
}

#[test]
fn genpoly_json_schema() {
    let raw = stdout_of(&["--p", "5", "--json", "genpoly", "3"]);
    let g: GenpolyJson = serde_json::from_str(&raw).unwrap();
    assert_eq!((g.q, g.coeffs), (5, vec![2, 0, 0, 2]));
}

#[derive(Deserialize)]
struct TriangleJson {
    max: u64,
    q: u64,
    rows: Vec<Vec<i64>>,
}

#[test]
fn triangle_json_schema() {
    let raw = stdout_of(&["--p", "2", "--json", "triangle", "6"]);
    let t: TriangleJson = serde_json::from_str(&raw).unwrap();
    assert_eq!((t.max, t.q), (6, 2));
    assert_eq!(t.rows.len(), 7);
    for (m, row) in t.rows.iter().enumerate() {
        assert_eq!(row.len(), m + 1);
    }
}

#[derive(Deserialize)]
struct VerifyJson {
    check: String,
    pass: bool,
}

#[test]
fn verify_json_schema() {
    for args in [
        vec!["--p", "3", "--json", "verify", "lucas", "--max", "20"],
        vec!["--p", "3", "--json", "verify", "gw", "--max", "50"],
        vec!["--p", "3", "--json", "verify", "bijection", "--trials", "5"],
        vec!["--p", "3", "--json", "verify", "vwdwo", "--max", "30"],
    ] {
        let raw = stdout_of(&args);
        let v: VerifyJson = serde_json::from_str(&raw).unwrap();
        assert!(v.pass, "{args:?}");
        assert!(["lucas", "gw", "bijection", "vwdwo"].contains(&v.check.as_str()));
    }
}

// ---------------------------------------------------------------------------
// Triangle contents
// ---------------------------------------------------------------------------

/// Pascal-rule binomial table for the CSV cross-check.
fn pascal_mod(p: u64, max: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for m in 0..=max {
        let mut row = vec![BigInt::from(1); m + 1];
        for n in 1..m {
            row[n] = &rows[m - 1][n - 1] + &rows[m - 1][n];
        }
        rows.push(row);
    }
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let r = v % BigInt::from(p);
                    u64::try_from(r).unwrap()
                })
                .collect()
        })
        .collect()
}

#[test]
fn triangle_csv_matches_pascal_mod_p() {
    let p = 5u64;
    let max = 30usize;
    let csv = stdout_of(&["--p", "5", "triangle", "30", "--format", "csv"]);
    let table = pascal_mod(p, max);
    // dlog table for F_5 with primitive root 2: 1 -> 0, 2 -> 1, 4 -> 2, 3 -> 3
    let dlog = [(1u64, 0i64), (2, 1), (4, 2), (3, 3)];
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,m,class"));
    let mut seen = 0;
    for line in lines {
        let fields: Vec<i64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (n, m, class) = (fields[0] as usize, fields[1] as usize, fields[2]);
        let value = table[m][n];
        let expected = if value == 0 {
            -1
        } else {
            dlog.iter().find(|&&(v, _)| v == value).unwrap().1
        };
        assert_eq!(class, expected, "cell n={n} m={m}");
        seen += 1;
    }
    assert_eq!(seen, (max + 1) * (max + 2) / 2);
}

#[test]
fn triangle_pgm_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.pgm");
    let code = exit_code(&[
        "--p",
        "2",
        "triangle",
        "15",
        "--format",
        "pgm",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let data = std::fs::read(&path).unwrap();
    let header = b"P5\n16 16\n255\n";
    assert!(data.starts_with(header));
    let pixels = &data[header.len()..];
    assert_eq!(pixels.len(), 16 * 16);
    // above the diagonal: background 255
    assert_eq!(pixels[1], 255); // (m=0, n=1)
                                // zero residues map to 0, nonzero classes to round(255 * (j+1) / q)
    let row4 = &pixels[4 * 16..5 * 16];
    assert_eq!(&row4[..5], &[128, 0, 0, 0, 128]);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let code = exit_code(&[
        "--p",
        "3",
        "--json",
        "dist",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let d: DistJson = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((d.eps, d.zero_count), (vec![4, 0], 1));
}

#[test]
fn randomized_reps_still_verify() {
    for seed in ["seed:1", "seed:99"] {
        assert_eq!(
            exit_code(&["--p", "3", "--reps", seed, "verify", "lucas", "--max", "30"]),
            0,
            "{seed}"
        );
        assert_eq!(
            exit_code(&["--p", "3", "--reps", seed, "verify", "gw", "--max", "150"]),
            0,
            "{seed}"
        );
    }
}

#[test]
fn primitive_root_override_changes_classes() {
    let raw = stdout_of(&["--p", "5", "--json", "genpoly", "3"]);
    let default_root: GenpolyJson = serde_json::from_str(&raw).unwrap();
    let raw = stdout_of(&[
        "--p",
        "5",
        "--primitive-root",
        "3",
        "--json",
        "genpoly",
        "3",
    ]);
    let alt_root: GenpolyJson = serde_json::from_str(&raw).unwrap();
    // C(3, .) mod 5 = 1,3,3,1: with root 2 the threes sit at x^3, with
    // root 3 they move to x^1; the count multiset is preserved
    assert_eq!(default_root.coeffs, vec![2, 0, 0, 2]);
    assert_eq!(alt_root.coeffs, vec![2, 2, 0, 0]);
}
