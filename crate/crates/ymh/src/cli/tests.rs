//! Commands run in-process through [`run`], exactly as the binary does.

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use tempfile::TempDir;
use ymh_core::painleve::{solve_radial_with, SolveOptions};
use ymh_core::verifier::EquationId;

use super::run;
use crate::report_io::parse_report;
use crate::table_io;

const CONIC: &str = "2*z1^2+z2^2-4";
const LINES: &str = "z1*(z1+2*z2)";

struct Output {
    code: i32,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

fn ymh(args: &[&str]) -> Output {
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("ymh").chain(args.iter().copied()),
        &mut stdout,
        &mut stderr,
    );
    Output {
        code,
        stdout,
        stderr,
    }
}

fn code(o: &Output) -> i32 {
    o.code
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

/// Shared table written once by `solve`.
fn table() -> &'static Path {
    static DIR: OnceLock<(TempDir, PathBuf)> = OnceLock::new();
    let (_, path) = DIR.get_or_init(|| {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("table.csv");
        let o = ymh(&[
            "solve",
            "--rmax",
            "8",
            "--tol",
            "1e-8",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (dir, path)
    });
    path
}

fn t() -> &'static str {
    table().to_str().unwrap()
}

#[test]
fn solve_writes_a_reproducible_table() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let o = ymh(&[
        "solve",
        "--rmax",
        "8",
        "--tol",
        "1e-8",
        "--out",
        a.to_str().unwrap(),
        "--crosscheck",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let defect: f64 = value(&text, "boundary_defect").parse().unwrap();
    assert!(defect < 1e-4);
    let psi0: f64 = value(&text, "psi0").parse().unwrap();
    let agreement: f64 = value(&text, "integrator_agreement").parse().unwrap();
    assert!(agreement < 1e-6);

    // independent oracle: the fixed-step integrator through the library
    let fixed = solve_radial_with(&SolveOptions::fixed_step(8.0, 1e-8)).unwrap();
    assert!((fixed.psi0() - psi0).abs() < 1e-6);

    let file = std::fs::read_to_string(&a).unwrap();
    assert!(file.starts_with(&format!("# psi0={psi0}\n")));
    assert!(table_io::parse(&file).is_ok());

    ymh(&[
        "solve",
        "--rmax",
        "8",
        "--tol",
        "1e-8",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn solve_rejects_bad_arguments() {
    assert_eq!(code(&ymh(&["solve", "--rmax", "2"])), 2);
    assert_eq!(code(&ymh(&["solve", "--tol", "1e-3"])), 2);
    assert_eq!(code(&ymh(&["solve", "--rmax", "eight"])), 2);
    assert_eq!(code(&ymh(&["solve", "--out", "/nonexistent-dir/t.csv"])), 2);
    assert_eq!(code(&ymh(&["frobnicate"])), 2);
    assert_eq!(code(&ymh(&[])), 2);
    assert_eq!(code(&ymh(&["--help"])), 0);
}

#[test]
fn verify_abelian_analytic_is_exact() {
    let o = ymh(&["verify", "--abelian", "z1^3+z1*z2", "--analytic"]);
    assert_eq!(code(&o), 0);
    let report = parse_report(&stdout(&o)).unwrap();
    assert_eq!(report.entries().len(), 5);
    assert!(report.worst() < 1e-12);
    assert_eq!(
        code(&ymh(&[
            "verify",
            "--poly",
            CONIC,
            "--table",
            t(),
            "--analytic"
        ])),
        2
    );
}

#[test]
fn verify_ansatz_passes_and_coarse_steps_fail() {
    let o = ymh(&[
        "verify",
        "--poly",
        CONIC,
        "--table",
        t(),
        "--fd",
        "1e-3",
        "--samples",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report = parse_report(&stdout(&o)).unwrap();
    assert!(report.worst() < 1e-3);
    assert_eq!(report.get(EquationId::DbarPhi).unwrap().n_samples, 50);
    assert_eq!(value(&stdout(&o), "result"), "pass");

    let again = ymh(&[
        "verify",
        "--poly",
        CONIC,
        "--table",
        t(),
        "--fd",
        "1e-3",
        "--samples",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(again.stdout, o.stdout);

    let coarse = ymh(&[
        "verify",
        "--poly",
        CONIC,
        "--table",
        t(),
        "--fd",
        "0.5",
        "--samples",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&coarse), 1);
    assert_eq!(value(&stdout(&coarse), "result"), "fail");
}

#[test]
fn verify_solves_in_memory_without_a_table() {
    let o = ymh(&["verify", "--poly", LINES, "--samples", "10"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn malformed_input_exits_with_usage_status() {
    assert_eq!(
        code(&ymh(&["verify", "--poly", "2*z1^^2", "--table", t()])),
        2
    );
    assert_eq!(code(&ymh(&["verify", "--poly", "z3", "--table", t()])), 2);
    assert_eq!(code(&ymh(&["verify", "--poly", "7", "--table", t()])), 2);
    assert_eq!(
        code(&ymh(&["verify", "--poly", CONIC, "--abelian", "z1"])),
        2
    );
    assert_eq!(
        code(&ymh(&[
            "verify",
            "--poly",
            CONIC,
            "--table",
            "/nonexistent.csv"
        ])),
        2
    );
    assert_eq!(
        code(&ymh(&[
            "verify",
            "--poly",
            CONIC,
            "--table",
            t(),
            "--fd",
            "0"
        ])),
        2
    );
    assert_eq!(
        code(&ymh(&[
            "verify",
            "--poly",
            CONIC,
            "--table",
            t(),
            "--samples",
            "0"
        ])),
        2
    );
    let err =
        String::from_utf8(ymh(&["verify", "--poly", "2*z1^^2", "--table", t()]).stderr).unwrap();
    assert!(err.contains("position"), "{err}");
}

#[test]
fn corrupted_table_is_a_numeric_failure() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.csv");
    let text = std::fs::read_to_string(table()).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let row: Vec<f64> = lines[2000].split(',').map(|v| v.parse().unwrap()).collect();
    lines[2000] = format!("{},{},{}", row[0], row[1] + 1e-2, row[2]);
    std::fs::write(&path, lines.join("\n")).unwrap();
    assert_eq!(
        code(&ymh(&[
            "verify",
            "--poly",
            CONIC,
            "--table",
            path.to_str().unwrap()
        ])),
        1
    );
    std::fs::write(&path, "not a table").unwrap();
    assert_eq!(
        code(&ymh(&[
            "verify",
            "--poly",
            CONIC,
            "--table",
            path.to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn lax_prints_each_spectral_parameter() {
    let o = ymh(&["lax", "--poly", CONIC, "--table", t(), "--zetas", "1,i,2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("zeta=")).count(), 3);
    let defect: f64 = value(&text, "recombination_defect").parse().unwrap();
    assert!(defect < 1e-12);
    assert_eq!(
        code(&ymh(&[
            "lax",
            "--poly",
            CONIC,
            "--table",
            t(),
            "--zetas",
            "0"
        ])),
        2
    );
    assert_eq!(
        code(&ymh(&[
            "lax",
            "--poly",
            CONIC,
            "--table",
            t(),
            "--zetas",
            "1,zz"
        ])),
        2
    );
    let abelian = ymh(&[
        "lax",
        "--abelian",
        "z1^3+z1*z2",
        "--analytic",
        "--zetas",
        "1,i,2,0.7071+0.7071i",
    ]);
    assert_eq!(code(&abelian), 0);
}

#[test]
fn lift_relations() {
    let o = ymh(&["lift", "--abelian", "z1^2", "--analytic"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for k in 1..=7 {
        let v: f64 = value(&text, &format!("octonion[{k}] max_abs"))
            .parse()
            .unwrap();
        assert!(v < 1e-12);
    }
    assert_eq!(value(&text, "reduction_invariance"), "exact");
    for poly in [CONIC, LINES] {
        assert_eq!(
            code(&ymh(&[
                "lift",
                "--poly",
                poly,
                "--table",
                t(),
                "--samples",
                "20"
            ])),
            0
        );
    }
}

#[test]
fn report_collects_every_check() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.txt");
    let o = ymh(&[
        "report",
        "--poly",
        CONIC,
        "--table",
        t(),
        "--samples",
        "20",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let report = parse_report(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for id in EquationId::ALL {
        assert!(report.get(id).is_some(), "{id} missing");
    }
    assert_eq!(value(&stdout(&o), "implication_bound_violations"), "0");
}

#[test]
fn field_grids() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("conic.csv");
    let o = ymh(&[
        "field",
        "--poly",
        CONIC,
        "--table",
        t(),
        "--nx",
        "101",
        "--ny",
        "81",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(&format!("# expr={CONIC}\n# psi0=")));
    let rows: Vec<[f64; 3]> = text
        .lines()
        .skip_while(|l| *l != "x,y,F")
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    assert_eq!(rows.len(), 101 * 81);
    assert_eq!((rows[0][0], rows[0][1], rows[1][1]), (-3.0, -3.0, -3.0));
    let best = rows
        .iter()
        .fold(rows[0], |b, r| if r[2] > b[2] { *r } else { b });
    let on_ellipse = 2.0 * best[0] * best[0] + best[1] * best[1];
    assert!((on_ellipse - 4.0).abs() < 0.6, "argmax at {best:?}");

    let pgm = dir.path().join("lines.pgm");
    let o = ymh(&[
        "field",
        "--poly",
        LINES,
        "--table",
        t(),
        "--format",
        "pgm",
        "--nx",
        "30",
        "--ny",
        "20",
        "--out",
        pgm.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&pgm).unwrap();
    let mut tokens = text.split_whitespace();
    assert_eq!(tokens.next(), Some("P2"));
    let values: Vec<u32> = tokens.map(|v| v.parse().unwrap()).collect();
    assert_eq!(&values[..3], &[30, 20, 255]);
    assert_eq!(values.len(), 3 + 600);
    assert!(
        values[3..].iter().all(|v| *v <= 255)
            && values[3..].contains(&255)
            && values[3..].contains(&0)
    );

    let stdout_grid = ymh(&[
        "field",
        "--poly",
        "z1",
        "--table",
        t(),
        "--nx",
        "5",
        "--ny",
        "5",
    ]);
    assert_eq!(code(&stdout_grid), 0);
    assert!(stdout(&stdout_grid).contains("x,y,F"));
    assert_eq!(
        code(&ymh(&[
            "field",
            "--poly",
            "z1",
            "--table",
            t(),
            "--nx",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&ymh(&[
            "field",
            "--poly",
            "z1",
            "--table",
            t(),
            "--xmin",
            "3",
            "--xmax",
            "-3"
        ])),
        2
    );
    assert_eq!(
        code(&ymh(&[
            "field",
            "--poly",
            "z1",
            "--table",
            t(),
            "--format",
            "png"
        ])),
        2
    );
}

#[test]
fn one_lump_grid_has_a_single_ridge() {
    let o = ymh(&[
        "field",
        "--poly",
        "z1",
        "--table",
        t(),
        "--nx",
        "61",
        "--ny",
        "11",
    ]);
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .skip_while(|l| *l != "x,y,F")
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    for row in rows.chunks(61) {
        let best = row
            .iter()
            .fold(&row[0], |b, r| if r[2] > b[2] { r } else { b });
        assert!(
            best[0].abs() < 0.06,
            "row y = {} peaks at x = {}",
            best[1],
            best[0]
        );
        assert!(
            (row[0][2] - row[60][2]).abs() < 1e-12,
            "profile not symmetric about x = 0"
        );
    }
}
