mod common;

use std::path::PathBuf;

use common::{code, document, qpainleve, stdout};

#[test]
fn charts_of_ii_pass() {
    let o = qpainleve(&["verify-charts", "--system", "II"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("chart/II/0 [chart 0 vs H0]: pass"));
    assert!(out.contains("chart/II/1 [chart 1 vs H1]: pass"));
    assert!(out.contains("summary: 2 pass, 0 fail, 0 unsupported of 2"));
    let (_, doc) = document(&["verify-charts", "--system", "II"]);
    assert_eq!(doc["payload"]["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn characterize_ii_reports_pole_orders() {
    let o = qpainleve(&["characterize", "--system", "II"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("chart 0: poles up to order 5"));
    assert!(out.contains("chart 1: poles up to order 13"));
    assert!(out.contains("normalized H = -q^2*p + 1/2*p^2 - b*q - 1/2*t*p"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify-charts", "--system", "XI"][..],
        &["verify-charts", "--system", "II", "--chart", "7"],
        &["verify-symmetry", "--system", "III", "--gen", "s9"],
        &["print", "--system", "II", "--chart", "0", "--nagoya"],
        &["characterize", "--system", "II", "--deg", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&qpainleve(args)), 2, "{args:?}");
    }
    let (c, doc) = document(&["verify-symmetry", "--system", "III", "--gen", "s9"]);
    assert_eq!((c, doc["status"].as_str()), (2, Some("error")));
}

#[test]
fn failures_exit_1() {
    assert_eq!(
        code(&qpainleve(&[
            "verify-charts",
            "--system",
            "VI",
            "--chart",
            "3"
        ])),
        1
    );
    let (c, doc) = document(&["verify-nagoya", "--system", "IV"]);
    assert_eq!(c, 1);
    assert_eq!(doc["exit_code"], 1);
    assert_eq!(doc["summary"]["fail"], 1);
}

#[test]
fn nagoya_ii_emits_the_corrected_shift() {
    let (_, doc) = document(&["verify-nagoya", "--system", "II"]);
    let derived = &doc["payload"]["reports"][0]["derived"];
    assert_eq!(derived["corrected_map"], "alpha1 = 1/2*b + 1/2*h");
    assert_eq!(derived["corrected_central_difference"], "0");
}

#[test]
fn unsupported_is_an_error_only_when_strict() {
    // A catalog copy whose III s2 has lost its straightening chart.
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/catalog");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("catalog-no-straighten");
    std::fs::create_dir_all(&dir).unwrap();
    for e in std::fs::read_dir(&src).unwrap() {
        let e = e.unwrap();
        let text = std::fs::read_to_string(e.path()).unwrap();
        let text = if e.file_name() == "III.toml" {
            text.lines()
                .filter(|l| !l.starts_with("straighten"))
                .collect::<Vec<_>>()
                .join("\n")
        } else {
            text
        };
        std::fs::write(dir.join(e.file_name()), text).unwrap();
    }
    let run = |strict: bool| {
        let mut args = vec!["verify-symmetry", "--system", "III", "--gen", "s2"];
        if strict {
            args.push("--strict");
        }
        std::process::Command::new(env!("CARGO_BIN_EXE_qpainleve"))
            .args(&args)
            .env("QPAINLEVE_CATALOG_DIR", &dir)
            .output()
            .unwrap()
    };
    let lax = run(false);
    assert!(
        stdout(&lax).contains("symmetry/III/s2 [s2]: unsupported"),
        "{}",
        stdout(&lax)
    );
    assert_eq!(code(&lax), 0);
    assert_eq!(code(&run(true)), 3);
}

#[test]
fn reports_are_reproducible() {
    let args = ["verify-symmetry", "--system", "all"];
    assert_eq!(stdout(&qpainleve(&args)), stdout(&qpainleve(&args)));
    assert_eq!(document(&args), document(&args));
}

#[test]
fn parallelism_changes_nothing_but_timing() {
    for cmd in ["verify-charts", "verify-canonical", "verify-symmetry"] {
        let one = document(&[cmd, "--system", "all", "--parallel", "1"]);
        let four = document(&[cmd, "--system", "all", "--parallel", "4"]);
        assert_eq!(one, four, "{cmd}");
    }
}

#[test]
fn out_writes_the_report() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("canonical-ii.json");
    let o = qpainleve(&[
        "verify-canonical",
        "--system",
        "II",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["task"]["command"], "verify-canonical");
    assert!(doc["timing"]["tasks"]["canonical/II/0"].is_u64());
}

#[test]
fn print_shows_normal_ordered_data() {
    let out = stdout(&qpainleve(&["print", "--system", "II"]));
    assert!(
        out.contains("II.H = -q^2*p + 1/2*p^2 - b*q - 1/2*t*p"),
        "{out}"
    );
    let out = stdout(&qpainleve(&["print", "--system", "VI", "--chart", "4"]));
    assert!(out.contains("VI.chart4.base = chart 0"), "{out}");
}
