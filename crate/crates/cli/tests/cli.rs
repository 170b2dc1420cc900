//! Every subcommand against the library call it wraps, plus exit codes.

use std::path::PathBuf;
use std::process::Command;

use cuspkit::bound_calculus::{slope_count_bound, verify_counting_lemma, BoundQuery, LemmaVerdict};
use cuspkit::diagram::{emit_lattice_svg, DiagramSpec};
use cuspkit::halfplane_geometry::{extremal_ratio, tangency_separation, wrapping_bound, HorodiskPair, WrappingQuery};
use cuspkit::report_io::{load_cusp_file, parse_report_str, AnalysisReport};
use cuspkit::slope_search::enumerate_short_slopes;
use cuspkit::surface_audit::{check_cusp_length_inequality, SurfaceAudit, SurfaceType};
use cuspkit::{CuspShape, Slope};
use cuspkit_cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures");
    dir.join(name).to_string_lossy().into_owned()
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("cuspkit").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn cli_json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.push("--json");
    let o = cli(&args);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn hex2() -> CuspShape {
    load_cusp_file(fixture("hex2.json").as_ref())
        .unwrap()
        .get("hex2")
        .unwrap()
        .clone()
}

#[test]
fn bound_prints_the_pipeline() {
    let o = cli(&["bound", "--length", "6", "--area", "3.35"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("Δ ≤ 10, p = 11, slopes ≤ 12"), "{}", o.stdout);

    let o = cli(&["bound", "--length", "6.2831853", "--area", "1.7320508"]);
    assert!(o.stdout.contains("slopes ≤ 24"), "{}", o.stdout);

    // defaults are L = 6, A = 3.35
    assert_eq!(
        cli(&["bound"]).stdout,
        cli(&["bound", "--length", "6", "--area", "3.35"]).stdout
    );
}

#[test]
fn bound_matches_library() {
    for (length, area, l, a) in [
        ("6", "3.35", 6.0, 3.35),
        ("2pi", "adams", std::f64::consts::TAU, 3f64.sqrt()),
        ("7.5", "2", 7.5, 2.0),
    ] {
        let value = cli_json(&["bound", "--length", length, "--area", area]);
        let expected = slope_count_bound(&BoundQuery::new(l, a).unwrap()).unwrap();
        assert_eq!(value, serde_json::to_value(expected).unwrap());
    }
}

#[test]
fn slopes_lists_twelve_rows_for_hex2() {
    let o = cli(&[
        "slopes",
        "--cusp",
        &fixture("hex2.json"),
        "--name",
        "hex2",
        "--threshold",
        "6",
    ]);
    assert_eq!(o.code, EXIT_OK);
    let rows: Vec<&str> = o
        .stdout
        .lines()
        .filter(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            t.len() >= 3 && t[0].parse::<i64>().is_ok() && t[1].parse::<i64>().is_ok()
        })
        .collect();
    assert_eq!(rows.len(), 12, "{}", o.stdout);
}

#[test]
fn slopes_match_library() {
    let load = load_cusp_file(fixture("corpus.json").as_ref()).unwrap();
    for cusp in &load.cusps {
        for threshold in ["1", "2pi", "6"] {
            let value = cli_json(&[
                "slopes",
                "--cusp",
                &fixture("corpus.json"),
                "--name",
                &cusp.record.name,
                "--threshold",
                threshold,
            ]);
            let t = cuspkit_cli::values::parse_length(threshold).unwrap();
            let expected = enumerate_short_slopes(&cusp.shape, t).unwrap();
            assert_eq!(value, cuspkit_cli::slopes_json(&expected));
            assert_eq!(value["slopes"].as_array().unwrap().len(), expected.len());
        }
    }
}

#[test]
fn lemma_verify_matches_library() {
    let hex = hex2();
    let slopes: Vec<Slope> = enumerate_short_slopes(&hex, 6.0).unwrap().slopes().collect();
    let value = cli_json(&["lemma-verify", "--cusp", &fixture("hex2.json"), "--name", "hex2"]);
    assert_eq!(value["prime"], 11);
    assert_eq!(value["verdict"], serde_json::to_value(LemmaVerdict::Injective).unwrap());

    for p in ["2", "3", "5", "7", "13"] {
        let value = cli_json(&[
            "lemma-verify",
            "--cusp",
            &fixture("hex2.json"),
            "--name",
            "hex2",
            "--prime",
            p,
        ]);
        let expected = verify_counting_lemma(&slopes, p.parse().unwrap()).unwrap();
        assert_eq!(value["verdict"], serde_json::to_value(expected).unwrap());
    }

    let o = cli(&[
        "lemma-verify",
        "--cusp",
        &fixture("hex2.json"),
        "--name",
        "hex2",
        "--prime",
        "5",
    ]);
    assert!(o.stdout.contains("collision"), "{}", o.stdout);
}

#[test]
fn lemma_verify_area_sugar() {
    let value = cli_json(&[
        "lemma-verify",
        "--cusp",
        &fixture("hex2.json"),
        "--name",
        "hex2",
        "--area",
        "shape",
    ]);
    let expected = slope_count_bound(&BoundQuery::new(6.0, hex2().area()).unwrap()).unwrap();
    assert_eq!(value["bound"], serde_json::to_value(expected).unwrap());
}

#[test]
fn audit_matches_library() {
    let o = cli(&["audit", "--surface", "1,1,0", "--lengths", "6"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("pass (sharp)"), "{}", o.stdout);
    let o = cli(&["audit", "--surface", "1,1,0", "--lengths", "6.000001"]);
    assert!(o.stdout.contains("fail"), "{}", o.stdout);

    for (surface, lengths) in [("1,1,0", "6"), ("0,4,0", "2,3,4"), ("2,3,1", "7.5,1")] {
        let value = cli_json(&["audit", "--surface", surface, "--lengths", lengths]);
        let parsed: Vec<f64> = lengths.split(',').map(|x| x.parse().unwrap()).collect();
        let audit = SurfaceAudit::new(surface.parse::<SurfaceType>().unwrap(), parsed);
        let expected = check_cusp_length_inequality(&audit).unwrap();
        assert_eq!(value["verdict"], serde_json::to_value(expected).unwrap());
    }
}

#[test]
fn audit_strict_requires_every_length() {
    assert_eq!(cli(&["audit", "--surface", "0,4,0", "--lengths", "1"]).code, EXIT_OK);
    let split = cli(&[
        "audit",
        "--surface",
        "0,4,0",
        "--lengths",
        "1,2",
        "--lengths",
        "3",
        "--json",
    ]);
    let joined = cli(&["audit", "--surface", "0,4,0", "--lengths", "1,2,3", "--json"]);
    assert_eq!(split.stdout, joined.stdout);
    let o = cli(&["audit", "--surface", "0,4,0", "--lengths", "1", "--strict"]);
    assert_eq!(o.code, EXIT_DOMAIN);
    assert!(o.stderr.starts_with("error: "));
}

#[test]
fn horodisk_matches_library() {
    let value = cli_json(&["horodisk", "--ratio"]);
    assert_eq!(value["extremal_ratio"], extremal_ratio());
    let pair = HorodiskPair::new(1.0, extremal_ratio()).unwrap();
    assert_eq!(value["separation"], tangency_separation(&pair));

    let value = cli_json(&["horodisk", "--separation", "0.5", "3"]);
    assert_eq!(
        value["separation"],
        tangency_separation(&HorodiskPair::new(0.5, 3.0).unwrap())
    );
    assert_eq!(value["tangent"], false);

    let value = cli_json(&["horodisk", "--wrapping", "0.25", "2pi"]);
    let q = WrappingQuery::new(0.25, std::f64::consts::TAU).unwrap();
    assert_eq!(value["wrapping_bound"], wrapping_bound(&q));

    let o = cli(&["horodisk", "--ratio"]);
    assert!(o.stdout.contains("1.76274717"), "{}", o.stdout);
}

#[test]
fn horodisk_needs_exactly_one_query() {
    assert_eq!(cli(&["horodisk"]).code, EXIT_USAGE);
    assert_eq!(cli(&["horodisk", "--ratio", "--separation", "1", "2"]).code, EXIT_USAGE);
    assert_eq!(cli(&["horodisk", "--separation", "1"]).code, EXIT_USAGE);
    assert_eq!(cli(&["horodisk", "--separation", "2", "1"]).code, EXIT_DOMAIN);
}

#[test]
fn diagram_matches_library() {
    let o = cli(&[
        "diagram",
        "--cusp",
        &fixture("hex2.json"),
        "--name",
        "hex2",
        "--out",
        "-",
    ]);
    assert_eq!(o.code, EXIT_OK);
    let expected = emit_lattice_svg(&DiagramSpec::new(enumerate_short_slopes(&hex2(), 6.0).unwrap())).unwrap();
    assert_eq!(o.stdout, expected);
    assert_eq!(o.stdout, std::fs::read_to_string(fixture("hex2_L6.svg")).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex2.svg");
    let o = cli(&[
        "diagram",
        "--cusp",
        &fixture("hex2.json"),
        "--name",
        "hex2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), expected);
}

#[test]
fn diagram_too_small_is_a_domain_error() {
    let o = cli(&[
        "diagram",
        "--cusp",
        &fixture("hex2.json"),
        "--name",
        "hex2",
        "--out",
        "-",
        "--width",
        "60",
        "--height",
        "60",
    ]);
    assert_eq!(o.code, EXIT_DOMAIN);
    assert!(o.stderr.contains("too small"), "{}", o.stderr);
}

#[test]
fn report_matches_library_and_verifies() {
    let o = cli(&["report", "--cusp", &fixture("hex2.json"), "--name", "hex2"]);
    assert_eq!(o.code, EXIT_OK);
    let report = parse_report_str(&o.stdout).unwrap();
    assert_eq!(report, AnalysisReport::compute(&hex2(), 6.0, Some(3.35)).unwrap());
    assert!(report.generated_at.is_none());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    let o = cli(&[
        "report",
        "--cusp",
        &fixture("hex2.json"),
        "--name",
        "hex2",
        "--out",
        p,
        "--stamp",
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert!(parse_report_str(&std::fs::read_to_string(&path).unwrap())
        .unwrap()
        .generated_at
        .is_some());
    assert_eq!(cli(&["report", "--verify", p]).code, EXIT_OK);

    // tamper with a derived field
    let text = std::fs::read_to_string(&path)
        .unwrap()
        .replace("\"max_delta\": 8", "\"max_delta\": 7");
    std::fs::write(&path, text).unwrap();
    let o = cli(&["report", "--verify", p]);
    assert_eq!(o.code, EXIT_DOMAIN);
    assert!(o.stderr.contains("inconsistent"), "{}", o.stderr);
}

#[test]
fn outputs_are_reproducible() {
    let hex = fixture("hex2.json");
    for args in [
        vec!["slopes", "--cusp", &hex, "--name", "hex2"],
        vec!["report", "--cusp", &hex, "--name", "hex2"],
        vec!["diagram", "--cusp", &hex, "--name", "hex2", "--out", "-"],
        vec!["bound", "--json"],
        vec!["horodisk", "--ratio"],
    ] {
        assert_eq!(cli(&args).stdout, cli(&args).stdout);
    }
}

#[test]
fn usage_and_domain_errors() {
    let hex = fixture("hex2.json");
    assert_eq!(cli(&[]).code, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["bound", "--bogus"]).code, EXIT_USAGE);
    assert_eq!(cli(&["bound", "--length", "six"]).code, EXIT_USAGE);
    assert_eq!(cli(&["bound", "--area", "shape"]).code, EXIT_USAGE);
    assert_eq!(cli(&["audit", "--surface", "1,1", "--lengths", "6"]).code, EXIT_USAGE);
    assert_eq!(cli(&["slopes", "--name", "hex2"]).code, EXIT_USAGE);
    assert_eq!(cli(&["report", "--verify", "x.json", "--stamp"]).code, EXIT_USAGE);

    assert_eq!(cli(&["bound", "--length", "-1"]).code, EXIT_DOMAIN);
    assert_eq!(
        cli(&["audit", "--surface", "0,2,0", "--lengths", "1"]).code,
        EXIT_DOMAIN
    );
    assert_eq!(cli(&["slopes", "--cusp", &hex, "--name", "nope"]).code, EXIT_DOMAIN);
    assert_eq!(
        cli(&["slopes", "--cusp", "/nonexistent.json", "--name", "x"]).code,
        EXIT_DOMAIN
    );
    assert_eq!(
        cli(&["lemma-verify", "--cusp", &hex, "--name", "hex2", "--prime", "12"]).code,
        EXIT_DOMAIN
    );

    let o = cli(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("lemma-verify"));
}

#[test]
fn bad_records_warn_but_do_not_block_other_cusps() {
    let o = cli(&[
        "slopes",
        "--cusp",
        &fixture("bad_records.json"),
        "--name",
        "good",
        "--threshold",
        "1",
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stderr.matches("warning:").count(), 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cuspkit");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let ok = status(&["bound", "--length", "6", "--area", "3.35"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("Δ ≤ 10, p = 11, slopes ≤ 12"));
    assert_eq!(status(&["bound", "--length", "0"]).status.code(), Some(1));
    assert_eq!(status(&["bound", "--nope"]).status.code(), Some(2));

    let piped = Command::new(bin)
        .args(["slopes", "--cusp", "-", "--name", "hex2"])
        .stdin(std::fs::File::open(fixture("hex2.json")).unwrap())
        .output()
        .unwrap();
    assert_eq!(piped.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&piped.stdout).contains("12 slopes"));
}
