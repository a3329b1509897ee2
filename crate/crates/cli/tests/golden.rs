//! Golden-output regression tests, one or more per subcommand. Set
//! `WIDTHLAB_BLESS=1` to rewrite the expected files.

use std::fs;
use std::path::{Path, PathBuf};

use widthlab::io::{body_to_string, load_body, save_body};
use widthlab::DirectionGrid;

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let data = dir("data");
    let argv: Vec<String> = std::iter::once("widthlab".to_string())
        .chain(args.iter().map(|a| match a.strip_prefix('@') {
            Some(file) => data.join(file).display().to_string(),
            None => a.to_string(),
        }))
        .collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = widthlab_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden(name: &str, args: &[&str], expected_code: i32) {
    let (code, out, err) = run(args);
    assert_eq!(code, expected_code, "{name}: stderr {err}");
    let path = dir("golden").join(format!("{name}.out"));
    if std::env::var_os("WIDTHLAB_BLESS").is_some() {
        fs::write(&path, &out).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(out, expected, "{name} drifted from its golden output");
}

#[test]
fn width_check_ball() {
    golden("width_check_ball", &["width-check", "--body", "@ball.json", "--grid", "4096"], 0);
    let (_, out, _) = run(&["width-check", "--body", "@ball.json", "--grid", "4096"]);
    assert!(out.contains("\"spread\":0") && out.contains("\"mean\":2"));
}

#[test]
fn width_check_csv() {
    golden("width_check_reuleaux_csv", &["width-check", "--body", "@reuleaux.json", "--grid", "16", "--format", "csv"], 0);
}

#[test]
fn width_check_expect_constant_fails_on_triangle() {
    golden("width_check_triangle", &["width-check", "--body", "@triangle.json", "--grid", "64", "--expect-constant"], 1);
}

#[test]
fn hausdorff() {
    golden("hausdorff", &["hausdorff", "--body", "@ball.json", "--other", "@origin.json", "--grid", "64"], 0);
}

#[test]
fn chebyshev() {
    golden("chebyshev_reuleaux", &["chebyshev", "--body", "@reuleaux.json", "--grid", "1024"], 0);
    golden("chebyshev_triangle", &["chebyshev", "--body", "@triangle.json", "--grid", "64"], 0);
}

#[test]
fn reuleaux() {
    golden("reuleaux_pentagon", &["reuleaux", "--width", "2", "--sides", "5"], 0);
    golden("reuleaux_csv", &["reuleaux", "--grid", "12", "--format", "csv"], 0);
    golden("reuleaux_mixture", &["reuleaux", "--mixture", "2", "--seed", "3"], 0);
}

#[test]
fn gram_rank() {
    golden("gram_rank_8", &["gram-rank", "--l", "8", "--grid", "4096"], 0);
    let (_, out, _) = run(&["gram-rank", "--l", "8", "--grid", "4096"]);
    assert!(out.contains("\"numerical_rank\":8"));
    golden("gram_rank_3_csv", &["gram-rank", "--l", "3", "--grid", "1024", "--format", "csv"], 0);
}

#[test]
fn tetra_sweep() {
    golden("tetra_sweep", &["tetra-sweep", "--grid", "2000"], 0);
}

#[test]
fn homotopy_trace() {
    golden("homotopy_trace", &["homotopy-trace", "--body", "@reuleaux.json", "--steps", "5", "--grid", "512", "--format", "csv"], 0);
}

#[test]
fn pair_sum() {
    golden("pair_sum", &["pair-sum", "--left", "@ball.json", "--right", "@origin.json", "--grid", "256"], 0);
    golden("pair_sum_rejected", &["pair-sum", "--left", "@ball.json", "--right", "@triangle.json", "--grid", "256"], 1);
}

#[test]
fn dim1() {
    let (code, out, _) = run(&["dim1", "--forward", "--interval", "0", "2"]);
    assert_eq!((code, out.as_str()), (0, "{\"d\":2,\"mid\":1}\n"));
    golden("dim1_forward", &["dim1", "--forward", "--interval", "0", "2"], 0);
    golden("dim1_pair", &["dim1", "--forward", "--interval", "-1", "1", "--second", "-2", "2"], 0);
    golden("dim1_inverse", &["dim1", "--inverse", "--params", "2", "1", "0", "--format", "csv"], 0);
}

#[test]
fn validation_errors_exit_2_with_one_line() {
    for args in [
        vec!["frobnicate"],
        vec!["width-check", "--body", "@bad_radius.json"],
        vec!["width-check", "--body", "@missing.json"],
        vec!["width-check", "--body", "@ball.json", "--grid", "7"],
        vec!["width-check", "--body", "@ball.json", "--tol", "0"],
        vec!["hausdorff", "--body", "@ball.json", "--other", "@ball3.json"],
        vec!["dim1", "--inverse", "--params", "1", "3", "0"],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
    let (_, _, err) = run(&["width-check", "--body", "@bad_radius.json"]);
    assert!(err.contains("/expr/radius"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let args = ["reuleaux", "--mixture", "3", "--seed", "11"];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn body_files_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let grid = DirectionGrid::new(2, 512).unwrap();
    for name in ["ball.json", "reuleaux.json", "triangle.json"] {
        let body = load_body(dir("data").join(name)).unwrap();
        let path = tmp.path().join(name);
        save_body(&body, &path).unwrap();
        let back = load_body(&path).unwrap();
        assert_eq!(body_to_string(&back), body_to_string(&body));
        let (a, b) = (body.sample_support(&grid).unwrap(), back.sample_support(&grid).unwrap());
        assert!(a.sup_distance(&b).unwrap() <= 1e-12);
    }
}
