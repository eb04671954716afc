use cubic_dual_cli::{run, EXIT_INPUT, EXIT_OK};
use proptest::prelude::*;

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["cubic-dual"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out, err) = cli(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn inhomogeneous_input_names_the_term() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.poly");
    std::fs::write(&path, "x0^3 + x1*x2^2 + x3^2\n").unwrap();
    let (code, _, err) = cli(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("x3^2"), "{err}");
}

#[test]
fn fermat_in_p4_has_no_defect() {
    let (code, out, _) = cli(&["analyze", "--family", "fermat", "--n", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("dual defect: 0 "), "{out}");
}

#[test]
fn perazzo_analysis_shows_the_conic() {
    let (code, out, _) = cli(&["analyze", "--family", "perazzo_p4", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("x2^2 - 4*x3*x4"), "{out}");
}

#[test]
fn gen_then_analyze_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("join.poly");
    let (code, _, _) = cli(&["gen", "join_quadrics", "--p", "1", "--q", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("-x0*x3*x4 + x1^2*x4 + x2^2*x3"), "{text}");
    let from_file = json(&["classify", path.to_str().unwrap(), "--seed", "1", "--json"]);
    let from_family = json(&["classify", "--family", "join_quadrics", "--p", "1", "--q", "1", "--seed", "1", "--json"]);
    assert_eq!(from_file["label"], "II");
    for key in ["label", "delta", "kappa", "z_span_dim", "hessian_vanishes"] {
        assert_eq!(from_file[key], from_family[key], "{key}");
    }
}

#[test]
fn gen_fermat_is_a_sum_of_cubes() {
    let (code, out, _) = cli(&["gen", "fermat", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("x0^3 + x1^3 + x2^3 + x3^3"), "{out}");
}

#[test]
fn json_is_byte_identical_for_identical_runs() {
    let args = ["classify", "--family", "join_quadrics", "--p", "2", "--q", "2", "--seed", "5", "--json"];
    let (_, a, _) = cli(&args);
    let (_, b, _) = cli(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!((v["label"].as_str(), v["delta"].as_u64()), (Some("II"), Some(1)));
}

#[test]
fn reports_match_the_schema() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json"))).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in [
        vec!["--family", "perazzo_p4"],
        vec!["--family", "det3_symmetric"],
        vec!["--family", "fermat", "--n", "3"],
        vec!["--family", "cone_over", "--inner", "perazzo_p4"],
    ] {
        let mut full = vec!["classify", "--json"];
        full.extend(args);
        let report = json(&full);
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{full:?}: {errors:?}");
    }
}

#[test]
fn det3_symmetric_is_label_one() {
    let (code, out, _) = cli(&["classify", "--family", "det3_symmetric"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("label: I\n"), "{out}");
}

#[test]
fn cone_over_is_a_cone() {
    let (code, out, _) = cli(&["classify", "--family", "cone_over", "--inner", "fermat", "--n", "3", "--extra", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("label: Cone"), "{out}");
}

#[test]
fn bad_settings_are_input_errors() {
    for args in [
        vec!["classify", "--family", "fermat", "--n", "3", "--prime", "15"],
        vec!["classify", "--family", "fermat", "--n", "3", "--prime", "3"],
        vec!["classify", "--family", "fermat", "--n", "3", "--fibers", "2"],
        vec!["classify", "--family", "join_quadrics", "--p", "4", "--q", "3"],
        vec!["classify", "--family", "join_quadrics"],
        vec!["classify"],
        vec!["frobnicate"],
    ] {
        let (code, _, err) = cli(&args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn arbitrary_input_never_panics(text in "[x0-9^*+ /()\\-\\n:vars]{0,40}") {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fuzz.poly");
        std::fs::write(&path, &text).unwrap();
        let (code, _, _) = cli(&["classify", path.to_str().unwrap(), "--fibers", "5", "--trials", "3"]);
        prop_assert!([0, 1, 2].contains(&code));
    }
}
