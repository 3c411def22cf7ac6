use std::path::PathBuf;

use tropmirror::mirror::PresentationJson;
use tropmirror::{DemoReport, TropicalDiagram};
use tropmirror_cli::{run, DualOutputJson, Outcome, TransportJson, ValidateJson};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tm(args: &[&str]) -> Outcome {
    run(std::iter::once("tropmirror").chain(args.iter().copied()))
}

const INPUTS: [&str; 5] = ["c3.json", "focus_focus.json", "conifold.json", "kp2.json", "kp1p1.json"];

#[test]
fn validate_c3() {
    let out = tm(&["validate", &data("c3.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: ValidateJson = serde_json::from_str(&out.stdout).unwrap();
    assert!(r.trivalent && r.balanced && r.primitive_directions && r.connected);
    assert_eq!(r.smooth, Some(true));
    assert!(r.failures.is_empty());
}

#[test]
fn validate_reports_unbalanced_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"dim":2,"vertices":[["0","0"]],"rays":[{"at":0,"dir":[1,0]},{"at":0,"dir":[0,1]},{"at":0,"dir":[-1,-2]}]}"#,
    )
    .unwrap();
    let out = tm(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    let r: ValidateJson = serde_json::from_str(&out.stdout).unwrap();
    assert!(!r.balanced);
    assert_eq!(r.smooth, None);
}

#[test]
fn mirror_relations() {
    let rel = |f: &str| {
        let out = tm(&["mirror", &data(f)]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        serde_json::from_str::<PresentationJson>(&out.stdout).unwrap().relation
    };
    assert_eq!(rel("focus_focus.json"), "x*y - (1 + u)");
    assert_eq!(rel("c3.json"), "x*y - (1 + u1 + u2)");
    assert_eq!(rel("conifold.json"), "x*y - (1 + u1 + u2 + t^{1}*u1*u2)");
}

#[test]
fn mirror_options() {
    let dir = tempfile::tempdir().unwrap();
    let corr = dir.path().join("c.json");
    std::fs::write(&corr, r#"[{"vertex":[1,0],"terms":[{"exp":"1","coeff":"2"}]}]"#).unwrap();
    let out = tm(&["mirror", &data("c3.json"), "--corrections", corr.to_str().unwrap(), "-E", "3/2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let p: PresentationJson = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(p.relation, "x*y - (1 + (1*t^{0} + 2*t^{1})*u1 + u2)");

    // the raw presentation depends on the base point, the normal form does not
    let raw = |b: &str| tm(&["mirror", &data("c3.json"), &format!("--base-point={b}"), "--raw"]).stdout;
    assert_ne!(raw("1/2,1/3"), raw("-3,7/2"));
    let norm = |b: &str| tm(&["mirror", &data("c3.json"), &format!("--base-point={b}")]).stdout;
    assert_eq!(norm("1/2,1/3"), norm("-3,7/2"));

    assert_eq!(tm(&["mirror", &data("c3.json"), "-E", "0"]).code, 2);
    assert_eq!(tm(&["mirror", &data("c3.json"), "--base-point", "1/0,2"]).code, 2);
    std::fs::write(&corr, r#"[{"vertex":[1,0],"terms":[{"exp":"0","coeff":"2"}]}]"#).unwrap();
    let out = tm(&["mirror", &data("c3.json"), "--corrections", corr.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("positive valuation"));
}

#[test]
fn zero_heights_are_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, r#"{"charges":[[1,1,-1,-1]],"heights":["0","0","0","0"]}"#).unwrap();
    let out = tm(&["web", "--charges", zero.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("degenerate Kähler parameters"), "{}", out.stderr);
}

#[test]
fn usage_errors() {
    let out = tm(&["frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"));
    assert_eq!(tm(&[]).code, 2);
    assert_eq!(tm(&["render", &data("c3.json"), "--format", "png"]).code, 2);
    assert_eq!(tm(&["dual", &data("c3.json"), "--root-face", "a,b"]).code, 2);
    let help = tm(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("wallcross-demo"));
}

#[test]
fn missing_file_is_a_failure() {
    let out = tm(&["validate", "/nonexistent/diagram.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.starts_with("error: "));
}

#[test]
fn outputs_are_deterministic() {
    for f in INPUTS {
        for cmd in [&["validate"][..], &["dual"], &["web"], &["mirror"], &["render", "--format", "dot"], &["render"]] {
            let mut args = cmd.to_vec();
            let path = data(f);
            args.push(&path);
            let (a, b) = (tm(&args), tm(&args));
            assert_eq!(a, b, "{args:?}");
            assert!(a.code == 0 || (cmd[0] == "dual" && f == "focus_focus.json"), "{args:?}: {}", a.stderr);
        }
    }
    assert_eq!(tm(&["wallcross-demo"]), tm(&["wallcross-demo"]));
}

#[test]
fn emitted_json_round_trips() {
    for f in INPUTS {
        let web = tm(&["web", &data(f)]).stdout;
        let diag = TropicalDiagram::from_json_str(&web).unwrap();
        assert_eq!(diag.to_json_string() + "\n", web);
        // a written diagram reads back to the same mirror
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("web.json");
        std::fs::write(&path, &web).unwrap();
        assert_eq!(tm(&["mirror", path.to_str().unwrap()]).stdout, tm(&["mirror", &data(f)]).stdout);

        let m = tm(&["mirror", &data(f)]).stdout;
        let p: PresentationJson = serde_json::from_str(&m).unwrap();
        assert_eq!(serde_json::to_string_pretty(&p).unwrap() + "\n", m);

        let v = tm(&["validate", &data(f)]).stdout;
        let r: ValidateJson = serde_json::from_str(&v).unwrap();
        assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", v);
    }
    let d = tm(&["dual", &data("kp2.json")]).stdout;
    let j: DualOutputJson = serde_json::from_str(&d).unwrap();
    assert_eq!(serde_json::to_string_pretty(&j).unwrap() + "\n", d);
    let demo = tm(&["wallcross-demo", "--json"]).stdout;
    let j: tropmirror::analytic::DemoReportJson = serde_json::from_str(&demo).unwrap();
    assert_eq!(serde_json::to_string_pretty(&j).unwrap() + "\n", demo);
}

#[test]
fn dual_gauges() {
    let dual = |extra: &[&str]| {
        let path = data("c3.json");
        let mut args = vec!["dual", path.as_str()];
        args.extend_from_slice(extra);
        let out = tm(&args);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let j: DualOutputJson = serde_json::from_str(&out.stdout).unwrap();
        let mut pts = j.dual.lattice_points;
        pts.sort();
        pts
    };
    assert_eq!(dual(&[]), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    assert_eq!(dual(&["--negate"]), vec![vec![-1, 0], vec![0, -1], vec![0, 0]]);
    assert_eq!(dual(&["--root-face", "1,0"]), vec![vec![-1, 0], vec![-1, 1], vec![0, 0]]);
    assert_eq!(tm(&["dual", &data("c3.json"), "--root-face", "5,5"]).code, 1);
    let svg = tm(&["dual", &data("c3.json"), "--svg"]).stdout;
    assert!(svg.starts_with("<svg"));
}

#[test]
fn render_formats() {
    assert!(tm(&["render", &data("kp1p1.json")]).stdout.starts_with("<svg"));
    assert!(tm(&["render", &data("kp1p1.json"), "--format", "dot"]).stdout.starts_with("graph"));
    let json = tm(&["render", &data("c3.json"), "--format", "json"]).stdout;
    assert_eq!(TropicalDiagram::from_json_str(&json).unwrap(), TropicalDiagram::c3());
}

#[test]
fn transport_around_focus_focus_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.json");
    std::fs::write(&path, r#"[["1","1"],["1","-1"],["-1","-1"],["-1","1"],["1","1"]]"#).unwrap();
    let out = tm(&["transport", &data("focus_focus.json"), "--path", path.to_str().unwrap(), "--class", "0,1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let t: TransportJson = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(t.crossings, "p0+");
    assert_eq!(t.class, vec![1, 1]);
    assert_eq!(t.chambers, ["V+", "V-", "V-", "V+", "V+"]);

    // with the wall lowered under the loop nothing is crossed
    let square = r#"[["1","1"],["1","-1"],["-1","-1"],["-1","1"],["1","1"]]"#;
    std::fs::write(&path, format!(r#"{{"points":{square},"tau":{{"p0":"-2"}}}}"#)).unwrap();
    let out = tm(&["transport", &data("focus_focus.json"), "--path", path.to_str().unwrap(), "--class", "0,1"]);
    let t: TransportJson = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(t.crossings, "");
    assert_eq!(t.chambers, ["V+"; 5]);
    assert_eq!(t.class, vec![0, 1]);

    // raised above it, the loop crosses the cut there and back
    std::fs::write(&path, format!(r#"{{"points":{square},"tau":{{"p0":"2"}}}}"#)).unwrap();
    let out = tm(&["transport", &data("focus_focus.json"), "--path", path.to_str().unwrap(), "--class", "0,1"]);
    let t: TransportJson = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(t.crossings, "p0+ p0-");
    assert_eq!(t.class, vec![0, 1]);

    // through the discriminant
    std::fs::write(&path, r#"[["0","1"],["0","-1"]]"#).unwrap();
    let out = tm(&["transport", &data("focus_focus.json"), "--path", path.to_str().unwrap(), "--class", "0,1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("discriminant"), "{}", out.stderr);
}

#[test]
fn wallcross_demo_text_and_failure() {
    let out = tm(&["wallcross-demo", "-E", "1/2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("h+(x)·h+(y): 1 + z2\n"));
    assert!(out.stdout.ends_with("PASS\n"));
    assert_eq!(tm(&["wallcross-demo", "-E", "0"]).code, 2);
    // the failure path of the report itself
    let report: DemoReport = tropmirror::analytic::focus_focus_demo_with(
        &tropmirror::int(10),
        &tropmirror::LatticeVec::new(vec![0, 2]),
    )
    .unwrap();
    assert!(!report.passed);
}

#[test]
fn eval_series() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(
        &path,
        r#"{"chamber":"V+","domain":[["1","2"],["-1","1"]],"truncation":"10",
            "terms":[{"exponent":[-1,0],"coefficient":[{"exp":"0","coeff":"1"}]},
                     {"exponent":[-1,1],"coefficient":[{"exp":"0","coeff":"1"}]}],
            "families":[]}"#,
    )
    .unwrap();
    let out = tm(&["eval", path.to_str().unwrap(), "--point", "1,1/2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "1*t^{-1} + 1*t^{-1/2}\n");
    assert_eq!(tm(&["eval", path.to_str().unwrap(), "--point", "5,0"]).code, 1);
    assert_eq!(tm(&["eval", path.to_str().unwrap(), "--point", "x"]).code, 2);
}
