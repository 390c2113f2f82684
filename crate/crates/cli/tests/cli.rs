use std::path::Path;
use std::process::{Command, Output};

fn wavefront(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavefront"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

const CUSP_FAMILY: &str = r#"
k = 1
n = 2
expr = "q1^4 + x1*q1^2 + x2*q1"
domain = [[-3, 3], [-6, 6], [-6, 6]]
base = [0, 0, 0]
"#;

#[test]
fn verify_reports_every_condition() {
    let o = wavefront(&["verify", "--catalog", "cusp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for line in ["morse family", "graph-like", "non-degenerate", "morse hypersurface"] {
        let hit = text.lines().find(|l| l.starts_with(line)).unwrap_or_else(|| panic!("no `{line}` line in\n{text}"));
        assert!(hit.contains("pass"), "{hit}");
    }
}

#[test]
fn verify_reads_a_family_file() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("cusp.fam");
    std::fs::write(&fam, CUSP_FAMILY).unwrap();
    let o = wavefront(&["verify", "--family", path_arg(&fam)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("non-degenerate: pass"));
}

#[test]
fn broken_family_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("bad.fam");
    std::fs::write(&fam, "k = 1\nn = 2\nexpr = \"q1^4 + x1*\"\n").unwrap();
    let o = wavefront(&["verify", "--family", path_arg(&fam)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn burgers_breaking_time() {
    let o = wavefront(&["burgers", "--t", " 0:1:0.001", "--report-breaking", "--count-at", "3.14159265358979,0.8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("t* = 0.5000"), "{text}");
    assert!(text.contains(": 3\n"), "{text}");
}

#[test]
fn bad_range_exits_with_validation_code() {
    let o = wavefront(&["burgers", "--t", "1:0:0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = wavefront(&["ode-gallery", "--germ", "4", "--t", "a:b:c"]);
    assert_eq!(o.status.code(), Some(2));
    let o = wavefront(&["front", "--catalog", "nonesuch", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_germ_is_a_numerical_error() {
    let o = wavefront(&["ode-gallery", "--germ", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnknownGerm"), "{}", stderr(&o));
}

#[test]
fn versal_reports_defect_and_witnesses() {
    let ok = wavefront(&["versal", "--f", "q1^4", "--dfdx", "q1;q1^2"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let text = stdout(&ok);
    assert!(text.contains("lagrangian stability: pass (defect 0)"), "{text}");
    assert!(text.contains("S.P+ versality: pass (defect 0)"), "{text}");
    assert!(text.contains("determinacy dimension: 3"), "{text}");

    let short = wavefront(&["versal", "--f", "q1^4", "--dfdx", "q1"]);
    let text = stdout(&short);
    assert!(text.contains("lagrangian stability: fail (defect 1)"), "{text}");
    assert!(text.contains("witnesses: q1^2"), "{text}");

    let regular = wavefront(&["versal", "--f", "q1 + q1^2"]);
    assert_eq!(regular.status.code(), Some(1));
    assert!(stderr(&regular).contains("NotSingularGerm"), "{}", stderr(&regular));
}

#[test]
fn front_csv_has_the_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("front.csv");
    let o = wavefront(&["front", "--catalog", "cusp", "--t", "0.5", "--csv", path_arg(&csv)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,q1,label"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 100);
    assert!(rows.iter().all(|r| r.starts_with("0.5,") && r.ends_with(",front")));

    let csv3 = dir.path().join("umbilic.csv");
    let o = wavefront(&["caustic", "--catalog", "elliptic_umbilic", "--csv", path_arg(&csv3)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let head = std::fs::read_to_string(&csv3).unwrap();
    assert_eq!(head.lines().next(), Some("t,x1,x2,x3,q1,q2,label"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("d{i}.csv"));
        let svg = dir.path().join(format!("d{i}.svg"));
        let o = wavefront(&[
            "discriminant",
            "--catalog",
            "cusp",
            "--t",
            "-1:1:0.5",
            "--csv",
            path_arg(&csv),
            "--svg",
            path_arg(&svg),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        texts.push((std::fs::read(&csv).unwrap(), std::fs::read(&svg).unwrap(), o.stdout));
    }
    assert!(texts[0] == texts[1]);
}

#[test]
fn ellipse_parallels_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("out.svg");
    let o = wavefront(&[
        "parallels",
        "--curve",
        "ellipse",
        "--a",
        "2",
        "--b",
        "1",
        "--r",
        " -2.8:-0.4:0.2",
        "--svg",
        path_arg(&svg),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("version=\"1.1\""));
    assert_eq!(text.matches("<polyline class=\"front\"").count(), 13);
    assert!(text.matches("<polyline class=\"caustic\"").count() >= 1);
    let report = stdout(&o);
    assert!(report.contains("r = -1: 4 cusps"), "{report}");
    let worst: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("largest cusp distance to the evolute: "))
        .expect("distance line")
        .parse()
        .unwrap();
    assert!(worst < 1e-3);
}

#[test]
fn evolute_cusps_of_the_ellipse() {
    let o = wavefront(&["evolute", "--curve", "ellipse", "--a", "2", "--b", "1"]);
    let text = stdout(&o);
    for c in ["(1.500000, 0.000000)", "(-1.500000, 0.000000)", "(0.000000, 3.000000)", "(0.000000, -3.000000)"] {
        assert!(text.contains(c), "{c} missing from\n{text}");
    }
}

#[test]
fn gallery_fronts_and_discriminant() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let o = wavefront(&["ode-gallery", "--germ", "5", "--csv", path_arg(&csv)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("(clairaut)"));
    let cusps = text.lines().find_map(|l| l.strip_prefix("cusps per level: ")).unwrap();
    assert!(cusps.split(' ').all(|c| c == "0"), "{cusps}");
    let data = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(data.lines().next(), Some("t,x1,x2,q1,q2,label"));
    assert!(data.lines().any(|l| l.ends_with(",delta")));
}

#[test]
fn config_file_supplies_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scene.toml");
    std::fs::write(&cfg, "germ = 4\nt = \"-1:1:1\"\n").unwrap();
    let o = wavefront(&["ode-gallery", "--config", path_arg(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("fronts: 3 levels"));
    let o = wavefront(&["ode-gallery", "--config", path_arg(&cfg), "--germ", "5"]);
    assert!(stdout(&o).contains("germ 5"));
}

#[test]
fn unwritable_output_is_rejected_up_front() {
    let o = wavefront(&["burgers", "--csv", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_defaults() {
    let o = wavefront(&["front", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("--seed-density") && text.contains("--tol") && text.contains("Defaults:"));
}
