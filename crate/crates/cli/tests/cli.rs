use std::path::Path;
use std::process::{Command, Output};

use chiral_cqed::fitting::{synth_spectrum, SpectrumFit};
use chiral_cqed_cli::output::CsvData;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chiral-cqed"));
    c.env_remove("CHIRAL_CQED_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

fn table(text: &str) -> CsvData {
    CsvData::from_reader(text.as_bytes()).unwrap()
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["blockade", "--set", "gama_cw=1"]).status.code(), Some(1));
    assert_eq!(run(&["blockade", "--set", "gamma_cw"]).status.code(), Some(1));
    assert_eq!(run(&["blockade", "--g-steps", "1"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--direction", "both"]).status.code(), Some(1));
    assert_eq!(run(&["validate", "--criteria", "9"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn solver_failures_name_the_detuning() {
    let o = run(&[
        "spectrum",
        "--set",
        "model=reduced",
        "--set",
        "residual_tol=1e-300",
        "--delta-min=-1",
        "--delta-max=1",
        "--delta-steps=3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta_p = -1"));
}

#[test]
fn bare_cavity_spectrum_has_header_and_analytic_depth() {
    let text = ok(&[
        "spectrum",
        "--set",
        "g_cw=0",
        "--set",
        "model=reduced",
        "--delta-min=-2",
        "--delta-max=2",
        "--delta-steps=5",
    ]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!("# chiral-cqed {} spectrum", env!("CARGO_PKG_VERSION"))
    );
    let params = lines.next().unwrap();
    assert!(params.starts_with("# params: gamma_cw=1 "));
    assert!(params.contains(" g_ccw=0 "));
    let t = table(&text);
    assert_eq!(t.columns, ["delta_p", "transmission"]);
    let tr = t.numbers("transmission").unwrap();
    assert!((tr[2] - 4.0 / 9.0).abs() < 1e-8, "{}", tr[2]);
    assert!((tr[0] - tr[4]).abs() < 1e-12);
}

#[test]
fn config_file_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bare cavity\ng_cw = 0\nmodel = reduced\n").unwrap();
    let o = bin()
        .env("CHIRAL_CQED_CONFIG", &cfg)
        .args(["spectrum", "--delta-min=-1", "--delta-max=1", "--delta-steps=2"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("model=reduced"));
    let o = bin()
        .env("CHIRAL_CQED_CONFIG", dir.path().join("missing.cfg"))
        .args(["blockade"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn blockade_output_is_independent_of_worker_count() {
    let args = |jobs: &'static str| {
        [
            "blockade",
            "--set",
            "model=reduced",
            "--g-min=0.5",
            "--g-max=3",
            "--g-steps=7",
            "--jobs",
            jobs,
        ]
    };
    let one = ok(&args("1"));
    let two = ok(&args("3"));
    assert_eq!(one, two);
    let t = table(&one);
    assert_eq!(
        t.columns,
        ["g_cw", "g_ccw", "t_forward", "t_backward", "g2_forward", "g2_backward", "flag"]
    );
    assert_eq!(t.rows.len(), 7);
    assert!(t.strings("flag").unwrap().iter().all(|f| f == "ok"));
}

#[test]
fn phase_diagram_keeps_the_coupling_ratio_and_finds_the_eps() {
    let text = ok(&["phase-diagram", "--g-min=0", "--g-max=4", "--g-steps=9"]);
    let t = table(&text);
    let g = t.numbers("g_cw").unwrap();
    let gc = t.numbers("g_ccw").unwrap();
    let ratio = chiral_cqed::model::CS_COUPLING_RATIO;
    // Each column is rounded to 12 significant digits.
    for (a, b) in g.iter().zip(&gc) {
        assert!((b - ratio * a).abs() <= 1e-11 * b.abs());
    }
    let modes = t.strings("mode").unwrap();
    let re_p = t.numbers("re_e_plus").unwrap();
    let re_m = t.numbers("re_e_minus").unwrap();
    for i in 0..g.len() {
        assert!((re_p[i] + re_m[i]).abs() < 1e-12);
        // The CW subsystem has its EP at g_cw = 1.
        if modes[i] == "cw" && g[i] > 1.0 {
            assert!(re_p[i] > 0.0);
        }
        if modes[i] == "cw" && g[i] <= 1.0 {
            assert_eq!(re_p[i], 0.0);
        }
        // The CCW subsystem stays broken below g_ccw = 21.
        if modes[i] == "ccw" && gc[i] < 21.0 {
            assert_eq!(re_p[i], 0.0);
        }
    }
    assert!(t.strings("fit_status").unwrap().iter().all(String::is_empty));
}

#[test]
fn map_carries_dip_degeneracy_markers() {
    let text = ok(&[
        "map",
        "--set",
        "model=reduced",
        "--g-min=1",
        "--g-max=2",
        "--g-steps=3",
        "--delta-min=-1",
        "--delta-max=1",
        "--delta-steps=3",
    ]);
    let t = table(&text);
    assert!(text.contains("fock_cutoff=2"));
    let kind = t.strings("kind").unwrap();
    let mode = t.strings("mode").unwrap();
    let g = t.numbers("g_cw").unwrap();
    let gc = t.numbers("g_ccw").unwrap();
    let markers: Vec<usize> = (0..kind.len()).filter(|&i| kind[i] == "tdd").collect();
    assert_eq!(markers.len(), 2);
    for i in markers {
        match mode[i].as_str() {
            "cw" => assert!((g[i] - 1.58).abs() < 0.01),
            "ccw" => assert!((gc[i] - 31.78).abs() < 0.02),
            other => panic!("unexpected mode {other}"),
        }
    }
    assert_eq!(kind.iter().filter(|k| *k == "sample").count(), 2 * 3 * 3);
}

#[test]
fn fit_recovers_a_synthetic_doublet() {
    let dir = tempfile::tempdir().unwrap();
    let truth = SpectrumFit::lineshape((3.0, -3.0), (1.2, 0.9), 30.0, 300.0);
    let grid: Vec<f64> = (0..201).map(|i| -10.0 + 0.1 * i as f64).collect();
    let pts = synth_spectrum(&truth, &grid, 0.0, 0).unwrap();
    let path = dir.path().join("spectrum.csv");
    pts.write_csv(std::fs::File::create(&path).unwrap()).unwrap();
    let text = ok(&["fit", "--input", path.to_str().unwrap()]);
    let t = table(&text);
    assert_eq!(t.strings("converged").unwrap(), ["true"]);
    let split = t.numbers("splitting").unwrap()[0];
    assert!((split - 6.0).abs() < 1e-8, "{split}");
}

#[test]
fn plots_are_svg_and_check_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("blockade.csv");
    ok(&[
        "blockade",
        "--set",
        "model=reduced",
        "--g-steps=5",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let svg = dir.path().join("blockade.svg");
    ok(&["plot", "--input", csv.to_str().unwrap(), "--kind", "blockade"]);
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.contains("<svg"));
    let again = dir.path().join("again.svg");
    ok(&[
        "plot",
        "--input",
        csv.to_str().unwrap(),
        "--kind",
        "blockade",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(body, std::fs::read_to_string(&again).unwrap());
    let o = run(&["plot", "--input", csv.to_str().unwrap(), "--kind", "spectrum"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn map_and_phase_plots_render() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.csv");
    ok(&[
        "map",
        "--set",
        "model=reduced",
        "--g-min=1",
        "--g-max=2",
        "--g-steps=3",
        "--delta-steps=4",
        "--out",
        map.to_str().unwrap(),
    ]);
    ok(&["plot", "--input", map.to_str().unwrap(), "--kind", "map"]);
    assert!(Path::new(&map.with_extension("svg")).exists());
    let phase = dir.path().join("phase.csv");
    ok(&["phase-diagram", "--g-steps=5", "--out", phase.to_str().unwrap()]);
    ok(&["plot", "--input", phase.to_str().unwrap(), "--kind", "phase"]);
    assert!(Path::new(&phase.with_extension("svg")).exists());
}

#[test]
fn validate_recomputes_eps_for_a_perturbed_device() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let o = run(&[
        "validate",
        "--set",
        "kappa_ex=2.0",
        "--criteria",
        "1",
        "--out",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("g_EP,cw = 0.75"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["criteria"][0]["status"], "PASS");
}

#[test]
fn validate_fails_at_a_tiny_cutoff() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let o = run(&[
        "validate",
        "--set",
        "fock_cutoff=1",
        "--criteria",
        "5",
        "--out",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("criterion 5 (blockade windows): FAIL"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(json["passed"], false);
}
