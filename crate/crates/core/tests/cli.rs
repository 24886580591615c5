use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_lorentz-flow");

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("lorentz-flow-cli-{}-{name}", std::process::id()))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn summary_value(summary: &str, key: &str) -> f64 {
    summary
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` in\n{summary}"))
        .trim()
        .parse()
        .unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn cyclotron_closes_after_one_period() {
    let out = scratch("cyc.csv");
    let o = run(&["simulate", scenario("cyclotron.scenario").to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let displacement = summary_value(&stdout(&o), "spatial displacement:");
    let radius = 0.5;
    assert!(displacement / radius <= 1e-9, "{displacement:e}");
    let rows = csv_rows(&std::fs::read_to_string(&out).unwrap());
    // stride 10 over 1000 steps
    assert_eq!(rows.len(), 101);
    std::fs::remove_file(out).ok();
}

#[test]
fn free_particle_is_a_straight_line() {
    let o = run(&["simulate", scenario("free.scenario").to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("tau,t,x,y,z,u0,u1,u2,u3,shell_defect\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 101);
    for r in &rows {
        assert_eq!(r[9], 0.0);
        assert!((r[1] - 1.25 * r[0]).abs() < 1e-13);
        assert!((r[2] - 0.75 * r[0]).abs() < 1e-13);
        assert_eq!((r[3], r[4]), (0.0, 0.0));
    }
    let summary = String::from_utf8(o.stderr).unwrap();
    assert_eq!(summary_value(&summary, "max shell defect:"), 0.0);
}

#[test]
fn hyperbolic_gamma_column_is_cosh() {
    let o = run(&["simulate", scenario("hyperbolic.scenario").to_str().unwrap()]);
    assert!(o.status.success());
    for r in csv_rows(&stdout(&o)) {
        let expected = r[0].cosh();
        assert!((r[5] - expected).abs() <= 1e-10 * expected, "tau {}: {} vs {expected}", r[0], r[5]);
    }
}

#[test]
fn simulate_is_bit_reproducible() {
    let a = run(&["simulate", scenario("gradient.scenario").to_str().unwrap()]);
    let b = run(&["simulate", scenario("gradient.scenario").to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stride_flag_overrides_scenario() {
    let o = run(&["simulate", scenario("free.scenario").to_str().unwrap(), "--stride", "25"]);
    let rows = csv_rows(&stdout(&o));
    let taus: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(taus.len(), 5);
    assert!((taus[4] - 10.0).abs() < 1e-12);
}

fn write_scenario(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

const BASE: &str = "name = t\nk = 1\nE = 0,0,0\nB = 0,0,0\nfield_map = uniform\nx0 = 0,0,0,0\nu0_spatial = 0,0,0\ndt = 0.1\nn_steps = 10\nstepper = EXACT\n";

#[test]
fn parse_and_config_errors_exit_with_two() {
    let bad_dt = write_scenario("dt.scenario", &BASE.replace("dt = 0.1", "dt = 0"));
    let o = run(&["simulate", bad_dt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dt must be positive"));

    let exact_grad = write_scenario("grad.scenario", &BASE.replace("field_map = uniform", "field_map = b3_gradient(1)"));
    assert_eq!(run(&["simulate", exact_grad.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(run(&["simulate", "/nonexistent/file.scenario"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--trials", "0"]).status.code(), Some(2));
    for p in [bad_dt, exact_grad] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn integrator_blow_up_exits_with_three() {
    let text = BASE
        .replace("E = 0,0,0", "E = 3,0,0")
        .replace("stepper = EXACT", "stepper = RK4")
        .replace("dt = 0.1", "dt = 0.9")
        .replace("n_steps = 10", "n_steps = 50");
    let p = write_scenario("blowup.scenario", &text);
    let o = run(&["simulate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("integrator abort"));
    std::fs::remove_file(p).ok();
}

#[test]
fn transform_identity_echoes_fields() {
    let o = run(&["transform", "--e", "1,-2,0.5", "--b", "0,3,0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = |prefix: &str| text.lines().find(|l| l.starts_with(prefix)).unwrap().to_string();
    assert_eq!(line("E  =")[5..], line("E' =")[5..]);
    assert_eq!(line("B  =")[5..], line("B' =")[5..]);
    assert!(text.contains("invariants: PASS"));
}

#[test]
fn transform_perpendicular_boost_passes() {
    let o = run(&["transform", "--e", "1,0,0", "--boost-axis", "3", "--rapidity", "-0.8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("invariants: PASS"));
    let e1: f64 = text.lines().find(|l| l.starts_with("E' =")).unwrap()[5..]
        .split(',')
        .next()
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((e1 - 0.8_f64.cosh()).abs() < 1e-14);
}

#[test]
fn transform_full_turn() {
    let o = run(&["transform", "--e", "0.3,0.4,0.5", "--b", "-1,0.2,0", "--rotation-axis", "2", "--angle", "6.283185307179586"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let parse = |prefix: &str| -> Vec<f64> {
        text.lines().find(|l| l.starts_with(prefix)).unwrap()[5..]
            .split(',')
            .map(|v| v.trim().parse().unwrap())
            .collect()
    };
    for (a, b) in parse("E' =").iter().zip(parse("E  =")).chain(parse("B' =").iter().zip(parse("B  ="))) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn transform_rejects_mixed_flags() {
    let o = run(&["transform", "--boost-axis", "1", "--rapidity", "1", "--rotation-axis", "2", "--angle", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["transform", "--boost-axis", "4", "--rapidity", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let a = run(&["verify", "--seed", "42", "--trials", "100"]);
    let b = run(&["verify", "--seed", "42", "--trials", "100"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("PASS generator_derivative"));
    assert!(text.contains("PASS product_defect_order"));
    assert!(!text.contains("FAIL"));
}
