use std::path::Path;
use std::process::{Command, Output};

const SCENARIO: &str = "[graph]\nkind = \"linear\"\nn = 3\n\n[params]\nr = 1.5\ntemperature_k = 0.01\ngamma_over_kappa = 1e-6\n";

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mechcluster")).args(args).current_dir(dir).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simulate_prints_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SCENARIO);

    let o = run(&["simulate", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("modes            3 (linear)"), "{text}");
    assert!(text.contains("fidelity"));

    let o = run(&["simulate", &cfg, "--json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 3);
    let f = v["fidelity"].as_f64().unwrap();
    assert!(f > 0.9 && f <= 1.0, "{f}");
    assert_eq!(v["nullifier_db"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &SCENARIO.replace("r = 1.5", "r = 1.5\nsqueezing = 3"));
    let o = run(&["simulate", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("squeezing"));

    let o = run(&["simulate", "missing.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unstable_config_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = SCENARIO.replace("n = 3", "n = 2") + "\n[overrides]\nkappa_hz = [0.0, 0.0]\n";
    let cfg = write(dir.path(), "u.toml", &text);
    let o = run(&["simulate", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Hurwitz"));
}

#[test]
fn sweep_with_failing_point_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let text = SCENARIO.to_string() + "\n[sweep]\naxis = \"temperature\"\nvalues = [-1.0, 0.01, 0.1]\n";
    let cfg = write(dir.path(), "sw.toml", &text);
    let o = run(&["sweep", &cfg, "--out", "t.csv", "--jobs", "2"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(dir.path().join("t.csv.meta.toml").exists());

    let ok = SCENARIO.to_string() + "\n[sweep]\naxis = \"r\"\nvalues = [1.0, 2.0]\n";
    let cfg = write(dir.path(), "ok.toml", &ok);
    let o = run(&["sweep", &cfg, "--out", "r.csv", "--gnuplot"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("r.csv.gp").exists());
}

#[test]
fn drives_table_has_one_row_per_tone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SCENARIO);
    let o = run(&["drives", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 3 * 6);
    assert!(text.lines().next().unwrap().contains("detuning"));
}

#[test]
fn check_rwa_reports_and_fails_on_strong_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SCENARIO);
    let o = run(&["check-rwa", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(advisory)") && text.ends_with("overall: ok\n"), "{text}");

    let strong = write(dir.path(), "g.toml", &(SCENARIO.to_string() + "gtilde_over_kappa = 8.0\n"));
    let o = run(&["check-rwa", &strong], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("overall: VIOLATED"));
    let o = run(&["simulate", &strong, "--strict-rwa"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn preset_emits_a_loadable_sweep_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["preset", "fig7", "--emit-config", "--graph", "complete", "--n", "10"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("axis = \"r\"") && text.contains("kind = \"complete\""), "{text}");

    let short = text.replace("points = 61", "points = 2");
    let cfg = write(dir.path(), "p.toml", &short);
    let o = run(&["sweep", &cfg, "--out", "p.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let o = run(&["preset", "fig7", "--emit-config", "--n", "8"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["preset", "fig42"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
