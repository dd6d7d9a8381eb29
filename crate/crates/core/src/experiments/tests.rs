use super::*;
use crate::graphs::GraphKind;

fn trivial_gamma_sweep() -> SweepSpec {
    SweepSpec {
        axis: SweepAxis::Gamma,
        grid: Grid::List { values: vec![1e-6, 1e-5, 1e-4] },
        base: ScenarioConfig::standard(GraphKind::Linear, 1, 1e-6),
        label: None,
    }
}

#[test]
fn grid_values() {
    let g = Grid::log(1e-8, 1e-2, 7).values().unwrap();
    assert_eq!(g.len(), 7);
    for (i, v) in g.iter().enumerate() {
        assert!((v.log10() - (-8.0 + i as f64)).abs() < 1e-12);
    }
    assert_eq!(Grid::linear(0.0, 4.0, 5).values().unwrap(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    assert_eq!(Grid::linear(1.0, 9.0, 1).values().unwrap(), vec![1.0]);
    assert_eq!(Grid::List { values: vec![3.0, 2.0] }.values().unwrap(), vec![3.0, 2.0]);
    for bad in [
        Grid::List { values: vec![] },
        Grid::List { values: vec![1.0, 1.0] },
        Grid::List { values: vec![1.0, 3.0, 2.0] },
        Grid::log(0.0, 1.0, 3),
        Grid::linear(0.0, 1.0, 0),
    ] {
        assert!(bad.values().is_err(), "{bad:?}");
    }
}

#[test]
fn sweep_file_round_trip() {
    let spec = preset(Preset::Fig4);
    let text = spec.to_toml().unwrap();
    assert!(text.contains("[sweep]"));
    assert_eq!(SweepSpec::from_toml(&text).unwrap(), spec);

    let hand = "[graph]\nkind = \"linear\"\nn = 2\n[params]\nr = 1.0\ntemperature_k = 0.01\ngamma_over_kappa = 1e-6\n\
                [sweep]\naxis = \"r\"\nvalues = [0.5, 1.0]\n";
    let s = SweepSpec::from_toml(hand).unwrap();
    assert_eq!(s.axis, SweepAxis::R);
    assert_eq!(s.grid.values().unwrap(), vec![0.5, 1.0]);
    assert!(SweepSpec::from_toml(&hand.replace("axis = \"r\"", "axis = \"kappa\"")).is_err());
    assert!(SweepSpec::from_toml(&hand.replace("[0.5, 1.0]", "[1.0, 0.5, 0.7]")).is_err());
}

#[test]
fn near_zero_dissipation_point() {
    for kind in GraphKind::ALL {
        let row = run_point(&ScenarioConfig::standard(kind, 4, 1e-12), false).unwrap();
        assert!(row.fidelity >= 0.999);
        for db in &row.nullifier_db {
            assert!((db + 17.372).abs() <= 0.01, "{kind}: {db}");
        }
        assert!(row.physical);
        assert!(row.rwa_pass);
    }
}

#[test]
fn quality_factor_echo() {
    let row = run_point(&ScenarioConfig::standard(GraphKind::Linear, 4, FIXED_GAMMA_OVER_KAPPA), false).unwrap();
    assert!((row.quality_factors[0] / 1e7 - 1.0).abs() <= 1e-12);
    let p = ScenarioConfig::standard(GraphKind::Linear, 20, FIXED_GAMMA_OVER_KAPPA).resolve().unwrap().params;
    assert!((p.quality_factors()[19] / 2e8 - 1.0).abs() <= 1e-12);
}

#[test]
fn trivial_sweep_rows_are_ordered_and_monotone() {
    let out = run_sweep(&trivial_gamma_sweep(), &SweepOptions::default()).unwrap();
    assert_eq!(out.rows.len(), 3);
    let f: Vec<f64> = out.ok_rows().map(|(_, r)| r.fidelity).collect();
    assert_eq!(f.len(), 3);
    assert!(f[0] >= f[1] && f[1] >= f[2]);
    let axis: Vec<f64> = out.rows.iter().map(|r| r.axis_value).collect();
    assert_eq!(axis, vec![1e-6, 1e-5, 1e-4]);
}

#[test]
fn failing_points_do_not_abort() {
    let mut spec = trivial_gamma_sweep();
    spec.axis = SweepAxis::Temperature;
    spec.grid = Grid::List { values: vec![-1.0, 0.01, 0.1] };
    let out = run_sweep(&spec, &SweepOptions::default()).unwrap();
    assert_eq!(out.failures(), 1);
    assert!(out.rows[0].result.as_ref().unwrap_err().contains("temperature"));
    assert!(out.rows[1].result.is_ok() && out.rows[2].result.is_ok());

    let mut buf = Vec::new();
    write_csv(&out, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let first = text.lines().nth(1).unwrap();
    assert!(first.starts_with("temperature,-1.0000000000000000e0,,"));
}

#[test]
fn unstable_point_is_echoed() {
    let mut cfg = ScenarioConfig::standard(GraphKind::Linear, 2, 1e-6);
    cfg.overrides.kappa_hz = Some(vec![0.0, 0.0]);
    let err = run_point(&cfg, false).unwrap_err();
    assert!(err.is_physics());
    let msg = err.to_string();
    assert!(msg.contains("not Hurwitz") && msg.contains("graph=linear n=2"), "{msg}");
}

#[test]
fn serial_and_parallel_files_match() {
    let mut spec = preset(Preset::Fig2);
    spec.grid = Grid::log(1e-8, 1e-3, 9);
    let serial = run_sweep(&spec, &SweepOptions { jobs: Some(1), strict_rwa: false }).unwrap();
    let parallel = run_sweep(&spec, &SweepOptions { jobs: Some(4), strict_rwa: false }).unwrap();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    write_csv(&serial, &mut a).unwrap();
    write_csv(&parallel, &mut b).unwrap();
    assert_eq!(a, b);
    assert_eq!(metadata_toml(&spec, &serial).unwrap(), metadata_toml(&spec, &parallel).unwrap());
}

#[test]
fn csv_schema_and_padding() {
    let mut spec = preset(Preset::Fig6);
    spec.grid = Grid::List { values: vec![4.0, 6.0] };
    let out = run_sweep(&spec, &SweepOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_csv(&out, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let mut expect = vec!["axis_name", "axis_value", "fidelity"];
    let vars: Vec<String> = (1..=6).map(|j| format!("null_var_{j}")).collect();
    expect.extend(vars.iter().map(String::as_str));
    expect.extend(["null_db_min", "null_db_max", "xi_star", "coop_min", "rwa_ratio", "stability", "error"]);
    assert_eq!(header, expect);
    let row4: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row4.len(), expect.len());
    assert_eq!(row4[0], "n_modes");
    assert!(!row4[6].is_empty() && row4[7].is_empty() && row4[8].is_empty());
    // 17 significant digits
    let mantissa = row4[2].split('e').next().unwrap();
    assert_eq!(mantissa.replace('.', "").trim_start_matches('-').len(), 17);
}

#[test]
fn output_files_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let spec = trivial_gamma_sweep();
    let out = run_sweep(&spec, &SweepOptions::default()).unwrap();
    let files = write_sweep(&spec, &out, &dir.path().join("g.csv"), true).unwrap();
    assert!(files.csv.exists());
    let meta: toml::Table = toml::from_str(&std::fs::read_to_string(&files.metadata).unwrap()).unwrap();
    assert_eq!(meta["version"].as_str(), Some(env!("CARGO_PKG_VERSION")));
    assert_eq!(meta["axis"].as_str(), Some("gamma"));
    assert!(meta["unit_cooperativity_gamma_over_kappa"].as_float().unwrap() > 0.0);
    assert!(meta["resolved"]["omega_m"].as_array().is_some());
    let script = std::fs::read_to_string(files.script.unwrap()).unwrap();
    assert!(script.contains("'g.csv'") && !script.contains("set logscale x"));
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 3, "temporary files left behind: {names:?}");
}

#[test]
fn gamma_star_in_metadata_matches_closed_form() {
    let mut spec = preset(Preset::Fig2);
    spec.base = ScenarioConfig::standard(GraphKind::Complete, 4, 1e-6);
    spec.grid = Grid::List { values: vec![1e-6] };
    let out = run_sweep(&spec, &SweepOptions::default()).unwrap();
    let g = out.unit_cooperativity_gamma.unwrap();
    let s = spec.base.resolve().unwrap();
    let sum: f64 = s.params.nbar().unwrap().iter().map(|n| n + 0.5).sum();
    let closed = 8.0 * 0.16f64.powi(2) / (4f64.exp() * sum);
    assert!((g - closed).abs() < 1e-12 * closed);
    let at = run_point(&SweepAxis::Gamma.apply(&spec.base, g).unwrap(), false).unwrap();
    assert!((at.coop_min - 1.0).abs() < 1e-3, "{}", at.coop_min);
}

#[test]
fn strict_rotating_wave_check() {
    let mut cfg = ScenarioConfig::standard(GraphKind::Linear, 3, 1e-6);
    cfg.params.gtilde_over_kappa = 8.0;
    let row = run_point(&cfg, false).unwrap();
    assert!(!row.rwa_pass);
    assert!(!row.warnings.is_empty());
    let err = run_point(&cfg, true).unwrap_err();
    assert!(matches!(err, crate::Error::Point { ref source, .. } if matches!(**source, crate::Error::RwaViolated { .. })));
}
