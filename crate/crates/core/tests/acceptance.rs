//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::time::{Duration, Instant};

use common::{integrate_lyapunov, model_matrices, random_graph, random_model, rel_diff};
use mechcluster::experiments::{
    preset, preset_series, run_point, run_sweep, Preset, ScenarioConfig, SweepAxis, SweepOptions, SweepOutcome,
};
use mechcluster::model::{
    alpha_from_epsilon, check_bogoliubov, check_rwa, cluster_bogoliubov, collective_couplings, damping_matrices,
    pair_from_alpha, synthesize_drives, unit_cooperativity_gamma,
};
use mechcluster::numerics::{max_abs, policy, solve_lyapunov, ComplexMatrix};
use mechcluster::{make_graph, solve_steady, GraphKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn sizes_and_kinds() -> Vec<(usize, GraphKind)> {
    [4, 10].into_iter().flat_map(|n| GraphKind::ALL.into_iter().map(move |k| (n, k))).collect()
}

fn purity_limit() -> Outcome {
    let start = Instant::now();
    let target_db = 10.0 * (-4f64).exp().log10();
    let mut min_f = f64::INFINITY;
    let mut worst_db = 0.0f64;
    let mut errors = Vec::new();
    for (n, kind) in sizes_and_kinds() {
        match run_point(&ScenarioConfig::standard(kind, n, 1e-12), false) {
            Ok(row) => {
                min_f = min_f.min(row.fidelity);
                for db in &row.nullifier_db {
                    worst_db = worst_db.max((db - target_db).abs()).max((db + 17.372).abs());
                }
            }
            Err(e) => errors.push(format!("{kind} n={n}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let pass = errors.is_empty() && min_f >= 0.999 && worst_db <= 0.01 && elapsed <= Duration::from_secs(60);
    outcome(
        pass,
        format!("min F {min_f:.6}, max |dB - (-17.372)| {worst_db:.2e}, {elapsed:.2?} {}", errors.join("; ")),
    )
}

fn rwa_checkpoint() -> Outcome {
    let mut cfg = preset(Preset::Fig7).base;
    cfg.params.r = 4.0;
    let s = cfg.resolve().unwrap();
    let ratio = check_rwa(&s.params, &s.graph, s.rwa_safety).unwrap().simple_ratio;
    outcome((ratio - 0.087).abs() <= 0.005, format!("g~ e^r / (2 Omega_bar) = {ratio:.5}"))
}

fn quality_factors() -> Outcome {
    let mut worst = 0.0f64;
    for p in [Preset::Fig4, Preset::Fig5, Preset::Fig6, Preset::Fig7, Preset::Fig8, Preset::Fig9] {
        let mut cfg = preset(p).base;
        let q1 = cfg.resolve().unwrap().params.quality_factors()[0];
        cfg.graph.n = Some(20);
        let q20 = cfg.resolve().unwrap().params.quality_factors()[19];
        worst = worst.max((q1 / 1e7 - 1.0).abs()).max((q20 / 2e8 - 1.0).abs());
    }
    outcome(worst <= 1e-12, format!("Omega_1/gamma_1 = 1e7, Omega_20/gamma_20 = 2e8, worst rel. error {worst:.1e}"))
}

fn lyapunov_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let n = 1 + i % 3;
        let (p, a) = random_model(&mut rng, n);
        let (m, q) = model_matrices(&p, &a);
        let direct = solve_lyapunov(&m, &q).unwrap();
        worst = worst.max(rel_diff(&direct, &integrate_lyapunov(&m, &q)));
        // the assembled state must also be physical
        let s = solve_steady(&p, &a).unwrap();
        let (fb, fc) = s.physicality().unwrap();
        if fb.min(fc) < policy::PHYSICALITY_FLOOR {
            return outcome(false, format!("instance {i} unphysical ({fb:e}, {fc:e})"));
        }
    }
    outcome(worst <= 1e-6, format!("20 instances, worst relative deviation {worst:.2e}"))
}

fn thermal_decoupling() -> Outcome {
    let mut worst_off = 0.0f64;
    let mut worst_diag = 0.0f64;
    for n in [1, 4, 10] {
        for temperature in [0.0, 1e-3, 1e-2, 0.3] {
            let kinds: &[GraphKind] = if n == 1 { &[GraphKind::Linear] } else { &GraphKind::ALL };
            for &kind in kinds {
                let mut cfg = ScenarioConfig::standard(kind, n, 1e-4);
                cfg.params.gtilde_over_kappa = 0.0;
                cfg.params.temperature_k = temperature;
                let s = cfg.resolve().unwrap();
                let nbar = s.params.nbar().unwrap();
                let v = solve_steady(&s.params, &s.graph).unwrap().v_original;
                for i in 0..2 * n {
                    for j in 0..2 * n {
                        if i == j {
                            let want = 2.0 * nbar[i % n] + 1.0;
                            worst_diag = worst_diag.max((v[(i, j)] - want).abs() / want);
                        } else {
                            worst_off = worst_off.max(v[(i, j)].abs());
                        }
                    }
                }
            }
        }
    }
    outcome(
        worst_off <= 1e-9 && worst_diag <= 1e-9,
        format!("max off-diagonal {worst_off:.1e}, max diagonal rel. error {worst_diag:.1e}"),
    )
}

fn symplectic_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    let mut worst_damping = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=10);
        let a = random_graph(&mut rng, n);
        let r = rng.random_range(0.0..=4.0);
        let pair = cluster_bogoliubov(&a, r).unwrap();
        let rep = check_bogoliubov(&pair, 1e-12).unwrap();
        worst = worst.max(rep.norm_residual.max(rep.symmetry_residual) / rep.scale);
        let gamma = rng.random_range(1e-3..1.0);
        let (w, t) = damping_matrices(&pair, &vec![gamma; n]).unwrap();
        let half = ComplexMatrix::identity(n, n) * num_complex::Complex64::new(gamma / 2.0, 0.0);
        let dev = max_abs(&(w - half)).max(max_abs(&t)) / (gamma * rep.scale);
        worst_damping = worst_damping.max(dev);
    }
    outcome(
        worst <= 1e-12 && worst_damping <= 1e-12,
        format!("200 pairs, worst residual {worst:.1e}, worst W/T deviation {worst_damping:.1e} (scale-relative)"),
    )
}

fn drive_round_trip() -> Outcome {
    let mut worst_pair = 0.0f64;
    let mut worst_g = 0.0f64;
    let mut cases = 0;
    for n in [2, 4, 10] {
        for kind in GraphKind::ALL {
            let Ok(a) = make_graph(kind, n) else { continue };
            cases += 1;
            let s = ScenarioConfig::standard(kind, n, 5e-6).resolve().unwrap();
            let p = s.params;
            let d = synthesize_drives(&p, &a).unwrap();
            let alpha = alpha_from_epsilon(&p, &d.lambda, d.absolute, &d.epsilon).unwrap();
            let back = pair_from_alpha(&p, &alpha).unwrap();
            let want = cluster_bogoliubov(&a, p.r).unwrap();
            worst_pair = worst_pair
                .max(max_abs(&(&back.x - &want.x)) / max_abs(&want.x))
                .max(max_abs(&(&back.y - &want.y)) / max_abs(&want.y));
            for (k, g2) in collective_couplings(&p, &alpha).iter().enumerate() {
                let g2_want = p.g_tilde[k].powi(2);
                worst_g = worst_g.max((g2 - g2_want).abs() / g2_want);
            }
        }
    }
    outcome(
        worst_pair <= 1e-12 && worst_g <= 1e-12,
        format!("{cases} cases (no 2-node ladder), pair rel. error {worst_pair:.1e}, g~^2 rel. error {worst_g:.1e}"),
    )
}

fn fidelities(out: &SweepOutcome) -> Vec<f64> {
    out.rows.iter().map(|r| r.result.as_ref().map_or(f64::NAN, |row| row.fidelity)).collect()
}

fn figure_reproduction() -> Outcome {
    let start = Instant::now();
    let opts = SweepOptions::default();
    let mut notes = Vec::new();
    let mut pass = true;
    let mut series = Vec::new();
    for p in [Preset::Fig2, Preset::Fig3] {
        for spec in preset_series(p) {
            let out = run_sweep(&spec, &opts).unwrap();
            if out.failures() > 0 {
                pass = false;
                notes.push(format!("{:?}: {} failed points", spec.label, out.failures()));
            }
            series.push((spec, out));
        }
    }
    // (a) monotone in gamma
    let mut monotone = true;
    for (_, out) in &series {
        let f = fidelities(out);
        monotone &= f.windows(2).all(|w| w[1] <= w[0]);
    }
    // (b) linear >= rectangular >= complete wherever some graph keeps F >= 0.05
    let mut ordered = true;
    let mut checked = 0;
    for n in [4, 10] {
        let get = |kind| {
            let (_, out) = series
                .iter()
                .find(|(s, _)| s.base.graph.n == Some(n) && s.base.graph.kind == Some(kind) && s.label.as_deref().is_some_and(|l| l.starts_with("fig2")))
                .unwrap();
            fidelities(out)
        };
        let (lin, rect, comp) = (get(GraphKind::Linear), get(GraphKind::Rectangular), get(GraphKind::Complete));
        for i in 0..lin.len() {
            if lin[i].max(rect[i]).max(comp[i]) >= 0.05 {
                checked += 1;
                ordered &= lin[i] >= rect[i] && rect[i] >= comp[i];
            }
        }
    }
    // (c) nullifier variance at unit cooperativity, N = 4 fully connected
    let base = ScenarioConfig::standard(GraphKind::Complete, 4, 1e-6);
    let s = base.resolve().unwrap();
    let gamma_star = unit_cooperativity_gamma(&s.params).unwrap() / s.params.kappa[0];
    let row = run_point(&SweepAxis::Gamma.apply(&base, gamma_star).unwrap(), false).unwrap();
    let at_star = row.null_db_max;
    let elapsed = start.elapsed();
    pass &= monotone && ordered && at_star <= -10.0 && elapsed <= Duration::from_secs(600);
    notes.push(format!(
        "monotone {monotone}, ordering {ordered} over {checked} points, gamma* = {gamma_star:.3e} kappa -> {at_star:.3} dB, {elapsed:.2?}"
    ));
    outcome(pass, notes.join("; "))
}

fn physicality_suite() -> Outcome {
    let opts = SweepOptions::default();
    let mut solved = 0;
    let mut bad = Vec::new();
    let mut worst = f64::INFINITY;
    for p in Preset::ALL {
        for spec in preset_series(p) {
            let out = run_sweep(&spec, &opts).unwrap();
            for row in &out.rows {
                match &row.result {
                    Ok(r) => {
                        solved += 1;
                        worst = worst.min(r.physicality.0.min(r.physicality.1));
                        if !(r.physical && r.fidelity > 0.0 && r.fidelity <= 1.0) {
                            bad.push(format!("{:?} at {:e}", spec.label, row.axis_value));
                        }
                    }
                    Err(e) => bad.push(format!("{:?} at {:e}: {e}", spec.label, row.axis_value)),
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{solved} steady states, lowest eigenvalue of V + i Omega {worst:.3e} {}", bad.join("; ")),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 purity limit gamma -> 0", purity_limit),
        ("2 rotating-wave ratio at r = 4", rwa_checkpoint),
        ("3 quality factors", quality_factors),
        ("4 Lyapunov vs time integration", lyapunov_oracle),
        ("5 thermal decoupling", thermal_decoupling),
        ("6 symplectic identities", symplectic_suite),
        ("7 drive round trip", drive_round_trip),
        ("8 figure reproduction (fig2/fig3)", figure_reproduction),
        ("9 physicality over all presets", physicality_suite),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {} ({:.2?})", o.detail.trim_end(), start.elapsed());
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
