use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mechcluster::experiments::{
    preset_series, run_point, run_sweep, write_sweep, Preset, ResultRow, ScenarioConfig, SweepOptions, SweepSpec,
};
use mechcluster::model::{check_rwa, synthesize_drives, RwaMargin};
use mechcluster::{Error, GraphKind};

/// `println!` that reports a closed stdout instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout().lock(), $($arg)*)?
    };
}

const EXIT_CONFIG: u8 = 2;
const EXIT_PHYSICS: u8 = 3;
const EXIT_PARTIAL: u8 = 4;

#[derive(Parser)]
#[command(name = "mechcluster", version, about = "Steady states of dissipatively prepared mechanical cluster states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single configuration
    Simulate {
        config: PathBuf,
        /// Print the full result as JSON
        #[arg(long)]
        json: bool,
        /// Treat rotating-wave violations as errors
        #[arg(long)]
        strict_rwa: bool,
    },
    /// Run the [sweep] described in a config file and write CSV + metadata
    Sweep {
        config: PathBuf,
        /// Output CSV path (metadata goes to PATH.meta.toml)
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        /// Worker threads (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        strict_rwa: bool,
        /// Also write a gnuplot script to PATH.gp
        #[arg(long)]
        gnuplot: bool,
    },
    /// Print the drive tone table
    Drives { config: PathBuf },
    /// Print every rotating-wave margin
    CheckRwa {
        config: PathBuf,
        /// Overrides rwa_safety from the config
        #[arg(long)]
        safety: Option<f64>,
    },
    /// Run (or print) a named figure sweep
    Preset {
        name: String,
        /// Print one series as a sweep config instead of running
        #[arg(long)]
        emit_config: bool,
        /// Restrict to one graph kind
        #[arg(long)]
        graph: Option<GraphKind>,
        /// Restrict to one graph size
        #[arg(long)]
        n: Option<usize>,
        /// Output directory for the CSV files
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        strict_rwa: bool,
        #[arg(long)]
        gnuplot: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_physics() {
        EXIT_PHYSICS
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        EXIT_CONFIG
    }
}

/// Accepts plain scenario files and sweep files alike.
fn load_scenario(path: &Path) -> mechcluster::Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    if text.lines().any(|l| l.trim() == "[sweep]") {
        return Ok(SweepSpec::load(path)?.base);
    }
    ScenarioConfig::load(path)
}

fn print_row(cfg: &ScenarioConfig, row: &ResultRow) -> mechcluster::Result<()> {
    let kind = cfg.graph.kind.map_or("file".to_string(), |k| k.to_string());
    out!("modes            {} ({kind})", row.n);
    out!("fidelity         {:.6e}", row.fidelity);
    out!("nullifiers       j  variance        dB");
    for (j, (v, db)) in row.nullifier_var.iter().zip(&row.nullifier_db).enumerate() {
        out!("                 {:<2} {v:.6e}  {db:8.3}", j + 1);
    }
    out!("xi_star          {:.6e} rad/s", row.xi_star);
    out!("cooperativity    min {:.6e}", row.coop_min);
    out!("stability        {:.6e} rad/s", row.stability);
    out!("quality factor   {:.6e} .. {:.6e}", row.quality_factors[0], row.quality_factors[row.n - 1]);
    out!("rwa ratio        {:.6e} ({})", row.rwa_ratio, if row.rwa_pass { "ok" } else { "VIOLATED" });
    out!("physicality      {:.3e} / {:.3e} ({})", row.physicality.0, row.physicality.1, if row.physical { "ok" } else { "FAIL" });
    Ok(())
}

fn simulate(config: &Path, json: bool, strict_rwa: bool) -> mechcluster::Result<u8> {
    let cfg = load_scenario(config)?;
    let row = run_point(&cfg, strict_rwa)?;
    for w in &row.warnings {
        eprintln!("warning: {w}");
    }
    if json {
        let text = serde_json::to_string_pretty(&row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        out!("{text}");
    } else {
        print_row(&cfg, &row)?;
    }
    Ok(if row.physical { 0 } else { EXIT_PHYSICS })
}

fn sweep_one(spec: &SweepSpec, out: &Path, opts: &SweepOptions, gnuplot: bool) -> mechcluster::Result<usize> {
    let outcome = run_sweep(spec, opts)?;
    let files = write_sweep(spec, &outcome, out, gnuplot)?;
    let failures = outcome.failures();
    let warned = outcome.ok_rows().filter(|(_, r)| !r.warnings.is_empty()).count();
    if warned > 0 {
        eprintln!("warning: {warned} point(s) outside the rotating-wave margin");
    }
    for row in &outcome.rows {
        if let Err(msg) = &row.result {
            eprintln!("point {:e} failed: {msg}", row.axis_value);
        }
    }
    out!(
        "{}: {} points, {failures} failed -> {}",
        spec.label.as_deref().unwrap_or(spec.axis.name()),
        outcome.rows.len(),
        files.csv.display()
    );
    Ok(failures)
}

fn drives(config: &Path) -> mechcluster::Result<u8> {
    let s = load_scenario(config)?.resolve()?;
    let d = synthesize_drives(&s.params, &s.graph)?;
    let n = s.params.n();
    let header = if d.absolute { "lambda [rad/s]" } else { "detuning [rad/s]" };
    out!("{:>3} {:>4} {:>5} {:>24} {:>16} {:>10}", "k", "m", "side", header, "|eps|", "arg eps");
    for k in 0..n {
        for m in 0..2 * n {
            let eps = d.epsilon[(k, m)];
            let side = if m < n { "red" } else { "blue" };
            out!(
                "{:>3} {:>4} {:>5} {:>24.12e} {:>16.6e} {:>10.6}",
                k + 1,
                m + 1,
                side,
                d.lambda[(k, m)],
                eps.norm(),
                eps.arg()
            );
        }
    }
    Ok(0)
}

fn print_margins(title: &str, margins: &[RwaMargin], limit: f64) -> mechcluster::Result<()> {
    let worst = margins.iter().map(|m| m.ratio).fold(0.0, f64::max);
    out!("{title}: worst {worst:.3e} ({})", if worst <= limit { "ok" } else { "VIOLATED" });
    for m in margins.iter().filter(|m| m.ratio > limit) {
        out!("    k={} m={} m'={}  {:.3e} / {:.3e} = {:.3e}", m.k, m.m, m.m_prime, m.lhs, m.rhs, m.ratio);
    }
    Ok(())
}

fn rwa(config: &Path, safety: Option<f64>) -> mechcluster::Result<u8> {
    let s = load_scenario(config)?.resolve()?;
    let rep = check_rwa(&s.params, &s.graph, safety.unwrap_or(s.rwa_safety))?;
    let limit = rep.limit();
    out!("safety {} (limit {limit:.3e})", rep.safety);
    out!("scalar g~ e^r / (2 Omega_bar): {:.4e}", rep.simple_ratio);
    print_margins("linewidth kappa / |Omega_j - Omega_m|", &rep.linewidth, limit)?;
    print_margins("direct coupling g alpha / |Omega_j - Omega_m|", &rep.coupling, limit)?;
    print_margins("beat difference (advisory)", &rep.beat_difference, limit)?;
    print_margins("beat sum (advisory)", &rep.beat_sum, limit)?;
    out!("overall: {}", if rep.coupling_pass() { "ok" } else { "VIOLATED" });
    Ok(if rep.coupling_pass() { 0 } else { EXIT_PHYSICS })
}

#[allow(clippy::too_many_arguments)]
fn run_preset(
    name: &str,
    emit_config: bool,
    graph: Option<GraphKind>,
    n: Option<usize>,
    out: Option<PathBuf>,
    opts: SweepOptions,
    gnuplot: bool,
) -> mechcluster::Result<u8> {
    let p: Preset = name.parse()?;
    let series: Vec<SweepSpec> = preset_series(p)
        .into_iter()
        .filter(|s| graph.is_none_or(|g| s.base.graph.kind == Some(g)))
        .filter(|s| n.is_none_or(|n| s.base.graph.n == Some(n)))
        .collect();
    if series.is_empty() {
        return Err(Error::Config(format!("{name} has no series matching the selection")));
    }
    if emit_config {
        write!(std::io::stdout().lock(), "{}", series[0].to_toml()?)?;
        return Ok(0);
    }
    let dir = out.unwrap_or_else(|| PathBuf::from(name));
    std::fs::create_dir_all(&dir)?;
    let mut failures = 0;
    for spec in &series {
        let label = spec.label.clone().unwrap_or_else(|| name.to_string());
        failures += sweep_one(spec, &dir.join(format!("{label}.csv")), &opts, gnuplot)?;
    }
    Ok(if failures > 0 { EXIT_PARTIAL } else { 0 })
}

fn run(cli: Cli) -> mechcluster::Result<u8> {
    match cli.command {
        Command::Simulate { config, json, strict_rwa } => simulate(&config, json, strict_rwa),
        Command::Sweep { config, out, jobs, strict_rwa, gnuplot } => {
            let spec = SweepSpec::load(&config)?;
            let failures = sweep_one(&spec, &out, &SweepOptions { jobs, strict_rwa }, gnuplot)?;
            Ok(if failures > 0 { EXIT_PARTIAL } else { 0 })
        }
        Command::Drives { config } => drives(&config),
        Command::CheckRwa { config, safety } => rwa(&config, safety),
        Command::Preset { name, emit_config, graph, n, out, jobs, strict_rwa, gnuplot } => {
            run_preset(&name, emit_config, graph, n, out, SweepOptions { jobs, strict_rwa }, gnuplot)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
