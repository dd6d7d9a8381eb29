//! One-dimensional parameter sweeps and their CSV/metadata output.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{PerMode, ScenarioConfig};
use crate::error::{Error, Result};
use crate::model::{check_rwa, effective_noise, unit_cooperativity_gamma, SystemParams};
use crate::numerics::policy;
use crate::steady_state::solve_steady;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `gamma / kappa`, applied to every mode.
    Gamma,
    /// Bath temperature [K].
    Temperature,
    /// Number of modes (graph size).
    NModes,
    /// Squeezing parameter.
    R,
    /// `g~ / kappa`, applied to every cavity.
    Gtilde,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] =
        [SweepAxis::Gamma, SweepAxis::Temperature, SweepAxis::NModes, SweepAxis::R, SweepAxis::Gtilde];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Gamma => "gamma",
            SweepAxis::Temperature => "temperature",
            SweepAxis::NModes => "n_modes",
            SweepAxis::R => "r",
            SweepAxis::Gtilde => "gtilde",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            SweepAxis::Gamma => "gamma/kappa",
            SweepAxis::Temperature => "K",
            SweepAxis::NModes => "modes",
            SweepAxis::R => "1",
            SweepAxis::Gtilde => "gtilde/kappa",
        }
    }

    /// `cfg` with the axis set to `value`.
    pub fn apply(self, cfg: &ScenarioConfig, value: f64) -> Result<ScenarioConfig> {
        let mut out = cfg.clone();
        match self {
            SweepAxis::Gamma => {
                out.params.gamma_over_kappa = PerMode::Uniform(value);
                out.overrides.gamma_hz = None;
            }
            SweepAxis::Temperature => out.params.temperature_k = value,
            SweepAxis::NModes => {
                if !(value >= 1.0) || value.fract() != 0.0 {
                    return Err(Error::Config(format!("n_modes values must be positive integers, got {value}")));
                }
                out.graph.n = Some(value as usize);
            }
            SweepAxis::R => out.params.r = value,
            SweepAxis::Gtilde => {
                out.params.gtilde_over_kappa = value;
                out.overrides.gtilde_hz = None;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep axis `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List { values: Vec<f64> },
    Range { scale: Scale, start: f64, stop: f64, points: usize },
}

impl Grid {
    pub fn log(start: f64, stop: f64, points: usize) -> Self {
        Grid::Range { scale: Scale::Log, start, stop, points }
    }

    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        Grid::Range { scale: Scale::Linear, start, stop, points }
    }

    pub fn is_log(&self) -> bool {
        matches!(self, Grid::Range { scale: Scale::Log, .. })
    }

    /// The grid points; nonempty, finite and strictly monotone.
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match *self {
            Grid::List { ref values } => values.clone(),
            Grid::Range { scale, start, stop, points } => {
                if points == 0 {
                    return Err(Error::Config("sweep grid needs at least one point".into()));
                }
                let step = |i: usize| if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
                match scale {
                    Scale::Linear => (0..points).map(|i| start + (stop - start) * step(i)).collect(),
                    Scale::Log => {
                        if !(start > 0.0 && stop > 0.0) {
                            return Err(Error::Config(format!("log grid needs positive bounds, got {start}..{stop}")));
                        }
                        let (a, b) = (start.log10(), stop.log10());
                        (0..points).map(|i| 10f64.powf(a + (b - a) * step(i))).collect()
                    }
                }
            }
        };
        if v.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("sweep grid has non-finite values".into()));
        }
        let up = v.windows(2).all(|w| w[1] > w[0]);
        let down = v.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(Error::Config("sweep grid must be strictly monotone".into()));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    #[serde(flatten)]
    pub grid: Grid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: Grid,
    pub base: ScenarioConfig,
    pub label: Option<String>,
}

impl SweepSpec {
    /// A scenario file with an extra `[sweep]` table.
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let sweep = table.remove("sweep").ok_or_else(|| Error::Config("missing [sweep] table".into()))?;
        let sweep: SweepTable = sweep.try_into().map_err(|e: toml::de::Error| Error::Config(format!("[sweep]: {e}")))?;
        let base: ScenarioConfig =
            toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let spec = SweepSpec { axis: sweep.axis, grid: sweep.grid, base, label: sweep.label };
        spec.grid.values()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut spec = Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        spec.base.base_dir = path.parent().map(Path::to_path_buf);
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String> {
        let mut table = toml::Table::try_from(&self.base).map_err(|e| Error::Config(e.to_string()))?;
        let sweep = SweepTable { axis: self.axis, grid: self.grid.clone(), label: self.label.clone() };
        let sweep = toml::Value::try_from(&sweep).map_err(|e| Error::Config(e.to_string()))?;
        table.insert("sweep".into(), sweep);
        toml::to_string(&table).map_err(|e| Error::Config(e.to_string()))
    }

    /// Point configurations in grid order.
    pub fn point_configs(&self) -> Result<Vec<(f64, ScenarioConfig)>> {
        self.grid
            .values()?
            .into_iter()
            .map(|v| Ok((v, self.axis.apply(&self.base, v)?)))
            .collect()
    }
}

/// Everything computed at one configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub n: usize,
    pub fidelity: f64,
    pub nullifier_var: Vec<f64>,
    pub nullifier_db: Vec<f64>,
    pub null_db_min: f64,
    pub null_db_max: f64,
    /// Exact effective noise `Xi_j` [rad/s].
    pub xi_exact: Vec<f64>,
    /// Large-squeezing approximation of `Xi_j` [rad/s].
    pub xi_approx: Vec<f64>,
    pub xi_star: f64,
    pub cooperativities: Vec<f64>,
    pub coop_min: f64,
    /// Spectral abscissa of the drift matrix [rad/s]; negative when stable.
    pub stability: f64,
    /// `g~ e^r / (2 Omega_bar)`.
    pub rwa_ratio: f64,
    /// Worst ratio over every rotating-wave family, when the check could run.
    pub rwa_max_ratio: Option<f64>,
    /// Scalar, linewidth and direct-coupling conditions hold at the configured safety.
    pub rwa_pass: bool,
    pub quality_factors: Vec<f64>,
    /// Smallest eigenvalues of `V + i Omega_s`, original and collective bases.
    pub physicality: (f64, f64),
    pub physical: bool,
    pub warnings: Vec<String>,
}

fn describe(cfg: &ScenarioConfig) -> String {
    let g = &cfg.graph;
    let graph = match (&g.file, g.kind) {
        (Some(f), _) => f.display().to_string(),
        (None, Some(k)) => k.name().to_string(),
        (None, None) => "?".into(),
    };
    let p = &cfg.params;
    let gamma = match &p.gamma_over_kappa {
        PerMode::Uniform(v) => format!("{v:e}"),
        PerMode::List(v) => format!("{v:?}"),
    };
    format!(
        "graph={graph} n={} r={} T={} K gamma/kappa={gamma} gtilde/kappa={}",
        g.n.map_or("?".into(), |n| n.to_string()),
        p.r,
        p.temperature_k,
        p.gtilde_over_kappa
    )
}

fn at(cfg: &ScenarioConfig) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Config(_) => e,
        other => Error::Point { context: describe(cfg), source: Box::new(other) },
    }
}

/// Solves one configuration. The rotating-wave check only adds warnings
/// unless `strict_rwa` is set.
pub fn run_point(cfg: &ScenarioConfig, strict_rwa: bool) -> Result<ResultRow> {
    let scenario = cfg.resolve()?;
    let (p, a) = (&scenario.params, &scenario.graph);
    let steady = solve_steady(p, a).map_err(at(cfg))?;
    let noise = effective_noise(p, a).map_err(at(cfg))?;
    let physicality = steady.physicality().map_err(at(cfg))?;
    let physical = physicality.0 >= policy::PHYSICALITY_FLOOR
        && physicality.1 >= policy::PHYSICALITY_FLOOR
        && steady.fidelity > 0.0
        && steady.fidelity <= 1.0;

    let mut warnings = Vec::new();
    let g_max = p.g_tilde.iter().copied().fold(0.0, f64::max);
    let omega_bar = p.min_spacing().unwrap_or(p.omega_m[0]);
    let mut rwa_ratio = g_max * p.r.exp() / (2.0 * omega_bar);
    let mut rwa_max_ratio = None;
    let mut rwa_pass = false;
    match check_rwa(p, a, scenario.rwa_safety) {
        Ok(rep) => {
            rwa_ratio = rep.simple_ratio;
            rwa_max_ratio = Some(rep.max_ratio());
            rwa_pass = rep.coupling_pass();
            if !rwa_pass {
                let [lw, cp, _, _] = rep.worst_by_family();
                let worst = rep.simple_ratio.max(lw).max(cp);
                if strict_rwa {
                    return Err(at(cfg)(Error::RwaViolated { max_ratio: worst, limit: rep.limit() }));
                }
                warnings.push(format!(
                    "rotating-wave margin {worst:.3e} exceeds 1/{} = {:.3e}",
                    rep.safety,
                    rep.limit()
                ));
            }
        }
        Err(e) if strict_rwa => return Err(at(cfg)(e)),
        Err(e) => warnings.push(format!("rotating-wave check failed: {e}")),
    }

    let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().copied().fold(init, f);
    Ok(ResultRow {
        n: p.n(),
        fidelity: steady.fidelity,
        null_db_min: fold(&steady.nullifier_db, f64::INFINITY, f64::min),
        null_db_max: fold(&steady.nullifier_db, f64::NEG_INFINITY, f64::max),
        nullifier_var: steady.nullifier_var,
        nullifier_db: steady.nullifier_db,
        coop_min: noise.min_cooperativity(),
        xi_exact: noise.xi_exact,
        xi_approx: noise.xi_approx,
        xi_star: noise.xi_star,
        cooperativities: noise.cooperativity,
        stability: steady.stability,
        rwa_ratio,
        rwa_max_ratio,
        rwa_pass,
        quality_factors: p.quality_factors(),
        physicality,
        physical,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub result: std::result::Result<ResultRow, String>,
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Worker threads; all available cores when `None`.
    pub jobs: Option<usize>,
    pub strict_rwa: bool,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub axis: SweepAxis,
    pub label: Option<String>,
    pub rows: Vec<SweepRow>,
    /// `gamma* / kappa_1` of the base configuration, where the fully
    /// connected graph reaches unit cooperativity.
    pub unit_cooperativity_gamma: Option<f64>,
    pub resolved_base: Option<SystemParams>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.result.is_err()).count()
    }

    pub fn ok_rows(&self) -> impl Iterator<Item = (f64, &ResultRow)> {
        self.rows.iter().filter_map(|r| r.result.as_ref().ok().map(|row| (r.axis_value, row)))
    }
}

/// Runs every grid point; failing points become rows with an error message.
pub fn run_sweep(spec: &SweepSpec, opts: &SweepOptions) -> Result<SweepOutcome> {
    let points = spec.point_configs()?;
    let jobs = match opts.jobs {
        Some(0) => return Err(Error::Config("--jobs must be at least 1".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .map(|(v, cfg)| SweepRow {
                axis_value: *v,
                result: run_point(cfg, opts.strict_rwa).map_err(|e| e.to_string()),
            })
            .collect()
    });
    let resolved_base = spec.base.resolve().ok().map(|s| s.params);
    let unit_cooperativity_gamma = resolved_base
        .as_ref()
        .and_then(|p| unit_cooperativity_gamma(p).ok().map(|g| g / p.kappa[0]));
    Ok(SweepOutcome { axis: spec.axis, label: spec.label.clone(), rows, unit_cooperativity_gamma, resolved_base })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the fixed-schema CSV; per-mode columns are padded to the largest `n`.
pub fn write_csv<W: Write>(outcome: &SweepOutcome, out: W) -> Result<()> {
    let width = outcome.ok_rows().map(|(_, r)| r.n).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    let mut header = vec!["axis_name".to_string(), "axis_value".into(), "fidelity".into()];
    header.extend((1..=width).map(|j| format!("null_var_{j}")));
    header.extend(
        ["null_db_min", "null_db_max", "xi_star", "coop_min", "rwa_ratio", "stability", "error"].map(String::from),
    );
    w.write_record(&header).map_err(csv_err)?;
    for row in &outcome.rows {
        let mut rec = vec![outcome.axis.name().to_string(), num(row.axis_value)];
        match &row.result {
            Ok(r) => {
                rec.push(num(r.fidelity));
                rec.extend((0..width).map(|j| r.nullifier_var.get(j).map_or(String::new(), |&v| num(v))));
                rec.extend([r.null_db_min, r.null_db_max, r.xi_star, r.coop_min, r.rwa_ratio, r.stability].map(num));
                rec.push(String::new());
            }
            Err(msg) => {
                rec.extend(std::iter::repeat_n(String::new(), 1 + width + 6));
                rec.push(msg.clone());
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    axis: &'static str,
    axis_unit: &'static str,
    points: usize,
    failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit_cooperativity_gamma_over_kappa: Option<f64>,
    grid: Vec<f64>,
    config: toml::Table,
    #[serde(skip_serializing_if = "Option::is_none")]
    resolved: Option<&'a SystemParams>,
}

pub fn metadata_toml(spec: &SweepSpec, outcome: &SweepOutcome) -> Result<String> {
    let meta = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        label: outcome.label.as_deref(),
        axis: outcome.axis.name(),
        axis_unit: outcome.axis.unit(),
        points: outcome.rows.len(),
        failures: outcome.failures(),
        unit_cooperativity_gamma_over_kappa: outcome.unit_cooperativity_gamma,
        grid: outcome.rows.iter().map(|r| r.axis_value).collect(),
        config: toml::from_str(&spec.to_toml()?).map_err(|e| Error::Config(e.to_string()))?,
        resolved: outcome.resolved_base.as_ref(),
    };
    toml::to_string(&meta).map_err(|e| Error::Config(e.to_string()))
}

/// gnuplot script plotting fidelity and the nullifier range against the axis.
pub fn gnuplot_script(spec: &SweepSpec, csv_name: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key autotitle columnhead\n");
    if spec.grid.is_log() {
        s.push_str("set logscale x\n");
    }
    s.push_str(&format!("set xlabel '{} [{}]'\n", spec.axis.name(), spec.axis.unit()));
    s.push_str("set multiplot layout 1,2\nset ylabel 'fidelity'\n");
    s.push_str(&format!("plot '{csv_name}' using 'axis_value':'fidelity' with linespoints\n"));
    s.push_str("set ylabel 'nullifier variance [dB]'\n");
    s.push_str(&format!(
        "plot '{csv_name}' using 'axis_value':'null_db_min' with lines, '' using 'axis_value':'null_db_max' with lines\n"
    ));
    s.push_str("unset multiplot\n");
    s
}

/// Paths produced by [`write_sweep`].
#[derive(Clone, Debug)]
pub struct SweepFiles {
    pub csv: PathBuf,
    pub metadata: PathBuf,
    pub script: Option<PathBuf>,
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Writes `out` (CSV), `out.meta.toml` and optionally `out.gp`, each atomically.
pub fn write_sweep(spec: &SweepSpec, outcome: &SweepOutcome, out: &Path, script: bool) -> Result<SweepFiles> {
    let mut buf = Vec::new();
    write_csv(outcome, &mut buf)?;
    write_atomic(out, &buf)?;
    let metadata = sibling(out, ".meta.toml");
    write_atomic(&metadata, metadata_toml(spec, outcome)?.as_bytes())?;
    let script = if script {
        let path = sibling(out, ".gp");
        let csv_name = out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        write_atomic(&path, gnuplot_script(spec, &csv_name).as_bytes())?;
        Some(path)
    } else {
        None
    };
    Ok(SweepFiles { csv: out.to_path_buf(), metadata, script })
}
