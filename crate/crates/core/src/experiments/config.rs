//! Scenario files.
//!
//! ```toml
//! [graph]
//! kind = "linear"          # or file = "adjacency.txt"
//! n = 4
//!
//! [params]
//! r = 2.0
//! temperature_k = 0.01
//! omega_base_hz = 1e7      # Omega_j = j * 2 pi * omega_base_hz
//! kappa_over_omegabase = 0.02
//! gtilde_over_kappa = 0.16
//! gamma_over_kappa = 5e-6  # or one value per mode
//! rwa_safety = 5.0
//!
//! [overrides]              # optional, per-mode lists
//! delta_hz = [0.0, 0.0, 0.0, 0.0]
//! ```
//!
//! Keys ending in `_hz` are ordinary frequencies and are multiplied by `2 pi`.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::constants::TWO_PI;
use crate::error::{Error, Result};
use crate::graphs::{make_graph, AdjacencyMatrix, GraphKind};
use crate::model::SystemParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<GraphKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Adjacency matrix in the text format of [`AdjacencyMatrix::to_text`],
    /// relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

/// A scalar applied to every mode, or one value per mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerMode {
    Uniform(f64),
    List(Vec<f64>),
}

impl PerMode {
    fn expand(&self, n: usize, key: &str) -> Result<Vec<f64>> {
        match self {
            PerMode::Uniform(v) => Ok(vec![*v; n]),
            PerMode::List(v) if v.len() == n => Ok(v.clone()),
            PerMode::List(v) => Err(Error::Config(format!("{key} has {} entries, expected {n}", v.len()))),
        }
    }
}

fn default_omega_base() -> f64 {
    1e7
}
fn default_kappa_ratio() -> f64 {
    0.02
}
fn default_gtilde_ratio() -> f64 {
    0.16
}
fn default_safety() -> f64 {
    5.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub r: f64,
    pub temperature_k: f64,
    #[serde(default = "default_omega_base")]
    pub omega_base_hz: f64,
    /// Explicit mechanical frequencies; replaces the `j * omega_base_hz` ladder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_list_hz: Option<Vec<f64>>,
    #[serde(default = "default_kappa_ratio")]
    pub kappa_over_omegabase: f64,
    #[serde(default = "default_gtilde_ratio")]
    pub gtilde_over_kappa: f64,
    pub gamma_over_kappa: PerMode,
    #[serde(default = "default_safety")]
    pub rwa_safety: f64,
}

/// Direct replacements for `SystemParams` fields; lists have one entry per mode.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_hz: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_hz: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gtilde_hz: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_hz: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_c_hz: Option<Vec<f64>>,
    /// Row `k` holds `g_kj` for optical mode `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_single_hz: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nbar: Option<Vec<f64>>,
}

impl Overrides {
    fn is_empty(&self) -> bool {
        *self == Overrides::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub graph: GraphSpec,
    pub params: ParamSpec,
    #[serde(default, skip_serializing_if = "Overrides::is_empty")]
    pub overrides: Overrides,
    /// Directory that relative graph files are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

/// A config resolved into model inputs.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub params: SystemParams,
    pub graph: AdjacencyMatrix,
    pub rwa_safety: f64,
    /// `2 pi omega_base_hz` [rad/s].
    pub omega_bar: f64,
}

fn scaled(v: &[f64], n: usize, key: &str) -> Result<Vec<f64>> {
    if v.len() != n {
        return Err(Error::Config(format!("{key} has {} entries, expected {n}", v.len())));
    }
    Ok(v.iter().map(|x| x * TWO_PI).collect())
}

impl ScenarioConfig {
    /// Reference defaults (10 MHz ladder, 10 mK, r = 2) for an `n`-mode graph of the given kind.
    pub fn standard(kind: GraphKind, n: usize, gamma_over_kappa: f64) -> Self {
        Self {
            graph: GraphSpec { kind: Some(kind), n: Some(n), file: None },
            params: ParamSpec {
                r: 2.0,
                temperature_k: 0.01,
                omega_base_hz: default_omega_base(),
                omega_list_hz: None,
                kappa_over_omegabase: default_kappa_ratio(),
                gtilde_over_kappa: default_gtilde_ratio(),
                gamma_over_kappa: PerMode::Uniform(gamma_over_kappa),
                rwa_safety: default_safety(),
            },
            overrides: Overrides::default(),
            base_dir: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    fn load_graph(&self) -> Result<AdjacencyMatrix> {
        let g = &self.graph;
        match (&g.file, g.kind) {
            (Some(_), Some(_)) => Err(Error::Config("graph: give either `kind` or `file`, not both".into())),
            (Some(file), None) => {
                let path = match &self.base_dir {
                    Some(dir) if file.is_relative() => dir.join(file),
                    _ => file.clone(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Config(format!("cannot read graph {}: {e}", path.display())))?;
                let a = AdjacencyMatrix::from_text(&text)?;
                if let Some(n) = g.n {
                    if n != a.n() {
                        return Err(Error::Config(format!("graph file has {} nodes but n = {n}", a.n())));
                    }
                }
                Ok(a)
            }
            (None, Some(kind)) => {
                let n = g.n.ok_or_else(|| Error::Config("graph.n is required with graph.kind".into()))?;
                make_graph(kind, n)
            }
            (None, None) => Err(Error::Config("graph needs `kind` and `n`, or `file`".into())),
        }
    }

    pub fn resolve(&self) -> Result<Scenario> {
        let graph = self.load_graph()?;
        let n = graph.n();
        let p = &self.params;
        let ov = &self.overrides;
        if !(p.omega_base_hz > 0.0) || !p.omega_base_hz.is_finite() {
            return Err(Error::Config(format!("omega_base_hz must be > 0, got {}", p.omega_base_hz)));
        }
        let omega_bar = TWO_PI * p.omega_base_hz;
        let omega_m = match &p.omega_list_hz {
            Some(list) => scaled(list, n, "omega_list_hz")?,
            None => (1..=n).map(|j| j as f64 * omega_bar).collect(),
        };
        let kappa = match &ov.kappa_hz {
            Some(v) => scaled(v, n, "overrides.kappa_hz")?,
            None => vec![p.kappa_over_omegabase * omega_bar; n],
        };
        let g_tilde = match &ov.gtilde_hz {
            Some(v) => scaled(v, n, "overrides.gtilde_hz")?,
            None => kappa.iter().map(|k| p.gtilde_over_kappa * k).collect(),
        };
        let gamma = match &ov.gamma_hz {
            Some(v) => scaled(v, n, "overrides.gamma_hz")?,
            None => {
                let ratio = p.gamma_over_kappa.expand(n, "gamma_over_kappa")?;
                ratio.iter().zip(&kappa).map(|(g, k)| g * k).collect()
            }
        };
        let g_single = match &ov.g_single_hz {
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Config(format!("overrides.g_single_hz must be {n}x{n}")));
                }
                Some(DMatrix::from_fn(n, n, |k, j| TWO_PI * rows[k][j]))
            }
            None => None,
        };
        let nbar_override = match &ov.nbar {
            Some(v) if v.len() != n => {
                return Err(Error::Config(format!("overrides.nbar has {} entries, expected {n}", v.len())))
            }
            other => other.clone(),
        };
        let params = SystemParams {
            omega_m,
            kappa,
            gamma,
            temperature: p.temperature_k,
            g_tilde,
            r: p.r,
            g_single,
            delta: ov.delta_hz.as_ref().map(|v| scaled(v, n, "overrides.delta_hz")).transpose()?,
            omega_c: ov.omega_c_hz.as_ref().map(|v| scaled(v, n, "overrides.omega_c_hz")).transpose()?,
            nbar_override,
        };
        params.validate().map_err(|e| Error::Config(e.to_string()))?;
        if !(p.rwa_safety >= 1.0) {
            return Err(Error::Config(format!("rwa_safety must be >= 1, got {}", p.rwa_safety)));
        }
        Ok(Scenario { params, graph, rwa_safety: p.rwa_safety, omega_bar })
    }
}
