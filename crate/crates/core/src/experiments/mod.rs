//! Scenario configuration, sweeps and figure presets.

mod config;
mod presets;
mod sweep;

pub use config::{GraphSpec, Overrides, ParamSpec, PerMode, Scenario, ScenarioConfig};
pub use presets::{preset, preset_series, Preset, FIXED_GAMMA_OVER_KAPPA, GRID_POINTS};
pub use sweep::{
    gnuplot_script, metadata_toml, run_point, run_sweep, write_csv, write_sweep, Grid, ResultRow, Scale,
    SweepAxis, SweepFiles, SweepOptions, SweepOutcome, SweepRow, SweepSpec, SweepTable,
};

#[cfg(test)]
mod tests;
