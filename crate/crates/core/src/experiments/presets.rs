//! Named sweep families, one per plotted quantity and axis.
//!
//! All share `r = 2`, `T = 10 mK`, `Omega_j = j 2 pi 10 MHz`, `kappa = 0.02 Omega_bar`
//! and `g~ = 0.16 kappa`; apart from the dissipation sweep, `gamma = 5e-6 kappa`.
//! Continuous axes use 61-point grids.

use std::fmt;
use std::str::FromStr;

use super::config::ScenarioConfig;
use super::sweep::{Grid, SweepAxis, SweepSpec};
use crate::error::{Error, Result};
use crate::graphs::GraphKind;

pub const GRID_POINTS: usize = 61;
pub const FIXED_GAMMA_OVER_KAPPA: f64 = 5e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl Preset {
    pub const ALL: [Preset; 8] =
        [Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5, Preset::Fig6, Preset::Fig7, Preset::Fig8, Preset::Fig9];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
        }
    }

    pub fn axis(self) -> SweepAxis {
        match self {
            Preset::Fig2 | Preset::Fig3 => SweepAxis::Gamma,
            Preset::Fig4 | Preset::Fig5 => SweepAxis::Temperature,
            Preset::Fig6 => SweepAxis::NModes,
            Preset::Fig7 | Preset::Fig8 => SweepAxis::R,
            Preset::Fig9 => SweepAxis::Gtilde,
        }
    }

    fn grid(self) -> Grid {
        match self.axis() {
            SweepAxis::Gamma => Grid::log(1e-8, 1e-2, GRID_POINTS),
            SweepAxis::Temperature => Grid::log(1e-3, 1.0, GRID_POINTS),
            SweepAxis::NModes => Grid::List { values: (2..=10).map(|k| 2.0 * k as f64).collect() },
            SweepAxis::R => Grid::linear(0.0, 4.0, GRID_POINTS),
            SweepAxis::Gtilde => Grid::log(1e-2, 1.0, GRID_POINTS),
        }
    }

    /// Graph sizes drawn in the figure; the mode-count sweep sets its own.
    fn sizes(self) -> &'static [usize] {
        match self {
            Preset::Fig6 => &[4],
            _ => &[4, 10],
        }
    }

    fn spec(self, kind: GraphKind, n: usize) -> SweepSpec {
        let gamma = if self.axis() == SweepAxis::Gamma { 1e-6 } else { FIXED_GAMMA_OVER_KAPPA };
        let label = if self == Preset::Fig6 {
            format!("{}-{}", self.name(), kind.name())
        } else {
            format!("{}-n{n}-{}", self.name(), kind.name())
        };
        SweepSpec {
            axis: self.axis(),
            grid: self.grid(),
            base: ScenarioConfig::standard(kind, n, gamma),
            label: Some(label),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
            Error::Config(format!("unknown preset `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

/// Representative sweep of a figure: its linear-graph series, `N = 4`.
pub fn preset(p: Preset) -> SweepSpec {
    p.spec(GraphKind::Linear, 4)
}

/// Every series drawn in a figure, one per (size, graph kind).
pub fn preset_series(p: Preset) -> Vec<SweepSpec> {
    p.sizes()
        .iter()
        .flat_map(|&n| GraphKind::ALL.into_iter().map(move |kind| p.spec(kind, n)))
        .collect()
}
