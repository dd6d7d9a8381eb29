//! Cluster-state graphs.
//!
//! An [`AdjacencyMatrix`] holds the real weights `A[j][k]` of the graph whose
//! cluster state we want to stabilize. Nodes are 0-based internally; anything
//! printed for humans (CSV headers, error messages) uses 1-based labels.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Preset topologies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    /// Path graph, edges `j <-> j+1`.
    Linear,
    /// Two-row ladder `2 x (n/2)`.
    Rectangular,
    /// All-to-all.
    Complete,
}

impl GraphKind {
    pub const ALL: [GraphKind; 3] = [GraphKind::Linear, GraphKind::Rectangular, GraphKind::Complete];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Linear => "linear",
            GraphKind::Rectangular => "rectangular",
            GraphKind::Complete => "complete",
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "line" | "path" => Ok(GraphKind::Linear),
            "rectangular" | "ladder" | "rect" => Ok(GraphKind::Rectangular),
            "complete" | "full" | "fully_connected" => Ok(GraphKind::Complete),
            other => Err(Error::Config(format!("unknown graph kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Real symmetric, zero-diagonal graph weights.
///
/// Construction only checks that the matrix is square, nonempty and finite;
/// symmetry and the zero diagonal are checked by [`AdjacencyMatrix::validate`]
/// so that malformed inputs can still be inspected.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjacencyMatrix {
    entries: DMatrix<f64>,
}

/// Outcome of [`AdjacencyMatrix::validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjacencyReport {
    /// `max |A - A^T|`.
    pub symmetry_residual: f64,
    /// `max |A_jj|`.
    pub max_diagonal: f64,
    pub all_finite: bool,
    pub tol: f64,
    pub pass: bool,
}

impl AdjacencyMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() == 0 || entries.nrows() != entries.ncols() {
            return Err(Error::InvalidShape(format!(
                "adjacency matrix must be square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("adjacency matrix has non-finite entries".into()));
        }
        Ok(Self { entries })
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(n, n))
    }

    /// Builds an unweighted graph from 0-based edge pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut a = DMatrix::zeros(n, n);
        for &(j, k) in edges {
            if j >= n || k >= n || j == k {
                return Err(Error::InvalidShape(format!("bad edge ({j}, {k}) for n = {n}")));
            }
            a[(j, k)] = 1.0;
            a[(k, j)] = 1.0;
        }
        Self::new(a)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[(j, k)]
    }

    /// Number of nonzero upper-triangular entries.
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .filter(|&(j, k)| self.entries[(j, k)] != 0.0)
            .count()
    }

    /// 0-based neighbours of node `j`.
    pub fn neighbours(&self, j: usize) -> Vec<usize> {
        (0..self.n()).filter(|&k| k != j && self.entries[(j, k)] != 0.0).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.amax()
    }

    pub fn validate(&self, tol: f64) -> AdjacencyReport {
        let n = self.n();
        let mut symmetry_residual = 0.0f64;
        let mut max_diagonal = 0.0f64;
        for j in 0..n {
            max_diagonal = max_diagonal.max(self.entries[(j, j)].abs());
            for k in 0..n {
                symmetry_residual =
                    symmetry_residual.max((self.entries[(j, k)] - self.entries[(k, j)]).abs());
            }
        }
        let all_finite = self.entries.iter().all(|x| x.is_finite());
        AdjacencyReport {
            symmetry_residual,
            max_diagonal,
            all_finite,
            tol,
            pass: all_finite && symmetry_residual <= tol && max_diagonal <= tol,
        }
    }

    /// Fails unless the matrix is symmetric with zero diagonal to `tol`.
    pub fn ensure_valid(&self, tol: f64) -> Result<()> {
        let report = self.validate(tol);
        if report.pass {
            Ok(())
        } else {
            Err(Error::InvalidShape(format!(
                "adjacency matrix invalid: symmetry residual {:.3e}, max diagonal {:.3e} (tol {:.1e})",
                report.symmetry_residual, report.max_diagonal, tol
            )))
        }
    }

    /// Relabels nodes: node `j` of the result is node `perm[j]` of `self`,
    /// i.e. `P A P^T` with `P[j][perm[j]] = 1`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Shape(format!("not a permutation of 0..{n}")));
        }
        Self::new(DMatrix::from_fn(n, n, |j, k| self.entries[(perm[j], perm[k])]))
    }

    /// Plain-text form: first line `n`, then `n` rows of `n` space-separated reals.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = format!("{n}\n");
        for j in 0..n {
            let row: Vec<String> = (0..n).map(|k| format!("{}", self.entries[(j, k)])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Config("empty adjacency file".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::Config(format!("adjacency header `{header}` is not a size")))?;
        let mut data = Vec::with_capacity(n * n);
        for row in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Config(format!("adjacency file ends before row {}", row + 1)))?;
            let values = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| Error::Config(format!("bad number `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != n {
                return Err(Error::Config(format!(
                    "adjacency row {} has {} entries, expected {n}",
                    row + 1,
                    values.len()
                )));
            }
            data.extend(values);
        }
        if lines.next().is_some() {
            return Err(Error::Config("trailing rows in adjacency file".into()));
        }
        Self::new(DMatrix::from_row_slice(n, n, &data))
    }
}

/// 0/1 adjacency matrix of a preset topology.
///
/// The rectangular ladder is labelled column by column: column `c` holds the
/// nodes `(2c, 2c+1)` joined by a rung, and rails join equal rows of
/// neighbouring columns. For `n = 4` this is the square `1-2, 3-4, 1-3, 2-4`.
pub fn make_graph(kind: GraphKind, n: usize) -> Result<AdjacencyMatrix> {
    if n == 0 {
        return Err(Error::InvalidShape("graph needs at least one node".into()));
    }
    let edges: Vec<(usize, usize)> = match kind {
        GraphKind::Linear => (0..n - 1).map(|j| (j, j + 1)).collect(),
        GraphKind::Complete => (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))).collect(),
        GraphKind::Rectangular => {
            if n % 2 != 0 || n < 4 {
                return Err(Error::InvalidShape(format!(
                    "rectangular ladder needs an even n >= 4, got {n}"
                )));
            }
            let cols = n / 2;
            let mut e: Vec<(usize, usize)> = (0..cols).map(|c| (2 * c, 2 * c + 1)).collect();
            for c in 0..cols - 1 {
                e.push((2 * c, 2 * c + 2));
                e.push((2 * c + 1, 2 * c + 3));
            }
            e
        }
    };
    AdjacencyMatrix::from_edges(n, &edges)
}
