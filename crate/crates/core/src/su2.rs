//! Rotationally invariant (SU(2)) model of ground-state angular momentum.
//!
//! A kernel depending only on the angle `ω` between two directions has
//! Legendre components
//!
//! ```text
//! h_J = 2π ∫₀^π P_J(cos ω) F(ω) sin ω dω
//! ```
//!
//! and, for independent elements of `F` with common spread `σ̄`, the elements
//! of `h_J` have variance `4π²σ̄² · I_J` with
//!
//! ```text
//! I_J = ∫₀^π P_J(cos ω)² sin²ω dω.
//! ```
//!
//! [`sigma_j_sq`] returns `I_J` (the universal factor, without `4π²σ̄²`).
//! The many-body model then treats the `N_J` levels with angular momentum
//! `J` as independent Gaussians of width `√N_J · σ_J` and records which `J`
//! holds the lowest level.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::substream;
use crate::error::{Error, Result};
use crate::irrep::argmin_with_tie;

/// Dimension table shipped with the crate: `J` subspaces of 8 identical
/// nucleons in the pf shell.
pub const BUNDLED_DIMS_CSV: &str = include_str!("../data/pf_shell_8.csv");

pub const DEFAULT_QUAD_POINTS: usize = 512;
pub const MIN_QUAD_POINTS: usize = 64;

/// Nodes per Gauss–Legendre panel in the composite rule.
const PANEL_ORDER: usize = 32;

/// `P_J(x)` by the three-term recurrence
/// `(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}`.
pub fn legendre(j: u32, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("Legendre argument {x} outside [-1, 1]")));
    }
    Ok(legendre_unchecked(j, x))
}

fn legendre_unchecked(j: u32, x: f64) -> f64 {
    legendre_with_derivative(j as usize, x).0
}

/// `(P_n(x), P_n'(x))`; the derivative formula is only used away from `±1`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = nf * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration from
/// the Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]` with at least
/// `points` nodes.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(PANEL_ORDER);
    let panels = points.div_ceil(PANEL_ORDER).max(1);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// `∫₀^π P_J(cos ω)² sin²ω dω`, integrated in `ω`.
pub fn sigma_j_sq(j: u32, quad_points: usize) -> Result<f64> {
    if quad_points < MIN_QUAD_POINTS {
        return Err(Error::invalid(format!(
            "quad_points must be at least {MIN_QUAD_POINTS}, got {quad_points}"
        )));
    }
    Ok(integrate(
        |w| {
            let p = legendre_unchecked(j, w.cos());
            let s = w.sin();
            p * p * s * s
        },
        0.0,
        PI,
        quad_points,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthEntry {
    #[serde(rename = "twoJ")]
    pub two_j: u32,
    #[serde(rename = "sigmaJ_sq")]
    pub sigma_j_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthTable {
    pub entries: Vec<WidthEntry>,
}

impl WidthTable {
    /// Integer `J = 0..=jmax`.
    pub fn compute(jmax: u32, quad_points: usize) -> Result<Self> {
        let entries = (0..=jmax)
            .map(|j| {
                Ok(WidthEntry {
                    two_j: 2 * j,
                    sigma_j_sq: sigma_j_sq(j, quad_points)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    pub fn get(&self, two_j: u32) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.two_j == two_j)
            .map(|e| e.sigma_j_sq)
    }
}

/// `√N_J · sigma_scale · √I_J`.
pub fn effective_width(two_j: u32, n_j: u64, sigma_scale: f64, quad_points: usize) -> Result<f64> {
    if n_j == 0 {
        return Err(Error::invalid("N_J must be at least 1"));
    }
    let j = integer_j(two_j)?;
    Ok((n_j as f64).sqrt() * sigma_scale * sigma_j_sq(j, quad_points)?.sqrt())
}

fn integer_j(two_j: u32) -> Result<u32> {
    if two_j % 2 != 0 {
        return Err(Error::invalid(format!(
            "no Legendre width for half-integer J = {two_j}/2; supply a width override"
        )));
    }
    Ok(two_j / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    #[serde(rename = "twoJ")]
    pub two_j: u32,
    pub dim: u64,
}

/// Subspace dimension `N_J` per angular momentum, keyed by `2J` and kept
/// sorted by `2J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionTable {
    entries: Vec<DimEntry>,
}

impl DimensionTable {
    pub fn new(mut entries: Vec<DimEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("dimension table is empty"));
        }
        entries.sort_by_key(|e| e.two_j);
        if let Some(w) = entries.windows(2).find(|w| w[0].two_j == w[1].two_j) {
            return Err(Error::invalid(format!("duplicate twoJ = {}", w[0].two_j)));
        }
        if let Some(e) = entries.iter().find(|e| e.dim == 0) {
            return Err(Error::invalid(format!("twoJ = {} has zero dimension", e.two_j)));
        }
        Ok(Self { entries })
    }

    /// Convenience constructor from `(J, N_J)` pairs with integer `J`.
    pub fn from_integer_j(pairs: &[(u32, u64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(j, dim)| DimEntry { two_j: 2 * j, dim })
                .collect(),
        )
    }

    /// Reads `twoJ,dim` CSV; lines starting with `#` are ignored.
    pub fn from_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(csv_err)?.clone();
        if headers.iter().collect::<Vec<_>>() != ["twoJ", "dim"] {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `twoJ,dim`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let entries = rdr
            .deserialize()
            .collect::<std::result::Result<Vec<DimEntry>, _>>()
            .map_err(csv_err)?;
        Self::new(entries)
    }

    pub fn bundled() -> Self {
        Self::from_csv(BUNDLED_DIMS_CSV.as_bytes()).expect("bundled dimension table is valid")
    }

    pub fn entries(&self) -> &[DimEntry] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.dim).sum()
    }

    pub fn max_two_j(&self) -> u32 {
        self.entries.last().map(|e| e.two_j).unwrap_or(0)
    }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}

/// `N_J / N_tot` per entry.
pub fn f_space(dims: &DimensionTable) -> Vec<(u32, f64)> {
    let total = dims.total() as f64;
    dims.entries
        .iter()
        .map(|e| (e.two_j, e.dim as f64 / total))
        .collect()
}

/// Parameters of a ground-state-J Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GsRun {
    pub master_seed: u64,
    pub trials: u64,
    /// Multiplies every width; the resulting distribution does not depend on it.
    pub sigma_scale: f64,
    pub quad_points: usize,
    /// Replacement `I_J` values keyed by `2J`, used instead of the integral.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub width_overrides: BTreeMap<u32, f64>,
}

impl GsRun {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        Self {
            master_seed,
            trials,
            sigma_scale: 1.0,
            quad_points: DEFAULT_QUAD_POINTS,
            width_overrides: BTreeMap::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if !(self.sigma_scale.is_finite() && self.sigma_scale > 0.0) {
            return Err(Error::invalid("sigma scale must be positive and finite"));
        }
        if self.width_overrides.values().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::invalid("width overrides must be positive"));
        }
        Ok(())
    }

    /// Effective width `√N_J · σ_J` for each table entry.
    pub fn widths(&self, dims: &DimensionTable) -> Result<Vec<f64>> {
        dims.entries
            .iter()
            .map(|e| {
                let var = match self.width_overrides.get(&e.two_j) {
                    Some(v) => *v,
                    None => sigma_j_sq(integer_j(e.two_j)?, self.quad_points)?,
                };
                Ok((e.dim as f64).sqrt() * self.sigma_scale * var.sqrt())
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GsEntry {
    #[serde(rename = "twoJ")]
    pub two_j: u32,
    pub f_space: f64,
    #[serde(rename = "f_RM")]
    pub f_rm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GsDistribution {
    pub entries: Vec<GsEntry>,
    pub counts: Vec<u64>,
    pub trials: u64,
    pub ties: u64,
}

impl GsDistribution {
    pub fn f_rm(&self, two_j: u32) -> Option<f64> {
        self.entries.iter().find(|e| e.two_j == two_j).map(|e| e.f_rm)
    }

    /// `2J` with the largest ground-state count (first one on ties).
    pub fn modal_two_j(&self) -> u32 {
        let mut best = 0;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > self.counts[best] {
                best = i;
            }
        }
        self.entries[best].two_j
    }
}

/// Lowest of `n` standard normals from `rng`.
fn min_of_normals(rng: &mut crate::ensemble::Substream, n: u64) -> f64 {
    (0..n).fold(f64::INFINITY, |acc, _| acc.min(rng.gaussian()))
}

/// For each trial, draws `N_J` energies of width `√N_J σ_J` for every `J`
/// and records which `J` holds the overall minimum. Each `J` draws from
/// the substream tagged by its `2J`.
pub fn gs_distribution(dims: &DimensionTable, run: &GsRun) -> Result<GsDistribution> {
    run.validate()?;
    let widths = run.widths(dims)?;
    let entries = dims.entries();
    let winners: Vec<(usize, bool)> = (0..run.trials)
        .into_par_iter()
        .map(|t| {
            argmin_with_tie(entries.iter().zip(&widths).map(|(e, w)| {
                let mut rng = substream(run.master_seed, t, u64::from(e.two_j));
                w * min_of_normals(&mut rng, e.dim)
            }))
        })
        .collect();
    let mut counts = vec![0u64; entries.len()];
    let mut ties = 0;
    for (w, tie) in winners {
        counts[w] += 1;
        ties += u64::from(tie);
    }
    let fs = f_space(dims);
    let out = fs
        .iter()
        .zip(&counts)
        .map(|(&(two_j, f_space), &c)| GsEntry {
            two_j,
            f_space,
            f_rm: c as f64 / run.trials as f64,
        })
        .collect();
    Ok(GsDistribution {
        entries: out,
        counts,
        trials: run.trials,
        ties,
    })
}
