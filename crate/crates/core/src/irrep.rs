//! Irrep block decompositions of invariant Hamiltonians.
//!
//! Each irrep block is a fixed linear combination of the orbit blocks
//! (`A + 3B`, `A - C`, ...) repeated `copies` times on the diagonal of the
//! block-diagonal form. With independent orbit blocks of equal element
//! variance `σ₀²`, each element of a combination has variance
//! `σ₀² Σ c_l²`; that sum is the block's variance factor.
//!
//! For `C_n` the blocks are the Fourier components
//!
//! ```text
//! h_k = F_0 + Σ_{j=1}^{⌊n/2⌋} ζ_j cos(2πkj/n) F_j,   ζ_j = 1 if 2j = n, else 2
//! ```
//!
//! and `h_k = h_{n-k}`, so `k` and `n - k` form one real irrep with two copies.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::EnsembleConfig;
use crate::error::{Error, Result};
use crate::groups::{build_group, pair_orbits, GroupName, PairOrbitStructure, PointGroup};
use crate::linalg::{eigenvalues, SymMatrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrepBlockSpec {
    pub label: String,
    /// How many times the block appears in the block-diagonal form.
    pub copies: usize,
    /// Weight of each orbit block, indexed like the orbit labels.
    pub coefficients: Vec<f64>,
    /// Predicted `Var / σ₀²` of each element of the block.
    pub variance_factor: f64,
}

impl IrrepBlockSpec {
    fn new(label: impl Into<String>, copies: usize, coefficients: Vec<f64>) -> Self {
        let variance_factor = coefficients.iter().map(|c| c * c).sum();
        Self {
            label: label.into(),
            copies,
            coefficients,
            variance_factor,
        }
    }

    /// Element variance when orbit label `l` has element variance `vars[l]`.
    pub fn predicted_variance(&self, vars: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(vars)
            .map(|(c, v)| c * c * v)
            .sum()
    }

    /// The block matrix for the given orbit blocks.
    pub fn combine(&self, label_blocks: &[SymMatrix]) -> Result<SymMatrix> {
        SymMatrix::linear_combination(&self.coefficients, label_blocks)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrrepDecomposition {
    pub group: GroupName,
    pub orbit_labels: Vec<String>,
    pub irreps: Vec<IrrepBlockSpec>,
}

impl IrrepDecomposition {
    /// Total number of copies; equals the number of sites.
    pub fn total_copies(&self) -> usize {
        self.irreps.iter().map(|b| b.copies).sum()
    }

    pub fn num_labels(&self) -> usize {
        self.orbit_labels.len()
    }

    /// Fraction of the full space spanned by each irrep.
    pub fn dimensional_fractions(&self) -> Vec<f64> {
        let total = self.total_copies() as f64;
        self.irreps.iter().map(|b| b.copies as f64 / total).collect()
    }

    pub fn variance_factors(&self) -> Vec<f64> {
        self.irreps.iter().map(|b| b.variance_factor).collect()
    }
}

/// Explicit block-diagonal forms for the tetrahedron, octahedron and cube.
pub fn decompose_polyhedral(g: &PointGroup) -> Result<IrrepDecomposition> {
    let irreps = match g.name {
        GroupName::Tetra => vec![
            IrrepBlockSpec::new("1dim", 1, vec![1.0, 3.0]),
            IrrepBlockSpec::new("3dim", 3, vec![1.0, -1.0]),
        ],
        GroupName::Octa => vec![
            IrrepBlockSpec::new("1dim", 1, vec![1.0, 4.0, 1.0]),
            IrrepBlockSpec::new("2dim", 2, vec![1.0, -2.0, 1.0]),
            IrrepBlockSpec::new("3dim", 3, vec![1.0, 0.0, -1.0]),
        ],
        GroupName::Cube => vec![
            IrrepBlockSpec::new("1dim+", 1, vec![1.0, 3.0, 3.0, 1.0]),
            IrrepBlockSpec::new("1dim-", 1, vec![1.0, -3.0, 3.0, -1.0]),
            IrrepBlockSpec::new("3dim+", 3, vec![1.0, 1.0, -1.0, -1.0]),
            IrrepBlockSpec::new("3dim-", 3, vec![1.0, -1.0, -1.0, 1.0]),
        ],
        GroupName::Cyclic(_) => {
            return Err(Error::invalid(
                "cyclic groups use the Fourier decomposition (cn_decomposition)",
            ))
        }
    };
    Ok(IrrepDecomposition {
        group: g.name,
        orbit_labels: pair_orbits(g).labels,
        irreps,
    })
}

/// Double-counting weights `ζ_j` for `j = 0..=⌊n/2⌋` (with `ζ_0 = 1` for `F_0`).
pub fn cn_zeta(n: usize) -> Vec<f64> {
    (0..=n / 2)
        .map(|j| if j == 0 || 2 * j == n { 1.0 } else { 2.0 })
        .collect()
}

/// Coefficients of `F_0 … F_{⌊n/2⌋}` in `h_k`.
pub fn cn_coefficients(n: usize, k: usize) -> Vec<f64> {
    cn_zeta(n)
        .iter()
        .enumerate()
        .map(|(j, z)| {
            if j == 0 {
                1.0
            } else {
                z * (2.0 * PI * (k * j) as f64 / n as f64).cos()
            }
        })
        .collect()
}

/// Real irreps of `C_n`: `k = 0..=⌊n/2⌋`, where `k` and `n - k` share a block.
pub fn cn_decomposition(n: usize) -> Result<IrrepDecomposition> {
    let g = GroupName::Cyclic(n);
    g.validate()?;
    let irreps = (0..=n / 2)
        .map(|k| {
            let copies = if k == 0 || 2 * k == n { 1 } else { 2 };
            IrrepBlockSpec::new(format!("k={k}"), copies, cn_coefficients(n, k))
        })
        .collect();
    Ok(IrrepDecomposition {
        group: g,
        orbit_labels: (0..=n / 2).map(|j| format!("F{j}")).collect(),
        irreps,
    })
}

/// Fourier decomposition for cyclic groups, explicit forms otherwise.
pub fn decompose(g: &PointGroup) -> Result<IrrepDecomposition> {
    match g.name {
        GroupName::Cyclic(n) => cn_decomposition(n),
        _ => decompose_polyhedral(g),
    }
}

/// The `n` Fourier blocks of a block-circulant Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct CnBlockSet {
    pub n: usize,
    /// `h_0 … h_{n-1}`.
    pub blocks: Vec<SymMatrix>,
    /// `ζ_j` for `j = 0..=⌊n/2⌋`.
    pub zeta: Vec<f64>,
}

/// Builds `h_k` for every `k` from `F_0 … F_{⌊n/2⌋}`. Blocks with `k > n/2`
/// are copies of `h_{n-k}`.
pub fn cn_blocks(n: usize, f: &[SymMatrix]) -> Result<CnBlockSet> {
    GroupName::Cyclic(n).validate()?;
    if f.len() != n / 2 + 1 {
        return Err(Error::invalid(format!(
            "C_{n} needs {} blocks F_0..F_{}, got {}",
            n / 2 + 1,
            n / 2,
            f.len()
        )));
    }
    let half: Vec<SymMatrix> = (0..=n / 2)
        .map(|k| SymMatrix::linear_combination(&cn_coefficients(n, k), f))
        .collect::<Result<_>>()?;
    let blocks = (0..n).map(|k| half[k.min(n - k)].clone()).collect();
    Ok(CnBlockSet {
        n,
        blocks,
        zeta: cn_zeta(n),
    })
}

/// `1 + Σ_j ζ_j² cos²(2πkj/n)` for `k = 0..n`.
pub fn cn_variance_factors(n: usize) -> Result<Vec<f64>> {
    GroupName::Cyclic(n).validate()?;
    Ok((0..n)
        .map(|k| {
            cn_coefficients(n, k.min(n - k))
                .iter()
                .map(|c| c * c)
                .sum()
        })
        .collect())
}

/// Spectra of the irrep blocks and their union (with copies).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpectra {
    /// Ascending eigenvalues of each irrep block, one entry per irrep.
    pub per_irrep: Vec<Vec<f64>>,
    /// Ascending union over irreps, each block repeated `copies` times.
    pub union: Vec<f64>,
}

pub fn block_spectra(decomp: &IrrepDecomposition, label_blocks: &[SymMatrix]) -> Result<BlockSpectra> {
    if label_blocks.len() != decomp.num_labels() {
        return Err(Error::invalid(format!(
            "expected {} orbit blocks, got {}",
            decomp.num_labels(),
            label_blocks.len()
        )));
    }
    let per_irrep = decomp
        .irreps
        .iter()
        .map(|irrep| eigenvalues(&irrep.combine(label_blocks)?))
        .collect::<Result<Vec<_>>>()?;
    let mut union: Vec<f64> = decomp
        .irreps
        .iter()
        .zip(&per_irrep)
        .flat_map(|(irrep, ev)| std::iter::repeat_n(ev, irrep.copies).flatten().copied())
        .collect();
    union.sort_by(f64::total_cmp);
    Ok(BlockSpectra { per_irrep, union })
}

/// Tally of which irrep block holds the lowest eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub group: GroupName,
    pub block_dim: usize,
    pub trials: u64,
    pub irreps: Vec<IrrepBlockSpec>,
    pub counts: Vec<u64>,
    /// Trials where two blocks had exactly equal minima.
    pub ties: u64,
}

impl Census {
    pub fn fractions(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    pub fn dimensional_fractions(&self) -> Vec<f64> {
        let total: usize = self.irreps.iter().map(|b| b.copies).sum();
        self.irreps
            .iter()
            .map(|b| b.copies as f64 / total as f64)
            .collect()
    }

    pub fn fraction_of(&self, label: &str) -> Option<f64> {
        let i = self.irreps.iter().position(|b| b.label == label)?;
        Some(self.counts[i] as f64 / self.trials as f64)
    }
}

/// Index of the smallest value; exact ties go to the earlier index and are
/// reported.
pub(crate) fn argmin_with_tie(values: impl IntoIterator<Item = f64>) -> (usize, bool) {
    let mut best = (0, f64::INFINITY);
    let mut tie = false;
    for (i, v) in values.into_iter().enumerate() {
        if v < best.1 {
            best = (i, v);
            tie = false;
        } else if v == best.1 {
            tie = true;
        }
    }
    (best.0, tie)
}

/// Irrep holding the ground state of one sampled Hamiltonian.
fn ground_state_irrep(decomp: &IrrepDecomposition, label_blocks: &[SymMatrix]) -> Result<(usize, bool)> {
    let minima = decomp
        .irreps
        .iter()
        .map(|irrep| Ok(eigenvalues(&irrep.combine(label_blocks)?)?[0]))
        .collect::<Result<Vec<f64>>>()?;
    Ok(argmin_with_tie(minima))
}

/// Census over an explicit decomposition. Trials run in parallel on the
/// current rayon pool; the result does not depend on scheduling.
pub fn census_with(decomp: &IrrepDecomposition, cfg: &EnsembleConfig) -> Result<Census> {
    cfg.validate()?;
    let num_labels = decomp.num_labels();
    let winners = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let blocks: Vec<SymMatrix> = cfg
                .draw_blocks(t, num_labels)?
                .into_iter()
                .map(|b| b.matrix)
                .collect();
            ground_state_irrep(decomp, &blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0u64; decomp.irreps.len()];
    let mut ties = 0;
    for (w, tie) in winners {
        counts[w] += 1;
        ties += u64::from(tie);
    }
    Ok(Census {
        group: decomp.group,
        block_dim: cfg.m,
        trials: cfg.trials,
        irreps: decomp.irreps.clone(),
        counts,
        ties,
    })
}

/// Ground-state census for the group named in `cfg`.
pub fn ground_state_irrep_census(cfg: &EnsembleConfig) -> Result<Census> {
    cfg.validate()?;
    let g = build_group(cfg.group)?;
    census_with(&decompose(&g)?, cfg)
}

/// Orbit structure and decomposition together, for callers that need both.
pub fn group_setup(name: GroupName) -> Result<(PointGroup, PairOrbitStructure, IrrepDecomposition)> {
    let g = build_group(name)?;
    let orbits = pair_orbits(&g);
    let decomp = decompose(&g)?;
    Ok((g, orbits, decomp))
}
