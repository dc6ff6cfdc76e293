//! Seeded random streams and Gaussian random blocks.
//!
//! Every random draw in an experiment comes from a [`Substream`] keyed by
//! `(master_seed, trial_index, stream_tag)`. The key is hashed with the
//! SplitMix64 finalizer
//!
//! ```text
//! mix(x) = let x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9
//!          let x = (x ^ (x >> 27)) * 0x94d049bb133111eb
//!          x ^ (x >> 31)
//! h0 = mix(master_seed + γ)
//! h1 = mix(h0 ^ (trial_index + 2γ))
//! h2 = mix(h1 ^ (stream_tag  + 3γ))        γ = 0x9e3779b97f4a7c15, wrapping arithmetic
//! ```
//!
//! and `h2` seeds a xoshiro256++ generator (state expanded from `h2` with
//! SplitMix64). Uniforms are `(next_u64 >> 11) · 2⁻⁵³`; normals come from the
//! Marsaglia polar method, which yields deviates in pairs and keeps the
//! second one for the next call.
//!
//! Stream tags enumerate orbit labels (A = 0, B = 1, ...), so adding a label
//! never perturbs the draws of earlier labels.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupName;
use crate::linalg::SymMatrix;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Hash of a `(master_seed, trial_index, stream_tag)` key.
pub fn substream_key(master_seed: u64, trial_index: u64, stream_tag: u64) -> u64 {
    let h0 = mix64(master_seed.wrapping_add(GOLDEN_GAMMA));
    let h1 = mix64(h0 ^ trial_index.wrapping_add(GOLDEN_GAMMA.wrapping_mul(2)));
    mix64(h1 ^ stream_tag.wrapping_add(GOLDEN_GAMMA.wrapping_mul(3)))
}

/// A deterministic random stream owned by a single trial.
#[derive(Debug, Clone)]
pub struct Substream {
    rng: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl Substream {
    pub fn new(master_seed: u64, trial_index: u64, stream_tag: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(substream_key(
                master_seed,
                trial_index,
                stream_tag,
            )),
            spare: None,
        }
    }

    /// Uniform deviate on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate (Marsaglia polar method).
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

/// Shorthand for [`Substream::new`].
pub fn substream(master_seed: u64, trial_index: u64, stream_tag: u64) -> Substream {
    Substream::new(master_seed, trial_index, stream_tag)
}

/// A random symmetric block standing for one orbit label of an invariant
/// Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomBlock {
    pub label: usize,
    pub matrix: SymMatrix,
}

/// Symmetric `m × m` matrix whose entries on and above the diagonal are
/// i.i.d. `N(0, sigma²)`, drawn row by row, mirrored below the diagonal.
///
/// The diagonal gets the same variance as the off-diagonal entries.
pub fn random_sym_block(rng: &mut Substream, m: usize, sigma: f64) -> Result<SymMatrix> {
    if m == 0 {
        return Err(Error::invalid("block size m must be at least 1"));
    }
    SymMatrix::from_upper_fn(m, |_, _| sigma * rng.gaussian())
}

/// Everything needed to reproduce a random-matrix experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub master_seed: u64,
    pub trials: u64,
    /// Standard deviation of every independent matrix element.
    pub sigma0: f64,
    pub group: GroupName,
    /// Size of each orbit block.
    pub m: usize,
    /// Optional per-label element variances overriding `sigma0²`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_variances: Option<Vec<f64>>,
}

impl EnsembleConfig {
    pub fn new(group: GroupName, m: usize, trials: u64, master_seed: u64) -> Self {
        Self {
            master_seed,
            trials,
            sigma0: 1.0,
            group,
            m,
            label_variances: None,
        }
    }

    pub fn with_sigma0(mut self, sigma0: f64) -> Self {
        self.sigma0 = sigma0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(Error::invalid("sigma0 must be positive and finite"));
        }
        if self.m == 0 {
            return Err(Error::invalid("block size m must be at least 1"));
        }
        if let Some(vars) = &self.label_variances {
            if vars.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::invalid("label variances must be positive"));
            }
        }
        self.group.validate()
    }

    /// Standard deviation used for orbit label `label`.
    pub fn label_sigma(&self, label: usize) -> Result<f64> {
        match &self.label_variances {
            None => Ok(self.sigma0),
            Some(vars) => vars.get(label).map(|v| v.sqrt()).ok_or_else(|| {
                Error::invalid(format!("no variance supplied for orbit label {label}"))
            }),
        }
    }

    /// Draws one block per orbit label for trial `trial_index`.
    pub fn draw_blocks(&self, trial_index: u64, num_labels: usize) -> Result<Vec<RandomBlock>> {
        (0..num_labels)
            .map(|label| {
                let mut rng = substream(self.master_seed, trial_index, label as u64);
                let sigma = self.label_sigma(label)?;
                Ok(RandomBlock {
                    label,
                    matrix: random_sym_block(&mut rng, self.m, sigma)?,
                })
            })
            .collect()
    }
}
