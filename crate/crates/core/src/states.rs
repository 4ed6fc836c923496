//! Representative states: generalized GHZ, excitation states, the unique
//! representative of each non-degenerate Jordan structure, and excitations
//! spread over several blocks.
//!
//! Excitation-type states use the unnormalized convention with product-basis
//! coefficient 1 per arrangement.

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::symspace::{arrangements, occ_basis, SymState};

/// Jordan block sizes laid out contiguously in the one-particle basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockLayout {
    /// Sizes must be positive; they are stored as given (callers wanting the
    /// canonical descending order should sort first).
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::InvalidArgument(format!("invalid block layout {sizes:?}")));
        }
        let offsets = sizes
            .iter()
            .scan(0, |acc, &k| {
                let start = *acc;
                *acc += k;
                Some(start)
            })
            .collect();
        Ok(Self { sizes, offsets })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `(block, level)` of a flat one-particle index.
    pub fn locate(&self, flat: usize) -> Option<(usize, usize)> {
        self.offsets
            .iter()
            .zip(&self.sizes)
            .position(|(&o, &k)| flat >= o && flat < o + k)
            .map(|b| (b, flat - self.offsets[b]))
    }
}

/// `sum_i alpha_i |i>^{(x) n}`. With `alpha = None` every weight is `1/sqrt(d)`.
pub fn ghz(n: usize, d: usize, alpha: Option<&[C64]>) -> Result<SymState> {
    let default;
    let alpha = match alpha {
        Some(a) => a,
        None => {
            default = vec![C64::new(1.0 / (d as f64).sqrt(), 0.0); d];
            &default
        }
    };
    if alpha.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} GHZ weights for d = {d}",
            alpha.len()
        )));
    }
    let mut occ = vec![0u32; d];
    let pairs: Vec<(Vec<u32>, C64)> = (0..d)
        .map(|i| {
            occ.iter_mut().for_each(|m| *m = 0);
            occ[i] = n as u32;
            (occ.clone(), alpha[i])
        })
        .collect();
    SymState::from_pairs(n, d, pairs.iter().map(|(o, a)| (o.as_slice(), *a)))
}

/// `E_j`: every product ket whose levels sum to `j`, with coefficient 1.
pub fn excitation(n: usize, d: usize, j: usize) -> Result<SymState> {
    if n >= 1 && j > n * (d.saturating_sub(1)) {
        return Err(Error::InvalidArgument(format!(
            "excitation {j} exceeds n (d - 1) = {}",
            n * (d - 1)
        )));
    }
    let basis = occ_basis(n, d)?;
    let amps = basis
        .iter()
        .map(|occ| {
            let level: usize = occ.iter().enumerate().map(|(i, &m)| i * m as usize).sum();
            if level == j {
                C64::new(arrangements(occ).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    SymState::new(n, d, amps)
}

/// `sum_b E_{k_b - 1}` with each term living in block `b`'s levels.
pub fn unique_representative(n: usize, layout: &BlockLayout) -> Result<SymState> {
    let d = layout.dim();
    let basis = occ_basis(n, d)?;
    let amps = basis
        .iter()
        .map(|occ| {
            let hit = layout.sizes.iter().zip(&layout.offsets).any(|(&k, &o)| {
                let inside: usize = occ[o..o + k].iter().map(|&m| m as usize).sum();
                let level: usize = occ[o..o + k].iter().enumerate().map(|(i, &m)| i * m as usize).sum();
                inside == n && level == k - 1
            });
            if hit {
                C64::new(arrangements(occ).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    SymState::new(n, d, amps)
}

/// Excitation `j` distributed over the blocks of `layout`, with exactly
/// `weights[b]` particles in block `b`. Product kets with a level beyond
/// their block size are omitted.
pub fn multi_block_excitation(n: usize, layout: &BlockLayout, j: usize, weights: &[usize]) -> Result<SymState> {
    if weights.len() != layout.sizes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {} blocks",
            weights.len(),
            layout.sizes.len()
        )));
    }
    if weights.iter().sum::<usize>() != n {
        return Err(Error::InvalidArgument(format!("weights {weights:?} do not add up to n = {n}")));
    }
    let d = layout.dim();
    let basis = occ_basis(n, d)?;
    let amps = basis
        .iter()
        .map(|occ| {
            let counts_match = layout
                .sizes
                .iter()
                .zip(&layout.offsets)
                .zip(weights)
                .all(|((&k, &o), &w)| occ[o..o + k].iter().map(|&m| m as usize).sum::<usize>() == w);
            let level: usize = layout
                .sizes
                .iter()
                .zip(&layout.offsets)
                .map(|(&k, &o)| occ[o..o + k].iter().enumerate().map(|(i, &m)| i * m as usize).sum::<usize>())
                .sum();
            if counts_match && level == j {
                C64::new(arrangements(occ).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    SymState::new(n, d, amps)
}

/// Nilpotent shift `sum_i |i-1><i|` inside every block of `layout`.
pub fn block_lowering(layout: &BlockLayout) -> crate::linalg::CMatrix {
    let d = layout.dim();
    let mut k = crate::linalg::CMatrix::zeros(d, d);
    for (&size, &o) in layout.sizes.iter().zip(&layout.offsets) {
        for i in 1..size {
            k[(o + i - 1, o + i)] = C64::new(1.0, 0.0);
        }
    }
    k
}
