//! Symmetric n-qudit states, their dense oracle embedding, and site-local
//! operator application.
//!
//! A [`SymState`] stores coefficients of the orthonormal symmetrized kets
//! `|occ> = N(occ)^{-1/2} sum_{arrangements} |i_1 ... i_n>`. Site-1 operators
//! are applied through the site-split isometry
//! `|occ> -> sum_i sqrt(m_i / n) |i> (x) |occ - e_i>` into
//! `C^d (x) Sym^{n-1}(C^d)`, so nothing of size `d^n` is ever built outside
//! the [`FullState`] oracle.

mod basis;
mod power;

pub use basis::{arrangements, binomial, occ_basis, sym_dim, OccBasis};
pub use power::{tensor_power_apply, tensor_power_apply_expand};

use crate::error::{Error, Result};
use crate::linalg::{diff_norm, norm, CMatrix, C64};

/// Largest `d^n` the dense oracle accepts.
pub const FULL_STATE_CAP: u128 = 1 << 20;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Amplitudes over the occupation-number basis of `Sym^n(C^d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymState {
    n: usize,
    d: usize,
    amps: Vec<C64>,
}

impl SymState {
    pub fn new(n: usize, d: usize, amps: Vec<C64>) -> Result<Self> {
        check_nd(n, d)?;
        let dim = sym_dim(n, d);
        if amps.len() as u128 != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for Sym^{n}(C^{d}) of dimension {dim}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { n, d, amps })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        check_nd(n, d)?;
        let dim = sym_dim(n, d);
        if dim > 1 << 31 {
            return Err(Error::Overflow);
        }
        Ok(Self {
            n,
            d,
            amps: vec![zero(); dim as usize],
        })
    }

    /// Builds a state from `(occupation, amplitude)` pairs; repeated
    /// occupations accumulate.
    pub fn from_pairs<'a>(
        n: usize,
        d: usize,
        pairs: impl IntoIterator<Item = (&'a [u32], C64)>,
    ) -> Result<Self> {
        let basis = occ_basis(n, d)?;
        let mut amps = vec![zero(); basis.len()];
        for (occ, a) in pairs {
            let idx = basis.index_of(occ).ok_or_else(|| {
                Error::InvalidArgument(format!("{occ:?} is not an occupation vector for n={n}, d={d}"))
            })?;
            amps[idx] += a;
        }
        Self::new(n, d, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn basis(&self) -> OccBasis {
        OccBasis::new(self.n, self.d).expect("validated at construction")
    }

    pub fn amplitude(&self, occ: &[u32]) -> C64 {
        self.basis().index_of(occ).map_or(zero(), |i| self.amps[i])
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn normalized(&self) -> Result<Self> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(self.scaled(C64::new(1.0 / nrm, 0.0)))
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            n: self.n,
            d: self.d,
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            n: self.n,
            d: self.d,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn distance(&self, other: &Self) -> f64 {
        diff_norm(&self.amps, &other.amps)
    }

    /// Inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        crate::linalg::dot(&self.amps, &other.amps)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.n, self.d) != (other.n, other.d) {
            return Err(Error::DimensionMismatch(format!(
                "states with (n, d) = ({}, {}) and ({}, {})",
                self.n, self.d, other.n, other.d
            )));
        }
        Ok(())
    }
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidArgument("d must be >= 2".into()));
    }
    Ok(())
}

fn full_size(n: usize, d: usize) -> u128 {
    (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Dense amplitudes over the product basis `(C^d)^{(x) n}`; site 1 is the
/// most significant digit of the flat index.
#[derive(Clone, Debug, PartialEq)]
pub struct FullState {
    n: usize,
    d: usize,
    amps: Vec<C64>,
}

impl FullState {
    pub fn new(n: usize, d: usize, amps: Vec<C64>) -> Result<Self> {
        check_nd(n, d)?;
        let size = full_size(n, d);
        if size > FULL_STATE_CAP {
            return Err(Error::ScaleExceeded { size });
        }
        if amps.len() as u128 != size {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {d}^{n} = {size}",
                amps.len()
            )));
        }
        Ok(Self { n, d, amps })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        check_nd(n, d)?;
        let size = full_size(n, d);
        if size > FULL_STATE_CAP {
            return Err(Error::ScaleExceeded { size });
        }
        Ok(Self {
            n,
            d,
            amps: vec![zero(); size as usize],
        })
    }

    /// Product basis ket `|i_1 ... i_n>`.
    pub fn basis_ket(n: usize, d: usize, idx: &[usize]) -> Result<Self> {
        let mut f = Self::zeros(n, d)?;
        let flat = f.flat_index(idx)?;
        f.amps[flat] = C64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        diff_norm(&self.amps, &other.amps)
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.n || idx.iter().any(|&i| i >= self.d) {
            return Err(Error::InvalidArgument(format!(
                "multi-index {idx:?} out of range for n={}, d={}",
                self.n, self.d
            )));
        }
        Ok(idx.iter().fold(0, |acc, &i| acc * self.d + i))
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for k in (0..self.n).rev() {
            idx[k] = flat % self.d;
            flat /= self.d;
        }
        idx
    }

    fn occupation(&self, flat: usize) -> Vec<u32> {
        let mut occ = vec![0u32; self.d];
        let mut f = flat;
        for _ in 0..self.n {
            occ[f % self.d] += 1;
            f /= self.d;
        }
        occ
    }
}

/// Element of `C^d (x) Sym^{n-1}(C^d)`: row `i` holds the `Sym^{n-1}`
/// amplitudes paired with level `i` of particle 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstSiteState {
    n: usize,
    d: usize,
    cols: usize,
    grid: Vec<C64>,
}

impl FirstSiteState {
    pub fn new(n: usize, d: usize, grid: Vec<C64>) -> Result<Self> {
        check_nd(n, d)?;
        let cols = sym_dim(n - 1, d) as usize;
        if grid.len() != d * cols {
            return Err(Error::DimensionMismatch(format!(
                "grid of {} entries, expected {d} x {cols}",
                grid.len()
            )));
        }
        Ok(Self { n, d, cols, grid })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of `Sym^{n-1}` coordinates per row.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn grid(&self) -> &[C64] {
        &self.grid
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.grid[i * self.cols..(i + 1) * self.cols]
    }

    pub fn norm(&self) -> f64 {
        norm(&self.grid)
    }
}

/// Precomputed site-split isometry `V : Sym^n -> C^d (x) Sym^{n-1}`.
#[derive(Clone, Debug)]
pub struct SiteSplit {
    n: usize,
    d: usize,
    full: OccBasis,
    rest: OccBasis,
    // For each Sym^n index: (level i, Sym^{n-1} index, sqrt(m_i / n)).
    entries: Vec<Vec<(usize, usize, f64)>>,
}

impl SiteSplit {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        check_nd(n, d)?;
        let full = OccBasis::new(n, d)?;
        let rest = OccBasis::new(n - 1, d)?;
        let mut entries = Vec::with_capacity(full.len());
        let mut lowered = vec![0u32; d];
        for occ in full.iter() {
            let mut row = Vec::new();
            for i in 0..d {
                if occ[i] == 0 {
                    continue;
                }
                lowered.copy_from_slice(occ);
                lowered[i] -= 1;
                let j = rest.index_of(&lowered).expect("lowered occupation is valid");
                row.push((i, j, (occ[i] as f64 / n as f64).sqrt()));
            }
            entries.push(row);
        }
        Ok(Self {
            n,
            d,
            full,
            rest,
            entries,
        })
    }

    pub fn basis(&self) -> &OccBasis {
        &self.full
    }

    pub fn rest_basis(&self) -> &OccBasis {
        &self.rest
    }

    /// Coefficients `(level, rest index, weight)` of basis ket `k` under `V`.
    pub fn entries(&self, k: usize) -> &[(usize, usize, f64)] {
        &self.entries[k]
    }

    /// `V s`.
    pub fn split(&self, s: &SymState) -> Result<FirstSiteState> {
        self.check(s.n, s.d)?;
        let cols = self.rest.len();
        let mut grid = vec![zero(); self.d * cols];
        for (k, row) in self.entries.iter().enumerate() {
            let a = s.amps[k];
            if a == zero() {
                continue;
            }
            for &(i, j, w) in row {
                grid[i * cols + j] += a * w;
            }
        }
        FirstSiteState::new(self.n, self.d, grid)
    }

    /// `V^H g`: the coefficients of the orthogonal projection of `g` onto the
    /// embedded symmetric subspace.
    pub fn recombine(&self, g: &FirstSiteState) -> Result<SymState> {
        self.check(g.n, g.d)?;
        let cols = self.rest.len();
        let amps = self
            .entries
            .iter()
            .map(|row| row.iter().map(|&(i, j, w)| g.grid[i * cols + j] * w).sum())
            .collect();
        SymState::new(self.n, self.d, amps)
    }

    /// `M_(1) V s` expressed on the grid.
    pub fn apply_first(&self, s: &SymState, m: &CMatrix) -> Result<FirstSiteState> {
        check_local(m, self.d)?;
        let split = self.split(s)?;
        let cols = self.rest.len();
        let mut grid = vec![zero(); self.d * cols];
        for i in 0..self.d {
            for k in 0..self.d {
                let c = m[(i, k)];
                if c == zero() {
                    continue;
                }
                let src = split.row(k);
                for (dst, x) in grid[i * cols..(i + 1) * cols].iter_mut().zip(src) {
                    *dst += c * x;
                }
            }
        }
        FirstSiteState::new(self.n, self.d, grid)
    }

    /// Relative norm of the component of `g` orthogonal to `V Sym^n`.
    pub fn asymmetry(&self, g: &FirstSiteState) -> Result<f64> {
        let proj = self.split(&self.recombine(g)?)?;
        let gn = g.norm();
        if gn == 0.0 {
            return Ok(0.0);
        }
        Ok(diff_norm(&g.grid, &proj.grid) / gn)
    }

    fn check(&self, n: usize, d: usize) -> Result<()> {
        if (n, d) != (self.n, self.d) {
            return Err(Error::DimensionMismatch(format!(
                "site split for (n, d) = ({}, {}) applied to ({n}, {d})",
                self.n, self.d
            )));
        }
        Ok(())
    }
}

fn check_local(m: &CMatrix, d: usize) -> Result<()> {
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator on a d={d} site",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Outcome of a symmetry test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryCheck {
    pub symmetric: bool,
    /// Residual relative to the state norm.
    pub residual: f64,
}

/// Norm-preserving embedding into the product basis.
pub fn sym_to_full(s: &SymState) -> Result<FullState> {
    let mut f = FullState::zeros(s.n, s.d)?;
    let basis = s.basis();
    let weights: Vec<C64> = basis
        .iter()
        .zip(&s.amps)
        .map(|(occ, a)| a / arrangements(occ).sqrt())
        .collect();
    for flat in 0..f.amps.len() {
        let occ = f.occupation(flat);
        let k = basis.index_of(&occ).expect("valid occupation");
        f.amps[flat] = weights[k];
    }
    Ok(f)
}

/// Inverse of [`sym_to_full`] on the symmetric subspace.
pub fn full_to_sym(f: &FullState, tol: f64) -> Result<SymState> {
    let basis = OccBasis::new(f.n, f.d)?;
    let mut amps = vec![zero(); basis.len()];
    for (flat, a) in f.amps.iter().enumerate() {
        let occ = f.occupation(flat);
        amps[basis.index_of(&occ).expect("valid occupation")] += a;
    }
    for (occ, a) in basis.iter().zip(amps.iter_mut()) {
        *a /= arrangements(occ).sqrt();
    }
    let s = SymState::new(f.n, f.d, amps)?;
    let back = sym_to_full(&s)?;
    let fn_ = f.norm();
    let residual = if fn_ == 0.0 { 0.0 } else { back.distance(f) / fn_ };
    if residual > tol {
        return Err(Error::NotSymmetric { residual });
    }
    Ok(s)
}

/// `P_sigma |i_1 ... i_n> = |i_sigma(1) ... i_sigma(n)>`, with `sigma` given
/// 0-based as `sigma[k] = sigma(k)`.
pub fn permute(f: &FullState, sigma: &[usize]) -> Result<FullState> {
    let n = f.n;
    let mut seen = vec![false; n];
    if sigma.len() != n || sigma.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
        return Err(Error::InvalidArgument(format!("{sigma:?} is not a permutation of {n}")));
    }
    let mut out = FullState::zeros(n, f.d)?;
    let mut target = vec![0usize; n];
    for flat in 0..f.amps.len() {
        let idx = f.multi_index(flat);
        for k in 0..n {
            target[k] = idx[sigma[k]];
        }
        let t = target.iter().fold(0, |acc, &i| acc * f.d + i);
        out.amps[t] = f.amps[flat];
    }
    Ok(out)
}

/// Checks invariance under every adjacent transposition.
pub fn is_symmetric(f: &FullState, tol: f64) -> SymmetryCheck {
    let fn_ = f.norm();
    if fn_ == 0.0 {
        return SymmetryCheck {
            symmetric: true,
            residual: 0.0,
        };
    }
    let mut worst = 0.0f64;
    for k in 0..f.n.saturating_sub(1) {
        let mut sigma: Vec<usize> = (0..f.n).collect();
        sigma.swap(k, k + 1);
        let p = permute(f, &sigma).expect("valid transposition");
        worst = worst.max(p.distance(f) / fn_);
    }
    SymmetryCheck {
        symmetric: worst <= tol,
        residual: worst,
    }
}

/// Applies `M` to tensor factor `site` (1-based).
pub fn apply_site(f: &FullState, m: &CMatrix, site: usize) -> Result<FullState> {
    check_local(m, f.d)?;
    if site < 1 || site > f.n {
        return Err(Error::InvalidArgument(format!("site {site} out of range 1..={}", f.n)));
    }
    let d = f.d;
    let stride = d.pow((f.n - site) as u32);
    let block = stride * d;
    let mut out = FullState::zeros(f.n, d)?;
    for base in (0..f.amps.len()).step_by(block) {
        for off in 0..stride {
            for i in 0..d {
                let mut acc = zero();
                for k in 0..d {
                    acc += m[(i, k)] * f.amps[base + k * stride + off];
                }
                out.amps[base + i * stride + off] = acc;
            }
        }
    }
    Ok(out)
}

/// `M_(1) |s>` in `C^d (x) Sym^{n-1}` coordinates.
pub fn apply_site1_sym(s: &SymState, m: &CMatrix) -> Result<FirstSiteState> {
    SiteSplit::new(s.n, s.d)?.apply_first(s, m)
}

/// Whether `g` lies in the embedded symmetric subspace.
pub fn first_site_symmetric(g: &FirstSiteState, tol: f64) -> Result<SymmetryCheck> {
    let residual = SiteSplit::new(g.n, g.d)?.asymmetry(g)?;
    Ok(SymmetryCheck {
        symmetric: residual <= tol,
        residual,
    })
}

/// `V^H g`, the symmetric part of a first-site state as a [`SymState`].
pub fn recombine(g: &FirstSiteState) -> Result<SymState> {
    SiteSplit::new(g.n, g.d)?.recombine(g)
}
