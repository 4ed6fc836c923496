//! Single-particle stabilizers of symmetric states.
//!
//! `B` stabilizes `psi` when `B_(1) psi` is again symmetric. The condition is
//! linear in the entries of `B`, so the stabilizers form a subspace of the
//! `d x d` matrices. It is computed in `C^d (x) Sym^{n-1}` coordinates.

mod classify;

pub use classify::{
    classify, invariants_distinguish, lu_invariant, uniqueness_check, ClassReport, SignatureCount, Verdict,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{jordan_signature, JordanSignature};
use crate::linalg::{inverse, nullspace_abs, CMatrix, C64};
use crate::random::{complex_gaussian, substream};
use crate::symspace::{tensor_power_apply, FirstSiteState, SiteSplit, SymState};

/// Orthonormal basis (entrywise inner product) of the stabilizer space.
#[derive(Clone, Debug)]
pub struct StabilizerSpace {
    pub n: usize,
    pub d: usize,
    pub basis: Vec<CMatrix>,
    pub tol: f64,
}

impl StabilizerSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `sum_k c_k basis_k`.
    pub fn combine(&self, coeffs: &[C64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.d, self.d);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            m = &m + &b.scale(c);
        }
        m
    }

    /// Element with iid standard complex Gaussian coefficients drawn from
    /// substream `stream` of `seed`.
    pub fn sample(&self, seed: u64, stream: u64) -> CMatrix {
        let mut rng = substream(seed, stream);
        let coeffs: Vec<C64> = (0..self.dimension()).map(|_| complex_gaussian(&mut rng)).collect();
        self.combine(&coeffs)
    }

    /// Whether every pair of basis elements commutes within `tol`.
    pub fn is_commutative(&self, tol: f64) -> bool {
        self.basis.iter().enumerate().all(|(i, a)| {
            self.basis[i + 1..]
                .iter()
                .all(|b| a.commutator(b).norm_fro() <= tol)
        })
    }
}

fn zero_state_check(psi: &SymState) -> Result<SymState> {
    if !psi.amplitudes().iter().all(|z| z.is_finite()) {
        return Err(Error::NonFinite);
    }
    if psi.norm() == 0.0 {
        return Err(Error::ZeroState);
    }
    psi.normalized()
}

/// Columns of the linear map `vec(B) -> (I - V V^H) B_(1) V psi`, one per
/// matrix unit `E_ab` at column `a d + b`.
fn system_matrix(split: &SiteSplit, psi: &SymState) -> Result<CMatrix> {
    let d = psi.d();
    let g = split.split(psi)?;
    let cols = g.cols();
    let rows = d * cols;
    let mut m = CMatrix::zeros(rows, d * d);
    for a in 0..d {
        for b in 0..d {
            let mut grid = vec![C64::new(0.0, 0.0); rows];
            grid[a * cols..(a + 1) * cols].copy_from_slice(g.row(b));
            let image = FirstSiteState::new(psi.n(), d, grid)?;
            let proj = split.split(&split.recombine(&image)?)?;
            for (r, (x, p)) in image.grid().iter().zip(proj.grid()).enumerate() {
                m[(r, a * d + b)] = x - p;
            }
        }
    }
    Ok(m)
}

/// Stabilizer space of `psi`. Singular values of the normalized system at or
/// below `tol` count as zero.
pub fn stabilizer_space(psi: &SymState, tol: f64) -> Result<StabilizerSpace> {
    if psi.n() < 2 {
        return Err(Error::InvalidArgument("stabilizer space needs n >= 2".into()));
    }
    let psi = zero_state_check(psi)?;
    let d = psi.d();
    let split = SiteSplit::new(psi.n(), d)?;
    let system = system_matrix(&split, &psi)?;
    let basis = nullspace_abs(&system, tol)
        .into_iter()
        .map(|v| CMatrix::new(d, d, v.into_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizerSpace {
        n: psi.n(),
        d,
        basis,
        tol,
    })
}

/// Orthonormal basis of the states `psi` with `B_(1) psi` symmetric.
pub fn stabilized_states(n: usize, d: usize, b: &CMatrix, tol: f64) -> Result<Vec<SymState>> {
    if n < 2 {
        return Err(Error::InvalidArgument("stabilized states need n >= 2".into()));
    }
    let split = SiteSplit::new(n, d)?;
    let dim = split.basis().len();
    let rows = d * split.rest_basis().len();
    let mut m = CMatrix::zeros(rows, dim);
    for k in 0..dim {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        let g = split.apply_first(&SymState::new(n, d, amps)?, b)?;
        let proj = split.split(&split.recombine(&g)?)?;
        for (r, (x, p)) in g.grid().iter().zip(proj.grid()).enumerate() {
            m[(r, k)] = x - p;
        }
    }
    let scale = b.norm2().max(f64::MIN_POSITIVE);
    nullspace_abs(&m, tol * scale)
        .into_iter()
        .map(|v| SymState::new(n, d, v.into_vec()))
        .collect()
}

/// Relative asymmetry of `B_(1) psi`.
pub fn stabilizer_residual(psi: &SymState, b: &CMatrix) -> Result<f64> {
    let split = SiteSplit::new(psi.n(), psi.d())?;
    let g = split.apply_first(psi, b)?;
    split.asymmetry(&g)
}

/// Whether `B_(1) psi` is symmetric within `tol`.
pub fn stabilizes(psi: &SymState, b: &CMatrix, tol: f64) -> Result<bool> {
    Ok(stabilizer_residual(psi, b)? <= tol)
}

/// Signatures of random elements of the space.
#[derive(Clone, Debug)]
pub struct SignatureSample {
    pub generic: JordanSignature,
    /// Distinct signatures with their counts, most generic first.
    pub counts: Vec<(JordanSignature, usize)>,
    /// The first sampled element showing the generic signature.
    pub generic_element: CMatrix,
    /// Every sampled element with its signature, in draw order.
    pub draws: Vec<(CMatrix, JordanSignature)>,
}

/// Draws `samples` Gaussian combinations of the basis and takes the modal
/// Jordan signature. Ties go to more eigenvalue groups, then fewer blocks.
pub fn generic_signature(
    space: &StabilizerSpace,
    samples: usize,
    seed: u64,
    tol: f64,
    cluster_tol: f64,
) -> Result<SignatureSample> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let mut draws = Vec::with_capacity(samples);
    let mut tally: BTreeMap<JordanSignature, usize> = BTreeMap::new();
    for s in 0..samples {
        let b = space.sample(seed, s as u64);
        let sig = jordan_signature(&b, tol, cluster_tol)?.signature;
        *tally.entry(sig.clone()).or_default() += 1;
        draws.push((b, sig));
    }
    let mut counts: Vec<(JordanSignature, usize)> = tally.into_iter().collect();
    counts.sort_by(|(sa, ca), (sb, cb)| {
        cb.cmp(ca)
            .then_with(|| sb.genericity_key().cmp(&sa.genericity_key()))
            .then_with(|| sb.cmp(sa))
    });
    let generic = counts[0].0.clone();
    let generic_element = draws
        .iter()
        .find(|(_, s)| *s == generic)
        .map(|(b, _)| b.clone())
        .expect("generic signature was sampled");
    counts.sort_by(|(sa, _), (sb, _)| sb.genericity_key().cmp(&sa.genericity_key()).then_with(|| sb.cmp(sa)));
    Ok(SignatureSample {
        generic,
        counts,
        generic_element,
        draws,
    })
}

/// Equivalence notion checked by [`verify_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessMode {
    Slocc,
    Lu,
}

/// Outcome of [`verify_witness`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessCheck {
    pub holds: bool,
    /// `c` with `A^{(x) n} psi = c phi`.
    pub constant: C64,
    /// `||A^{(x) n} psi - c phi|| / ||A^{(x) n} psi||`.
    pub residual: f64,
}

/// Checks `A^{(x) n} psi ∝ phi`.
pub fn verify_witness(psi: &SymState, phi: &SymState, a: &CMatrix, mode: WitnessMode, tol: f64) -> Result<WitnessCheck> {
    if (psi.n(), psi.d()) != (phi.n(), phi.d()) {
        return Err(Error::DimensionMismatch(format!(
            "states with (n, d) = ({}, {}) and ({}, {})",
            psi.n(),
            psi.d(),
            phi.n(),
            phi.d()
        )));
    }
    inverse(a, tol)?;
    if mode == WitnessMode::Lu {
        let defect = a.unitarity_defect();
        if defect > tol {
            return Err(Error::NotUnitary { defect });
        }
    }
    let phi_norm2 = phi.norm().powi(2);
    if phi_norm2 == 0.0 || psi.norm() == 0.0 {
        return Err(Error::ZeroState);
    }
    let image = tensor_power_apply(psi, a)?;
    let constant = phi.inner(&image) / phi_norm2;
    let image_norm = image.norm();
    let residual = if image_norm == 0.0 {
        f64::INFINITY
    } else {
        image.distance(&phi.scaled(constant)) / image_norm
    };
    Ok(WitnessCheck {
        holds: residual <= tol,
        constant,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::states::{excitation, ghz};

    fn one() -> C64 {
        c64(1.0, 0.0)
    }

    fn in_span(space: &StabilizerSpace, m: &CMatrix) -> bool {
        let mut r = m.clone();
        for b in &space.basis {
            r = &r - &b.scale(b.inner(&r));
        }
        r.norm_fro() <= 1e-10 * m.norm_fro().max(1.0)
    }

    #[test]
    fn ghz_qubits_have_diagonal_stabilizers() {
        let psi = ghz(3, 2, Some(&[one(), one()])).unwrap();
        let space = stabilizer_space(&psi, 1e-9).unwrap();
        assert_eq!(space.dimension(), 2);
        assert!(in_span(&space, &CMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]])));
        assert!(in_span(&space, &CMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]])));
    }

    #[test]
    fn w_state_stabilizers() {
        let w = excitation(3, 2, 1).unwrap();
        let space = stabilizer_space(&w, 1e-9).unwrap();
        assert_eq!(space.dimension(), 2);
        assert!(in_span(&space, &CMatrix::identity(2)));
        assert!(in_span(&space, &CMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]])));
    }

    #[test]
    fn product_state_stabilizers() {
        let psi = ghz(3, 2, Some(&[one(), c64(0.0, 0.0)])).unwrap();
        let space = stabilizer_space(&psi, 1e-9).unwrap();
        assert_eq!(space.dimension(), 3);
        for b in &space.basis {
            assert!(b[(1, 0)].norm() < 1e-12);
        }
    }

    #[test]
    fn states_stabilized_by_a_jordan_block() {
        // I + K on three qutrits: span{E_0, E_1, E_2}
        let b = CMatrix::from_real(&[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 0.0, 1.0]]);
        let states = stabilized_states(3, 3, &b, 1e-9).unwrap();
        assert_eq!(states.len(), 3);
        for j in 0..3 {
            let e = excitation(3, 3, j).unwrap().normalized().unwrap();
            let captured: f64 = states.iter().map(|s| s.inner(&e).norm_sqr()).sum();
            assert!((captured - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_state_rejected() {
        let z = SymState::zeros(3, 2).unwrap();
        assert_eq!(stabilizer_space(&z, 1e-9).unwrap_err(), Error::ZeroState);
    }

    #[test]
    fn generic_signatures() {
        let ghz3 = ghz(3, 2, Some(&[one(), one()])).unwrap();
        let space = stabilizer_space(&ghz3, 1e-9).unwrap();
        let s = generic_signature(&space, 16, 0, 1e-9, 1e-7).unwrap();
        assert_eq!(s.generic.to_string(), "{ { 1 }, { 1 } }");

        let w = excitation(3, 2, 1).unwrap();
        let space = stabilizer_space(&w, 1e-9).unwrap();
        let s = generic_signature(&space, 16, 0, 1e-9, 1e-7).unwrap();
        assert_eq!(s.generic.to_string(), "{ { 2 } }");
        assert!(s.counts.iter().any(|(sig, _)| *sig == s.generic));
    }

    #[test]
    fn witness_examples() {
        let x = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let psi = ghz(2, 2, Some(&[one(), c64(0.0, 0.0)])).unwrap();
        let phi = ghz(2, 2, Some(&[c64(0.0, 0.0), one()])).unwrap();
        for mode in [WitnessMode::Slocc, WitnessMode::Lu] {
            let w = verify_witness(&psi, &phi, &x, mode, 1e-9).unwrap();
            assert!(w.holds);
            assert!((w.constant - one()).norm() < 1e-12);
        }

        let g = ghz(3, 2, Some(&[one(), one()])).unwrap();
        let target = ghz(3, 2, Some(&[one(), c64(8.0, 0.0)])).unwrap();
        let a = CMatrix::from_real(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let w = verify_witness(&g, &target, &a, WitnessMode::Slocc, 1e-9).unwrap();
        assert!(w.holds);
        assert!((w.constant - one()).norm() < 1e-12);
        assert!(matches!(
            verify_witness(&g, &target, &a, WitnessMode::Lu, 1e-9),
            Err(Error::NotUnitary { .. })
        ));

        let w = verify_witness(&g, &g, &CMatrix::identity(2), WitnessMode::Lu, 1e-9).unwrap();
        assert!(w.holds);

        let singular = CMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            verify_witness(&g, &g, &singular, WitnessMode::Slocc, 1e-9),
            Err(Error::SingularMatrix { .. })
        ));
    }
}
