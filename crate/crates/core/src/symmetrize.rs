//! A single operation `A` with `A^{(x) n} psi = (A_1 (x) ... (x) A_n) psi`
//! for invertible local operations that map a symmetric state to a
//! symmetric state.
//!
//! With `B_1j = A_1^{-1} A_j` and `M = B_11 B_12 ... B_1n`, the result is
//! `A = A_1 S` where `S` is the principal `n`-th root of `M`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse, CMatrix};
use crate::matfun::{nth_root, Branch};
use crate::symspace::{
    apply_site, full_to_sym, sym_to_full, tensor_power_apply, SiteSplit, SymState, FULL_STATE_CAP,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetrizationResult {
    pub a: CMatrix,
    pub s: CMatrix,
    pub m: CMatrix,
    /// `||A^{(x) n} psi - phi|| / ||phi||`.
    pub residual: f64,
    /// Every input was unitary; `a` is then unitary as well.
    pub unitary: bool,
}

fn check_ops(psi: &SymState, ops: &[CMatrix]) -> Result<()> {
    if ops.len() != psi.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} operations for n = {}",
            ops.len(),
            psi.n()
        )));
    }
    for m in ops {
        if m.rows() != psi.d() || m.cols() != psi.d() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operation for d = {}",
                m.rows(),
                m.cols(),
                psi.d()
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    Ok(())
}

/// `(A_1 (x) ... (x) A_n) psi` through the product-basis oracle.
fn image_full(psi: &SymState, ops: &[CMatrix], tol: f64) -> Result<SymState> {
    let mut f = sym_to_full(psi)?;
    for (k, m) in ops.iter().enumerate() {
        f = apply_site(&f, m, k + 1)?;
    }
    full_to_sym(&f, tol).map_err(|e| match e {
        Error::NotSymmetric { residual } => Error::NotSymmetricImage { residual },
        other => other,
    })
}

/// `(A_1 (x) ... (x) A_n) psi = A_1^{(x) n} B_12(2) ... B_1n(n) psi`, with each
/// factor applied at site 1 and checked to keep the state symmetric, which
/// makes the site it acts on irrelevant.
fn image_split(psi: &SymState, ops: &[CMatrix], a1_inv: &CMatrix, tol: f64) -> Result<SymState> {
    let split = SiteSplit::new(psi.n(), psi.d())?;
    let mut chi = psi.clone();
    for aj in &ops[1..] {
        let b = a1_inv * aj;
        let g = split.apply_first(&chi, &b)?;
        let residual = split.asymmetry(&g)?;
        if residual > tol {
            return Err(Error::NotSymmetricImage { residual });
        }
        chi = split.recombine(&g)?;
    }
    tensor_power_apply(&chi, &ops[0])
}

pub fn symmetrize_locals(psi: &SymState, ops: &[CMatrix], tol: f64, cluster_tol: f64) -> Result<SymmetrizationResult> {
    check_ops(psi, ops)?;
    if psi.norm() == 0.0 {
        return Err(Error::ZeroState);
    }
    let (n, d) = (psi.n(), psi.d());
    for m in ops {
        inverse(m, tol)?;
    }
    let a1_inv = inverse(&ops[0], tol)?;

    let small = (d as u128).checked_pow(n as u32).is_some_and(|s| s <= FULL_STATE_CAP);
    let phi = if small {
        image_full(psi, ops, tol)?
    } else {
        image_split(psi, ops, &a1_inv, tol)?
    };

    let mut m = CMatrix::identity(d);
    for aj in &ops[1..] {
        m = &m * &(&a1_inv * aj);
    }
    let s = nth_root(&m, n as u32, &Branch::Principal, tol, cluster_tol)?.root;
    let a = &ops[0] * &s;

    let image = tensor_power_apply(psi, &a)?;
    let phi_norm = phi.norm();
    let residual = if phi_norm == 0.0 {
        f64::INFINITY
    } else {
        image.distance(&phi) / phi_norm
    };
    if residual > tol {
        return Err(Error::ResidualTooLarge { residual, tol });
    }

    let unitary = ops.iter().all(|m| m.unitarity_defect() <= 10.0 * tol);
    if unitary {
        let defect = a.unitarity_defect();
        if defect > 10.0 * tol {
            return Err(Error::NotUnitary { defect });
        }
    }
    Ok(SymmetrizationResult {
        a,
        s,
        m,
        residual,
        unitary,
    })
}

/// For a stabilizer `B` of `psi`, checks that `S = B^{1/r}` (principal) is a
/// stabilizer too and that `S^{(x) n} psi = (S^n)_(1) psi`. For `r = n` the
/// right-hand side is `B_(1) psi`.
pub fn stabilizer_root_check(psi: &SymState, b: &CMatrix, r: u32, tol: f64, cluster_tol: f64) -> Result<bool> {
    let split = SiteSplit::new(psi.n(), psi.d())?;
    let premise = split.asymmetry(&split.apply_first(psi, b)?)?;
    if premise > tol {
        return Err(Error::NotSymmetricImage { residual: premise });
    }
    let s = nth_root(b, r, &Branch::Principal, tol, cluster_tol)?.root;
    let g = split.apply_first(psi, &s)?;
    if split.asymmetry(&g)? > tol {
        return Ok(false);
    }
    let lhs = tensor_power_apply(psi, &s)?;
    let rhs = split.recombine(&split.apply_first(psi, &s.pow(psi.n() as u32))?)?;
    let scale = rhs.norm().max(lhs.norm());
    Ok(scale == 0.0 || lhs.distance(&rhs) <= tol * scale)
}
