//! Action of `A ⊗ ... ⊗ A` on a symmetric state without materializing `d^n`.
//!
//! A symmetric tensor is a homogeneous polynomial: the ket `|i_1 ... i_n>`
//! maps to `x_{i_1} ... x_{i_n}`, and `A^{⊗n}` acts by the linear substitution
//! `x_i -> sum_j A_ji x_j`. Factoring `A = P^T L D U` turns the substitution
//! into elementary transvections `x_b -> x_b + c x_a`, each costing
//! `O(n)` per monomial.

use super::{arrangements, OccBasis, SymState};
use crate::error::Result;
use crate::linalg::{lu, CMatrix, C64};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Polynomial coefficients `p_m = a_m sqrt(N(m))`.
fn to_poly(s: &SymState, basis: &OccBasis) -> Vec<C64> {
    basis
        .iter()
        .zip(s.amplitudes())
        .map(|(occ, a)| a * arrangements(occ).sqrt())
        .collect()
}

fn from_poly(p: Vec<C64>, basis: &OccBasis, n: usize, d: usize) -> Result<SymState> {
    let amps = basis
        .iter()
        .zip(p)
        .map(|(occ, c)| c / arrangements(occ).sqrt())
        .collect();
    SymState::new(n, d, amps)
}

/// `x_b -> x_b + c x_a`.
fn transvect(p: &[C64], basis: &OccBasis, binom: &[Vec<f64>], b: usize, a: usize, c: C64) -> Vec<C64> {
    let mut out = vec![zero(); p.len()];
    let mut target = vec![0u32; basis.d()];
    for (idx, occ) in basis.iter().enumerate() {
        let coef = p[idx];
        if coef == zero() {
            continue;
        }
        let mb = occ[b] as usize;
        let mut ck = C64::new(1.0, 0.0);
        for (k, &weight) in binom[mb].iter().enumerate().take(mb + 1) {
            target.copy_from_slice(occ);
            target[b] -= k as u32;
            target[a] += k as u32;
            let t = basis.index_of(&target).expect("valid occupation");
            out[t] += coef * ck * weight;
            ck *= c;
        }
    }
    out
}

/// `A^{⊗n} |s>` for any square `A` of the state's local dimension.
pub fn tensor_power_apply(s: &SymState, a: &CMatrix) -> Result<SymState> {
    let (n, d) = (s.n(), s.d());
    if a.rows() != d || a.cols() != d {
        return Err(crate::Error::DimensionMismatch(format!(
            "{}x{} operator on a d={d} state",
            a.rows(),
            a.cols()
        )));
    }
    let f = lu(a)?;
    let u = &f.factors;
    if (0..d).any(|i| u[(i, i)].norm() == 0.0) {
        return tensor_power_apply_expand(s, a);
    }
    let basis = s.basis();
    let binom: Vec<Vec<f64>> = (0..=n)
        .map(|m| (0..=m).map(|k| super::binomial(m as u64, k as u64) as f64).collect())
        .collect();
    let mut p = to_poly(s, &basis);

    // U = D U1 with U1 unit upper triangular; U1 = (L'_{d-2})^T ... (L'_0)^T,
    // applied right-most first.
    for k in 0..d {
        for j in k + 1..d {
            let c = u[(k, j)] / u[(k, k)];
            if c != zero() {
                p = transvect(&p, &basis, &binom, j, k, c);
            }
        }
    }
    // D
    for (idx, occ) in basis.iter().enumerate() {
        let mut scale = C64::new(1.0, 0.0);
        for (i, &m) in occ.iter().enumerate() {
            scale *= u[(i, i)].powu(m);
        }
        p[idx] *= scale;
    }
    // L = L_0 L_1 ... L_{d-2}, applied right-most first.
    for k in (0..d).rev() {
        for j in k + 1..d {
            let c = u[(j, k)];
            if c != zero() {
                p = transvect(&p, &basis, &binom, k, j, c);
            }
        }
    }
    // P^T: x_i -> x_perm[i].
    let mut out = vec![zero(); p.len()];
    let mut target = vec![0u32; d];
    for (idx, occ) in basis.iter().enumerate() {
        target.iter_mut().for_each(|t| *t = 0);
        for (i, &m) in occ.iter().enumerate() {
            target[f.perm[i]] += m;
        }
        out[basis.index_of(&target).expect("valid occupation")] += p[idx];
    }
    from_poly(out, &basis, n, d)
}

/// Reference implementation by direct expansion of
/// `prod_i (sum_j A_ji x_j)^{m_i}`; cost grows like `dim(Sym^n)^2`.
pub fn tensor_power_apply_expand(s: &SymState, a: &CMatrix) -> Result<SymState> {
    let (n, d) = (s.n(), s.d());
    if a.rows() != d || a.cols() != d {
        return Err(crate::Error::DimensionMismatch(format!(
            "{}x{} operator on a d={d} state",
            a.rows(),
            a.cols()
        )));
    }
    let bases: Vec<OccBasis> = (0..=n).map(|t| OccBasis::new(t, d)).collect::<Result<_>>()?;
    let basis = &bases[n];
    let p = to_poly(s, basis);
    let mut out = vec![zero(); basis.len()];
    let mut target = vec![0u32; d];
    for (idx, occ) in basis.iter().enumerate() {
        if p[idx] == zero() {
            continue;
        }
        let mut q = vec![p[idx]];
        let mut degree = 0usize;
        for (i, &m) in occ.iter().enumerate() {
            for _ in 0..m {
                let mut next = vec![zero(); bases[degree + 1].len()];
                for (qi, qocc) in bases[degree].iter().enumerate() {
                    if q[qi] == zero() {
                        continue;
                    }
                    for j in 0..d {
                        let c = a[(j, i)];
                        if c == zero() {
                            continue;
                        }
                        target.copy_from_slice(qocc);
                        target[j] += 1;
                        next[bases[degree + 1].index_of(&target).expect("valid")] += q[qi] * c;
                    }
                }
                q = next;
                degree += 1;
            }
        }
        for (o, v) in out.iter_mut().zip(q) {
            *o += v;
        }
    }
    from_poly(out, basis, n, d)
}
