use super::{dot, norm, CMatrix, CVector, C64, EPS};
use crate::error::{Error, Result};

/// LU factorization with partial pivoting, `P M = L U`, packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    pub factors: CMatrix,
    /// `perm[i]` is the source row of row `i` of `P M`.
    pub perm: Vec<usize>,
    pub sign: f64,
}

pub fn lu(m: &CMatrix) -> Result<Lu> {
    let n = m.ensure_square()?;
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap_or(k);
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = a[(k, k)];
        if pivot.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let l = a[(i, k)] / pivot;
            a[(i, k)] = l;
            for j in k + 1..n {
                let t = a[(k, j)];
                a[(i, j)] -= l * t;
            }
        }
    }
    Ok(Lu {
        factors: a,
        perm,
        sign,
    })
}

impl Lu {
    pub fn det(&self) -> C64 {
        let n = self.factors.rows();
        (0..n).map(|i| self.factors[(i, i)]).product::<C64>() * self.sign
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.factors.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.factors[(i, j)] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.factors[(i, j)] * x[j];
                x[i] -= t;
            }
            x[i] /= self.factors[(i, i)];
        }
        x
    }
}

pub fn det(m: &CMatrix) -> Result<C64> {
    Ok(lu(m)?.det())
}

/// Inverse of a square matrix whose smallest singular value exceeds
/// `tol * ||M||_2`.
pub fn inverse(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let n = m.ensure_square()?;
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    let threshold = tol * smax;
    if n > 0 && (smin <= threshold || smax == 0.0) {
        return Err(Error::SingularMatrix {
            sigma_min: smin,
            threshold,
        });
    }
    let f = lu(m)?;
    let mut inv = CMatrix::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        e[j] = C64::new(1.0, 0.0);
        let col = f.solve(&e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Thin singular value decomposition `M V = U diag(sigma)` computed by
/// one-sided Jacobi rotations. Singular values are sorted descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns (cols x cols, unitary).
    pub v: CMatrix,
    /// Left singular vectors scaled by sigma (rows x cols).
    pub u_sigma: CMatrix,
}

pub fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    // Column-major work arrays.
    let mut a: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    // Rotations among columns at roundoff level cannot move any singular
    // value by more than roundoff; skipping them keeps large nullspaces cheap.
    let floor = {
        let fro2: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
        EPS * EPS * fro2
    };
    for _sweep in 0..80 {
        let mut rotated = false;
        // Squared column norms, refreshed every sweep and updated per rotation.
        let mut sq: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum()).collect();
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta) = (sq[p], sq[q]);
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g <= floor || g <= EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let conj_phase = phase.conj();
                rotate(&mut a, p, q, c, s, conj_phase);
                rotate(&mut v, p, q, c, s, conj_phase);
                sq[p] = (alpha - t * g).max(0.0);
                sq[q] = (beta + t * g).max(0.0);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    Svd {
        sigma: order.iter().map(|&j| norms[j]).collect(),
        v: CMatrix::from_fn(cols, cols, |i, k| v[order[k]][i]),
        u_sigma: CMatrix::from_fn(rows, cols, |i, k| a[order[k]][i]),
    }
}

fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, conj_phase: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * conj_phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// `R` of a Householder QR factorization, for `rows > cols`.
fn triangular_factor(m: &CMatrix) -> CMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();
    for k in 0..cols.min(rows) {
        let x = &a[k][k..];
        let alpha = norm(x);
        if alpha == 0.0 {
            continue;
        }
        let phase = if a[k][k].norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            a[k][k] / a[k][k].norm()
        };
        let mut v: Vec<C64> = x.to_vec();
        v[0] += phase * alpha;
        let vn = norm(&v);
        v.iter_mut().for_each(|z| *z /= vn);
        for col in a.iter_mut().skip(k) {
            let c = dot(&v, &col[k..]);
            for (y, vi) in col[k..].iter_mut().zip(&v) {
                *y -= vi * c * 2.0;
            }
        }
    }
    CMatrix::from_fn(cols, cols, |i, j| if i <= j { a[j][i] } else { C64::new(0.0, 0.0) })
}

/// Singular values and right singular vectors, reducing tall matrices to
/// their triangular factor first.
fn right_svd(m: &CMatrix) -> Svd {
    if m.rows() > m.cols() {
        svd(&triangular_factor(m))
    } else {
        svd(m)
    }
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.rows() >= m.cols() {
        right_svd(m).sigma
    } else {
        svd(&m.adjoint()).sigma
    }
}

/// Orthonormal basis of `{v : ||M v|| <= threshold * ||v||}`.
pub fn nullspace_abs(m: &CMatrix, threshold: f64) -> Vec<CVector> {
    let d = right_svd(m);
    (0..m.cols())
        .filter(|&k| d.sigma[k] <= threshold)
        .map(|k| d.v.column(k))
        .collect()
}

/// Orthonormal basis of `{v : ||M v|| <= tol * ||M||_2 * ||v||}`.
pub fn nullspace(m: &CMatrix, tol: f64) -> Vec<CVector> {
    let d = right_svd(m);
    let threshold = tol * d.sigma.first().copied().unwrap_or(0.0);
    (0..m.cols())
        .filter(|&k| d.sigma[k] <= threshold)
        .map(|k| d.v.column(k))
        .collect()
}

/// `cols - dim nullspace(M, tol)`.
pub fn rank(m: &CMatrix, tol: f64) -> usize {
    m.cols() - nullspace(m, tol).len()
}

/// Sine of the largest principal angle between the spans of two orthonormal
/// column sets of equal size. Returns 1 when the dimensions differ.
pub fn principal_angle_sin(a: &[CVector], b: &[CVector]) -> f64 {
    if a.len() != b.len() {
        return 1.0;
    }
    if a.is_empty() {
        return 0.0;
    }
    let n = a[0].dim();
    // Residual of b after projecting onto span(a).
    let resid: Vec<CVector> = b
        .iter()
        .map(|w| {
            let mut r = w.as_slice().to_vec();
            for q in a {
                let c = q.dot(w);
                for (ri, qi) in r.iter_mut().zip(q.as_slice()) {
                    *ri -= c * qi;
                }
            }
            CVector::from(r)
        })
        .collect();
    CMatrix::from_columns(n, &resid).norm2().min(1.0)
}
