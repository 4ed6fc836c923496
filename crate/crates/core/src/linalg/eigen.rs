//! Eigenvalues by Householder reduction to Hessenberg form followed by
//! single-shift QR iteration with deflation.

use super::{CMatrix, C64, EPS};
use crate::error::{Error, Result};

/// Unitary similarity reduction to upper Hessenberg form.
pub fn hessenberg(m: &CMatrix) -> Result<CMatrix> {
    let n = m.ensure_square()?;
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // H <- (I - 2 v v^H) H
        for j in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)])
                .sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= 2.0 * vi * s;
            }
        }
        // H <- H (I - 2 v v^H)
        for i in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| h[(i, k + 1 + t)] * vi)
                .sum();
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= 2.0 * s * vi.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    Ok(h)
}

/// All eigenvalues of a square matrix, counted with algebraic multiplicity.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let n = m.ensure_square()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut h = hessenberg(m)?;
    let scale = m.norm_fro();
    let mut eig = vec![C64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let max_iter = 30 * n.max(1);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(l, l - 1)].norm() <= EPS * s {
                h[(l, l - 1)] = C64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter {
            return Err(Error::NoConvergence(total));
        }
        let shift = if iter.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, l, hi, shift);
    }
    Ok(eig)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Explicitly shifted QR step on the active window `lo..=hi`.
fn qr_step(h: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rot = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        rot.push((c, s));
    }
    for (t, &(c, s)) in rot.iter().enumerate() {
        let k = lo + t;
        for i in lo..=(k + 1).min(hi) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}
