//! Seeded randomness. Every draw comes from a ChaCha stream selected by a
//! 64-bit seed and a counter, so results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{singular_values, CMatrix, C64};

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian: real and imaginary parts iid N(0, 1/2).
pub fn complex_gaussian<R: rand::Rng>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * s, im * s)
}

pub fn gaussian_matrix<R: rand::Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn gaussian_vector<R: rand::Rng>(rng: &mut R, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

/// Ratio of extreme singular values (infinite when singular).
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Random unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: rand::Rng>(rng: &mut R, n: usize) -> CMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
            for _ in 0..2 {
                for q in &cols {
                    let c: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
            }
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nv < 1e-8 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|z| *z /= nv);
            cols.push(v);
        }
        if ok {
            return CMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Random invertible matrix with condition number at most `max_cond`, built
/// as `U diag(s) W` with singular values log-uniform in `[1, max_cond]`.
pub fn random_conditioned<R: rand::Rng>(rng: &mut R, n: usize, max_cond: f64) -> CMatrix {
    let u = random_unitary(rng, n);
    let w = random_unitary(rng, n);
    let ln = max_cond.max(1.0).ln();
    let s: Vec<C64> = (0..n)
        .map(|k| {
            let t = if k == 0 {
                0.0
            } else if k == 1 && n > 1 {
                ln
            } else {
                rng.gen::<f64>() * ln
            };
            C64::new(t.exp(), 0.0)
        })
        .collect();
    &(&u * &CMatrix::from_diag(&s)) * &w
}
