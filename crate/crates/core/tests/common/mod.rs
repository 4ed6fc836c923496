//! Independent reference computations shared by the integration tests. They
//! work on full product-basis tensors and brute-force enumerations and use
//! only the crate's dense matrix type and SVD.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use symqudit::linalg::{svd, CMatrix, CVector, C64};
use symqudit::random::{complex_gaussian, substream};
use symqudit::symspace::{sym_dim, SymState};

pub fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Normalized state with iid complex Gaussian amplitudes.
pub fn random_state(n: usize, d: usize, seed: u64, stream: u64) -> SymState {
    let mut rng = substream(seed, stream);
    let dim = sym_dim(n, d) as usize;
    let amps = (0..dim).map(|_| complex_gaussian(&mut rng)).collect();
    SymState::new(n, d, amps).unwrap().normalized().unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

fn multinomial(occ: &[u32]) -> f64 {
    let mut out = 1.0;
    let mut total = 0u32;
    for &m in occ {
        for k in 1..=m {
            total += 1;
            out *= total as f64 / k as f64;
        }
    }
    out
}

/// Occupation vector of a flat product index, site 1 most significant.
pub fn occupation(flat: usize, n: usize, d: usize) -> Vec<u32> {
    let mut occ = vec![0u32; d];
    let mut r = flat;
    for _ in 0..n {
        occ[r % d] += 1;
        r /= d;
    }
    occ
}

/// Product-basis tensor of a symmetric state.
pub fn to_full(psi: &SymState) -> Vec<C64> {
    let (n, d) = (psi.n(), psi.d());
    let size = d.pow(n as u32);
    (0..size)
        .map(|i| {
            let occ = occupation(i, n, d);
            psi.amplitude(&occ) / multinomial(&occ).sqrt()
        })
        .collect()
}

/// Class label per flat index; two indices share a class when they are
/// permutations of each other.
pub struct Classes {
    pub label: Vec<usize>,
    pub size: Vec<usize>,
}

pub fn classes(n: usize, d: usize) -> Classes {
    let size = d.pow(n as u32);
    let mut ids: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut label = Vec::with_capacity(size);
    let mut counts = Vec::new();
    for i in 0..size {
        let next = ids.len();
        let id = *ids.entry(occupation(i, n, d)).or_insert(next);
        if id == counts.len() {
            counts.push(0);
        }
        counts[id] += 1;
        label.push(id);
    }
    Classes { label, size: counts }
}

/// Orthogonal projection onto the symmetric subspace: each amplitude is
/// replaced by the mean over its permutation class.
pub fn symmetric_part(v: &[C64], cl: &Classes) -> Vec<C64> {
    let mut sums = vec![zero(); cl.size.len()];
    for (x, &c) in v.iter().zip(&cl.label) {
        sums[c] += x;
    }
    cl.label.iter().map(|&c| sums[c] / cl.size[c] as f64).collect()
}

pub fn asymmetry(v: &[C64], cl: &Classes) -> f64 {
    let p = symmetric_part(v, cl);
    let diff: f64 = v.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum();
    let total: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    if total == 0.0 {
        0.0
    } else {
        (diff / total).sqrt()
    }
}

/// `M` applied to one site (1-based) of a product-basis tensor.
pub fn apply_at(v: &[C64], n: usize, d: usize, m: &CMatrix, site: usize) -> Vec<C64> {
    let stride = d.pow((n - site) as u32);
    let mut out = vec![zero(); v.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        let digit = (i / stride) % d;
        let base = i - digit * stride;
        *slot = (0..d).map(|b| m[(digit, b)] * v[base + b * stride]).sum();
    }
    out
}

/// `M` applied to every site.
pub fn apply_all(v: &[C64], n: usize, d: usize, m: &CMatrix) -> Vec<C64> {
    (1..=n).fold(v.to_vec(), |acc, site| apply_at(&acc, n, d, m, site))
}

pub fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Stabilizer space by brute force on the full tensor: nullspace of
/// `vec(B) -> (I - P_sym) B_(1) psi`, found from the Gram matrix of that map.
/// Vectors are row-major `vec(B)`. Eigenvalues of the Gram matrix at or below
/// `threshold^2` count as zero.
pub fn brute_stabilizer_basis(psi: &SymState, threshold: f64) -> Vec<CVector> {
    let (n, d) = (psi.n(), psi.d());
    let full = to_full(&psi.normalized().unwrap());
    let cl = classes(n, d);
    let rest = full.len() / d;
    let k = d * d;
    // Class sums of E_ab(1) psi, which only depend on (a, b).
    let mut sums = vec![vec![zero(); cl.size.len()]; k];
    for a in 0..d {
        for b in 0..d {
            let s = &mut sums[a * d + b];
            for r in 0..rest {
                s[cl.label[a * rest + r]] += full[b * rest + r];
            }
        }
    }
    // Overlaps of the rows of psi viewed as a d x rest matrix.
    let mut overlap = vec![vec![zero(); d]; d];
    for b in 0..d {
        for c in 0..d {
            overlap[b][c] = (0..rest).map(|r| full[b * rest + r].conj() * full[c * rest + r]).sum();
        }
    }
    let gram = CMatrix::from_fn(k, k, |p, q| {
        let (a, b) = (p / d, p % d);
        let (a2, b2) = (q / d, q % d);
        let direct = if a == a2 { overlap[b][b2] } else { zero() };
        let projected: C64 = sums[p]
            .iter()
            .zip(&sums[q])
            .zip(&cl.size)
            .map(|((x, y), &m)| x.conj() * y / m as f64)
            .sum();
        direct - projected
    });
    let dec = svd(&gram);
    (0..k)
        .filter(|&j| dec.sigma[j] <= threshold * threshold)
        .map(|j| dec.v.column(j))
        .collect()
}

/// All partitions of `d`, from sorted compositions.
pub fn partitions_brute(d: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for mask in 0..(1u64 << (d - 1)) {
        let mut parts = Vec::new();
        let mut run = 1;
        for bit in 0..d - 1 {
            if mask >> bit & 1 == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        out.insert(parts);
    }
    out
}

/// All multisets of partitions with total `d`, built from ordered sequences
/// of compositions and canonicalized by sorting.
pub fn double_partitions_brute(d: usize) -> BTreeSet<Vec<Vec<usize>>> {
    fn compositions(total: usize) -> Vec<Vec<usize>> {
        if total == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=total {
            for mut tail in compositions(total - first) {
                tail.insert(0, first);
                out.push(tail);
            }
        }
        out
    }
    let mut out = BTreeSet::new();
    // Split d into an ordered sequence of group totals, then each group total
    // into an ordered composition.
    for totals in compositions(d) {
        let mut partial: Vec<Vec<Vec<usize>>> = vec![vec![]];
        for &t in &totals {
            let mut next = Vec::new();
            for prefix in &partial {
                for c in compositions(t) {
                    let mut p = prefix.clone();
                    let mut c = c;
                    c.sort_unstable_by(|a, b| b.cmp(a));
                    p.push(c);
                    next.push(p);
                }
            }
            partial = next;
        }
        for mut groups in partial {
            groups.sort_by(|a, b| b.cmp(a));
            out.insert(groups);
        }
    }
    out
}

/// Property-test settings without on-disk failure persistence.
pub fn prop_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}
