//! Occupation-number basis of the symmetric subspace.

use crate::error::{Error, Result};

const MAX_BASIS: u128 = 1 << 31;

/// Binomial coefficient as `u128`, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// Dimension of `Sym^n(C^d)`.
pub fn sym_dim(n: usize, d: usize) -> u128 {
    if d == 0 {
        return 0;
    }
    binomial((n + d - 1) as u64, (d - 1) as u64)
}

/// Number of product-basis arrangements of an occupation vector,
/// `n! / (m_0! ... m_{d-1}!)`, as a float.
pub fn arrangements(occ: &[u32]) -> f64 {
    let mut total = 0u64;
    let mut acc = 1.0f64;
    for &m in occ {
        total += m as u64;
        acc *= binomial(total, m as u64) as f64;
    }
    acc
}

/// Occupation vectors `(m_0, ..., m_{d-1})` with `sum m_i = n`, in
/// lexicographically decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccBasis {
    n: usize,
    d: usize,
    flat: Vec<u32>,
    // binom[a][b] = C(a, b) for the ranking formula.
    binom: Vec<Vec<u64>>,
}

impl OccBasis {
    /// Basis for `n >= 0` particles; `n = 0` gives the single empty occupation.
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("local dimension must be >= 1".into()));
        }
        let count = sym_dim(n, d);
        if count > MAX_BASIS {
            return Err(Error::Overflow);
        }
        let count = count as usize;
        let mut flat = Vec::with_capacity(count * d);
        let mut cur = vec![0u32; d];
        fill(&mut flat, &mut cur, 0, n as u32);
        debug_assert_eq!(flat.len(), count * d);

        let top = n + d;
        let mut binom = vec![vec![0u64; d + 1]; top + 1];
        for (a, row) in binom.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = binomial(a as u64, b as u64).min(u64::MAX as u128) as u64;
            }
        }
        Ok(Self { n, d, flat, binom })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn occ(&self, idx: usize) -> &[u32] {
        &self.flat[idx * self.d..(idx + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.flat.chunks_exact(self.d)
    }

    /// Position of `occ` in the canonical order, or `None` if it is not a
    /// valid occupation vector for this basis.
    pub fn index_of(&self, occ: &[u32]) -> Option<usize> {
        if occ.len() != self.d || occ.iter().map(|&m| m as usize).sum::<usize>() != self.n {
            return None;
        }
        let mut remaining = self.n;
        let mut idx = 0usize;
        for (i, &m) in occ.iter().enumerate().take(self.d - 1) {
            let m = m as usize;
            let parts = self.d - i - 1;
            if m < remaining {
                // Vectors with a larger entry at position i come first.
                idx += self.binom[remaining - m - 1 + parts][parts] as usize;
            }
            remaining -= m;
        }
        Some(idx)
    }
}

fn fill(out: &mut Vec<u32>, cur: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.extend_from_slice(cur);
        return;
    }
    for m in (0..=remaining).rev() {
        cur[pos] = m;
        fill(out, cur, pos + 1, remaining - m);
    }
}

/// Canonical occupation basis for `n >= 1` particles of local dimension `d >= 2`.
pub fn occ_basis(n: usize, d: usize) -> Result<OccBasis> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidArgument("d must be >= 2".into()));
    }
    OccBasis::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_examples() {
        let b = occ_basis(2, 2).unwrap();
        let v: Vec<Vec<u32>> = b.iter().map(|o| o.to_vec()).collect();
        assert_eq!(v, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let b = occ_basis(1, 3).unwrap();
        let v: Vec<Vec<u32>> = b.iter().map(|o| o.to_vec()).collect();
        assert_eq!(v, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(occ_basis(3, 3).unwrap().len(), 10);
    }

    #[test]
    fn ranking_matches_enumeration() {
        for (n, d) in [(0, 3), (1, 2), (4, 3), (5, 4), (3, 6)] {
            let b = OccBasis::new(n, d).unwrap();
            for (k, occ) in b.iter().enumerate() {
                assert_eq!(b.index_of(occ), Some(k), "n={n} d={d} occ={occ:?}");
            }
        }
        let b = OccBasis::new(3, 3).unwrap();
        assert_eq!(b.index_of(&[1, 1, 0]), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(occ_basis(0, 2).is_err());
        assert!(occ_basis(2, 1).is_err());
        assert_eq!(OccBasis::new(200, 64), Err(Error::Overflow));
    }

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(&[1, 1]), 2.0);
        assert_eq!(arrangements(&[2, 1]), 3.0);
        assert_eq!(arrangements(&[1, 1, 1]), 6.0);
        assert_eq!(arrangements(&[3, 0]), 1.0);
    }
}
