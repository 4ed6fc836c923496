//! Eigenvalue clustering and generalized-kernel chains.
//!
//! Defective eigenvalues come back from the QR iteration scattered on a circle
//! of radius about `eps^(1/k)` around the true value. Clusters are first formed
//! by single linkage at `cluster_tol * ||X||`; nearby clusters are then merged
//! when the kernel chain at their combined mean confirms a generalized
//! eigenspace of the combined size.

use std::collections::HashSet;

use super::{eigenvalues, nullspace_abs, CMatrix, CVector, C64};
use crate::error::Result;

/// Radius (relative to `||X||_2`) within which separated clusters are probed
/// for merging.
const MERGE_PROBE_RADIUS: f64 = 0.05;

/// Generalized eigenspace structure for one eigenvalue cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterStructure {
    /// Mean of the member eigenvalues.
    pub value: C64,
    pub multiplicity: usize,
    /// `kernel_dims[k] = dim ker (X - value)^k` for `k = 0, 1, ...` until stable.
    pub kernel_dims: Vec<usize>,
    /// Jordan block sizes, descending.
    pub block_sizes: Vec<usize>,
    /// Set when the kernel chain had to be clamped or padded to stay
    /// consistent with the multiplicity.
    pub repaired: bool,
}

impl ClusterStructure {
    pub fn max_block(&self) -> usize {
        self.block_sizes.first().copied().unwrap_or(0)
    }

    /// `rank (X - value)^k` for each recorded `k`.
    pub fn rank_sequence(&self, dim: usize) -> Vec<usize> {
        self.kernel_dims.iter().map(|&k| dim - k).collect()
    }
}

/// Single-linkage clustering of points at the given radius. Returns groups of
/// indices, each sorted, ordered by first member.
pub fn single_linkage(points: &[C64], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Dimensions of `ker (X - mu)^k`, `k = 0..`, computed without forming powers:
/// `ker (X - mu)^k = ker P_{k-1} (X - mu)` where `P_{k-1}` projects onto the
/// orthogonal complement of `ker (X - mu)^{k-1}`. Stops when the dimension
/// stalls or reaches `cap`.
pub fn kernel_chain(x: &CMatrix, mu: C64, threshold: f64, cap: usize) -> Vec<usize> {
    let n = x.rows();
    let shifted = x.shifted(mu);
    let mut dims = vec![0usize];
    let mut basis: Vec<CVector> = Vec::new();
    loop {
        let m = if basis.is_empty() {
            shifted.clone()
        } else {
            let q = CMatrix::from_columns(n, &basis);
            let proj = &q * &q.adjoint();
            let comp = &CMatrix::identity(n) - &proj;
            &comp * &shifted
        };
        let next = nullspace_abs(&m, threshold);
        let prev = *dims.last().unwrap_or(&0);
        if next.len() <= prev {
            break;
        }
        dims.push(next.len());
        basis = next;
        if basis.len() >= cap || basis.len() >= n {
            break;
        }
    }
    dims
}

/// Block sizes (descending) from a kernel chain, repaired so the number of
/// blocks of size at least `k` is non-increasing in `k` and the total matches
/// `multiplicity`.
pub fn blocks_from_chain(kernel_dims: &[usize], multiplicity: usize) -> (Vec<usize>, bool) {
    let mut repaired = false;
    let mut at_least: Vec<usize> = Vec::new();
    let mut total = 0usize;
    for w in kernel_dims.windows(2) {
        let mut c = w[1].saturating_sub(w[0]);
        if let Some(&last) = at_least.last() {
            if c > last {
                c = last;
                repaired = true;
            }
        }
        if total + c > multiplicity {
            c = multiplicity - total;
            repaired = true;
        }
        if c == 0 {
            break;
        }
        total += c;
        at_least.push(c);
    }
    let mut blocks = Vec::new();
    for k in 0..at_least.len() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..at_least[k] - next {
            blocks.push(k + 1);
        }
    }
    if total < multiplicity {
        repaired = true;
        blocks.extend(std::iter::repeat_n(1, multiplicity - total));
    }
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    (blocks, repaired)
}

/// Eigenvalue clusters of `x` with their Jordan structure.
///
/// `tol` is the rank tolerance relative to `||x||_2`, `cluster_tol` the single
/// linkage radius relative to `||x||_2`.
pub fn analyze(x: &CMatrix, tol: f64, cluster_tol: f64) -> Result<Vec<ClusterStructure>> {
    let n = x.ensure_square()?;
    let eig = eigenvalues(x)?;
    let scale = x.norm2();
    let threshold = tol * scale;

    struct Cluster {
        id: usize,
        members: Vec<C64>,
    }
    let mean = |m: &[C64]| m.iter().sum::<C64>() / m.len() as f64;

    let mut next_id = 0usize;
    let mut clusters: Vec<Cluster> = single_linkage(&eig, cluster_tol * scale)
        .into_iter()
        .map(|g| {
            next_id += 1;
            Cluster {
                id: next_id,
                members: g.iter().map(|&i| eig[i]).collect(),
            }
        })
        .collect();

    let probe = MERGE_PROBE_RADIUS.max(cluster_tol) * scale;
    let mut rejected: HashSet<(usize, usize)> = HashSet::new();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let key = (clusters[i].id.min(clusters[j].id), clusters[i].id.max(clusters[j].id));
                if rejected.contains(&key) {
                    continue;
                }
                let dist = (mean(&clusters[i].members) - mean(&clusters[j].members)).norm();
                if dist <= probe && best.is_none_or(|(b, _, _)| dist < b) {
                    best = Some((dist, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else { break };
        let mut merged = clusters[i].members.clone();
        merged.extend_from_slice(&clusters[j].members);
        let chain = kernel_chain(x, mean(&merged), threshold, merged.len());
        if chain.last().copied().unwrap_or(0) >= merged.len() {
            next_id += 1;
            let b = clusters.remove(j);
            let a = clusters.remove(i);
            let mut members = a.members;
            members.extend(b.members);
            clusters.push(Cluster {
                id: next_id,
                members,
            });
        } else {
            rejected.insert((
                clusters[i].id.min(clusters[j].id),
                clusters[i].id.max(clusters[j].id),
            ));
        }
    }

    let mut out: Vec<ClusterStructure> = clusters
        .iter()
        .map(|c| {
            let value = mean(&c.members);
            let mult = c.members.len();
            let mut kernel_dims = kernel_chain(x, value, threshold, mult);
            let mut clamped = false;
            if let Some(last) = kernel_dims.last_mut() {
                if *last > mult {
                    *last = mult;
                    clamped = true;
                }
            }
            let (block_sizes, repaired) = blocks_from_chain(&kernel_dims, mult);
            ClusterStructure {
                value,
                multiplicity: mult,
                kernel_dims,
                block_sizes,
                repaired: repaired || clamped,
            }
        })
        .collect();
    debug_assert_eq!(out.iter().map(|c| c.multiplicity).sum::<usize>(), n);
    out.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn chain_of_jordan_block() {
        let j = CMatrix::from_real(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 0.0, 2.0]]);
        let dims = kernel_chain(&j, c64(2.0, 0.0), 1e-9, 3);
        assert_eq!(dims, vec![0, 1, 2, 3]);
        assert_eq!(blocks_from_chain(&dims, 3), (vec![3], false));
    }

    #[test]
    fn chain_repair() {
        // Counts of blocks of size >= k going up is impossible; clamp it.
        let (blocks, repaired) = blocks_from_chain(&[0, 1, 3], 3);
        assert!(repaired);
        assert_eq!(blocks.iter().sum::<usize>(), 3);
        let (blocks, repaired) = blocks_from_chain(&[0, 1], 3);
        assert!(repaired);
        assert_eq!(blocks, vec![1, 1, 1]);
    }

    #[test]
    fn single_linkage_chains_neighbours() {
        let pts = [c64(0.0, 0.0), c64(0.9, 0.0), c64(1.8, 0.0), c64(5.0, 0.0)];
        let g = single_linkage(&pts, 1.0);
        assert_eq!(g, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn analyze_identity_and_block() {
        let s = analyze(&CMatrix::identity(3), 1e-9, 1e-7).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].block_sizes, vec![1, 1, 1]);
        let s = analyze(&CMatrix::from_real(&[&[4.0, 1.0], &[0.0, 4.0]]), 1e-9, 1e-7).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].block_sizes, vec![2]);
        assert_eq!(s[0].rank_sequence(2), vec![2, 1, 0]);
    }
}
