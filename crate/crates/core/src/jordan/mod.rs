//! Eigenvalue-agnostic Jordan block structure.
//!
//! A [`JordanSignature`] groups block sizes by distinct eigenvalue and
//! forgets the eigenvalues themselves. Written in bracket notation, outer
//! braces separate eigenvalues and inner braces list block sizes:
//! `{ { 2 }, { 1 } }` is a 2-block and a 1-block with different eigenvalues.

mod count;
mod notation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use count::{count_signatures, count_unique_classes, enumerate_signatures, partitions};
pub use notation::parse_signature;

use crate::error::{Error, Result};
use crate::linalg::{spectral, CMatrix, C64};

/// Multiset of multisets of block sizes, canonically ordered: each group
/// sorted descending, groups sorted descending lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanSignature {
    groups: Vec<Vec<usize>>,
}

impl JordanSignature {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        if groups.is_empty() || groups.iter().any(|g| g.is_empty()) {
            return Err(Error::InvalidArgument("signature groups must be non-empty".into()));
        }
        if groups.iter().flatten().any(|&s| s == 0) {
            return Err(Error::InvalidArgument("block sizes must be >= 1".into()));
        }
        let mut groups = groups;
        for g in &mut groups {
            g.sort_unstable_by(|a, b| b.cmp(a));
        }
        groups.sort_by(|a, b| b.cmp(a));
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Total dimension.
    pub fn dim(&self) -> usize {
        self.groups.iter().flatten().sum()
    }

    /// Number of distinct eigenvalues.
    pub fn eigenvalue_count(&self) -> usize {
        self.groups.len()
    }

    pub fn block_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Every eigenvalue carries exactly one block.
    pub fn is_nondegenerate(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    /// `{ {1}, ..., {1} }`: diagonalizable with all eigenvalues distinct.
    pub fn is_all_singleton(&self) -> bool {
        self.groups.iter().all(|g| g == &[1])
    }

    /// Ordering used to pick the generic signature: more eigenvalue groups,
    /// then fewer blocks.
    pub fn genericity_key(&self) -> (usize, std::cmp::Reverse<usize>) {
        (self.eigenvalue_count(), std::cmp::Reverse(self.block_count()))
    }
}

impl fmt::Display for JordanSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ ")?;
        for (k, g) in self.groups.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{ ")?;
            for (j, s) in g.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, " }}")?;
        }
        write!(f, " }}")
    }
}

impl FromStr for JordanSignature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_signature(s)
    }
}

impl Serialize for JordanSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for JordanSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_signature(&text).map_err(serde::de::Error::custom)
    }
}

pub fn signature_to_string(sig: &JordanSignature) -> String {
    sig.to_string()
}

/// Signature of a matrix together with the data it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanStructureReport {
    pub signature: JordanSignature,
    /// One representative eigenvalue per group, in the same order as the
    /// groups of `signature`.
    pub eigenvalues: Vec<C64>,
    /// `rank (B - lambda)^k` for `k = 0, 1, ...` per group.
    pub rank_sequences: Vec<Vec<usize>>,
    /// Rank sequences needed monotonicity repair.
    pub repaired: bool,
}

/// Jordan block structure of a square matrix from rank sequences at each
/// eigenvalue cluster.
pub fn jordan_signature(b: &CMatrix, tol: f64, cluster_tol: f64) -> Result<JordanStructureReport> {
    let d = b.ensure_square()?;
    if d == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let clusters = spectral::analyze(b, tol, cluster_tol)?;
    let mut rows: Vec<(Vec<usize>, C64, Vec<usize>)> = clusters
        .iter()
        .map(|c| (c.block_sizes.clone(), c.value, c.rank_sequence(d)))
        .collect();
    // Match the canonical group order of the signature.
    rows.sort_by(|a, b| b.0.cmp(&a.0));
    let repaired = clusters.iter().any(|c| c.repaired);
    let signature = JordanSignature::new(rows.iter().map(|r| r.0.clone()).collect())?;
    Ok(JordanStructureReport {
        signature,
        eigenvalues: rows.iter().map(|r| r.1).collect(),
        rank_sequences: rows.into_iter().map(|r| r.2).collect(),
        repaired,
    })
}

/// Block-diagonal matrix in Jordan form: `blocks[g]` holds the sizes for
/// eigenvalue `values[g]`.
pub fn jordan_matrix(values: &[C64], blocks: &[Vec<usize>]) -> CMatrix {
    assert_eq!(values.len(), blocks.len());
    let d: usize = blocks.iter().flatten().sum();
    let mut m = CMatrix::zeros(d, d);
    let mut pos = 0;
    for (&lambda, sizes) in values.iter().zip(blocks) {
        for &k in sizes {
            for i in 0..k {
                m[(pos + i, pos + i)] = lambda;
                if i + 1 < k {
                    m[(pos + i, pos + i + 1)] = C64::new(1.0, 0.0);
                }
            }
            pos += k;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn sig(text: &str) -> JordanSignature {
        text.parse().unwrap()
    }

    #[test]
    fn bracket_notation_examples() {
        let r = jordan_signature(&CMatrix::from_real(&[&[5.0, 1.0], &[0.0, 5.0]]), 1e-9, 1e-7).unwrap();
        assert_eq!(r.signature, sig("{ { 2 } }"));
        assert_eq!(r.rank_sequences, vec![vec![2, 1, 0]]);
        let r = jordan_signature(&CMatrix::identity(2), 1e-9, 1e-7).unwrap();
        assert_eq!(r.signature, sig("{ { 1, 1 } }"));
        let r = jordan_signature(&CMatrix::from_real(&[&[1.0, 0.0], &[0.0, 2.0]]), 1e-9, 1e-7).unwrap();
        assert_eq!(r.signature, sig("{ { 1 }, { 1 } }"));
        assert!(!r.repaired);
    }

    #[test]
    fn canonical_order() {
        let s = JordanSignature::new(vec![vec![1], vec![1, 2]]).unwrap();
        assert_eq!(s.groups(), &[vec![2, 1], vec![1]]);
        let s = JordanSignature::new(vec![vec![1], vec![1, 1]]).unwrap();
        assert_eq!(s.to_string(), "{ { 1, 1 }, { 1 } }");
        assert!(JordanSignature::new(vec![]).is_err());
        assert!(JordanSignature::new(vec![vec![0]]).is_err());
    }

    #[test]
    fn mixed_structure() {
        let m = jordan_matrix(
            &[c64(2.0, 0.0), c64(-1.0, 0.5)],
            &[vec![3, 1], vec![2]],
        );
        let r = jordan_signature(&m, 1e-9, 1e-7).unwrap();
        assert_eq!(r.signature, sig("{ { 3, 1 }, { 2 } }"));
        assert_eq!(r.rank_sequences[0], vec![6, 4, 3, 2]);
        assert!((r.eigenvalues[0] - c64(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let r = jordan_signature(&CMatrix::zeros(3, 3), 1e-9, 1e-7).unwrap();
        assert_eq!(r.signature, sig("{ { 1, 1, 1 } }"));
    }
}
