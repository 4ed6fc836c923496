use serde::Serialize;

use super::{generic_signature, stabilizer_residual, stabilizer_space, SignatureSample, StabilizerSpace};
use crate::error::{Error, Result};
use crate::jordan::{jordan_signature, JordanSignature};
use crate::linalg::{inverse, svd, CMatrix, C64};
use crate::matfun::{spectral_data, FunctionSpec, NewtonPolynomial};
use crate::symspace::{tensor_power_apply, SymState};

/// Stream offset for probe draws, keeping them apart from signature samples.
const PROBE_STREAM: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignatureCount {
    pub signature: JordanSignature,
    pub count: usize,
}

/// Outcome of the uniqueness test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Refuted {
        witness: CMatrix,
        witness_signature: JordanSignature,
    },
    Inconclusive {
        reason: String,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassReport {
    pub n: usize,
    pub d: usize,
    pub stabilizer_dimension: usize,
    pub generic_signature: JordanSignature,
    pub sampled_signatures: Vec<SignatureCount>,
    pub verdict: Verdict,
    /// Sorted `|alpha_i|^2` of the normalized state in the eigenbasis of a
    /// generic stabilizer, when that stabilizer has `d` simple eigenvalues.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lu_invariant: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

fn membership_tol(tol: f64) -> f64 {
    (1e3 * tol).max(1e-8)
}

/// Spectral projector onto the generalized eigenspace of cluster `target`.
fn spectral_projector(g: &CMatrix, target: usize, tol: f64, cluster_tol: f64) -> Result<CMatrix> {
    let data = spectral_data(g, tol, cluster_tol)?;
    let spec = FunctionSpec::from_fn(&data, |ci, _, k| {
        if ci == target && k == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(NewtonPolynomial::hermite(&spec)?.eval_matrix(g))
}

fn beats(candidate: &JordanSignature, generic: &JordanSignature) -> bool {
    candidate.eigenvalue_count() > generic.eigenvalue_count() || candidate.block_count() < generic.block_count()
}

/// Merges pairs of eigenvalues of a generic element and links the two
/// eigenspaces with `P_i Z P_j`. Returns a member of the space whose
/// signature beats `generic`, if one is found.
fn merge_probe(
    psi: &SymState,
    space: &StabilizerSpace,
    sample: &SignatureSample,
    seed: u64,
    tol: f64,
    cluster_tol: f64,
) -> Result<Option<(CMatrix, JordanSignature)>> {
    let g = &sample.generic_element;
    let data = spectral_data(g, tol, cluster_tol)?;
    let k = data.clusters.len();
    if k < 2 {
        return Ok(None);
    }
    let projectors = (0..k)
        .map(|c| spectral_projector(g, c, tol, cluster_tol))
        .collect::<Result<Vec<_>>>()?;
    let scale = g.norm2();
    let mut draw = 0;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let shift = data.clusters[i].eigenvalue - data.clusters[j].eigenvalue;
            let merged = g + &projectors[j].scale(shift);
            let z = space.sample(seed, PROBE_STREAM + draw);
            draw += 1;
            let link = &(&projectors[i] * &z) * &projectors[j];
            let link_norm = link.norm2();
            if link_norm <= 1e-6 * scale {
                continue;
            }
            let candidate = &merged + &link.scale(C64::new(scale / link_norm, 0.0));
            if stabilizer_residual(psi, &candidate)? > membership_tol(tol) {
                continue;
            }
            let sig = jordan_signature(&candidate, tol, cluster_tol)?.signature;
            if beats(&sig, &sample.generic) {
                return Ok(Some((candidate, sig)));
            }
        }
    }
    Ok(None)
}

/// Verified when the space is commutative and the generic signature has one
/// block per eigenvalue; Refuted when some element has more eigenvalue
/// groups or fewer blocks than the generic one; Inconclusive otherwise.
pub fn uniqueness_check(
    psi: &SymState,
    space: &StabilizerSpace,
    sample: &SignatureSample,
    seed: u64,
    tol: f64,
    cluster_tol: f64,
) -> Result<Verdict> {
    for (b, sig) in &sample.draws {
        if beats(sig, &sample.generic) {
            return Ok(Verdict::Refuted {
                witness: b.clone(),
                witness_signature: sig.clone(),
            });
        }
    }
    if let Some((witness, witness_signature)) = merge_probe(psi, space, sample, seed, tol, cluster_tol)? {
        return Ok(Verdict::Refuted {
            witness,
            witness_signature,
        });
    }
    if !sample.generic.is_nondegenerate() {
        return Ok(Verdict::Inconclusive {
            reason: "generic stabilizer has repeated eigenvalues across blocks".into(),
        });
    }
    if !space.is_commutative(membership_tol(tol)) {
        return Ok(Verdict::Inconclusive {
            reason: "stabilizer space is not commutative".into(),
        });
    }
    Ok(Verdict::Verified)
}

/// Sorted, normalized `|alpha_k|^2` of `psi` written as
/// `sum_k alpha_k |v_k>^{(x) n}` in the unit-norm eigenbasis of `g`.
pub fn lu_invariant(psi: &SymState, g: &CMatrix, tol: f64, cluster_tol: f64) -> Result<Vec<f64>> {
    let d = psi.d();
    let data = spectral_data(g, tol, cluster_tol)?;
    if data.clusters.len() != d || data.clusters.iter().any(|c| c.multiplicity != 1) {
        return Err(Error::InvalidArgument("stabilizer does not have d simple eigenvalues".into()));
    }
    let vectors: Vec<_> = data
        .clusters
        .iter()
        .map(|c| {
            let f = svd(&g.shifted(c.eigenvalue));
            f.v.column(d - 1)
        })
        .collect();
    let basis = CMatrix::from_columns(d, &vectors);
    let change = inverse(&basis, tol)?;
    let rotated = tensor_power_apply(&psi.normalized()?, &change)?;
    let mut weights: Vec<f64> = (0..d)
        .map(|k| {
            let mut occ = vec![0u32; d];
            occ[k] = psi.n() as u32;
            rotated.amplitude(&occ).norm_sqr()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroState);
    }
    weights.iter_mut().for_each(|w| *w /= total);
    weights.sort_by(f64::total_cmp);
    Ok(weights)
}

/// Stabilizer dimension, generic signature, uniqueness verdict and, for
/// GHZ-type stabilizers, the local-unitary invariant.
pub fn classify(psi: &SymState, samples: usize, seed: u64, tol: f64, cluster_tol: f64) -> Result<ClassReport> {
    let mut warnings = Vec::new();
    if psi.n() == 2 {
        warnings.push("n = 2: stabilizers need not form a group; the verdict may not apply".into());
    }
    let space = stabilizer_space(psi, tol)?;
    let sample = generic_signature(&space, samples, seed, tol, cluster_tol)?;
    let verdict = uniqueness_check(psi, &space, &sample, seed, tol, cluster_tol)?;
    let lu = if sample.generic.is_all_singleton() && sample.generic.eigenvalue_count() == psi.d() {
        match lu_invariant(psi, &sample.generic_element, tol, cluster_tol) {
            Ok(w) => Some(w),
            Err(e) => {
                warnings.push(format!("LU invariant unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };
    Ok(ClassReport {
        n: psi.n(),
        d: psi.d(),
        stabilizer_dimension: space.dimension(),
        generic_signature: sample.generic.clone(),
        sampled_signatures: sample
            .counts
            .iter()
            .map(|(signature, count)| SignatureCount {
                signature: signature.clone(),
                count: *count,
            })
            .collect(),
        verdict,
        lu_invariant: lu,
        warnings,
    })
}

/// True when the stabilizer dimension or generic signature differ, which
/// certifies that the states are not SLOCC equivalent. False says nothing.
pub fn invariants_distinguish(
    psi: &SymState,
    phi: &SymState,
    samples: usize,
    seed: u64,
    tol: f64,
    cluster_tol: f64,
) -> Result<bool> {
    if (psi.n(), psi.d()) != (phi.n(), phi.d()) {
        return Err(Error::DimensionMismatch("states differ in n or d".into()));
    }
    let a = stabilizer_space(psi, tol)?;
    let b = stabilizer_space(phi, tol)?;
    if a.dimension() != b.dimension() {
        return Ok(true);
    }
    let sa = generic_signature(&a, samples, seed, tol, cluster_tol)?;
    let sb = generic_signature(&b, samples, seed, tol, cluster_tol)?;
    Ok(sa.generic != sb.generic)
}
