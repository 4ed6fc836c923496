//! Primary matrix functions through Hermite interpolation on the spectrum.
//!
//! `f(X)` is evaluated as `p(X)` where `p` matches `f` and its first
//! `s_i - 1` derivatives at each eigenvalue cluster `lambda_i` with largest
//! Jordan block `s_i`. The result is a polynomial in `X`, so it commutes with
//! `X` and inherits every invariant subspace of `X`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{inverse, spectral, CMatrix, C64};

/// Default cluster radius relative to `||X||`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// One eigenvalue cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCluster {
    pub eigenvalue: C64,
    pub multiplicity: usize,
    pub max_block: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub clusters: Vec<SpectralCluster>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).sum()
    }
}

/// Eigenvalue clusters of `x` with multiplicities and largest block sizes.
pub fn spectral_data(x: &CMatrix, tol: f64, cluster_tol: f64) -> Result<SpectralData> {
    let clusters = spectral::analyze(x, tol, cluster_tol)?
        .into_iter()
        .map(|c| SpectralCluster {
            eigenvalue: c.value,
            multiplicity: c.multiplicity,
            max_block: c.max_block(),
        })
        .collect();
    Ok(SpectralData { clusters })
}

/// Values of `f` and its derivatives at one node: `derivatives[k] = f^(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeValues {
    pub node: C64,
    pub derivatives: Vec<C64>,
}

/// Per-cluster Hermite data.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    pub nodes: Vec<NodeValues>,
}

impl FunctionSpec {
    /// Samples an analytic function given as `f(z, k) = f^(k)(z)` at every
    /// cluster, with as many derivatives as the largest block needs.
    pub fn from_fn(data: &SpectralData, mut f: impl FnMut(usize, C64, usize) -> C64) -> Self {
        let nodes = data
            .clusters
            .iter()
            .enumerate()
            .map(|(ci, c)| NodeValues {
                node: c.eigenvalue,
                derivatives: (0..c.max_block.max(1)).map(|k| f(ci, c.eigenvalue, k)).collect(),
            })
            .collect();
        Self { nodes }
    }
}

/// Hermite interpolating polynomial in Newton form.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonPolynomial {
    /// Confluent node sequence `x_0, x_1, ...`.
    pub nodes: Vec<C64>,
    /// `coefficients[k] = f[x_0, ..., x_k]`.
    pub coefficients: Vec<C64>,
}

impl NewtonPolynomial {
    /// Builds the interpolant from confluent divided differences.
    pub fn hermite(spec: &FunctionSpec) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut owner = Vec::new();
        for (ci, nv) in spec.nodes.iter().enumerate() {
            for _ in 0..nv.derivatives.len() {
                nodes.push(nv.node);
                owner.push(ci);
            }
        }
        let m = nodes.len();
        if m == 0 {
            return Err(Error::InvalidArgument("no interpolation nodes".into()));
        }
        // table[i] holds f[x_i, ..., x_{i+level}] at the current level.
        let mut table: Vec<C64> = owner.iter().map(|&ci| spec.nodes[ci].derivatives[0]).collect();
        let mut coefficients = vec![table[0]];
        let mut factorial = 1.0;
        for level in 1..m {
            factorial *= level as f64;
            let mut next = Vec::with_capacity(m - level);
            for i in 0..m - level {
                let (a, b) = (nodes[i], nodes[i + level]);
                let value = if owner[i] == owner[i + level] {
                    spec.nodes[owner[i]].derivatives[level] / factorial
                } else {
                    (table[i + 1] - table[i]) / (b - a)
                };
                if !value.re.is_finite() || !value.im.is_finite() {
                    return Err(Error::IllConditionedNodes(format!(
                        "divided difference of order {level} overflowed"
                    )));
                }
                next.push(value);
            }
            coefficients.push(next[0]);
            table = next;
        }
        Ok(Self {
            nodes,
            coefficients,
        })
    }

    pub fn eval(&self, z: C64) -> C64 {
        let m = self.coefficients.len();
        let mut acc = self.coefficients[m - 1];
        for k in (0..m - 1).rev() {
            acc = acc * (z - self.nodes[k]) + self.coefficients[k];
        }
        acc
    }

    /// `p(X)` by Horner's rule in Newton form.
    pub fn eval_matrix(&self, x: &CMatrix) -> CMatrix {
        let n = x.rows();
        let m = self.coefficients.len();
        let mut acc = CMatrix::identity(n).scale(self.coefficients[m - 1]);
        for k in (0..m - 1).rev() {
            acc = &acc * &x.shifted(self.nodes[k]);
            for i in 0..n {
                acc[(i, i)] += self.coefficients[k];
            }
        }
        acc
    }
}

/// `f(X)` for the Hermite data in `spec`, which must cover every cluster of
/// `X` with at least as many derivatives as its largest Jordan block.
pub fn matrix_function(x: &CMatrix, spec: &FunctionSpec, tol: f64, cluster_tol: f64) -> Result<CMatrix> {
    x.ensure_square()?;
    let data = spectral_data(x, tol, cluster_tol)?;
    let radius = cluster_tol * x.norm2().max(f64::MIN_POSITIVE);
    for (ci, c) in data.clusters.iter().enumerate() {
        let matched = spec
            .nodes
            .iter()
            .filter(|nv| (nv.node - c.eigenvalue).norm() <= radius.max(1e-12 * c.eigenvalue.norm()))
            .max_by_key(|nv| nv.derivatives.len());
        match matched {
            None => {
                return Err(Error::InsufficientDerivatives {
                    cluster: ci,
                    needed: c.max_block,
                    given: 0,
                })
            }
            Some(nv) if nv.derivatives.len() < c.max_block => {
                return Err(Error::InsufficientDerivatives {
                    cluster: ci,
                    needed: c.max_block,
                    given: nv.derivatives.len(),
                })
            }
            Some(_) => {}
        }
    }
    Ok(NewtonPolynomial::hermite(spec)?.eval_matrix(x))
}

/// Branch choice for [`nth_root`].
#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    /// `|z|^{1/r} exp(i arg(z) / r)` with `arg` in `(-pi, pi]`.
    Principal,
    /// Branch index `b` per cluster (in [`spectral_data`] order), multiplying
    /// the principal value by `exp(2 pi i b / r)`.
    PerCluster(Vec<u32>),
}

/// A root together with the polynomial that produced it.
#[derive(Clone, Debug)]
pub struct MatrixRoot {
    pub root: CMatrix,
    pub polynomial: NewtonPolynomial,
    pub spectral: SpectralData,
}

fn principal_arg(z: C64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// k-th derivative of `z^{1/r}` on the given branch.
pub fn root_derivative(z: C64, r: u32, branch: u32, k: usize) -> C64 {
    let p = 1.0 / r as f64;
    let mut coeff = 1.0;
    for j in 0..k {
        coeff *= p - j as f64;
    }
    let modulus = z.norm().powf(p - k as f64);
    let phase = principal_arg(z) * (p - k as f64) + 2.0 * PI * branch as f64 / r as f64;
    C64::from_polar(modulus * coeff, phase)
}

/// One Newton step `S <- ((r - 1) S + X S^{1-r}) / r`, kept only when it
/// lowers `||S^r - X||`. The step stays in the commutative algebra of `X`.
fn refine_root(x: &CMatrix, s: CMatrix, r: u32) -> CMatrix {
    if r < 2 {
        return s;
    }
    let residual = |m: &CMatrix| (&m.pow(r) - x).norm_fro();
    let Ok(inv) = inverse(&s.pow(r - 1), 0.0) else {
        return s;
    };
    let step = (&s.scale(C64::new((r - 1) as f64, 0.0)) + &(x * &inv)).scale(C64::new(1.0 / r as f64, 0.0));
    if step.is_finite() && residual(&step) < residual(&s) {
        step
    } else {
        s
    }
}

/// An `r`-th root of `X` that is a polynomial in `X`.
pub fn nth_root(x: &CMatrix, r: u32, branch: &Branch, tol: f64, cluster_tol: f64) -> Result<MatrixRoot> {
    x.ensure_square()?;
    if r == 0 {
        return Err(Error::InvalidArgument("root order must be >= 1".into()));
    }
    let data = spectral_data(x, tol, cluster_tol)?;
    let scale = x.norm2();
    for c in &data.clusters {
        if scale == 0.0 || c.eigenvalue.norm() <= cluster_tol * scale {
            return Err(Error::SingularRoot {
                eigenvalue: c.eigenvalue,
            });
        }
    }
    let branches: Vec<u32> = match branch {
        Branch::Principal => vec![0; data.clusters.len()],
        Branch::PerCluster(b) => {
            if b.len() != data.clusters.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} branch indices for {} clusters",
                    b.len(),
                    data.clusters.len()
                )));
            }
            b.clone()
        }
    };
    let spec = FunctionSpec::from_fn(&data, |ci, z, k| root_derivative(z, r, branches[ci] % r, k));
    let polynomial = NewtonPolynomial::hermite(&spec)?;
    let root = refine_root(x, polynomial.eval_matrix(x), r);
    Ok(MatrixRoot {
        root,
        polynomial,
        spectral: data,
    })
}

/// Principal `r`-th root with default tolerances.
pub fn principal_root(x: &CMatrix, r: u32) -> Result<CMatrix> {
    Ok(nth_root(x, r, &Branch::Principal, crate::linalg::DEFAULT_TOL, DEFAULT_CLUSTER_TOL)?.root)
}

/// Relative residual of the least-squares projection of `s` onto
/// `span{I, X, ..., X^{dim-1}}` under the entrywise inner product.
pub fn polynomial_span_residual(x: &CMatrix, s: &CMatrix) -> f64 {
    let n = x.rows();
    let snorm = s.norm_fro();
    if snorm == 0.0 {
        return 0.0;
    }
    let mut basis: Vec<CMatrix> = Vec::new();
    let mut power = CMatrix::identity(n);
    for _ in 0..n.max(1) {
        let mut v = power.clone();
        let vnorm0 = v.norm_fro();
        for _ in 0..2 {
            for q in &basis {
                let c = q.inner(&v);
                v = &v - &q.scale(c);
            }
        }
        let vn = v.norm_fro();
        if vn > 1e-13 * vnorm0 && vn > 0.0 {
            basis.push(v.scale(C64::new(1.0 / vn, 0.0)));
        }
        power = &power * x;
    }
    let mut resid = s.clone();
    for _ in 0..2 {
        for q in &basis {
            let c = q.inner(&resid);
            resid = &resid - &q.scale(c);
        }
    }
    resid.norm_fro() / snorm
}
