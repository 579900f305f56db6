//! Riemannian manifolds presented as anholonomic frames with constant
//! structure coefficients.
//!
//! A manifold here is a frame `{E_1, ..., E_n}` together with a constant
//! metric matrix `G_ij = g(E_i, E_j)` and antisymmetric structure
//! coefficients `c_ij^k` meaning `[E_i, E_j] = sum_k c_ij^k E_k`. On such a
//! presentation the Koszul formula loses its derivative terms and the whole
//! Levi-Civita / curvature pipeline closes over Q(sqrt 2):
//!
//! `2 g(nabla_X Y, Z) = -g(X,[Y,Z]) - g(Y,[X,Z]) + g(Z,[X,Y])`
//!
//! Curvature sign convention:
//! `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z` and
//! `S(X,Y) = trace(Z -> R(Z,X)Y)`, which makes hyperbolic-type frames come
//! out with negative Ricci.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{Matrix, Tensor3, Tensor4};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("metric must be a {dim}x{dim} matrix, got {rows}x{cols}")]
    MetricShape { dim: usize, rows: usize, cols: usize },
    #[error("metric is not symmetric at entry ({i}, {j})")]
    MetricNotSymmetric { i: usize, j: usize },
    #[error("metric is not positive definite: leading principal minor of order {order} is {minor}")]
    MetricNotPositiveDefinite { order: usize, minor: Scalar },
    #[error("bracket index {index} out of range for dimension {dim}")]
    BracketIndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [E_{i}, E_{i}] must vanish")]
    BracketOfFieldWithItself { i: usize },
    #[error("duplicate bracket entry for pair ({i}, {j})")]
    DuplicateBracket { i: usize, j: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("Jacobi identity violated on {count} index tuples")]
    JacobiViolated { count: usize },
}

/// Constant-coefficient vector field `V = sum_i a_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameVectorField {
    coeffs: Vec<Scalar>,
}

impl FrameVectorField {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        FrameVectorField { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        FrameVectorField {
            coeffs: vec![Scalar::zero(); dim],
        }
    }

    /// The frame field `E_i` itself (0-based index).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); dim];
        coeffs[i] = Scalar::one();
        FrameVectorField { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        FrameVectorField {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// True when every coefficient outside `indices` vanishes.
    pub fn supported_on(&self, indices: &[usize]) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || indices.contains(&i))
    }

    /// Components re-expressed on the subframe `indices` (which must carry
    /// all of the support).
    pub fn restrict(&self, indices: &[usize]) -> Option<FrameVectorField> {
        if !self.supported_on(indices) {
            return None;
        }
        Some(FrameVectorField {
            coeffs: indices.iter().map(|&i| self.coeffs[i].clone()).collect(),
        })
    }
}

/// Jacobi identity residual at one index tuple.
#[derive(Debug, Clone)]
pub struct JacobiViolation {
    /// 0-based (i, j, k) with i < j < k and the output component l.
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub residual: Scalar,
}

#[derive(Debug, Clone)]
pub struct FrameManifold {
    dim: usize,
    metric: Matrix,
    metric_inv: Matrix,
    // key (i, j) with i < j; dense coefficient vector over k
    brackets: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl FrameManifold {
    /// Build and validate a frame presentation. `brackets` lists
    /// `(i, j, coeffs)` with 0-based `i != j`; entries given with `i > j`
    /// are normalized through antisymmetry.
    pub fn new(
        dim: usize,
        metric: Matrix,
        brackets: Vec<(usize, usize, Vec<Scalar>)>,
    ) -> Result<Self, FrameError> {
        if metric.n_rows() != dim || metric.n_cols() != dim {
            return Err(FrameError::MetricShape {
                dim,
                rows: metric.n_rows(),
                cols: metric.n_cols(),
            });
        }
        for i in 0..dim {
            for j in i + 1..dim {
                if metric[(i, j)] != metric[(j, i)] {
                    return Err(FrameError::MetricNotSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        for (order, minor) in metric.leading_principal_minors().into_iter().enumerate() {
            if !minor.is_positive() {
                return Err(FrameError::MetricNotPositiveDefinite {
                    order: order + 1,
                    minor,
                });
            }
        }
        let metric_inv = metric.inverse().expect("positive definite metric");

        let mut table: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (i, j, coeffs) in brackets {
            if i >= dim {
                return Err(FrameError::BracketIndexOutOfRange { index: i, dim });
            }
            if j >= dim {
                return Err(FrameError::BracketIndexOutOfRange { index: j, dim });
            }
            if i == j {
                return Err(FrameError::BracketOfFieldWithItself { i: i + 1 });
            }
            if coeffs.len() != dim {
                return Err(FrameError::CoefficientLength {
                    expected: dim,
                    got: coeffs.len(),
                });
            }
            let (key, coeffs) = if i < j {
                ((i, j), coeffs)
            } else {
                ((j, i), coeffs.into_iter().map(|c| -c).collect())
            };
            if table.insert(key, coeffs).is_some() {
                return Err(FrameError::DuplicateBracket {
                    i: key.0 + 1,
                    j: key.1 + 1,
                });
            }
        }
        Ok(FrameManifold {
            dim,
            metric,
            metric_inv,
            brackets: table,
        })
    }

    /// Like [`FrameManifold::new`] but additionally requires the Jacobi
    /// identity to hold.
    pub fn new_strict(
        dim: usize,
        metric: Matrix,
        brackets: Vec<(usize, usize, Vec<Scalar>)>,
    ) -> Result<Self, FrameError> {
        let m = Self::new(dim, metric, brackets)?;
        let violations = m.jacobi_violations();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(FrameError::JacobiViolated {
                count: violations.len(),
            })
        }
    }

    pub fn flat(dim: usize) -> Self {
        FrameManifold::new(dim, Matrix::identity(dim), Vec::new()).expect("flat frame")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> &Matrix {
        &self.metric
    }

    pub fn metric_inv(&self) -> &Matrix {
        &self.metric_inv
    }

    /// Structure coefficient `c_ij^k`.
    pub fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        let (key, negate) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.brackets.get(&key) {
            Some(coeffs) => {
                if negate {
                    -&coeffs[k]
                } else {
                    coeffs[k].clone()
                }
            }
            None => Scalar::zero(),
        }
    }

    /// `[E_i, E_j]` as a coefficient vector.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.bracket_coeff(i, j, k)).collect()
    }

    /// Stored bracket entries `(i, j, coeffs)` with `i < j`.
    pub fn bracket_entries(&self) -> impl Iterator<Item = (usize, usize, &Vec<Scalar>)> {
        self.brackets.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// `g(u, v)` for coefficient vectors on this frame.
    pub fn inner(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if v[j].is_zero() {
                    continue;
                }
                acc += &(&(&u[i] * &self.metric[(i, j)]) * &v[j]);
            }
        }
        acc
    }

    /// Connection coefficients `Gamma_ij^k` (`nabla_{E_i} E_j = sum_k Gamma_ij^k E_k`)
    /// from the Koszul formula; the derivative terms vanish for constant `G`.
    pub fn levi_civita(&self) -> Tensor3 {
        let n = self.dim;
        let half = Scalar::from_ratio(1, 2);
        let mut gamma = Tensor3::zeros(n);
        for i in 0..n {
            for j in 0..n {
                // K_l = g(nabla_{E_i} E_j, E_l)
                let mut k_vec = vec![Scalar::zero(); n];
                for l in 0..n {
                    let mut acc = Scalar::zero();
                    for m in 0..n {
                        let c_jl = self.bracket_coeff(j, l, m);
                        if !c_jl.is_zero() {
                            acc -= &(&c_jl * &self.metric[(i, m)]);
                        }
                        let c_il = self.bracket_coeff(i, l, m);
                        if !c_il.is_zero() {
                            acc -= &(&c_il * &self.metric[(j, m)]);
                        }
                        let c_ij = self.bracket_coeff(i, j, m);
                        if !c_ij.is_zero() {
                            acc += &(&c_ij * &self.metric[(l, m)]);
                        }
                    }
                    k_vec[l] = &half * &acc;
                }
                // raise the index: Gamma_ij^k = sum_l (G^-1)_kl K_l
                for k in 0..n {
                    let mut acc = Scalar::zero();
                    for l in 0..n {
                        if k_vec[l].is_zero() {
                            continue;
                        }
                        acc += &(&self.metric_inv[(k, l)] * &k_vec[l]);
                    }
                    gamma.set(i, j, k, acc);
                }
            }
        }
        gamma
    }

    /// Riemann components `R_ijk^l` for
    /// `R(E_i, E_j) E_k = nabla_i nabla_j E_k - nabla_j nabla_i E_k - nabla_[E_i,E_j] E_k`.
    pub fn riemann(&self, gamma: &Tensor3) -> Tensor4 {
        let n = self.dim;
        let mut r = Tensor4::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue; // antisymmetric in (i, j)
                }
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = Scalar::zero();
                        for m in 0..n {
                            let g_jk = gamma.get(j, k, m);
                            if !g_jk.is_zero() {
                                acc += &(g_jk * gamma.get(i, m, l));
                            }
                            let g_ik = gamma.get(i, k, m);
                            if !g_ik.is_zero() {
                                acc -= &(g_ik * gamma.get(j, m, l));
                            }
                            let c_ij = self.bracket_coeff(i, j, m);
                            if !c_ij.is_zero() {
                                acc -= &(&c_ij * gamma.get(m, k, l));
                            }
                        }
                        r.set(i, j, k, l, acc);
                    }
                }
            }
        }
        r
    }

    /// Ricci tensor `S_ij = trace(Z -> R(Z, E_i) E_j)` and scalar curvature
    /// `trace_G(S)`. The trace form needs no orthonormal frame and agrees
    /// with `sum_k g(R(F_k, X) Y, F_k)` over any G-orthonormal `{F_k}`.
    pub fn ricci_and_scalar(&self, riemann: &Tensor4) -> (Matrix, Scalar) {
        let n = self.dim;
        let mut ricci = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero();
                for k in 0..n {
                    acc += riemann.get(k, i, j, k);
                }
                ricci[(i, j)] = acc;
            }
        }
        let scalar = Matrix::weighted_trace(&self.metric_inv, &ricci);
        (ricci, scalar)
    }

    /// `(L_V g)(E_i, E_j) = g(nabla_{E_i} V, E_j) + g(nabla_{E_j} V, E_i)`
    /// for a constant-coefficient field `V`.
    pub fn lie_derivative_metric(&self, gamma: &Tensor3, v: &FrameVectorField) -> Matrix {
        assert_eq!(v.dim(), self.dim, "field dimension mismatch");
        let n = self.dim;
        // nabla_{E_i} V = sum_l (sum_k v_k Gamma_ik^l) E_l
        let mut nabla_v = Matrix::zeros(n, n); // rows i, cols l
        for i in 0..n {
            for l in 0..n {
                let mut acc = Scalar::zero();
                for k in 0..n {
                    if v.coeff(k).is_zero() {
                        continue;
                    }
                    acc += &(v.coeff(k) * gamma.get(i, k, l));
                }
                nabla_v[(i, l)] = acc;
            }
        }
        let mut lie = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero();
                for l in 0..n {
                    if !nabla_v[(i, l)].is_zero() {
                        acc += &(&nabla_v[(i, l)] * &self.metric[(l, j)]);
                    }
                    if !nabla_v[(j, l)].is_zero() {
                        acc += &(&nabla_v[(j, l)] * &self.metric[(l, i)]);
                    }
                }
                lie[(i, j)] = acc;
            }
        }
        lie
    }

    /// All index tuples `(i < j < k, l)` on which the Jacobi identity fails.
    pub fn jacobi_violations(&self) -> Vec<JacobiViolation> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut acc = Scalar::zero();
                        for m in 0..n {
                            let cij = self.bracket_coeff(i, j, m);
                            if !cij.is_zero() {
                                acc += &(&cij * &self.bracket_coeff(m, k, l));
                            }
                            let cjk = self.bracket_coeff(j, k, m);
                            if !cjk.is_zero() {
                                acc += &(&cjk * &self.bracket_coeff(m, i, l));
                            }
                            let cki = self.bracket_coeff(k, i, m);
                            if !cki.is_zero() {
                                acc += &(&cki * &self.bracket_coeff(m, j, l));
                            }
                        }
                        if !acc.is_zero() {
                            out.push(JacobiViolation {
                                i,
                                j,
                                k,
                                l,
                                residual: acc,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Assemble connection, curvature, Ricci and scalar curvature.
    pub fn curvature(&self) -> CurvaturePackage {
        let gamma = self.levi_civita();
        let riemann = self.riemann(&gamma);
        let (ricci, scalar) = self.ricci_and_scalar(&riemann);
        CurvaturePackage {
            dim: self.dim,
            metric: self.metric.clone(),
            metric_inv: self.metric_inv.clone(),
            gamma,
            riemann,
            ricci,
            scalar,
        }
    }
}

/// Connection and curvature data of a manifold or of an induced
/// (fiber / base) geometry.
#[derive(Debug, Clone)]
pub struct CurvaturePackage {
    pub dim: usize,
    pub metric: Matrix,
    pub metric_inv: Matrix,
    pub gamma: Tensor3,
    pub riemann: Tensor4,
    pub ricci: Matrix,
    pub scalar: Scalar,
}

impl CurvaturePackage {
    /// Lowered curvature `R(E_i, E_j, E_k, E_l) = g(R(E_i, E_j) E_k, E_l)`.
    pub fn riemann_lowered(&self, i: usize, j: usize, k: usize, l: usize) -> Scalar {
        let mut acc = Scalar::zero();
        for m in 0..self.dim {
            let r = self.riemann.get(i, j, k, m);
            if !r.is_zero() {
                acc += &(r * &self.metric[(m, l)]);
            }
        }
        acc
    }
}
