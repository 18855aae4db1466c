//! Cayley transform between positive symmetric operators and symmetric
//! contractions, `T = (I − S)(I + S)⁻¹` and `S = (I − T)(I + T)⁻¹`.
//!
//! On `ℂⁿ` every subspace is closed, so a partial operator whose domain is a
//! proper subspace plays the role of a non-densely defined operator. The
//! inverse transform of a Hermitian contraction with eigenvalue `−1` is not
//! an operator; it is returned as a [`SelfadjointRelation`] whose multivalued
//! part is `ker(I + T̃)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c64, eig_of_hermitian, ensure_finite, hermitian_eig, hermitian_part, op_norm, orthonormal_basis, rank_cutoff,
    singular_values, CMatrix, HermitianEigen, Subspace, Tolerance,
};

/// A linear map defined on a subspace of `ℂⁿ`.
///
/// `action` has one column per domain basis vector: column `j` is the image
/// of `domain.basis().column(j)`.
#[derive(Clone, Debug)]
pub struct PartialOperator {
    domain: Subspace,
    action: CMatrix,
}

impl PartialOperator {
    pub fn new(domain: Subspace, action: CMatrix) -> Result<Self> {
        ensure_finite(&action)?;
        if action.nrows() != domain.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.ambient_dim(),
                found: action.nrows(),
            });
        }
        if action.ncols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: action.ncols(),
            });
        }
        Ok(Self { domain, action })
    }

    /// Builds an operator from a spanning set of its domain and the images of
    /// those vectors. The spanning set is orthonormalized and the action
    /// re-expressed against the new basis; dependent columns must have
    /// consistent images.
    pub fn from_spanning_set(columns: &CMatrix, images: &CMatrix, tol: &Tolerance) -> Result<Self> {
        ensure_finite(columns)?;
        ensure_finite(images)?;
        if columns.shape() != images.shape() {
            return Err(Error::DimensionMismatch {
                expected: columns.ncols(),
                found: images.ncols(),
            });
        }
        let domain = orthonormal_basis(columns, tol)?;
        let coeffs = domain.basis().adjoint() * columns;
        let r = coeffs.nrows();
        let action = if r == 0 {
            CMatrix::zeros(columns.nrows(), 0)
        } else {
            let gram = &coeffs * coeffs.adjoint();
            let inv = gram.try_inverse().ok_or(Error::NotInjective { sigma_min: 0.0 })?;
            images * coeffs.adjoint() * inv
        };
        let residual = op_norm(&(&action * &coeffs - images));
        if residual > tol.compare * op_norm(images).max(1.0) {
            return Err(Error::InconsistentFactorization { residual });
        }
        Self::new(domain, action)
    }

    /// The everywhere defined operator given by a square matrix.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        Self::new(Subspace::full(m.nrows()), m.clone())
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn action(&self) -> &CMatrix {
        &self.action
    }

    /// `VᴴM`, the compression of the operator to its own domain.
    pub fn compression(&self) -> CMatrix {
        self.domain.basis().adjoint() * &self.action
    }

    pub fn symmetry_residual(&self) -> f64 {
        let c = self.compression();
        op_norm(&(&c - c.adjoint()))
    }

    pub fn is_symmetric(&self, tol: &Tolerance) -> bool {
        self.symmetry_residual() <= tol.compare * op_norm(&self.action).max(1.0)
    }

    pub fn norm(&self) -> f64 {
        op_norm(&self.action)
    }

    pub fn is_contraction(&self, tol: &Tolerance) -> bool {
        self.norm() <= 1.0 + tol.contraction
    }

    /// Smallest eigenvalue of the (symmetrized) compression, i.e. the lower
    /// bound of `⟨Sh, h⟩/‖h‖²` over the domain.
    pub fn lower_bound(&self, tol: &Tolerance) -> f64 {
        eig_of_hermitian(&hermitian_part(&self.compression()), tol).min()
    }

    pub fn ensure_symmetric(&self, tol: &Tolerance) -> Result<()> {
        if self.is_symmetric(tol) {
            Ok(())
        } else {
            Err(Error::NotSymmetric {
                residual: self.symmetry_residual(),
            })
        }
    }

    pub fn ensure_contraction(&self, tol: &Tolerance) -> Result<()> {
        if self.is_contraction(tol) {
            Ok(())
        } else {
            Err(Error::NotContraction { norm: self.norm() })
        }
    }

    pub fn ensure_positive(&self, tol: &Tolerance) -> Result<()> {
        self.ensure_symmetric(tol)?;
        let lb = self.lower_bound(tol);
        if lb < -tol.psd * op_norm(&self.action).max(1.0) {
            return Err(Error::NotPositive { min_eigenvalue: lb });
        }
        Ok(())
    }

    /// Applies the operator to a vector of the domain, given in ambient
    /// coordinates.
    pub fn apply(&self, v: &CMatrix) -> CMatrix {
        &self.action * (self.domain.basis().adjoint() * v)
    }

    /// Largest discrepancy between the two operators: domains compared by
    /// mutual containment, actions compared on a common basis.
    pub fn distance(&self, other: &PartialOperator) -> Result<f64> {
        let r1 = self.domain.containment_residual(&other.domain)?;
        let r2 = other.domain.containment_residual(&self.domain)?;
        if self.domain.dim() != other.domain.dim() {
            return Ok(f64::INFINITY);
        }
        let change = self.domain.basis().adjoint() * other.domain.basis();
        let r3 = op_norm(&(&self.action * change - &other.action));
        Ok(r1.max(r2).max(r3))
    }
}

/// `S₀ − m₀·I` on the domain of `S₀`.
pub fn shift_lower_bound(op: &PartialOperator, shift: f64, tol: &Tolerance) -> Result<PartialOperator> {
    op.ensure_symmetric(tol)?;
    if !shift.is_finite() {
        return Err(Error::NonFinite);
    }
    let action = op.action() - op.domain().basis() * c64(shift);
    PartialOperator::new(op.domain().clone(), action)
}

/// Cayley transform of a positive symmetric partial operator.
///
/// The result is defined on `ran(I + S)` and maps `(I + S)h ↦ (I − S)h`.
pub fn cayley_transform(s: &PartialOperator, tol: &Tolerance) -> Result<PartialOperator> {
    s.ensure_positive(tol)?;
    let v = s.domain().basis();
    let plus = v + s.action();
    let minus = v - s.action();
    transform_graph(&plus, &minus, tol)
}

/// Inverse Cayley transform of a symmetric partial contraction with
/// `I + T` injective on its domain.
pub fn inverse_cayley_partial(t: &PartialOperator, tol: &Tolerance) -> Result<PartialOperator> {
    t.ensure_symmetric(tol)?;
    t.ensure_contraction(tol)?;
    let v = t.domain().basis();
    let plus = v + t.action();
    let minus = v - t.action();
    transform_graph(&plus, &minus, tol)
}

/// The operator `plus·x ↦ minus·x`, on the column space of `plus`.
fn transform_graph(plus: &CMatrix, minus: &CMatrix, tol: &Tolerance) -> Result<PartialOperator> {
    let k = plus.ncols();
    let sv = singular_values(plus);
    if let (Some(&largest), Some(&smallest)) = (sv.first(), sv.last()) {
        if sv.len() < k || smallest <= rank_cutoff(largest, tol) {
            return Err(Error::NotInjective { sigma_min: smallest });
        }
    }
    let domain = orthonormal_basis(plus, tol)?;
    if domain.dim() != k {
        return Err(Error::NotInjective { sigma_min: 0.0 });
    }
    if k == 0 {
        return PartialOperator::new(domain, CMatrix::zeros(plus.nrows(), 0));
    }
    let coeffs = domain.basis().adjoint() * plus;
    let inv = coeffs.try_inverse().ok_or(Error::NotInjective { sigma_min: 0.0 })?;
    PartialOperator::new(domain, minus * inv)
}

/// A positive selfadjoint linear relation on `ℂⁿ`: an operator part on
/// `domain` plus the multivalued part `domain^⊥`.
#[derive(Clone, Debug)]
pub struct SelfadjointRelation {
    domain: Subspace,
    /// Hermitian, in domain-basis coordinates.
    operator: CMatrix,
    /// Eigendecomposition of `operator`, also in domain-basis coordinates.
    spectral: HermitianEigen,
    multivalued: Subspace,
}

/// Finite eigenvalues and the multiplicity of the eigenvalue at infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationSpectrum {
    pub finite: Vec<f64>,
    pub infinity_multiplicity: usize,
}

impl SelfadjointRelation {
    pub fn ambient_dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn multivalued_part(&self) -> &Subspace {
        &self.multivalued
    }

    /// Operator part in domain-basis coordinates.
    pub fn operator_coords(&self) -> &CMatrix {
        &self.operator
    }

    /// Operator part as an `n × n` matrix, zero on the multivalued part.
    pub fn operator_part(&self) -> CMatrix {
        let q = self.domain.basis();
        q * &self.operator * q.adjoint()
    }

    pub fn is_operator(&self) -> bool {
        self.multivalued.dim() == 0
    }

    /// The matrix of the relation when it is an everywhere defined operator.
    pub fn as_operator(&self) -> Option<CMatrix> {
        self.is_operator().then(|| self.operator_part())
    }

    /// `(I + R)⁻¹` as an `n × n` matrix: `ξ` is sent to the unique `h` in the
    /// domain with `ξ ∈ (I + R)h`.
    pub fn resolvent(&self) -> CMatrix {
        let q = self.domain.basis();
        let r = self.domain.dim();
        if r == 0 {
            return CMatrix::zeros(self.ambient_dim(), self.ambient_dim());
        }
        let inv = self.spectral.map(|mu| 1.0 / (1.0 + mu));
        hermitian_part(&(q * inv * q.adjoint()))
    }

    /// The Cayley image `2(I + R)⁻¹ − I`.
    pub fn cayley_image(&self) -> CMatrix {
        let n = self.ambient_dim();
        self.resolvent().scale(2.0) - CMatrix::identity(n, n)
    }

    /// Residual of the graph inclusion `graph(S) ⊆ graph(R)`, measured modulo
    /// the multivalued part.
    pub fn graph_residual(&self, s: &PartialOperator) -> Result<f64> {
        if s.ambient_dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: s.ambient_dim(),
            });
        }
        let v = s.domain().basis();
        let outside = s.domain().containment_residual(&self.domain)?;
        let q = self.domain.basis();
        let mismatch = q.adjoint() * s.action() - &self.operator * (q.adjoint() * v);
        Ok(outside.max(op_norm(&mismatch)))
    }

    pub fn spectrum(&self, tol: &Tolerance) -> RelationSpectrum {
        relation_spectrum(self, tol)
    }
}

/// Inverse Cayley transform of a Hermitian contraction on `ℂⁿ`.
///
/// Eigenvalues within `rank_rel` of `−1` span the multivalued part; the
/// operator part is assembled from the remaining eigenpairs through
/// `t ↦ (1 − t)/(1 + t)`.
pub fn inverse_cayley(t: &CMatrix, tol: &Tolerance) -> Result<SelfadjointRelation> {
    let eig = hermitian_eig(t, tol)?;
    let norm = eig.max().abs().max(eig.min().abs());
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }
    let n = t.nrows();
    let at_minus_one = |l: f64| (l + 1.0).abs() <= tol.rank_rel;
    let kernel = eig.select(at_minus_one);
    let multivalued = orthonormal_basis(&kernel, tol)?;
    let domain = if multivalued.dim() == 0 {
        Subspace::full(n)
    } else {
        multivalued.complement(tol)
    };
    let q = domain.basis();
    let kept: Vec<usize> = (0..n).rev().filter(|&i| !at_minus_one(eig.eigenvalues[i])).collect();
    let spectral = HermitianEigen {
        eigenvalues: kept
            .iter()
            .map(|&i| {
                let t = eig.eigenvalues[i];
                (1.0 - t) / (1.0 + t)
            })
            .collect(),
        eigenvectors: q.adjoint() * eig.eigenvectors.select_columns(&kept),
    };
    let operator = spectral.map(|mu| mu);
    Ok(SelfadjointRelation {
        domain,
        operator,
        spectral,
        multivalued,
    })
}

/// Finite spectrum (from the operator part) and the dimension of the
/// multivalued part.
pub fn relation_spectrum(r: &SelfadjointRelation, tol: &Tolerance) -> RelationSpectrum {
    RelationSpectrum {
        finite: eig_of_hermitian(&r.operator, tol).eigenvalues,
        infinity_multiplicity: r.multivalued.dim(),
    }
}
