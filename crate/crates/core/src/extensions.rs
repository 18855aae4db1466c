//! Parametrization of all selfadjoint contractive extensions of a symmetric
//! partial contraction, and through the Cayley transform, of all positive
//! selfadjoint extensions of a positive symmetric operator.
//!
//! With `V` an orthonormal basis of `dom(T)` and `W` one of its orthogonal
//! complement, the partial contraction reads `T = [A; Γ₂·D_A]` in the
//! `(V, W)` frame. Every selfadjoint contraction extending `T` is
//!
//! ```text
//! T̃(Γ) = [ A         D_A·Γ₂*                       ]
//!        [ Γ₂·D_A    −Γ₂·A·Γ₂* + D_{Γ₂*}·Γ·D_{Γ₂*} ]
//! ```
//!
//! for a unique selfadjoint contraction `Γ` on `𝒟_{Γ₂*}`. The extensions form
//! the operator interval `[T̃(−I), T̃(I)]`; the Cayley inverses `S̃(Γ)` run
//! from the Kreĭn extension `S̃(I)` up to the Friedrichs extension `S̃(−I)`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cayley::{cayley_transform, inverse_cayley, PartialOperator, SelfadjointRelation};
use crate::contraction::{hstack, vstack, ColContraction};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, defect_pair, eig_of_hermitian, ensure_finite, hermitian_part, is_psd_relative, op_norm, orthonormal_basis,
    psd_sqrt, solve_on_range, subspace_relation, CMatrix, Subspace, SubspaceRelation, Tolerance,
};

/// Block data of a symmetric partial contraction in the `(V, W)` frame.
#[derive(Clone, Debug)]
pub struct ExtensionParametrization {
    operator: PartialOperator,
    complement: Subspace,
    a: CMatrix,
    gamma2: CMatrix,
    d_a: CMatrix,
    defect_a: Subspace,
    d_gamma2_star: CMatrix,
    defect_gamma2_star: Subspace,
}

/// A selfadjoint contraction on `𝒟_{Γ₂*}`, in the basis reported by
/// [`ExtensionParametrization::defect_gamma2_star`].
#[derive(Clone, Debug, PartialEq)]
pub struct GammaParameter {
    matrix: CMatrix,
}

impl GammaParameter {
    pub fn new(matrix: CMatrix, tol: &Tolerance) -> Result<Self> {
        ensure_finite(&matrix)?;
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let asym = op_norm(&(&matrix - matrix.adjoint()));
        if asym > tol.compare {
            return Err(Error::NotHermitian { residual: asym });
        }
        let matrix = hermitian_part(&matrix);
        let norm = op_norm(&matrix);
        if norm > 1.0 + tol.contraction {
            return Err(Error::NotContraction { norm });
        }
        Ok(Self { matrix })
    }

    /// `Γ = I`, the Kreĭn end of the interval.
    pub fn krein(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    /// `Γ = −I`, the Friedrichs end of the interval.
    pub fn friedrichs(dim: usize) -> Self {
        Self {
            matrix: -CMatrix::identity(dim, dim),
        }
    }

    /// `Γ = 0`.
    pub fn neutral(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Which end of the extension interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremal {
    /// `Γ = I`: the largest contraction, smallest positive extension.
    Krein,
    /// `Γ = −I`: the smallest contraction, largest positive extension.
    Friedrichs,
}

/// How membership in the extension set is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipRoute {
    /// Hermitian, contractive and agreeing with `T` on `dom(T)`.
    Direct,
    /// Hermitian and between `T̃(−I)` and `T̃(I)`.
    Interval,
}

/// Order relation between two positive selfadjoint relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionOrder {
    Le,
    Ge,
    Equal,
    Incomparable,
}

impl ExtensionParametrization {
    pub fn ambient_dim(&self) -> usize {
        self.operator.ambient_dim()
    }

    pub fn operator(&self) -> &PartialOperator {
        &self.operator
    }

    pub fn dom_t(&self) -> &Subspace {
        self.operator.domain()
    }

    /// `ℋ ⊖ dom(T)`, which is `ker(I + S*)` when `T = C(S)`.
    pub fn complement(&self) -> &Subspace {
        &self.complement
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    /// `Γ₂` in `𝒟_A`-basis coordinates (`(n−k) × dim 𝒟_A`).
    pub fn gamma2(&self) -> &CMatrix {
        &self.gamma2
    }

    /// `Γ₂` as a `(n−k) × k` matrix vanishing on `ker D_A`.
    pub fn gamma2_full(&self) -> CMatrix {
        &self.gamma2 * self.defect_a.basis().adjoint()
    }

    pub fn d_a(&self) -> &CMatrix {
        &self.d_a
    }

    pub fn defect_a(&self) -> &Subspace {
        &self.defect_a
    }

    pub fn d_gamma2_star(&self) -> &CMatrix {
        &self.d_gamma2_star
    }

    /// `𝒟_{Γ₂*}` inside complement coordinates; its basis fixes the
    /// coordinates of every [`GammaParameter`].
    pub fn defect_gamma2_star(&self) -> &Subspace {
        &self.defect_gamma2_star
    }

    pub fn defect_dim(&self) -> usize {
        self.defect_gamma2_star.dim()
    }

    /// `𝒟_{Γ₂*}` embedded in ambient coordinates.
    pub fn defect_gamma2_star_ambient(&self) -> CMatrix {
        self.complement.basis() * self.defect_gamma2_star.basis()
    }

    /// The unitary `[V W]`.
    pub fn frame(&self) -> CMatrix {
        hstack(self.dom_t().basis(), self.complement.basis())
    }

    fn to_ambient(&self, block: &CMatrix) -> CMatrix {
        let u = self.frame();
        hermitian_part(&(&u * block * u.adjoint()))
    }

    /// Checks that `Γ` is a selfadjoint contraction on `𝒟_{Γ₂*}`.
    pub fn gamma(&self, matrix: CMatrix, tol: &Tolerance) -> Result<GammaParameter> {
        let d = self.defect_dim();
        if matrix.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        GammaParameter::new(matrix, tol)
    }

    fn check_gamma(&self, gamma: &GammaParameter) -> Result<()> {
        if gamma.dim() != self.defect_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.defect_dim(),
                found: gamma.dim(),
            });
        }
        Ok(())
    }

    /// `−Γ₂·A·Γ₂*`, the part of the lower-right block that does not depend on
    /// `Γ`.
    fn base_corner(&self) -> CMatrix {
        let g2 = self.gamma2_full();
        -(&g2 * &self.a * g2.adjoint())
    }

    /// `D_{Γ₂*}·Γ·D_{Γ₂*}` in complement coordinates.
    pub fn free_corner(&self, gamma: &CMatrix) -> CMatrix {
        let q = self.defect_gamma2_star.basis();
        &self.d_gamma2_star * q * gamma * q.adjoint() * &self.d_gamma2_star
    }

    fn assemble(&self, lower_right: &CMatrix) -> CMatrix {
        let g2 = self.gamma2_full();
        let lower_left = &g2 * &self.d_a;
        let top = hstack(&self.a, &lower_left.adjoint());
        let bottom = hstack(&lower_left, lower_right);
        self.to_ambient(&vstack(&top, &bottom))
    }

    /// Largest deviation of `WᴴM` from `Γ₂·D_A`.
    pub fn reconstruction_residual(&self) -> f64 {
        let lower = self.complement.basis().adjoint() * self.operator.action();
        op_norm(&(lower - self.gamma2_full() * &self.d_a))
    }
}

/// Extracts `A`, `Γ₂` and the defect data of a symmetric partial contraction.
pub fn parametrize(t: &PartialOperator, tol: &Tolerance) -> Result<ExtensionParametrization> {
    t.ensure_symmetric(tol)?;
    t.ensure_contraction(tol)?;
    let complement = t.domain().complement(tol);
    let a = hermitian_part(&t.compression());
    let lower = complement.basis().adjoint() * t.action();
    let col = ColContraction::new(a.clone(), lower.clone(), tol)?;
    let (d_a, defect_a) = defect_pair(&col.a, tol)?;
    let gamma2_full = solve_on_range(&d_a, &col.c.adjoint(), tol)?.adjoint();
    let gamma2 = &gamma2_full * defect_a.basis();
    let norm = op_norm(&gamma2);
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }
    let (d_gamma2_star, defect_gamma2_star) = defect_pair(&gamma2_full.adjoint(), tol)?;
    let p = ExtensionParametrization {
        operator: t.clone(),
        complement,
        a,
        gamma2,
        d_a,
        defect_a,
        d_gamma2_star,
        defect_gamma2_star,
    };
    let residual = p.reconstruction_residual();
    if residual > tol.compare * op_norm(&lower).max(1.0) {
        return Err(Error::InconsistentFactorization { residual });
    }
    Ok(p)
}

/// The selfadjoint contraction extension `T̃(Γ)` in ambient coordinates.
pub fn extend_contraction(p: &ExtensionParametrization, gamma: &GammaParameter, tol: &Tolerance) -> Result<CMatrix> {
    p.check_gamma(gamma)?;
    let norm = op_norm(gamma.matrix());
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }
    let corner = p.base_corner() + p.free_corner(gamma.matrix());
    Ok(p.assemble(&corner))
}

/// `T̃(I)` or `T̃(−I)`. Computed from the general formula and cross-checked
/// against the closed forms `I − Γ₂(I+A)Γ₂*` and `Γ₂(I−A)Γ₂* − I`.
pub fn extremal(p: &ExtensionParametrization, which: Extremal, tol: &Tolerance) -> Result<CMatrix> {
    let d = p.defect_dim();
    let gamma = match which {
        Extremal::Krein => GammaParameter::krein(d),
        Extremal::Friedrichs => GammaParameter::friedrichs(d),
    };
    let generic = extend_contraction(p, &gamma, tol)?;
    let closed = extremal_closed_form(p, which);
    let residual = op_norm(&(&generic - &closed));
    if residual > tol.compare {
        return Err(Error::CrossCheck(format!(
            "closed-form extremal extension differs from T̃(±I) by {residual:e}"
        )));
    }
    Ok(generic)
}

/// The closed forms of the extremal extensions.
pub fn extremal_closed_form(p: &ExtensionParametrization, which: Extremal) -> CMatrix {
    let m = p.complement.dim();
    let k = p.a.nrows();
    let id_m = CMatrix::identity(m, m);
    let id_k = CMatrix::identity(k, k);
    let g2 = p.gamma2_full();
    let corner = match which {
        Extremal::Krein => &id_m - &g2 * (&id_k + &p.a) * g2.adjoint(),
        Extremal::Friedrichs => &g2 * (&id_k - &p.a) * g2.adjoint() - &id_m,
    };
    p.assemble(&corner)
}

/// The unique `Γ` with `T̃(Γ) = B`, for a selfadjoint contraction `B`
/// extending `T`.
pub fn recover_gamma(p: &ExtensionParametrization, b: &CMatrix, tol: &Tolerance) -> Result<GammaParameter> {
    ensure_finite(b)?;
    let n = p.ambient_dim();
    if b.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.nrows(),
        });
    }
    let asym = op_norm(&(b - b.adjoint()));
    if asym > tol.compare {
        return Err(Error::NotHermitian { residual: asym });
    }
    let ext = extension_residual(p, b);
    if ext > tol.compare * op_norm(p.operator.action()).max(1.0) {
        return Err(Error::NotExtension { residual: ext });
    }
    let norm = op_norm(b);
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }
    let w = p.complement.basis();
    let shifted = w.adjoint() * hermitian_part(b) * w - p.base_corner();
    // D·(QΓQᴴ)·D = shifted, peeled one factor at a time
    let half = solve_on_range(&p.d_gamma2_star, &shifted, tol)?;
    let full = solve_on_range(&p.d_gamma2_star, &half.adjoint(), tol)?;
    let q = p.defect_gamma2_star.basis();
    GammaParameter::new(hermitian_part(&(q.adjoint() * full * q)), tol)
}

/// `‖B·V − M‖`.
fn extension_residual(p: &ExtensionParametrization, b: &CMatrix) -> f64 {
    op_norm(&(b * p.dom_t().basis() - p.operator.action()))
}

/// Decides `B ∈ ℬ(T)` by the requested route. Malformed input yields
/// `false`.
pub fn is_extension_member(p: &ExtensionParametrization, b: &CMatrix, route: MembershipRoute, tol: &Tolerance) -> bool {
    let n = p.ambient_dim();
    if b.shape() != (n, n) || ensure_finite(b).is_err() {
        return false;
    }
    if op_norm(&(b - b.adjoint())) > tol.compare {
        return false;
    }
    match route {
        MembershipRoute::Direct => {
            op_norm(b) <= 1.0 + tol.contraction
                && extension_residual(p, b) <= tol.compare * op_norm(p.operator.action()).max(1.0)
        }
        MembershipRoute::Interval => {
            let (Ok(upper), Ok(lower)) = (
                extremal(p, Extremal::Krein, tol),
                extremal(p, Extremal::Friedrichs, tol),
            ) else {
                return false;
            };
            let b = hermitian_part(b);
            is_psd_relative(&(upper - &b), tol) && is_psd_relative(&(b - lower), tol)
        }
    }
}

/// `[[0, M], [Mᴴ, N]] ≥ 0` decided blockwise: `M = 0` and `N ≥ 0`.
pub fn zero_corner_block_is_psd(m: &CMatrix, n: &CMatrix, tol: &Tolerance) -> bool {
    let scale = op_norm(m).max(op_norm(n)).max(1.0);
    op_norm(m) <= tol.compare * scale && is_psd_relative(n, tol)
}

/// `S̃(Γ) = C⁻¹(T̃(Γ))`.
pub fn extension_relation(
    p: &ExtensionParametrization,
    gamma: &GammaParameter,
    tol: &Tolerance,
) -> Result<SelfadjointRelation> {
    inverse_cayley(&extend_contraction(p, gamma, tol)?, tol)
}

/// Compares two positive selfadjoint relations in the form order.
///
/// The decision is made on the contraction side: `R₁ ≤ R₂` iff
/// `C(R₁) − C(R₂) ≥ 0`. When both relations are everywhere defined the
/// quadratic forms are compared as well, and a disagreement is an error.
pub fn compare_extensions(
    r1: &SelfadjointRelation,
    r2: &SelfadjointRelation,
    tol: &Tolerance,
) -> Result<ExtensionOrder> {
    if r1.ambient_dim() != r2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: r1.ambient_dim(),
            found: r2.ambient_dim(),
        });
    }
    let diff = r1.cayley_image() - r2.cayley_image();
    let order = classify(is_psd_relative(&diff, tol), is_psd_relative(&(-&diff), tol));
    if let (Some(s1), Some(s2)) = (r1.as_operator(), r2.as_operator()) {
        let forms = form_order(&s1, &s2, tol)?;
        if !orders_compatible(order, forms) {
            return Err(Error::CrossCheck(format!(
                "resolvent order {order:?} but quadratic-form order {forms:?}"
            )));
        }
    }
    Ok(order)
}

fn classify(le: bool, ge: bool) -> ExtensionOrder {
    match (le, ge) {
        (true, true) => ExtensionOrder::Equal,
        (true, false) => ExtensionOrder::Le,
        (false, true) => ExtensionOrder::Ge,
        (false, false) => ExtensionOrder::Incomparable,
    }
}

/// Orders agree up to the slack of the two PSD tests: `Equal` on one side is
/// compatible with `Le`/`Ge` on the other.
fn orders_compatible(a: ExtensionOrder, b: ExtensionOrder) -> bool {
    use ExtensionOrder::*;
    matches!(
        (a, b),
        (Equal, _) | (_, Equal) | (Le, Le) | (Ge, Ge) | (Incomparable, Incomparable)
    )
}

/// Form order of two positive matrices, `‖S₁^{1/2}ξ‖ ≤ ‖S₂^{1/2}ξ‖`, tested on
/// the standard basis, the eigenvectors of `S₂ − S₁`, and pairwise sums of
/// those.
fn form_order(s1: &CMatrix, s2: &CMatrix, tol: &Tolerance) -> Result<ExtensionOrder> {
    let n = s1.nrows();
    let root1 = psd_sqrt(s1, tol)?;
    let root2 = psd_sqrt(s2, tol)?;
    let diff_eig = eig_of_hermitian(&hermitian_part(&(s2 - s1)), tol);
    let mut probes: Vec<DVector<Complex64>> = Vec::new();
    for j in 0..n {
        probes.push(DVector::from_fn(n, |i, _| if i == j { c64(1.0) } else { c64(0.0) }));
        probes.push(diff_eig.eigenvectors.column(j).into_owned());
    }
    let count = probes.len();
    for i in 0..count {
        for j in (i + 1)..count {
            let sum = &probes[i] + &probes[j];
            probes.push(sum);
        }
    }
    let scale = op_norm(s1).max(op_norm(s2)).max(1.0);
    let slack = tol.psd * scale;
    let (mut le, mut ge) = (true, true);
    for xi in &probes {
        let norm_sq = xi.norm_squared();
        if norm_sq == 0.0 {
            continue;
        }
        let q1 = (&root1 * xi).norm_squared();
        let q2 = (&root2 * xi).norm_squared();
        if q1 > q2 + slack * norm_sq {
            le = false;
        }
        if q2 > q1 + slack * norm_sq {
            ge = false;
        }
    }
    Ok(classify(le, ge))
}

/// Subspaces entering `dom(S̃(Γ)) = dom(F) + D_{Γ₂*}(I+Γ)D_{Γ₂*}·ker(I+S*)`.
#[derive(Clone, Debug)]
pub struct DomainDecomposition {
    pub dom_friedrichs: Subspace,
    pub correction: Subspace,
    pub dom_gamma: Subspace,
    /// Largest containment residual between the sum and `dom_gamma`.
    pub residual: f64,
    pub verified: bool,
}

pub fn domain_decomposition(
    p: &ExtensionParametrization,
    gamma: &GammaParameter,
    tol: &Tolerance,
) -> Result<DomainDecomposition> {
    let d = p.defect_dim();
    let friedrichs = extension_relation(p, &GammaParameter::friedrichs(d), tol)?;
    let relation = extension_relation(p, gamma, tol)?;
    let shifted = gamma.matrix() + CMatrix::identity(d, d);
    let corner = p.free_corner(&shifted);
    let correction = orthonormal_basis(&(p.complement.basis() * corner), tol)?;
    let dom_friedrichs = friedrichs.domain().clone();
    let dom_gamma = relation.domain().clone();
    let sum = dom_friedrichs.sum(&correction, tol)?;
    let residual = sum
        .containment_residual(&dom_gamma)?
        .max(dom_gamma.containment_residual(&sum)?);
    let verified = subspace_relation(&sum, &dom_gamma, tol)? == SubspaceRelation::Equal;
    Ok(DomainDecomposition {
        dom_friedrichs,
        correction,
        dom_gamma,
        residual,
        verified,
    })
}

/// Residuals of `ran(I+A) ⊆ ran((I+T)*) ⊆ ran((I+A)^{1/2})` inside `dom(T)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RangeInclusions {
    pub first_residual: f64,
    pub second_residual: f64,
    pub holds: bool,
}

pub fn range_inclusions(p: &ExtensionParametrization, tol: &Tolerance) -> Result<RangeInclusions> {
    let k = p.a.nrows();
    let id = CMatrix::identity(k, k);
    let plus_a = &id + &p.a;
    // (I+T)* = [I+A  D_A·Γ₂*] in the (V, W) frame
    let adjoint = hstack(&plus_a, &(&p.d_a * p.gamma2_full().adjoint()));
    let root = psd_sqrt(&plus_a, tol)?;
    let ran_plus_a = orthonormal_basis(&plus_a, tol)?;
    let ran_adjoint = orthonormal_basis(&adjoint, tol)?;
    let ran_root = orthonormal_basis(&root, tol)?;
    let first_residual = ran_plus_a.containment_residual(&ran_adjoint)?;
    let second_residual = ran_adjoint.containment_residual(&ran_root)?;
    let first = matches!(
        subspace_relation(&ran_plus_a, &ran_adjoint, tol)?,
        SubspaceRelation::Equal | SubspaceRelation::UInV
    );
    let second = matches!(
        subspace_relation(&ran_adjoint, &ran_root, tol)?,
        SubspaceRelation::Equal | SubspaceRelation::UInV
    );
    Ok(RangeInclusions {
        first_residual,
        second_residual,
        holds: first && second,
    })
}

/// True iff both range inclusions hold.
pub fn range_inclusion_check(p: &ExtensionParametrization, tol: &Tolerance) -> bool {
    range_inclusions(p, tol).map(|r| r.holds).unwrap_or(false)
}

/// A positive symmetric operator together with the parametrization of its
/// Cayley transform.
#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    s: PartialOperator,
    params: ExtensionParametrization,
}

impl ExtensionProblem {
    pub fn new(s: PartialOperator, tol: &Tolerance) -> Result<Self> {
        let t = cayley_transform(&s, tol)?;
        let params = parametrize(&t, tol)?;
        Ok(Self { s, params })
    }

    pub fn operator(&self) -> &PartialOperator {
        &self.s
    }

    pub fn params(&self) -> &ExtensionParametrization {
        &self.params
    }

    pub fn defect_dim(&self) -> usize {
        self.params.defect_dim()
    }

    pub fn contraction(&self, gamma: &GammaParameter, tol: &Tolerance) -> Result<CMatrix> {
        extend_contraction(&self.params, gamma, tol)
    }

    pub fn relation(&self, gamma: &GammaParameter, tol: &Tolerance) -> Result<SelfadjointRelation> {
        extension_relation(&self.params, gamma, tol)
    }

    pub fn krein(&self, tol: &Tolerance) -> Result<SelfadjointRelation> {
        inverse_cayley(&extremal(&self.params, Extremal::Krein, tol)?, tol)
    }

    pub fn friedrichs(&self, tol: &Tolerance) -> Result<SelfadjointRelation> {
        inverse_cayley(&extremal(&self.params, Extremal::Friedrichs, tol)?, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    const C: f64 = FRAC_1_SQRT_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn reference() -> ExtensionParametrization {
        let t = PartialOperator::new(Subspace::coordinate(2, &[0]), real_matrix(&[&[0.0], &[C]])).unwrap();
        parametrize(&t, &tol()).unwrap()
    }

    fn scalar_gamma(x: f64) -> GammaParameter {
        GammaParameter::new(real_matrix(&[&[x]]), &tol()).unwrap()
    }

    #[test]
    fn parametrize_reference() {
        let p = reference();
        assert!(p.a()[(0, 0)].norm() < 1e-15);
        assert!((p.gamma2()[(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((p.d_a()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((p.d_gamma2_star()[(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(p.defect_dim(), 1);
    }

    #[test]
    fn parametrize_full_domain() {
        let t = PartialOperator::from_matrix(&real_matrix(&[&[0.2, 0.1], &[0.1, -0.4]])).unwrap();
        let p = parametrize(&t, &tol()).unwrap();
        assert_eq!(p.complement().dim(), 0);
        assert_eq!(p.defect_dim(), 0);
        assert!((p.a() - t.action()).norm() < 1e-15);
        let only = extend_contraction(&p, &GammaParameter::neutral(0), &tol()).unwrap();
        assert!((only - t.action()).norm() < 1e-15);
    }

    #[test]
    fn parametrize_unitary_gamma2_has_unique_extension() {
        let t = PartialOperator::new(Subspace::coordinate(2, &[0]), real_matrix(&[&[0.0], &[1.0]])).unwrap();
        let p = parametrize(&t, &tol()).unwrap();
        assert_eq!(p.defect_dim(), 0);
        let k = extremal(&p, Extremal::Krein, &tol()).unwrap();
        let f = extremal(&p, Extremal::Friedrichs, &tol()).unwrap();
        assert!((&k - &f).norm() < 1e-15);
        assert!((k - real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]])).norm() < 1e-15);
    }

    #[test]
    fn parametrize_rejects_bad_operators() {
        let t = PartialOperator::new(Subspace::coordinate(2, &[0]), real_matrix(&[&[0.0], &[1.5]])).unwrap();
        assert!(matches!(parametrize(&t, &tol()), Err(Error::NotContraction { .. })));
        let t = PartialOperator::from_matrix(&real_matrix(&[&[0.0, 0.5], &[0.0, 0.0]])).unwrap();
        assert!(matches!(parametrize(&t, &tol()), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn reference_extensions() {
        // lower-right entry is 0 + (1/√2)·γ·(1/√2) = γ/2
        let p = reference();
        for (g, corner) in [(0.0, 0.0), (1.0, 0.5), (-1.0, -0.5)] {
            let b = extend_contraction(&p, &scalar_gamma(g), &tol()).unwrap();
            assert!((b - real_matrix(&[&[0.0, C], &[C, corner]])).norm() < 1e-14, "γ = {g}");
        }
    }

    #[test]
    fn reference_extremals_and_spectra() {
        let p = reference();
        let k = extremal(&p, Extremal::Krein, &tol()).unwrap();
        let f = extremal(&p, Extremal::Friedrichs, &tol()).unwrap();
        assert!((&k - real_matrix(&[&[0.0, C], &[C, 0.5]])).norm() < 1e-14);
        assert!((&f - real_matrix(&[&[0.0, C], &[C, -0.5]])).norm() < 1e-14);
        // 1 − c²/(1−a) = 1/2 at a = 0; eigenvalues solve λ² − λ/2 − 1/2 = 0
        let ek = eig_of_hermitian(&k, &tol()).eigenvalues;
        assert!((ek[0] + 0.5).abs() < 1e-14 && (ek[1] - 1.0).abs() < 1e-14);
        let ef = eig_of_hermitian(&f, &tol()).eigenvalues;
        assert!((ef[0] + 1.0).abs() < 1e-14 && (ef[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn recover_examples() {
        let p = reference();
        let b = extend_contraction(&p, &GammaParameter::neutral(1), &tol()).unwrap();
        assert!(recover_gamma(&p, &b, &tol()).unwrap().matrix().norm() < 1e-14);

        // 0.25 = γ/2
        let b = real_matrix(&[&[0.0, C], &[C, 0.25]]);
        let g = recover_gamma(&p, &b, &tol()).unwrap();
        assert!((g.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);

        // λ² − 0.6λ − 1/2 = 0 has root 0.3 + √0.59 ≈ 1.068
        let b = real_matrix(&[&[0.0, C], &[C, 0.6]]);
        assert!(matches!(
            recover_gamma(&p, &b, &tol()),
            Err(Error::NotContraction { .. })
        ));

        let b = real_matrix(&[&[0.1, C], &[C, 0.0]]);
        assert!(matches!(recover_gamma(&p, &b, &tol()), Err(Error::NotExtension { .. })));
    }

    #[test]
    fn membership_examples() {
        let p = reference();
        for route in [MembershipRoute::Direct, MembershipRoute::Interval] {
            let b = extend_contraction(&p, &scalar_gamma(0.3), &tol()).unwrap();
            assert!(is_extension_member(&p, &b, route, &tol()));
            let bad = real_matrix(&[&[0.0, C], &[C, 0.6]]);
            assert!(!is_extension_member(&p, &bad, route, &tol()));
            let upper = extremal(&p, Extremal::Krein, &tol()).unwrap();
            assert!(is_extension_member(&p, &upper, route, &tol()));
            let mut pushed = upper.clone();
            pushed[(1, 1)] += c64(0.01);
            assert!(!is_extension_member(&p, &pushed, route, &tol()));
            assert!(!is_extension_member(&p, &CMatrix::zeros(3, 3), route, &tol()));
        }
    }

    #[test]
    fn reference_relations() {
        let p = reference();
        let k = extension_relation(&p, &scalar_gamma(1.0), &tol()).unwrap();
        let expected = real_matrix(&[&[2.0, -SQRT_2], &[-SQRT_2, 1.0]]);
        assert!((k.as_operator().unwrap() - expected).norm() < 1e-12);
        let spec = k.spectrum(&tol());
        assert!(spec.finite[0].abs() < 1e-12 && (spec.finite[1] - 3.0).abs() < 1e-12);

        let f = extension_relation(&p, &scalar_gamma(-1.0), &tol()).unwrap();
        let spec = f.spectrum(&tol());
        assert_eq!(spec.infinity_multiplicity, 1);
        assert!((spec.finite[0] - 1.0 / 3.0).abs() < 1e-12);
        let q = f.domain().basis();
        assert!((q[(0, 0)].re - 0.81650).abs() < 1e-5 && (q[(1, 0)].re - 0.57735).abs() < 1e-5);
    }

    #[test]
    fn compare_examples() {
        let p = reference();
        let k = extension_relation(&p, &scalar_gamma(1.0), &tol()).unwrap();
        let f = extension_relation(&p, &scalar_gamma(-1.0), &tol()).unwrap();
        assert_eq!(compare_extensions(&k, &k, &tol()).unwrap(), ExtensionOrder::Equal);
        assert_eq!(compare_extensions(&k, &f, &tol()).unwrap(), ExtensionOrder::Le);
        assert_eq!(compare_extensions(&f, &k, &tol()).unwrap(), ExtensionOrder::Ge);

        let r1 = inverse_cayley(&real_matrix(&[&[0.5, 0.0], &[0.0, 0.0]]), &tol()).unwrap();
        let r2 = inverse_cayley(&real_matrix(&[&[0.0, 0.0], &[0.0, 0.5]]), &tol()).unwrap();
        assert_eq!(
            compare_extensions(&r1, &r2, &tol()).unwrap(),
            ExtensionOrder::Incomparable
        );
    }

    #[test]
    fn domain_decomposition_examples() {
        let p = reference();
        let dd = domain_decomposition(&p, &GammaParameter::friedrichs(1), &tol()).unwrap();
        assert_eq!(dd.correction.dim(), 0);
        assert_eq!(dd.dom_gamma.dim(), dd.dom_friedrichs.dim());
        assert!(dd.verified);

        // D(I+Γ)D = 2·0.5 = 1 on the complement
        let dd = domain_decomposition(&p, &GammaParameter::krein(1), &tol()).unwrap();
        assert_eq!(dd.correction.dim(), 1);
        assert_eq!(
            subspace_relation(&dd.correction, p.complement(), &tol()).unwrap(),
            SubspaceRelation::Equal
        );
        assert_eq!(dd.dom_gamma.dim(), 2);
        assert!(dd.verified);

        let t = PartialOperator::new(Subspace::coordinate(2, &[0]), real_matrix(&[&[0.0], &[1.0]])).unwrap();
        let p = parametrize(&t, &tol()).unwrap();
        let dd = domain_decomposition(&p, &GammaParameter::neutral(0), &tol()).unwrap();
        assert_eq!(dd.correction.dim(), 0);
        assert!(dd.verified);
    }

    #[test]
    fn range_inclusion_examples() {
        let p = reference();
        let r = range_inclusions(&p, &tol()).unwrap();
        assert!(r.holds);

        let t = PartialOperator::from_matrix(&real_matrix(&[&[-1.0]])).unwrap();
        let p = parametrize(&t, &tol()).unwrap();
        assert!(range_inclusion_check(&p, &tol()));
    }

    #[test]
    fn block_criterion_examples() {
        let zero = CMatrix::zeros(1, 1);
        assert!(zero_corner_block_is_psd(&zero, &real_matrix(&[&[1.0]]), &tol()));
        assert!(!zero_corner_block_is_psd(
            &real_matrix(&[&[0.1]]),
            &real_matrix(&[&[1.0]]),
            &tol()
        ));
        assert!(!zero_corner_block_is_psd(&zero, &real_matrix(&[&[-1.0]]), &tol()));
    }

    #[test]
    fn gamma_validation() {
        let p = reference();
        assert!(p.gamma(real_matrix(&[&[0.2]]), &tol()).is_ok());
        assert!(matches!(
            p.gamma(real_matrix(&[&[1.2]]), &tol()),
            Err(Error::NotContraction { .. })
        ));
        assert!(matches!(
            p.gamma(CMatrix::zeros(2, 2), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            GammaParameter::new(real_matrix(&[&[0.0, 0.5], &[0.0, 0.0]]), &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn problem_from_positive_operator() {
        let s =
            PartialOperator::from_spanning_set(&real_matrix(&[&[1.0], &[C]]), &real_matrix(&[&[1.0], &[-C]]), &tol())
                .unwrap();
        let prob = ExtensionProblem::new(s.clone(), &tol()).unwrap();
        assert_eq!(prob.defect_dim(), 1);
        let k = prob.krein(&tol()).unwrap();
        assert!(k.graph_residual(&s).unwrap() < 1e-12);
        let f = prob.friedrichs(&tol()).unwrap();
        assert!(f.graph_residual(&s).unwrap() < 1e-12);
    }
}
