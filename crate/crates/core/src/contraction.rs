//! Completion of 2×2 block contractions.
//!
//! Two facts drive everything here. An upper triangular block operator
//! `[[T₁, X], [0, T₂]]` is a contraction exactly when `T₁`, `T₂` are and
//! `X = D_{T₁*}·C·D_{T₂}` for a contraction `C` between defect spaces. And
//! given a row `[A B]` and a column `[A; C]` that are both contractions, the
//! contractive completions `[[A, B], [C, X]]` are in bijection with the
//! contractions `Γ: 𝒟_{Γ₁} → 𝒟_{Γ₂*}` via
//!
//! ```text
//! X = −Γ₂·A*·Γ₁ + D_{Γ₂*}·Γ·D_{Γ₁}
//! ```
//!
//! where `B = D_{A*}·Γ₁` and `C = Γ₂·D_A`.
//!
//! Parameters that live on defect spaces (`Γ₁`, `Γ₂`, `Γ`, `C`) are stored
//! in the coordinates of the defect-space bases, so their matrices are as
//! small as the spaces themselves and zero-dimensional spaces give empty maps.

use crate::error::{Error, Result};
use crate::linalg::{defect_pair, ensure_finite, op_norm, solve_on_range, CMatrix, Subspace, Tolerance};

/// A row `[A B]` with `‖[A B]‖ ≤ 1`.
#[derive(Clone, Debug)]
pub struct RowContraction {
    pub a: CMatrix,
    pub b: CMatrix,
}

/// A column `[A; C]` with `‖[A; C]‖ ≤ 1`.
#[derive(Clone, Debug)]
pub struct ColContraction {
    pub a: CMatrix,
    pub c: CMatrix,
}

impl RowContraction {
    pub fn new(a: CMatrix, b: CMatrix, tol: &Tolerance) -> Result<Self> {
        ensure_finite(&a)?;
        ensure_finite(&b)?;
        if a.nrows() != b.nrows() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: b.nrows(),
            });
        }
        let norm = op_norm(&hstack(&a, &b));
        if norm > 1.0 + tol.contraction {
            return Err(Error::NotContraction { norm });
        }
        Ok(Self { a, b })
    }
}

impl ColContraction {
    pub fn new(a: CMatrix, c: CMatrix, tol: &Tolerance) -> Result<Self> {
        ensure_finite(&a)?;
        ensure_finite(&c)?;
        if a.ncols() != c.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.ncols(),
                found: c.ncols(),
            });
        }
        let norm = op_norm(&vstack(&a, &c));
        if norm > 1.0 + tol.contraction {
            return Err(Error::NotContraction { norm });
        }
        Ok(Self { a, c })
    }
}

/// `C` in `X = D_{T₁*}·C·D_{T₂}`, in defect-basis coordinates.
#[derive(Clone, Debug)]
pub struct OffDiagonalFactor {
    /// `dim 𝒟_{T₁*} × dim 𝒟_{T₂}`.
    pub contraction: CMatrix,
    /// Basis of `𝒟_{T₁*}`.
    pub range_defect: Subspace,
    /// Basis of `𝒟_{T₂}`.
    pub domain_defect: Subspace,
}

impl OffDiagonalFactor {
    /// `C` as a map between the ambient spaces (zero off the defect spaces).
    pub fn embedded(&self) -> CMatrix {
        self.range_defect.basis() * &self.contraction * self.domain_defect.basis().adjoint()
    }
}

/// Factors the off-diagonal block of a triangular contraction through the
/// defect operators of the diagonal blocks.
pub fn factor_offdiag(t1: &CMatrix, x: &CMatrix, t2: &CMatrix, tol: &Tolerance) -> Result<OffDiagonalFactor> {
    for m in [t1, x, t2] {
        ensure_finite(m)?;
    }
    if x.nrows() != t1.nrows() {
        return Err(Error::DimensionMismatch {
            expected: t1.nrows(),
            found: x.nrows(),
        });
    }
    if x.ncols() != t2.ncols() {
        return Err(Error::DimensionMismatch {
            expected: t2.ncols(),
            found: x.ncols(),
        });
    }
    let mut block = CMatrix::zeros(t1.nrows() + t2.nrows(), t1.ncols() + t2.ncols());
    block.view_mut((0, 0), t1.shape()).copy_from(t1);
    block.view_mut((0, t1.ncols()), x.shape()).copy_from(x);
    block.view_mut((t1.nrows(), t1.ncols()), t2.shape()).copy_from(t2);
    let norm = op_norm(&block);
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }

    let (d_left, range_defect) = defect_pair(&t1.adjoint(), tol)?;
    let (d_right, domain_defect) = defect_pair(t2, tol)?;
    // D_{T₁*}·Y = X, then D_{T₂}·Cᴴ = Yᴴ
    let y = solve_on_range(&d_left, x, tol)?;
    let c_full = solve_on_range(&d_right, &y.adjoint(), tol)?.adjoint();
    let contraction = range_defect.basis().adjoint() * c_full * domain_defect.basis();
    let norm = op_norm(&contraction);
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }
    Ok(OffDiagonalFactor {
        contraction,
        range_defect,
        domain_defect,
    })
}

/// Everything needed to write down the contractive completions of a row and
/// a column sharing the corner `A`.
#[derive(Clone, Debug)]
pub struct CornerData {
    pub a: CMatrix,
    /// `Γ₁: ℂᵐ → 𝒟_{A*}`, as `dim 𝒟_{A*} × m`.
    pub gamma1: CMatrix,
    /// `Γ₂: 𝒟_A → ℂʳ`, as `r × dim 𝒟_A`.
    pub gamma2: CMatrix,
    pub d_a: CMatrix,
    pub d_a_star: CMatrix,
    pub d_gamma1: CMatrix,
    pub d_gamma2_star: CMatrix,
    pub defect_a: Subspace,
    pub defect_a_star: Subspace,
    pub defect_gamma1: Subspace,
    pub defect_gamma2_star: Subspace,
}

impl CornerData {
    /// `Γ₁` as a map `ℂᵐ → ℂᵖ`.
    pub fn gamma1_full(&self) -> CMatrix {
        self.defect_a_star.basis() * &self.gamma1
    }

    /// `Γ₂` as a map `ℂ^q → ℂʳ`, vanishing on `ker D_A`.
    pub fn gamma2_full(&self) -> CMatrix {
        &self.gamma2 * self.defect_a.basis().adjoint()
    }

    /// Shape `(dim 𝒟_{Γ₂*}, dim 𝒟_{Γ₁})` of admissible parameters `Γ`.
    pub fn parameter_shape(&self) -> (usize, usize) {
        (self.defect_gamma2_star.dim(), self.defect_gamma1.dim())
    }

    /// `B = D_{A*}·Γ₁`.
    pub fn upper_right(&self) -> CMatrix {
        &self.d_a_star * self.gamma1_full()
    }

    /// `C = Γ₂·D_A`.
    pub fn lower_left(&self) -> CMatrix {
        self.gamma2_full() * &self.d_a
    }
}

/// Extracts the unique `Γ₁`, `Γ₂` with `B = D_{A*}Γ₁` and `C = Γ₂D_A`.
pub fn extract_gammas(row: &RowContraction, col: &ColContraction, tol: &Tolerance) -> Result<CornerData> {
    if row.a.shape() != col.a.shape() || (&row.a - &col.a).norm() > tol.compare * row.a.norm().max(1.0) {
        return Err(Error::Precondition(
            "row and column contractions must share the corner block".into(),
        ));
    }
    let a = row.a.clone();
    let (d_a, defect_a) = defect_pair(&a, tol)?;
    let (d_a_star, defect_a_star) = defect_pair(&a.adjoint(), tol)?;

    let gamma1_full = solve_on_range(&d_a_star, &row.b, tol)?;
    let gamma2_full = solve_on_range(&d_a, &col.c.adjoint(), tol)?.adjoint();
    let gamma1 = defect_a_star.basis().adjoint() * &gamma1_full;
    let gamma2 = &gamma2_full * defect_a.basis();
    for g in [&gamma1, &gamma2] {
        let norm = op_norm(g);
        if norm > 1.0 + tol.contraction {
            return Err(Error::NotContraction { norm });
        }
    }
    let (d_gamma1, defect_gamma1) = defect_pair(&gamma1_full, tol)?;
    let (d_gamma2_star, defect_gamma2_star) = defect_pair(&gamma2_full.adjoint(), tol)?;
    Ok(CornerData {
        a,
        gamma1,
        gamma2,
        d_a,
        d_a_star,
        d_gamma1,
        d_gamma2_star,
        defect_a,
        defect_a_star,
        defect_gamma1,
        defect_gamma2_star,
    })
}

/// The completion `T(Γ)` of the corner data for a contraction
/// `Γ: 𝒟_{Γ₁} → 𝒟_{Γ₂*}` given in defect-basis coordinates.
pub fn complete_corner(corner: &CornerData, gamma: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    ensure_finite(gamma)?;
    let shape = corner.parameter_shape();
    if gamma.shape() != shape {
        return Err(Error::DimensionMismatch {
            expected: shape.0 * shape.1,
            found: gamma.nrows() * gamma.ncols(),
        });
    }
    let norm = op_norm(gamma);
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }
    let g1 = corner.gamma1_full();
    let g2 = corner.gamma2_full();
    let free = corner.defect_gamma2_star.basis() * gamma * corner.defect_gamma1.basis().adjoint();
    let x = -(&g2 * corner.a.adjoint() * &g1) + &corner.d_gamma2_star * free * &corner.d_gamma1;
    let top = hstack(&corner.a, &corner.upper_right());
    let bottom = hstack(&corner.lower_left(), &x);
    Ok(vstack(&top, &bottom))
}

pub(crate) fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

pub(crate) fn vstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.rows_mut(0, a.nrows()).copy_from(a);
    out.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, real_matrix};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn scalar(x: f64) -> CMatrix {
        real_matrix(&[&[x]])
    }

    #[test]
    fn factor_with_zero_diagonal_is_identity_map() {
        let x = real_matrix(&[&[0.3, -0.2], &[0.1, 0.4]]);
        let f = factor_offdiag(&CMatrix::zeros(2, 2), &x, &CMatrix::zeros(2, 2), &tol()).unwrap();
        assert!((f.embedded() - &x).norm() < 1e-14);
    }

    #[test]
    fn factor_through_zero_dimensional_defect() {
        let f = factor_offdiag(&scalar(1.0), &scalar(0.0), &scalar(0.0), &tol()).unwrap();
        assert_eq!(f.contraction.shape(), (0, 1));
        assert_eq!(f.range_defect.dim(), 0);
    }

    #[test]
    fn factor_scalar_boundary_case() {
        // D = √(1 − 0.36) = 0.8 on both sides, 0.8·c·0.8 = 0.64
        let f = factor_offdiag(&scalar(0.6), &scalar(0.64), &scalar(0.6), &tol()).unwrap();
        assert!((f.contraction[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factor_rejects_non_contraction() {
        let err = factor_offdiag(&scalar(0.6), &scalar(0.9), &scalar(0.6), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotContraction { .. }));
    }

    #[test]
    fn extract_scalar_gammas() {
        let row = RowContraction::new(scalar(0.0), scalar(0.3), &tol()).unwrap();
        let col = ColContraction::new(scalar(0.0), scalar(FRAC_1_SQRT_2), &tol()).unwrap();
        let corner = extract_gammas(&row, &col, &tol()).unwrap();
        assert!((corner.gamma1[(0, 0)].re - 0.3).abs() < 1e-15);
        assert!((corner.gamma2[(0, 0)].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn extract_on_isometric_corner_gives_empty_maps() {
        let row = RowContraction::new(scalar(1.0), scalar(0.0), &tol()).unwrap();
        let col = ColContraction::new(scalar(1.0), scalar(0.0), &tol()).unwrap();
        let corner = extract_gammas(&row, &col, &tol()).unwrap();
        assert_eq!(corner.gamma1.shape(), (0, 1));
        assert_eq!(corner.gamma2.shape(), (1, 0));
        assert_eq!(corner.parameter_shape(), (1, 1));
    }

    #[test]
    fn extract_requires_shared_corner() {
        let row = RowContraction::new(scalar(0.0), scalar(0.3), &tol()).unwrap();
        let col = ColContraction::new(scalar(0.5), scalar(0.3), &tol()).unwrap();
        assert!(matches!(
            extract_gammas(&row, &col, &tol()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn row_constructor_checks_norm() {
        assert!(RowContraction::new(scalar(0.8), scalar(0.8), &tol()).is_err());
    }

    #[test]
    fn complete_with_identity_defects() {
        let row = RowContraction::new(scalar(0.0), scalar(0.0), &tol()).unwrap();
        let col = ColContraction::new(scalar(0.0), scalar(0.0), &tol()).unwrap();
        let corner = extract_gammas(&row, &col, &tol()).unwrap();
        let t = complete_corner(&corner, &scalar(-0.4), &tol()).unwrap();
        assert!((t - real_matrix(&[&[0.0, 0.0], &[0.0, -0.4]])).norm() < 1e-15);
    }

    #[test]
    fn complete_unitary_corner_is_unique() {
        let row = RowContraction::new(scalar(0.0), scalar(1.0), &tol()).unwrap();
        let col = ColContraction::new(scalar(0.0), scalar(1.0), &tol()).unwrap();
        let corner = extract_gammas(&row, &col, &tol()).unwrap();
        assert_eq!(corner.parameter_shape(), (0, 0));
        let t = complete_corner(&corner, &CMatrix::zeros(0, 0), &tol()).unwrap();
        assert!((t - real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]])).norm() < 1e-15);
    }

    #[test]
    fn complete_half_defect_corner() {
        // D_{Γ₂*} = D_{Γ₁} = 1/√2, so the free entry is 0.5·γ
        let c = FRAC_1_SQRT_2;
        let row = RowContraction::new(scalar(0.0), scalar(c), &tol()).unwrap();
        let col = ColContraction::new(scalar(0.0), scalar(c), &tol()).unwrap();
        let corner = extract_gammas(&row, &col, &tol()).unwrap();
        let t = complete_corner(&corner, &scalar(1.0), &tol()).unwrap();
        assert!((t - real_matrix(&[&[0.0, c], &[c, 0.5]])).norm() < 1e-14);
        assert!(matches!(
            complete_corner(&corner, &scalar(1.2), &tol()),
            Err(Error::NotContraction { .. })
        ));
        assert!(complete_corner(&corner, &CMatrix::zeros(2, 2), &tol()).is_err());
    }

    #[test]
    fn complex_entries_survive_completion() {
        let b = CMatrix::from_element(1, 1, Complex64::new(0.0, 0.5));
        let row = RowContraction::new(scalar(0.0), b.clone(), &tol()).unwrap();
        let col = ColContraction::new(scalar(0.0), b.adjoint(), &tol()).unwrap();
        let corner = extract_gammas(&row, &col, &tol()).unwrap();
        let t = complete_corner(&corner, &scalar(0.0), &tol()).unwrap();
        assert!((t[(0, 1)] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((t[(1, 0)] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert_eq!(t[(1, 1)], c64(0.0));
    }
}
