//! Dense complex matrix kernel.
//!
//! Every operator in this crate lives on a small complex Hilbert space `ℂⁿ`
//! and is stored as a dense [`CMatrix`]. Closed subspaces are stored as
//! orthonormal bases ([`Subspace`]); projections are derived on demand.
//!
//! Bases returned from this module are canonical: they depend only on the
//! subspace (up to roundoff), not on the spanning set that produced it. This
//! keeps defect-space coordinates reproducible across runs and platforms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative gap below which eigenvalues are treated as one degenerate cluster
/// when canonicalizing eigenvectors.
const CLUSTER_REL: f64 = 1e-12;

/// Numerical thresholds shared by every operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerance {
    /// Orthonormality residual accepted for subspace bases.
    pub ortho: f64,
    /// Relative singular/eigenvalue cutoff for rank decisions.
    pub rank_rel: f64,
    /// Negative eigenvalue slack accepted in PSD decisions.
    pub psd: f64,
    /// Excess over norm 1 accepted in contraction decisions.
    pub contraction: f64,
    /// Residual bound for equality checks.
    pub compare: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            ortho: 1e-10,
            rank_rel: 1e-8,
            psd: 1e-9,
            contraction: 1e-9,
            compare: 1e-8,
        }
    }
}

impl Tolerance {
    /// Tighter thresholds, for well-conditioned problems.
    pub fn strict() -> Self {
        Self {
            ortho: 1e-12,
            rank_rel: 1e-10,
            psd: 1e-11,
            contraction: 1e-11,
            compare: 1e-10,
        }
    }

    /// Looser thresholds, for inputs typed by hand with few digits.
    pub fn loose() -> Self {
        Self {
            ortho: 1e-8,
            rank_rel: 1e-6,
            psd: 1e-7,
            contraction: 1e-7,
            compare: 1e-6,
        }
    }

    /// Looks up a named profile: `default`, `strict` or `loose`.
    pub fn profile(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "default" | "" => Some(Self::default()),
            "strict" => Some(Self::strict()),
            "loose" => Some(Self::loose()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("ortho", self.ortho),
            ("rank_rel", self.rank_rel),
            ("psd", self.psd),
            ("contraction", self.contraction),
            ("compare", self.compare),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Precondition(format!(
                    "tolerance field `{name}` must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// A closed subspace of `ℂⁿ`, stored as an `n × k` matrix with orthonormal
/// columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal. Fails if `basisᴴbasis`
    /// deviates from the identity by more than `tol.ortho`.
    pub fn from_orthonormal(basis: CMatrix, tol: &Tolerance) -> Result<Self> {
        ensure_finite(&basis)?;
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let residual = if k == 0 {
            0.0
        } else {
            op_norm(&(gram - CMatrix::identity(k, k)))
        };
        if residual > tol.ortho {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Self { basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let mut basis = CMatrix::zeros(ambient_dim, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            basis[(i, j)] = c64(1.0);
        }
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> CMatrix {
        self.basis
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal complement in the ambient space.
    pub fn complement(&self, tol: &Tolerance) -> Self {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            return Self::full(n);
        }
        if self.dim() == n {
            return Self::zero(n);
        }
        let residual = CMatrix::identity(n, n) - self.projector();
        Self {
            basis: canonical_basis_of_projector(&residual, n - self.dim(), tol),
        }
    }

    /// Closure of the sum `self + other`.
    pub fn sum(&self, other: &Subspace, tol: &Tolerance) -> Result<Self> {
        check_same_ambient(self, other)?;
        let mut cols = CMatrix::zeros(self.ambient_dim(), self.dim() + other.dim());
        cols.columns_mut(0, self.dim()).copy_from(&self.basis);
        cols.columns_mut(self.dim(), other.dim()).copy_from(&other.basis);
        orthonormal_basis(&cols, tol)
    }

    /// Image of this subspace under the linear map `map`.
    pub fn image(&self, map: &CMatrix, tol: &Tolerance) -> Result<Self> {
        if map.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: map.ncols(),
            });
        }
        orthonormal_basis(&(map * &self.basis), tol)
    }

    /// Largest residual `‖(I − P_other)·basis‖`; zero means `self ⊆ other`.
    pub fn containment_residual(&self, other: &Subspace) -> Result<f64> {
        check_same_ambient(self, other)?;
        if self.dim() == 0 {
            return Ok(0.0);
        }
        let coeffs = other.basis.adjoint() * &self.basis;
        let resid = &self.basis - &other.basis * coeffs;
        Ok(op_norm(&resid))
    }
}

/// Outcome of comparing two subspaces by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceRelation {
    Equal,
    UInV,
    VInU,
    Incomparable,
}

/// Hermitian eigendecomposition with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Reassembles `V·diag(f(λ))·Vᴴ`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let n = self.eigenvectors.nrows();
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let s = f(lambda);
            scaled.column_mut(j).scale_mut(s);
        }
        let out = scaled * self.eigenvectors.adjoint();
        debug_assert_eq!(out.nrows(), n);
        hermitian_part(&out)
    }

    /// Eigenvectors whose eigenvalue satisfies `keep`, as columns.
    pub fn select<F: Fn(f64) -> bool>(&self, keep: F) -> CMatrix {
        let idx: Vec<usize> = self
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| keep(l))
            .map(|(i, _)| i)
            .collect();
        self.eigenvectors.select_columns(&idx)
    }
}

pub fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Embeds a real matrix given by rows.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(nrows, ncols, |i, j| c64(rows[i][j]))
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// `(M + Mᴴ)/2`, exactly Hermitian in floating point.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Spectral norm (largest singular value). Zero for empty matrices.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank cutoff `rel × largest`, with the zero matrix special-cased to rank 0.
pub(crate) fn rank_cutoff(largest: f64, tol: &Tolerance) -> f64 {
    if largest <= f64::MIN_POSITIVE {
        f64::INFINITY
    } else {
        tol.rank_rel * largest
    }
}

/// Orthonormal basis of the numerical column space of `columns`.
pub fn orthonormal_basis(columns: &CMatrix, tol: &Tolerance) -> Result<Subspace> {
    ensure_finite(columns)?;
    let n = columns.nrows();
    if columns.ncols() == 0 || n == 0 {
        return Ok(Subspace::zero(n));
    }
    let svd = columns.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sv = &svd.singular_values;
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let cutoff = rank_cutoff(largest, tol);
    let idx: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > cutoff).collect();
    if idx.is_empty() {
        return Ok(Subspace::zero(n));
    }
    let kept = u.select_columns(&idx);
    let projector = &kept * kept.adjoint();
    Ok(Subspace {
        basis: canonical_basis_of_projector(&projector, idx.len(), tol),
    })
}

/// Canonical orthonormal basis for the range of an orthogonal projector of
/// known rank: column-pivoted Gram–Schmidt on the projector's columns, each
/// vector phase-normalized so its largest entry is real and positive.
fn canonical_basis_of_projector(projector: &CMatrix, rank: usize, _tol: &Tolerance) -> CMatrix {
    let n = projector.nrows();
    let mut work = projector.clone();
    let mut basis = CMatrix::zeros(n, rank);
    for j in 0..rank {
        let mut best = 0;
        let mut best_norm = -1.0;
        for c in 0..n {
            let norm = work.column(c).norm();
            if norm > best_norm * (1.0 + 1e-10) {
                best = c;
                best_norm = norm;
            }
        }
        let mut v = work.column(best).into_owned();
        // second pass against already chosen vectors
        for i in 0..j {
            let bi = basis.column(i);
            let coeff = bi.dotc(&v);
            v -= bi * coeff;
        }
        let norm = v.norm();
        v /= c64(norm);
        normalize_phase(&mut v);
        basis.set_column(j, &v);
        for c in 0..n {
            let coeff = v.dotc(&work.column(c));
            let update = &v * coeff;
            let mut col = work.column_mut(c);
            col -= update;
        }
    }
    basis
}

fn normalize_phase(v: &mut nalgebra::DVector<Complex64>) {
    let mut pivot = Complex64::new(0.0, 0.0);
    let mut best = 0.0;
    for z in v.iter() {
        let a = z.norm();
        if a > best * (1.0 + 1e-10) {
            best = a;
            pivot = *z;
        }
    }
    if best > 0.0 {
        let phase = pivot.conj() / best;
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Hermitian eigendecomposition, eigenvalues ascending.
///
/// The input is symmetrized as `(M + Mᴴ)/2` after checking
/// `‖M − Mᴴ‖ ≤ tol.compare`. Eigenvectors inside a degenerate cluster are
/// replaced by the canonical basis of the cluster's eigenspace, so the output
/// does not depend on the solver's arbitrary choice within a cluster.
pub fn hermitian_eig(m: &CMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let asym = op_norm(&(m - m.adjoint()));
    if asym > tol.compare * m.norm().max(1.0) {
        return Err(Error::NotHermitian { residual: asym });
    }
    Ok(eig_of_hermitian(&hermitian_part(m), tol))
}

pub(crate) fn eig_of_hermitian(h: &CMatrix, tol: &Tolerance) -> HermitianEigen {
    let n = h.nrows();
    if n == 0 {
        return HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
        };
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = eig.eigenvectors.select_columns(&order);

    let scale = eigenvalues.iter().fold(0.0_f64, |acc, l| acc.max(l.abs())).max(1.0);
    let gap = CLUSTER_REL * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= gap {
            end += 1;
        }
        let width = end - start;
        let block = eigenvectors.columns(start, width).into_owned();
        let canonical = if width == 1 {
            let mut v = block.column(0).into_owned();
            normalize_phase(&mut v);
            CMatrix::from_columns(&[v])
        } else {
            canonical_basis_of_projector(&(&block * block.adjoint()), width, tol)
        };
        eigenvectors.columns_mut(start, width).copy_from(&canonical);
        start = end;
    }
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Square root of a Hermitian PSD matrix. Eigenvalues in `[−tol.psd, 0)` are
/// clamped to zero; anything more negative is rejected.
pub fn psd_sqrt(m: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    let eig = hermitian_eig(m, tol)?;
    if eig.min() < -tol.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.map(|l| l.max(0.0).sqrt()))
}

/// Defect operator `D_C = (I − CᴴC)^{1/2}` and defect space `closure(ran D_C)`.
pub fn defect_pair(c: &CMatrix, tol: &Tolerance) -> Result<(CMatrix, Subspace)> {
    ensure_finite(c)?;
    let norm = op_norm(c);
    if norm > 1.0 + tol.contraction {
        return Err(Error::NotContraction { norm });
    }
    let q = c.ncols();
    let gram = hermitian_part(&(CMatrix::identity(q, q) - c.adjoint() * c));
    // Eigenvalues of I − CᴴC can dip below zero by up to 2·tol.contraction
    // for admissible C; those are clamped.
    let eig = eig_of_hermitian(&gram, tol);
    let d = eig.map(|l| l.max(0.0).sqrt());
    let space = defect_space(&eig, tol);
    Ok((d, space))
}

/// Range of `D` given the eigendecomposition of `D²`. `D ≤ I`, so the rank
/// cutoff is taken relative to `max(‖D‖, 1)`.
fn defect_space(gram_eig: &HermitianEigen, tol: &Tolerance) -> Subspace {
    let n = gram_eig.eigenvectors.nrows();
    let sigma_max = gram_eig.max().max(0.0).sqrt();
    let cutoff = tol.rank_rel * sigma_max.max(1.0);
    let kept = gram_eig.select(|l| l.max(0.0).sqrt() > cutoff);
    if kept.ncols() == 0 {
        return Subspace::zero(n);
    }
    let projector = &kept * kept.adjoint();
    Subspace {
        basis: canonical_basis_of_projector(&projector, kept.ncols(), tol),
    }
}

/// Unique solution `G` of `D·G = X` with the columns of `G` in `ran D`.
pub fn solve_on_range(d: &CMatrix, x: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    ensure_square(d)?;
    ensure_finite(x)?;
    if x.nrows() != d.nrows() {
        return Err(Error::DimensionMismatch {
            expected: d.nrows(),
            found: x.nrows(),
        });
    }
    let eig = hermitian_eig(d, tol)?;
    if eig.min() < -tol.psd * eig.max().abs().max(1.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    let cutoff = rank_cutoff(eig.max(), tol);
    let pinv = eig.map(|l| if l > cutoff { 1.0 / l } else { 0.0 });
    let g = pinv * x;
    let residual = op_norm(&(d * &g - x));
    if residual > tol.compare * op_norm(x).max(1.0) {
        return Err(Error::InconsistentFactorization { residual });
    }
    Ok(g)
}

/// Decides inclusion between two subspaces of the same ambient space.
pub fn subspace_relation(u: &Subspace, v: &Subspace, tol: &Tolerance) -> Result<SubspaceRelation> {
    let u_in_v = u.containment_residual(v)? <= tol.compare;
    let v_in_u = v.containment_residual(u)? <= tol.compare;
    Ok(match (u_in_v, v_in_u) {
        (true, true) => SubspaceRelation::Equal,
        (true, false) => SubspaceRelation::UInV,
        (false, true) => SubspaceRelation::VInU,
        (false, false) => SubspaceRelation::Incomparable,
    })
}

fn check_same_ambient(u: &Subspace, v: &Subspace) -> Result<()> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: u.ambient_dim(),
            found: v.ambient_dim(),
        });
    }
    Ok(())
}

/// Smallest eigenvalue of the Hermitian part, for PSD decisions with a
/// caller-chosen slack.
pub fn min_eigenvalue(m: &CMatrix, tol: &Tolerance) -> f64 {
    eig_of_hermitian(&hermitian_part(m), tol).min()
}

/// `λ_min(M) ≥ −tol.psd·max(1, ‖M‖)`.
pub fn is_psd_relative(m: &CMatrix, tol: &Tolerance) -> bool {
    let h = hermitian_part(m);
    let eig = eig_of_hermitian(&h, tol);
    let scale = eig.max().abs().max(eig.min().abs()).max(1.0);
    eig.min() >= -tol.psd * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn close(a: &CMatrix, b: &CMatrix, eps: f64) -> bool {
        a.shape() == b.shape() && (a - b).norm() <= eps
    }

    #[test]
    fn basis_of_unit_vector() {
        let s = orthonormal_basis(&real_matrix(&[&[1.0], &[0.0]]), &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(close(s.basis(), &real_matrix(&[&[1.0], &[0.0]]), 1e-15));
    }

    #[test]
    fn proportional_columns_have_rank_one() {
        let s = orthonormal_basis(&real_matrix(&[&[1.0, 2.0], &[0.0, 0.0]]), &tol()).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(
            subspace_relation(&s, &Subspace::coordinate(2, &[0]), &tol()).unwrap(),
            SubspaceRelation::Equal
        );
    }

    #[test]
    fn hadamard_columns_span_plane() {
        let s = orthonormal_basis(&real_matrix(&[&[1.0, 1.0], &[1.0, -1.0]]), &tol()).unwrap();
        assert_eq!(s.dim(), 2);
        let gram = s.basis().adjoint() * s.basis();
        assert!(close(&gram, &CMatrix::identity(2, 2), 1e-12));
    }

    #[test]
    fn non_finite_columns_rejected() {
        let m = real_matrix(&[&[f64::NAN]]);
        assert!(matches!(orthonormal_basis(&m, &tol()), Err(Error::NonFinite)));
    }

    #[test]
    fn zero_columns_give_zero_subspace() {
        let s = orthonormal_basis(&CMatrix::zeros(3, 2), &tol()).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.ambient_dim(), 3);
    }

    #[test]
    fn eig_of_identity_and_diagonal() {
        let e = hermitian_eig(&CMatrix::identity(2, 2), &tol()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        assert!(close(&e.eigenvectors, &CMatrix::identity(2, 2), 1e-15));
        let e = hermitian_eig(&real_matrix(&[&[3.0, 0.0], &[0.0, 1.0]]), &tol()).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn eig_of_swap() {
        // characteristic polynomial λ² − 1
        let m = real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eig(&m, &tol()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        let recon = e.map(|l| l);
        assert!(close(&recon, &m, 1e-14));
    }

    #[test]
    fn eig_rejects_non_hermitian_and_non_square() {
        let m = real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&m, &tol()), Err(Error::NotHermitian { .. })));
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&m, &tol()), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn sqrt_examples() {
        assert!(close(
            &psd_sqrt(&CMatrix::identity(3, 3), &tol()).unwrap(),
            &CMatrix::identity(3, 3),
            1e-15
        ));
        assert!(close(
            &psd_sqrt(&CMatrix::zeros(2, 2), &tol()).unwrap(),
            &CMatrix::zeros(2, 2),
            1e-15
        ));
        let r = psd_sqrt(&real_matrix(&[&[4.0, 0.0], &[0.0, 0.25]]), &tol()).unwrap();
        assert!(close(&r, &real_matrix(&[&[2.0, 0.0], &[0.0, 0.5]]), 1e-14));
    }

    #[test]
    fn sqrt_clamps_roundoff_and_rejects_negative() {
        let r = psd_sqrt(&real_matrix(&[&[-1e-12]]), &tol()).unwrap();
        assert_eq!(r[(0, 0)], c64(0.0));
        assert!(matches!(
            psd_sqrt(&real_matrix(&[&[-1e-3]]), &tol()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn defect_examples() {
        let (d, space) = defect_pair(&CMatrix::zeros(3, 3), &tol()).unwrap();
        assert!(close(&d, &CMatrix::identity(3, 3), 1e-15));
        assert_eq!(space.dim(), 3);

        let (d, space) = defect_pair(&real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]), &tol()).unwrap();
        assert!(d.norm() < 1e-15);
        assert_eq!(space.dim(), 0);

        // √(1 − 0.36) = 0.8, √(1 − 0.64) = 0.6
        let (d, space) = defect_pair(&real_matrix(&[&[0.6, 0.0], &[0.0, 0.8]]), &tol()).unwrap();
        assert!(close(&d, &real_matrix(&[&[0.8, 0.0], &[0.0, 0.6]]), 1e-14));
        assert_eq!(space.dim(), 2);

        assert!(matches!(
            defect_pair(&real_matrix(&[&[1.5]]), &tol()),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let x = real_matrix(&[&[1.0, -2.0], &[0.5, 3.0]]);
        assert!(close(
            &solve_on_range(&CMatrix::identity(2, 2), &x, &tol()).unwrap(),
            &x,
            1e-15
        ));
        let d = real_matrix(&[&[2.0, 0.0], &[0.0, 0.0]]);
        let g = solve_on_range(&d, &real_matrix(&[&[4.0], &[0.0]]), &tol()).unwrap();
        assert!(close(&g, &real_matrix(&[&[2.0], &[0.0]]), 1e-15));
        assert!(matches!(
            solve_on_range(&d, &real_matrix(&[&[0.0], &[1.0]]), &tol()),
            Err(Error::InconsistentFactorization { .. })
        ));
    }

    #[test]
    fn relation_examples() {
        let e1 = Subspace::coordinate(2, &[0]);
        let e2 = Subspace::coordinate(2, &[1]);
        let all = Subspace::full(2);
        assert_eq!(subspace_relation(&e1, &all, &tol()).unwrap(), SubspaceRelation::UInV);
        assert_eq!(subspace_relation(&e1, &e1, &tol()).unwrap(), SubspaceRelation::Equal);
        assert_eq!(
            subspace_relation(&e1, &e2, &tol()).unwrap(),
            SubspaceRelation::Incomparable
        );
        assert!(subspace_relation(&e1, &Subspace::full(3), &tol()).is_err());
    }

    #[test]
    fn complement_and_sum() {
        let diag = orthonormal_basis(&real_matrix(&[&[1.0], &[1.0]]), &tol()).unwrap();
        let comp = diag.complement(&tol());
        assert_eq!(comp.dim(), 1);
        let v = comp.basis().column(0);
        assert!((v[0].re - FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((v[1].re + FRAC_1_SQRT_2).abs() < 1e-14);
        let total = diag.sum(&comp, &tol()).unwrap();
        assert_eq!(total.dim(), 2);
    }

    #[test]
    fn canonical_basis_is_independent_of_spanning_set() {
        let a = orthonormal_basis(&real_matrix(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]), &tol()).unwrap();
        let b = orthonormal_basis(&real_matrix(&[&[1.0, 1.0], &[1.0, -1.0], &[0.0, 0.0]]), &tol()).unwrap();
        assert!(close(a.basis(), b.basis(), 1e-14));
    }
}
