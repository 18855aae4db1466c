//! Seeded random instances and brute-force verification of the extension
//! theory.
//!
//! Every trial draws its own generator from `(seed, ambient_dim, dom_dim,
//! trial)`, so reports are identical whether trials run serially or on the
//! rayon pool.

use std::time::Instant;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{cayley_transform, inverse_cayley, inverse_cayley_partial, PartialOperator};
use crate::error::{Error, Result};
use crate::extensions::{
    compare_extensions, domain_decomposition, extend_contraction, extension_relation, extremal, is_extension_member,
    parametrize, range_inclusions, recover_gamma, ExtensionOrder, ExtensionParametrization, Extremal, GammaParameter,
    MembershipRoute,
};
use crate::linalg::{
    c64, eig_of_hermitian, hermitian_part, is_psd_relative, op_norm, orthonormal_basis, CMatrix, Subspace, Tolerance,
};

/// Source of reproducible random problem instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampler {
    pub seed: u64,
    pub ambient_dim: usize,
    pub dom_dim: usize,
}

impl Sampler {
    pub fn new(seed: u64, ambient_dim: usize, dom_dim: usize) -> Result<Self> {
        if dom_dim == 0 || dom_dim > ambient_dim {
            return Err(Error::Precondition(format!(
                "need 1 ≤ dom_dim ≤ ambient_dim, got dom_dim = {dom_dim}, ambient_dim = {ambient_dim}"
            )));
        }
        Ok(Self {
            seed,
            ambient_dim,
            dom_dim,
        })
    }

    /// Generator for one trial.
    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        let key = splitmix(splitmix(self.seed) ^ ((self.ambient_dim as u64) << 32 | self.dom_dim as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(trial);
        rng
    }

    fn codim(&self) -> usize {
        self.ambient_dim - self.dom_dim
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Random unitary from the eigenvectors of a Gaussian Hermitian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    eig_of_hermitian(&hermitian_part(&g), &Tolerance::default()).eigenvectors
}

/// `U·diag(λ)·Uᴴ` with a random unitary `U`.
pub fn hermitian_with_spectrum<R: Rng>(rng: &mut R, spectrum: &[f64]) -> CMatrix {
    let n = spectrum.len();
    let u = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&DVector::from_iterator(n, spectrum.iter().map(|&l| c64(l))));
    hermitian_part(&(&u * d * u.adjoint()))
}

/// Random Hermitian contraction with spectrum drawn uniformly from `[lo, hi]`.
pub fn random_hermitian_contraction<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> CMatrix {
    let spectrum: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    hermitian_with_spectrum(rng, &spectrum)
}

/// Random strict contraction of the given shape.
pub fn random_contraction<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let g = gaussian_matrix(rng, rows, cols);
    let norm = op_norm(&g);
    if norm == 0.0 {
        return g;
    }
    let target: f64 = rng.random_range(0.05..0.98);
    g.scale(target / norm)
}

/// Random selfadjoint contraction `Γ` on a space of dimension `dim`.
pub fn sample_gamma<R: Rng>(rng: &mut R, dim: usize) -> GammaParameter {
    let m = random_hermitian_contraction(rng, dim, -1.0, 1.0);
    GammaParameter::new(m, &Tolerance::default()).expect("sampled Γ is a selfadjoint contraction")
}

/// Random symmetric partial contraction `T = [A; Γ₂·D_A]` on a random
/// domain of dimension `dom_dim`.
pub fn sample_partial_symmetric_contraction<R: Rng>(s: &Sampler, rng: &mut R) -> PartialOperator {
    let tol = Tolerance::default();
    let (n, k) = (s.ambient_dim, s.dom_dim);
    let domain = random_subspace(rng, n, k);
    let complement = domain.complement(&tol);
    let a = random_hermitian_contraction(rng, k, -0.999, 0.999);
    let id = CMatrix::identity(k, k);
    let d_a = crate::linalg::psd_sqrt(&(&id - &a * &a), &tol).expect("I − A² is PSD");
    let gamma2 = random_contraction(rng, s.codim(), k);
    let action = domain.basis() * &a + complement.basis() * gamma2 * d_a;
    PartialOperator::new(domain, action).expect("shapes agree")
}

/// Random positive symmetric operator on a random domain. The compression
/// is occasionally singular, so that the Kreĭn extension picks up extra
/// kernel.
pub fn sample_positive_operator<R: Rng>(s: &Sampler, rng: &mut R) -> PartialOperator {
    let tol = Tolerance::default();
    let (n, k) = (s.ambient_dim, s.dom_dim);
    let domain = random_subspace(rng, n, k);
    let complement = domain.complement(&tol);
    let scale = 10f64.powf(rng.random_range(-1.0..1.0));
    let mut spectrum: Vec<f64> = (0..k).map(|_| scale * rng.random_range(0.05..2.0)).collect();
    if rng.random_bool(0.25) {
        spectrum[0] = 0.0;
    }
    let compression = hermitian_with_spectrum(rng, &spectrum);
    let outside = gaussian_matrix(rng, s.codim(), k).scale(scale * rng.random_range(0.1..1.5));
    let action = domain.basis() * compression + complement.basis() * outside;
    PartialOperator::new(domain, action).expect("shapes agree")
}

/// Random Hermitian matrix with entries of order `scale`. Not necessarily a
/// contraction.
pub fn sample_hermitian<R: Rng>(s: &Sampler, rng: &mut R, scale: f64) -> CMatrix {
    hermitian_part(&gaussian_matrix(rng, s.ambient_dim, s.ambient_dim)).scale(scale)
}

fn random_subspace<R: Rng>(rng: &mut R, n: usize, k: usize) -> Subspace {
    loop {
        let g = gaussian_matrix(rng, n, k);
        if let Ok(space) = orthonormal_basis(&g, &Tolerance::default()) {
            if space.dim() == k {
                return space;
            }
        }
    }
}

/// Outcome of one randomized verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: String,
    pub ambient_dim: usize,
    pub dom_dim: usize,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub elapsed_seconds: f64,
    /// First few failure descriptions, for diagnosis.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failure_notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Result of a single trial: worst residual seen and failure notes.
#[derive(Default)]
struct TrialOutcome {
    residual: f64,
    failures: Vec<String>,
}

impl TrialOutcome {
    fn residual(&mut self, r: f64) {
        if r.is_nan() {
            self.failures.push("NaN residual".into());
        } else {
            self.residual = self.residual.max(r);
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, e: Error) {
        self.failures.push(format!("library error: {e}"));
    }
}

const MAX_NOTES: usize = 5;

fn run_trials<F>(property: &str, s: &Sampler, trials: usize, trial: F) -> Result<VerificationReport>
where
    F: Fn(&mut ChaCha8Rng) -> Result<TrialOutcome> + Sync,
{
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = s.rng(i);
            trial(&mut rng).unwrap_or_else(|e| {
                let mut out = TrialOutcome::default();
                out.error(e);
                out
            })
        })
        .collect();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (i, out) in outcomes.into_iter().enumerate() {
        worst = worst.max(out.residual);
        if !out.failures.is_empty() {
            failures += 1;
            for note in out.failures {
                if notes.len() < MAX_NOTES {
                    notes.push(format!("trial {i}: {note}"));
                }
            }
        }
    }
    Ok(VerificationReport {
        property: property.to_string(),
        ambient_dim: s.ambient_dim,
        dom_dim: s.dom_dim,
        trials,
        failures,
        worst_residual: worst,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        failure_notes: notes,
    })
}

fn sample_problem(s: &Sampler, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<ExtensionParametrization> {
    let t = sample_partial_symmetric_contraction(s, rng);
    parametrize(&t, tol)
}

/// Direct and interval membership routes agree on extensions, boundary
/// points, random Hermitian matrices of mixed scale, and small perturbations
/// of extensions.
pub fn verify_interval_theorem(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    run_trials("interval_theorem", s, trials, |rng| {
        let p = sample_problem(s, rng, tol)?;
        let mut out = TrialOutcome::default();
        let both = |b: &CMatrix| {
            (
                is_extension_member(&p, b, MembershipRoute::Direct, tol),
                is_extension_member(&p, b, MembershipRoute::Interval, tol),
            )
        };

        let gamma = sample_gamma(rng, p.defect_dim());
        let b = extend_contraction(&p, &gamma, tol)?;
        out.residual(op_norm(&(&b * p.dom_t().basis() - p.operator().action())));
        out.check(both(&b) == (true, true), || format!("T̃(Γ) rejected: {:?}", both(&b)));

        for which in [Extremal::Krein, Extremal::Friedrichs] {
            let b = extremal(&p, which, tol)?;
            out.check(both(&b) == (true, true), || {
                format!("{which:?} endpoint rejected: {:?}", both(&b))
            });
        }

        for scale in [0.1, 1.0, 10.0] {
            let b = sample_hermitian(s, rng, scale);
            let (direct, interval) = both(&b);
            out.check(direct == interval, || {
                format!("routes disagree on random Hermitian (scale {scale}): direct {direct}, interval {interval}")
            });
        }

        let bump = sample_hermitian(s, rng, 1e-3);
        let b = extend_contraction(&p, &gamma, tol)? + bump;
        let (direct, interval) = both(&b);
        out.check(direct == interval, || {
            format!("routes disagree on perturbed extension: direct {direct}, interval {interval}")
        });
        Ok(out)
    })
}

/// `Γ ↦ T̃(Γ)` and `B ↦ Γ` invert each other.
pub fn verify_bijection(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    run_trials("bijection", s, trials, |rng| {
        let p = sample_problem(s, rng, tol)?;
        let mut out = TrialOutcome::default();
        let d = p.defect_dim();
        for gamma in [
            sample_gamma(rng, d),
            GammaParameter::krein(d),
            GammaParameter::friedrichs(d),
        ] {
            let b = extend_contraction(&p, &gamma, tol)?;
            let back = recover_gamma(&p, &b, tol)?;
            let r_gamma = op_norm(&(back.matrix() - gamma.matrix()));
            let again = extend_contraction(&p, &back, tol)?;
            let r_ext = op_norm(&(again - &b));
            out.residual(r_gamma.max(r_ext));
            out.check(r_gamma <= 1e-10 && r_ext <= 1e-10, || {
                format!("round trip residuals Γ {r_gamma:e}, T̃ {r_ext:e}")
            });
        }
        Ok(out)
    })
}

/// `‖T̃(Γ′) − T̃(Γ″)‖ = ‖D_{Γ₂*}(Γ′ − Γ″)D_{Γ₂*}‖` for random pairs.
pub fn verify_norm_identity(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    run_trials("norm_identity", s, trials, |rng| {
        let p = sample_problem(s, rng, tol)?;
        let mut out = TrialOutcome::default();
        let d = p.defect_dim();
        let g1 = sample_gamma(rng, d);
        let g2 = sample_gamma(rng, d);
        let lhs = op_norm(&(extend_contraction(&p, &g1, tol)? - extend_contraction(&p, &g2, tol)?));
        let rhs = op_norm(&p.free_corner(&(g1.matrix() - g2.matrix())));
        let r = (lhs - rhs).abs();
        out.residual(r);
        out.check(r <= 1e-12, || format!("norm identity off by {r:e}"));
        Ok(out)
    })
}

/// Largest `t ∈ [0, 1]` with `λ_max(Γ + t·P) ≤ 1 − 1e-12`, for `P ≥ 0`.
fn admissible_step(gamma: &CMatrix, increment: &CMatrix, tol: &Tolerance) -> f64 {
    let cap = 1.0 - 1e-12;
    let top = |t: f64| eig_of_hermitian(&hermitian_part(&(gamma + increment.scale(t))), tol).max();
    if top(1.0) <= cap {
        return 1.0;
    }
    if top(0.0) > cap {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if top(mid) <= cap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// An ordered pair `Γ′ ≤ Γ″` of selfadjoint contractions: `Γ″ = Γ′ + t·P`
/// with a random PSD increment `P`, scaled back into the unit ball.
pub fn sample_ordered_pair<R: Rng>(rng: &mut R, dim: usize, tol: &Tolerance) -> (GammaParameter, GammaParameter) {
    let lower = sample_gamma(rng, dim);
    let g = gaussian_matrix(rng, dim, dim);
    let increment = hermitian_part(&(&g * g.adjoint())).scale(rng.random_range(0.05..1.0));
    let t = admissible_step(lower.matrix(), &increment, tol);
    let upper = GammaParameter::new(lower.matrix() + increment.scale(t), tol).expect("upper stays in the ball");
    (lower, upper)
}

fn is_le_or_equal(o: ExtensionOrder) -> bool {
    matches!(o, ExtensionOrder::Le | ExtensionOrder::Equal)
}

/// Order is preserved on the contraction side, reversed on the operator side,
/// and every extension sits between the Kreĭn and Friedrichs extensions.
pub fn verify_monotone_antitone(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    run_trials("monotone_antitone", s, trials, |rng| {
        let p = sample_problem(s, rng, tol)?;
        let mut out = TrialOutcome::default();
        let d = p.defect_dim();
        let (lo, hi) = sample_ordered_pair(rng, d, tol);
        let t_lo = extend_contraction(&p, &lo, tol)?;
        let t_hi = extend_contraction(&p, &hi, tol)?;
        out.check(is_psd_relative(&(&t_hi - &t_lo), tol), || "T̃(Γ′) ≤ T̃(Γ″) fails".into());

        let lhs = op_norm(&(&t_hi - &t_lo));
        let rhs = op_norm(&p.free_corner(&(hi.matrix() - lo.matrix())));
        out.residual((lhs - rhs).abs());
        out.check((lhs - rhs).abs() <= 1e-12, || {
            format!("norm identity off by {:e}", (lhs - rhs).abs())
        });

        let s_lo = extension_relation(&p, &lo, tol)?;
        let s_hi = extension_relation(&p, &hi, tol)?;
        let order = compare_extensions(&s_lo, &s_hi, tol)?;
        out.check(matches!(order, ExtensionOrder::Ge | ExtensionOrder::Equal), || {
            format!("S̃(Γ′) vs S̃(Γ″) gave {order:?}, expected ge")
        });

        // an unordered pair: Γ′ ≤ Γ‴ iff T̃(Γ′) ≤ T̃(Γ‴)
        let other = sample_gamma(rng, d);
        let gamma_le = is_psd_relative(&(other.matrix() - lo.matrix()), tol);
        let t_le = is_psd_relative(&(extend_contraction(&p, &other, tol)? - &t_lo), tol);
        out.check(gamma_le == t_le, || format!("Γ order {gamma_le} but T̃ order {t_le}"));

        let krein = extension_relation(&p, &GammaParameter::krein(d), tol)?;
        let friedrichs = extension_relation(&p, &GammaParameter::friedrichs(d), tol)?;
        for (name, r) in [("Γ′", &s_lo), ("Γ″", &s_hi)] {
            let below = compare_extensions(&krein, r, tol)?;
            let above = compare_extensions(r, &friedrichs, tol)?;
            out.check(is_le_or_equal(below) && is_le_or_equal(above), || {
                format!("sandwich fails at {name}: K vs S̃ {below:?}, S̃ vs F {above:?}")
            });
        }
        Ok(out)
    })
}

/// Residuals `‖(I+S̃(Γ_j))⁻¹ξ − (I+S̃(Γ))⁻¹ξ‖` and bounds `½‖T̃(Γ_j) − T̃(Γ)‖·‖ξ‖`
/// along `Γ_j = Γ + 2⁻ʲΔ`, `j = 0..steps`.
pub fn continuity_sequence(
    p: &ExtensionParametrization,
    gamma: &GammaParameter,
    direction: &CMatrix,
    xi: &CMatrix,
    steps: usize,
    tol: &Tolerance,
) -> Result<Vec<(f64, f64)>> {
    let base_t = extend_contraction(p, gamma, tol)?;
    let base_res = extension_relation(p, gamma, tol)?.resolvent();
    let mut seq = Vec::with_capacity(steps);
    for j in 0..steps {
        let step = direction.scale(0.5f64.powi(j as i32));
        let gj = p.gamma(gamma.matrix() + step, tol)?;
        let tj = extend_contraction(p, &gj, tol)?;
        let rj = extension_relation(p, &gj, tol)?.resolvent();
        let residual = ((&rj - &base_res) * xi).norm();
        let bound = 0.5 * op_norm(&(&tj - &base_t)) * xi.norm();
        seq.push((residual, bound));
    }
    Ok(seq)
}

/// Resolvent identity `(I + S̃(Γ))⁻¹ = ½(I + T̃(Γ))` and geometric decay of the
/// resolvent differences along a halving sequence of parameters.
pub fn verify_resolvent_continuity(
    s: &Sampler,
    trials: usize,
    steps: usize,
    tol: &Tolerance,
) -> Result<VerificationReport> {
    if steps < 2 {
        return Err(Error::Precondition("need at least 2 continuity steps".into()));
    }
    run_trials("resolvent_continuity", s, trials, |rng| {
        let p = sample_problem(s, rng, tol)?;
        let mut out = TrialOutcome::default();
        let d = p.defect_dim();
        let n = p.ambient_dim();
        let gamma = GammaParameter::new(random_hermitian_contraction(rng, d, -0.5, 0.5), tol)?;
        let direction = random_hermitian_contraction(rng, d, -0.5, 0.5);

        let t = extend_contraction(&p, &gamma, tol)?;
        let res = extension_relation(&p, &gamma, tol)?.resolvent();
        let half = (CMatrix::identity(n, n) + &t).scale(0.5);
        let identity_residual = op_norm(&(res - half));
        out.residual(identity_residual);
        out.check(identity_residual <= 1e-10, || {
            format!("resolvent identity residual {identity_residual:e}")
        });

        let xi = gaussian_matrix(rng, n, 1);
        let seq = continuity_sequence(&p, &gamma, &direction, &xi, steps, tol)?;
        for (j, &(residual, bound)) in seq.iter().enumerate() {
            out.check(residual <= bound + 1e-12 * xi.norm(), || {
                format!("step {j}: residual {residual:e} exceeds bound {bound:e}")
            });
        }
        for w in seq.windows(2) {
            let (prev, next) = (w[0].1, w[1].1);
            if prev > 1e-9 {
                let ratio = next / prev;
                out.check((ratio - 0.5).abs() <= 0.1, || format!("bound ratio {ratio}"));
            }
        }
        Ok(out)
    })
}

/// Cayley round trips on positive operators and the spectral mapping
/// `t ↦ (1 − t)/(1 + t)` on Hermitian contractions with eigenvalues at `−1`.
pub fn verify_cayley(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    run_trials("cayley", s, trials, |rng| {
        let mut out = TrialOutcome::default();
        let op = sample_positive_operator(s, rng);
        let scale = op.norm().max(1.0);
        let t = cayley_transform(&op, tol)?;
        out.check(t.norm() <= 1.0 + tol.contraction, || format!("‖C(S)‖ = {}", t.norm()));
        out.check(t.is_symmetric(tol), || "C(S) not symmetric".into());
        let back = inverse_cayley_partial(&t, tol)?;
        let r1 = back.distance(&op)? / scale;
        let again = cayley_transform(&back, tol)?;
        let r2 = again.distance(&t)?;
        out.residual(r1.max(r2));
        out.check(r1 <= 1e-10 && r2 <= 1e-10, || {
            format!("round trip residuals {r1:e}, {r2:e}")
        });

        let n = s.ambient_dim;
        let poles = rng.random_range(0..=n.min(2));
        let mut spectrum: Vec<f64> = (0..n).map(|_| rng.random_range(-0.999..=1.0)).collect();
        for l in spectrum.iter_mut().take(poles) {
            *l = -1.0;
        }
        let contraction = hermitian_with_spectrum(rng, &spectrum);
        let relation = inverse_cayley(&contraction, tol)?;
        let spec = relation.spectrum(tol);
        out.check(spec.infinity_multiplicity == poles, || {
            format!("infinity multiplicity {} expected {poles}", spec.infinity_multiplicity)
        });
        let mut expected: Vec<f64> = spectrum
            .iter()
            .filter(|&&l| l != -1.0)
            .map(|&l| (1.0 - l) / (1.0 + l))
            .collect();
        expected.sort_by(f64::total_cmp);
        if expected.len() == spec.finite.len() {
            for (e, f) in expected.iter().zip(&spec.finite) {
                let r = (e - f).abs() / e.abs().max(1.0);
                out.residual(r);
                out.check(r <= 1e-8, || format!("eigenvalue {f} expected {e}"));
            }
        } else {
            out.check(false, || "finite spectrum has the wrong size".into());
        }
        let positivity = spec.finite.first().copied().unwrap_or(0.0);
        out.check(positivity >= -tol.psd, || {
            format!("relation not positive: {positivity}")
        });
        Ok(out)
    })
}

/// `dom(S̃(Γ)) = dom(F) + D_{Γ₂*}(I+Γ)D_{Γ₂*}·ker(I+S*)`, cycling through
/// `Γ = −I`, `Γ = I` and random `Γ`.
pub fn verify_domain_decomposition(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    let mut report = run_trials("domain_decomposition", s, trials, |rng| {
        let p = sample_problem(s, rng, tol)?;
        let d = p.defect_dim();
        let selector: u8 = rng.random_range(0..4);
        let gamma = match selector {
            0 => GammaParameter::friedrichs(d),
            1 => GammaParameter::krein(d),
            _ => sample_gamma(rng, d),
        };
        let dd = domain_decomposition(&p, &gamma, tol)?;
        let mut out = TrialOutcome::default();
        out.residual(dd.residual);
        out.check(dd.verified && dd.residual <= 1e-8, || {
            format!("domain sum mismatch, residual {:e}", dd.residual)
        });
        Ok(out)
    })?;
    report.property = "domain_decomposition".into();
    Ok(report)
}

/// `ran(I+A) ⊆ ran((I+T)*) ⊆ ran((I+A)^{1/2})` on random instances.
pub fn verify_range_inclusion(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    run_trials("range_inclusion", s, trials, |rng| {
        let p = sample_problem(s, rng, tol)?;
        let r = range_inclusions(&p, tol)?;
        let mut out = TrialOutcome::default();
        let worst = r.first_residual.max(r.second_residual);
        out.residual(worst);
        out.check(r.holds && worst <= 1e-8, || format!("inclusion residual {worst:e}"));
        Ok(out)
    })
}

/// Every `S̃(Γ)` extends `S`, and `S̃(−I)` is the largest extension with the
/// smallest domain.
pub fn verify_extension_property(s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    run_trials("extension_property", s, trials, |rng| {
        let op = sample_positive_operator(s, rng);
        let scale = op.norm().max(1.0);
        let t = cayley_transform(&op, tol)?;
        let p = parametrize(&t, tol)?;
        let d = p.defect_dim();
        let mut out = TrialOutcome::default();
        let friedrichs = extension_relation(&p, &GammaParameter::friedrichs(d), tol)?;
        for gamma in [sample_gamma(rng, d), sample_gamma(rng, d), GammaParameter::krein(d)] {
            let r = extension_relation(&p, &gamma, tol)?;
            let residual = r.graph_residual(&op)? / scale;
            out.residual(residual);
            out.check(residual <= tol.compare, || format!("graph residual {residual:e}"));
            let order = compare_extensions(&r, &friedrichs, tol)?;
            out.check(is_le_or_equal(order), || format!("S̃(Γ) vs F gave {order:?}"));
            out.check(friedrichs.domain().dim() <= r.domain().dim(), || {
                format!(
                    "dom(F) has dim {} > dom(S̃(Γ)) dim {}",
                    friedrichs.domain().dim(),
                    r.domain().dim()
                )
            });
        }
        let residual = friedrichs.graph_residual(&op)? / scale;
        out.residual(residual);
        out.check(residual <= tol.compare, || {
            format!("Friedrichs graph residual {residual:e}")
        });
        Ok(out)
    })
}

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 9] = [
    "interval_theorem",
    "bijection",
    "norm_identity",
    "monotone_antitone",
    "resolvent_continuity",
    "cayley",
    "domain_decomposition",
    "range_inclusion",
    "extension_property",
];

/// Continuity steps used by the suite runner.
pub const CONTINUITY_STEPS: usize = 12;

pub fn run_suite(name: &str, s: &Sampler, trials: usize, tol: &Tolerance) -> Result<VerificationReport> {
    match name {
        "interval_theorem" => verify_interval_theorem(s, trials, tol),
        "bijection" => verify_bijection(s, trials, tol),
        "norm_identity" => verify_norm_identity(s, trials, tol),
        "monotone_antitone" => verify_monotone_antitone(s, trials, tol),
        "resolvent_continuity" => verify_resolvent_continuity(s, trials, CONTINUITY_STEPS, tol),
        "cayley" => verify_cayley(s, trials, tol),
        "domain_decomposition" => verify_domain_decomposition(s, trials, tol),
        "range_inclusion" => verify_range_inclusion(s, trials, tol),
        "extension_property" => verify_extension_property(s, trials, tol),
        other => Err(Error::Precondition(format!("unknown verification suite `{other}`"))),
    }
}

/// Runs every suite for each ambient dimension in `dims` and each domain
/// dimension `1..=n`.
pub fn run_all(
    dims: std::ops::RangeInclusive<usize>,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    for n in dims {
        for k in 1..=n {
            let s = Sampler::new(seed, n, k)?;
            for name in SUITES {
                reports.push(run_suite(name, &s, trials, tol)?);
            }
        }
    }
    Ok(reports)
}
