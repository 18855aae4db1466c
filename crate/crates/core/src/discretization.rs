//! The minimal second-difference operator and its positive selfadjoint
//! extensions.
//!
//! `L = tridiag(−1, 2, −1)` restricted to vectors vanishing at both grid
//! endpoints is positive and symmetric with a two-dimensional defect. Its
//! Friedrichs and Kreĭn extensions bracket every other positive extension.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{PartialOperator, RelationSpectrum, SelfadjointRelation};
use crate::error::{Error, Result};
use crate::extensions::{compare_extensions, domain_decomposition, ExtensionOrder, ExtensionProblem, GammaParameter};
use crate::linalg::{c64, eig_of_hermitian, CMatrix, Subspace, Tolerance};
use crate::oracle::sample_gamma;

/// Smallest supported grid size.
pub const MIN_GRID: usize = 4;

#[derive(Clone, Debug)]
pub struct MinimalLaplacianProblem {
    n: usize,
    laplacian: CMatrix,
    problem: ExtensionProblem,
}

/// Builds the minimal operator on a grid of `n` points.
pub fn minimal_laplacian(n: usize, tol: &Tolerance) -> Result<MinimalLaplacianProblem> {
    if n < MIN_GRID {
        return Err(Error::Precondition(format!(
            "grid size must be at least {MIN_GRID}, got {n}"
        )));
    }
    let laplacian = CMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => c64(2.0),
        1 => c64(-1.0),
        _ => c64(0.0),
    });
    let interior: Vec<usize> = (1..n - 1).collect();
    let domain = Subspace::coordinate(n, &interior);
    let action = &laplacian * domain.basis();
    let s = PartialOperator::new(domain, action)?;
    s.ensure_symmetric(tol)?;
    s.ensure_positive(tol)?;
    let problem = ExtensionProblem::new(s, tol)?;
    if problem.defect_dim() != 2 {
        return Err(Error::CrossCheck(format!(
            "minimal operator should have defect dimension 2, found {}",
            problem.defect_dim()
        )));
    }
    Ok(MinimalLaplacianProblem { n, laplacian, problem })
}

impl MinimalLaplacianProblem {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn laplacian(&self) -> &CMatrix {
        &self.laplacian
    }

    pub fn operator(&self) -> &PartialOperator {
        self.problem.operator()
    }

    pub fn problem(&self) -> &ExtensionProblem {
        &self.problem
    }

    /// The interior block `VᴴLV`, i.e. the Dirichlet discretization.
    pub fn dirichlet_block(&self) -> CMatrix {
        self.operator().compression()
    }
}

/// Dimensions of the subspaces attached to the extremal extensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainDimensions {
    pub dom_s: usize,
    pub dom_friedrichs: usize,
    pub dom_krein: usize,
    pub defect: usize,
}

/// Outcome of the sampled checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleChecks {
    pub samples: usize,
    /// Samples violating `S̃_K ≤ S̃(Γ) ≤ S̃_F`.
    pub order_failures: usize,
    /// Samples whose domain fails the Friedrichs-plus-correction decomposition.
    pub domain_failures: usize,
    /// Samples whose eigenvalue counting function leaves the Kreĭn/Friedrichs bracket.
    pub counting_failures: usize,
}

impl SampleChecks {
    pub fn failures(&self) -> usize {
        self.order_failures + self.domain_failures + self.counting_failures
    }
}

/// Recorded, not asserted, comparison of the Friedrichs spectrum with the
/// interior Dirichlet block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletComparison {
    pub dirichlet_spectrum: Vec<f64>,
    pub friedrichs_finite_spectrum: Vec<f64>,
    /// Largest eigenvalue difference when the spectra have equal length.
    pub max_difference: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub size: usize,
    pub seed: u64,
    pub krein_spectrum: RelationSpectrum,
    pub friedrichs_spectrum: RelationSpectrum,
    pub krein_min_eigenvalue: f64,
    pub krein_is_singular: bool,
    pub krein_vs_friedrichs: ExtensionOrder,
    pub dimensions: DomainDimensions,
    pub checks: SampleChecks,
    pub dirichlet: DirichletComparison,
    /// Sorted union of the finite extremal spectra used as counting thresholds.
    pub thresholds: Vec<f64>,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.checks.failures() == 0 && self.krein_is_singular
    }
}

/// Number of finite eigenvalues `≤ λ`.
fn counting(spectrum: &RelationSpectrum, lambda: f64) -> usize {
    spectrum.finite.iter().filter(|&&l| l <= lambda).count()
}

fn sample_checks(
    problem: &ExtensionProblem,
    krein: &SelfadjointRelation,
    friedrichs: &SelfadjointRelation,
    gamma: &GammaParameter,
    thresholds: &[f64],
    tol: &Tolerance,
) -> Result<(bool, bool, bool)> {
    let relation = problem.relation(gamma, tol)?;
    let below = compare_extensions(krein, &relation, tol)?;
    let above = compare_extensions(&relation, friedrichs, tol)?;
    let ordered = matches!(below, ExtensionOrder::Le | ExtensionOrder::Equal)
        && matches!(above, ExtensionOrder::Le | ExtensionOrder::Equal);
    let decomposition = domain_decomposition(problem.params(), gamma, tol)?;
    let domain_ok = decomposition.verified;

    let k_spec = krein.spectrum(tol);
    let f_spec = friedrichs.spectrum(tol);
    let spec = relation.spectrum(tol);
    let slack = tol.psd;
    let counting_ok = thresholds.iter().all(|&lambda| {
        let upper = counting(&k_spec, lambda + slack * lambda.abs().max(1.0));
        let lower = counting(&f_spec, lambda - slack * lambda.abs().max(1.0));
        let own = counting(&spec, lambda);
        lower <= own && own <= upper
    });
    Ok((ordered, domain_ok, counting_ok))
}

/// Extremal spectra, sampled order and domain checks, and the Dirichlet
/// comparison for the minimal operator.
pub fn demo_report(
    prob: &MinimalLaplacianProblem,
    gamma_samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<DemoReport> {
    let problem = &prob.problem;
    let krein = problem.krein(tol)?;
    let friedrichs = problem.friedrichs(tol)?;
    let krein_spectrum = krein.spectrum(tol);
    let friedrichs_spectrum = friedrichs.spectrum(tol);
    let krein_min_eigenvalue = krein_spectrum.finite.first().copied().unwrap_or(f64::INFINITY);
    let krein_vs_friedrichs = compare_extensions(&krein, &friedrichs, tol)?;

    let mut thresholds: Vec<f64> = krein_spectrum
        .finite
        .iter()
        .chain(&friedrichs_spectrum.finite)
        .copied()
        .collect();
    let top = thresholds.iter().copied().fold(0.0, f64::max);
    thresholds.extend((0..=8).map(|i| top * i as f64 / 8.0));
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let d = problem.defect_dim();
    let outcomes: Vec<(bool, bool, bool)> = (0..gamma_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let gamma = match i {
                0 => GammaParameter::krein(d),
                1 => GammaParameter::friedrichs(d),
                2 => GammaParameter::neutral(d),
                _ => sample_gamma(&mut rng, d),
            };
            sample_checks(problem, &krein, &friedrichs, &gamma, &thresholds, tol)
        })
        .collect::<Result<_>>()?;
    let checks = SampleChecks {
        samples: gamma_samples,
        order_failures: outcomes.iter().filter(|o| !o.0).count(),
        domain_failures: outcomes.iter().filter(|o| !o.1).count(),
        counting_failures: outcomes.iter().filter(|o| !o.2).count(),
    };

    let dirichlet_spectrum = eig_of_hermitian(&prob.dirichlet_block(), tol).eigenvalues;
    let max_difference = (dirichlet_spectrum.len() == friedrichs_spectrum.finite.len()).then(|| {
        dirichlet_spectrum
            .iter()
            .zip(&friedrichs_spectrum.finite)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    });

    Ok(DemoReport {
        size: prob.n,
        seed,
        krein_min_eigenvalue,
        krein_is_singular: krein_min_eigenvalue <= tol.psd,
        krein_vs_friedrichs,
        dimensions: DomainDimensions {
            dom_s: prob.operator().domain().dim(),
            dom_friedrichs: friedrichs.domain().dim(),
            dom_krein: krein.domain().dim(),
            defect: d,
        },
        checks,
        dirichlet: DirichletComparison {
            dirichlet_spectrum,
            friedrichs_finite_spectrum: friedrichs_spectrum.finite.clone(),
            max_difference,
        },
        thresholds,
        krein_spectrum,
        friedrichs_spectrum,
    })
}
