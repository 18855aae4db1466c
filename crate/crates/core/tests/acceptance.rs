//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use posext::cayley::{cayley_transform, PartialOperator};
use posext::discretization::{demo_report, minimal_laplacian};
use posext::extensions::{compare_extensions, ExtensionOrder, ExtensionProblem, GammaParameter};
use posext::linalg::{real_matrix, CMatrix, Tolerance};
use posext::oracle::{run_all, VerificationReport};

const DIMS: std::ops::RangeInclusive<usize> = 2..=5;
const TRIALS: usize = 200;
const SEED: u64 = 20240601;
const VERIFY_BUDGET: Duration = Duration::from_secs(10);
const DEMO_BUDGET: Duration = Duration::from_secs(5);

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn summarize(reports: &[VerificationReport], property: &str) -> (usize, usize, f64) {
    reports
        .iter()
        .filter(|r| r.property == property)
        .fold((0, 0, 0.0f64), |(t, f, w), r| {
            (t + r.trials, f + r.failures, w.max(r.worst_residual))
        })
}

fn suite(
    name: &'static str,
    reports: &[VerificationReport],
    property: &str,
    residual_limit: f64,
    pinned: &str,
) -> Outcome {
    let (trials, failures, worst) = summarize(reports, property);
    let notes: Vec<&String> = reports
        .iter()
        .filter(|r| r.property == property)
        .flat_map(|r| &r.failure_notes)
        .take(3)
        .collect();
    Outcome {
        name,
        passed: trials > 0 && failures == 0 && worst <= residual_limit,
        detail: format!(
            "failures {failures}/{trials}, worst residual {worst:.3e} (limit {residual_limit:e}; {pinned}){}",
            if notes.is_empty() {
                String::new()
            } else {
                format!(", first failures {notes:?}")
            }
        ),
    }
}

fn close(a: &CMatrix, b: &CMatrix, limit: f64) -> bool {
    a.shape() == b.shape() && (a - b).norm() <= limit
}

fn close_values(a: &[f64], b: &[f64], limit: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= limit)
}

/// The worked example `T e₁ = (0, 1/√2)` on `ℂ²`, started from the positive
/// operator `S: (1, c) ↦ (1, −c)`.
fn reference_chain(tol: &Tolerance) -> Outcome {
    let c = FRAC_1_SQRT_2;
    // scalar arithmetic: T̃(γ) = [[0, c], [c, (1 − c²)·γ]]
    let lower_right = |gamma: f64| (1.0 - c * c) * gamma;
    let t_krein = real_matrix(&[&[0.0, c], &[c, lower_right(1.0)]]);
    let t_friedrichs = real_matrix(&[&[0.0, c], &[c, lower_right(-1.0)]]);
    // (I − T̃)(I + T̃)⁻¹ with I + T̃ = [[1, c], [c, 3/2]], det = 3/2 − c² = 1
    let det = 1.5 - c * c;
    let inv = [[1.5 / det, -c / det], [-c / det, 1.0 / det]];
    let minus = [[1.0, -c], [-c, 0.5]];
    let s_krein_scalar = real_matrix(&[
        &[
            minus[0][0] * inv[0][0] + minus[0][1] * inv[1][0],
            minus[0][0] * inv[0][1] + minus[0][1] * inv[1][1],
        ],
        &[
            minus[1][0] * inv[0][0] + minus[1][1] * inv[1][0],
            minus[1][0] * inv[0][1] + minus[1][1] * inv[1][1],
        ],
    ]);
    let s_krein_frozen = real_matrix(&[&[2.0, -SQRT_2], &[-SQRT_2, 1.0]]);
    // eigenvalues of [[2, −√2], [−√2, 1]]: trace 3, det 0
    let (tr, dt) = (3.0f64, 0.0f64);
    let disc = (tr * tr - 4.0 * dt).sqrt();
    let krein_spectrum = [(tr - disc) / 2.0, (tr + disc) / 2.0];
    // eigenvalues of T̃(−1): λ² + λ/2 − 1/2 = 0 gives {−1, 1/2}; 1/2 ↦ (1 − 1/2)/(1 + 1/2)
    let root = (0.25f64 + 2.0).sqrt();
    let t_f_eigs = [(-0.5 - root) / 2.0, (-0.5 + root) / 2.0];
    let friedrichs_finite = (1.0 - t_f_eigs[1]) / (1.0 + t_f_eigs[1]);

    let mut checks: Vec<(&str, bool)> = vec![
        (
            "scalar S̃_K matches frozen [[2,−√2],[−√2,1]]",
            close(&s_krein_scalar, &s_krein_frozen, 1e-14),
        ),
        (
            "scalar spectra",
            close_values(&krein_spectrum, &[0.0, 3.0], 1e-14)
                && (t_f_eigs[0] + 1.0).abs() < 1e-14
                && (friedrichs_finite - 1.0 / 3.0).abs() < 1e-14,
        ),
    ];

    let run = || -> posext::Result<Vec<(&'static str, bool)>> {
        let s = PartialOperator::from_spanning_set(&real_matrix(&[&[1.0], &[c]]), &real_matrix(&[&[1.0], &[-c]]), tol)?;
        let t = cayley_transform(&s, tol)?;
        let expected_action = real_matrix(&[&[0.0], &[c]]);
        let phase = t.domain().basis()[(0, 0)];
        let t_ok = (t.action() - expected_action * phase).norm() <= 1e-12;
        let problem = ExtensionProblem::new(s, tol)?;
        let krein_t = problem.contraction(&GammaParameter::krein(1), tol)?;
        let friedrichs_t = problem.contraction(&GammaParameter::friedrichs(1), tol)?;
        let krein = problem.krein(tol)?;
        let friedrichs = problem.friedrichs(tol)?;
        let k_spec = krein.spectrum(tol);
        let f_spec = friedrichs.spectrum(tol);
        let fdom = friedrichs.domain().basis();
        let fdom_expected = [(2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()];
        Ok(vec![
            ("T e₁ = (0, 1/√2)", t_ok),
            ("T̃(+1)", close(&krein_t, &t_krein, 1e-12)),
            ("T̃(−1)", close(&friedrichs_t, &t_friedrichs, 1e-12)),
            (
                "S̃_K operator",
                krein.as_operator().is_some_and(|m| close(&m, &s_krein_frozen, 1e-10)),
            ),
            (
                "S̃_K spectrum {0, 3}",
                k_spec.infinity_multiplicity == 0 && close_values(&k_spec.finite, &krein_spectrum, 1e-10),
            ),
            (
                "S̃_F finite spectrum {1/3}, ∞ multiplicity 1",
                f_spec.infinity_multiplicity == 1 && close_values(&f_spec.finite, &[friedrichs_finite], 1e-10),
            ),
            (
                "dom S̃_F",
                fdom.ncols() == 1
                    && (fdom[(0, 0)].norm() - fdom_expected[0]).abs() < 1e-10
                    && (fdom[(1, 0)].norm() - fdom_expected[1]).abs() < 1e-10,
            ),
            (
                "S̃_K ≤ S̃_F",
                compare_extensions(&krein, &friedrichs, tol)? == ExtensionOrder::Le,
            ),
        ])
    };
    let detail = match run() {
        Ok(library) => {
            checks.extend(library);
            let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
            if failed.is_empty() {
                format!("{} checks within 1e-10", checks.len())
            } else {
                format!("failed: {failed:?}")
            }
        }
        Err(e) => {
            checks.push(("library", false));
            format!("library error: {e}")
        }
    };
    Outcome {
        name: "reference_2x2_chain",
        passed: checks.iter().all(|(_, ok)| *ok),
        detail,
    }
}

fn laplacian_demo(tol: &Tolerance) -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut passed = true;
    for n in [6, 10] {
        match minimal_laplacian(n, tol).and_then(|p| demo_report(&p, 100, SEED, tol)) {
            Ok(r) => {
                let ok = r.checks.failures() == 0 && r.krein_min_eigenvalue <= 1e-8;
                passed &= ok;
                parts.push(format!(
                    "n={n}: order failures {}, domain failures {}, counting failures {}, λ_min(S̃_K) {:.2e}",
                    r.checks.order_failures,
                    r.checks.domain_failures,
                    r.checks.counting_failures,
                    r.krein_min_eigenvalue
                ));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("n={n}: error {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    passed &= elapsed < DEMO_BUDGET;
    Outcome {
        name: "laplacian_demo",
        passed,
        detail: format!(
            "{}; 100 samples each, λ_min limit 1e-8, {:.2}s (budget {}s)",
            parts.join("; "),
            elapsed.as_secs_f64(),
            DEMO_BUDGET.as_secs()
        ),
    }
}

fn main() -> ExitCode {
    let tol = Tolerance::default();
    let start = Instant::now();
    let reports = match run_all(DIMS, TRIALS, SEED, &tol) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL  verification harness: {e}");
            return ExitCode::FAILURE;
        }
    };
    let verify_elapsed = start.elapsed();

    let mut interval = suite(
        "interval_theorem",
        &reports,
        "interval_theorem",
        1e-10,
        "route agreement exact, residual is ‖T̃V − M‖",
    );
    interval.passed &= verify_elapsed < VERIFY_BUDGET;
    interval.detail.push_str(&format!(
        ", full verify run {:.2}s (budget {}s)",
        verify_elapsed.as_secs_f64(),
        VERIFY_BUDGET.as_secs()
    ));

    let mut monotone = suite(
        "monotone_antitone",
        &reports,
        "monotone_antitone",
        1e-12,
        "PSD slack 1e-9, sandwich on every sample",
    );
    let extension = suite(
        "extension_property",
        &reports,
        "extension_property",
        tol.compare,
        "graph nesting",
    );
    monotone.passed &= extension.passed;
    monotone
        .detail
        .push_str(&format!("; extension property {}", extension.detail));

    let outcomes = vec![
        interval,
        suite("bijection", &reports, "bijection", 1e-10, "Γ and T̃ round trips"),
        suite(
            "norm_identity",
            &reports,
            "norm_identity",
            1e-12,
            "‖T̃(Γ′) − T̃(Γ″)‖ vs ‖D(Γ′ − Γ″)D‖",
        ),
        monotone,
        suite(
            "cayley",
            &reports,
            "cayley",
            1e-8,
            "round trip 1e-10, spectral map 1e-8 relative, ∞ multiplicity exact",
        ),
        suite(
            "resolvent",
            &reports,
            "resolvent_continuity",
            1e-10,
            "identity 1e-10, halving ratio 0.5 ± 0.1",
        ),
        suite(
            "domain_decomposition",
            &reports,
            "domain_decomposition",
            1e-8,
            "includes Γ = ±I",
        ),
        suite(
            "range_inclusions",
            &reports,
            "range_inclusion",
            1e-8,
            "containment residual",
        ),
        reference_chain(&tol),
        laplacian_demo(&tol),
    ];

    let mut all = true;
    for o in &outcomes {
        all &= o.passed;
        println!(
            "{}  {:<22} {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed (dims {}..={}, {} trials, seed {})",
        outcomes.iter().filter(|o| o.passed).count(),
        outcomes.len(),
        DIMS.start(),
        DIMS.end(),
        TRIALS,
        SEED
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
