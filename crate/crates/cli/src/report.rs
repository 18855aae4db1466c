//! Output documents for each subcommand.

use posext::cayley::{shift_lower_bound, PartialOperator, RelationSpectrum, SelfadjointRelation};
use posext::extensions::{
    compare_extensions, domain_decomposition, is_extension_member, DomainDecomposition, ExtensionOrder,
    ExtensionProblem, GammaParameter, MembershipRoute,
};
use posext::linalg::{CMatrix, Tolerance};
use posext::Result;
use serde::Serialize;

use crate::io::{GammaSpec, JsonMatrix, Problem};

pub fn load_problem(problem: &Problem, tol: &Tolerance) -> Result<ExtensionProblem> {
    let mut s = PartialOperator::from_spanning_set(&problem.columns, &problem.images, tol)?;
    if let Some(shift) = problem.lower_bound_shift {
        s = shift_lower_bound(&s, shift, tol)?;
    }
    ExtensionProblem::new(s, tol)
}

pub fn resolve_gamma(problem: &ExtensionProblem, spec: &GammaSpec, tol: &Tolerance) -> Result<GammaParameter> {
    let d = problem.defect_dim();
    match spec {
        GammaSpec::Krein => Ok(GammaParameter::krein(d)),
        GammaSpec::Friedrichs => Ok(GammaParameter::friedrichs(d)),
        GammaSpec::Neutral => Ok(GammaParameter::neutral(d)),
        GammaSpec::Matrix(m) => problem.params().gamma(m.clone(), tol),
    }
}

#[derive(Serialize)]
pub struct OperatorDoc {
    pub domain_basis: JsonMatrix,
    pub action: JsonMatrix,
}

impl OperatorDoc {
    fn new(op: &PartialOperator) -> Self {
        Self {
            domain_basis: JsonMatrix::from_matrix(op.domain().basis()),
            action: JsonMatrix::from_matrix(op.action()),
        }
    }
}

#[derive(Serialize)]
pub struct DefectDims {
    pub d_a: usize,
    pub d_gamma2_star: usize,
}

#[derive(Serialize)]
pub struct ParametrizeDoc {
    pub ambient_dim: usize,
    pub dom_dim: usize,
    /// The operator after orthonormalization and shifting.
    pub operator: OperatorDoc,
    /// Its Cayley transform `T`.
    pub contraction: OperatorDoc,
    /// Orthonormal basis `W` of the complement of `dom(T)`.
    pub complement_basis: JsonMatrix,
    /// `A = VᴴTV`.
    pub a: JsonMatrix,
    /// `Γ₂` on `𝒟_A`, in the bases `defect_a_basis` and `W`.
    pub gamma2: JsonMatrix,
    pub d_a: JsonMatrix,
    /// Basis of `𝒟_A` in `dom(T)` coordinates.
    pub defect_a_basis: JsonMatrix,
    pub d_gamma2_star: JsonMatrix,
    /// Basis of `𝒟_{Γ₂*}` in `W` coordinates; `Γ` files are read in this basis.
    pub defect_gamma2_star_basis: JsonMatrix,
    /// The same basis in ambient coordinates.
    pub defect_gamma2_star_ambient: JsonMatrix,
    pub defect_dims: DefectDims,
    /// Side length of `Γ`.
    pub gamma_dim: usize,
}

pub fn parametrize_doc(problem: &ExtensionProblem) -> ParametrizeDoc {
    let p = problem.params();
    ParametrizeDoc {
        ambient_dim: p.ambient_dim(),
        dom_dim: problem.operator().domain().dim(),
        operator: OperatorDoc::new(problem.operator()),
        contraction: OperatorDoc::new(p.operator()),
        complement_basis: JsonMatrix::from_matrix(p.complement().basis()),
        a: JsonMatrix::from_matrix(p.a()),
        gamma2: JsonMatrix::from_matrix(p.gamma2()),
        d_a: JsonMatrix::from_matrix(p.d_a()),
        defect_a_basis: JsonMatrix::from_matrix(p.defect_a().basis()),
        d_gamma2_star: JsonMatrix::from_matrix(p.d_gamma2_star()),
        defect_gamma2_star_basis: JsonMatrix::from_matrix(p.defect_gamma2_star().basis()),
        defect_gamma2_star_ambient: JsonMatrix::from_matrix(&p.defect_gamma2_star_ambient()),
        defect_dims: DefectDims {
            d_a: p.defect_a().dim(),
            d_gamma2_star: p.defect_gamma2_star().dim(),
        },
        gamma_dim: p.defect_dim(),
    }
}

#[derive(Serialize)]
pub struct RelationDoc {
    pub is_operator: bool,
    /// `n × n`, zero on the multivalued part.
    pub operator_part: JsonMatrix,
    pub domain_basis: JsonMatrix,
    pub multivalued_basis: JsonMatrix,
}

impl RelationDoc {
    fn new(r: &SelfadjointRelation) -> Self {
        Self {
            is_operator: r.is_operator(),
            operator_part: JsonMatrix::from_matrix(&r.operator_part()),
            domain_basis: JsonMatrix::from_matrix(r.domain().basis()),
            multivalued_basis: JsonMatrix::from_matrix(r.multivalued_part().basis()),
        }
    }
}

#[derive(Serialize)]
pub struct DecompositionDoc {
    pub dom_friedrichs_basis: JsonMatrix,
    pub correction_basis: JsonMatrix,
    pub dom_gamma_basis: JsonMatrix,
    pub residual: f64,
    pub verified: bool,
}

impl DecompositionDoc {
    fn new(d: &DomainDecomposition) -> Self {
        Self {
            dom_friedrichs_basis: JsonMatrix::from_matrix(d.dom_friedrichs.basis()),
            correction_basis: JsonMatrix::from_matrix(d.correction.basis()),
            dom_gamma_basis: JsonMatrix::from_matrix(d.dom_gamma.basis()),
            residual: d.residual,
            verified: d.verified,
        }
    }
}

#[derive(Serialize)]
pub struct ExtendDoc {
    pub gamma: JsonMatrix,
    /// `T̃(Γ)`.
    pub contraction: JsonMatrix,
    /// `S̃(Γ)`.
    pub relation: RelationDoc,
    pub spectrum: RelationSpectrum,
    pub domain_decomposition: DecompositionDoc,
}

pub fn extend_doc(problem: &ExtensionProblem, gamma: &GammaParameter, tol: &Tolerance) -> Result<ExtendDoc> {
    let contraction = problem.contraction(gamma, tol)?;
    let relation = problem.relation(gamma, tol)?;
    let decomposition = domain_decomposition(problem.params(), gamma, tol)?;
    Ok(ExtendDoc {
        gamma: JsonMatrix::from_matrix(gamma.matrix()),
        contraction: JsonMatrix::from_matrix(&contraction),
        spectrum: relation.spectrum(tol),
        relation: RelationDoc::new(&relation),
        domain_decomposition: DecompositionDoc::new(&decomposition),
    })
}

#[derive(Serialize)]
pub struct MembershipDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<bool>,
}

impl MembershipDoc {
    /// True when both routes ran and disagree.
    pub fn routes_disagree(&self) -> bool {
        matches!((self.direct, self.interval), (Some(a), Some(b)) if a != b)
    }
}

pub fn membership_doc(
    problem: &ExtensionProblem,
    candidate: &CMatrix,
    routes: &[MembershipRoute],
    tol: &Tolerance,
) -> MembershipDoc {
    let run = |route| {
        routes
            .contains(&route)
            .then(|| is_extension_member(problem.params(), candidate, route, tol))
    };
    MembershipDoc {
        direct: run(MembershipRoute::Direct),
        interval: run(MembershipRoute::Interval),
    }
}

#[derive(Serialize)]
pub struct CompareDoc {
    pub order: ExtensionOrder,
}

pub fn compare_doc(
    problem: &ExtensionProblem,
    a: &GammaParameter,
    b: &GammaParameter,
    tol: &Tolerance,
) -> Result<CompareDoc> {
    let ra = problem.relation(a, tol)?;
    let rb = problem.relation(b, tol)?;
    Ok(CompareDoc {
        order: compare_extensions(&ra, &rb, tol)?,
    })
}
