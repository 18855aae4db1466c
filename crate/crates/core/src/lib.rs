//! Positive selfadjoint extensions of symmetric operators on `ℂⁿ`.
//!
//! A positive symmetric operator `S` defined on a subspace of `ℂⁿ` is mapped
//! by the Cayley transform to a symmetric partial contraction `T`. The
//! selfadjoint contractions extending `T` form an operator interval,
//! parametrized by selfadjoint contractions `Γ` on a defect space, and their
//! inverse Cayley transforms are exactly the positive selfadjoint extensions
//! of `S` (as linear relations when they are "unbounded").

pub use num_complex;

pub mod cayley;
pub mod contraction;
pub mod discretization;
pub mod error;
pub mod extensions;
pub mod linalg;
pub mod oracle;

pub use cayley::{
    cayley_transform, inverse_cayley, inverse_cayley_partial, relation_spectrum, shift_lower_bound, PartialOperator,
    RelationSpectrum, SelfadjointRelation,
};
pub use discretization::{demo_report, minimal_laplacian, DemoReport, MinimalLaplacianProblem};
pub use error::{Error, Result};
pub use extensions::{
    compare_extensions, domain_decomposition, extend_contraction, extension_relation, extremal, is_extension_member,
    parametrize, range_inclusion_check, recover_gamma, DomainDecomposition, ExtensionOrder, ExtensionParametrization,
    ExtensionProblem, Extremal, GammaParameter, MembershipRoute,
};
pub use linalg::{CMatrix, Subspace, SubspaceRelation, Tolerance};
pub use oracle::{run_all, run_suite, Sampler, VerificationReport};
