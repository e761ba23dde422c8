//! Exact computations for real vector bundles on real algebraic curves:
//! GF(2) linear algebra for involutions on `H^1(M; Z/2)`, Klein surface
//! classification, Steenrod squares on `H*(BSO(r))`, and the mod-2
//! cohomology presentations and Poincaré series of the moduli stacks.

pub mod f2;
pub mod moduli;
pub mod oracle;
pub mod series;
pub mod steenrod;
pub mod surface;
pub mod verify;

use thiserror::Error;

pub use f2::{
    adapted_basis, dickson_invariant, dickson_of_matrix, normal_form_matrix, AdaptedBasis, BasisRole,
    BitMatrix, BitVector, F2Error, InvolutionMatrix, MatrixJson, RoleKind, SpanBuilder,
};
pub use moduli::{
    ab_inventory, cross_check, em_column_series, em_presentation, rank1_presentation,
    rankr_presentation, stack_series, ABClass, ABClassInventory, ABClassKind, CrossCheckReport,
    ModuliError, ModuliParams,
};
pub use series::{
    dim_in_degree, product_closed_form, series_eq, series_mul, series_of, AlgebraPresentation,
    ClosedFormFactor, FactorShape, GeneratorKind, GeneratorSpec, Label, PoincareSeries, SeriesError,
    DEFAULT_TRUNCATION,
};
pub use steenrod::{
    binomial_mod2, cup1_height, indecomposable_chain, indecomposable_part, omega_bso_presentation,
    s_set, sq, sq1, wu_sq_on_generator, SWMonomial, SWPolynomial, SteenrodError,
};
pub use surface::{
    classify, is_m_curve, type1_involution_matrix, type2_involution_matrix, CurveInvariants,
    CurveType, DerivedInvariants, SurfaceError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Steenrod(#[from] SteenrodError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
