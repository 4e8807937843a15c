//! Standard complexes with twisted coefficients, their homology, induced
//! chain maps and the trivial-action homotopy.

mod complex;
mod homology;
mod maps;

use thiserror::Error;

use crate::dgcore::{DgError, Diagnostic};
use crate::qlinalg::LinalgError;

pub use complex::{
    build_complex, minimal_level, truncation_obstruction, Chain, Level, StandardComplex, TwistSpec,
};
pub use homology::{total_homology, Certificate, DegreeHomology, HomologyBases, HomologySummary};
pub use maps::{
    action_over, check_chain_map, check_homotopy, compose_chain_maps, homology_action, homotopy_h, induced_chain_map,
    induced_commuting, ActionMatrix, ChainMapData,
};

#[derive(Debug, Error)]
pub enum HochschildError {
    #[error("twist is not an endofunctor of the complex's category")]
    NotEndofunctor,
    #[error("twisting functor is invalid: {0:?}")]
    InvalidFunctor(Vec<Diagnostic>),
    #[error("natural transformation is invalid: {0}")]
    InvalidTransform(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("degree {degree} is not certified by the truncation: {reason}")]
    NotCertified { degree: i64, reason: String },
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
