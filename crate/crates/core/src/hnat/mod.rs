//! Homotopy natural transformations between functors out of a finite
//! index category into chain complexes, and their cylinder rectification.

mod functor;
mod index;
mod simplicial;
mod squares;
mod transform;

use thiserror::Error;

use crate::chain::ChainError;

pub use functor::{Functor, StrictNat};
pub use index::{Arrow, FiniteCat};
pub use simplicial::{monotone_maps, simplicial_levels_check, MonotoneMap, SimplicialHNat, SimplicialReport};
pub use squares::{epsilon_p_instance, SquareCheck, SquaresReport};
pub use transform::{Cylinder, HNat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HNatError {
    #[error("invalid index category: {0}")]
    InvalidCategory(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not functorial at {0}")]
    NotFunctorial(String),
    #[error("not natural at arrow {0}")]
    NotNatural(String),
    #[error("witness for arrow {0} does not close the square")]
    NotASquare(String),
    #[error("coherence fails for {outer} after {inner}")]
    CoherenceFailure { outer: String, inner: String },
    #[error("index category is not free")]
    NotFree,
    #[error("component at {0} is not a homotopy equivalence")]
    ComponentNotEquivalence(String),
    #[error("levels are incompatible along {0}")]
    LevelIncompatible(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}
