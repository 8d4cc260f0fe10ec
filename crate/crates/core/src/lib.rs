//! Construction and exact verification of unitary t-designs built from
//! finite groups, including products of groups with convolution weights.

pub mod chartheory;
pub mod designs;
pub mod error;
pub mod groups;
pub mod haar;
pub mod monomial;
pub mod ortho_lift;
pub mod rotation;
pub mod tensorlin;

pub use designs::{product_design, WeightedUnitarySet};
pub use error::{Error, Result};
pub use monomial::MonomialElement;
pub use tensorlin::{ComplexMatrix, Permutation, Projector, YoungDiagram, C64};
