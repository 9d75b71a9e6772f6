//! Jordan-algebraic relative entropies, operator means and a randomized
//! harness for the order inequalities between them.

pub mod backend;
pub mod element;
pub mod error;
pub mod function;
pub mod harness;
pub mod means;
pub mod spectral;

pub use element::{jb_norm, jordan_product, quad_map, AlgebraDescriptor, JordanElement};
pub use error::{JordanError, Result};
pub use means::{BoundKind, EntropyParams};
