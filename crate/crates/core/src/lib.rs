//! Exact computations with divided powers `Γⁿ(V)` over `Q` and prime fields:
//! symbol arithmetic, `GL`-actions and their Lie stabilizers, the Chow ring of
//! a blow-up along two projective subspaces, and supporting number theory.

pub mod chow;
pub mod construct;
pub mod error;
pub mod gamma;
pub mod matrix;
pub mod multiindex;
pub mod scalars;
pub mod stab;
pub mod verify;

pub use error::{Error, Result};
pub use gamma::{GammaElement, MonomialBasis, SymElement};
pub use matrix::FieldMatrix;
pub use multiindex::Composition;
pub use scalars::{FieldSpec, Scalar};
