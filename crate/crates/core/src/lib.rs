//! Exact Hochschild and cyclic homology of finite-dimensional, possibly
//! non-unital algebras over ℚ, together with an explicit, certified inverse
//! of the excision map `HC_n(I) → HC_n(A, I)` for ideals with local left
//! units.
//!
//! Everything is computed with exact rationals. Every claimed equality of
//! homology classes comes with a higher-degree chain whose boundary is the
//! difference, so results can be re-checked independently.

pub mod algebra;
pub mod chain;
pub mod demo;
pub mod error;
pub mod excision;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod units;

pub use error::{Error, Result};
