//! Bigraded commutative algebra over `S = R[x_1..x_n]`, `R = k[y_1..y_m]/J`.

pub mod budget;
pub mod complexes;
pub mod error;
pub mod extended;
pub mod free;
pub mod groebner;
pub mod ideal;
pub mod invariants;
pub mod linalg;
pub mod module;
pub mod monomial;
pub mod poly;
pub mod resolution;
pub mod ring;
pub mod scalar;
pub mod slices;
pub mod stability;
pub mod support;

pub use budget::Budget;
pub use error::{AlgebraError, Result};
pub use extended::ExtInt;
pub use free::{FreeModule, ModuleOrderKind, Term, Vector};
pub use groebner::{groebner_basis, GroebnerBasis};
pub use ideal::Ideal;
pub use resolution::{free_resolution, BettiTable, FreeResolution};
pub use support::FiberSupport;
pub use module::{Module, Subquotient};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Poly;
pub use ring::{Bidegree, PolyRing, RingContext};
pub use scalar::{Field, Scalar};
