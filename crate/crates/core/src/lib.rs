//! Exact computations for the word-defined nonassociative algebras `A(m,d,w)`,
//! their periodic finite-dimensional models `B(m,d,w)` and unital extensions.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: periodic, mechanical and Sturmian binary words.
//! * [`algebra`]: structure-constant multiplication oracles.
//! * [`multilinear`]: planar trees, multilinear monomials and polynomials,
//!   symmetric-group actions, Young symmetrizers and alternating witnesses.
//! * [`linalg`]: sparse rank over prime fields and exact fraction-free elimination.
//! * [`codim`]: codimensions, cocharacters and colengths by exact rank.
//! * [`repr`]: partitions, hook dimensions, characters and the `Φ` function.
//! * [`asymptotics`]: exponent targets, finite-degree sandwiches and density scans.

pub mod algebra;
pub mod asymptotics;
pub mod codim;
pub mod error;
pub mod linalg;
pub mod multilinear;
pub mod repr;
pub mod words;

pub use algebra::{AlgebraModel, AlgebraParams, BasisElement, Flavor, FlavorKind, ModelDescriptor};
pub use codim::{CodimConfig, CodimReport, Mode};
pub use error::{Error, Result};
pub use multilinear::{Monomial, Permutation, PlanarTree, Polynomial, Substitution};
pub use repr::{Interval, Partition};
pub use words::{Slope, WordSpec};

/// Rational numbers used throughout (exact, arbitrary size).
pub type Rational = rug::Rational;
/// Arbitrary-size integers.
pub type Integer = rug::Integer;
