//! Submodular search: expected search cost, maximum-density (Sidney)
//! decompositions, series-parallel exact solving, and the zero-sum
//! search game between a Hider and a Searcher.
//!
//! Every algorithm is generic over [`Scalar`]. Use [`Rational`] when the
//! input data is rational and exact tie detection matters; use `f64` for
//! transcendental cost compositions.

pub mod density;
pub mod error;
pub mod game;
pub mod gen;
pub mod io;
pub mod scalar;
pub mod sched;
pub mod setfn;
pub mod sidney;
pub mod spd;
pub mod subset;

pub use density::{DensityResult, SearchInstance};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use setfn::{Oracle, Props};
pub use subset::{GroundSet, SearchOrder, Subset};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type RationalOracle = Oracle<Rational>;
pub type FloatOracle = Oracle<f64>;
pub type RationalInstance = SearchInstance<Rational>;
pub type FloatInstance = SearchInstance<f64>;
