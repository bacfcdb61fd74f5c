//! Set-function oracles and the operations derived from them.
//!
//! An [`Oracle`] is a cheap, clonable handle to an immutable function
//! `2^S -> T`. Concrete representations live in [`kinds`]; duals,
//! contractions, restrictions and direct sums in [`derived`].

pub mod derived;
pub mod kinds;
mod polyhedron;
mod verify;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subset::{Subset, MAX_ELEMENTS};

pub use derived::{contract, direct_sum, dual, restrict};
pub use kinds::{Coverage, FnOracle, Modular, Tabular};
pub use polyhedron::{base_polyhedron_vertex, curvature, curvature_report, CurvatureReport};
pub use verify::{verify_structure, StructureReport, Verdict, Witness, MAX_VERIFY};

/// Structural properties an oracle declares about itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Props {
    pub normalized: bool,
    pub nondecreasing: bool,
    pub submodular: bool,
    pub supermodular: bool,
}

impl Props {
    pub const NONE: Props = Props {
        normalized: false,
        nondecreasing: false,
        submodular: false,
        supermodular: false,
    };

    /// Normalized, nondecreasing and submodular.
    pub const POLYMATROID: Props = Props {
        normalized: true,
        nondecreasing: true,
        submodular: true,
        supermodular: false,
    };

    /// Normalized, nondecreasing and supermodular.
    pub const SUPERMODULAR_WEIGHT: Props = Props {
        normalized: true,
        nondecreasing: true,
        submodular: false,
        supermodular: true,
    };

    pub fn modular(&self) -> bool {
        self.submodular && self.supermodular
    }

    /// Properties that survive when two declarations are combined.
    pub fn meet(self, other: Props) -> Props {
        Props {
            normalized: self.normalized && other.normalized,
            nondecreasing: self.nondecreasing && other.nondecreasing,
            submodular: self.submodular && other.submodular,
            supermodular: self.supermodular && other.supermodular,
        }
    }
}

/// A deterministic, side-effect free function on subsets of `{0, .., n-1}`.
pub trait SetFunction<T: Scalar>: Send + Sync + fmt::Debug {
    fn ground_size(&self) -> usize;

    /// Callers guarantee `set` lies within the ground set.
    fn value(&self, set: Subset) -> T;

    fn props(&self) -> Props {
        Props::NONE
    }

    /// Per-element weights when the function is known to be modular.
    fn modular_weights(&self) -> Option<Vec<T>> {
        None
    }
}

/// Shared handle to a set function.
pub struct Oracle<T: Scalar>(Arc<dyn SetFunction<T>>);

impl<T: Scalar> Clone for Oracle<T> {
    fn clone(&self) -> Self {
        Oracle(Arc::clone(&self.0))
    }
}

impl<T: Scalar> fmt::Debug for Oracle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: Scalar> Oracle<T> {
    pub fn new(f: impl SetFunction<T> + 'static) -> Self {
        Oracle(Arc::new(f))
    }

    pub fn n(&self) -> usize {
        self.0.ground_size()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n())
    }

    pub fn props(&self) -> Props {
        self.0.props()
    }

    pub fn modular_weights(&self) -> Option<Vec<T>> {
        self.0.modular_weights()
    }

    /// Checked evaluation.
    pub fn eval(&self, set: Subset) -> Result<T> {
        if set.is_subset_of(self.full()) {
            Ok(self.0.value(set))
        } else {
            Err(Error::OutOfRange {
                mask: set.0,
                n: self.n(),
            })
        }
    }

    /// Unchecked evaluation for internal loops over valid masks.
    pub fn at(&self, set: Subset) -> T {
        debug_assert!(set.is_subset_of(self.full()), "{set:?} outside ground set");
        self.0.value(set)
    }

    pub fn singleton(&self, i: usize) -> T {
        self.at(Subset::singleton(i))
    }

    pub fn total(&self) -> T {
        self.at(self.full())
    }

    /// Marginal value `f(A + s) - f(A)`.
    pub fn marginal(&self, set: Subset, s: usize) -> T {
        self.at(set.with(s)) - self.at(set.without(s))
    }

    /// All `2^n` values indexed by mask.
    pub fn table(&self, limit: usize) -> Result<Vec<T>> {
        let n = self.n();
        if n > limit.min(MAX_ELEMENTS) {
            return Err(Error::Capacity {
                n,
                limit,
                what: "tabulation",
            });
        }
        Ok((0..1u64 << n).map(|m| self.0.value(Subset(m))).collect())
    }

    /// Same function backed by a precomputed table.
    pub fn tabulated(&self, limit: usize) -> Result<Oracle<T>> {
        let values = self.table(limit)?;
        Ok(Oracle::new(Tabular::with_props(self.n(), values, self.props())?))
    }

    /// Compares two oracles on every mask.
    pub fn same_values(&self, other: &Oracle<T>) -> bool {
        self.n() == other.n() && self.full().subsets().all(|m| self.at(m).approx_eq(&other.at(m)))
    }
}
