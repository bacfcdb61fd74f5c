//! Concrete oracle representations.

use std::fmt;

use super::{Props, SetFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subset::Subset;

/// Explicit table of `2^n` values indexed by mask.
#[derive(Clone, Debug)]
pub struct Tabular<T> {
    n: usize,
    values: Vec<T>,
    props: Props,
}

impl<T: Scalar> Tabular<T> {
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        Self::with_props(n, values, Props::NONE)
    }

    pub fn with_props(n: usize, values: Vec<T>, props: Props) -> Result<Self> {
        if n > 24 {
            return Err(Error::Capacity {
                n,
                limit: 24,
                what: "tabular oracle",
            });
        }
        if values.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "tabular oracle on {n} elements needs {} values, got {}",
                1u64 << n,
                values.len()
            )));
        }
        Ok(Tabular { n, values, props })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

impl<T: Scalar> SetFunction<T> for Tabular<T> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: Subset) -> T {
        self.values[set.0 as usize].clone()
    }

    fn props(&self) -> Props {
        self.props
    }
}

/// `A -> sum of weights in A`.
#[derive(Clone, Debug)]
pub struct Modular<T> {
    weights: Vec<T>,
}

impl<T: Scalar> Modular<T> {
    pub fn new(weights: Vec<T>) -> Self {
        Modular { weights }
    }

    pub fn zero(n: usize) -> Self {
        Modular {
            weights: vec![T::zero(); n],
        }
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

impl<T: Scalar> SetFunction<T> for Modular<T> {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, set: Subset) -> T {
        set.iter().map(|i| self.weights[i].clone()).sum()
    }

    fn props(&self) -> Props {
        Props {
            normalized: true,
            nondecreasing: self.weights.iter().all(|w| !w.is_negative()),
            submodular: true,
            supermodular: true,
        }
    }

    fn modular_weights(&self) -> Option<Vec<T>> {
        Some(self.weights.clone())
    }
}

/// Weighted coverage: element `i` covers `covers[i]` out of a weighted universe.
#[derive(Clone, Debug)]
pub struct Coverage<T> {
    covers: Vec<Subset>,
    item_weights: Vec<T>,
}

impl<T: Scalar> Coverage<T> {
    pub fn new(covers: Vec<Subset>, item_weights: Vec<T>) -> Result<Self> {
        let universe = Subset::full(item_weights.len());
        if covers.iter().any(|c| !c.is_subset_of(universe)) {
            return Err(Error::Invalid("coverage set outside universe".into()));
        }
        if item_weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Invalid("negative coverage weight".into()));
        }
        Ok(Coverage { covers, item_weights })
    }
}

impl<T: Scalar> SetFunction<T> for Coverage<T> {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn value(&self, set: Subset) -> T {
        let union = set.iter().fold(Subset::EMPTY, |acc, i| acc | self.covers[i]);
        union.iter().map(|j| self.item_weights[j].clone()).sum()
    }

    fn props(&self) -> Props {
        Props::POLYMATROID
    }
}

/// Oracle backed by a closure.
pub struct FnOracle<T, F> {
    n: usize,
    props: Props,
    f: F,
    _marker: std::marker::PhantomData<fn() -> T>,
}

impl<T, F> FnOracle<T, F> {
    pub fn new(n: usize, props: Props, f: F) -> Self {
        FnOracle {
            n,
            props,
            f,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<T, F> fmt::Debug for FnOracle<T, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnOracle").field("n", &self.n).finish()
    }
}

impl<T, F> SetFunction<T> for FnOracle<T, F>
where
    T: Scalar,
    F: Fn(Subset) -> T + Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }

    fn value(&self, set: Subset) -> T {
        (self.f)(set)
    }

    fn props(&self) -> Props {
        self.props
    }
}
