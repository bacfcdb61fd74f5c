//! Functions built from other functions: duals, contractions, restrictions
//! and direct sums.
//!
//! Contractions and restrictions re-index their ground set onto
//! `0..k` in ascending order of the parent elements they keep; use
//! [`Subset::compress`] / [`Subset::expand`] with [`Contraction::kept`] or
//! [`Restriction::kept`] to move between the two index spaces.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use super::{Oracle, Props, SetFunction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subset::Subset;

/// Evaluation cache keyed by mask.
struct Memo<T>(RwLock<HashMap<u64, T>>);

impl<T: Scalar> Memo<T> {
    fn new() -> Self {
        Memo(RwLock::new(HashMap::new()))
    }

    fn get_or(&self, set: Subset, compute: impl FnOnce() -> T) -> T {
        if let Some(v) = self.0.read().expect("memo lock poisoned").get(&set.0) {
            return v.clone();
        }
        let v = compute();
        self.0.write().expect("memo lock poisoned").insert(set.0, v.clone());
        v
    }
}

/// `g#(A) = g(S) - g(S \ A)`.
pub struct Dual<T: Scalar> {
    inner: Oracle<T>,
    total: T,
    memo: Memo<T>,
}

impl<T: Scalar> fmt::Debug for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Dual").field(&self.inner).finish()
    }
}

impl<T: Scalar> SetFunction<T> for Dual<T> {
    fn ground_size(&self) -> usize {
        self.inner.n()
    }

    fn value(&self, set: Subset) -> T {
        self.memo.get_or(set, || {
            self.total.clone() - self.inner.at(set.complement(self.inner.n()))
        })
    }

    fn props(&self) -> Props {
        let p = self.inner.props();
        Props {
            normalized: p.normalized,
            nondecreasing: p.nondecreasing,
            submodular: p.supermodular,
            supermodular: p.submodular,
        }
    }

    fn modular_weights(&self) -> Option<Vec<T>> {
        self.inner.modular_weights()
    }
}

pub fn dual<T: Scalar>(g: &Oracle<T>) -> Oracle<T> {
    if g.modular_weights().is_some() && g.at(Subset::EMPTY).is_zero() {
        return g.clone();
    }
    Oracle::new(Dual {
        total: g.total(),
        inner: g.clone(),
        memo: Memo::new(),
    })
}

/// `f_A(B) = f(A ∪ B) - f(A)` on the complement of `A`.
pub struct Contraction<T: Scalar> {
    inner: Oracle<T>,
    by: Subset,
    kept: Subset,
    base: T,
    memo: Memo<T>,
}

impl<T: Scalar> Contraction<T> {
    pub fn kept(&self) -> Subset {
        self.kept
    }
}

impl<T: Scalar> fmt::Debug for Contraction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Contraction")
            .field("by", &self.by)
            .field("inner", &self.inner)
            .finish()
    }
}

impl<T: Scalar> SetFunction<T> for Contraction<T> {
    fn ground_size(&self) -> usize {
        self.kept.len()
    }

    fn value(&self, set: Subset) -> T {
        self.memo.get_or(set, || {
            self.inner.at(self.by | set.expand(self.kept)) - self.base.clone()
        })
    }

    fn props(&self) -> Props {
        Props {
            normalized: true,
            ..self.inner.props()
        }
    }

    fn modular_weights(&self) -> Option<Vec<T>> {
        let w = self.inner.modular_weights()?;
        Some(self.kept.iter().map(|i| w[i].clone()).collect())
    }
}

pub fn contract<T: Scalar>(f: &Oracle<T>, by: Subset) -> Oracle<T> {
    if by.is_empty() {
        return f.clone();
    }
    Oracle::new(Contraction {
        base: f.at(by),
        kept: by.complement(f.n()),
        inner: f.clone(),
        by,
        memo: Memo::new(),
    })
}

/// `f|_A(B) = f(B)` for `B ⊂ A`.
pub struct Restriction<T: Scalar> {
    inner: Oracle<T>,
    kept: Subset,
    memo: Memo<T>,
}

impl<T: Scalar> Restriction<T> {
    pub fn kept(&self) -> Subset {
        self.kept
    }
}

impl<T: Scalar> fmt::Debug for Restriction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Restriction")
            .field("to", &self.kept)
            .field("inner", &self.inner)
            .finish()
    }
}

impl<T: Scalar> SetFunction<T> for Restriction<T> {
    fn ground_size(&self) -> usize {
        self.kept.len()
    }

    fn value(&self, set: Subset) -> T {
        self.memo.get_or(set, || self.inner.at(set.expand(self.kept)))
    }

    fn props(&self) -> Props {
        self.inner.props()
    }

    fn modular_weights(&self) -> Option<Vec<T>> {
        let w = self.inner.modular_weights()?;
        Some(self.kept.iter().map(|i| w[i].clone()).collect())
    }
}

pub fn restrict<T: Scalar>(f: &Oracle<T>, to: Subset) -> Oracle<T> {
    if to == f.full() {
        return f.clone();
    }
    Oracle::new(Restriction {
        inner: f.clone(),
        kept: to,
        memo: Memo::new(),
    })
}

/// `(f1 ⊕ f2)(A) = f1(A ∩ S1) + f2(A ∩ S2)` over an embedding of both
/// ground sets into `0..n`.
pub struct DirectSum<T: Scalar> {
    first: Oracle<T>,
    first_at: Subset,
    second: Oracle<T>,
    second_at: Subset,
}

impl<T: Scalar> fmt::Debug for DirectSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectSum")
            .field("first_at", &self.first_at)
            .field("second_at", &self.second_at)
            .finish()
    }
}

impl<T: Scalar> SetFunction<T> for DirectSum<T> {
    fn ground_size(&self) -> usize {
        self.first_at.len() + self.second_at.len()
    }

    fn value(&self, set: Subset) -> T {
        self.first.at((set & self.first_at).compress(self.first_at))
            + self.second.at((set & self.second_at).compress(self.second_at))
    }

    fn props(&self) -> Props {
        self.first.props().meet(self.second.props())
    }

    fn modular_weights(&self) -> Option<Vec<T>> {
        let (w1, w2) = (self.first.modular_weights()?, self.second.modular_weights()?);
        let mut w = vec![T::zero(); self.ground_size()];
        for (i, e) in self.first_at.iter().enumerate() {
            w[e] = w1[i].clone();
        }
        for (i, e) in self.second_at.iter().enumerate() {
            w[e] = w2[i].clone();
        }
        Some(w)
    }
}

/// Places `f1` on the elements `at1` and `f2` on `at2`; together they must
/// partition `0..|at1|+|at2|`.
pub fn direct_sum<T: Scalar>(f1: &Oracle<T>, at1: Subset, f2: &Oracle<T>, at2: Subset) -> Result<Oracle<T>> {
    if !at1.is_disjoint(at2) {
        return Err(Error::GroundMismatch(format!("{at1:?} and {at2:?} overlap")));
    }
    if at1.len() != f1.n() || at2.len() != f2.n() {
        return Err(Error::GroundMismatch(
            "embedding size differs from oracle ground set".into(),
        ));
    }
    let n = at1.len() + at2.len();
    if at1 | at2 != Subset::full(n) {
        return Err(Error::GroundMismatch(format!("{:?} does not cover 0..{n}", at1 | at2)));
    }
    Ok(Oracle::new(DirectSum {
        first: f1.clone(),
        first_at: at1,
        second: f2.clone(),
        second_at: at2,
    }))
}
