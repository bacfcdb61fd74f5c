//! Total curvature and greedy vertices of the base polyhedron.

use serde::Serialize;

use super::{dual, Oracle};
use crate::error::{Error, Result};
use crate::scalar::{max_of, Scalar};
use crate::subset::SearchOrder;

/// `κ = max_s (f(s) + f(S-s) - f(S)) / f(s)`.
pub fn curvature<T: Scalar>(f: &Oracle<T>) -> Result<T> {
    let full = f.full();
    let total = f.total();
    let ratios = (0..f.n())
        .map(|s| {
            let fs = f.singleton(s);
            if !(fs > T::zero()) || fs.is_negligible() {
                return Err(Error::ZeroCost(s));
            }
            Ok((fs.clone() + f.at(full.without(s)) - total.clone()) / fs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(max_of(ratios).unwrap_or_else(T::zero))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport<T> {
    pub kappa_f: T,
    pub kappa_gsharp: T,
    /// `(1 - κ_f)(1 - κ_{g#})`.
    pub theta: T,
}

pub fn curvature_report<T: Scalar>(f: &Oracle<T>, g: &Oracle<T>) -> Result<CurvatureReport<T>> {
    let kappa_f = curvature(f)?;
    let kappa_gsharp = curvature(&dual(g))?;
    let theta = (T::one() - kappa_f.clone()) * (T::one() - kappa_gsharp.clone());
    Ok(CurvatureReport {
        kappa_f,
        kappa_gsharp,
        theta,
    })
}

/// Greedy vertex `x_j = f(S_j) - f(S_j - j)` along `order`.
pub fn base_polyhedron_vertex<T: Scalar>(f: &Oracle<T>, order: &SearchOrder) -> Vec<T> {
    let mut x = vec![T::zero(); f.n()];
    for (e, prefix) in order.prefixes() {
        x[e] = f.at(prefix) - f.at(prefix.without(e));
    }
    x
}
