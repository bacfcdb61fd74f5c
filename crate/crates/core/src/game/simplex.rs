//! Revised primal simplex for packing LPs `max 1ᵀz s.t. Az <= 1, z >= 0`.
//!
//! The origin is feasible, so the slack basis starts phase two directly.
//! Bland's rule (lowest entering index, lowest leaving variable) guarantees
//! termination; with exact scalars the optimum is exact.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) struct Packing<T> {
    /// Primal solution, one entry per column of `A`.
    pub z: Vec<T>,
    /// Dual prices, one per row.
    pub y: Vec<T>,
    pub objective: T,
    pub pivots: usize,
}

const MAX_PIVOTS: usize = 100_000;

fn positive<T: Scalar>(v: &T) -> bool {
    *v > T::zero() && !v.is_negligible()
}

/// `a[i][j]`: row `i`, column `j`; entries must be positive.
pub(crate) fn solve_packing<T: Scalar>(a: &[Vec<T>]) -> Result<Packing<T>> {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let column = |j: usize, k: usize| -> T {
        if j < cols {
            a[k][j].clone()
        } else if j - cols == k {
            T::one()
        } else {
            T::zero()
        }
    };
    let cost = |j: usize| if j < cols { T::one() } else { T::zero() };

    let mut basis: Vec<usize> = (cols..cols + m).collect();
    let mut binv: Vec<Vec<T>> = (0..m)
        .map(|i| (0..m).map(|k| if i == k { T::one() } else { T::zero() }).collect())
        .collect();
    let mut xb = vec![T::one(); m];
    let mut pivots = 0;

    loop {
        let y: Vec<T> = (0..m)
            .map(|k| (0..m).map(|i| cost(basis[i]) * binv[i][k].clone()).sum())
            .collect();
        let entering = (0..cols + m).filter(|j| !basis.contains(j)).find(|&j| {
            let reduced = cost(j) - (0..m).map(|k| y[k].clone() * column(j, k)).sum::<T>();
            positive(&reduced)
        });
        let Some(j) = entering else {
            let mut z = vec![T::zero(); cols];
            for (i, &b) in basis.iter().enumerate() {
                if b < cols {
                    z[b] = xb[i].clone();
                }
            }
            let objective = z.iter().cloned().sum();
            return Ok(Packing {
                z,
                y,
                objective,
                pivots,
            });
        };
        if pivots == MAX_PIVOTS {
            return Err(Error::Invalid("simplex pivot limit reached".into()));
        }
        let u: Vec<T> = (0..m)
            .map(|i| (0..m).map(|k| binv[i][k].clone() * column(j, k)).sum())
            .collect();
        let mut leave: Option<(usize, T)> = None;
        for i in (0..m).filter(|&i| positive(&u[i])) {
            let r = xb[i].clone() / u[i].clone();
            let better = match &leave {
                None => true,
                Some((l, best)) => r.definitely_lt(best) || (r.approx_eq(best) && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, r));
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Invalid("packing LP is unbounded".into()));
        };

        let pivot = u[r].clone();
        for v in binv[r].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        xb[r] = xb[r].clone() / pivot;
        let (row_r, xr) = (binv[r].clone(), xb[r].clone());
        for i in (0..m).filter(|&i| i != r && !u[i].is_zero()) {
            for k in 0..m {
                binv[i][k] = binv[i][k].clone() - u[i].clone() * row_r[k].clone();
            }
            xb[i] = xb[i].clone() - u[i].clone() * xr.clone();
        }
        basis[r] = j;
        pivots += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::Rational;

    #[test]
    fn two_by_two() {
        // Matching pennies shifted by 1: value 3/2, so the packing optimum is 2/3.
        let a: Vec<Vec<Rational>> = vec![vec![ratio(2, 1), ratio(1, 1)], vec![ratio(1, 1), ratio(2, 1)]];
        let sol = solve_packing(&a).unwrap();
        assert_eq!(sol.objective, ratio(2, 3));
        assert_eq!(sol.z, vec![ratio(1, 3), ratio(1, 3)]);
        assert_eq!(sol.y, vec![ratio(1, 3), ratio(1, 3)]);
    }

    #[test]
    fn dominated_column_unused() {
        let a: Vec<Vec<f64>> = vec![vec![1.0, 3.0], vec![1.0, 3.0]];
        let sol = solve_packing(&a).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert_eq!(sol.z[1], 0.0);
    }
}
