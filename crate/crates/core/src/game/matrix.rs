//! Matrix-game oracle: rows are all orders of `S`, columns are hiding
//! places, payoff `f(S_s^π)`. Solved by fictitious play with certified
//! bounds, or exactly by linear programming.

use std::collections::BTreeMap;

use serde::Serialize;

use super::simplex::solve_packing;
use super::{best_response_searcher, HiderStrategy};
use crate::error::{Error, Result};
use crate::scalar::{max_of, Scalar};
use crate::setfn::Oracle;
use crate::sidney::next_permutation;
use crate::subset::SearchOrder;

/// Largest ground set the oracle accepts (`7! = 5040` rows).
pub const MATRIX_LIMIT: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MatrixMethod {
    FictitiousPlay { iters: usize, tol: f64 },
    ExactLp,
}

impl Default for MatrixMethod {
    fn default() -> Self {
        MatrixMethod::FictitiousPlay {
            iters: 200_000,
            tol: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGameResult<T> {
    /// Midpoint of the certified bounds (exact for the LP).
    pub value: T,
    /// `min_π c(π, x)` for the reported Hider strategy.
    pub lower: T,
    /// `max_s C(p, s)` for the reported Searcher strategy.
    pub upper: T,
    /// Support of the Searcher strategy.
    pub searcher: Vec<(SearchOrder, T)>,
    pub hider: HiderStrategy<T>,
    /// Fictitious-play rounds or simplex pivots.
    pub iterations: usize,
    pub converged: bool,
}

fn cost_at<T: Scalar>(table: &[T], perm: &[usize]) -> Vec<T> {
    let mut out = vec![T::zero(); perm.len()];
    let mut before = 0usize;
    for &s in perm {
        before |= 1 << s;
        out[s] = table[before].clone();
    }
    out
}

/// Lexicographically smallest order minimizing `Σ x(s) f(S_s^π)`.
fn best_order<T: Scalar>(table: &[T], x: &[T]) -> (Vec<usize>, T) {
    let n = x.len();
    let full = (1usize << n) - 1;
    let step = |m: usize, s: usize| x[s].clone() * table[m | 1 << s].clone();
    let mut rest = vec![T::zero(); full + 1];
    for m in (0..full).rev() {
        let mut best: Option<T> = None;
        for s in (0..n).filter(|&s| m >> s & 1 == 0) {
            let c = step(m, s) + rest[m | 1 << s].clone();
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
        rest[m] = best.expect("m is not full");
    }
    let mut perm = Vec::with_capacity(n);
    let mut m = 0usize;
    while m != full {
        let s = (0..n)
            .filter(|&s| m >> s & 1 == 0)
            .find(|&s| (step(m, s) + rest[m | 1 << s].clone()).approx_eq(&rest[m]))
            .expect("minimum attained");
        perm.push(s);
        m |= 1 << s;
    }
    (perm, rest[0].clone())
}

fn pack(perm: &[usize]) -> u64 {
    perm.iter().enumerate().fold(0, |k, (i, &s)| k | (s as u64) << (4 * i))
}

fn unpack(key: u64, n: usize) -> Vec<usize> {
    (0..n).map(|i| (key >> (4 * i) & 0xf) as usize).collect()
}

/// Solves the search game as a matrix game over all `n!` orders.
pub fn matrix_game_solve<T: Scalar>(f: &Oracle<T>, method: MatrixMethod) -> Result<MatrixGameResult<T>> {
    let n = f.n();
    if n > MATRIX_LIMIT {
        return Err(Error::Capacity {
            n,
            limit: MATRIX_LIMIT,
            what: "matrix game",
        });
    }
    match method {
        MatrixMethod::ExactLp => exact_lp(f),
        MatrixMethod::FictitiousPlay { iters, tol } => fictitious_play(f, iters.max(1), tol),
    }
}

/// `max_s C(p, s)` for a sparse Searcher strategy.
fn upper_bound<T: Scalar>(table: &[T], n: usize, support: &[(SearchOrder, T)]) -> T {
    let mut c = vec![T::zero(); n];
    for (order, p) in support {
        for (s, v) in cost_at(table, order.as_slice()).into_iter().enumerate() {
            c[s] = c[s].clone() + p.clone() * v;
        }
    }
    max_of(c).expect("nonempty ground set")
}

fn exact_lp<T: Scalar>(f: &Oracle<T>) -> Result<MatrixGameResult<T>> {
    let n = f.n();
    let table = f.table(MATRIX_LIMIT)?;
    let mut perms = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        perms.push(perm.clone());
        if !next_permutation(&mut perm) {
            break;
        }
    }
    // Shift payoffs so every entry is positive; the value shifts by the same amount.
    let shift = T::one();
    let rows: Vec<Vec<T>> = perms
        .iter()
        .map(|p| cost_at(&table, p).into_iter().map(|c| c + shift.clone()).collect())
        .collect();
    let a: Vec<Vec<T>> = (0..n).map(|s| rows.iter().map(|r| r[s].clone()).collect()).collect();
    let sol = solve_packing(&a)?;
    let shifted = T::one() / sol.objective;
    let searcher: Vec<(SearchOrder, T)> = perms
        .into_iter()
        .zip(sol.z)
        .filter(|(_, z)| !z.is_zero())
        .map(|(p, z)| Ok((SearchOrder::new(p)?, z * shifted.clone())))
        .collect::<Result<_>>()?;
    let hider = HiderStrategy {
        x: sol.y.into_iter().map(|y| y * shifted.clone()).collect(),
    };
    let lower = best_response_searcher(f, &hider)?.1;
    let upper = upper_bound(&table, n, &searcher);
    Ok(MatrixGameResult {
        value: shifted - shift,
        converged: lower.approx_eq(&upper),
        lower,
        upper,
        searcher,
        hider,
        iterations: sol.pivots,
    })
}

fn fictitious_play<T: Scalar>(f: &Oracle<T>, iters: usize, tol: f64) -> Result<MatrixGameResult<T>> {
    let n = f.n();
    let table = f.table(MATRIX_LIMIT)?;
    let ftable: Vec<f64> = table.iter().map(Scalar::to_f64).collect();

    let mut hider_counts = vec![0u64; n];
    let mut colsum = vec![0f64; n];
    let mut history: Vec<u64> = Vec::with_capacity(iters);
    let mut best_lower = (f64::NEG_INFINITY, None::<Vec<u64>>);
    let mut best_upper = (f64::INFINITY, 0usize);
    let mut rounds = 0;

    for t in 1..=iters {
        rounds = t;
        let played: u64 = hider_counts.iter().sum();
        let x: Vec<f64> = if played == 0 {
            vec![1.0 / n as f64; n]
        } else {
            hider_counts.iter().map(|&c| c as f64 / played as f64).collect()
        };
        let (perm, lower) = best_order(&ftable, &x);
        if lower > best_lower.0 {
            best_lower = (lower, (played > 0).then(|| hider_counts.clone()));
        }
        history.push(pack(&perm));
        let mut before = 0usize;
        for &s in &perm {
            before |= 1 << s;
            colsum[s] += ftable[before];
        }
        let top = colsum.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top / (t as f64) < best_upper.0 {
            best_upper = (top / t as f64, t);
        }
        let s = colsum.iter().position(|&c| c == top).expect("maximum attained");
        hider_counts[s] += 1;
        if best_upper.0 - best_lower.0 <= tol {
            break;
        }
    }

    let hider = match best_lower.1 {
        None => HiderStrategy {
            x: vec![T::from_ratio(1, n as i64); n],
        },
        Some(counts) => {
            let total: u64 = counts.iter().sum();
            HiderStrategy {
                x: counts.iter().map(|&c| T::from_ratio(c as i64, total as i64)).collect(),
            }
        }
    };
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for &key in &history[..best_upper.1] {
        *counts.entry(unpack(key, n)).or_default() += 1;
    }
    let searcher: Vec<(SearchOrder, T)> = counts
        .into_iter()
        .map(|(p, c)| Ok((SearchOrder::new(p)?, T::from_ratio(c as i64, best_upper.1 as i64))))
        .collect::<Result<_>>()?;

    let lower = best_response_searcher(f, &hider)?.1;
    let upper = upper_bound(&table, n, &searcher);
    Ok(MatrixGameResult {
        value: (lower.clone() + upper.clone()) * T::half(),
        converged: (upper.to_f64() - lower.to_f64()) <= tol,
        lower,
        upper,
        searcher,
        hider,
        iterations: rounds,
    })
}

/// Payoff of a fixed order against every hiding place.
pub fn order_costs<T: Scalar>(f: &Oracle<T>, order: &SearchOrder) -> Vec<T> {
    let mut out = vec![T::zero(); f.n()];
    for (e, prefix) in order.prefixes() {
        out[e] = f.at(prefix);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::{path, q};
    use crate::game::{game_value_spd, modular_game_solution};
    use crate::setfn::fixtures::modular;
    use crate::Rational;

    #[test]
    fn modular_pair_exact() {
        let f = modular::<Rational>(&[(1, 1), (2, 1)]);
        let r = matrix_game_solve(&f, MatrixMethod::ExactLp).unwrap();
        assert_eq!(r.value, q(7, 3));
        assert_eq!((r.lower.clone(), r.upper.clone()), (q(7, 3), q(7, 3)));
        assert_eq!(r.hider.x, vec![q(1, 3), q(2, 3)]);
    }

    #[test]
    fn modular_pair_fictitious_play() {
        let f = modular::<f64>(&[(1, 1), (2, 1)]);
        let r = matrix_game_solve(&f, MatrixMethod::default()).unwrap();
        assert!(r.lower <= 7.0 / 3.0 + 1e-12 && r.upper >= 7.0 / 3.0 - 1e-12);
        assert!(r.converged && r.upper - r.lower <= 1e-3);
    }

    #[test]
    fn single_element() {
        let f = modular::<Rational>(&[(5, 1)]);
        for method in [MatrixMethod::ExactLp, MatrixMethod::default()] {
            let r = matrix_game_solve(&f, method).unwrap();
            assert_eq!((r.value, r.converged), (q(5, 1), true));
        }
    }

    #[test]
    fn path_tree_brackets_two() {
        let r = matrix_game_solve(&path(), MatrixMethod::default()).unwrap();
        assert!(r.lower <= q(2, 1) && q(2, 1) <= r.upper);
        assert_eq!(game_value_spd(&path()).unwrap().value, q(2, 1));
        assert_eq!(
            matrix_game_solve(&path(), MatrixMethod::ExactLp).unwrap().value,
            q(2, 1)
        );
    }

    #[test]
    fn uniform_modular_values() {
        for n in 1..=5 {
            let f = modular::<Rational>(&vec![(1, 1); n]);
            let r = matrix_game_solve(&f, MatrixMethod::ExactLp).unwrap();
            assert_eq!(r.value, modular_game_solution(&f).unwrap().value);
        }
    }

    #[test]
    fn capacity() {
        let f = modular::<f64>(&[(1, 1); 8]);
        assert!(matches!(
            matrix_game_solve(&f, MatrixMethod::ExactLp),
            Err(Error::Capacity { limit: 7, .. })
        ));
    }
}
