//! Expected search cost, the generalized Sidney decomposition, the
//! block-ordered 2-approximation, curvature-refined ratios, and exact
//! brute-force optima.

use serde::Serialize;

use crate::density::{max_density_subset, SearchInstance};
use crate::error::{Error, Result};
use crate::scalar::{max_of, min_of, Scalar};
use crate::setfn::{curvature_report, dual};
use crate::subset::{SearchOrder, Subset};

/// Largest instance solved by the subset dynamic program.
pub const DP_LIMIT: usize = 16;
/// Largest instance solved by full permutation enumeration.
pub const ENUMERATION_LIMIT: usize = 9;

fn check_order<T: Scalar>(inst: &SearchInstance<T>, order: &SearchOrder) -> Result<()> {
    if order.len() == inst.n() {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "order has {} elements, instance has {}",
            order.len(),
            inst.n()
        )))
    }
}

/// `c(π) = Σ_j (g(S_j) - g(S_j - j)) f(S_j)`.
pub fn expected_cost<T: Scalar>(inst: &SearchInstance<T>, order: &SearchOrder) -> Result<T> {
    check_order(inst, order)?;
    Ok(order
        .prefixes()
        .map(|(e, p)| (inst.g.at(p) - inst.g.at(p.without(e))) * inst.f.at(p))
        .sum())
}

/// Ordered blocks, each of maximum density once its predecessors are contracted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition<T> {
    pub blocks: Vec<Subset>,
    /// Density of each block in its contracted instance.
    pub rhos: Vec<T>,
}

impl<T> Decomposition<T> {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Union of the blocks preceding block `i`.
    pub fn prefix(&self, i: usize) -> Subset {
        self.blocks[..i].iter().fold(Subset::EMPTY, |acc, &b| acc | b)
    }
}

pub fn sidney_decomposition<T: Scalar>(inst: &SearchInstance<T>) -> Result<Decomposition<T>> {
    let full = inst.full();
    let mut done = Subset::EMPTY;
    let mut blocks = Vec::new();
    let mut rhos = Vec::new();
    while done != full {
        let rest = full - done;
        let sub = inst.contract(done);
        let best = max_density_subset(&sub)?;
        let block = best.set.expand(rest);
        blocks.push(block);
        rhos.push(best.rho);
        done = done | block;
    }
    Ok(Decomposition { blocks, rhos })
}

/// An order together with its cost and certified bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostReport<T> {
    pub order: SearchOrder,
    pub cost: T,
    /// Certified lower bound on the optimal cost.
    pub lower_bound: T,
    /// Proven approximation guarantee of the method relative to the optimum.
    pub ratio_bound: T,
}

/// Searches the Sidney blocks in order, each block in ascending element index.
///
/// The lower bound adds, per block `A_i` after prefix `U`, the exact offset
/// `g_U(A_i) f(U)` plus the within-block bound `g_U(A_i) f_U(A_i) / 2`
/// (exact for singleton blocks). Every optimal search respects the
/// decomposition, so the sum bounds the optimum from below, and the
/// emitted cost is at most twice it.
pub fn two_approx_search<T: Scalar>(inst: &SearchInstance<T>) -> Result<CostReport<T>> {
    let dec = sidney_decomposition(inst)?;
    let order = SearchOrder::new(dec.blocks.iter().flat_map(|b| b.iter()).collect())?;
    let cost = expected_cost(inst, &order)?;

    let mut lower_bound = T::zero();
    for (i, &block) in dec.blocks.iter().enumerate() {
        let before = dec.prefix(i);
        let after = before | block;
        let g_mass = inst.g.at(after) - inst.g.at(before);
        let f_before = inst.f.at(before);
        let f_cost = inst.f.at(after) - f_before.clone();
        let within = g_mass.clone() * f_cost;
        let within = if block.len() == 1 { within } else { within * T::half() };
        lower_bound = lower_bound + g_mass * f_before + within;
    }

    Ok(CostReport {
        order,
        cost,
        lower_bound,
        ratio_bound: curvature_ratio_bound(inst),
    })
}

/// Solver selected by [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Block-ordered 2-approximation.
    Sidney,
    /// Exact for series-parallel decomposable instances.
    Spd,
    /// Exact subset dynamic program.
    Brute,
}

impl std::str::FromStr for SolveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sidney" => Ok(SolveMethod::Sidney),
            "spd" => Ok(SolveMethod::Spd),
            "brute" => Ok(SolveMethod::Brute),
            other => Err(Error::Invalid(format!("unknown method {other:?}"))),
        }
    }
}

/// Runs `method`; exact methods report their cost as the lower bound and a
/// ratio bound of one.
pub fn solve<T: Scalar>(inst: &SearchInstance<T>, method: SolveMethod) -> Result<CostReport<T>> {
    let (order, cost) = match method {
        SolveMethod::Sidney => return two_approx_search(inst),
        SolveMethod::Spd => crate::spd::spd_optimal_search(inst)?,
        SolveMethod::Brute => brute_force_optimal(inst)?,
    };
    Ok(CostReport {
        order,
        lower_bound: cost.clone(),
        cost,
        ratio_bound: T::one(),
    })
}

/// `2/(1+δ)` with `δ = min{θ, 2θ max(1-κ_f, 1-κ_{g#}) / (1+θ)}` when both
/// curvatures are below one; `2/(1+θ)` when either function is modular;
/// `2` otherwise.
pub fn curvature_ratio_bound<T: Scalar>(inst: &SearchInstance<T>) -> T {
    let two = T::one() + T::one();
    let Ok(report) = curvature_report(&inst.f, &inst.g) else {
        return two;
    };
    let one = T::one();
    let (kf, kg, theta) = (report.kappa_f, report.kappa_gsharp, report.theta);
    if kf.is_negligible() || kg.is_negligible() {
        return two / (one + theta);
    }
    if !(kf < one) || !(kg < one) || kf.approx_eq(&one) || kg.approx_eq(&one) {
        return two;
    }
    let slack = max_of([one.clone() - kf, one.clone() - kg]).expect("two values");
    let alt = two.clone() * theta.clone() * slack / (one.clone() + theta.clone());
    let delta = min_of([theta, alt]).expect("two values");
    two / (one + delta)
}

/// Exact optimum by dynamic programming over searched prefixes; among optimal
/// orders returns the lexicographically smallest.
pub fn brute_force_optimal<T: Scalar>(inst: &SearchInstance<T>) -> Result<(SearchOrder, T)> {
    let n = inst.n();
    let ft = inst.f.table(DP_LIMIT)?;
    let gt = inst.g.table(DP_LIMIT)?;
    let full = (1usize << n) - 1;
    let step = |m: usize, s: usize| {
        let next = m | 1 << s;
        (gt[next].clone() - gt[m].clone()) * ft[next].clone()
    };

    // rest[m]: cheapest completion once the elements of m have been searched.
    let mut rest = vec![T::zero(); full + 1];
    for m in (0..full).rev() {
        rest[m] = min_of(
            (0..n)
                .filter(|&s| m >> s & 1 == 0)
                .map(|s| step(m, s) + rest[m | 1 << s].clone()),
        )
        .expect("m is not full");
    }

    let mut perm = Vec::with_capacity(n);
    let mut m = 0usize;
    while m != full {
        let s = (0..n)
            .filter(|&s| m >> s & 1 == 0)
            .find(|&s| (step(m, s) + rest[m | 1 << s].clone()).approx_eq(&rest[m]))
            .expect("some element attains the minimum");
        perm.push(s);
        m |= 1 << s;
    }
    Ok((SearchOrder::new(perm)?, rest[0].clone()))
}

/// Rearranges `perm` into the next permutation in lexicographic order.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).expect("pivot has a successor");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Exact optimum by enumerating all `n!` orders; the first minimal order in
/// lexicographic order wins. Cross-checks [`brute_force_optimal`].
pub fn brute_force_enumerate<T: Scalar>(inst: &SearchInstance<T>) -> Result<(SearchOrder, T)> {
    min_over_orders(inst, |o| expected_cost(inst, o))
}

fn min_over_orders<T: Scalar>(
    inst: &SearchInstance<T>,
    objective: impl Fn(&SearchOrder) -> Result<T>,
) -> Result<(SearchOrder, T)> {
    let n = inst.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            n,
            limit: ENUMERATION_LIMIT,
            what: "permutation enumeration",
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(SearchOrder, T)> = None;
    loop {
        let order = SearchOrder::new(perm.clone())?;
        let c = objective(&order)?;
        if best.as_ref().is_none_or(|(_, b)| c.definitely_lt(b)) {
            best = Some((order, c));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("at least one permutation"))
}

/// `ε(π) = Σ_j d_j f(S_j) d_j g(S_j)`.
pub fn epsilon<T: Scalar>(inst: &SearchInstance<T>, order: &SearchOrder) -> Result<T> {
    check_order(inst, order)?;
    Ok(order
        .prefixes()
        .map(|(e, p)| inst.f.marginal(p, e) * inst.g.marginal(p, e))
        .sum())
}

/// `π1` sorts by `f(s)` and `π2` by `g#(s)`, both non-increasing with ties
/// broken by ascending index.
pub fn epsilon_greedy_orders<T: Scalar>(inst: &SearchInstance<T>) -> (SearchOrder, SearchOrder) {
    let gd = dual(&inst.g);
    let by = |key: &dyn Fn(usize) -> T| {
        let mut perm: Vec<usize> = (0..inst.n()).collect();
        perm.sort_by(|&a, &b| key(b).partial_cmp(&key(a)).unwrap_or(std::cmp::Ordering::Equal));
        SearchOrder::new(perm).expect("sorted indices form a permutation")
    };
    (by(&|s| inst.f.singleton(s)), by(&|s| gd.singleton(s)))
}

/// `min_π ε(π)` by enumeration.
pub fn epsilon_min<T: Scalar>(inst: &SearchInstance<T>) -> Result<(SearchOrder, T)> {
    min_over_orders(inst, |o| epsilon(inst, o))
}
