//! The zero-sum search game: a Hider picks an element, a Searcher picks an
//! order and pays the Hider `f` of the prefix ending at the hidden element.
//!
//! Provides the exact equilibrium for series-parallel decomposable costs,
//! the modular closed form, curvature-based approximate strategies, exact
//! evaluation of searcher samplers, and a matrix-game oracle in [`matrix`].

pub mod matrix;
mod simplex;

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::density::SearchInstance;
use crate::error::{Error, Result};
use crate::scalar::{max_of, Scalar};
use crate::setfn::{self, curvature, verify_structure, Modular, Oracle, MAX_VERIFY};
use crate::sidney::{brute_force_optimal, DP_LIMIT};
use crate::spd::{find_f_initial, find_separator};
use crate::subset::{GroundSet, SearchOrder, Subset};

pub use matrix::{matrix_game_solve, MatrixGameResult, MatrixMethod, MATRIX_LIMIT};

/// Probability distribution of the Hider over the ground set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HiderStrategy<T> {
    pub x: Vec<T>,
}

impl<T: Scalar> HiderStrategy<T> {
    pub fn new(x: Vec<T>) -> Result<Self> {
        if x.iter().any(|v| v.is_negative() && !v.is_negligible()) {
            return Err(Error::Invalid("hider probabilities must be nonnegative".into()));
        }
        let total: T = x.iter().cloned().sum();
        if !total.approx_eq(&T::one()) {
            return Err(Error::Invalid(format!("hider probabilities sum to {total}")));
        }
        Ok(HiderStrategy { x })
    }

    pub fn point(n: usize, s: usize) -> Self {
        let mut x = vec![T::zero(); n];
        x[s] = T::one();
        HiderStrategy { x }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn mass(&self, set: Subset) -> T {
        set.iter().map(|s| self.x[s].clone()).sum()
    }

    pub fn to_json(&self, ground: &GroundSet) -> Value {
        Value::Object(
            self.x
                .iter()
                .enumerate()
                .map(|(i, v)| (ground.label(i).to_string(), v.to_json()))
                .collect(),
        )
    }
}

/// Mixed Searcher strategy as a recursive sampler over original indices.
#[derive(Clone, Debug, PartialEq)]
pub enum SearcherStrategy<T> {
    /// Search `prefix` in the given order, then follow `then`.
    Series {
        prefix: Vec<usize>,
        then: Box<SearcherStrategy<T>>,
    },
    /// With probability `q` search all of `left` first, otherwise `right` first.
    Parallel {
        q: T,
        left: Box<SearcherStrategy<T>>,
        right: Box<SearcherStrategy<T>>,
    },
    Order(Vec<usize>),
    /// Start at `elements[i]` with probability `weights[i]`, then search the
    /// rest in uniformly random order.
    FirstThenUniform {
        elements: Vec<usize>,
        weights: Vec<T>,
    },
}

impl<T: Scalar> SearcherStrategy<T> {
    /// Elements covered by the sampler.
    pub fn elements(&self) -> Subset {
        match self {
            SearcherStrategy::Series { prefix, then } => {
                Subset::from_elements(prefix.iter().copied()) | then.elements()
            }
            SearcherStrategy::Parallel { left, right, .. } => left.elements() | right.elements(),
            SearcherStrategy::Order(p) => Subset::from_elements(p.iter().copied()),
            SearcherStrategy::FirstThenUniform { elements, .. } => Subset::from_elements(elements.iter().copied()),
        }
    }

    /// Checks that the sampler is a well-formed distribution over orders of `ground`.
    pub fn check(&self, ground: Subset) -> Result<()> {
        let covered = self.check_rec()?;
        if covered != ground {
            return Err(Error::Invalid(format!(
                "searcher covers {:#b}, expected {:#b}",
                covered.0, ground.0
            )));
        }
        Ok(())
    }

    fn check_rec(&self) -> Result<Subset> {
        let disjoint = |a: Subset, b: Subset| {
            if a.is_disjoint(b) {
                Ok(a | b)
            } else {
                Err(Error::Invalid("searcher parts overlap".into()))
            }
        };
        let distinct = |v: &[usize]| {
            let set = Subset::from_elements(v.iter().copied());
            if set.len() == v.len() {
                Ok(set)
            } else {
                Err(Error::Invalid("repeated element in searcher order".into()))
            }
        };
        match self {
            SearcherStrategy::Series { prefix, then } => disjoint(distinct(prefix)?, then.check_rec()?),
            SearcherStrategy::Parallel { q, left, right } => {
                if q.is_negative() || *q > T::one() {
                    return Err(Error::Invalid(format!("q = {q} outside [0, 1]")));
                }
                disjoint(left.check_rec()?, right.check_rec()?)
            }
            SearcherStrategy::Order(p) => distinct(p),
            SearcherStrategy::FirstThenUniform { elements, weights } => {
                if elements.len() != weights.len() || elements.is_empty() {
                    return Err(Error::Invalid("first-then-uniform weights mismatch".into()));
                }
                HiderStrategy::new(weights.clone())?;
                distinct(elements)
            }
        }
    }

    pub fn to_json(&self, ground: &GroundSet) -> Value {
        let names = |v: &[usize]| v.iter().map(|&i| ground.label(i)).collect::<Vec<_>>();
        match self {
            SearcherStrategy::Series { prefix, then } => json!({
                "kind": "series",
                "prefix": names(prefix),
                "then": then.to_json(ground),
            }),
            SearcherStrategy::Parallel { q, left, right } => json!({
                "kind": "parallel",
                "q": q.to_json(),
                "left": left.to_json(ground),
                "right": right.to_json(ground),
            }),
            SearcherStrategy::Order(p) => json!({"kind": "order", "order": names(p)}),
            SearcherStrategy::FirstThenUniform { elements, weights } => json!({
                "kind": "first_then_uniform",
                "first": elements
                    .iter()
                    .zip(weights)
                    .map(|(&e, w)| json!([ground.label(e), w.to_json()]))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameSolution<T> {
    pub value: T,
    /// `Φ = Σ_s x(s) f(s)`.
    pub phi: T,
    pub hider: HiderStrategy<T>,
    pub searcher: SearcherStrategy<T>,
}

/// Search cost `c_{f,x}(π) = Σ_s x(s) f(S_s^π)`.
pub fn search_cost_modular<T: Scalar>(f: &Oracle<T>, x: &HiderStrategy<T>, order: &SearchOrder) -> Result<T> {
    if x.len() != f.n() || order.len() != f.n() {
        return Err(Error::GroundMismatch(format!(
            "f has {} elements, x {}, order {}",
            f.n(),
            x.len(),
            order.len()
        )));
    }
    Ok(order.prefixes().map(|(e, p)| x.x[e].clone() * f.at(p)).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyhedronCheck {
    pub holds: bool,
    /// First violating set in mask order.
    pub witness: Option<Subset>,
}

/// Membership of `x` in `B(f) / f(S)`: `x(A) <= f(A)/f(S)` for all `A`, `x(S) = 1`.
pub fn in_scaled_base_polyhedron<T: Scalar>(f: &Oracle<T>, x: &HiderStrategy<T>) -> Result<PolyhedronCheck> {
    let n = f.n();
    if n > MAX_VERIFY {
        return Err(Error::Capacity {
            n,
            limit: MAX_VERIFY,
            what: "base polyhedron check",
        });
    }
    if x.len() != n {
        return Err(Error::GroundMismatch(format!("f has {n} elements, x has {}", x.len())));
    }
    let total = f.total();
    if !(total > T::zero()) {
        return Err(Error::Assumption("f(S) must be positive".into()));
    }
    let full = f.full();
    if !x.mass(full).approx_eq(&T::one()) {
        return Ok(PolyhedronCheck {
            holds: false,
            witness: Some(full),
        });
    }
    let witness = full
        .subsets()
        .find(|&a| !x.mass(a).approx_le(&(f.at(a) / total.clone())));
    Ok(PolyhedronCheck {
        holds: witness.is_none(),
        witness,
    })
}

fn singletons<T: Scalar>(f: &Oracle<T>) -> Vec<T> {
    (0..f.n()).map(|s| f.singleton(s)).collect()
}

/// Closed-form equilibrium for modular `f`: the Hider picks `s` with
/// probability `f(s)/f(S)`; the Searcher starts there with the same
/// probability and continues uniformly at random.
pub fn modular_game_solution<T: Scalar>(f: &Oracle<T>) -> Result<GameSolution<T>> {
    let weights = match f.modular_weights() {
        Some(w) => w,
        None if f.n() <= MAX_VERIFY && verify_structure(f)?.modular() && f.at(Subset::EMPTY).is_negligible() => {
            singletons(f)
        }
        None => return Err(Error::Assumption("cost function is not modular".into())),
    };
    if let Some(s) = weights.iter().position(|w| !(*w > T::zero())) {
        return Err(Error::ZeroCost(s));
    }
    let total: T = weights.iter().cloned().sum();
    let x: Vec<T> = weights.iter().map(|w| w.clone() / total.clone()).collect();
    let phi: T = weights.iter().map(|w| w.clone() * w.clone()).sum::<T>() / total.clone();
    let value = (total + phi.clone()) * T::half();
    Ok(GameSolution {
        value,
        phi,
        searcher: SearcherStrategy::FirstThenUniform {
            elements: (0..f.n()).collect(),
            weights: x.clone(),
        },
        hider: HiderStrategy { x },
    })
}

struct Node<T> {
    x: Vec<T>,
    phi: T,
    value: T,
    searcher: SearcherStrategy<T>,
}

/// Exact equilibrium when `f` is series-parallel decomposable.
///
/// Series steps on an f-initial `I` hide nothing in `I` and search it first.
/// Parallel steps on a separator `A` mix the two sides' equilibria with
/// weights `f(A)/f(S)` and search `A` first with probability
/// `q = 1/2 + (Φ_A - Φ_Ā) / (2 f(S))`.
pub fn game_value_spd<T: Scalar>(f: &Oracle<T>) -> Result<GameSolution<T>> {
    let node = solve_node(f, f.full())?;
    Ok(GameSolution {
        value: node.value,
        phi: node.phi,
        hider: HiderStrategy { x: node.x },
        searcher: node.searcher,
    })
}

fn solve_node<T: Scalar>(f: &Oracle<T>, elements: Subset) -> Result<Node<T>> {
    let n = f.n();
    if n == 1 {
        let e = elements.first().expect("singleton");
        let v = f.total();
        return Ok(Node {
            x: vec![T::one()],
            phi: v.clone(),
            value: v,
            searcher: SearcherStrategy::Order(vec![e]),
        });
    }
    if let Some(first) = find_f_initial(f) {
        let rest = first.complement(n);
        let child = solve_node(&setfn::contract(f, first), rest.expand(elements))?;
        let mut x = vec![T::zero(); n];
        for (k, s) in rest.iter().enumerate() {
            x[s] = child.x[k].clone();
        }
        let phi = rest.iter().map(|s| x[s].clone() * f.singleton(s)).sum();
        return Ok(Node {
            x,
            phi,
            value: f.at(first) + child.value,
            searcher: SearcherStrategy::Series {
                prefix: first.expand(elements).to_vec(),
                then: Box::new(child.searcher),
            },
        });
    }
    let zero = Oracle::new(Modular::<T>::zero(n));
    let Some(a) = find_separator(f, &zero)? else {
        return Err(Error::NotDecomposable);
    };
    let b = a.complement(n);
    let left = solve_node(&setfn::restrict(f, a), a.expand(elements))?;
    let right = solve_node(&setfn::restrict(f, b), b.expand(elements))?;
    let total = f.total();
    let (fa, fb) = (f.at(a), f.at(b));
    let mut x = vec![T::zero(); n];
    for (k, s) in a.iter().enumerate() {
        x[s] = fa.clone() * left.x[k].clone() / total.clone();
    }
    for (k, s) in b.iter().enumerate() {
        x[s] = fb.clone() * right.x[k].clone() / total.clone();
    }
    let phi: T = (0..n).map(|s| x[s].clone() * f.singleton(s)).sum();
    let two = T::one() + T::one();
    let q = T::half() + (left.phi - right.phi) / (two * total.clone());
    Ok(Node {
        x,
        value: (total + phi.clone()) * T::half(),
        phi,
        searcher: SearcherStrategy::Parallel {
            q,
            left: Box::new(left.searcher),
            right: Box::new(right.searcher),
        },
    })
}

/// Per element: distribution of the set searched before it.
type PredDist<T> = HashMap<usize, Vec<(Subset, T)>>;

fn pred_dist<T: Scalar>(p: &SearcherStrategy<T>) -> PredDist<T> {
    match p {
        SearcherStrategy::Order(perm) => prefix_dist(perm, Subset::EMPTY),
        SearcherStrategy::Series { prefix, then } => {
            let mut out = prefix_dist(prefix, Subset::EMPTY);
            let before = Subset::from_elements(prefix.iter().copied());
            for (s, dist) in pred_dist(then) {
                out.insert(s, dist.into_iter().map(|(b, w)| (b | before, w)).collect());
            }
            out
        }
        SearcherStrategy::Parallel { q, left, right } => {
            let (ls, rs) = (left.elements(), right.elements());
            let mut out = HashMap::new();
            let one_minus_q = T::one() - q.clone();
            for (child, other, first) in [(left, rs, q.clone()), (right, ls, one_minus_q.clone())] {
                let second = T::one() - first.clone();
                for (s, dist) in pred_dist(child) {
                    let mixed = dist
                        .iter()
                        .map(|(b, w)| (*b, w.clone() * first.clone()))
                        .chain(dist.iter().map(|(b, w)| (*b | other, w.clone() * second.clone())))
                        .collect();
                    out.insert(s, mixed);
                }
            }
            out
        }
        SearcherStrategy::FirstThenUniform { elements, weights } => {
            let m = elements.len();
            let all = Subset::from_elements(elements.iter().copied());
            let mut out = HashMap::new();
            for (i, &s) in elements.iter().enumerate() {
                let mut acc: HashMap<Subset, T> = HashMap::new();
                acc.insert(Subset::EMPTY, weights[i].clone());
                for (j, &t) in elements.iter().enumerate() {
                    if j == i || weights[j].is_zero() {
                        continue;
                    }
                    // s sits uniformly at one of m-1 positions after t; at
                    // position k its other predecessors are a uniform k-subset.
                    let others = all.without(s).without(t);
                    for r in others.subsets() {
                        let k = r.len() as i64;
                        let w =
                            weights[j].clone() / (T::from_i64(m as i64 - 1) * T::from_i64(binomial(m as i64 - 2, k)));
                        let slot = acc.entry(r.with(t)).or_insert_with(T::zero);
                        *slot = slot.clone() + w;
                    }
                }
                out.insert(s, acc.into_iter().collect());
            }
            out
        }
    }
}

fn prefix_dist<T: Scalar>(perm: &[usize], base: Subset) -> PredDist<T> {
    let mut before = base;
    let mut out = HashMap::new();
    for &s in perm {
        out.insert(s, vec![(before, T::one())]);
        before = before.with(s);
    }
    out
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Exact `C(p, s)` for every `s`: the expected cost of finding an object at `s`.
pub fn expected_cost_vector<T: Scalar>(f: &Oracle<T>, searcher: &SearcherStrategy<T>) -> Result<Vec<T>> {
    if f.n() > MAX_VERIFY {
        return Err(Error::Capacity {
            n: f.n(),
            limit: MAX_VERIFY,
            what: "expected cost vector",
        });
    }
    searcher.check(f.full())?;
    let dist = pred_dist(searcher);
    Ok((0..f.n())
        .map(|s| dist[&s].iter().map(|(b, w)| w.clone() * f.at(b.with(s))).sum())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equalization {
    /// Every `C(p, s)` equals `V`.
    pub everywhere: bool,
    /// `C(p, s) = V` where `x(s) > 0` and `C(p, s) <= V` elsewhere.
    pub on_support: bool,
    /// Locations with `C(p, s) != V`.
    pub off_value: Vec<usize>,
}

/// Compares the searcher's cost vector with the value of `sol`.
pub fn equalization<T: Scalar>(f: &Oracle<T>, sol: &GameSolution<T>) -> Result<Equalization> {
    let costs = expected_cost_vector(f, &sol.searcher)?;
    let off_value: Vec<usize> = (0..costs.len()).filter(|&s| !costs[s].approx_eq(&sol.value)).collect();
    let on_support = off_value
        .iter()
        .all(|&s| sol.hider.x[s].approx_eq(&T::zero()) && costs[s].approx_le(&sol.value));
    Ok(Equalization {
        everywhere: off_value.is_empty(),
        on_support,
        off_value,
    })
}

/// Hider's best response: an element of maximum expected cost (lowest index on ties).
pub fn best_response_hider<T: Scalar>(f: &Oracle<T>, searcher: &SearcherStrategy<T>) -> Result<(usize, T)> {
    let costs = expected_cost_vector(f, searcher)?;
    let best = max_of(costs.iter().cloned()).expect("nonempty ground set");
    let s = costs.iter().position(|c| c.approx_eq(&best)).expect("maximum attained");
    Ok((s, costs[s].clone()))
}

/// Searcher's best response: an optimal order for `(f, x)`.
pub fn best_response_searcher<T: Scalar>(f: &Oracle<T>, x: &HiderStrategy<T>) -> Result<(SearchOrder, T)> {
    if x.len() != f.n() {
        return Err(Error::GroundMismatch(format!(
            "f has {} elements, x has {}",
            f.n(),
            x.len()
        )));
    }
    if f.n() > DP_LIMIT {
        return Err(Error::Capacity {
            n: f.n(),
            limit: DP_LIMIT,
            what: "searcher best response",
        });
    }
    let inst = SearchInstance::numbered(f.clone(), Oracle::new(Modular::new(x.x.clone())))?;
    brute_force_optimal(&inst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxStrategies<T> {
    pub hider: HiderStrategy<T>,
    pub searcher: SearcherStrategy<T>,
    pub kappa: T,
    /// `1 / (1 - κ)`.
    pub factor: T,
}

/// Equilibrium strategies of the modular surrogate `h(A) = Σ_{s∈A} f(s)`,
/// which approximate the equilibrium of `f` when its curvature is below 1/2.
pub fn curvature_approx_strategies<T: Scalar>(f: &Oracle<T>) -> Result<ApproxStrategies<T>> {
    let kappa = curvature(f)?;
    if !kappa.definitely_lt(&T::half()) {
        return Err(Error::Assumption(format!("curvature {kappa} is not below 1/2")));
    }
    let h = Oracle::new(Modular::new(singletons(f)));
    let sol = modular_game_solution(&h)?;
    Ok(ApproxStrategies {
        hider: sol.hider,
        searcher: sol.searcher,
        factor: T::one() / (T::one() - kappa.clone()),
        kappa,
    })
}
