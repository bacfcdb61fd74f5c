//! Series-parallel decomposition: f-closures, f-initial sets, separators,
//! the decomposition tree, and exact optimal search for decomposable
//! instances.

use serde_json::{json, Value};

use crate::density::{max_density_subset, SearchInstance};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::setfn::{self, dual, Oracle};
use crate::sidney::expected_cost;
use crate::subset::{GroundSet, SearchOrder, Subset};

/// `cl(A)`: `A` plus every element whose addition leaves `f` unchanged.
///
/// One pass suffices for nondecreasing submodular `f`: if `f(A+s) = f(A)`
/// then `s` adds nothing to any superset of `A` either.
pub fn closure<T: Scalar>(f: &Oracle<T>, set: Subset) -> Subset {
    let base = f.at(set);
    (f.full() - set)
        .iter()
        .filter(|&s| f.at(set.with(s)).approx_eq(&base))
        .fold(set, Subset::with)
}

/// Largest f-initial set avoiding `s` (possibly empty).
pub fn largest_initial_avoiding<T: Scalar>(f: &Oracle<T>, s: usize) -> Subset {
    let full = f.full();
    let mut cand = closure(f, Subset::singleton(s)).without(s);
    let mut examined = Subset::EMPTY;
    while let Some(t) = (full - cand - examined).first() {
        cand = cand & closure(f, Subset::singleton(t));
        examined = examined.with(t);
    }
    cand
}

/// First nonempty `I_s` scanning `s` in ascending order.
pub fn find_f_initial<T: Scalar>(f: &Oracle<T>) -> Option<Subset> {
    (0..f.n())
        .map(|s| largest_initial_avoiding(f, s))
        .find(|i| !i.is_empty())
}

/// `I ⊂ cl({t})` for every `t` outside the proper subset `I`.
pub fn is_f_initial<T: Scalar>(f: &Oracle<T>, set: Subset) -> bool {
    !set.is_empty()
        && set != f.full()
        && (f.full() - set)
            .iter()
            .all(|t| set.is_subset_of(closure(f, Subset::singleton(t))))
}

/// Connectivity `d_f(B) = f(B) + f(S∖B) - f(S)`.
pub fn connectivity<T: Scalar>(f: &Oracle<T>, set: Subset) -> T {
    f.at(set) + f.at(set.complement(f.n())) - f.total()
}

/// Backend minimizing the symmetric connectivity of `f - g`.
pub trait SeparatorFinder<T: Scalar> {
    /// A proper nonempty `B` with `d_f(B) - d_g(B) = 0`, if one exists.
    fn find(&self, f: &Oracle<T>, g: &Oracle<T>) -> Result<Option<Subset>>;
}

/// Enumerates every proper bipartition; ties go to the smallest cardinality,
/// then the smallest mask.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateSeparators;

pub const SEPARATOR_LIMIT: usize = 20;

impl<T: Scalar> SeparatorFinder<T> for EnumerateSeparators {
    fn find(&self, f: &Oracle<T>, g: &Oracle<T>) -> Result<Option<Subset>> {
        let n = f.n();
        if n > SEPARATOR_LIMIT {
            return Err(Error::Capacity {
                n,
                limit: SEPARATOR_LIMIT,
                what: "separator enumeration",
            });
        }
        let full = f.full();
        Ok(full
            .subsets()
            .filter(|&b| !b.is_empty() && b != full)
            .filter(|&b| (connectivity(f, b) - connectivity(g, b)).is_negligible())
            .min_by_key(|&b| (b.len(), b)))
    }
}

pub fn find_separator<T: Scalar>(f: &Oracle<T>, g: &Oracle<T>) -> Result<Option<Subset>> {
    EnumerateSeparators.find(f, g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOrigin {
    /// The first part is f-initial.
    FInitial,
    /// The second part is g#-initial.
    GSharpInitial,
}

/// Node of a series-parallel decomposition. `elements` are indices into the
/// original ground set; `f` and `g` are the node's own (restricted or
/// contracted) functions, indexed by the node's elements in ascending order.
#[derive(Clone, Debug)]
pub struct SpdTree<T: Scalar> {
    pub elements: Subset,
    pub f: Oracle<T>,
    pub g: Oracle<T>,
    pub kind: SpdKind<T>,
}

#[derive(Clone, Debug)]
pub enum SpdKind<T: Scalar> {
    Leaf(usize),
    /// Search `first` (restricted instance), then `rest` (contracted by `first`).
    Series {
        origin: SeriesOrigin,
        first: Box<SpdTree<T>>,
        rest: Box<SpdTree<T>>,
    },
    /// `left` is a separator of both functions; children are restrictions.
    Parallel {
        left: Box<SpdTree<T>>,
        right: Box<SpdTree<T>>,
    },
}

impl<T: Scalar> SpdTree<T> {
    pub fn leaves(&self) -> usize {
        match &self.kind {
            SpdKind::Leaf(_) => 1,
            SpdKind::Series { first, rest, .. } => first.leaves() + rest.leaves(),
            SpdKind::Parallel { left, right } => left.leaves() + right.leaves(),
        }
    }

    pub fn to_json(&self, ground: &GroundSet) -> Value {
        let set = ground.names(self.elements);
        match &self.kind {
            SpdKind::Leaf(e) => json!({"kind": "leaf", "element": ground.label(*e), "set": set}),
            SpdKind::Series { origin, first, rest } => json!({
                "kind": "series",
                "origin": match origin {
                    SeriesOrigin::FInitial => "f_initial",
                    SeriesOrigin::GSharpInitial => "gsharp_initial",
                },
                "set": set,
                "first": first.to_json(ground),
                "rest": rest.to_json(ground),
            }),
            SpdKind::Parallel { left, right } => json!({
                "kind": "parallel",
                "set": set,
                "left": left.to_json(ground),
                "right": right.to_json(ground),
            }),
        }
    }
}

/// Which decomposition rule is tried first at each node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpdPolicy {
    pub series_first: bool,
    pub f_initial_first: bool,
}

impl Default for SpdPolicy {
    fn default() -> Self {
        SpdPolicy {
            series_first: true,
            f_initial_first: true,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SpdOutcome<T: Scalar> {
    Decomposed(SpdTree<T>),
    /// `stuck` is a node (in original indices) admitting neither rule.
    NotDecomposable {
        stuck: Subset,
    },
}

enum Split {
    Series(Subset, SeriesOrigin),
    Parallel(Subset),
}

/// Finds a series split (first part, local indices) or a separator.
fn split<T: Scalar>(f: &Oracle<T>, g: &Oracle<T>, policy: SpdPolicy) -> Result<Option<Split>> {
    let series = || {
        let from_f = || find_f_initial(f).map(|i| (i, SeriesOrigin::FInitial));
        let from_g = || find_f_initial(&dual(g)).map(|j| (j.complement(f.n()), SeriesOrigin::GSharpInitial));
        let found = if policy.f_initial_first {
            from_f().or_else(from_g)
        } else {
            from_g().or_else(from_f)
        };
        found.map(|(i, o)| Split::Series(i, o))
    };
    let parallel = || find_separator(f, g).map(|b| b.map(Split::Parallel));
    if policy.series_first {
        match series() {
            Some(s) => Ok(Some(s)),
            None => parallel(),
        }
    } else {
        match parallel()? {
            Some(p) => Ok(Some(p)),
            None => Ok(series()),
        }
    }
}

fn decompose_node<T: Scalar>(
    f: Oracle<T>,
    g: Oracle<T>,
    elements: Subset,
    policy: SpdPolicy,
) -> Result<std::result::Result<SpdTree<T>, Subset>> {
    if elements.len() == 1 {
        let e = elements.first().expect("singleton");
        return Ok(Ok(SpdTree {
            elements,
            f,
            g,
            kind: SpdKind::Leaf(e),
        }));
    }
    let kind = match split(&f, &g, policy)? {
        None => return Ok(Err(elements)),
        Some(Split::Series(first, origin)) => {
            let rest = first.complement(f.n());
            let a = decompose_node(
                setfn::restrict(&f, first),
                setfn::restrict(&g, first),
                first.expand(elements),
                policy,
            )?;
            let b = decompose_node(
                setfn::contract(&f, first),
                setfn::contract(&g, first),
                rest.expand(elements),
                policy,
            )?;
            match (a, b) {
                (Ok(a), Ok(b)) => SpdKind::Series {
                    origin,
                    first: Box::new(a),
                    rest: Box::new(b),
                },
                (Err(stuck), _) | (_, Err(stuck)) => return Ok(Err(stuck)),
            }
        }
        Some(Split::Parallel(left)) => {
            let right = left.complement(f.n());
            let a = decompose_node(
                setfn::restrict(&f, left),
                setfn::restrict(&g, left),
                left.expand(elements),
                policy,
            )?;
            let b = decompose_node(
                setfn::restrict(&f, right),
                setfn::restrict(&g, right),
                right.expand(elements),
                policy,
            )?;
            match (a, b) {
                (Ok(a), Ok(b)) => SpdKind::Parallel {
                    left: Box::new(a),
                    right: Box::new(b),
                },
                (Err(stuck), _) | (_, Err(stuck)) => return Ok(Err(stuck)),
            }
        }
    };
    Ok(Ok(SpdTree { elements, f, g, kind }))
}

pub fn spd_decompose<T: Scalar>(inst: &SearchInstance<T>) -> Result<SpdOutcome<T>> {
    spd_decompose_with(inst, SpdPolicy::default())
}

pub fn spd_decompose_with<T: Scalar>(inst: &SearchInstance<T>, policy: SpdPolicy) -> Result<SpdOutcome<T>> {
    Ok(
        match decompose_node(inst.f.clone(), inst.g.clone(), inst.full(), policy)? {
            Ok(tree) => SpdOutcome::Decomposed(tree),
            Err(stuck) => SpdOutcome::NotDecomposable { stuck },
        },
    )
}

/// Exact optimal search of a series-parallel decomposable instance.
///
/// Series splits search the first part (restricted) then the rest
/// (contracted). At a separator `B`, the largest maximum-density set `M`
/// splits across `B` and its complement; the nonempty side `A` of `M ∩ B`,
/// `M ∖ B` has maximum density, so an optimal search starts with `A`.
pub fn spd_optimal_search<T: Scalar>(inst: &SearchInstance<T>) -> Result<(SearchOrder, T)> {
    spd_optimal_search_with(inst, SpdPolicy::default())
}

pub fn spd_optimal_search_with<T: Scalar>(inst: &SearchInstance<T>, policy: SpdPolicy) -> Result<(SearchOrder, T)> {
    let mut perm = Vec::with_capacity(inst.n());
    solve_node(&inst.f, &inst.g, inst.full(), policy, &mut perm)?;
    let order = SearchOrder::new(perm)?;
    let cost = expected_cost(inst, &order)?;
    Ok((order, cost))
}

fn solve_node<T: Scalar>(
    f: &Oracle<T>,
    g: &Oracle<T>,
    elements: Subset,
    policy: SpdPolicy,
    out: &mut Vec<usize>,
) -> Result<()> {
    if elements.len() == 1 {
        out.extend(elements.iter());
        return Ok(());
    }
    let first = match split(f, g, policy)? {
        None => return Err(Error::NotDecomposable),
        Some(Split::Series(first, _)) => first,
        Some(Split::Parallel(sep)) => {
            let node = SearchInstance::numbered(f.clone(), g.clone())?;
            let m = max_density_subset(&node)?.set;
            if (m & sep).is_empty() {
                m - sep
            } else {
                m & sep
            }
        }
    };
    let rest = first.complement(f.n());
    solve_node(
        &setfn::restrict(f, first),
        &setfn::restrict(g, first),
        first.expand(elements),
        policy,
        out,
    )?;
    solve_node(
        &setfn::contract(f, first),
        &setfn::contract(g, first),
        rest.expand(elements),
        policy,
        out,
    )
}
