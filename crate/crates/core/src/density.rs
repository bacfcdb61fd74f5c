//! Search instances, search density, and maximum-density subsets.
//!
//! The maximum-density set is found by parametric search: with
//! `λ = ρ(candidate)`, maximize the supermodular `g - λf` over subsets of the
//! candidate and shrink to the maximal maximizer until the density stops
//! increasing. The maximal maximizer always contains every maximum-density
//! set, so the fixed point is the largest maximum-density set `M`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::setfn::{self, verify_structure, Oracle, StructureReport, MAX_VERIFY};
use crate::subset::{GroundSet, Subset};

/// A cost function `f` and a weight function `g` over a shared ground set.
#[derive(Clone, Debug)]
pub struct SearchInstance<T: Scalar> {
    pub ground: GroundSet,
    pub f: Oracle<T>,
    pub g: Oracle<T>,
}

impl<T: Scalar> SearchInstance<T> {
    pub fn new(ground: GroundSet, f: Oracle<T>, g: Oracle<T>) -> Result<Self> {
        if f.n() != ground.len() || g.n() != ground.len() {
            return Err(Error::GroundMismatch(format!(
                "ground set has {} elements, f has {}, g has {}",
                ground.len(),
                f.n(),
                g.n()
            )));
        }
        Ok(SearchInstance { ground, f, g })
    }

    /// Instance with labels `"1".."n"`.
    pub fn numbered(f: Oracle<T>, g: Oracle<T>) -> Result<Self> {
        Self::new(GroundSet::numbered(f.n())?, f, g)
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn full(&self) -> Subset {
        self.ground.full()
    }

    /// `(f|_A, g|_A)` on the elements of `set`.
    pub fn restrict(&self, set: Subset) -> Self {
        SearchInstance {
            ground: self.ground.restrict(set),
            f: setfn::restrict(&self.f, set),
            g: setfn::restrict(&self.g, set),
        }
    }

    /// `(f_A, g_A)` on the complement of `set`.
    pub fn contract(&self, set: Subset) -> Self {
        SearchInstance {
            ground: self.ground.restrict(set.complement(self.n())),
            f: setfn::contract(&self.f, set),
            g: setfn::contract(&self.g, set),
        }
    }

    /// The dual instance `(g#, f#)`, whose costs mirror this one under order reversal.
    pub fn dual(&self) -> Self {
        SearchInstance {
            ground: self.ground.clone(),
            f: setfn::dual(&self.g),
            g: setfn::dual(&self.f),
        }
    }

    /// Checks the standing assumptions: `f` normalized, nondecreasing,
    /// submodular with `f(A) > 0` for nonempty `A`; `g` normalized,
    /// nondecreasing, supermodular with `g(A) < g(S)` for proper `A`.
    pub fn validation_report(&self) -> Result<ValidationReport> {
        let f = verify_structure(&self.f)?;
        let g = verify_structure(&self.g)?;
        let label = |s: Subset| format!("{{{}}}", self.ground.names(s).join(","));
        let mut violations = Vec::new();
        let mut require = |name: &str, v: &setfn::Verdict| {
            if let Some(w) = v.witness() {
                let elems: Vec<_> = [w.s, w.t]
                    .into_iter()
                    .flatten()
                    .map(|e| self.ground.label(e).to_string())
                    .collect();
                violations.push(format!(
                    "{name} fails at A={} elements=[{}]",
                    label(w.set),
                    elems.join(",")
                ));
            }
        };
        require("f normalized", &f.normalized);
        require("f nondecreasing", &f.nondecreasing);
        require("f submodular", &f.submodular);
        require("g normalized", &g.normalized);
        require("g nondecreasing", &g.nondecreasing);
        require("g supermodular", &g.supermodular);

        let full = self.full();
        let gs = self.g.total();
        for s in 0..self.n() {
            let fs = self.f.singleton(s);
            if !(fs > T::zero()) || fs.is_negligible() {
                violations.push(format!("f(A) > 0 fails at A={}", label(Subset::singleton(s))));
            }
        }
        for a in full.subsets().filter(|&a| a != full) {
            if gs.approx_le(&self.g.at(a)) {
                violations.push(format!("g(A) < g(S) fails at A={}", label(a)));
                break;
            }
        }
        Ok(ValidationReport { f, g, violations })
    }

    pub fn validate(&self) -> Result<()> {
        let report = self.validation_report()?;
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Assumption(v.clone())),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub f: StructureReport,
    pub g: StructureReport,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `ρ(A) = g(A) / f(A)` for nonempty `A`.
pub fn density<T: Scalar>(inst: &SearchInstance<T>, set: Subset) -> Result<T> {
    inst.ground.check(set)?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let f = inst.f.at(set);
    if f.is_negligible() {
        return Err(Error::ZeroCost(set.first().unwrap_or(0)));
    }
    Ok(inst.g.at(set) / f)
}

/// Backend maximizing `g - λf` over the subsets of a candidate set.
pub trait ShiftedMaximizer<T: Scalar> {
    /// Largest candidate set the backend accepts.
    fn capacity(&self) -> usize;

    /// The union of all maximizers of `g(X) - λ f(X)` over `X ⊂ within`.
    fn maximal_maximizer(&self, f: &Oracle<T>, g: &Oracle<T>, lambda: &T, within: Subset) -> Result<Subset>;
}

/// Exhaustive enumeration over all subsets of the candidate.
#[derive(Clone, Copy, Debug, Default)]
pub struct Enumeration;

/// Largest candidate set [`Enumeration`] handles.
pub const ENUMERATION_LIMIT: usize = MAX_VERIFY;

impl<T: Scalar> ShiftedMaximizer<T> for Enumeration {
    fn capacity(&self) -> usize {
        ENUMERATION_LIMIT
    }

    fn maximal_maximizer(&self, f: &Oracle<T>, g: &Oracle<T>, lambda: &T, within: Subset) -> Result<Subset> {
        if within.len() > ENUMERATION_LIMIT {
            return Err(Error::Capacity {
                n: within.len(),
                limit: ENUMERATION_LIMIT,
                what: "enumeration backend",
            });
        }
        let values: Vec<(Subset, T)> = within
            .subsets()
            .map(|x| (x, g.at(x) - lambda.clone() * f.at(x)))
            .collect();
        let best = values
            .iter()
            .map(|(_, v)| v)
            .fold(None::<&T>, |b, v| match b {
                Some(b) if b >= v => Some(b),
                _ => Some(v),
            })
            .expect("at least the empty set");
        Ok(values
            .iter()
            .filter(|(_, v)| v.approx_eq(best))
            .fold(Subset::EMPTY, |acc, (x, _)| acc | *x))
    }
}

/// `maximize_shifted` with the enumeration backend over the whole ground set.
pub fn maximize_shifted<T: Scalar>(inst: &SearchInstance<T>, lambda: &T) -> Result<Subset> {
    if lambda.is_negative() {
        return Err(Error::Invalid("λ must be nonnegative".into()));
    }
    Enumeration.maximal_maximizer(&inst.f, &inst.g, lambda, inst.full())
}

/// The largest maximum-density set and its density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityResult<T> {
    pub set: Subset,
    pub rho: T,
    /// Set when `set` is the unique maximal maximum-density set.
    pub maximal: bool,
}

pub fn max_density_subset<T: Scalar>(inst: &SearchInstance<T>) -> Result<DensityResult<T>> {
    max_density_subset_with(inst, &Enumeration)
}

pub fn max_density_subset_with<T: Scalar>(
    inst: &SearchInstance<T>,
    backend: &dyn ShiftedMaximizer<T>,
) -> Result<DensityResult<T>> {
    let n = inst.n();
    if n > backend.capacity() {
        return Err(Error::Capacity {
            n,
            limit: backend.capacity(),
            what: "max-density backend",
        });
    }
    if let Some(s) = (0..n).find(|&s| inst.f.singleton(s).is_negligible()) {
        return Err(Error::ZeroCost(s));
    }
    let mut cand = inst.full();
    // Each round strictly shrinks the candidate, so n + 1 rounds always suffice.
    for _ in 0..=n {
        let lambda = inst.g.at(cand) / inst.f.at(cand);
        let next = backend.maximal_maximizer(&inst.f, &inst.g, &lambda, cand)?;
        if next == cand || next.is_empty() {
            return Ok(DensityResult {
                set: cand,
                rho: lambda,
                maximal: true,
            });
        }
        cand = next;
    }
    unreachable!("candidate set shrinks every round")
}
