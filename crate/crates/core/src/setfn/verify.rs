use serde::Serialize;

use super::Oracle;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::subset::Subset;

/// Exhaustive verification needs all `2^n` values and `n^2 2^n` pair checks.
pub const MAX_VERIFY: usize = 20;

/// A set and up to two elements exhibiting a violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub set: Subset,
    pub s: Option<usize>,
    pub t: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails { witness: Witness },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails { witness } => Some(*witness),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub normalized: Verdict,
    pub nondecreasing: Verdict,
    pub submodular: Verdict,
    pub supermodular: Verdict,
}

impl StructureReport {
    pub fn modular(&self) -> bool {
        self.submodular.holds() && self.supermodular.holds()
    }
}

/// Decides each structural property by exhaustive enumeration, using the
/// diminishing-marginals characterization
/// `f(A+s) + f(A+t) >= f(A+s+t) + f(A)` for submodularity.
pub fn verify_structure<T: Scalar>(f: &Oracle<T>) -> Result<StructureReport> {
    let n = f.n();
    let table = f.table(MAX_VERIFY)?;
    let at = |m: u64| &table[m as usize];

    let normalized = if at(0).is_negligible() {
        Verdict::Holds
    } else {
        fails(0, None, None)
    };

    let mut nondecreasing = Verdict::Holds;
    let mut submodular = Verdict::Holds;
    let mut supermodular = Verdict::Holds;

    for a in 0..1u64 << n {
        for s in (0..n).filter(|&s| a >> s & 1 == 0) {
            let a_s = a | 1 << s;
            if nondecreasing.holds() && at(a_s).definitely_lt(at(a)) {
                nondecreasing = fails(a, Some(s), None);
            }
            for t in (s + 1..n).filter(|&t| a >> t & 1 == 0) {
                let a_t = a | 1 << t;
                let lhs = at(a_s).clone() + at(a_t).clone();
                let rhs = at(a_s | 1 << t).clone() + at(a).clone();
                if submodular.holds() && lhs.definitely_lt(&rhs) {
                    submodular = fails(a, Some(s), Some(t));
                }
                if supermodular.holds() && rhs.definitely_lt(&lhs) {
                    supermodular = fails(a, Some(s), Some(t));
                }
            }
        }
    }

    Ok(StructureReport {
        normalized,
        nondecreasing,
        submodular,
        supermodular,
    })
}

fn fails(set: u64, s: Option<usize>, t: Option<usize>) -> Verdict {
    Verdict::Fails {
        witness: Witness { set: Subset(set), s, t },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::ratio;
    use crate::setfn::fixtures::{f3, modular};
    use crate::setfn::{contract, Coverage, Tabular};
    use crate::Rational;
    use proptest::prelude::*;

    #[test]
    fn f3_is_polymatroid() {
        let r = verify_structure(&f3::<Rational>()).unwrap();
        assert!(r.normalized.holds() && r.nondecreasing.holds() && r.submodular.holds());
        assert!(!r.supermodular.holds());
    }

    #[test]
    fn modular_is_everything() {
        let r = verify_structure(&modular::<Rational>(&[(1, 1), (2, 1), (3, 1)])).unwrap();
        assert!(r.submodular.holds() && r.supermodular.holds() && r.modular());
    }

    #[test]
    fn superadditive_pair_fails_with_witness() {
        let v = |x| ratio::<Rational>(x, 1);
        let f = Oracle::new(Tabular::new(2, vec![v(0), v(1), v(1), v(3)]).unwrap());
        let r = verify_structure(&f).unwrap();
        assert_eq!(
            r.submodular.witness(),
            Some(Witness {
                set: Subset::EMPTY,
                s: Some(0),
                t: Some(1)
            })
        );
        assert!(r.supermodular.holds());
    }

    #[test]
    fn decreasing_and_unnormalized_detected() {
        let v = |x| ratio::<Rational>(x, 1);
        let f = Oracle::new(Tabular::new(1, vec![v(2), v(1)]).unwrap());
        let r = verify_structure(&f).unwrap();
        assert!(!r.normalized.holds());
        assert_eq!(r.nondecreasing.witness().unwrap().s, Some(0));
    }

    #[test]
    fn capacity_error() {
        let f = Oracle::new(crate::setfn::Modular::<f64>::zero(21));
        assert!(matches!(verify_structure(&f), Err(Error::Capacity { .. })));
    }

    fn coverage_strategy() -> impl Strategy<Value = Oracle<Rational>> {
        (2usize..=7, 2usize..=6).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(1u64..(1 << m), n),
                proptest::collection::vec(1i64..6, m),
            )
                .prop_map(|(covers, w)| {
                    Oracle::new(
                        Coverage::new(
                            covers.into_iter().map(Subset).collect(),
                            w.into_iter().map(|x| ratio(x, 1)).collect(),
                        )
                        .unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn contraction_preserves_submodularity(f in coverage_strategy(), by in any::<u64>()) {
            let by = Subset(by) & f.full();
            prop_assume!(by != f.full());
            let r = verify_structure(&contract(&f, by)).unwrap();
            prop_assert!(r.submodular.holds() && r.nondecreasing.holds() && r.normalized.holds());
        }
    }
}
