//! Seeded instance generators. Every family emits rational instance files
//! that satisfy the standing assumptions (monotone submodular `f` with
//! positive singletons; monotone supermodular `g` with `g(A) < g(S)` for
//! proper `A`).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::{DagFile, FunctionSpec, InstanceFile, Mode, Num, SetWeight};
use crate::sched::{gsp_compose, Composition, Dag};
use crate::subset::{Subset, MAX_ELEMENTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Weighted coverage `f`, dual-coverage `g`.
    Coverage,
    /// `f(A) = w(A) - w(A)^2 / (4 w(S))`, curvature below 1/2; modular `g`.
    ConcaveModular,
    /// Expanding search on a random rooted tree; modular `g`.
    Tree,
    /// Precedence closure cost on a random series-parallel graph; modular `g`.
    Gsp,
    /// Modular `f`; `g(A) = C(|A|, k) / C(n, k)` as subset weights.
    KUniform,
    /// Modular `f` and `g`.
    Modular,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Coverage,
        Family::ConcaveModular,
        Family::Tree,
        Family::Gsp,
        Family::KUniform,
        Family::Modular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Coverage => "coverage",
            Family::ConcaveModular => "concave",
            Family::Tree => "tree",
            Family::Gsp => "gsp",
            Family::KUniform => "kuniform",
            Family::Modular => "modular",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unsupported family {s:?}")))
    }
}

/// Largest `n` for tabulated families.
pub const TABULAR_LIMIT: usize = 16;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ints(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<Num> {
    (0..n).map(|_| rng.gen_range(lo..=hi).into()).collect()
}

/// Coverage where each element has a private item, so every singleton is
/// positive and the dual has positive singletons too.
fn coverage(rng: &mut ChaCha8Rng, n: usize) -> FunctionSpec {
    let shared = n.max(2);
    let covers = (0..n)
        .map(|i| {
            let mut items: Vec<usize> = (0..shared).filter(|_| rng.gen_bool(0.4)).map(|j| n + j).collect();
            items.insert(0, i);
            items
        })
        .collect();
    FunctionSpec::Coverage {
        covers,
        item_weights: ints(rng, n + shared, 1, 5),
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Random series-parallel graph on jobs `0..n` by recursive composition.
pub fn random_gsp(rng: &mut impl Rng, n: usize) -> Dag {
    let mut parts: Vec<Dag> = (0..n).map(Dag::singleton).collect();
    parts.shuffle(rng);
    while parts.len() > 1 {
        let i = rng.gen_range(0..parts.len() - 1);
        let b = parts.remove(i + 1);
        let a = parts.remove(i);
        let kind = if rng.gen_bool(0.5) {
            Composition::Series
        } else {
            Composition::Parallel
        };
        parts.insert(i, gsp_compose(kind, &a, &b).expect("disjoint parts"));
    }
    parts.pop().unwrap_or(Dag {
        nodes: vec![],
        edges: vec![],
    })
}

/// Parent of vertex `v >= 1` is uniform among `0..v`; vertex 0 is the root.
fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> FunctionSpec {
    let edges = (1..=n)
        .map(|v| {
            let u = rng.gen_range(0..v);
            (json!(u), json!(v), Num::from(rng.gen_range(1..=4)))
        })
        .collect();
    FunctionSpec::Tree { root: json!(0), edges }
}

/// Generates an instance of `family` with `n` elements. `k` is used by
/// [`Family::KUniform`] only.
pub fn generate(family: Family, n: usize, seed: u64, k: usize) -> Result<InstanceFile> {
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let limit = match family {
        Family::Coverage | Family::ConcaveModular | Family::KUniform => TABULAR_LIMIT,
        _ => MAX_ELEMENTS,
    };
    if n > limit {
        return Err(Error::Capacity {
            n,
            limit,
            what: "generator",
        });
    }
    let mut rng = rng(seed);
    let (f, g) = match family {
        Family::Coverage => {
            let f = coverage(&mut rng, n);
            let g = FunctionSpec::Dual {
                inner: Box::new(coverage(&mut rng, n)),
            };
            (f, g)
        }
        Family::ConcaveModular => {
            let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
            let total: i64 = w.iter().sum();
            let values = Subset::full(n)
                .subsets()
                .map(|a| {
                    let x: i64 = a.iter().map(|i| w[i]).sum();
                    let (num, den) = (4 * total * x - x * x, 4 * total);
                    let d = gcd(num, den);
                    Num(format!("{}/{}", num / d, den / d))
                })
                .collect();
            let g = FunctionSpec::Modular {
                weights: ints(&mut rng, n, 1, 5),
            };
            (FunctionSpec::Tabular { values }, g)
        }
        Family::Tree => {
            let f = random_tree(&mut rng, n);
            let g = FunctionSpec::Modular {
                weights: ints(&mut rng, n, 1, 5),
            };
            (f, g)
        }
        Family::Gsp => {
            let dag = random_gsp(&mut rng, n);
            let f = FunctionSpec::Dag {
                edges: dag.edges,
                p: ints(&mut rng, n, 1, 4),
                h: None,
            };
            let g = FunctionSpec::Modular {
                weights: ints(&mut rng, n, 1, 5),
            };
            (f, g)
        }
        Family::KUniform => {
            if k == 0 || k > n {
                return Err(Error::Invalid(format!("k = {k} must lie in 1..={n}")));
            }
            let total = binomial(n as i64, k as i64);
            let w = Subset::full(n)
                .subsets()
                .filter(|a| a.len() == k)
                .map(|a| SetWeight {
                    set: a.to_vec(),
                    w: Num(format!("1/{total}")),
                })
                .collect();
            let f = FunctionSpec::Modular {
                weights: ints(&mut rng, n, 1, 5),
            };
            (f, FunctionSpec::SubsetWeights { w })
        }
        Family::Modular => (
            FunctionSpec::Modular {
                weights: ints(&mut rng, n, 1, 9),
            },
            FunctionSpec::Modular {
                weights: ints(&mut rng, n, 1, 9),
            },
        ),
    };
    let labels = match &f {
        FunctionSpec::Tree { .. } => None,
        _ => Some((1..=n).map(|i| i.to_string()).collect()),
    };
    Ok(InstanceFile {
        n,
        labels,
        mode: Mode::Rational,
        f,
        g,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Random scheduling file on a series-parallel precedence graph.
pub fn generate_schedule(n: usize, seed: u64) -> Result<DagFile> {
    if n == 0 || n > MAX_ELEMENTS {
        return Err(Error::Capacity {
            n,
            limit: MAX_ELEMENTS,
            what: "generator",
        });
    }
    let mut rng = rng(seed);
    let dag = random_gsp(&mut rng, n);
    let name = |j: usize| json!(format!("j{}", j + 1));
    Ok(DagFile {
        jobs: (0..n).map(name).collect(),
        edges: dag.edges.iter().map(|&(s, t)| (name(s), name(t))).collect(),
        p: ints(&mut rng, n, 1, 4),
        w: Some(ints(&mut rng, n, 1, 5)),
        w_a: None,
        h: None,
        mode: None,
    })
}
