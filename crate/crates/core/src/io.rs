//! JSON instance files: search instances, precedence (DAG) files, and
//! canonical serialization.
//!
//! Numbers are written as strings (`"3/4"`, `"2"`, `"0.25"`) and read from
//! either strings or JSON numbers. Sets inside function specs are lists of
//! element indices; DAG files refer to jobs by label.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::density::SearchInstance;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sched::{self, Dag, HSpec, PrecedenceInstance, RootedTree, Weights};
use crate::setfn::{self, Coverage, FnOracle, Modular, Oracle, Tabular};
use crate::subset::{GroundSet, Subset};

/// A number kept in its textual form until the scalar type is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub String);

impl Num {
    pub fn of<T: Scalar>(v: &T) -> Num {
        match v.to_json() {
            Value::String(s) => Num(s),
            other => Num(other.to_string()),
        }
    }

    pub fn parse<T: Scalar>(&self) -> Result<T> {
        T::parse_value(&self.0)
            .ok_or_else(|| Error::Invalid(format!("cannot read {:?} as a {} number", self.0, T::MODE)))
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Self {
        Num(v.to_string())
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct NumVisitor;
        impl Visitor<'_> for NumVisitor {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a numeric string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                Ok(Num(v.trim().to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                Ok(Num(v.to_string()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                Ok(Num(format!("{v:?}")))
            }
        }
        d.deserialize_any(NumVisitor)
    }
}

fn nums<T: Scalar>(v: &[Num]) -> Result<Vec<T>> {
    v.iter().map(Num::parse).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Rational,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(Error::Invalid(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetWeight {
    pub set: Vec<usize>,
    pub w: Num,
}

/// Serialized set function over elements `0..n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `values[mask]` for every mask.
    Tabular {
        values: Vec<Num>,
    },
    Modular {
        weights: Vec<Num>,
    },
    /// Element `i` covers the items `covers[i]`.
    Coverage {
        covers: Vec<Vec<usize>>,
        item_weights: Vec<Num>,
    },
    /// `g#(A) = g(S) - g(S∖A)`.
    Dual {
        inner: Box<FunctionSpec>,
    },
    /// Precedence-closure cost `h(p(closure(A)))`.
    Dag {
        edges: Vec<(usize, usize)>,
        p: Vec<Num>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h: Option<HSpec>,
    },
    /// Expanding search; vertex labels are arbitrary JSON scalars, elements
    /// are the non-root vertices in order of first appearance.
    Tree {
        root: Value,
        edges: Vec<(Value, Value, Num)>,
    },
    SubsetWeights {
        w: Vec<SetWeight>,
    },
    /// `h(inner(A))`.
    HOf {
        h: HSpec,
        inner: Box<FunctionSpec>,
    },
}

fn label_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Vertex labels with the root first, then in order of first appearance.
fn tree_vertices(root: &Value, edges: &[(Value, Value, Num)]) -> Vec<String> {
    let mut labels = vec![label_of(root)];
    for (u, v, _) in edges {
        for l in [label_of(u), label_of(v)] {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
    }
    labels
}

fn tree_of<T: Scalar>(root: &Value, edges: &[(Value, Value, Num)]) -> Result<RootedTree<T>> {
    let labels = tree_vertices(root, edges);
    let index = |v: &Value| labels.iter().position(|l| *l == label_of(v)).expect("collected");
    Ok(RootedTree {
        vertices: labels.len(),
        root: 0,
        edges: edges
            .iter()
            .map(|(u, v, c)| Ok((index(u), index(v), c.parse()?)))
            .collect::<Result<_>>()?,
    })
}

fn subset_of(v: &[usize], n: usize) -> Result<Subset> {
    match v.iter().find(|&&i| i >= n) {
        Some(&i) => Err(Error::Invalid(format!("element {i} out of range for n = {n}"))),
        None => Ok(Subset::from_elements(v.iter().copied())),
    }
}

impl FunctionSpec {
    /// Builds the oracle over `n` elements.
    pub fn build<T: Scalar>(&self, n: usize) -> Result<Oracle<T>> {
        let oracle = match self {
            FunctionSpec::Tabular { values } => Oracle::new(Tabular::new(n, nums(values)?)?),
            FunctionSpec::Modular { weights } => Oracle::new(Modular::new(nums(weights)?)),
            FunctionSpec::Coverage { covers, item_weights } => {
                let items = item_weights.len();
                let covers = covers.iter().map(|c| subset_of(c, items)).collect::<Result<_>>()?;
                Oracle::new(Coverage::new(covers, nums(item_weights)?)?)
            }
            FunctionSpec::Dual { inner } => setfn::dual(&inner.build(n)?),
            FunctionSpec::Dag { edges, p, h } => sched::cost_oracle(&PrecedenceInstance {
                dag: Dag::new(p.len(), edges.clone()),
                p: nums(p)?,
                weights: Weights::PerJob(vec![T::one(); p.len()]),
                h: h.clone().unwrap_or(HSpec::Identity),
            })?,
            FunctionSpec::Tree { root, edges } => sched::tree_cost_oracle(&tree_of::<T>(root, edges)?)?,
            FunctionSpec::SubsetWeights { w } => sched::subset_weight_oracle(
                n,
                w.iter()
                    .map(|sw| Ok((subset_of(&sw.set, n)?, sw.w.parse()?)))
                    .collect::<Result<_>>()?,
            )?,
            FunctionSpec::HOf { h, inner } => {
                if !h.is_identity() && T::EXACT {
                    return Err(Error::FloatOnly(format!("{h:?} composition")));
                }
                h.validate()?;
                let inner = inner.build::<T>(n)?;
                let h = h.clone();
                let props = inner.props();
                Oracle::new(FnOracle::new(n, props, move |a: Subset| {
                    let v = inner.at(a);
                    if h.is_identity() {
                        v
                    } else {
                        T::from_f64(h.eval(v.to_f64())).expect("finite h value")
                    }
                }))
            }
        };
        if oracle.n() != n {
            return Err(Error::GroundMismatch(format!(
                "function has {} elements, instance has {n}",
                oracle.n()
            )));
        }
        Ok(oracle)
    }

    /// Element labels implied by the spec, if it names its elements.
    fn implied_labels(&self) -> Option<Vec<String>> {
        match self {
            FunctionSpec::Tree { root, edges } => Some(tree_vertices(root, edges).split_off(1)),
            _ => None,
        }
    }
}

/// Search instance file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub mode: Mode,
    pub f: FunctionSpec,
    pub g: FunctionSpec,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("parse error: {e}")))
    }

    pub fn ground(&self) -> Result<GroundSet> {
        match self.labels.clone().or_else(|| self.f.implied_labels()) {
            Some(labels) if labels.len() == self.n => GroundSet::new(labels),
            Some(labels) => Err(Error::GroundMismatch(format!(
                "{} labels for n = {}",
                labels.len(),
                self.n
            ))),
            None => GroundSet::numbered(self.n),
        }
    }

    pub fn build<T: Scalar>(&self) -> Result<SearchInstance<T>> {
        SearchInstance::new(self.ground()?, self.f.build(self.n)?, self.g.build(self.n)?)
    }

    /// Tabulates both functions of `inst`.
    pub fn tabulate<T: Scalar>(inst: &SearchInstance<T>, limit: usize) -> Result<Self> {
        let table = |f: &Oracle<T>| -> Result<FunctionSpec> {
            Ok(FunctionSpec::Tabular {
                values: f.table(limit)?.iter().map(Num::of).collect(),
            })
        };
        Ok(InstanceFile {
            n: inst.n(),
            labels: Some(inst.ground.labels().to_vec()),
            mode: if T::EXACT { Mode::Rational } else { Mode::Float },
            f: table(&inst.f)?,
            g: table(&inst.g)?,
        })
    }

    pub fn canonical(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("serializable"))
    }
}

/// Serialization with object keys sorted at every level.
pub fn canonical_json(v: &Value) -> String {
    // serde_json's default map is ordered by key.
    let sorted: Value = serde_json::from_str(&v.to_string()).expect("valid json");
    sorted.to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledSetWeight {
    pub set: Vec<Value>,
    pub w: Num,
}

/// Scheduling file: jobs with precedence edges, processing times, and
/// per-job (`w`) or per-subset (`wA`) weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DagFile {
    pub jobs: Vec<Value>,
    #[serde(default)]
    pub edges: Vec<(Value, Value)>,
    pub p: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<Num>>,
    #[serde(rename = "wA", default, skip_serializing_if = "Option::is_none")]
    pub w_a: Option<Vec<LabeledSetWeight>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<HSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

impl DagFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("parse error: {e}")))
    }

    pub fn labels(&self) -> Vec<String> {
        self.jobs.iter().map(label_of).collect()
    }

    /// Float mode is required whenever `h` is not the identity.
    pub fn mode(&self) -> Mode {
        match (&self.mode, &self.h) {
            (_, Some(h)) if !h.is_identity() => Mode::Float,
            (Some(m), _) => *m,
            _ => Mode::Rational,
        }
    }

    pub fn build<T: Scalar>(&self) -> Result<(GroundSet, PrecedenceInstance<T>)> {
        let ground = GroundSet::new(self.labels())?;
        let index = |v: &Value| {
            let l = label_of(v);
            ground
                .labels()
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::Invalid(format!("unknown job {l:?}")))
        };
        let edges = self
            .edges
            .iter()
            .map(|(s, t)| Ok((index(s)?, index(t)?)))
            .collect::<Result<_>>()?;
        let weights = match (&self.w, &self.w_a) {
            (Some(w), None) => Weights::PerJob(nums(w)?),
            (None, Some(wa)) => Weights::Subsets(
                wa.iter()
                    .map(|sw| {
                        let set = sw.set.iter().map(index).collect::<Result<Vec<_>>>()?;
                        Ok((Subset::from_elements(set), sw.w.parse()?))
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => return Err(Error::Invalid("exactly one of \"w\" and \"wA\" is required".into())),
        };
        let inst = PrecedenceInstance {
            dag: Dag::new(self.jobs.len(), edges),
            p: nums(&self.p)?,
            weights,
            h: self.h.clone().unwrap_or(HSpec::Identity),
        };
        Ok((ground, inst))
    }

    pub fn canonical(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("serializable"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        ratio(p, d)
    }

    const F3: &str = r#"{
        "n": 3, "labels": ["a", "b", "c"], "mode": "rational",
        "f": {"kind": "tabular", "values": [0, 1, 1, 2, 1, 2, "3/2", 2]},
        "g": {"kind": "modular", "weights": ["1/3", "1/3", "1/3"]}
    }"#;

    #[test]
    fn parses_tabular_and_modular() {
        let file = InstanceFile::from_json(F3).unwrap();
        let inst = file.build::<Rational>().unwrap();
        assert_eq!(inst.f.at(Subset(0b110)), q(3, 2));
        assert_eq!(inst.g.total(), q(1, 1));
        assert_eq!(inst.ground.label(2), "c");
        let float = file.build::<f64>().unwrap();
        assert_eq!(float.f.at(Subset(0b110)), 1.5);
    }

    #[test]
    fn round_trip_evaluates_identically() {
        let inst = InstanceFile::from_json(F3).unwrap().build::<Rational>().unwrap();
        let text = InstanceFile::tabulate(&inst, 20).unwrap().canonical();
        let back = InstanceFile::from_json(&text).unwrap().build::<Rational>().unwrap();
        assert!(back.f.same_values(&inst.f) && back.g.same_values(&inst.g));
        assert_eq!(InstanceFile::from_json(&text).unwrap().canonical(), text);
    }

    #[test]
    fn tree_and_dag_kinds() {
        let text = r#"{"n": 2, "f": {"kind": "tree", "root": "r", "edges": [["r", "x", 1], ["x", "y", 1]]},
                       "g": {"kind": "modular", "weights": [0, 1]}}"#;
        let file = InstanceFile::from_json(text).unwrap();
        let inst = file.build::<Rational>().unwrap();
        assert_eq!(inst.ground.labels(), &["x".to_string(), "y".to_string()]);
        assert_eq!(inst.f.at(Subset::singleton(1)), q(2, 1));

        let dag = FunctionSpec::Dag {
            edges: vec![(0, 1)],
            p: vec![1.into(), 1.into()],
            h: Some(HSpec::Log { a: 1.0 }),
        };
        assert!(matches!(dag.build::<Rational>(2), Err(Error::FloatOnly(_))));
        assert!((dag.build::<f64>(2).unwrap().at(Subset::singleton(1)) - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn subset_weights_and_dual() {
        let spec = FunctionSpec::SubsetWeights {
            w: vec![SetWeight {
                set: vec![0, 1],
                w: Num("1/2".into()),
            }],
        };
        let g = spec.build::<Rational>(3).unwrap();
        assert_eq!((g.at(Subset(0b011)), g.at(Subset(0b001))), (q(1, 2), q(0, 1)));
        let dual = FunctionSpec::Dual { inner: Box::new(spec) };
        assert_eq!(dual.build::<Rational>(3).unwrap().at(Subset(0b001)), q(1, 2));
    }

    #[test]
    fn decimal_numbers_are_exact() {
        let spec: FunctionSpec = serde_json::from_str(r#"{"kind": "modular", "weights": [0.1, "0.2", 3]}"#).unwrap();
        let f = spec.build::<Rational>(3).unwrap();
        assert_eq!(f.at(Subset(0b011)), q(3, 10));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = InstanceFile::from_json("{\"n\": 3,\n \"f\": }").unwrap_err();
        assert!(matches!(&err, Error::Invalid(m) if m.contains("line 2")), "{err}");
    }

    #[test]
    fn dag_file() {
        let text = r#"{"jobs": ["a", "b", "c"], "edges": [["a", "c"]], "p": [1, 2, 3],
                       "wA": [{"set": ["a", "b"], "w": 1}]}"#;
        let file = DagFile::from_json(text).unwrap();
        assert_eq!(file.mode(), Mode::Rational);
        let (ground, inst) = file.build::<Rational>().unwrap();
        assert_eq!(ground.len(), 3);
        assert_eq!(inst.dag.edges, vec![(0, 2)]);
        assert!(matches!(&inst.weights, Weights::Subsets(w) if w[0].0 == Subset(0b011)));
        let logged = DagFile {
            h: Some(HSpec::Log { a: 1.0 }),
            ..file
        };
        assert_eq!(logged.mode(), Mode::Float);
    }
}
