//! Single-machine scheduling as submodular search: precedence closures,
//! subset weights, concave compositions `h`, Smith's rule, generalized
//! series-parallel precedence graphs, and expanding search on trees.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::density::SearchInstance;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::setfn::{FnOracle, Modular, Oracle, Props};
use crate::sidney::{expected_cost, solve, CostReport, SolveMethod};
use crate::subset::{SearchOrder, Subset, MAX_ELEMENTS};

/// Concave nondecreasing `h` applied to completion times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HSpec {
    Identity,
    /// `y^β`, `0 < β <= 1`.
    Power {
        #[serde(rename = "param")]
        beta: f64,
    },
    /// `log(1 + a y)`.
    Log {
        #[serde(rename = "param")]
        a: f64,
    },
    /// `(1 - e^{-r y}) / r`.
    ExpDiscount {
        #[serde(rename = "param")]
        r: f64,
    },
    /// Piecewise-linear through `(y, h(y))` samples starting at `(0, 0)`;
    /// extended linearly past the last sample.
    Table {
        points: Vec<(f64, f64)>,
    },
}

impl HSpec {
    pub fn is_identity(&self) -> bool {
        matches!(self, HSpec::Identity)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Invalid(msg));
        match self {
            HSpec::Identity => Ok(()),
            HSpec::Power { beta } if !(*beta > 0.0 && *beta <= 1.0) => {
                bad(format!("power exponent {beta} outside (0, 1]"))
            }
            HSpec::Log { a } if !(*a > 0.0 && a.is_finite()) => bad(format!("log parameter {a} must be positive")),
            HSpec::ExpDiscount { r } if !(*r > 0.0 && r.is_finite()) => {
                bad(format!("discount rate {r} must be positive"))
            }
            HSpec::Table { points } => {
                if points.len() < 2 || points[0] != (0.0, 0.0) {
                    return bad("table must start at (0, 0) and have two or more points".into());
                }
                let slopes: Vec<f64> = points
                    .windows(2)
                    .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
                    .collect();
                if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return bad("table abscissae must increase strictly".into());
                }
                if slopes.iter().any(|&s| s < 0.0 || !s.is_finite()) {
                    return bad("table must be nondecreasing".into());
                }
                if slopes.windows(2).any(|w| w[1] > w[0] + 1e-12) {
                    return bad("table must be concave".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            HSpec::Identity => y,
            HSpec::Power { beta } => y.powf(*beta),
            HSpec::Log { a } => (a * y).ln_1p(),
            HSpec::ExpDiscount { r } => -(-r * y).exp_m1() / r,
            HSpec::Table { points } => {
                let k = points.windows(2).position(|w| y <= w[1].0).unwrap_or(points.len() - 2);
                let ((x0, y0), (x1, y1)) = (points[k], points[k + 1]);
                y0 + (y1 - y0) * (y - x0) / (x1 - x0)
            }
        }
    }

    /// One-sided derivatives `(h'(0+), h'(total-))`.
    fn derivatives(&self, total: f64) -> (f64, f64) {
        match self {
            HSpec::Identity => (1.0, 1.0),
            HSpec::Power { beta } if *beta == 1.0 => (1.0, 1.0),
            HSpec::Power { beta } => (f64::INFINITY, beta * total.powf(beta - 1.0)),
            HSpec::Log { a } => (*a, a / (1.0 + a * total)),
            HSpec::ExpDiscount { r } => (1.0, (-r * total).exp()),
            HSpec::Table { points } => {
                let slope = |k: usize| {
                    let ((x0, y0), (x1, y1)) = (points[k], points[k + 1]);
                    (y1 - y0) / (x1 - x0)
                };
                let k = points
                    .windows(2)
                    .position(|w| total <= w[1].0)
                    .unwrap_or(points.len() - 2);
                (slope(0), slope(k))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoprecRatio {
    /// `2 / (2 - κ_f)`.
    pub ratio: f64,
    pub kappa: f64,
    /// `lim (h(T) - h(y)) / h(T - y)` as `y → T`, for tables.
    pub limit_form: Option<f64>,
    /// Limit and derivative forms of `1 - κ_f` differ by more than 1e-6.
    pub disagreement: bool,
}

/// Approximation ratio for `1||Σ w_j h(C_j)` with total processing time `total`.
pub fn noprec_ratio(h: &HSpec, total: f64) -> Result<NoprecRatio> {
    h.validate()?;
    if !(total > 0.0) {
        return Err(Error::Invalid(format!(
            "total processing time {total} must be positive"
        )));
    }
    let (d0, dt) = h.derivatives(total);
    if d0 == 0.0 {
        return Err(Error::Assumption("h'(0) = 0".into()));
    }
    let one_minus_kappa = if d0.is_infinite() { 0.0 } else { dt / d0 };
    let limit_form = match h {
        HSpec::Table { .. } => {
            let eps = 1e-7 * total.max(1.0);
            Some((h.eval(total) - h.eval(total - eps)) / h.eval(eps))
        }
        _ => None,
    };
    let kappa = 1.0 - one_minus_kappa;
    Ok(NoprecRatio {
        ratio: 2.0 / (2.0 - kappa),
        kappa,
        disagreement: limit_form.is_some_and(|l| (l - one_minus_kappa).abs() > 1e-6),
        limit_form,
    })
}

/// Directed acyclic precedence graph; an edge `(s, t)` means `s` precedes `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dag {
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Dag {
    /// Graph on jobs `0..n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Dag {
            nodes: (0..n).collect(),
            edges,
        }
    }

    pub fn singleton(id: usize) -> Self {
        Dag {
            nodes: vec![id],
            edges: Vec::new(),
        }
    }

    fn node_set(&self) -> Subset {
        Subset::from_elements(self.nodes.iter().copied())
    }

    /// Strict ancestor sets of jobs `0..n`, which must be the node set.
    pub fn ancestors(&self) -> Result<Vec<Subset>> {
        let n = self.nodes.len();
        if n > MAX_ELEMENTS || self.node_set() != Subset::full(n) {
            return Err(Error::Invalid("dag nodes must be 0..n".into()));
        }
        let mut preds = vec![Subset::EMPTY; n];
        for &(s, t) in &self.edges {
            if s >= n || t >= n {
                return Err(Error::Invalid(format!("edge ({s}, {t}) out of range")));
            }
            if s == t {
                return Err(Error::Cyclic(s));
            }
            preds[t] = preds[t].with(s);
        }
        // Kahn's algorithm gives a topological order or exposes a cycle.
        let mut indegree: Vec<usize> = preds.iter().map(|p| p.len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(j) = queue.pop_front() {
            topo.push(j);
            for t in (0..n).filter(|&t| preds[t].contains(j)) {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&j| indegree[j] > 0).expect("cycle");
            return Err(Error::Cyclic(stuck));
        }
        let mut anc = vec![Subset::EMPTY; n];
        for &j in &topo {
            anc[j] = preds[j].iter().fold(preds[j], |acc, p| acc | anc[p]);
        }
        Ok(anc)
    }

    fn sources(&self) -> Vec<usize> {
        let targets = Subset::from_elements(self.edges.iter().map(|e| e.1));
        self.nodes.iter().copied().filter(|&v| !targets.contains(v)).collect()
    }

    fn sinks(&self) -> Vec<usize> {
        let tails = Subset::from_elements(self.edges.iter().map(|e| e.0));
        self.nodes.iter().copied().filter(|&v| !tails.contains(v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Composition {
    Series,
    Parallel,
}

/// Series composition makes every node of `g1` precede every node of `g2`;
/// for Hasse-diagram inputs only the sink-to-source edges are added.
pub fn gsp_compose(kind: Composition, g1: &Dag, g2: &Dag) -> Result<Dag> {
    if !g1.node_set().is_disjoint(g2.node_set()) {
        return Err(Error::GroundMismatch("composed graphs share nodes".into()));
    }
    let mut nodes: Vec<usize> = g1.nodes.iter().chain(&g2.nodes).copied().collect();
    nodes.sort_unstable();
    let mut edges: Vec<(usize, usize)> = g1.edges.iter().chain(&g2.edges).copied().collect();
    if kind == Composition::Series {
        for s in g1.sinks() {
            edges.extend(g2.sources().into_iter().map(|t| (s, t)));
        }
    }
    edges.sort_unstable();
    Ok(Dag { nodes, edges })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weights<T> {
    PerJob(Vec<T>),
    /// Sparse `w_A` per subset of jobs.
    Subsets(Vec<(Subset, T)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrecedenceInstance<T> {
    pub dag: Dag,
    pub p: Vec<T>,
    pub weights: Weights<T>,
    pub h: HSpec,
}

impl<T: Scalar> PrecedenceInstance<T> {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.dag.nodes.len() != n {
            return Err(Error::GroundMismatch(format!(
                "{} processing times for {} jobs",
                n,
                self.dag.nodes.len()
            )));
        }
        self.dag.ancestors()?;
        if let Some(j) = self.p.iter().position(|p| !(*p > T::zero())) {
            return Err(Error::ZeroCost(j));
        }
        self.h.validate()?;
        let ws: Vec<&T> = match &self.weights {
            Weights::PerJob(w) if w.len() != n => {
                return Err(Error::GroundMismatch(format!("{} weights for {n} jobs", w.len())))
            }
            Weights::PerJob(w) => w.iter().collect(),
            Weights::Subsets(w) => {
                if let Some((a, _)) = w.iter().find(|(a, _)| a.is_empty() || !a.is_subset_of(Subset::full(n))) {
                    return Err(Error::OutOfRange { mask: a.0, n });
                }
                w.iter().map(|(_, v)| v).collect()
            }
        };
        if ws.iter().any(|w| w.is_negative()) {
            return Err(Error::Invalid("negative weight".into()));
        }
        if !ws.iter().any(|w| **w > T::zero()) {
            return Err(Error::Invalid("no positive weight".into()));
        }
        Ok(())
    }
}

/// `f(A) = h(p(closure(A)))` where `closure(A)` adds all ancestors.
fn closure_cost<T: Scalar>(anc: Vec<Subset>, p: Vec<T>, h: HSpec) -> Result<Oracle<T>> {
    if !h.is_identity() && T::EXACT {
        return Err(Error::FloatOnly(format!("{h:?} composition")));
    }
    h.validate()?;
    let n = p.len();
    Ok(Oracle::new(FnOracle::new(n, Props::POLYMATROID, move |a: Subset| {
        let closed = a.iter().fold(a, |acc, j| acc | anc[j]);
        let total: T = closed.iter().map(|j| p[j].clone()).sum();
        if h.is_identity() {
            total
        } else {
            T::from_f64(h.eval(total.to_f64())).expect("finite h value")
        }
    })))
}

pub fn cost_oracle<T: Scalar>(inst: &PrecedenceInstance<T>) -> Result<Oracle<T>> {
    if inst.dag.nodes.len() != inst.n() {
        return Err(Error::GroundMismatch("dag and processing times differ in size".into()));
    }
    closure_cost(inst.dag.ancestors()?, inst.p.clone(), inst.h.clone())
}

/// `g(A) = Σ_{B ⊂ A} w_B`; modular for per-job weights.
pub fn weight_oracle<T: Scalar>(inst: &PrecedenceInstance<T>) -> Result<Oracle<T>> {
    match &inst.weights {
        Weights::PerJob(w) => {
            if w.iter().any(|v| v.is_negative()) {
                return Err(Error::Invalid("negative weight".into()));
            }
            Ok(Oracle::new(Modular::new(w.clone())))
        }
        Weights::Subsets(w) => subset_weight_oracle(inst.n(), w.clone()),
    }
}

pub fn subset_weight_oracle<T: Scalar>(n: usize, w: Vec<(Subset, T)>) -> Result<Oracle<T>> {
    if w.iter().any(|(_, v)| v.is_negative()) {
        return Err(Error::Invalid("negative weight".into()));
    }
    if let Some((a, _)) = w.iter().find(|(a, _)| !a.is_subset_of(Subset::full(n))) {
        return Err(Error::OutOfRange { mask: a.0, n });
    }
    Ok(Oracle::new(FnOracle::new(
        n,
        Props::SUPERMODULAR_WEIGHT,
        move |a: Subset| {
            w.iter()
                .filter(|(b, _)| b.is_subset_of(a))
                .map(|(_, v)| v.clone())
                .sum()
        },
    )))
}

/// Orders jobs by non-increasing `w_j / p_j`, ties by ascending index.
pub fn smith_rule<T: Scalar>(p: &[T], w: &[T]) -> Result<SearchOrder> {
    if p.len() != w.len() {
        return Err(Error::GroundMismatch(format!("{} times, {} weights", p.len(), w.len())));
    }
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (w[j].clone() * p[i].clone(), w[i].clone() * p[j].clone());
        if a.approx_eq(&b) {
            Ordering::Equal
        } else {
            a.partial_cmp(&b).unwrap_or(Ordering::Equal)
        }
    });
    SearchOrder::new(order)
}

/// The search instance `(cost_oracle, weight_oracle)` on jobs `0..n`.
pub fn search_instance<T: Scalar>(inst: &PrecedenceInstance<T>) -> Result<SearchInstance<T>> {
    SearchInstance::numbered(cost_oracle(inst)?, weight_oracle(inst)?)
}

/// Inserts each job's unscheduled ancestors (recursively, lowest index first)
/// immediately before it.
pub fn make_feasible(order: &SearchOrder, anc: &[Subset]) -> Result<SearchOrder> {
    fn place(j: usize, anc: &[Subset], done: &mut Subset, out: &mut Vec<usize>) {
        if done.contains(j) {
            return;
        }
        for a in anc[j].iter() {
            place(a, anc, done, out);
        }
        *done = done.with(j);
        out.push(j);
    }
    let mut done = Subset::EMPTY;
    let mut out = Vec::with_capacity(order.len());
    for &j in order.as_slice() {
        place(j, anc, &mut done, &mut out);
    }
    SearchOrder::new(out)
}

/// Solves the scheduling problem with `method` and returns a
/// precedence-feasible order.
pub fn schedule<T: Scalar>(inst: &PrecedenceInstance<T>, method: SolveMethod) -> Result<CostReport<T>> {
    inst.validate()?;
    let search = search_instance(inst)?;
    let mut report = solve(&search, method)?;
    report.order = make_feasible(&report.order, &inst.dag.ancestors()?)?;
    report.cost = expected_cost(&search, &report.order)?;
    Ok(report)
}

/// Replaces subset weights by zero-time dummy jobs, each preceded by its set
/// and carrying its weight; original jobs get weight zero. Jobs `0..n` keep
/// their indices and dummies follow in the order of the weight table.
pub fn dummy_job_reduction<T: Scalar>(inst: &PrecedenceInstance<T>) -> Result<PrecedenceInstance<T>> {
    let Weights::Subsets(ws) = &inst.weights else {
        return Ok(inst.clone());
    };
    let n = inst.n();
    let mut edges = inst.dag.edges.clone();
    let mut p = inst.p.clone();
    let mut w = vec![T::zero(); n];
    for (k, (set, weight)) in ws.iter().enumerate() {
        edges.extend(set.iter().map(|j| (j, n + k)));
        p.push(T::zero());
        w.push(weight.clone());
    }
    if p.len() > MAX_ELEMENTS {
        return Err(Error::Capacity {
            n: p.len(),
            limit: MAX_ELEMENTS,
            what: "dummy-job reduction",
        });
    }
    Ok(PrecedenceInstance {
        dag: Dag::new(p.len(), edges),
        p,
        weights: Weights::PerJob(w),
        h: inst.h.clone(),
    })
}

/// Rooted tree with undirected weighted edges on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedTree<T> {
    pub vertices: usize,
    pub root: usize,
    pub edges: Vec<(usize, usize, T)>,
}

impl<T: Scalar> RootedTree<T> {
    /// Non-root vertices in ascending order; element `i` of the search
    /// instance is vertex `elements()[i]`.
    pub fn elements(&self) -> Vec<usize> {
        (0..self.vertices).filter(|&v| v != self.root).collect()
    }

    /// Parent of each vertex (root maps to itself) and the cost of its parent edge.
    fn parents(&self) -> Result<Vec<(usize, T)>> {
        let v = self.vertices;
        if self.root >= v || self.edges.len() + 1 != v {
            return Err(Error::Invalid(
                "tree must have vertices - 1 edges and a valid root".into(),
            ));
        }
        let mut adj = vec![Vec::new(); v];
        for (u, w, c) in &self.edges {
            if *u >= v || *w >= v || !(*c > T::zero()) {
                return Err(Error::Invalid(format!("bad tree edge ({u}, {w}, {c})")));
            }
            adj[*u].push((*w, c.clone()));
            adj[*w].push((*u, c.clone()));
        }
        let mut parent: Vec<Option<(usize, T)>> = vec![None; v];
        parent[self.root] = Some((self.root, T::zero()));
        let mut queue = VecDeque::from([self.root]);
        while let Some(u) = queue.pop_front() {
            for (w, c) in &adj[u] {
                if parent[*w].is_none() {
                    parent[*w] = Some((u, c.clone()));
                    queue.push_back(*w);
                }
            }
        }
        parent
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("tree is disconnected".into()))
    }
}

/// `f(A)`: total cost of the edges on root paths to `A` (expanding search).
pub fn tree_cost_oracle<T: Scalar>(tree: &RootedTree<T>) -> Result<Oracle<T>> {
    let parents = tree.parents()?;
    let elems = tree.elements();
    if elems.is_empty() {
        return Err(Error::EmptySet);
    }
    let index = |v: usize| elems.binary_search(&v).ok();
    let anc: Vec<Subset> = elems
        .iter()
        .map(|&v| {
            let mut set = Subset::EMPTY;
            let mut u = parents[v].0;
            while let Some(i) = index(u) {
                set = set.with(i);
                u = parents[u].0;
            }
            set
        })
        .collect();
    let p = elems.iter().map(|&v| parents[v].1.clone()).collect();
    closure_cost(anc, p, HSpec::Identity)
}

/// Precedence instance equivalent to expanding search on `tree`.
pub fn tree_dag<T: Scalar>(tree: &RootedTree<T>) -> Result<(Dag, Vec<T>)> {
    let parents = tree.parents()?;
    let elems = tree.elements();
    let index = |v: usize| elems.binary_search(&v).ok();
    let mut edges = Vec::new();
    for (i, &v) in elems.iter().enumerate() {
        if let Some(j) = index(parents[v].0) {
            edges.push((j, i));
        }
    }
    let p = elems.iter().map(|&v| parents[v].1.clone()).collect();
    Ok((Dag::new(elems.len(), edges), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::setfn::verify_structure;
    use crate::sidney::brute_force_optimal;
    use crate::Rational;

    fn q(p: i64, d: i64) -> Rational {
        ratio(p, d)
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    fn inst(n: usize, edges: Vec<(usize, usize)>, p: &[i64], w: Weights<Rational>) -> PrecedenceInstance<Rational> {
        PrecedenceInstance {
            dag: Dag::new(n, edges),
            p: qs(p),
            weights: w,
            h: HSpec::Identity,
        }
    }

    #[test]
    fn cost_oracle_examples() {
        let free = inst(2, vec![], &[1, 2], Weights::PerJob(qs(&[1, 1])));
        assert_eq!(cost_oracle(&free).unwrap().at(Subset::singleton(1)), q(2, 1));
        let chain = inst(2, vec![(0, 1)], &[1, 1], Weights::PerJob(qs(&[1, 1])));
        assert_eq!(cost_oracle(&chain).unwrap().at(Subset::singleton(1)), q(2, 1));
        let logged = PrecedenceInstance {
            dag: Dag::new(2, vec![(0, 1)]),
            p: vec![1.0, 1.0],
            weights: Weights::PerJob(vec![1.0, 1.0]),
            h: HSpec::Log { a: 1.0 },
        };
        assert!((cost_oracle(&logged).unwrap().at(Subset::singleton(1)) - 3f64.ln()).abs() < 1e-15);
        let exact_log = PrecedenceInstance {
            h: HSpec::Log { a: 1.0 },
            ..chain.clone()
        };
        assert!(matches!(cost_oracle(&exact_log), Err(Error::FloatOnly(_))));
        let cyclic = inst(2, vec![(0, 1), (1, 0)], &[1, 1], Weights::PerJob(qs(&[1, 1])));
        assert!(matches!(cost_oracle(&cyclic), Err(Error::Cyclic(_))));
    }

    #[test]
    fn weight_oracle_examples() {
        let pair = inst(2, vec![], &[1, 1], Weights::Subsets(vec![(Subset(0b11), q(1, 1))]));
        let g = weight_oracle(&pair).unwrap();
        assert_eq!((g.at(Subset(0b01)), g.at(Subset(0b11))), (q(0, 1), q(1, 1)));
        let per_job = inst(2, vec![], &[1, 1], Weights::PerJob(qs(&[1, 2])));
        let g = weight_oracle(&per_job).unwrap();
        assert_eq!(g.total(), q(3, 1));
        assert!(verify_structure(&g).unwrap().modular());
        let negative = inst(2, vec![], &[1, 1], Weights::PerJob(qs(&[1, -2])));
        assert!(weight_oracle(&negative).is_err());
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_rule(&qs(&[1, 1]), &qs(&[2, 1])).unwrap().as_slice(), &[0, 1]);
        assert_eq!(
            smith_rule(&qs(&[1, 2, 3]), &qs(&[2, 4, 6])).unwrap().as_slice(),
            &[0, 1, 2]
        );
        assert_eq!(smith_rule(&qs(&[2, 1]), &qs(&[1, 1])).unwrap().as_slice(), &[1, 0]);
    }

    #[test]
    fn schedule_examples() {
        let plain = inst(3, vec![], &[3, 1, 2], Weights::PerJob(qs(&[1, 2, 2])));
        let smith = smith_rule(&plain.p, &qs(&[1, 2, 2])).unwrap();
        let search = search_instance(&plain).unwrap();
        for method in [SolveMethod::Sidney, SolveMethod::Spd, SolveMethod::Brute] {
            let r = schedule(&plain, method).unwrap();
            assert_eq!(r.cost, expected_cost(&search, &smith).unwrap());
        }

        let pair = inst(3, vec![], &[1, 1, 1], Weights::Subsets(vec![(Subset(0b011), q(1, 1))]));
        let r = schedule(&pair, SolveMethod::Brute).unwrap();
        assert_eq!(
            Subset::from_elements(r.order.as_slice()[..2].iter().copied()),
            Subset(0b011)
        );
        assert_eq!(r.cost, q(2, 1));
    }

    #[test]
    fn repaired_order_is_feasible() {
        let anc = Dag::new(3, vec![(0, 1), (1, 2)]).ancestors().unwrap();
        let order = SearchOrder::new(vec![2, 0, 1]).unwrap();
        assert_eq!(make_feasible(&order, &anc).unwrap().as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn gsp_examples() {
        let (a, b, c) = (Dag::singleton(0), Dag::singleton(1), Dag::singleton(2));
        assert_eq!(gsp_compose(Composition::Series, &a, &b).unwrap().edges, vec![(0, 1)]);
        assert!(gsp_compose(Composition::Parallel, &a, &b).unwrap().edges.is_empty());
        let par = gsp_compose(Composition::Parallel, &a, &b).unwrap();
        assert_eq!(
            gsp_compose(Composition::Series, &par, &c).unwrap().edges,
            vec![(0, 2), (1, 2)]
        );
        assert!(gsp_compose(Composition::Series, &a, &a).is_err());
    }

    #[test]
    fn tree_examples() {
        let path = RootedTree {
            vertices: 3,
            root: 0,
            edges: vec![(0, 1, q(1, 1)), (1, 2, q(1, 1))],
        };
        let f = tree_cost_oracle(&path).unwrap();
        assert_eq!((f.at(Subset::EMPTY), f.at(Subset::singleton(1))), (q(0, 1), q(2, 1)));
        let star = RootedTree {
            vertices: 3,
            root: 0,
            edges: vec![(0, 1, q(1, 1)), (0, 2, q(1, 1))],
        };
        assert_eq!(tree_cost_oracle(&star).unwrap().total(), q(2, 1));
        let split = RootedTree {
            vertices: 4,
            root: 0,
            edges: vec![(0, 1, q(1, 1)), (1, 0, q(1, 1)), (2, 3, q(1, 1))],
        };
        assert!(tree_cost_oracle(&split).is_err());
        let (dag, p) = tree_dag(&path).unwrap();
        let via_dag = PrecedenceInstance {
            dag,
            p,
            weights: Weights::PerJob(qs(&[1, 1])),
            h: HSpec::Identity,
        };
        assert!(cost_oracle(&via_dag).unwrap().same_values(&f));
    }

    #[test]
    fn noprec_examples() {
        let log = noprec_ratio(&HSpec::Log { a: 1.0 }, 1.0).unwrap();
        assert!((log.ratio - 4.0 / 3.0).abs() < 1e-15);
        for a in [0.5, 2.0, 7.0] {
            let r = noprec_ratio(&HSpec::Log { a }, 1.0).unwrap().ratio;
            assert!((r - (1.0 + a / (2.0 + a))).abs() < 1e-12);
        }
        let exp = noprec_ratio(&HSpec::ExpDiscount { r: 2f64.ln() }, 1.0).unwrap();
        assert!((exp.ratio - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(noprec_ratio(&HSpec::Identity, 5.0).unwrap().ratio, 1.0);
        assert_eq!(noprec_ratio(&HSpec::Power { beta: 0.5 }, 5.0).unwrap().ratio, 2.0);
        let table = HSpec::Table {
            points: vec![(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)],
        };
        let t = noprec_ratio(&table, 2.0).unwrap();
        assert!((t.kappa - 0.5).abs() < 1e-12 && !t.disagreement);
        let flat = HSpec::Table {
            points: vec![(0.0, 0.0), (1.0, 0.0)],
        };
        assert!(noprec_ratio(&flat, 1.0).is_err());
        let convex = HSpec::Table {
            points: vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)],
        };
        assert!(convex.validate().is_err());
    }

    #[test]
    fn dummy_job_reduction_preserves_optimum() {
        let direct = inst(
            3,
            vec![(0, 2)],
            &[2, 1, 3],
            Weights::Subsets(vec![(Subset(0b011), q(2, 1)), (Subset(0b100), q(1, 1))]),
        );
        let reduced = dummy_job_reduction(&direct).unwrap();
        assert_eq!(reduced.n(), 5);
        let a = brute_force_optimal(&search_instance(&direct).unwrap()).unwrap().1;
        let b = brute_force_optimal(&search_instance(&reduced).unwrap()).unwrap().1;
        assert_eq!(a, b);
    }
}
