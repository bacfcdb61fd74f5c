//! Property tests over generated instances.

use itertools::Itertools;
use num_traits::Zero;
use proptest::prelude::*;

use subsearch_core::density::{density, max_density_subset};
use subsearch_core::game::{
    equalization, expected_cost_vector, game_value_spd, in_scaled_base_polyhedron, matrix_game_solve,
    search_cost_modular, HiderStrategy, MatrixMethod, SearcherStrategy,
};
use subsearch_core::gen::{generate, random_gsp, Family};
use subsearch_core::scalar::ratio;
use subsearch_core::sched::{
    dummy_job_reduction, make_feasible, search_instance, Dag, HSpec, PrecedenceInstance, Weights,
};
use subsearch_core::setfn::base_polyhedron_vertex;
use subsearch_core::sidney::{brute_force_optimal, epsilon, expected_cost, sidney_decomposition, two_approx_search};
use subsearch_core::spd::{
    closure, find_f_initial, find_separator, spd_optimal_search, spd_optimal_search_with, SpdPolicy,
};
use subsearch_core::{Rational, RationalInstance, SearchOrder, Subset};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(p: i64, d: i64) -> Rational {
    ratio(p, d)
}

fn build(family: Family, n: usize, seed: u64) -> RationalInstance {
    generate(family, n, seed, 2.min(n)).unwrap().build().unwrap()
}

fn coverage() -> impl Strategy<Value = RationalInstance> {
    (1usize..=6, any::<u64>()).prop_map(|(n, seed)| build(Family::Coverage, n, seed))
}

fn any_family() -> impl Strategy<Value = RationalInstance> {
    (prop::sample::select(Family::ALL.to_vec()), 1usize..=6, any::<u64>())
        .prop_map(|(family, n, seed)| build(family, n, seed))
}

fn decomposable(max_n: usize) -> impl Strategy<Value = RationalInstance> {
    (
        prop::sample::select(vec![Family::Tree, Family::Gsp, Family::Modular]),
        1usize..=max_n,
        any::<u64>(),
    )
        .prop_map(|(family, n, seed)| build(family, n, seed))
}

fn order_of(n: usize) -> impl Strategy<Value = SearchOrder> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|p| SearchOrder::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn max_density_set_is_the_largest_densest_set(inst in coverage()) {
        let d = max_density_subset(&inst).unwrap();
        for a in inst.full().subsets().filter(|a| !a.is_empty()) {
            let rho = density(&inst, a).unwrap();
            prop_assert!(rho <= d.rho);
            if rho == d.rho {
                prop_assert!(a.is_subset_of(d.set));
            }
        }
    }

    #[test]
    fn optimal_orders_respect_the_sidney_blocks(inst in coverage()) {
        let dec = sidney_decomposition(&inst).unwrap();
        prop_assert!(dec.rhos.windows(2).all(|w| w[0] >= w[1]));
        let (order, opt) = brute_force_optimal(&inst).unwrap();
        let mut at = 0;
        for &block in &dec.blocks {
            let head = Subset::from_elements(order.as_slice()[at..at + block.len()].iter().copied());
            prop_assert_eq!(head, block);
            at += block.len();
        }
        let approx = two_approx_search(&inst).unwrap();
        prop_assert!(approx.lower_bound <= opt.clone());
        prop_assert!(approx.cost <= approx.lower_bound.clone() * q(2, 1));
    }

    #[test]
    fn cost_and_epsilon_are_self_dual(inst in any_family(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..inst.n()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let order = SearchOrder::new(perm).unwrap();
        let dual = inst.dual();
        prop_assert_eq!(expected_cost(&inst, &order).unwrap(), expected_cost(&dual, &order.reversed()).unwrap());
        prop_assert_eq!(epsilon(&inst, &order).unwrap(), epsilon(&dual, &order.reversed()).unwrap());
    }

    #[test]
    fn closure_is_extensive_monotone_idempotent(inst in any_family(), a in any::<u64>(), b in any::<u64>()) {
        let full = inst.full();
        let a = Subset(a) & full;
        let b = Subset(b) & full | a;
        let ca = closure(&inst.f, a);
        prop_assert!(a.is_subset_of(ca));
        prop_assert!(ca.is_subset_of(closure(&inst.f, b)));
        prop_assert_eq!(closure(&inst.f, ca), ca);
        prop_assert_eq!(inst.f.at(ca), inst.f.at(a));
    }

    #[test]
    fn initial_sets_and_separators_are_sound(inst in any_family()) {
        let f = &inst.f;
        let full = inst.full();
        if let Some(i) = find_f_initial(f) {
            prop_assert!(!i.is_empty() && i != full);
            for s in (full - i).iter() {
                prop_assert_eq!(f.at(i.with(s)), f.singleton(s));
            }
        }
        let splits = |a: Subset| {
            let rest = full - a;
            f.at(a) + f.at(rest) == f.total() && inst.g.at(a) + inst.g.at(rest) == inst.g.total()
        };
        match find_separator(f, &inst.g).unwrap() {
            Some(a) => prop_assert!(!a.is_empty() && a != full && splits(a)),
            None => prop_assert!(full.subsets().filter(|&a| !a.is_empty() && a != full).all(|a| !splits(a))),
        }
    }

    #[test]
    fn spd_is_exact_on_decomposable_families(inst in decomposable(8)) {
        let (order, cost) = spd_optimal_search(&inst).unwrap();
        prop_assert_eq!(expected_cost(&inst, &order).unwrap(), cost.clone());
        prop_assert_eq!(brute_force_optimal(&inst).unwrap().1, cost);
    }

    #[test]
    fn spd_cost_does_not_depend_on_the_policy(inst in decomposable(7)) {
        let (_, reference) = spd_optimal_search(&inst).unwrap();
        for series_first in [true, false] {
            for f_initial_first in [true, false] {
                let policy = SpdPolicy { series_first, f_initial_first };
                prop_assert_eq!(spd_optimal_search_with(&inst, policy).unwrap().1, reference.clone());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn game_solution_is_an_equilibrium(inst in decomposable(5)) {
        let f = &inst.f;
        let sol = game_value_spd(f).unwrap();
        let total = f.total();
        prop_assert!(total.clone() / q(2, 1) <= sol.value && sol.value <= total);
        prop_assert_eq!(sol.value.clone(), (f.total() + sol.phi.clone()) / q(2, 1));
        prop_assert!(in_scaled_base_polyhedron(f, &sol.hider).unwrap().holds);
        prop_assert!(equalization(f, &sol).unwrap().on_support);
        let best = (0..inst.n())
            .permutations(inst.n())
            .map(|p| search_cost_modular(f, &sol.hider, &SearchOrder::new(p).unwrap()).unwrap())
            .min()
            .unwrap();
        prop_assert_eq!(best, sol.value.clone());
        prop_assert_eq!(matrix_game_solve(f, MatrixMethod::ExactLp).unwrap().value, sol.value);
    }

    #[test]
    fn arbitrary_strategies_are_within_twice_the_value(
        (inst, order) in decomposable(5).prop_flat_map(|inst| {
            let n = inst.n();
            (Just(inst), order_of(n))
        })
    ) {
        let f = &inst.f;
        let v = game_value_spd(f).unwrap().value;
        let costs = expected_cost_vector(f, &SearcherStrategy::Order(order.as_slice().to_vec())).unwrap();
        prop_assert!(costs.iter().all(|c| *c <= v.clone() * q(2, 1)));
        let x: Vec<Rational> = base_polyhedron_vertex(f, &order)
            .into_iter()
            .map(|xi| xi / f.total())
            .collect();
        let hider = HiderStrategy::new(x).unwrap();
        prop_assert!(in_scaled_base_polyhedron(f, &hider).unwrap().holds);
        let best = (0..inst.n())
            .permutations(inst.n())
            .map(|p| search_cost_modular(f, &hider, &SearchOrder::new(p).unwrap()).unwrap())
            .min()
            .unwrap();
        prop_assert!(best >= v / q(2, 1));
    }

    #[test]
    fn dummy_jobs_preserve_the_optimum(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dag = if n > 1 { random_gsp(&mut rng, n) } else { Dag::new(1, vec![]) };
        let weights = (0..rng.gen_range(1..=3))
            .map(|_| (Subset(rng.gen_range(1..1u64 << n)), q(rng.gen_range(1..=4), 1)))
            .collect();
        let inst = PrecedenceInstance {
            dag,
            p: (0..n).map(|_| q(rng.gen_range(1..=5), 1)).collect(),
            weights: Weights::Subsets(weights),
            h: HSpec::Identity,
        };
        let reduced = dummy_job_reduction(&inst).unwrap();
        prop_assert_eq!(
            brute_force_optimal(&search_instance(&inst).unwrap()).unwrap().1,
            brute_force_optimal(&search_instance(&reduced).unwrap()).unwrap().1
        );
    }

    #[test]
    fn repair_never_increases_cost((n, order) in (1usize..=7).prop_flat_map(|n| (Just(n), order_of(n))), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = PrecedenceInstance {
            dag: random_gsp(&mut rng, n),
            p: (0..n).map(|_| q(rng.gen_range(1..=5), 1)).collect(),
            weights: Weights::PerJob((0..n).map(|_| q(rng.gen_range(0..=4), 1)).collect()),
            h: HSpec::Identity,
        };
        prop_assume!(matches!(&inst.weights, Weights::PerJob(w) if w.iter().any(|x| !x.is_zero())));
        let search = search_instance(&inst).unwrap();
        let anc = inst.dag.ancestors().unwrap();
        let repaired = make_feasible(&order, &anc).unwrap();
        let mut done = Subset::EMPTY;
        for &j in repaired.as_slice() {
            prop_assert!(anc[j].is_subset_of(done));
            done = done.with(j);
        }
        prop_assert!(expected_cost(&search, &repaired).unwrap() <= expected_cost(&search, &order).unwrap());
    }
}
