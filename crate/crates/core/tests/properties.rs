mod common;

use gnep::fixtures;
use gnep::flowgame::{generate_instance, IntProfile};
use gnep::io::parse_rational;
use gnep::kernel::ratio;
use gnep::nikaido::{penalty_factor, profile_from_ints, psi, v_alpha, v_hat, Mode};
use gnep::solvers::{local_descent, random_starts, DescentOptions, DescentProblem};
use gnep::{CdfgInstance, FiniteGnep};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::params;

struct Alpha<'a>(&'a CdfgInstance);

impl DescentProblem for Alpha<'_> {
    fn evaluate(&self, x: &[f64]) -> gnep::Result<(f64, Vec<f64>)> {
        gnep::nikaido::value_and_gradient(self.0, gnep::nikaido::Objective::VAlpha { alpha: 0.02 }, x, false)
    }

    fn project(&self, x: &[f64]) -> gnep::Result<Vec<f64>> {
        gnep::nikaido::project_relaxed(self.0, x, 1e-9)
    }
}

fn finite_fixtures() -> Vec<(&'static str, FiniteGnep)> {
    vec![
        ("sjc", fixtures::exa_sjc()),
        ("kovskoe", fixtures::kovskoe()),
        ("joint", fixtures::exa_joint_constr()),
        ("rectangle", fixtures::rectangle()),
        ("concept", fixtures::concept_game()),
        ("zero-one", fixtures::zero_one_congestion()),
    ]
}

#[test]
fn convexified_gap_is_below_the_original_on_fixtures() {
    for (name, game) in finite_fixtures() {
        for x in game.enumerate_feasible_profiles() {
            let orig = v_hat(&game, &x, Mode::Original).unwrap().value;
            let conv = v_hat(&game, &x, Mode::Convexified).unwrap().value;
            assert!(conv >= ratio(0, 1) && conv <= orig, "{name} at {x}: {conv} vs {orig}");
            assert!(psi(&game, &x, &x).unwrap().is_zero());
        }
    }
}

#[test]
fn v_alpha_descent_reaches_zero_from_most_starts() {
    let mut reached = 0;
    let mut total = 0;
    for seed in 0..4 {
        let inst = generate_instance(params(6, 2, true, true), seed).unwrap();
        let problem = Alpha(&inst);
        for (s, x0) in random_starts(&inst, 5, seed).unwrap().into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
            let out = local_descent(&problem, &x0, &DescentOptions::default(), &mut rng).unwrap();
            total += 1;
            if out.value < 1e-4 {
                reached += 1;
            }
        }
    }
    assert!(2 * reached >= total, "{reached}/{total} starts reached 1e-4");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn penalty_is_one_exactly_on_integers(xs in prop::collection::vec(-50i64..50, 1..40)) {
        let x: Vec<f64> = xs.iter().map(|v| *v as f64).collect();
        prop_assert_eq!(penalty_factor(&x, x.len(), 1), 1.0);
    }

    #[test]
    fn penalty_stays_in_range(xs in prop::collection::vec(-50.0f64..50.0, 1..40)) {
        let f = penalty_factor(&xs, xs.len(), 1);
        prop_assert!((1.0..=2.0).contains(&f));
    }

    #[test]
    fn psi_vanishes_on_the_diagonal(seed in 0u64..400) {
        let inst = generate_instance(params(6, 2 + (seed % 2) as usize, seed % 3 == 0, seed % 2 == 0), seed).unwrap();
        if let Some(x) = gnep::flowgame::greedy_routing(&inst) {
            let p = profile_from_ints(&x);
            prop_assert!(psi(&inst, &p, &p).unwrap().is_zero());
            let orig = v_hat(&inst, &p, Mode::Original).unwrap().value;
            let conv = v_hat(&inst, &p, Mode::Convexified).unwrap().value;
            prop_assert!(conv <= orig);
            prop_assert!(conv >= ratio(0, 1));
        }
    }

    #[test]
    fn descent_never_ends_above_its_start(seed in 0u64..200) {
        let inst = generate_instance(params(5, 2, seed % 2 == 0, seed % 3 != 0), seed).unwrap();
        let problem = Alpha(&inst);
        let x0 = random_starts(&inst, 1, seed).unwrap().remove(0);
        let start = v_alpha(&inst, &x0, 0.02).unwrap().value;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = local_descent(&problem, &x0, &DescentOptions { budget: 200, ..Default::default() }, &mut rng).unwrap();
        prop_assert!(out.value <= start + 1e-9);
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let q = ratio(n, d);
        prop_assert_eq!(parse_rational(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn flatten_inverts_unflatten(seed in 0u64..100) {
        let inst = generate_instance(params(5, 3, true, false), seed).unwrap();
        let flat: Vec<i64> = (0..inst.dim() as i64).collect();
        let blocks: IntProfile = inst.unflatten(&flat);
        prop_assert_eq!(blocks.len(), 3);
        prop_assert_eq!(inst.flatten(&blocks), flat);
    }
}
