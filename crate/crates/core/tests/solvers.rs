mod common;

use gnep::flowgame::{enumerate_joint_profiles, generate_instance, greedy_routing};
use gnep::nikaido::{is_gne, profile_from_ints, v_hat, Mode};
use gnep::solvers::search::best_response_cycle;
use gnep::solvers::{gauss_seidel, multistart_round, solve, solve_reformulation_exhaustive, Method, SolveConfig, Status};
use gnep::kernel::rat;
use num_traits::Zero;

use common::{params, small_instances};

#[test]
fn gauss_seidel_cycles_where_an_equilibrium_exists() {
    let inst = generate_instance(params(4, 2, false, false), 1457).unwrap();
    let x0 = greedy_routing(&inst).unwrap();
    let cycle = best_response_cycle(&inst, &x0, 200).expect("cycle");
    assert_eq!(cycle.cycle.len(), 2);
    let gs = gauss_seidel(&inst, &x0, 200).unwrap();
    assert_eq!(gs.status, Status::BudgetExhausted);
    assert!(!gs.found());
    let oracle = solve_reformulation_exhaustive(&inst, 100_000).unwrap();
    assert_eq!(oracle.status, Status::GneFound);
    assert!(is_gne(&inst, &profile_from_ints(oracle.profile.as_ref().unwrap())));
}

#[test]
fn oracle_certifies_an_instance_without_equilibrium() {
    let inst = generate_instance(params(4, 2, true, false), 1741).unwrap();
    let r = solve_reformulation_exhaustive(&inst, 100_000).unwrap();
    assert_eq!(r.status, Status::NoGneCertified);
    assert_eq!(r.value, Some(rat(5)));
    let xs = enumerate_joint_profiles(&inst, 100_000).unwrap();
    assert_eq!(r.evaluations, xs.len());
    assert!(xs.iter().all(|x| !is_gne(&inst, &profile_from_ints(x))));
    let best = xs
        .iter()
        .map(|x| v_hat(&inst, &profile_from_ints(x), Mode::Convexified).unwrap().value)
        .min()
        .unwrap();
    assert_eq!(best, rat(5));
    let ms = multistart_round(&inst, &SolveConfig { starts: 10, ..Default::default() }).unwrap();
    assert!(!ms.found());
}

#[test]
fn multistart_finds_an_equilibrium_within_twenty_starts() {
    for seed in 0..5 {
        let inst = generate_instance(params(6, 2, true, true), seed).unwrap();
        for method in [Method::Vhat, Method::Valpha, Method::Vbar] {
            let r = solve(&inst, &SolveConfig { method, starts: 20, ..Default::default() }).unwrap();
            assert_eq!(r.status, Status::GneFound, "seed {seed} {method}");
            assert!(r.starts_used <= 20);
            assert!(r.value.as_ref().unwrap().is_zero());
            assert!(is_gne(&inst, &profile_from_ints(r.profile.as_ref().unwrap())));
        }
    }
}

#[test]
fn gauss_seidel_agrees_with_the_oracle_on_unit_instances() {
    let cases = small_instances(20, 20_000, |seed| params(5 + (seed % 3) as usize, 2, seed % 2 == 0, true));
    for (seed, inst, _) in cases {
        let gs = solve(&inst, &SolveConfig { method: Method::GaussSeidel, ..Default::default() }).unwrap();
        let oracle = solve_reformulation_exhaustive(&inst, 20_000).unwrap();
        assert_eq!(oracle.status, Status::GneFound, "seed {seed}");
        assert_eq!(gs.status, Status::GneFound, "seed {seed}");
        assert!(is_gne(&inst, &profile_from_ints(gs.profile.as_ref().unwrap())));
    }
}

#[test]
fn solver_runs_are_reproducible() {
    let inst = generate_instance(params(8, 3, true, false), 2).unwrap();
    let cfg = SolveConfig { method: Method::Valpha, starts: 10, seed: 7, ..Default::default() };
    let a = solve(&inst, &cfg).unwrap();
    let b = solve(&inst, &cfg).unwrap();
    assert_eq!(a.status, b.status);
    assert_eq!(a.profile, b.profile);
    assert_eq!(a.trace.len(), b.trace.len());
    for (s, t) in a.trace.iter().zip(&b.trace) {
        assert_eq!((s.rounded.clone(), s.accepted, s.evaluations), (t.rounded.clone(), t.accepted, t.evaluations));
    }
}

#[test]
fn penalized_search_also_finds_equilibria() {
    for seed in 0..5 {
        let inst = generate_instance(params(6, 2, false, true), seed).unwrap();
        let cfg = SolveConfig { method: Method::Valpha, penalized: true, starts: 20, ..Default::default() };
        let r = solve(&inst, &cfg).unwrap();
        assert_eq!(r.status, Status::GneFound, "seed {seed}");
    }
}
