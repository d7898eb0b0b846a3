//! Projection and regularized gap functions on a two-arc game, against
//! brute-force one-dimensional searches.

use gnep::flowgame::RelaxedJointSet;
use gnep::nikaido::{project_relaxed, v_alpha, v_bar, v_bar_at, v_hat_relaxed};
use gnep::{CdfgInstance, PlayerCost, PlayerSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAPS: [f64; 2] = [1.0, 2.0];

/// Two players each route one unit over parallel arcs with capacities 1 and 2,
/// so every relaxed strategy is `(t, 1 − t)` and `X̂ = {t₁ + t₂ ≤ 1}`.
fn two_arc_game() -> CdfgInstance {
    CdfgInstance::new(
        2,
        vec![(0, 1), (0, 1)],
        vec![1, 2],
        vec![PlayerSpec { source: 0, sink: 1, demand: 1 }; 2],
        vec![
            PlayerCost::Bilinear { c1: vec![vec![1, 1], vec![0, 2]], c2: vec![1, 2] },
            PlayerCost::Bilinear { c1: vec![vec![2, 0], vec![1, 1]], c2: vec![3, 1] },
        ],
    )
    .unwrap()
}

fn cost(i: usize, load: &[f64]) -> [f64; 2] {
    let (c1, c2): ([[f64; 2]; 2], [f64; 2]) =
        if i == 0 { ([[1., 1.], [0., 2.]], [1., 2.]) } else { ([[2., 0.], [1., 1.]], [3., 1.]) };
    [c2[0] + load[0] * c1[0][0] + load[1] * c1[1][0], c2[1] + load[0] * c1[0][1] + load[1] * c1[1][1]]
}

/// Minimizer of a convex function on `[lo, hi]`.
fn ternary(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    (a + b) / 2.0
}

/// Projection onto `X̂` by successively refined grids over `(t₁, t₂)`.
fn grid_projection(x: &[f64]) -> Vec<f64> {
    let dist = |t1: f64, t2: f64| {
        (t1 - x[0]).powi(2) + (1.0 - t1 - x[1]).powi(2) + (t2 - x[2]).powi(2) + (1.0 - t2 - x[3]).powi(2)
    };
    let (mut c1, mut c2, mut h) = (0.5, 0.5, 0.5);
    while h > 1e-7 {
        let mut best = (f64::INFINITY, c1, c2);
        for a in -10..=10 {
            for b in -10..=10 {
                let t1 = (c1 + a as f64 * h / 10.0).clamp(0.0, 1.0);
                let t2 = (c2 + b as f64 * h / 10.0).clamp(0.0, 1.0);
                if t1 + t2 > 1.0 {
                    continue;
                }
                let d = dist(t1, t2);
                if d < best.0 {
                    best = (d, t1, t2);
                }
            }
        }
        (c1, c2) = (best.1, best.2);
        h /= 5.0;
    }
    vec![c1, 1.0 - c1, c2, 1.0 - c2]
}

/// `Σᵢ [Cᵢᵀxᵢ − min_y (Cᵢᵀy + γ/2‖y − xᵢ‖²)]` with `y` ranging over player
/// `i`'s strategies at the rival load of `p`, costs taken at `x`.
fn regularized_gap(x: &[f64], p: &[f64], gamma: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..2 {
        let xi = &x[2 * i..2 * i + 2];
        let rival = &x[2 * (1 - i)..2 * (1 - i) + 2];
        let prival = &p[2 * (1 - i)..2 * (1 - i) + 2];
        let c = cost(i, rival);
        let lo = (1.0 - (CAPS[1] - prival[1])).max(0.0);
        let hi = (CAPS[0] - prival[0]).min(1.0);
        assert!(lo <= hi + 1e-9, "empty strategy set");
        let f = |t: f64| {
            c[0] * t + c[1] * (1.0 - t) + gamma / 2.0 * ((t - xi[0]).powi(2) + (1.0 - t - xi[1]).powi(2))
        };
        let t = ternary(lo, hi.max(lo), f);
        total += c[0] * xi[0] + c[1] * xi[1] - f(t);
    }
    total
}

fn random_points(seed: u64, count: usize, spread: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..4).map(|_| rng.gen_range(-spread..1.0 + spread)).collect()).collect()
}

fn relaxed_point(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let t1: f64 = rng.gen_range(0.0..1.0);
    let t2: f64 = rng.gen_range(0.0..1.0 - t1);
    vec![t1, 1.0 - t1, t2, 1.0 - t2]
}

#[test]
fn projection_matches_the_grid_search() {
    let inst = two_arc_game();
    let set = RelaxedJointSet::new(&inst);
    for x in random_points(1, 40, 1.5) {
        let p = project_relaxed(&inst, &x, 1e-12).unwrap();
        let q = grid_projection(&x);
        let gap = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(gap < 1e-4, "x = {x:?}: {p:?} vs {q:?}");
        assert!(set.contains_approx(&p, 1e-7));
    }
}

#[test]
fn projection_fixes_relaxed_points() {
    let inst = two_arc_game();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let x = relaxed_point(&mut rng);
        let p = project_relaxed(&inst, &x, 1e-12).unwrap();
        assert!(p.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-5), "{x:?} moved to {p:?}");
    }
}

#[test]
fn v_alpha_and_v_hat_match_the_line_search() {
    let inst = two_arc_game();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let x = relaxed_point(&mut rng);
        let va = v_alpha(&inst, &x, 0.02).unwrap().value;
        assert!((va - regularized_gap(&x, &x, 0.02)).abs() < 1e-5, "x = {x:?}");
        let vh = v_hat_relaxed(&inst, &x).unwrap().value;
        assert!((vh - regularized_gap(&x, &x, 0.0)).abs() < 1e-6, "x = {x:?}");
    }
}

#[test]
fn v_bar_matches_the_direct_formula() {
    let inst = two_arc_game();
    let (alpha, beta) = (0.02, 0.05);
    for x in random_points(4, 30, 1.0) {
        let p = grid_projection(&x);
        let dist: f64 = x.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum();
        for c in [0.0, 0.5] {
            let expected = regularized_gap(&x, &p, alpha) - regularized_gap(&x, &p, beta) + c * dist;
            let at = v_bar_at(&inst, &x, &p, alpha, beta, c).unwrap().value;
            assert!((at - expected).abs() < 1e-5, "x = {x:?}, c = {c}: {at} vs {expected}");
            let own = v_bar(&inst, &x, alpha, beta, c).unwrap().value;
            assert!((own - expected).abs() < 1e-4, "x = {x:?}, c = {c}: {own} vs {expected}");
        }
    }
}

#[test]
fn v_bar_is_nonnegative_with_zero_at_an_equilibrium() {
    let inst = two_arc_game();
    for x in random_points(5, 30, 1.0) {
        assert!(v_bar(&inst, &x, 0.02, 0.05, 0.0).unwrap().value > -1e-7);
    }
    // Player costs at (1,0),(0,1): player 0 pays 1+0 on arc 0 vs 2+2 on arc 1,
    // player 1 pays 1+1 on arc 1 vs 3+1 on arc 0 (arc 0 is also full).
    let x = [1.0, 0.0, 0.0, 1.0];
    assert!(v_bar(&inst, &x, 0.02, 0.05, 0.0).unwrap().value.abs() < 1e-7);
    assert!(v_hat_relaxed(&inst, &x).unwrap().value.abs() < 1e-9);
}
