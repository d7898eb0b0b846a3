//! Projected gradient descent with an Armijo search along the projected
//! direction and random restarts on stalls.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

/// Objective below which rounded points are tested for equilibrium.
pub const EARLY_EXIT: f64 = 1e-3;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-10;
const RESTARTS: usize = 3;

pub trait DescentProblem {
    fn evaluate(&self, x: &[f64]) -> Result<(f64, Vec<f64>)>;
    /// Projection onto the feasible region; the identity when unconstrained.
    fn project(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// Consulted at every evaluation with value below [`EARLY_EXIT`];
    /// `true` stops the descent.
    fn accept_early(&self, _x: &[f64], _value: f64) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub struct DescentOptions {
    /// Maximum function evaluations.
    pub budget: usize,
    /// Objective value treated as zero, and the stationarity threshold.
    pub tol: f64,
    pub deadline: Option<Instant>,
    /// Perturbation radius for random restarts.
    pub radius: f64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self { budget: super::DEFAULT_BUDGET, tol: 1e-9, deadline: None, radius: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Stopped because [`DescentProblem::accept_early`] said so.
    pub early: bool,
    pub timed_out: bool,
}

struct Run<'a, P: ?Sized> {
    problem: &'a P,
    opts: &'a DescentOptions,
    evaluations: usize,
}

impl<P: DescentProblem + ?Sized> Run<'_, P> {
    fn eval(&mut self, x: &[f64]) -> Result<(f64, Vec<f64>, bool)> {
        self.evaluations += 1;
        let (f, g) = self.problem.evaluate(x)?;
        let early = f < EARLY_EXIT && self.problem.accept_early(x, f);
        Ok((f, g, early))
    }

    fn out_of_budget(&self) -> bool {
        self.evaluations >= self.opts.budget
    }

    fn out_of_time(&self) -> bool {
        self.opts.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Descends from `start` (assumed feasible) and returns a point whose value
/// does not exceed the start's.
pub fn local_descent<P: DescentProblem + ?Sized>(
    problem: &P,
    start: &[f64],
    opts: &DescentOptions,
    rng: &mut ChaCha8Rng,
) -> Result<DescentOutcome> {
    let mut run = Run { problem, opts, evaluations: 0 };
    let mut x = start.to_vec();
    let (mut f, mut g, early) = run.eval(&x)?;
    let mut iterations = 0;
    let done = |x: Vec<f64>, f: f64, run: &Run<P>, iterations: usize, early: bool, timed_out: bool| DescentOutcome {
        point: x,
        value: f,
        evaluations: run.evaluations,
        iterations,
        early,
        timed_out,
    };
    if early {
        return Ok(done(x, f, &run, 0, true, false));
    }
    let mut scale = 1.0 / norm_inf(&g).max(1.0);
    let mut restarts = RESTARTS;

    while f > opts.tol && !run.out_of_budget() {
        if run.out_of_time() {
            return Ok(done(x, f, &run, iterations, false, true));
        }
        iterations += 1;
        let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - scale * b).collect();
        let z = problem.project(&trial)?;
        let d: Vec<f64> = z.iter().zip(&x).map(|(a, b)| a - b).collect();
        let slope: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();

        let mut accepted = false;
        if norm_inf(&d) > opts.tol && slope < 0.0 {
            let mut t = 1.0;
            while t >= MIN_STEP && !run.out_of_budget() {
                let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
                let (fnew, gnew, early) = run.eval(&xn)?;
                if early {
                    return Ok(done(xn, fnew, &run, iterations, true, false));
                }
                if fnew <= f + ARMIJO * t * slope {
                    x = xn;
                    f = fnew;
                    g = gnew;
                    accepted = true;
                    scale = if t == 1.0 { (scale * 2.0).min(1e6) } else { (scale * t).max(1e-8) };
                    break;
                }
                t *= 0.5;
            }
        }
        if accepted {
            continue;
        }
        // Stalled: try a few random perturbations before giving up.
        let mut moved = false;
        while restarts > 0 && !run.out_of_budget() {
            restarts -= 1;
            let kick: Vec<f64> = x.iter().map(|v| v + opts.radius * rng.gen_range(-1.0..=1.0)).collect();
            let xp = problem.project(&kick)?;
            let (fp, gp, early) = run.eval(&xp)?;
            if early {
                return Ok(done(xp, fp, &run, iterations, true, false));
            }
            if fp < f {
                x = xp;
                f = fp;
                g = gp;
                scale = 1.0 / norm_inf(&g).max(1.0);
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    Ok(done(x, f, &run, iterations, false, false))
}

/// Componentwise nearest integer, halves away from zero.
pub fn round_profile(x: &[f64]) -> Vec<i64> {
    x.iter().map(|v| v.round() as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    struct BoxQuadratic {
        target: Vec<f64>,
        lower: f64,
        upper: f64,
    }

    impl DescentProblem for BoxQuadratic {
        fn evaluate(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
            let f = x.iter().zip(&self.target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            let g = x.iter().zip(&self.target).map(|(a, b)| 2.0 * (a - b)).collect();
            Ok((f, g))
        }

        fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
            Ok(x.iter().map(|v| v.clamp(self.lower, self.upper)).collect())
        }
    }

    #[test]
    fn converges_to_the_clamp_point() {
        let p = BoxQuadratic { target: vec![2.0, -1.0, 0.5], lower: 0.0, upper: 1.0 };
        let mut rng = stream(0, Stream::Descent);
        let out = local_descent(&p, &[0.2, 0.9, 0.1], &DescentOptions::default(), &mut rng).unwrap();
        for (a, b) in out.point.iter().zip([1.0, 0.0, 0.5]) {
            assert!((a - b).abs() < 1e-6, "{:?}", out.point);
        }
    }

    #[test]
    fn start_at_the_minimizer_stays_put() {
        let p = BoxQuadratic { target: vec![0.5, 0.5], lower: 0.0, upper: 1.0 };
        let mut rng = stream(0, Stream::Descent);
        let out = local_descent(&p, &[0.5, 0.5], &DescentOptions::default(), &mut rng).unwrap();
        assert_eq!(out.point, vec![0.5, 0.5]);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn never_worse_than_the_start() {
        let p = BoxQuadratic { target: vec![3.0, 3.0], lower: 0.0, upper: 1.0 };
        let mut rng = stream(1, Stream::Descent);
        let opts = DescentOptions { budget: 3, ..Default::default() };
        let out = local_descent(&p, &[0.0, 0.0], &opts, &mut rng).unwrap();
        assert!(out.value <= 18.0);
        assert!(out.evaluations <= 3);
    }

    #[test]
    fn rounding_halves_away_from_zero() {
        assert_eq!(round_profile(&[0.5, 1.5, -0.5, 2.49, -1.51]), vec![1, 2, -1, 2, -2]);
    }
}
