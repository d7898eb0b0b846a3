//! Multistart local descent with rounding to integral profiles.

use std::cell::RefCell;
use std::time::Instant;

use rand::Rng;

use super::descent::{local_descent, round_profile, DescentOptions, DescentProblem};
use super::{SolveConfig, SolveResult, StartTrace, Status};
use crate::error::{Error, Result};
use crate::flowgame::relaxed::RelaxedJointSet;
use crate::flowgame::{CdfgInstance, IntProfile};
use crate::kernel::fw::project_euclidean;
use crate::kernel::scalar::rat;
use crate::nikaido::{is_gne, profile_from_ints, value_and_gradient, Objective};
use crate::rng::{stream, substream, Stream};

const PROJECTION_TOL: f64 = 1e-7;

/// `count` points drawn uniformly from `[0, scale]ᵏ` and projected onto `X̂`.
pub fn random_starts(inst: &CdfgInstance, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let set = RelaxedJointSet::new(inst);
    if set.is_empty_approx() {
        return Err(Error::EmptyRelaxation);
    }
    let mut rng = stream(seed, Stream::Starts);
    let hi = inst.scale() as f64;
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..inst.dim()).map(|_| rng.gen_range(0.0..=hi)).collect();
            Ok(project_euclidean(&set, &raw, PROJECTION_TOL)?.point)
        })
        .collect()
}

/// Rounds a flat point and returns the integral profile if it is an equilibrium.
fn rounded_equilibrium(inst: &CdfgInstance, x: &[f64]) -> (IntProfile, bool, bool) {
    let y = inst.unflatten(&round_profile(x));
    let feasible = matches!(inst.is_feasible(&y), Ok(true));
    let gne = feasible && is_gne(inst, &profile_from_ints(&y));
    (y, feasible, gne)
}

struct Problem<'a> {
    inst: &'a CdfgInstance,
    set: RelaxedJointSet<'a>,
    objective: Objective,
    penalized: bool,
    found: RefCell<Option<IntProfile>>,
}

impl DescentProblem for Problem<'_> {
    fn evaluate(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        value_and_gradient(self.inst, self.objective, x, self.penalized)
    }

    fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.objective.is_constrained() {
            Ok(project_euclidean(&self.set, x, PROJECTION_TOL)?.point)
        } else {
            Ok(x.to_vec())
        }
    }

    fn accept_early(&self, x: &[f64], _value: f64) -> bool {
        let (y, _, gne) = rounded_equilibrium(self.inst, x);
        if gne {
            *self.found.borrow_mut() = Some(y);
        }
        gne
    }
}

/// Runs local descent from up to `cfg.starts` random starts, rounding each
/// local minimizer and stopping at the first exact equilibrium.
pub fn multistart_round(inst: &CdfgInstance, cfg: &SolveConfig) -> Result<SolveResult> {
    let objective = cfg
        .objective()
        .ok_or_else(|| Error::Input(format!("{} is not a descent method", cfg.method)))?;
    let began = Instant::now();
    if cfg.time_limit.is_zero() {
        return Ok(SolveResult::empty(Status::Timeout));
    }
    let deadline = began + cfg.time_limit;
    let set = RelaxedJointSet::new(inst);
    if set.is_empty_approx() {
        let mut r = SolveResult::empty(Status::BudgetExhausted);
        r.diagnostic = Some("the relaxed joint strategy set is empty".into());
        return Ok(r);
    }
    let problem = Problem { inst, set, objective, penalized: cfg.penalized, found: RefCell::new(None) };
    let mut rng = stream(cfg.seed, Stream::Starts);
    let hi = inst.scale() as f64;
    let opts = DescentOptions { budget: cfg.budget, deadline: Some(deadline), ..Default::default() };
    let mut result = SolveResult::empty(Status::BudgetExhausted);

    for s in 0..cfg.starts {
        if Instant::now() >= deadline {
            result.status = Status::Timeout;
            return Ok(result);
        }
        result.starts_used = s + 1;
        let raw: Vec<f64> = (0..inst.dim()).map(|_| rng.gen_range(0.0..=hi)).collect();
        let start = project_euclidean(&problem.set, &raw, PROJECTION_TOL)?.point;

        let (_, _, gne) = rounded_equilibrium(inst, &start);
        let (point, value, evaluations, iterations, timed_out) = if gne {
            (start, f64::NAN, 0, 0, false)
        } else {
            let mut drng = substream(cfg.seed, Stream::Descent, s as u64);
            let out = local_descent(&problem, &start, &opts, &mut drng)?;
            (out.point, out.value, out.evaluations, out.iterations, out.timed_out)
        };
        result.evaluations += evaluations;

        let (rounded, feasible, accepted) = match problem.found.borrow_mut().take() {
            Some(y) => (y, true, true),
            None => rounded_equilibrium(inst, &point),
        };
        result.trace.push(StartTrace {
            start: s,
            evaluations,
            iterations,
            objective: value,
            rounded: rounded.clone(),
            feasible,
            accepted,
        });
        if accepted {
            result.status = Status::GneFound;
            result.profile = Some(rounded);
            result.value = Some(rat(0));
            return Ok(result);
        }
        if timed_out {
            result.status = Status::Timeout;
            return Ok(result);
        }
    }
    Ok(result)
}
