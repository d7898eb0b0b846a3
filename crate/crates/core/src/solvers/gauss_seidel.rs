//! Cyclic best-response iteration with exact integral best responses.

use super::{SolveResult, Status};
use crate::error::{Error, Result};
use crate::flowgame::quasi::best_response_from_load;
use crate::flowgame::{CdfgInstance, IntProfile};
use crate::kernel::scalar::rat;

/// Replaces each player's flow by a best response whenever that strictly
/// lowers the player's cost, until a full round changes nothing.
pub fn gauss_seidel(inst: &CdfgInstance, x0: &IntProfile, max_rounds: usize) -> Result<SolveResult> {
    if !inst.is_feasible(x0)? {
        return Err(Error::InfeasibleProfile);
    }
    let mut x = x0.clone();
    let mut evaluations = 0;
    for round in 0..max_rounds {
        let mut changed = false;
        for i in 0..inst.num_players() {
            let load = inst.rival_load(i, &x);
            evaluations += 1;
            let Some((y, v)) = best_response_from_load(inst, i, &load) else {
                let mut r = SolveResult::empty(Status::BudgetExhausted);
                r.profile = Some(x);
                r.evaluations = evaluations;
                r.diagnostic = Some(format!("player {} has no feasible flow in round {}", i + 1, round + 1));
                return Ok(r);
            };
            if v < inst.player_cost(i, &x)? {
                x[i] = y;
                changed = true;
            }
        }
        if !changed {
            let mut r = SolveResult::empty(Status::GneFound);
            r.profile = Some(x);
            r.value = Some(rat(0));
            r.evaluations = evaluations;
            r.starts_used = round + 1;
            return Ok(r);
        }
    }
    let mut r = SolveResult::empty(Status::BudgetExhausted);
    r.profile = Some(x);
    r.evaluations = evaluations;
    r.starts_used = max_rounds;
    r.diagnostic = Some(format!("no quiet round within {max_rounds} rounds"));
    Ok(r)
}
