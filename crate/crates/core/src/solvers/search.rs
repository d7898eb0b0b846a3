//! Searches over small generated instances for the degenerate cases: games
//! without an equilibrium and games on which best responses cycle.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::exhaustive::solve_reformulation_exhaustive;
use super::{SolveResult, Status};
use crate::flowgame::quasi::best_response_from_load;
use crate::flowgame::{generate_instance, greedy_routing, CdfgInstance, GenParams, IntProfile};

/// Profiles at the start of each round, from the first repeated one on.
#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseCycle {
    pub start: IntProfile,
    pub cycle: Vec<IntProfile>,
}

/// Runs Gauss–Seidel rounds from `x0` and returns the cycle if a round-start
/// profile repeats after a round that changed something.
pub fn best_response_cycle(inst: &CdfgInstance, x0: &IntProfile, max_rounds: usize) -> Option<BestResponseCycle> {
    let mut seen: BTreeMap<IntProfile, usize> = BTreeMap::new();
    let mut history = Vec::new();
    let mut x = x0.clone();
    for round in 0..max_rounds {
        if let Some(&first) = seen.get(&x) {
            return Some(BestResponseCycle { start: x0.clone(), cycle: history[first..].to_vec() });
        }
        seen.insert(x.clone(), round);
        history.push(x.clone());
        let mut changed = false;
        for i in 0..inst.num_players() {
            let (y, v) = best_response_from_load(inst, i, &inst.rival_load(i, &x))?;
            if v < inst.player_cost(i, &x).ok()? {
                x[i] = y;
                changed = true;
            }
        }
        if !changed {
            return None;
        }
    }
    None
}

/// First seed in `seeds` whose instance the exhaustive oracle certifies to
/// have no equilibrium.
pub fn find_instance_without_gne(
    params: GenParams,
    seeds: std::ops::Range<u64>,
    cap: usize,
) -> Option<(u64, CdfgInstance, SolveResult)> {
    seeds.into_par_iter().find_map_first(|seed| {
        let inst = generate_instance(params, seed).ok()?;
        let r = solve_reformulation_exhaustive(&inst, cap).ok()?;
        (r.status == Status::NoGneCertified && r.profile.is_some()).then_some((seed, inst, r))
    })
}

/// First seed in `seeds` on which Gauss–Seidel from greedy routing cycles.
pub fn find_cycling_instance(
    params: GenParams,
    seeds: std::ops::Range<u64>,
    max_rounds: usize,
) -> Option<(u64, CdfgInstance, BestResponseCycle)> {
    seeds.into_par_iter().find_map_first(|seed| {
        let inst = generate_instance(params, seed).ok()?;
        let x0 = greedy_routing(&inst)?;
        best_response_cycle(&inst, &x0, max_rounds).map(|c| (seed, inst, c))
    })
}
