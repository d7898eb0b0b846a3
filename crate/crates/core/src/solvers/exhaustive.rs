//! Exhaustive solution of the reformulated problem: over every integral
//! profile, the LP duals of the players' best-response programs make the
//! reformulated objective equal to `V̂^conv`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::{SolveResult, Status};
use crate::error::Result;
use crate::flowgame::enumerate_joint_profiles;
use crate::error::Error;
use crate::flowgame::quasi::{
    best_response_from_load, lp_best_response_for, potential_duals, quasi_linear_data_from_load, QuasiLinearData,
};
use crate::flowgame::{CdfgInstance, IntProfile};
use crate::kernel::scalar::rat;
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileValue {
    pub profile: IntProfile,
    /// `Σᵢ Cᵢ(x₋ᵢ)ᵀxᵢ − eᵢ(x₋ᵢ)ᵀνᵢ` at the optimal duals `νᵢ`.
    pub value: Rational,
}

type LoadKey = (usize, Vec<i64>);

/// Quasi-linear data and optimal duals of `(LPᵢ)` at one rival load. The
/// duals come from min-cost-flow potentials when those pass the exact
/// optimality check, and from the rational simplex otherwise.
pub(crate) fn optimal_duals(inst: &CdfgInstance, i: usize, load: &[i64]) -> Result<(QuasiLinearData, Vec<Rational>)> {
    let data = quasi_linear_data_from_load(inst, i, load);
    let (y, _) = best_response_from_load(inst, i, load).ok_or(Error::EmptyStrategySet(i))?;
    if let Some(nu) = potential_duals(inst, &data, load, &y) {
        return Ok((data, nu));
    }
    let br = lp_best_response_for(data, i)?;
    let nu = br.duals().to_vec();
    Ok((br.data, nu))
}

/// Optimal duals for every distinct `(player, rival load)` in `profiles`.
pub(crate) fn best_responses_by_load(
    inst: &CdfgInstance,
    profiles: &[IntProfile],
) -> Result<BTreeMap<LoadKey, (QuasiLinearData, Vec<Rational>)>> {
    let mut keys: Vec<LoadKey> = profiles
        .iter()
        .flat_map(|x| (0..inst.num_players()).map(move |i| (i, inst.rival_load(i, x))))
        .collect();
    keys.sort();
    keys.dedup();
    let solved: Vec<Result<(QuasiLinearData, Vec<Rational>)>> =
        keys.par_iter().map(|(i, load)| optimal_duals(inst, *i, load)).collect();
    keys.into_iter().zip(solved).map(|(k, r)| Ok((k, r?))).collect()
}

fn reformulated(
    inst: &CdfgInstance,
    x: &IntProfile,
    table: &BTreeMap<LoadKey, (Vec<i64>, Rational)>,
) -> Rational {
    let mut total = rat(0);
    for (i, xi) in x.iter().enumerate() {
        let (cost, dual_value) = &table[&(i, inst.rival_load(i, x))];
        let primal: i64 = cost.iter().zip(xi).map(|(c, v)| c * v).sum();
        total += rat(primal) - dual_value;
    }
    total
}

/// `(x, V̂^conv(x))` for every `x ∈ X`, in enumeration order.
pub fn reformulation_values(inst: &CdfgInstance, cap: usize) -> Result<Vec<ProfileValue>> {
    let profiles = enumerate_joint_profiles(inst, cap)?;
    let table: BTreeMap<LoadKey, (Vec<i64>, Rational)> = best_responses_by_load(inst, &profiles)?
        .into_iter()
        .map(|(k, (data, nu))| {
            let dual_value: Rational = data.rhs.iter().zip(&nu).map(|(e, v)| rat(*e) * v).sum();
            (k, (data.cost, dual_value))
        })
        .collect();
    Ok(profiles
        .into_par_iter()
        .map(|x| {
            let value = reformulated(inst, &x, &table);
            ProfileValue { profile: x, value }
        })
        .collect())
}

/// Minimizes the reformulated objective over all of `X`. A zero minimum is an
/// equilibrium; a positive minimum certifies that none exists.
pub fn solve_reformulation_exhaustive(inst: &CdfgInstance, cap: usize) -> Result<SolveResult> {
    let values = reformulation_values(inst, cap)?;
    let evaluations = values.len();
    let best = values.into_iter().fold(None::<ProfileValue>, |acc, pv| match acc {
        Some(b) if b.value <= pv.value => Some(b),
        _ => Some(pv),
    });
    let mut result = match best {
        None => {
            let mut r = SolveResult::empty(Status::NoGneCertified);
            r.diagnostic = Some("the joint strategy set is empty".into());
            r
        }
        Some(pv) => {
            let status = if pv.value.is_zero() { Status::GneFound } else { Status::NoGneCertified };
            let mut r = SolveResult::empty(status);
            r.profile = Some(pv.profile);
            r.value = Some(pv.value);
            r
        }
    };
    result.evaluations = evaluations;
    Ok(result)
}
