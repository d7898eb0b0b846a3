//! Exhaustive enumeration of integral flows and joint profiles.

use super::instance::{CdfgInstance, IntProfile};
use crate::error::{Error, Result};
use crate::kernel::scalar::rat;
use crate::model::FiniteGnep;
use crate::nikaido::{ints_from_profile, profile_from_ints};

struct FlowSearch<'a> {
    arcs: &'a [(usize, usize)],
    caps: Vec<i64>,
    /// Remaining unassigned outgoing / incoming capacity per node.
    out_cap: Vec<i64>,
    in_cap: Vec<i64>,
    /// Net outflow still required per node.
    need: Vec<i64>,
    current: Vec<i64>,
    found: Vec<Vec<i64>>,
    cap: Option<usize>,
    limit: Option<usize>,
}

impl FlowSearch<'_> {
    fn consistent(&self, v: usize) -> bool {
        -self.in_cap[v] <= self.need[v] && self.need[v] <= self.out_cap[v]
    }

    fn run(&mut self, e: usize) -> Result<()> {
        if self.limit.is_some_and(|l| self.found.len() >= l) {
            return Ok(());
        }
        if e == self.arcs.len() {
            if self.need.iter().all(|n| *n == 0) {
                if self.cap.is_some_and(|c| self.found.len() >= c) {
                    return Err(Error::EnumerationCap { cap: self.cap.unwrap_or(0) });
                }
                self.found.push(self.current.clone());
            }
            return Ok(());
        }
        let (u, v) = self.arcs[e];
        let c = self.caps[e].max(0);
        self.out_cap[u] -= c;
        self.in_cap[v] -= c;
        for f in 0..=c {
            self.need[u] -= f;
            self.need[v] += f;
            if self.consistent(u) && self.consistent(v) {
                self.current[e] = f;
                self.run(e + 1)?;
            }
            self.need[u] += f;
            self.need[v] -= f;
        }
        self.current[e] = 0;
        self.out_cap[u] += c;
        self.in_cap[v] += c;
        Ok(())
    }
}

fn search(
    inst: &CdfgInstance,
    i: usize,
    residual: &[i64],
    cap: Option<usize>,
    limit: Option<usize>,
) -> Result<Vec<Vec<i64>>> {
    let mut out_cap = vec![0; inst.nodes];
    let mut in_cap = vec![0; inst.nodes];
    for (&(u, v), c) in inst.arcs.iter().zip(residual) {
        out_cap[u] += c.max(&0);
        in_cap[v] += c.max(&0);
    }
    let mut s = FlowSearch {
        arcs: &inst.arcs,
        caps: residual.to_vec(),
        out_cap,
        in_cap,
        need: inst.demand_vector(i),
        current: vec![0; inst.num_arcs()],
        found: Vec::new(),
        cap,
        limit,
    };
    if (0..inst.nodes).all(|v| s.consistent(v)) {
        s.run(0)?;
    }
    Ok(s.found)
}

/// All integral flows of player `i` within `residual` capacities, ordered
/// lexicographically by arc.
pub fn enumerate_integral_flows(inst: &CdfgInstance, i: usize, residual: &[i64]) -> Vec<Vec<i64>> {
    search(inst, i, residual, None, None).expect("uncapped search")
}

pub fn enumerate_integral_flows_capped(
    inst: &CdfgInstance,
    i: usize,
    residual: &[i64],
    cap: usize,
) -> Result<Vec<Vec<i64>>> {
    search(inst, i, residual, Some(cap), None)
}

/// The joint feasible set `X`, in lexicographic order of the flattened
/// profiles. Fails once more than `cap` profiles (or partial profiles)
/// would be produced.
pub fn enumerate_joint_profiles(inst: &CdfgInstance, cap: usize) -> Result<Vec<IntProfile>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    joint_rec(inst, &inst.capacities, &mut prefix, &mut out, cap, None)?;
    Ok(out)
}

/// Some feasible joint profile, if one exists.
pub fn find_joint_profile(inst: &CdfgInstance, cap: usize) -> Result<Option<IntProfile>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    joint_rec(inst, &inst.capacities, &mut prefix, &mut out, cap, Some(1))?;
    Ok(out.pop())
}

/// The flow game as a jointly constrained finite game over the enumerated
/// `X`, with the same player costs.
pub fn finite_game(inst: &CdfgInstance, cap: usize) -> Result<FiniteGnep> {
    let profiles = enumerate_joint_profiles(inst, cap)?;
    let dims = vec![inst.num_arcs(); inst.num_players()];
    let owned = inst.clone();
    Ok(FiniteGnep::jointly_constrained(dims, profiles.iter().map(|x| profile_from_ints(x)))?
        .with_cost(move |i, x| Ok(rat(owned.player_cost(i, &ints_from_profile(x)?)?))))
}

fn joint_rec(
    inst: &CdfgInstance,
    residual: &[i64],
    prefix: &mut IntProfile,
    out: &mut Vec<IntProfile>,
    cap: usize,
    limit: Option<usize>,
) -> Result<()> {
    let i = prefix.len();
    if i == inst.num_players() {
        if out.len() >= cap {
            return Err(Error::EnumerationCap { cap });
        }
        out.push(prefix.clone());
        return Ok(());
    }
    let flows = search(inst, i, residual, Some(cap), None)?;
    for f in flows {
        if limit.is_some_and(|l| out.len() >= l) {
            return Ok(());
        }
        let next: Vec<i64> = residual.iter().zip(&f).map(|(c, x)| c - x).collect();
        prefix.push(f);
        joint_rec(inst, &next, prefix, out, cap, limit)?;
        prefix.pop();
    }
    Ok(())
}
