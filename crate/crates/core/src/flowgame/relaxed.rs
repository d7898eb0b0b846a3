//! The fractional relaxation `X̂` of the joint feasible set and per-player
//! relaxed strategy sets, as exact LPs and as floating-point
//! linear-minimization oracles.

use super::instance::CdfgInstance;
use super::mcf::min_cost_st_flow;
use crate::error::{Error, Result};
use crate::kernel::fw::LinearOracle;
use crate::kernel::lp::{solve_lp, solve_lp_with, Direction, LinearProgram, LpSolution, LpStatus, PivotRule, Sense};
use crate::kernel::scalar::{rat, Scalar};
use crate::Rational;

/// `X̂ = ∏ᵢ {xᵢ ≥ 0 : A xᵢ = bᵢ} ∩ {x : Σᵢ xᵢ ≤ c}` over flattened profiles.
#[derive(Debug, Clone)]
pub struct RelaxedJointSet<'a> {
    inst: &'a CdfgInstance,
    approx: LinearProgram<f64>,
}

fn joint_lp<T: Scalar>(inst: &CdfgInstance, direction: Vec<T>) -> LinearProgram<T> {
    let m = inst.num_arcs();
    let k = inst.dim();
    let a = inst.incidence();
    let mut lp = LinearProgram::new(Direction::Minimize, direction).nonnegative();
    for i in 0..inst.num_players() {
        let b = inst.demand_vector(i);
        for (row, bv) in a.iter().zip(&b) {
            let mut coeffs = vec![T::zero(); k];
            for e in 0..m {
                coeffs[i * m + e] = T::from_i64(row[e]);
            }
            lp.add_constraint(coeffs, Sense::Eq, T::from_i64(*bv));
        }
    }
    for e in 0..m {
        let mut coeffs = vec![T::zero(); k];
        for i in 0..inst.num_players() {
            coeffs[i * m + e] = T::one();
        }
        lp.add_constraint(coeffs, Sense::Le, T::from_i64(inst.capacities[e]));
    }
    lp
}

impl<'a> RelaxedJointSet<'a> {
    pub fn new(inst: &'a CdfgInstance) -> Self {
        Self { inst, approx: joint_lp(inst, vec![0.0; inst.dim()]) }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Vec<Rational>]) -> Result<bool> {
        let inst = self.inst;
        inst.check_profile(x)?;
        let zero = rat(0);
        for (i, xi) in x.iter().enumerate() {
            if xi.iter().any(|v| *v < zero) {
                return Ok(false);
            }
            let mut net = vec![rat(0); inst.nodes];
            for (&(u, v), f) in inst.arcs.iter().zip(xi) {
                net[u] += f;
                net[v] -= f;
            }
            if net.iter().zip(inst.demand_vector(i)).any(|(n, b)| *n != rat(b)) {
                return Ok(false);
            }
        }
        for e in 0..inst.num_arcs() {
            let load: Rational = x.iter().map(|xi| &xi[e]).sum();
            if load > rat(inst.capacities[e]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `x` satisfies the constraints of `X̂` up to `tol`.
    pub fn contains_approx(&self, x: &[f64], tol: f64) -> bool {
        let inst = self.inst;
        let m = inst.num_arcs();
        if x.len() != inst.dim() || x.iter().any(|v| *v < -tol) {
            return false;
        }
        for i in 0..inst.num_players() {
            let mut net = vec![0.0; inst.nodes];
            for (e, &(u, v)) in inst.arcs.iter().enumerate() {
                net[u] += x[i * m + e];
                net[v] -= x[i * m + e];
            }
            if net.iter().zip(inst.demand_vector(i)).any(|(n, b)| (n - b as f64).abs() > tol) {
                return false;
            }
        }
        (0..m).all(|e| {
            let load: f64 = (0..inst.num_players()).map(|i| x[i * m + e]).sum();
            load <= inst.capacities[e] as f64 + tol
        })
    }

    /// Exact `min dᵀx` over `X̂`.
    pub fn minimize_exact(&self, direction: &[Rational]) -> LpSolution<Rational> {
        solve_lp(&joint_lp(self.inst, direction.to_vec()))
    }

    /// Exact emptiness test of `X̂`.
    pub fn is_empty_exact(&self) -> bool {
        self.minimize_exact(&vec![rat(0); self.inst.dim()]).status == LpStatus::Infeasible
    }

    /// Floating-point emptiness test; used only as a filter.
    pub fn is_empty_approx(&self) -> bool {
        solve_lp_with(&self.approx, PivotRule::Dantzig).status == LpStatus::Infeasible
    }
}

impl LinearOracle for RelaxedJointSet<'_> {
    fn dim(&self) -> usize {
        self.inst.dim()
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vec<f64>> {
        let mut lp = self.approx.clone();
        lp.objective = direction.to_vec();
        let sol = solve_lp_with(&lp, PivotRule::Dantzig);
        match sol.status {
            LpStatus::Optimal => Ok(sol.primal.iter().map(|v| v.max(0.0)).collect()),
            LpStatus::Infeasible => Err(Error::EmptyRelaxation),
            LpStatus::Unbounded => Err(Error::Lp("unbounded")),
            LpStatus::IterationLimit => Err(Error::Lp("stopped at the pivot limit")),
        }
    }
}

/// Player `i`'s relaxed strategy set `{y ≥ 0 : A y = bᵢ, y ≤ c − ℓ}` at a
/// fractional rival load `ℓ`; the linear oracle is a min-cost flow.
#[derive(Debug, Clone)]
pub struct PlayerFlowSet<'a> {
    inst: &'a CdfgInstance,
    player: usize,
    residual: Vec<f64>,
}

impl<'a> PlayerFlowSet<'a> {
    pub fn new(inst: &'a CdfgInstance, player: usize, load: &[f64]) -> Self {
        let residual = inst.capacities.iter().zip(load).map(|(c, l)| (*c as f64 - l).max(0.0)).collect();
        Self { inst, player, residual }
    }
}

impl LinearOracle for PlayerFlowSet<'_> {
    fn dim(&self) -> usize {
        self.inst.num_arcs()
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vec<f64>> {
        let p = self.inst.players[self.player];
        min_cost_st_flow(
            self.inst.nodes,
            &self.inst.arcs,
            &self.residual,
            direction,
            p.source,
            p.sink,
            p.demand as f64,
        )
        .map(|(f, _)| f)
        .ok_or(Error::EmptyStrategySet(self.player))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::parallel_arcs;
    use crate::kernel::ratio;

    #[test]
    fn zero_direction_gives_feasible_point() {
        let inst = parallel_arcs(&[1, 3], &[1, 1], 1, 2);
        let set = RelaxedJointSet::new(&inst);
        let p = set.minimize(&[0.0; 4]).unwrap();
        assert!(set.contains_approx(&p, 1e-9));
        let exact = set.minimize_exact(&vec![rat(0); 4]);
        assert!(exact.is_optimal());
        assert!(set.contains(&inst.unflatten(&exact.primal)).unwrap());
    }

    #[test]
    fn fractional_split_is_in_relaxation() {
        let inst = parallel_arcs(&[1, 3], &[1, 1], 1, 2);
        let set = RelaxedJointSet::new(&inst);
        let h = ratio(1, 2);
        let x = vec![vec![h.clone(), h.clone()], vec![h.clone(), h]];
        assert!(set.contains(&x).unwrap());
        let over = vec![vec![rat(1), rat(0)], vec![rat(1), rat(0)]];
        assert!(!set.contains(&over).unwrap());
    }

    #[test]
    fn overloaded_instance_has_empty_relaxation() {
        let inst = parallel_arcs(&[1, 3], &[1, 1], 2, 2);
        assert!(RelaxedJointSet::new(&inst).is_empty_exact());
        assert!(RelaxedJointSet::new(&inst).is_empty_approx());
    }

    #[test]
    fn player_oracle_uses_residual() {
        let inst = parallel_arcs(&[1, 3], &[1, 1], 1, 2);
        let set = PlayerFlowSet::new(&inst, 0, &[0.75, 0.0]);
        let y = set.minimize(&[1.0, 3.0]).unwrap();
        assert!((y[0] - 0.25).abs() < 1e-12 && (y[1] - 0.75).abs() < 1e-12);
    }
}
