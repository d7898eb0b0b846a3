//! Quasi-linear data `(Mᵢ, eᵢ, Cᵢ)` of the flow game and the per-player
//! linear programs built from it.

use super::instance::CdfgInstance;
use super::mcf::min_cost_st_flow;
use crate::error::{Error, Result};
use crate::kernel::lp::{solve_lp, Direction, LinearProgram, LpSolution, LpStatus, Sense};
use crate::kernel::scalar::rat;
use crate::Rational;

/// `Mᵢ y ≥ eᵢ(x₋ᵢ)` with `Mᵢ = (A; −A; Id; −Id)` and cost `Cᵢ(x₋ᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiLinearData {
    pub matrix: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    pub cost: Vec<i64>,
}

impl QuasiLinearData {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    /// The linear program `min Cᵀy s.t. M y ≥ e` over free variables.
    pub fn to_lp(&self) -> LinearProgram<Rational> {
        let mut lp = LinearProgram::new(Direction::Minimize, self.cost.iter().map(|c| rat(*c)).collect());
        for (row, e) in self.matrix.iter().zip(&self.rhs) {
            lp.add_constraint(row.iter().map(|v| rat(*v)).collect(), Sense::Ge, rat(*e));
        }
        lp
    }

    /// `Cᵀy − eᵀν`, the per-player term of the reformulated objective.
    pub fn duality_gap(&self, y: &[Rational], nu: &[Rational]) -> Rational {
        let primal: Rational = self.cost.iter().zip(y).map(|(c, v)| rat(*c) * v).sum();
        let dual: Rational = self.rhs.iter().zip(nu).map(|(e, v)| rat(*e) * v).sum();
        primal - dual
    }

    /// `νᵀM = Cᵀ` and `ν ≥ 0`.
    pub fn is_dual_feasible(&self, nu: &[Rational]) -> bool {
        if nu.len() != self.rows() || nu.iter().any(|v| *v < rat(0)) {
            return false;
        }
        (0..self.cost.len()).all(|j| {
            let s: Rational = self.matrix.iter().zip(nu).map(|(r, v)| rat(r[j]) * v).sum();
            s == rat(self.cost[j])
        })
    }
}

/// Quasi-linear data of player `i` at the rivals' profile (block `i` of `x`
/// is ignored).
pub fn quasi_linear_data(inst: &CdfgInstance, i: usize, x: &[Vec<i64>]) -> Result<QuasiLinearData> {
    inst.check_player(i)?;
    inst.check_profile(x)?;
    if x.iter().enumerate().any(|(j, b)| j != i && b.iter().any(|v| *v < 0)) {
        return Err(Error::Input("rival flows must be nonnegative".into()));
    }
    let load = inst.rival_load(i, x);
    Ok(quasi_linear_data_from_load(inst, i, &load))
}

pub(crate) fn quasi_linear_data_from_load(inst: &CdfgInstance, i: usize, load: &[i64]) -> QuasiLinearData {
    let m = inst.num_arcs();
    let a = inst.incidence();
    let b = inst.demand_vector(i);
    let mut matrix = Vec::with_capacity(2 * inst.nodes + 2 * m);
    let mut rhs = Vec::with_capacity(matrix.capacity());
    for (row, bv) in a.iter().zip(&b) {
        matrix.push(row.clone());
        rhs.push(*bv);
    }
    for (row, bv) in a.iter().zip(&b) {
        matrix.push(row.iter().map(|v| -v).collect());
        rhs.push(-bv);
    }
    for e in 0..m {
        let mut row = vec![0; m];
        row[e] = 1;
        matrix.push(row);
        rhs.push(0);
    }
    for e in 0..m {
        let mut row = vec![0; m];
        row[e] = -1;
        matrix.push(row);
        rhs.push(load[e] - inst.capacities[e]);
    }
    QuasiLinearData { matrix, rhs, cost: inst.cost_vector(i, load) }
}

/// Integral best response of player `i` against the rivals in `x`.
///
/// `None` when `Xᵢ(x₋ᵢ)` is empty.
pub fn best_response_flow(inst: &CdfgInstance, i: usize, x: &[Vec<i64>]) -> Result<Option<(Vec<i64>, i64)>> {
    inst.check_player(i)?;
    inst.check_profile(x)?;
    let load = inst.rival_load(i, x);
    Ok(best_response_from_load(inst, i, &load))
}

pub(crate) fn best_response_from_load(inst: &CdfgInstance, i: usize, load: &[i64]) -> Option<(Vec<i64>, i64)> {
    let residual: Vec<i64> = inst.capacities.iter().zip(load).map(|(c, l)| c - l).collect();
    if residual.iter().any(|r| *r < 0) {
        return None;
    }
    let cost = inst.cost_vector(i, load);
    let p = inst.players[i];
    min_cost_st_flow(inst.nodes, &inst.arcs, &residual, &cost, p.source, p.sink, p.demand)
}

/// Optimal LP duals for player `i` read off the node potentials of an
/// optimal integral flow `y`; `None` if they fail the exact optimality check.
pub(crate) fn potential_duals(inst: &CdfgInstance, data: &QuasiLinearData, load: &[i64], y: &[i64]) -> Option<Vec<Rational>> {
    let n = inst.nodes;
    let mut residual_arcs = Vec::new();
    for (e, &(u, v)) in inst.arcs.iter().enumerate() {
        let room = inst.capacities[e] - load[e];
        if y[e] < room {
            residual_arcs.push((u, v, data.cost[e]));
        }
        if y[e] > 0 {
            residual_arcs.push((v, u, -data.cost[e]));
        }
    }
    let mut dist = vec![0i64; n];
    for round in 0..=n {
        let mut changed = false;
        for &(u, v, c) in &residual_arcs {
            if dist[u] + c < dist[v] {
                dist[v] = dist[u] + c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == n {
            return None;
        }
    }
    let pi: Vec<i64> = dist.iter().map(|d| -d).collect();
    let mut nu = Vec::with_capacity(data.rows());
    nu.extend(pi.iter().map(|p| rat((*p).max(0))));
    nu.extend(pi.iter().map(|p| rat((-*p).max(0))));
    let reduced: Vec<i64> = inst.arcs.iter().zip(&data.cost).map(|(&(u, v), c)| c - (pi[u] - pi[v])).collect();
    nu.extend(reduced.iter().map(|r| rat((*r).max(0))));
    nu.extend(reduced.iter().map(|r| rat((-*r).max(0))));
    let yr: Vec<Rational> = y.iter().map(|v| rat(*v)).collect();
    (data.is_dual_feasible(&nu) && data.duality_gap(&yr, &nu) == rat(0)).then_some(nu)
}

/// Exact LP best response `(LPᵢ(x₋ᵢ))` with its dual multipliers.
#[derive(Debug, Clone)]
pub struct LpBestResponse {
    pub data: QuasiLinearData,
    pub solution: LpSolution<Rational>,
}

impl LpBestResponse {
    pub fn value(&self) -> &Rational {
        &self.solution.objective
    }

    pub fn duals(&self) -> &[Rational] {
        &self.solution.duals
    }
}

pub fn lp_best_response(inst: &CdfgInstance, i: usize, x: &[Vec<i64>]) -> Result<LpBestResponse> {
    let data = quasi_linear_data(inst, i, x)?;
    lp_best_response_for(data, i)
}

pub(crate) fn lp_best_response_for(data: QuasiLinearData, i: usize) -> Result<LpBestResponse> {
    let solution = solve_lp(&data.to_lp());
    match solution.status {
        LpStatus::Optimal => Ok(LpBestResponse { data, solution }),
        LpStatus::Infeasible => Err(Error::EmptyStrategySet(i)),
        LpStatus::Unbounded => Err(Error::Lp("unbounded")),
        LpStatus::IterationLimit => Err(Error::Lp("stopped at the pivot limit")),
    }
}

/// Objective of the reformulated problem at `(x, ν)`:
/// `Σᵢ Cᵢ(x₋ᵢ)ᵀxᵢ − eᵢ(x₋ᵢ)ᵀνᵢ`.
pub fn reformulation_objective(inst: &CdfgInstance, x: &[Vec<i64>], nu: &[Vec<Rational>]) -> Result<Rational> {
    let mut total = rat(0);
    for i in 0..inst.num_players() {
        let data = quasi_linear_data(inst, i, x)?;
        let xi: Vec<Rational> = x[i].iter().map(|v| rat(*v)).collect();
        total += data.duality_gap(&xi, &nu[i]);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::parallel_arcs;

    #[test]
    fn zero_demand_routes_nothing() {
        let inst = parallel_arcs(&[1, 3], &[1, 1], 0, 1);
        let (f, v) = best_response_flow(&inst, 0, &[vec![0, 0]]).unwrap().unwrap();
        assert_eq!((f, v), (vec![0, 0], 0));
    }

    #[test]
    fn parallel_arcs_best_responses() {
        let inst = parallel_arcs(&[1, 3], &[1, 1], 2, 1);
        let (f, v) = best_response_flow(&inst, 0, &[vec![0, 0]]).unwrap().unwrap();
        assert_eq!((f, v), (vec![1, 1], 4));

        let two = parallel_arcs(&[1, 3], &[1, 1], 1, 2);
        let x = vec![vec![0, 0], vec![1, 0]];
        let (f, v) = best_response_flow(&two, 0, &x).unwrap().unwrap();
        assert_eq!((f, v), (vec![0, 1], 3));
    }

    #[test]
    fn no_residual_capacity_is_empty() {
        let two = parallel_arcs(&[1, 3], &[1, 1], 2, 2);
        let x = vec![vec![0, 0], vec![1, 1]];
        assert!(best_response_flow(&two, 0, &x).unwrap().is_none());
        assert_eq!(lp_best_response(&two, 0, &x).unwrap_err(), Error::EmptyStrategySet(0));
    }

    #[test]
    fn stacked_rows_and_rhs() {
        let inst = parallel_arcs(&[1, 3], &[2, 2], 1, 2);
        let x = vec![vec![0, 0], vec![1, 0]];
        let q = quasi_linear_data(&inst, 0, &x).unwrap();
        assert_eq!(q.rows(), 2 * inst.nodes + 2 * inst.num_arcs());
        assert_eq!(&q.rhs[2 * inst.nodes..], &[0, 0, -1, -2]);
        let zero = quasi_linear_data(&inst, 0, &[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(zero.cost, vec![1, 3]);
    }

    #[test]
    fn lp_value_matches_integral_and_duals_close_the_gap() {
        let inst = parallel_arcs(&[1, 3], &[1, 1], 2, 1);
        let x = vec![vec![1, 1]];
        let br = lp_best_response(&inst, 0, &x).unwrap();
        assert_eq!(*br.value(), rat(4));
        assert!(br.data.is_dual_feasible(br.duals()));
        let nu = vec![br.duals().to_vec()];
        // x is the best response, so the reformulated objective vanishes.
        assert_eq!(reformulation_objective(&inst, &x, &nu).unwrap(), rat(0));
    }

    #[test]
    fn potential_duals_certify_the_lp_optimum() {
        use crate::flowgame::{generate_instance, greedy_routing, GenParams, SourceMode, WeightMode};
        for seed in 0..6 {
            let params = GenParams {
                nodes: 6,
                players: 2,
                source_mode: SourceMode::Multi,
                weight_mode: if seed % 2 == 0 { WeightMode::Unit } else { WeightMode::Random },
            };
            let inst = generate_instance(params, seed).unwrap();
            let x = greedy_routing(&inst).unwrap();
            for i in 0..2 {
                let load = inst.rival_load(i, &x);
                let (y, v) = best_response_from_load(&inst, i, &load).unwrap();
                let data = quasi_linear_data_from_load(&inst, i, &load);
                let nu = potential_duals(&inst, &data, &load, &y).expect("potentials are optimal");
                let dual: Rational = data.rhs.iter().zip(&nu).map(|(e, n)| rat(*e) * n).sum();
                assert_eq!(dual, rat(v));
                assert_eq!(*lp_best_response(&inst, i, &x).unwrap().value(), rat(v));
            }
        }
    }
}
