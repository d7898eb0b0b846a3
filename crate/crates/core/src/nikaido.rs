//! The Nikaido–Isoda function `Ψ` and the value functions built on it.
//!
//! Exact evaluations (`Ψ`, `V̂`, `V̂^conv`) work over rationals for any
//! [`NiGame`]. The smooth variants `V̂α` and `V̄αβ` live on the fractional
//! relaxation of a flow game and are evaluated in floating point with
//! Frank–Wolfe.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::flowgame::quasi::lp_best_response;
use crate::flowgame::{best_response_flow, CdfgInstance, IntProfile, PlayerCost, PlayerFlowSet, RelaxedJointSet};
use crate::kernel::fw::{project_euclidean, solve_qp_fw, QuadraticSubproblem, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::kernel::hull::convex_weight_lp;
use crate::kernel::lp::{solve_lp, LpStatus};
use crate::kernel::scalar::rat;
use crate::kernel::LinearOracle;
use crate::model::{FiniteGnep, Point, StrategyProfile};
use crate::Rational;

pub const DEFAULT_ALPHA: f64 = 0.02;
pub const DEFAULT_BETA: f64 = 0.05;

/// Which game `V̂` is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Original,
    Convexified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NiMethod {
    Original,
    Convexified,
    /// Fractional `V̂` over the relaxation, no regularization.
    Relaxed,
    Regularized { alpha: f64 },
    Unconstrained { alpha: f64, beta: f64, c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NiEvaluation<T> {
    pub value: T,
    /// Maximizing deviation `yᵢ` per player.
    pub responses: Vec<Vec<T>>,
    /// LP multipliers per player; empty where the method has none.
    pub duals: Vec<Vec<T>>,
    pub method: NiMethod,
}

/// Best response in the convexified game at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexResponse {
    /// `φᵢ(x)`.
    pub current: Rational,
    pub response: Point,
    /// `min φᵢ(·, x₋ᵢ)` over `conv(Xᵢ(x₋ᵢ))`.
    pub value: Rational,
    pub duals: Vec<Rational>,
}

/// What the exact NI machinery needs from a game.
pub trait NiGame {
    fn num_players(&self) -> usize;
    fn check(&self, x: &StrategyProfile) -> Result<()>;
    fn cost(&self, i: usize, x: &StrategyProfile) -> Result<Rational>;
    fn feasible(&self, x: &StrategyProfile) -> Result<bool>;
    /// A minimizer of `πᵢ(·, x₋ᵢ)` over `Xᵢ(x₋ᵢ)` and its value.
    fn best_response(&self, i: usize, x: &StrategyProfile) -> Result<(Point, Rational)>;
    fn convexified_response(&self, i: usize, x: &StrategyProfile) -> Result<ConvexResponse>;
}

/// Convex envelope at `at` of the function taking `values[k]` at
/// `points[k]`; `None` outside `conv(points)`.
pub fn convex_envelope(points: &[Point], values: &[Rational], at: &[Rational]) -> Result<Option<Rational>> {
    if points.len() != values.len() {
        return Err(Error::Dimension(format!("{} points with {} values", points.len(), values.len())));
    }
    if points.is_empty() {
        return Ok(None);
    }
    if let Some(bad) = points.iter().find(|p| p.len() != at.len()) {
        return Err(Error::Dimension(format!("point of dimension {} against {}", bad.len(), at.len())));
    }
    let mut lp = convex_weight_lp(at, points);
    lp.objective = values.to_vec();
    let sol = solve_lp(&lp);
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.objective),
        _ => None,
    })
}

impl NiGame for FiniteGnep {
    fn num_players(&self) -> usize {
        FiniteGnep::num_players(self)
    }

    fn check(&self, x: &StrategyProfile) -> Result<()> {
        self.check_profile(x)
    }

    fn cost(&self, i: usize, x: &StrategyProfile) -> Result<Rational> {
        self.player_cost(i, x)
    }

    fn feasible(&self, x: &StrategyProfile) -> Result<bool> {
        self.is_feasible(x)
    }

    fn best_response(&self, i: usize, x: &StrategyProfile) -> Result<(Point, Rational)> {
        let set = self.strategy_set(i, &x.rivals(i)).ok_or(Error::EmptyStrategySet(i))?;
        let mut best: Option<(Point, Rational)> = None;
        for y in set {
            let v = self.player_cost(i, &x.with_block(i, y.clone()))?;
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((y.clone(), v));
            }
        }
        best.ok_or(Error::EmptyStrategySet(i))
    }

    fn convexified_response(&self, i: usize, x: &StrategyProfile) -> Result<ConvexResponse> {
        self.check_profile(x)?;
        let set = self.strategy_set(i, &x.rivals(i)).ok_or(Error::EmptyStrategySet(i))?;
        let points: Vec<Point> = set.iter().cloned().collect();
        let values = points
            .iter()
            .map(|y| self.player_cost(i, &x.with_block(i, y.clone())))
            .collect::<Result<Vec<_>>>()?;
        let current = convex_envelope(&points, &values, x.block(i))?.ok_or(Error::InfeasibleProfile)?;
        let (k, value) = values
            .iter()
            .enumerate()
            .fold(None::<(usize, &Rational)>, |acc, (k, v)| match acc {
                Some((_, b)) if b <= v => acc,
                _ => Some((k, v)),
            })
            .ok_or(Error::EmptyStrategySet(i))?;
        Ok(ConvexResponse { current, response: points[k].clone(), value: value.clone(), duals: Vec::new() })
    }
}

pub fn profile_from_ints(x: &[Vec<i64>]) -> StrategyProfile {
    StrategyProfile::new(x.iter().map(|b| b.iter().map(|v| rat(*v)).collect()).collect())
}

/// The integral profile behind `x`, or an input error if a coordinate is fractional.
pub fn ints_from_profile(x: &StrategyProfile) -> Result<IntProfile> {
    x.blocks()
        .iter()
        .map(|b| {
            b.iter()
                .map(|v| {
                    if v.is_integer() {
                        v.to_integer().to_i64().ok_or_else(|| Error::Input(format!("coordinate {v} out of range")))
                    } else {
                        Err(Error::Input(format!("coordinate {v} is not integral")))
                    }
                })
                .collect()
        })
        .collect()
}

/// `Cᵢ(x₋ᵢ)` at a rational profile.
fn cost_vector_rational(inst: &CdfgInstance, i: usize, x: &StrategyProfile) -> Vec<Rational> {
    let m = inst.num_arcs();
    let mut load = vec![rat(0); m];
    for (j, b) in x.blocks().iter().enumerate() {
        if j != i {
            for (l, v) in load.iter_mut().zip(b) {
                *l += v;
            }
        }
    }
    match &inst.costs[i] {
        PlayerCost::Bilinear { c1, c2 } => (0..m)
            .map(|a| rat(c2[a]) + (0..m).map(|b| &load[b] * rat(c1[b][a])).sum::<Rational>())
            .collect(),
        PlayerCost::Congestion { diagonal } => {
            diagonal.iter().zip(&load).map(|(d, l)| rat(*d) * (rat(1) + l)).collect()
        }
    }
}

impl NiGame for CdfgInstance {
    fn num_players(&self) -> usize {
        CdfgInstance::num_players(self)
    }

    fn check(&self, x: &StrategyProfile) -> Result<()> {
        self.check_profile(x.blocks())
    }

    fn cost(&self, i: usize, x: &StrategyProfile) -> Result<Rational> {
        self.check_player(i)?;
        self.check(x)?;
        Ok(cost_vector_rational(self, i, x).iter().zip(x.block(i)).map(|(c, v)| c * v).sum())
    }

    fn feasible(&self, x: &StrategyProfile) -> Result<bool> {
        self.check(x)?;
        match ints_from_profile(x) {
            Ok(ints) => self.is_feasible(&ints),
            Err(_) => Ok(false),
        }
    }

    fn best_response(&self, i: usize, x: &StrategyProfile) -> Result<(Point, Rational)> {
        let ints = ints_from_profile(x)?;
        let (y, v) = best_response_flow(self, i, &ints)?.ok_or(Error::EmptyStrategySet(i))?;
        Ok((y.iter().map(|v| rat(*v)).collect(), rat(v)))
    }

    fn convexified_response(&self, i: usize, x: &StrategyProfile) -> Result<ConvexResponse> {
        let ints = ints_from_profile(x)?;
        let br = lp_best_response(self, i, &ints)?;
        let current = rat(self.player_cost(i, &ints)?);
        Ok(ConvexResponse {
            current,
            value: br.value().clone(),
            duals: br.duals().to_vec(),
            response: br.solution.primal,
        })
    }
}

/// `Ψ(x, y) = Σᵢ [πᵢ(x) − πᵢ(yᵢ, x₋ᵢ)]`.
pub fn psi<G: NiGame + ?Sized>(game: &G, x: &StrategyProfile, y: &StrategyProfile) -> Result<Rational> {
    game.check(x)?;
    game.check(y)?;
    let mut total = rat(0);
    for i in 0..game.num_players() {
        total += game.cost(i, x)? - game.cost(i, &x.with_block(i, y.block(i).clone()))?;
    }
    Ok(total)
}

/// `V̂(x) = max_{y ∈ X(x)} Ψ(x, y)`, separably per player.
///
/// In original mode `x` must be feasible.
pub fn v_hat<G: NiGame + ?Sized>(game: &G, x: &StrategyProfile, mode: Mode) -> Result<NiEvaluation<Rational>> {
    game.check(x)?;
    let n = game.num_players();
    let mut value = rat(0);
    let mut responses = Vec::with_capacity(n);
    let mut duals = Vec::with_capacity(n);
    match mode {
        Mode::Original => {
            if !game.feasible(x)? {
                return Err(Error::InfeasibleProfile);
            }
            for i in 0..n {
                let (y, v) = game.best_response(i, x)?;
                value += game.cost(i, x)? - v;
                responses.push(y);
                duals.push(Vec::new());
            }
        }
        Mode::Convexified => {
            for i in 0..n {
                let r = game.convexified_response(i, x)?;
                value += r.current - r.value;
                responses.push(r.response);
                duals.push(r.duals);
            }
        }
    }
    let method = match mode {
        Mode::Original => NiMethod::Original,
        Mode::Convexified => NiMethod::Convexified,
    };
    Ok(NiEvaluation { value, responses, duals, method })
}

/// `x ∈ X(x)` and `V̂(x) = 0`, decided exactly. Malformed profiles are not equilibria.
pub fn is_gne<G: NiGame + ?Sized>(game: &G, x: &StrategyProfile) -> bool {
    matches!(game.feasible(x), Ok(true)) && v_hat(game, x, Mode::Original).is_ok_and(|e| e.value.is_zero())
}

/// `1 + (1/(m·n)) Σ sin²(π·x)` over a flat profile.
pub fn penalty_factor(x: &[f64], m: usize, n: usize) -> f64 {
    let s: f64 = x.iter().map(|v| (std::f64::consts::PI * (v - v.round())).sin().powi(2)).sum();
    1.0 + s / (m * n) as f64
}

fn penalty_gradient(x: &[f64], m: usize, n: usize) -> Vec<f64> {
    let scale = std::f64::consts::PI / (m * n) as f64;
    x.iter().map(|v| scale * (2.0 * std::f64::consts::PI * (v - v.round())).sin()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `min_y Cᵀy + (γ/2)‖y − center‖²` over player `i`'s relaxed set at `set_load`.
fn regularized_min(
    inst: &CdfgInstance,
    i: usize,
    cost: &[f64],
    center: &[f64],
    set_load: &[f64],
    gamma: f64,
) -> Result<(Vec<f64>, f64)> {
    let region = PlayerFlowSet::new(inst, i, set_load);
    if gamma == 0.0 {
        let y = region.minimize(cost)?;
        let v = dot(cost, &y);
        return Ok((y, v));
    }
    let sub = QuadraticSubproblem { linear: cost.to_vec(), center: center.to_vec(), alpha: gamma };
    let r = solve_qp_fw(&sub, &region, DEFAULT_TOL * 1e-2, DEFAULT_MAX_ITER)?;
    Ok((r.point, r.value))
}

fn check_flat(inst: &CdfgInstance, x: &[f64]) -> Result<()> {
    if x.len() != inst.dim() {
        return Err(Error::Dimension(format!("flat profile of length {} for dimension {}", x.len(), inst.dim())));
    }
    Ok(())
}

/// Per-player regularized terms at `x` with strategy sets taken at `set_x`.
fn regularized_terms(
    inst: &CdfgInstance,
    x: &[f64],
    set_x: &[f64],
    gamma: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let blocks = inst.unflatten(x);
    let set_blocks = inst.unflatten(set_x);
    let mut terms = Vec::with_capacity(blocks.len());
    let mut ys = Vec::with_capacity(blocks.len());
    for i in 0..inst.num_players() {
        let cost = inst.cost_vector_f64(i, &inst.rival_load(i, &blocks));
        let (y, q) = regularized_min(inst, i, &cost, &blocks[i], &inst.rival_load(i, &set_blocks), gamma)?;
        terms.push(dot(&cost, &blocks[i]) - q);
        ys.push(y);
    }
    Ok((terms, ys))
}

fn regularized_eval(inst: &CdfgInstance, x: &[f64], gamma: f64, method: NiMethod) -> Result<NiEvaluation<f64>> {
    check_flat(inst, x)?;
    let (terms, responses) = regularized_terms(inst, x, x, gamma)?;
    let n = inst.num_players();
    Ok(NiEvaluation { value: terms.iter().sum(), responses, duals: vec![Vec::new(); n], method })
}

/// `V̂` of the convexified flow game at a fractional `x ∈ X̂`.
pub fn v_hat_relaxed(inst: &CdfgInstance, x: &[f64]) -> Result<NiEvaluation<f64>> {
    regularized_eval(inst, x, 0.0, NiMethod::Relaxed)
}

/// `V̂α(x) = max_{y ∈ X^conv(x)} Σᵢ [πᵢ(x) − πᵢ(yᵢ,x₋ᵢ) − (α/2)‖xᵢ − yᵢ‖²]`.
pub fn v_alpha(inst: &CdfgInstance, x: &[f64], alpha: f64) -> Result<NiEvaluation<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::Input(format!("alpha must be positive, got {alpha}")));
    }
    regularized_eval(inst, x, alpha, NiMethod::Regularized { alpha })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarEvaluation {
    pub value: f64,
    /// `P_X̂[x]`.
    pub projection: Vec<f64>,
    pub alpha_responses: Vec<Vec<f64>>,
    pub beta_responses: Vec<Vec<f64>>,
}

fn check_bar_params(alpha: f64, beta: f64, c: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < beta && c >= 0.0) {
        return Err(Error::Input(format!("need 0 < alpha < beta and c >= 0, got {alpha}, {beta}, {c}")));
    }
    Ok(())
}

/// `P_X̂[x]` to tolerance `tol` on the Frank–Wolfe gap.
pub fn project_relaxed(inst: &CdfgInstance, x: &[f64], tol: f64) -> Result<Vec<f64>> {
    check_flat(inst, x)?;
    Ok(project_euclidean(&RelaxedJointSet::new(inst), x, tol)?.point)
}

/// `V̄αβ(x) = V̄α(x) − V̄β(x) + c‖x − P_X̂[x]‖²`, where `V̄γ` maximizes over
/// `X^conv(P_X̂[x])` but keeps costs and centers at `x`.
pub fn v_bar(inst: &CdfgInstance, x: &[f64], alpha: f64, beta: f64, c: f64) -> Result<BarEvaluation> {
    check_bar_params(alpha, beta, c)?;
    let p = project_relaxed(inst, x, DEFAULT_TOL * 1e-2)?;
    v_bar_at(inst, x, &p, alpha, beta, c)
}

/// [`v_bar`] with the projection supplied by the caller.
pub fn v_bar_at(inst: &CdfgInstance, x: &[f64], p: &[f64], alpha: f64, beta: f64, c: f64) -> Result<BarEvaluation> {
    check_bar_params(alpha, beta, c)?;
    check_flat(inst, x)?;
    check_flat(inst, p)?;
    let (ta, ya) = regularized_terms(inst, x, p, alpha)?;
    let (tb, yb) = regularized_terms(inst, x, p, beta)?;
    let value = ta.iter().sum::<f64>() - tb.iter().sum::<f64>() + c * sq_dist(x, p);
    Ok(BarEvaluation { value, projection: p.to_vec(), alpha_responses: ya, beta_responses: yb })
}

/// Objective handles for the descent methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    VHat,
    VAlpha { alpha: f64 },
    VBar { alpha: f64, beta: f64, c: f64 },
}

impl Objective {
    /// Whether the objective is minimized over `X̂` rather than all of `ℝᵏ`.
    pub fn is_constrained(&self) -> bool {
        !matches!(self, Objective::VBar { .. })
    }
}

/// `Σ_{i≠j} C¹ᵢ dᵢ` for every `j`.
fn cross_terms(inst: &CdfgInstance, d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = inst.num_players();
    let m = inst.num_arcs();
    let sens: Vec<Vec<f64>> = (0..n).map(|i| inst.load_sensitivity(i, &d[i])).collect();
    let total: Vec<f64> = (0..m).map(|a| sens.iter().map(|s| s[a]).sum()).collect();
    (0..n).map(|j| (0..m).map(|a| total[a] - sens[j][a]).collect()).collect()
}

/// Value and a gradient of the (optionally penalized) objective at `x`.
///
/// The gradient holds the maximizers fixed and ignores how the strategy
/// sets move with `x`; it is exact wherever those are locally constant.
pub fn value_and_gradient(inst: &CdfgInstance, objective: Objective, x: &[f64], penalized: bool) -> Result<(f64, Vec<f64>)> {
    check_flat(inst, x)?;
    let blocks = inst.unflatten(x);
    let n = inst.num_players();
    let (value, grad_blocks) = match objective {
        Objective::VHat | Objective::VAlpha { .. } => {
            let gamma = match objective {
                Objective::VAlpha { alpha } => alpha,
                _ => 0.0,
            };
            let eval = match objective {
                Objective::VHat => v_hat_relaxed(inst, x)?,
                _ => v_alpha(inst, x, gamma)?,
            };
            let d: Vec<Vec<f64>> = (0..n)
                .map(|i| blocks[i].iter().zip(&eval.responses[i]).map(|(a, b)| a - b).collect())
                .collect();
            let cross = cross_terms(inst, &d);
            let g = (0..n)
                .map(|j| {
                    let c = inst.cost_vector_f64(j, &inst.rival_load(j, &blocks));
                    (0..inst.num_arcs()).map(|a| c[a] - gamma * d[j][a] + cross[j][a]).collect()
                })
                .collect::<Vec<Vec<f64>>>();
            (eval.value, g)
        }
        Objective::VBar { alpha, beta, c } => {
            let eval = v_bar(inst, x, alpha, beta, c)?;
            let d: Vec<Vec<f64>> = (0..n)
                .map(|i| eval.beta_responses[i].iter().zip(&eval.alpha_responses[i]).map(|(b, a)| b - a).collect())
                .collect();
            let cross = cross_terms(inst, &d);
            let p = inst.unflatten(&eval.projection);
            let g = (0..n)
                .map(|j| {
                    (0..inst.num_arcs())
                        .map(|a| {
                            let xj = blocks[j][a];
                            beta * (xj - eval.beta_responses[j][a]) - alpha * (xj - eval.alpha_responses[j][a])
                                + cross[j][a]
                                + 2.0 * c * (xj - p[j][a])
                        })
                        .collect()
                })
                .collect::<Vec<Vec<f64>>>();
            (eval.value, g)
        }
    };
    let mut grad: Vec<f64> = grad_blocks.into_iter().flatten().collect();
    if !penalized {
        return Ok((value, grad));
    }
    let m = inst.num_arcs();
    let factor = penalty_factor(x, m, n);
    for (g, dp) in grad.iter_mut().zip(penalty_gradient(x, m, n)) {
        *g = factor * *g + value * dp;
    }
    Ok((factor * value, grad))
}

/// Objective value only.
pub fn objective_value(inst: &CdfgInstance, objective: Objective, x: &[f64], penalized: bool) -> Result<f64> {
    let value = match objective {
        Objective::VHat => v_hat_relaxed(inst, x)?.value,
        Objective::VAlpha { alpha } => v_alpha(inst, x, alpha)?.value,
        Objective::VBar { alpha, beta, c } => v_bar(inst, x, alpha, beta, c)?.value,
    };
    Ok(if penalized { value * penalty_factor(x, inst.num_arcs(), inst.num_players()) } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kernel::ratio;

    fn p(a: i64, b: i64) -> StrategyProfile {
        StrategyProfile::from_ints(&[&[a], &[b]])
    }

    #[test]
    fn psi_on_the_concept_game() {
        let g = fixtures::concept_game();
        assert_eq!(psi(&g, &p(2, 1), &p(2, 0)).unwrap(), rat(1));
        assert_eq!(psi(&g, &p(2, 1), &p(2, 1)).unwrap(), rat(0));
    }

    #[test]
    fn one_player_linear_cost() {
        let g = FiniteGnep::jointly_constrained(vec![1], (0..=3).map(|v| StrategyProfile::from_ints(&[&[v]])))
            .unwrap()
            .with_cost(|_, x| Ok(rat(2) * &x.block(0)[0]));
        let x = StrategyProfile::from_ints(&[&[3]]);
        let y = StrategyProfile::from_ints(&[&[1]]);
        assert_eq!(psi(&g, &x, &y).unwrap(), rat(4));
        assert!(is_gne(&g, &StrategyProfile::from_ints(&[&[0]])));
        assert!(!is_gne(&g, &x));
        assert_eq!(v_hat(&g, &x, Mode::Original).unwrap().value, rat(6));
    }

    #[test]
    fn v_hat_rejects_infeasible_profiles() {
        let g = fixtures::concept_game();
        assert_eq!(v_hat(&g, &p(2, 3), Mode::Original).unwrap_err(), Error::InfeasibleProfile);
        assert!(!is_gne(&g, &p(2, 3)));
    }

    #[test]
    fn envelope_of_a_concave_function_is_the_chord() {
        let pts: Vec<Point> = (0..=2).map(|v| vec![rat(v)]).collect();
        let vals = vec![rat(0), rat(1), rat(0)];
        assert_eq!(convex_envelope(&pts, &vals, &[rat(1)]).unwrap(), Some(rat(0)));
        assert_eq!(convex_envelope(&pts, &vals, &[ratio(1, 2)]).unwrap(), Some(rat(0)));
        assert_eq!(convex_envelope(&pts, &vals, &[rat(3)]).unwrap(), None);
    }

    #[test]
    fn convexified_value_is_below_original_on_tables() {
        let g = fixtures::zero_one_congestion();
        for x in g.enumerate_feasible_profiles() {
            let orig = v_hat(&g, &x, Mode::Original).unwrap().value;
            let conv = v_hat(&g, &x, Mode::Convexified).unwrap().value;
            assert!(conv >= rat(0) && conv <= orig, "{x}: {conv} vs {orig}");
        }
    }

    #[test]
    fn parallel_arc_contention() {
        let inst = fixtures::parallel_arcs(&[1, 3], &[2, 2], 1, 2);
        let both_cheap = profile_from_ints(&[vec![1, 0], vec![1, 0]]);
        assert_eq!(v_hat(&inst, &both_cheap, Mode::Original).unwrap().value, rat(0));
        let split = profile_from_ints(&[vec![0, 1], vec![1, 0]]);
        let e = v_hat(&inst, &split, Mode::Original).unwrap();
        assert_eq!(e.value, rat(2));
        assert_eq!(e.responses[0], vec![rat(1), rat(0)]);
        let c = v_hat(&inst, &split, Mode::Convexified).unwrap();
        assert_eq!(c.value, rat(2));
        assert_eq!(c.duals[0].len(), 2 * inst.nodes + 2 * inst.num_arcs());
    }

    #[test]
    fn penalty_values() {
        assert_eq!(penalty_factor(&[0.0, 1.0, -2.0, 3.0], 2, 2), 1.0);
        assert!((penalty_factor(&[0.5, 1.0, 0.0, 3.0], 2, 2) - 1.25).abs() < 1e-12);
        assert!((penalty_factor(&[0.5; 4], 2, 2) - 2.0).abs() < 1e-12);
    }

    fn inst_gne() -> (CdfgInstance, Vec<f64>) {
        let inst = fixtures::parallel_arcs(&[1, 3], &[2, 2], 1, 2);
        (inst, vec![1.0, 0.0, 1.0, 0.0])
    }

    #[test]
    fn regularized_values_vanish_at_an_equilibrium() {
        let (inst, x) = inst_gne();
        assert!(v_hat_relaxed(&inst, &x).unwrap().value.abs() < 1e-9);
        assert!(v_alpha(&inst, &x, DEFAULT_ALPHA).unwrap().value.abs() < 1e-6);
        assert!(v_bar(&inst, &x, DEFAULT_ALPHA, DEFAULT_BETA, 0.0).unwrap().value.abs() < 1e-6);
    }

    #[test]
    fn v_alpha_bounded_by_v_hat() {
        let inst = fixtures::parallel_arcs(&[1, 3], &[2, 2], 1, 2);
        let x = [0.3, 0.7, 0.9, 0.1];
        let a = v_alpha(&inst, &x, DEFAULT_ALPHA).unwrap().value;
        let h = v_hat_relaxed(&inst, &x).unwrap().value;
        assert!(a >= -1e-9 && a <= h + 1e-9, "{a} {h}");
    }

    fn numeric_gradient(inst: &CdfgInstance, obj: Objective, x: &[f64], pen: bool) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|k| {
                let mut a = x.to_vec();
                let mut b = x.to_vec();
                a[k] += h;
                b[k] -= h;
                (objective_value(inst, obj, &a, pen).unwrap() - objective_value(inst, obj, &b, pen).unwrap())
                    / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn gradient_matches_finite_differences_in_the_interior() {
        let spec = crate::PlayerSpec { source: 0, sink: 1, demand: 1 };
        let inst = CdfgInstance::new(
            2,
            vec![(0, 1); 2],
            vec![3, 3],
            vec![spec; 2],
            vec![PlayerCost::Congestion { diagonal: vec![2, 3] }, PlayerCost::Congestion { diagonal: vec![4, 1] }],
        )
        .unwrap();
        let x = [0.4, 0.6, 0.55, 0.45];
        for obj in [Objective::VHat, Objective::VAlpha { alpha: 0.5 }] {
            for pen in [false, true] {
                let (_, g) = value_and_gradient(&inst, obj, &x, pen).unwrap();
                let num = numeric_gradient(&inst, obj, &x, pen);
                for (a, b) in g.iter().zip(&num) {
                    assert!((a - b).abs() < 1e-3, "{obj:?} {pen}: {g:?} vs {num:?}");
                }
            }
        }
    }
}
