//! Dense two-phase tableau simplex with dual extraction.
//!
//! Works over any [`Scalar`]: with `Rational` every verdict (status, primal,
//! duals, objective) is exact; with `f64` it is a fast approximate oracle.
//!
//! Duals follow the Lagrangian convention for the stated direction:
//! `objective = Σ_r duals[r]·row_r + reduced_costs`, so for a minimization a
//! `≥` row has a nonnegative multiplier and a `≤` row a nonpositive one
//! (signs flip for maximization).

use super::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Eq,
    Le,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Lowest-index entering and leaving variables; never cycles.
    Bland,
    /// Most negative reduced cost, falling back to Bland on degenerate streaks.
    Dantzig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    pub direction: Direction,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    /// Per-variable `(lower, upper)`; `None` is unbounded on that side.
    pub bounds: Vec<(Option<T>, Option<T>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub primal: Vec<T>,
    /// One multiplier per constraint row.
    pub duals: Vec<T>,
    /// `objective[j] - Σ_r duals[r]·coeffs[r][j]`; nonzero only at active bounds.
    pub reduced_costs: Vec<T>,
    pub objective: T,
}

impl<T: Scalar> LinearProgram<T> {
    /// All variables free.
    pub fn new(direction: Direction, objective: Vec<T>) -> Self {
        let n = objective.len();
        Self {
            direction,
            objective,
            constraints: Vec::new(),
            bounds: vec![(None, None); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, sense: Sense, rhs: T) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint { coeffs, sense, rhs });
        self
    }

    pub fn nonnegative(mut self) -> Self {
        for b in &mut self.bounds {
            b.0 = Some(T::zero());
        }
        self
    }

    fn check_dims(&self) -> bool {
        self.bounds.len() == self.num_vars()
            && self.constraints.iter().all(|c| c.coeffs.len() == self.num_vars())
    }

    /// `Σ_r duals[r]·rhs[r]` plus the bound terms picked out by the reduced
    /// costs. Returns `None` if a reduced cost points at a missing bound,
    /// i.e. the multipliers are not dual feasible.
    pub fn dual_objective(&self, sol: &LpSolution<T>) -> Option<T> {
        let mut value = T::zero();
        for (c, y) in self.constraints.iter().zip(&sol.duals) {
            value = value + y.clone() * c.rhs.clone();
        }
        let minimize = self.direction == Direction::Minimize;
        for ((lo, hi), w) in self.bounds.iter().zip(&sol.reduced_costs) {
            if w.is_zero() {
                continue;
            }
            // For minimization a positive reduced cost is carried by the lower bound.
            let use_lower = w.is_pos() == minimize;
            let bound = if use_lower { lo } else { hi };
            value = value + w.clone() * bound.clone()?;
        }
        Some(value)
    }
}

/// Maps one user variable onto standard-form columns: `x = offset + Σ sign·z`.
struct VarMap<T> {
    offset: T,
    cols: Vec<(usize, bool)>,
}

pub fn solve_lp<T: Scalar>(lp: &LinearProgram<T>) -> LpSolution<T> {
    solve_lp_with(lp, PivotRule::Bland)
}

pub fn solve_lp_with<T: Scalar>(lp: &LinearProgram<T>, rule: PivotRule) -> LpSolution<T> {
    assert!(lp.check_dims(), "inconsistent linear program dimensions");
    let n = lp.num_vars();

    // Variable substitution into z >= 0.
    let mut maps: Vec<VarMap<T>> = Vec::with_capacity(n);
    let mut n_struct = 0usize;
    // Internal rows `z <= u - l` for doubly bounded variables.
    let mut box_rows: Vec<(usize, T)> = Vec::new();
    for (lo, hi) in &lp.bounds {
        match (lo, hi) {
            (Some(l), Some(u)) => {
                maps.push(VarMap { offset: l.clone(), cols: vec![(n_struct, true)] });
                box_rows.push((n_struct, u.clone() - l.clone()));
                n_struct += 1;
            }
            (Some(l), None) => {
                maps.push(VarMap { offset: l.clone(), cols: vec![(n_struct, true)] });
                n_struct += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap { offset: u.clone(), cols: vec![(n_struct, false)] });
                n_struct += 1;
            }
            (None, None) => {
                maps.push(VarMap {
                    offset: T::zero(),
                    cols: vec![(n_struct, true), (n_struct + 1, false)],
                });
                n_struct += 2;
            }
        }
    }

    let sign_of = |positive: bool, v: &T| if positive { v.clone() } else { -v.clone() };

    // Standard-form rows before slacks: (dense coeffs over z, sense, rhs).
    let mut rows: Vec<(Vec<T>, Sense, T)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![T::zero(); n_struct];
        let mut rhs = c.rhs.clone();
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            rhs = rhs - a.clone() * maps[j].offset.clone();
            for &(col, pos) in &maps[j].cols {
                coeffs[col] = coeffs[col].clone() + sign_of(pos, a);
            }
        }
        rows.push((coeffs, c.sense, rhs));
    }
    for (col, width) in &box_rows {
        let mut coeffs = vec![T::zero(); n_struct];
        coeffs[*col] = T::one();
        rows.push((coeffs, Sense::Le, width.clone()));
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_cols = n_struct + n_slack;
    let width = n_cols + m + 1;
    let rhs_col = width - 1;

    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut row_sign: Vec<bool> = Vec::with_capacity(m);
    let mut slack = n_struct;
    for (r, (coeffs, sense, rhs)) in rows.into_iter().enumerate() {
        let mut row = vec![T::zero(); width];
        for (j, v) in coeffs.into_iter().enumerate() {
            row[j] = v;
        }
        match sense {
            Sense::Le => {
                row[slack] = T::one();
                slack += 1;
            }
            Sense::Ge => {
                row[slack] = -T::one();
                slack += 1;
            }
            Sense::Eq => {}
        }
        row[rhs_col] = rhs;
        let flip = row[rhs_col].is_neg();
        if flip {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[n_cols + r] = T::one();
        row_sign.push(!flip);
        tab.push(row);
    }

    // Standard-form costs (always minimize).
    let maximize = lp.direction == Direction::Maximize;
    let mut cost = vec![T::zero(); n_cols + m];
    for (j, c) in lp.objective.iter().enumerate() {
        let c = if maximize { -c.clone() } else { c.clone() };
        for &(col, pos) in &maps[j].cols {
            cost[col] = cost[col].clone() + sign_of(pos, &c);
        }
    }

    let mut basis: Vec<usize> = (0..m).map(|r| n_cols + r).collect();
    let mut tableau = Tableau { tab, obj: vec![T::zero(); width], basis, n_cols, rule };

    // Phase 1: minimize the sum of artificials.
    for j in 0..width {
        if j >= n_cols && j < n_cols + m {
            continue;
        }
        let mut s = T::zero();
        for row in &tableau.tab {
            s = s + row[j].clone();
        }
        tableau.obj[j] = -s;
    }
    let status = tableau.run();
    let phase1_value = -tableau.obj[rhs_col].clone();
    if status == LpStatus::IterationLimit {
        return failed(lp, LpStatus::IterationLimit);
    }
    if phase1_value.is_pos() {
        return failed(lp, LpStatus::Infeasible);
    }
    tableau.drive_out_artificials();

    // Phase 2 objective row.
    for j in 0..width {
        let mut d = if j < n_cols + m { cost[j].clone() } else { T::zero() };
        for (r, row) in tableau.tab.iter().enumerate() {
            let b = tableau.basis[r];
            if !cost[b].is_zero() {
                d = d - cost[b].clone() * row[j].clone();
            }
        }
        tableau.obj[j] = d;
    }
    let status = tableau.run();
    if status != LpStatus::Optimal {
        return failed(lp, status);
    }
    basis = tableau.basis.clone();

    let mut z = vec![T::zero(); n_cols + m];
    for (r, &b) in basis.iter().enumerate() {
        z[b] = tableau.tab[r][rhs_col].clone();
    }
    let primal: Vec<T> = maps
        .iter()
        .map(|vm| {
            let mut v = vm.offset.clone();
            for &(col, pos) in &vm.cols {
                v = v + sign_of(pos, &z[col]);
            }
            v
        })
        .collect();

    let duals: Vec<T> = (0..lp.constraints.len())
        .map(|r| {
            // Reduced cost of artificial r equals minus the standard-form dual.
            let y_std = -tableau.obj[n_cols + r].clone();
            let y = if row_sign[r] { y_std } else { -y_std };
            if maximize {
                -y
            } else {
                y
            }
        })
        .collect();

    let reduced_costs: Vec<T> = (0..n)
        .map(|j| {
            let mut w = lp.objective[j].clone();
            for (c, y) in lp.constraints.iter().zip(&duals) {
                if !c.coeffs[j].is_zero() {
                    w = w - y.clone() * c.coeffs[j].clone();
                }
            }
            w
        })
        .collect();

    let mut objective = T::zero();
    for (c, x) in lp.objective.iter().zip(&primal) {
        objective = objective + c.clone() * x.clone();
    }

    LpSolution { status: LpStatus::Optimal, primal, duals, reduced_costs, objective }
}

fn failed<T: Scalar>(lp: &LinearProgram<T>, status: LpStatus) -> LpSolution<T> {
    LpSolution {
        status,
        primal: Vec::new(),
        duals: Vec::new(),
        reduced_costs: Vec::new(),
        objective: T::zero(),
    }
    .with_len(lp.num_vars())
}

impl<T: Scalar> LpSolution<T> {
    fn with_len(mut self, n: usize) -> Self {
        self.primal = vec![T::zero(); n];
        self
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Tableau<T> {
    tab: Vec<Vec<T>>,
    /// Reduced costs; last entry is minus the current objective.
    obj: Vec<T>,
    basis: Vec<usize>,
    /// Columns allowed to enter (artificials never re-enter).
    n_cols: usize,
    rule: PivotRule,
}

const MAX_PIVOTS: usize = 200_000;

impl<T: Scalar> Tableau<T> {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn run(&mut self) -> LpStatus {
        let rhs = self.rhs();
        let mut degenerate_streak = 0usize;
        for _ in 0..MAX_PIVOTS {
            let use_bland = self.rule == PivotRule::Bland || degenerate_streak > 50;
            let entering = if use_bland {
                (0..self.n_cols).find(|&j| self.obj[j].is_neg())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.n_cols {
                    if self.obj[j].is_neg() && best.is_none_or(|b| self.obj[j] < self.obj[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(e) = entering else {
                return LpStatus::Optimal;
            };
            let mut leave: Option<(usize, T)> = None;
            for (r, row) in self.tab.iter().enumerate() {
                if !row[e].is_pos() {
                    continue;
                }
                let ratio = row[rhs].clone() / row[e].clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best
                            || (!(*best < ratio) && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return LpStatus::Unbounded;
            };
            if ratio.is_zero() {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }
            self.pivot(r, e);
        }
        LpStatus::IterationLimit
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.tab[r][e].clone();
        for v in self.tab[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        self.tab[r][e] = T::one();
        let support: Vec<usize> = (0..self.tab[r].len())
            .filter(|&j| !self.tab[r][j].is_zero())
            .collect();
        let pivot_row = self.tab[r].clone();
        let eliminate = |row: &mut Vec<T>| {
            let f = row[e].clone();
            if f.is_zero() {
                return;
            }
            for &j in &support {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
            row[e] = T::zero();
        };
        for (i, row) in self.tab.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = e;
    }

    /// Pivots zero-level artificials out of the basis where possible; rows
    /// with no structural entry are redundant and keep their artificial.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.tab.len() {
            if self.basis[r] < self.n_cols {
                continue;
            }
            if let Some(j) = (0..self.n_cols).find(|&j| !self.tab[r][j].is_zero()) {
                self.pivot(r, j);
            }
        }
    }
}
