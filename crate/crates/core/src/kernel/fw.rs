//! Away-step Frank–Wolfe for strictly convex quadratics over polytopes that
//! are only accessible through a linear-minimization oracle.

use crate::error::Result;

/// Linear-minimization oracle over a nonempty polytope.
pub trait LinearOracle {
    fn dim(&self) -> usize;
    /// A vertex minimizing `direction · y`.
    fn minimize(&self, direction: &[f64]) -> Result<Vec<f64>>;
}

/// `q(y) = linear·y + (alpha/2)·‖y − center‖²` over the oracle's region.
#[derive(Debug, Clone)]
pub struct QuadraticSubproblem {
    pub linear: Vec<f64>,
    pub center: Vec<f64>,
    pub alpha: f64,
}

impl QuadraticSubproblem {
    pub fn value(&self, y: &[f64]) -> f64 {
        let lin: f64 = self.linear.iter().zip(y).map(|(a, b)| a * b).sum();
        let sq: f64 = y.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        lin + 0.5 * self.alpha * sq
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        self.linear
            .iter()
            .zip(y.iter().zip(&self.center))
            .map(|(a, (yi, zi))| a + self.alpha * (yi - zi))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct QpResult {
    pub point: Vec<f64>,
    pub value: f64,
    /// Frank–Wolfe duality gap at `point`; an upper bound on `value − min q`.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 10_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn same_vertex(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9)
}

pub fn solve_qp_fw<O: LinearOracle + ?Sized>(
    sub: &QuadraticSubproblem,
    oracle: &O,
    tol: f64,
    max_iter: usize,
) -> Result<QpResult> {
    assert!(sub.alpha > 0.0, "regularization weight must be positive");
    let first = oracle.minimize(&sub.gradient(&sub.center))?;
    let mut active: Vec<(Vec<f64>, f64)> = vec![(first.clone(), 1.0)];
    let mut y = first;
    let mut gap = f64::INFINITY;
    let mut iterations = 0;

    while iterations < max_iter {
        let g = sub.gradient(&y);
        let s = oracle.minimize(&g)?;
        let gy = dot(&g, &y);
        gap = gy - dot(&g, &s);
        if gap <= tol {
            break;
        }
        iterations += 1;

        let (away_idx, away_val) = active
            .iter()
            .enumerate()
            .map(|(k, (v, _))| (k, dot(&g, v)))
            .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let away_gap = away_val - gy;

        let fw_step = gap >= away_gap || active.len() == 1;
        let (dir, gamma_max) = if fw_step {
            (s.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<_>>(), 1.0)
        } else {
            let w = active[away_idx].1;
            let v = &active[away_idx].0;
            (y.iter().zip(v).map(|(a, b)| a - b).collect(), w / (1.0 - w))
        };
        let slope = dot(&g, &dir);
        let curvature = sub.alpha * dot(&dir, &dir);
        if curvature <= 0.0 || slope >= 0.0 {
            break;
        }
        let gamma = (-slope / curvature).min(gamma_max);

        for (yi, di) in y.iter_mut().zip(&dir) {
            *yi += gamma * di;
        }
        if fw_step {
            for entry in active.iter_mut() {
                entry.1 *= 1.0 - gamma;
            }
            if let Some(entry) = active.iter_mut().find(|(v, _)| same_vertex(v, &s)) {
                entry.1 += gamma;
            } else {
                active.push((s, gamma));
            }
            if gamma >= 1.0 {
                active.retain(|(v, _)| same_vertex(v, &y));
                if let Some(entry) = active.first_mut() {
                    entry.1 = 1.0;
                }
            }
        } else {
            for entry in active.iter_mut() {
                entry.1 *= 1.0 + gamma;
            }
            active[away_idx].1 -= gamma;
            if gamma >= gamma_max {
                active.remove(away_idx);
            }
        }
        active.retain(|(_, w)| *w > 1e-14);
    }

    Ok(QpResult {
        value: sub.value(&y),
        point: y,
        gap,
        iterations,
        converged: gap <= tol,
    })
}

/// Euclidean projection: `argmin ‖y − x‖²`, i.e. `linear = 0, alpha = 2`.
pub fn project_euclidean<O: LinearOracle + ?Sized>(
    oracle: &O,
    x: &[f64],
    tol: f64,
) -> Result<QpResult> {
    let sub = QuadraticSubproblem { linear: vec![0.0; x.len()], center: x.to_vec(), alpha: 2.0 };
    solve_qp_fw(&sub, oracle, tol, DEFAULT_MAX_ITER)
}

/// Axis-aligned box, mostly for tests and simple regions.
#[derive(Debug, Clone)]
pub struct BoxOracle {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearOracle for BoxOracle {
    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vec<f64>> {
        Ok(direction
            .iter()
            .enumerate()
            .map(|(k, d)| if *d < 0.0 { self.upper[k] } else { self.lower[k] })
            .collect())
    }
}

/// Convex hull of an explicit vertex list.
#[derive(Debug, Clone)]
pub struct VertexOracle {
    pub vertices: Vec<Vec<f64>>,
}

impl LinearOracle for VertexOracle {
    fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    fn minimize(&self, direction: &[f64]) -> Result<Vec<f64>> {
        let best = self
            .vertices
            .iter()
            .min_by(|a, b| dot(direction, a).total_cmp(&dot(direction, b)))
            .ok_or(crate::error::Error::EmptyRelaxation)?;
        Ok(best.clone())
    }
}
