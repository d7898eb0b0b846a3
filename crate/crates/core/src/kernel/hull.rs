use super::lp::{solve_lp, Direction, LinearProgram, LpStatus, Sense};
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::Rational;

/// The convex-weight feasibility system `λ ≥ 0, Σλ = 1, Σ λ_s s = p`.
pub fn convex_weight_lp(p: &[Rational], points: &[Vec<Rational>]) -> LinearProgram<Rational> {
    let mut lp = LinearProgram::new(Direction::Minimize, vec![Rational::zero(); points.len()])
        .nonnegative();
    lp.add_constraint(vec![Rational::one(); points.len()], Sense::Eq, Rational::one());
    for (d, target) in p.iter().enumerate() {
        let row = points.iter().map(|s| s[d].clone()).collect();
        lp.add_constraint(row, Sense::Eq, target.clone());
    }
    lp
}

/// Exact test of `p ∈ conv(points)`.
pub fn hull_membership(p: &[Rational], points: &[Vec<Rational>]) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::Input("hull membership against an empty point set".into()));
    }
    if let Some(bad) = points.iter().find(|s| s.len() != p.len()) {
        return Err(Error::Dimension(format!(
            "point of dimension {} tested against a point of dimension {}",
            p.len(),
            bad.len()
        )));
    }
    if points.iter().any(|s| s.as_slice() == p) {
        return Ok(true);
    }
    if p.len() == 1 {
        let lo = points.iter().map(|s| &s[0]).min().expect("nonempty");
        let hi = points.iter().map(|s| &s[0]).max().expect("nonempty");
        return Ok(*lo <= p[0] && p[0] <= *hi);
    }
    Ok(solve_lp(&convex_weight_lp(p, points)).status == LpStatus::Optimal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::{rat, ratio};

    fn pts(v: &[(i64, i64)]) -> Vec<Vec<Rational>> {
        v.iter().map(|&(a, b)| vec![rat(a), rat(b)]).collect()
    }

    #[test]
    fn member_point_and_midpoint() {
        let s = pts(&[(0, 0), (2, 0), (0, 2)]);
        assert!(hull_membership(&[rat(2), rat(0)], &s).unwrap());
        assert!(hull_membership(&[rat(1), rat(1)], &s).unwrap());
        assert!(!hull_membership(&[rat(1), ratio(11, 10)], &s).unwrap());
    }

    #[test]
    fn quadrilateral_interior() {
        let s = pts(&[(2, 1), (1, 2), (4, 2), (4, 4)]);
        assert!(hull_membership(&[rat(3), rat(3)], &s).unwrap());
        assert!(!hull_membership(&[rat(1), rat(3)], &s).unwrap());
    }

    #[test]
    fn empty_set_is_an_error() {
        assert!(hull_membership(&[rat(0)], &[]).is_err());
    }

    #[test]
    fn one_dimensional_interval() {
        let s = vec![vec![rat(1)], vec![rat(4)]];
        assert!(hull_membership(&[rat(2)], &s).unwrap());
        assert!(!hull_membership(&[rat(5)], &s).unwrap());
    }
}
