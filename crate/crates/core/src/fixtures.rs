//! Small games used throughout the tests and the CLI examples.

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::flowgame::{CdfgInstance, PlayerCost, PlayerSpec};
use crate::io::{game_from_point_set_json, instance_from_json};
use crate::kernel::scalar::rat;
use crate::model::{integer_box, FiniteGnep, StrategyProfile};
use crate::Rational;

pub const EXA_SJC: &str = include_str!("../fixtures/exa_sjc.json");
pub const KOVSKOE: &str = include_str!("../fixtures/kovskoe.json");
pub const EXA_JOINT_CONSTR: &str = include_str!("../fixtures/exa_joint_constr.json");
pub const RECTANGLE: &str = include_str!("../fixtures/rectangle.json");
pub const EXA_NOT_JC: &str = include_str!("../fixtures/exa_not_jc.json");
pub const ZERO_ONE_CONGESTION: &str = include_str!("../fixtures/zero_one_congestion.json");
pub const FIGURE_CDFG: &str = include_str!("../fixtures/figure_cdfg.json");

fn load(text: &str) -> FiniteGnep {
    game_from_point_set_json(text).expect("bundled fixture parses")
}

/// `X = {(2,1),(1,2),(4,2),(4,4)}`, jointly constrained.
pub fn exa_sjc() -> FiniteGnep {
    load(EXA_SJC)
}

/// `X = {1,5}×{1,…,4} ∪ {(3,1)}`, jointly constrained.
pub fn kovskoe() -> FiniteGnep {
    load(KOVSKOE)
}

/// `X = {(1,2),(2,2),(4,2),(4,4)}`, jointly constrained.
pub fn exa_joint_constr() -> FiniteGnep {
    load(EXA_JOINT_CONSTR)
}

/// `X = {(1,1),(4,1),(1,3),(4,3)}`, jointly constrained.
pub fn rectangle() -> FiniteGnep {
    load(RECTANGLE)
}

/// Half-integral table game; coordinates are approximate.
pub fn exa_not_jc() -> FiniteGnep {
    load(EXA_NOT_JC)
}

/// 0/1 jointly constrained congestion game with cost `Σⱼ ℓⱼ(x)·xᵢⱼ`.
pub fn zero_one_congestion() -> FiniteGnep {
    load(ZERO_ONE_CONGESTION).with_cost(|i, x| {
        let load: Vec<Rational> = (0..2).map(|j| x.block(0)[j].clone() + x.block(1)[j].clone()).collect();
        Ok(load.iter().zip(x.block(i)).map(|(l, v)| l * v).sum())
    })
}

fn int_exponent(v: &Rational) -> Result<i32> {
    if !v.is_integer() {
        return Err(Error::Cost(format!("non-integral exponent {v}")));
    }
    v.to_integer().to_i32().ok_or_else(|| Error::Cost(format!("exponent {v} out of range")))
}

/// Two scalar players on the box `[0,4]²`:
/// `X₁(x₂) = {x₁ ∈ ℤ : (x₁−2)² + (x₂−2)² ≤ 1}`,
/// `X₂(x₁) = {x₂ ∈ ℤ≥0 : x₂ + x₁ ≥ 2, 2x₂ − x₁ ≤ 5, x₂ + 2x₁ ≤ 5}`,
/// `π₁ = x₁x₂`, `π₂ = (1 + |x₂|)^(x₁−1)`.
pub fn concept_game() -> FiniteGnep {
    let grid = vec![integer_box(&[0], &[4]), integer_box(&[0], &[4])];
    let member = |i: usize, x: &StrategyProfile| {
        let x1 = &x.block(0)[0];
        let x2 = &x.block(1)[0];
        let two = rat(2);
        if i == 0 {
            let d1 = x1 - &two;
            let d2 = x2 - &two;
            &d1 * &d1 + &d2 * &d2 <= rat(1)
        } else {
            *x2 >= rat(0) && x2 + x1 >= two && rat(2) * x2 - x1 <= rat(5) && x2 + rat(2) * x1 <= rat(5)
        }
    };
    FiniteGnep::from_grid(vec![1, 1], &grid, member)
        .expect("grid game")
        .with_cost(|i, x| {
            let x1 = &x.block(0)[0];
            let x2 = &x.block(1)[0];
            if i == 0 {
                Ok(x1 * x2)
            } else {
                let base = rat(1) + x2.abs();
                Ok(base.pow(int_exponent(&(x1 - rat(1)))?))
            }
        })
}

/// Two-node graph with parallel `0 → 1` arcs and constant arc costs.
pub fn parallel_arcs(costs: &[i64], caps: &[i64], demand: i64, players: usize) -> CdfgInstance {
    let m = costs.len();
    CdfgInstance::new(
        2,
        vec![(0, 1); m],
        caps.to_vec(),
        vec![PlayerSpec { source: 0, sink: 1, demand }; players],
        vec![PlayerCost::Bilinear { c1: vec![vec![0; m]; m], c2: costs.to_vec() }; players],
    )
    .expect("valid parallel-arc instance")
}

/// Unit-capacity flow game whose relaxation `X̂` is strictly larger than `conv(X)`.
pub fn figure_cdfg() -> CdfgInstance {
    instance_from_json(FIGURE_CDFG).expect("bundled fixture parses")
}

/// Named paths of [`figure_cdfg`] as arc-flow vectors.
pub struct FigureCdfgPaths {
    /// Player 1 on the direct arc.
    pub x1_star: Vec<i64>,
    pub x1_upper: Vec<i64>,
    pub x1_lower: Vec<i64>,
    pub x2_upper: Vec<i64>,
    pub x2_lower: Vec<i64>,
}

pub fn figure_cdfg_paths() -> FigureCdfgPaths {
    let path = |arcs: &[usize]| {
        let mut v = vec![0; 17];
        for &a in arcs {
            v[a] = 1;
        }
        v
    };
    FigureCdfgPaths {
        x1_star: path(&[16]),
        x1_upper: path(&[1, 2, 3, 4, 15]),
        x1_lower: path(&[0, 5, 6, 7, 14]),
        x2_upper: path(&[10, 4, 9, 5, 13]),
        x2_lower: path(&[11, 7, 8, 2, 12]),
    }
}
