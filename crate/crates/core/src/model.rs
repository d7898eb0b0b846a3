//! Finite-strategy GNEPs with table-valued strategy maps.
//!
//! Player `i`'s strategy map is a table from rival profiles `x₋ᵢ` (the other
//! blocks in player order) to a finite set of points `Xᵢ(x₋ᵢ)`; a rival
//! profile missing from the table has an empty strategy set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::scalar::rat;
use crate::Rational;

pub type Point = Vec<Rational>;

/// A block vector `x = (x₁,…,xₙ)`.
///
/// The derived ordering is lexicographic by block, then coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyProfile {
    blocks: Vec<Point>,
}

impl StrategyProfile {
    pub fn new(blocks: Vec<Point>) -> Self {
        Self { blocks }
    }

    pub fn from_ints(blocks: &[&[i64]]) -> Self {
        Self::new(blocks.iter().map(|b| b.iter().copied().map(rat).collect()).collect())
    }

    /// Reassembles `(xᵢ, x₋ᵢ)` from a block and the rival blocks in player order.
    pub fn assemble(i: usize, block: Point, rivals: &[Point]) -> Self {
        let mut blocks = Vec::with_capacity(rivals.len() + 1);
        blocks.extend_from_slice(&rivals[..i]);
        blocks.push(block);
        blocks.extend_from_slice(&rivals[i..]);
        Self { blocks }
    }

    pub fn num_players(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Point] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Point {
        &self.blocks[i]
    }

    pub fn rivals(&self, i: usize) -> Vec<Point> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| b.clone())
            .collect()
    }

    pub fn with_block(&self, i: usize, block: Point) -> Self {
        let mut blocks = self.blocks.clone();
        blocks[i] = block;
        Self { blocks }
    }

    pub fn flatten(&self) -> Point {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn into_blocks(self) -> Vec<Point> {
        self.blocks
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.blocks.iter().flatten().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub type CostFn = dyn Fn(usize, &StrategyProfile) -> Result<Rational> + Send + Sync;

pub type StrategyTable = BTreeMap<Vec<Point>, BTreeSet<Point>>;

/// Explicit finite-strategy GNEP. Immutable after construction.
#[derive(Clone)]
pub struct FiniteGnep {
    dims: Vec<usize>,
    tables: Vec<StrategyTable>,
    cost: Arc<CostFn>,
}

impl fmt::Debug for FiniteGnep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGnep").field("dims", &self.dims).field("tables", &self.tables).finish()
    }
}

impl FiniteGnep {
    /// Builds a game from explicit tables; costs default to zero.
    pub fn new(dims: Vec<usize>, tables: Vec<StrategyTable>) -> Result<Self> {
        if tables.len() != dims.len() {
            return Err(Error::Dimension(format!(
                "{} strategy tables for {} players",
                tables.len(),
                dims.len()
            )));
        }
        for (i, table) in tables.iter().enumerate() {
            for (key, set) in table {
                if key.len() + 1 != dims.len() {
                    return Err(Error::Dimension(format!(
                        "player {i}: rival key has {} blocks, expected {}",
                        key.len(),
                        dims.len() - 1
                    )));
                }
                for (pos, block) in key.iter().enumerate() {
                    let j = if pos < i { pos } else { pos + 1 };
                    if block.len() != dims[j] {
                        return Err(Error::Dimension(format!(
                            "player {i}: rival block of player {j} has length {}",
                            block.len()
                        )));
                    }
                }
                if let Some(p) = set.iter().find(|p| p.len() != dims[i]) {
                    return Err(Error::Dimension(format!(
                        "player {i}: strategy of length {} but k_{i} = {}",
                        p.len(),
                        dims[i]
                    )));
                }
            }
        }
        let tables = tables
            .into_iter()
            .map(|t| t.into_iter().filter(|(_, s)| !s.is_empty()).collect())
            .collect();
        Ok(Self { dims, tables, cost: Arc::new(|_, _| Ok(Rational::from_integer(0.into()))) })
    }

    pub fn with_cost<F>(mut self, cost: F) -> Self
    where
        F: Fn(usize, &StrategyProfile) -> Result<Rational> + Send + Sync + 'static,
    {
        self.cost = Arc::new(cost);
        self
    }

    /// Jointly constrained game: `Xᵢ(x₋ᵢ) = {xᵢ : (xᵢ, x₋ᵢ) ∈ X}`.
    pub fn jointly_constrained<I>(dims: Vec<usize>, joint: I) -> Result<Self>
    where
        I: IntoIterator<Item = StrategyProfile>,
    {
        let n = dims.len();
        let mut tables: Vec<StrategyTable> = vec![BTreeMap::new(); n];
        for x in joint {
            if x.num_players() != n {
                return Err(Error::Dimension(format!(
                    "joint profile with {} blocks for {n} players",
                    x.num_players()
                )));
            }
            for (i, table) in tables.iter_mut().enumerate() {
                table.entry(x.rivals(i)).or_default().insert(x.block(i).clone());
            }
        }
        Self::new(dims, tables)
    }

    /// Evaluates a constraint system on a finite grid of candidate blocks.
    ///
    /// `grid[i]` lists the candidate blocks of player `i`; `member(i, x)`
    /// decides `xᵢ ∈ Xᵢ(x₋ᵢ)`.
    pub fn from_grid<F>(dims: Vec<usize>, grid: &[Vec<Point>], member: F) -> Result<Self>
    where
        F: Fn(usize, &StrategyProfile) -> bool,
    {
        let n = dims.len();
        if grid.len() != n {
            return Err(Error::Dimension(format!("{} grids for {n} players", grid.len())));
        }
        let mut tables: Vec<StrategyTable> = vec![BTreeMap::new(); n];
        for (i, table) in tables.iter_mut().enumerate() {
            let rival_grids: Vec<&Vec<Point>> =
                grid.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g).collect();
            for rivals in cartesian(&rival_grids) {
                let set: BTreeSet<Point> = grid[i]
                    .iter()
                    .filter(|b| member(i, &StrategyProfile::assemble(i, (*b).clone(), &rivals)))
                    .cloned()
                    .collect();
                if !set.is_empty() {
                    table.insert(rivals, set);
                }
            }
        }
        Self::new(dims, tables)
    }

    pub fn num_players(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn table(&self, i: usize) -> &StrategyTable {
        &self.tables[i]
    }

    /// `Xᵢ(x₋ᵢ)`, or `None` when empty.
    pub fn strategy_set(&self, i: usize, rivals: &[Point]) -> Option<&BTreeSet<Point>> {
        self.tables[i].get(rivals)
    }

    pub fn check_profile(&self, x: &StrategyProfile) -> Result<()> {
        if x.num_players() != self.num_players() {
            return Err(Error::Dimension(format!(
                "profile has {} blocks, game has {} players",
                x.num_players(),
                self.num_players()
            )));
        }
        for (i, (b, k)) in x.blocks().iter().zip(&self.dims).enumerate() {
            if b.len() != *k {
                return Err(Error::Dimension(format!(
                    "block {i} has length {}, expected {k}",
                    b.len()
                )));
            }
        }
        Ok(())
    }

    fn check_player(&self, i: usize) -> Result<()> {
        if i >= self.num_players() {
            return Err(Error::PlayerIndex { index: i, players: self.num_players() });
        }
        Ok(())
    }

    /// `x ∈ X(x)`, i.e. `xᵢ ∈ Xᵢ(x₋ᵢ)` for every player.
    pub fn is_feasible(&self, x: &StrategyProfile) -> Result<bool> {
        self.check_profile(x)?;
        Ok((0..self.num_players()).all(|i| {
            self.strategy_set(i, &x.rivals(i)).is_some_and(|s| s.contains(x.block(i)))
        }))
    }

    /// All `x` with `x ∈ X(x)`, in lexicographic order.
    pub fn enumerate_feasible_profiles(&self) -> BTreeSet<StrategyProfile> {
        if self.num_players() == 0 {
            return BTreeSet::new();
        }
        // Every feasible profile appears as (block, key) in player 0's table.
        let mut out = BTreeSet::new();
        for (rivals, set) in &self.tables[0] {
            for block in set {
                let x = StrategyProfile::assemble(0, block.clone(), rivals);
                if self.is_feasible(&x).unwrap_or(false) {
                    out.insert(x);
                }
            }
        }
        out
    }

    /// `rdom Xᵢ`: rival profiles that extend to a feasible joint profile.
    pub fn refined_domain(&self, i: usize) -> Result<BTreeSet<Vec<Point>>> {
        self.check_player(i)?;
        Ok(self.enumerate_feasible_profiles().iter().map(|x| x.rivals(i)).collect())
    }

    pub fn player_cost(&self, i: usize, x: &StrategyProfile) -> Result<Rational> {
        self.check_player(i)?;
        self.check_profile(x)?;
        (self.cost)(i, x)
    }
}

/// Cartesian product of point lists, in lexicographic order.
pub(crate) fn cartesian(lists: &[&Vec<Point>]) -> Vec<Vec<Point>> {
    let mut acc: Vec<Vec<Point>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for p in list.iter() {
                let mut v = prefix.clone();
                v.push(p.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Integral points of a box, lexicographic.
pub fn integer_box(lower: &[i64], upper: &[i64]) -> Vec<Point> {
    let axes: Vec<Vec<Point>> = lower
        .iter()
        .zip(upper)
        .map(|(&l, &u)| (l..=u).map(|v| vec![rat(v)]).collect())
        .collect();
    let refs: Vec<&Vec<Point>> = axes.iter().collect();
    cartesian(&refs).into_iter().map(|parts| parts.into_iter().flatten().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn p(v: &[i64]) -> StrategyProfile {
        StrategyProfile::new(v.iter().map(|&a| vec![rat(a)]).collect())
    }

    #[test]
    fn concept_game_feasibility() {
        let g = fixtures::concept_game();
        assert!(g.is_feasible(&p(&[2, 1])).unwrap());
        assert!(!g.is_feasible(&p(&[2, 3])).unwrap());
        assert!(g.is_feasible(&StrategyProfile::from_ints(&[&[1, 2]])).is_err());
    }

    #[test]
    fn concept_game_enumeration_and_domains() {
        let g = fixtures::concept_game();
        let all: Vec<_> = g.enumerate_feasible_profiles().into_iter().collect();
        assert_eq!(all, vec![p(&[1, 2]), p(&[2, 1])]);
        let r2: Vec<_> = g.refined_domain(1).unwrap().into_iter().collect();
        assert_eq!(r2, vec![vec![vec![rat(1)]], vec![vec![rat(2)]]]);
        // rdom X₁ from direct enumeration: x₂ = 3 is excluded since x₂ + 2x̃₁ ≤ 5 fails.
        let r1: Vec<_> = g.refined_domain(0).unwrap().into_iter().collect();
        assert_eq!(r1, vec![vec![vec![rat(1)]], vec![vec![rat(2)]]]);
    }

    #[test]
    fn concept_game_costs() {
        let g = fixtures::concept_game();
        assert_eq!(g.player_cost(0, &p(&[2, 1])).unwrap(), rat(2));
        assert_eq!(g.player_cost(1, &p(&[1, 3])).unwrap(), rat(1));
        assert_eq!(g.player_cost(1, &p(&[0, 1])).unwrap(), crate::kernel::ratio(1, 2));
    }

    #[test]
    fn single_player_tables() {
        let mut t = BTreeMap::new();
        t.insert(Vec::new(), [vec![rat(0)], vec![rat(1)]].into_iter().collect());
        let g = FiniteGnep::new(vec![1], vec![t]).unwrap();
        let all: Vec<_> = g.enumerate_feasible_profiles().into_iter().collect();
        assert_eq!(all, vec![p(&[0]), p(&[1])]);
        assert_eq!(g.refined_domain(0).unwrap().len(), 1);

        let empty = FiniteGnep::new(vec![1], vec![BTreeMap::new()]).unwrap();
        assert!(empty.enumerate_feasible_profiles().is_empty());
        assert!(empty.refined_domain(0).unwrap().is_empty());
    }

    #[test]
    fn rejects_wrong_point_dimension() {
        let mut t = BTreeMap::new();
        t.insert(Vec::new(), [vec![rat(0), rat(1)]].into_iter().collect());
        assert!(FiniteGnep::new(vec![1], vec![t]).is_err());
    }

    #[test]
    fn feasible_profiles_lie_in_refined_domains() {
        for g in [fixtures::concept_game(), fixtures::exa_sjc(), fixtures::exa_not_jc()] {
            let feasible = g.enumerate_feasible_profiles();
            for i in 0..g.num_players() {
                let rdom = g.refined_domain(i).unwrap();
                for x in &feasible {
                    assert!(rdom.contains(&x.rivals(i)));
                }
                // Refined domain sits inside the standard domain.
                for key in &rdom {
                    assert!(g.strategy_set(i, key).is_some());
                }
            }
        }
    }
}
