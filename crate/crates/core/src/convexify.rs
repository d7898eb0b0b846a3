//! Structural checks on finite games: complete and prescribed strategy
//! sets, k-restrictive-closedness and restrictive-closedness.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::io::format_point;
use crate::kernel::hull::hull_membership;
use crate::kernel::lp::{solve_lp, Direction, LinearProgram, LpStatus, Sense};
use crate::kernel::scalar::rat;
use crate::model::{FiniteGnep, Point, StrategyProfile};
use crate::rng::{substream, Stream};
use crate::Rational;

/// Random support directions tried per slice when the slice has dimension above two.
pub const SLICE_SAMPLES: usize = 64;
const SAMPLING_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMethod {
    /// Every prescribed slice of player `i` inside `conv(Xⱼ(x₋ⱼ))`.
    PrescribedSlices,
    /// Exact vertex enumeration of every slice of `conv(𝒮)`.
    SliceVertices,
    /// Random support directions on slices of dimension above two.
    SampledSliceVertices,
    /// Pseudo-joint constraints plus all-extreme projections.
    ZeroOne,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `point` lies in the prescribed set of player `i` but its block `j`
    /// is outside `conv(Xⱼ(x₋ⱼ))`.
    PrescribedSlice { i: usize, j: usize, point: StrategyProfile },
    /// `point` is an extreme point of the slice of `conv(𝒮)` at
    /// `point₋ᵢ` whose block `i` is outside `conv(Xᵢ(x₋ᵢ))`.
    SliceVertex { i: usize, point: StrategyProfile },
    /// `point ∈ 𝒮` with `point₋ᵢ ∈ rdom Xᵢ` but `pointᵢ ∉ Xᵢ(point₋ᵢ)`.
    NotPseudoJoint { i: usize, point: StrategyProfile },
    /// `block ∈ Pᵢ(𝒮)` lies in the hull of the other points of `Pᵢ(𝒮)`.
    InteriorProjection { i: usize, block: Point },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::PrescribedSlice { i, j, point } => write!(
                f,
                "point {point} is prescribed by player {} but block {} is outside conv(X_{}(x_-{}))",
                i + 1,
                j + 1,
                j + 1,
                j + 1
            ),
            Witness::SliceVertex { i, point } => write!(
                f,
                "extreme point {point} of the slice of conv(S) for player {} is not a strategy",
                i + 1
            ),
            Witness::NotPseudoJoint { i, point } => {
                write!(f, "point {point} of S is missing from the strategy set of player {}", i + 1)
            }
            Witness::InteriorProjection { i, block } => write!(
                f,
                "projection point {} of player {} is not extreme",
                format_point(block),
                i + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub method: CheckMethod,
    /// Slices examined (and, for sampled checks, support directions tried).
    pub slices: usize,
    pub samples: usize,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// `𝒮ᵢ = ∪_{x₋ᵢ ∈ rdom Xᵢ} Xᵢ(x₋ᵢ) × x₋ᵢ` and `𝒮 = ∪ᵢ 𝒮ᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteStrategySets {
    pub per_player: Vec<BTreeSet<StrategyProfile>>,
    pub union: BTreeSet<StrategyProfile>,
}

/// Refined domains of all players from one enumeration.
fn refined_domains(game: &FiniteGnep) -> Vec<BTreeSet<Vec<Point>>> {
    let feasible = game.enumerate_feasible_profiles();
    (0..game.num_players()).map(|i| feasible.iter().map(|x| x.rivals(i)).collect()).collect()
}

fn complete_from(game: &FiniteGnep, rdom: &[BTreeSet<Vec<Point>>]) -> CompleteStrategySets {
    let per_player: Vec<BTreeSet<StrategyProfile>> = rdom
        .iter()
        .enumerate()
        .map(|(i, keys)| {
            keys.iter()
                .flat_map(|r| {
                    game.strategy_set(i, r)
                        .into_iter()
                        .flatten()
                        .map(move |b| StrategyProfile::assemble(i, b.clone(), r))
                })
                .collect()
        })
        .collect();
    let union = per_player.iter().flatten().cloned().collect();
    CompleteStrategySets { per_player, union }
}

pub fn complete_strategy_sets(game: &FiniteGnep) -> CompleteStrategySets {
    complete_from(game, &refined_domains(game))
}

fn set_points(game: &FiniteGnep, j: usize, rivals: &[Point]) -> Vec<Point> {
    game.strategy_set(j, rivals).map(|s| s.iter().cloned().collect()).unwrap_or_default()
}

fn in_hull(p: &[Rational], points: &[Point]) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    hull_membership(p, points)
}

fn slice_with_domain(
    game: &FiniteGnep,
    rdom_i: &BTreeSet<Vec<Point>>,
    i: usize,
    j: usize,
    rivals_j: &[Point],
) -> Result<BTreeSet<Point>> {
    if i == j {
        return Ok(if rdom_i.contains(rivals_j) { set_points(game, j, rivals_j).into_iter().collect() } else {
            BTreeSet::new()
        });
    }
    let mut out = BTreeSet::new();
    for key in rdom_i {
        // Candidate full profile: block j from the key, block i from x₋ⱼ.
        let z = StrategyProfile::assemble(i, rivals_j[if i < j { i } else { i - 1 }].clone(), key);
        if z.rivals(j) != rivals_j {
            continue;
        }
        if in_hull(z.block(i), &set_points(game, i, key))? {
            out.insert(z.block(j).clone());
        }
    }
    Ok(out)
}

/// `{xⱼ : (xⱼ, x₋ⱼ) ∈ Preᵢ}`: candidate blocks `xⱼ` drawn from `rdom Xᵢ`
/// whose block `i` (pinned by `x₋ⱼ`) lies in `conv(Xᵢ(·))`.
///
/// For `i = j` this returns `Xⱼ(x₋ⱼ)`, whose hull is the slice.
pub fn prescribed_slice(game: &FiniteGnep, i: usize, j: usize, rivals_j: &[Point]) -> Result<BTreeSet<Point>> {
    let rdom_i = game.refined_domain(i)?;
    game.refined_domain(j)?;
    slice_with_domain(game, &rdom_i, i, j, rivals_j)
}

/// First item of `tasks` (in order) for which `f` yields a witness or an error.
fn first_witness<T, F>(tasks: &[T], f: F) -> Result<Option<Witness>>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<Witness>> + Sync,
{
    tasks
        .par_iter()
        .find_map_first(|t| match f(t) {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

fn report(witness: Option<Witness>, method: CheckMethod, slices: usize, samples: usize) -> CheckReport {
    let verdict = if witness.is_some() { Verdict::Fails } else { Verdict::Holds };
    CheckReport { verdict, witness, method, slices, samples }
}

/// `res Preᵢ x₋ⱼ ⊆ res Preⱼ x₋ⱼ` for all `i ≠ j` and `x₋ⱼ ∈ rdom Xⱼ`.
pub fn check_k_restrictive_closed(game: &FiniteGnep) -> Result<CheckReport> {
    let rdom = refined_domains(game);
    let n = game.num_players();
    let tasks: Vec<(usize, &Vec<Point>, usize)> = (0..n)
        .flat_map(|j| rdom[j].iter().flat_map(move |r| (0..n).filter(move |i| *i != j).map(move |i| (j, r, i))))
        .collect();
    let witness = first_witness(&tasks, |&(j, rivals_j, i)| {
        let hull = set_points(game, j, rivals_j);
        for xj in slice_with_domain(game, &rdom[i], i, j, rivals_j)? {
            if !in_hull(&xj, &hull)? {
                return Ok(Some(Witness::PrescribedSlice {
                    i,
                    j,
                    point: StrategyProfile::assemble(j, xj, rivals_j),
                }));
            }
        }
        Ok(None)
    })?;
    Ok(report(witness, CheckMethod::PrescribedSlices, tasks.len(), 0))
}

/// Convex-weight LP over `𝒮` with the rival coordinates pinned.
struct SliceLp {
    base: LinearProgram<Rational>,
    blocks: Vec<Point>,
}

impl SliceLp {
    fn new(points: &[StrategyProfile], i: usize, rivals: &[Point]) -> Self {
        let mut base =
            LinearProgram::new(Direction::Maximize, vec![rat(0); points.len()]).nonnegative();
        base.add_constraint(vec![rat(1); points.len()], Sense::Eq, rat(1));
        for (r, block) in rivals.iter().enumerate() {
            let player = if r < i { r } else { r + 1 };
            for (d, target) in block.iter().enumerate() {
                let row = points.iter().map(|s| s.block(player)[d].clone()).collect();
                base.add_constraint(row, Sense::Eq, target.clone());
            }
        }
        Self { base, blocks: points.iter().map(|s| s.block(i).clone()).collect() }
    }

    fn image(&self, lambda: &[Rational]) -> Point {
        let k = self.blocks.first().map_or(0, Vec::len);
        (0..k).map(|d| self.blocks.iter().zip(lambda).map(|(b, l)| &b[d] * l).sum()).collect()
    }

    /// Lexicographic maximizer of `dirs` over the slice; a vertex once the
    /// directions span the block space.
    fn lex_max(&self, dirs: &[Vec<Rational>]) -> Option<Point> {
        let mut lp = self.base.clone();
        let mut last = None;
        for d in dirs {
            let obj: Vec<Rational> =
                self.blocks.iter().map(|b| b.iter().zip(d).map(|(x, w)| x * w).sum()).collect();
            lp.objective = obj.clone();
            let sol = solve_lp(&lp);
            if sol.status != LpStatus::Optimal {
                return None;
            }
            lp.add_constraint(obj, Sense::Eq, sol.objective.clone());
            last = Some(sol.primal);
        }
        last.map(|l| self.image(&l))
    }
}

fn unit(k: usize, d: usize, sign: i64) -> Vec<Rational> {
    (0..k).map(|e| if e == d { rat(sign) } else { rat(0) }).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Vertices strictly to the right of the directed edge `a → b`.
fn wrap(lp: &SliceLp, a: &Point, b: &Point, out: &mut Vec<Point>) {
    let normal = vec![&b[1] - &a[1], &a[0] - &b[0]];
    let along = vec![&b[0] - &a[0], &b[1] - &a[1]];
    let Some(w) = lp.lex_max(&[normal.clone(), along]) else { return };
    if dot(&normal, &w) > dot(&normal, a) {
        wrap(lp, a, &w, out);
        out.push(w.clone());
        wrap(lp, &w, b, out);
    }
}

/// Vertices of a slice of dimension at most two, in boundary order.
fn slice_vertices(lp: &SliceLp, k: usize) -> Vec<Point> {
    match k {
        0 => lp.lex_max(&[]).into_iter().collect(),
        1 => {
            let hi = lp.lex_max(&[unit(1, 0, 1)]);
            let lo = lp.lex_max(&[unit(1, 0, -1)]);
            let mut v: Vec<Point> = hi.into_iter().chain(lo).collect();
            v.dedup();
            v
        }
        2 => {
            let Some(u) = lp.lex_max(&[unit(2, 0, 1), unit(2, 1, 1)]) else { return Vec::new() };
            let v = lp.lex_max(&[unit(2, 0, -1), unit(2, 1, -1)]).expect("slice is nonempty");
            if u == v {
                return vec![u];
            }
            let mut out = vec![u.clone()];
            wrap(lp, &u, &v, &mut out);
            out.push(v.clone());
            wrap(lp, &v, &u, &mut out);
            out
        }
        _ => unreachable!("exact slice vertices only up to dimension two"),
    }
}

fn random_direction<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    loop {
        let d: Vec<i64> = (0..k).map(|_| rng.gen_range(-10..=10)).collect();
        if d.iter().any(|v| *v != 0) {
            return d.into_iter().map(rat).collect();
        }
    }
}

/// `E(res conv(𝒮) x₋ᵢ) ⊆ 𝒮ᵢ` for all `i` and `x₋ᵢ ∈ rdom Xᵢ`.
///
/// Exact when every block has dimension at most two; otherwise vertices are
/// sampled through random support directions and a clean run is undecided.
pub fn check_restrictive_closed(game: &FiniteGnep) -> Result<CheckReport> {
    let rdom = refined_domains(game);
    let complete = complete_from(game, &rdom);
    let points: Vec<StrategyProfile> = complete.union.iter().cloned().collect();
    let dims = game.dims();
    let tasks: Vec<(usize, usize, &Vec<Point>)> =
        rdom.iter().enumerate().flat_map(|(i, keys)| keys.iter().enumerate().map(move |(t, r)| (i, t, r))).collect();
    let witness = first_witness(&tasks, |&(i, t, rivals)| {
        let lp = SliceLp::new(&points, i, rivals);
        let members = game.strategy_set(i, rivals);
        let is_strategy = |v: &Point| members.is_some_and(|s| s.contains(v));
        let k = dims[i];
        let candidates: Vec<Point> = if k <= 2 {
            slice_vertices(&lp, k)
        } else {
            let mut rng = substream(SAMPLING_SEED, Stream::Sampling, ((i as u64) << 32) | t as u64);
            (0..SLICE_SAMPLES)
                .filter_map(|_| {
                    let mut dirs = vec![random_direction(&mut rng, k)];
                    dirs.extend((0..k).map(|d| unit(k, d, 1)));
                    lp.lex_max(&dirs)
                })
                .collect()
        };
        Ok(candidates
            .into_iter()
            .find(|v| !is_strategy(v))
            .map(|v| Witness::SliceVertex { i, point: StrategyProfile::assemble(i, v, rivals) }))
    })?;
    let sampled = dims.iter().any(|k| *k > 2);
    let sampled_slices = tasks.iter().filter(|(i, _, _)| dims[*i] > 2).count();
    let mut r = report(
        witness,
        if sampled { CheckMethod::SampledSliceVertices } else { CheckMethod::SliceVertices },
        tasks.len(),
        sampled_slices * SLICE_SAMPLES,
    );
    if sampled && r.witness.is_none() {
        r.verdict = Verdict::Undecided;
    }
    Ok(r)
}

/// Pseudo-jointly-constrained with all-extreme projections; a sufficient
/// condition for restrictive-closedness.
pub fn zero_one_report(game: &FiniteGnep) -> Result<CheckReport> {
    let rdom = refined_domains(game);
    let complete = complete_from(game, &rdom);
    let n = game.num_players();
    for (i, dom) in rdom.iter().enumerate().take(n) {
        for s in &complete.union {
            let rivals = s.rivals(i);
            if dom.contains(&rivals) && !game.strategy_set(i, &rivals).is_some_and(|set| set.contains(s.block(i))) {
                let w = Witness::NotPseudoJoint { i, point: s.clone() };
                return Ok(report(Some(w), CheckMethod::ZeroOne, dom.len(), 0));
            }
        }
    }
    for i in 0..n {
        let proj: Vec<Point> = complete.union.iter().map(|s| s.block(i).clone()).collect::<BTreeSet<_>>().into_iter().collect();
        for (k, p) in proj.iter().enumerate() {
            let others: Vec<Point> = proj.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, q)| q.clone()).collect();
            if in_hull(p, &others)? {
                let w = Witness::InteriorProjection { i, block: p.clone() };
                return Ok(report(Some(w), CheckMethod::ZeroOne, 0, 0));
            }
        }
    }
    Ok(report(None, CheckMethod::ZeroOne, rdom.iter().map(BTreeSet::len).sum(), 0))
}

pub fn check_zero_one_sufficiency(game: &FiniteGnep) -> Result<bool> {
    Ok(zero_one_report(game)?.holds())
}

impl Witness {
    /// Re-derives the violation from scratch with exact hull tests.
    pub fn reverify(&self, game: &FiniteGnep) -> Result<bool> {
        match self {
            Witness::PrescribedSlice { i, j, point } => {
                let ri = point.rivals(*i);
                Ok(game.refined_domain(*i)?.contains(&ri)
                    && game.refined_domain(*j)?.contains(&point.rivals(*j))
                    && in_hull(point.block(*i), &set_points(game, *i, &ri))?
                    && !in_hull(point.block(*j), &set_points(game, *j, &point.rivals(*j)))?)
            }
            Witness::SliceVertex { i, point } => {
                let s: Vec<Point> = complete_strategy_sets(game).union.iter().map(StrategyProfile::flatten).collect();
                Ok(in_hull(&point.flatten(), &s)?
                    && !in_hull(point.block(*i), &set_points(game, *i, &point.rivals(*i)))?)
            }
            Witness::NotPseudoJoint { i, point } => {
                let ri = point.rivals(*i);
                Ok(complete_strategy_sets(game).union.contains(point)
                    && game.refined_domain(*i)?.contains(&ri)
                    && !game.strategy_set(*i, &ri).is_some_and(|s| s.contains(point.block(*i))))
            }
            Witness::InteriorProjection { i, block } => {
                let others: BTreeSet<Point> = complete_strategy_sets(game)
                    .union
                    .iter()
                    .map(|s| s.block(*i).clone())
                    .filter(|b| b != block)
                    .collect();
                let others: Vec<Point> = others.into_iter().collect();
                in_hull(block, &others)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::kernel::ratio;

    fn pts(v: &[i64]) -> BTreeSet<Point> {
        v.iter().map(|a| vec![rat(*a)]).collect()
    }

    #[test]
    fn jointly_constrained_complete_sets_equal_x() {
        let g = fixtures::rectangle();
        let c = complete_strategy_sets(&g);
        let x = g.enumerate_feasible_profiles();
        assert_eq!(c.union, x);
        assert!(c.per_player.iter().all(|s| *s == x));
    }

    #[test]
    fn empty_game_has_empty_sets() {
        let g = FiniteGnep::new(vec![1, 1], vec![Default::default(), Default::default()]).unwrap();
        let c = complete_strategy_sets(&g);
        assert!(c.union.is_empty());
        assert!(check_zero_one_sufficiency(&g).unwrap());
    }

    #[test]
    fn exa_sjc_slices() {
        let g = fixtures::exa_sjc();
        let two = vec![vec![rat(2)]];
        assert_eq!(prescribed_slice(&g, 0, 1, &two).unwrap(), pts(&[1, 2]));
        assert_eq!(prescribed_slice(&g, 1, 1, &two).unwrap(), pts(&[1]));
    }

    #[test]
    fn exa_sjc_is_not_k_restrictive_closed() {
        let g = fixtures::exa_sjc();
        let r = check_k_restrictive_closed(&g).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        assert_eq!(w, Witness::PrescribedSlice { i: 0, j: 1, point: StrategyProfile::from_ints(&[&[2], &[2]]) });
        assert!(w.reverify(&g).unwrap());
    }

    #[test]
    fn kovskoe_fails_at_the_middle_column() {
        let g = fixtures::kovskoe();
        let r = check_k_restrictive_closed(&g).unwrap();
        match r.witness.unwrap() {
            Witness::PrescribedSlice { j, point, .. } => {
                assert_eq!(j, 1);
                assert_eq!(point.block(0), &vec![rat(3)]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(check_restrictive_closed(&g).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn joint_constr_fixture_has_vertex_two_eight_thirds() {
        let g = fixtures::exa_joint_constr();
        let r = check_restrictive_closed(&g).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        let expect = StrategyProfile::new(vec![vec![rat(2)], vec![ratio(8, 3)]]);
        assert_eq!(w, Witness::SliceVertex { i: 1, point: expect });
        assert!(w.reverify(&g).unwrap());
    }

    #[test]
    fn rectangle_is_closed_both_ways() {
        let g = fixtures::rectangle();
        assert!(check_restrictive_closed(&g).unwrap().holds());
        assert!(check_k_restrictive_closed(&g).unwrap().holds());
    }

    #[test]
    fn zero_one_fixture_is_sufficient() {
        assert!(check_zero_one_sufficiency(&fixtures::zero_one_congestion()).unwrap());
        assert!(check_restrictive_closed(&fixtures::zero_one_congestion()).unwrap().holds());
        let r = zero_one_report(&fixtures::exa_sjc()).unwrap();
        assert_eq!(r.witness, Some(Witness::InteriorProjection { i: 0, block: vec![rat(2)] }));
    }

    #[test]
    fn square_slice_vertices_in_order() {
        let sq: Vec<StrategyProfile> = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)]
            .iter()
            .map(|&(a, b)| StrategyProfile::from_ints(&[&[a, b], &[0]]))
            .collect();
        let lp = SliceLp::new(&sq, 0, &[vec![rat(0)]]);
        let v = slice_vertices(&lp, 2);
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(v.len(), 4);
        assert_eq!(
            sorted,
            vec![vec![rat(0), rat(0)], vec![rat(0), rat(2)], vec![rat(2), rat(0)], vec![rat(2), rat(2)]]
        );
    }
}
