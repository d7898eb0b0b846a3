//! Seeded random instances in the style of the benchmark families.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::enumerate::find_joint_profile;
use super::instance::{
    CdfgInstance, GenParams, InstanceMeta, IntProfile, PlayerCost, PlayerSpec, SourceMode, WeightMode,
};
use super::mcf::min_cost_st_flow;
use super::relaxed::RelaxedJointSet;
use crate::error::{Error, Result};
use crate::rng::{stream, Stream};

/// Capacity redraws per range before the range grows by one.
pub const REASSIGNMENT_BUDGET: usize = 1000;
/// Range increments before generation gives up.
pub const RANGE_BUDGET: usize = 50;
const GRAPH_REDRAWS: usize = 1000;
const EXHAUSTIVE_NODE_LIMIT: usize = 10;
const EXHAUSTIVE_CAP: usize = 200_000;
pub const MAX_COST: i64 = 20;

/// Arc probability: 20/15/10 % for 10/15/20 nodes, `2/|V|` otherwise.
pub fn edge_probability(nodes: usize) -> f64 {
    match nodes {
        10 => 0.20,
        15 => 0.15,
        20 => 0.10,
        v => (2.0 / v as f64).min(1.0),
    }
}

fn reachable(nodes: usize, arcs: &[(usize, usize)], s: usize) -> Vec<bool> {
    let mut seen = vec![false; nodes];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in arcs {
            if a == u && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen
}

fn connected_pairs(nodes: usize, arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for s in 0..nodes {
        let r = reachable(nodes, arcs, s);
        pairs.extend((0..nodes).filter(|t| *t != s && r[*t]).map(|t| (s, t)));
    }
    pairs
}

fn draw_graph(nodes: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let p = edge_probability(nodes);
    let mut arcs = Vec::new();
    for a in 0..nodes {
        for b in 0..nodes {
            if a != b && rng.gen_bool(p) {
                arcs.push((a, b));
            }
        }
    }
    arcs
}

/// Sequential min-hop routing in each rotation of the player order.
pub fn greedy_routing(inst: &CdfgInstance) -> Option<IntProfile> {
    let n = inst.num_players();
    let hops = vec![1i64; inst.num_arcs()];
    for start in 0..n {
        let mut residual = inst.capacities.clone();
        let mut x = vec![Vec::new(); n];
        let mut ok = true;
        for step in 0..n {
            let i = (start + step) % n;
            let p = inst.players[i];
            match min_cost_st_flow(inst.nodes, &inst.arcs, &residual, &hops, p.source, p.sink, p.demand) {
                Some((f, _)) => {
                    for (r, v) in residual.iter_mut().zip(&f) {
                        *r -= v;
                    }
                    x[i] = f;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(x);
        }
    }
    None
}

/// Certifies `X ≠ ∅` by greedy routing, rules it out by LP infeasibility of
/// `X̂`, and falls back to exhaustive search on small graphs.
pub fn joint_set_nonempty(inst: &CdfgInstance) -> bool {
    if greedy_routing(inst).is_some() {
        return true;
    }
    if RelaxedJointSet::new(inst).is_empty_approx() {
        return false;
    }
    if inst.nodes <= EXHAUSTIVE_NODE_LIMIT {
        return matches!(find_joint_profile(inst, EXHAUSTIVE_CAP), Ok(Some(_)));
    }
    false
}

pub fn generate_instance(params: GenParams, seed: u64) -> Result<CdfgInstance> {
    if params.nodes < 2 {
        return Err(Error::Generation("need at least two nodes".into()));
    }
    if params.players == 0 {
        return Err(Error::Generation("need at least one player".into()));
    }
    let mut edge_rng = stream(seed, Stream::Edges);
    let mut arcs = Vec::new();
    let mut pairs = Vec::new();
    for _ in 0..GRAPH_REDRAWS {
        arcs = draw_graph(params.nodes, &mut edge_rng);
        pairs = connected_pairs(params.nodes, &arcs);
        if !pairs.is_empty() {
            break;
        }
    }
    if pairs.is_empty() {
        return Err(Error::Generation("no connected source-sink pair after graph redraws".into()));
    }
    let m = arcs.len();
    let n = params.players;

    let mut end_rng = stream(seed, Stream::Endpoints);
    let shared = pairs[end_rng.gen_range(0..pairs.len())];
    let endpoints: Vec<(usize, usize)> = (0..n)
        .map(|i| match params.source_mode {
            SourceMode::Single => shared,
            SourceMode::Multi if i == 0 => shared,
            SourceMode::Multi => pairs[end_rng.gen_range(0..pairs.len())],
        })
        .collect();

    let mut dem_rng = stream(seed, Stream::Demands);
    let demands: Vec<i64> = (0..n)
        .map(|_| match params.weight_mode {
            WeightMode::Unit => 1,
            WeightMode::Random => dem_rng.gen_range(1..=10),
        })
        .collect();
    let players: Vec<PlayerSpec> = endpoints
        .iter()
        .zip(&demands)
        .map(|(&(source, sink), &demand)| PlayerSpec { source, sink, demand })
        .collect();

    let mut cost_rng = stream(seed, Stream::Costs);
    let costs: Vec<PlayerCost> = (0..n)
        .map(|_| match params.weight_mode {
            WeightMode::Unit => PlayerCost::Congestion {
                diagonal: (0..m).map(|_| cost_rng.gen_range(0..=MAX_COST)).collect(),
            },
            WeightMode::Random => PlayerCost::Bilinear {
                c1: (0..m).map(|_| (0..m).map(|_| cost_rng.gen_range(0..=MAX_COST)).collect()).collect(),
                c2: (0..m).map(|_| cost_rng.gen_range(0..=MAX_COST)).collect(),
            },
        })
        .collect();

    let mut cap_rng = stream(seed, Stream::Capacities);
    let first = demands.iter().copied().max().unwrap_or(1).max(n as i64);
    let meta = InstanceMeta { seed: Some(seed), params: Some(params), label: None };
    for range in first..first + RANGE_BUDGET as i64 {
        for _ in 0..REASSIGNMENT_BUDGET {
            let capacities: Vec<i64> = (0..m).map(|_| cap_rng.gen_range(1..=range)).collect();
            let inst = CdfgInstance::new(params.nodes, arcs.clone(), capacities, players.clone(), costs.clone())?
                .with_meta(meta.clone());
            if joint_set_nonempty(&inst) {
                return Ok(inst);
            }
        }
    }
    Err(Error::Generation(format!(
        "no capacities with a nonempty joint strategy set within {RANGE_BUDGET} range increments"
    )))
}
