//! Successive-shortest-path min-cost flow on small dense graphs.
//!
//! Arcs with negative cost are saturated up front; what remains is a
//! transshipment on a residual graph with nonnegative costs, solved with
//! Dijkstra on reduced costs.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub trait FlowValue:
    Copy + Debug + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    const ZERO: Self;
    const INF: Self;
    /// Strictly positive beyond rounding noise.
    fn positive(self) -> bool;
}

impl FlowValue for i64 {
    const ZERO: Self = 0;
    const INF: Self = i64::MAX / 4;
    fn positive(self) -> bool {
        self > 0
    }
}

impl FlowValue for f64 {
    const ZERO: Self = 0.0;
    const INF: Self = f64::INFINITY;
    fn positive(self) -> bool {
        self > 1e-12
    }
}

fn min<T: FlowValue>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Min-cost flow meeting node balances `supply` (positive = excess).
///
/// Returns `(arc flows, total cost)`, or `None` when no flow respects the
/// capacities.
pub fn min_cost_flow<T: FlowValue>(
    nodes: usize,
    arcs: &[(usize, usize)],
    caps: &[T],
    costs: &[T],
    supply: &[T],
) -> Option<(Vec<T>, T)> {
    let m = arcs.len();
    let mut flow: Vec<T> = (0..m)
        .map(|e| if costs[e] < T::ZERO && caps[e].positive() { caps[e] } else { T::ZERO })
        .collect();
    let mut excess = supply.to_vec();
    for (e, &(u, v)) in arcs.iter().enumerate() {
        excess[u] = excess[u] - flow[e];
        excess[v] = excess[v] + flow[e];
    }

    // Residual graph: arc 2e forward, 2e+1 backward, then super source/sink arcs.
    let src = nodes;
    let snk = nodes + 1;
    let total = nodes + 2;
    let mut to = Vec::with_capacity(2 * m + 2 * nodes);
    let mut from = Vec::with_capacity(2 * m + 2 * nodes);
    let mut res = Vec::with_capacity(2 * m + 2 * nodes);
    let mut cost = Vec::with_capacity(2 * m + 2 * nodes);
    for (e, &(u, v)) in arcs.iter().enumerate() {
        let cap = if caps[e] < T::ZERO { T::ZERO } else { caps[e] };
        from.push(u);
        to.push(v);
        res.push(cap - flow[e]);
        cost.push(costs[e]);
        from.push(v);
        to.push(u);
        res.push(flow[e]);
        cost.push(-costs[e]);
    }
    let mut need = T::ZERO;
    for (v, &ex) in excess.iter().enumerate() {
        if ex.positive() {
            from.push(src);
            to.push(v);
            res.push(ex);
            cost.push(T::ZERO);
            need = need + ex;
        } else if (-ex).positive() {
            from.push(v);
            to.push(snk);
            res.push(-ex);
            cost.push(T::ZERO);
        }
        // Reverse super arcs are never useful and are omitted.
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (k, &u) in from.iter().enumerate() {
        out[u].push(k);
    }
    let back = |k: usize| if k < 2 * m { Some(k ^ 1) } else { None };

    let mut potential = vec![T::ZERO; total];
    let mut guard = 0usize;
    while need.positive() {
        guard += 1;
        if guard > 100_000 {
            return None;
        }
        let mut dist = vec![T::INF; total];
        let mut pred: Vec<Option<usize>> = vec![None; total];
        let mut done = vec![false; total];
        dist[src] = T::ZERO;
        loop {
            let mut u = None;
            for v in 0..total {
                if !done[v] && dist[v] < T::INF && u.is_none_or(|w: usize| dist[v] < dist[w]) {
                    u = Some(v);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            for &k in &out[u] {
                if !res[k].positive() {
                    continue;
                }
                let v = to[k];
                let mut reduced = cost[k] + potential[u] - potential[v];
                if reduced < T::ZERO {
                    reduced = T::ZERO;
                }
                let nd = dist[u] + reduced;
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = Some(k);
                }
            }
        }
        if !(dist[snk] < T::INF) {
            return None;
        }
        for v in 0..total {
            potential[v] = potential[v] + min(dist[v], dist[snk]);
        }
        let mut push = need;
        let mut v = snk;
        while let Some(k) = pred[v] {
            push = min(push, res[k]);
            v = from[k];
        }
        let mut v = snk;
        while let Some(k) = pred[v] {
            res[k] = res[k] - push;
            if let Some(b) = back(k) {
                res[b] = res[b] + push;
            }
            v = from[k];
        }
        need = need - push;
    }

    for e in 0..m {
        let cap = if caps[e] < T::ZERO { T::ZERO } else { caps[e] };
        flow[e] = cap - res[2 * e];
    }
    let mut total_cost = T::ZERO;
    for e in 0..m {
        total_cost = total_cost + flow[e] * costs[e];
    }
    Some((flow, total_cost))
}

/// Single-commodity `s → t` flow of value `demand`.
pub fn min_cost_st_flow<T: FlowValue>(
    nodes: usize,
    arcs: &[(usize, usize)],
    caps: &[T],
    costs: &[T],
    source: usize,
    sink: usize,
    demand: T,
) -> Option<(Vec<T>, T)> {
    let mut supply = vec![T::ZERO; nodes];
    supply[source] = demand;
    supply[sink] = -demand;
    min_cost_flow(nodes, arcs, caps, costs, &supply)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_arcs_take_cheapest_first() {
        let arcs = [(0, 1), (0, 1)];
        let (f, c) = min_cost_st_flow(2, &arcs, &[1, 1], &[1, 3], 0, 1, 2).unwrap();
        assert_eq!((f, c), (vec![1, 1], 4));
        let (f, c) = min_cost_st_flow(2, &arcs, &[1, 1], &[1, 3], 0, 1, 1).unwrap();
        assert_eq!((f, c), (vec![1, 0], 1));
    }

    #[test]
    fn insufficient_capacity_is_infeasible() {
        let arcs = [(0, 1)];
        assert!(min_cost_st_flow(2, &arcs, &[1], &[1], 0, 1, 2).is_none());
        assert!(min_cost_st_flow(3, &arcs, &[5], &[1], 0, 2, 1).is_none());
    }

    #[test]
    fn negative_cycle_is_saturated() {
        // 0→1→2→0 cycle with total cost −1, plus a direct 0→2 arc.
        let arcs = [(0, 1), (1, 2), (2, 0), (0, 2)];
        let (f, c) = min_cost_flow(3, &arcs, &[1, 1, 1, 5], &[-2, 0, 1, 4], &[0, 0, 0]).unwrap();
        assert_eq!(f, vec![1, 1, 1, 0]);
        assert_eq!(c, -1);
    }

    #[test]
    fn fractional_capacities_in_floating_point() {
        let arcs = [(0, 1), (0, 1)];
        let (f, c) = min_cost_st_flow(2, &arcs, &[0.5, 2.0], &[1.0, 2.0], 0, 1, 1.0).unwrap();
        assert!((f[0] - 0.5).abs() < 1e-12 && (f[1] - 0.5).abs() < 1e-12);
        assert!((c - 1.5).abs() < 1e-12);
    }

    #[test]
    fn routes_around_through_longer_path() {
        // 0→1 direct cap 1 cost 10; 0→2→1 cap 2 cost 1+1.
        let arcs = [(0, 1), (0, 2), (2, 1)];
        let (f, c) = min_cost_st_flow(3, &arcs, &[1, 2, 2], &[10, 1, 1], 0, 1, 3).unwrap();
        assert_eq!(f, vec![1, 2, 2]);
        assert_eq!(c, 14);
    }
}
