use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source, sink and integral demand of one player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerSpec {
    pub source: usize,
    pub sink: usize,
    pub demand: i64,
}

/// Per-player cost data; in both variants the cost is linear in the player's
/// own flow with a coefficient vector affine in the rivals' total load `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlayerCost {
    /// `ℓᵀ C¹ x + C²ᵀ x`.
    Bilinear { c1: Vec<Vec<i64>>, c2: Vec<i64> },
    /// `(1 + ℓ)ᵀ diag(d) x`.
    Congestion { diagonal: Vec<i64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    Single,
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Unit,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub nodes: usize,
    pub players: usize,
    pub source_mode: SourceMode,
    pub weight_mode: WeightMode,
}

impl GenParams {
    /// The `(|N|,|V|,a,b)` label used in benchmark tables.
    pub fn type_label(&self) -> String {
        let a = match self.source_mode {
            SourceMode::Single => "s",
            SourceMode::Multi => "m",
        };
        let b = match self.weight_mode {
            WeightMode::Unit => 1,
            WeightMode::Random => 10,
        };
        format!("({},{},{a},{b})", self.players, self.nodes)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GenParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Capacitated discrete flow game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdfgInstance {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
    pub capacities: Vec<i64>,
    pub players: Vec<PlayerSpec>,
    pub costs: Vec<PlayerCost>,
    #[serde(default)]
    pub meta: InstanceMeta,
}

/// Integral joint profile: one arc-flow vector per player.
pub type IntProfile = Vec<Vec<i64>>;

/// Arc-incidence matrix: `+1` at the tail, `−1` at the head of each arc.
pub fn build_incidence(nodes: usize, arcs: &[(usize, usize)]) -> Result<Vec<Vec<i64>>> {
    if arcs.is_empty() {
        return Err(Error::Input("graph has no arcs".into()));
    }
    let mut a = vec![vec![0; arcs.len()]; nodes];
    for (e, &(u, v)) in arcs.iter().enumerate() {
        if u == v {
            return Err(Error::Input(format!("arc {e} is a self-loop at node {u}")));
        }
        if u >= nodes || v >= nodes {
            return Err(Error::Input(format!("arc {e} = ({u},{v}) leaves the node range 0..{nodes}")));
        }
        a[u][e] = 1;
        a[v][e] = -1;
    }
    Ok(a)
}

impl CdfgInstance {
    pub fn new(
        nodes: usize,
        arcs: Vec<(usize, usize)>,
        capacities: Vec<i64>,
        players: Vec<PlayerSpec>,
        costs: Vec<PlayerCost>,
    ) -> Result<Self> {
        let inst = Self { nodes, arcs, capacities, players, costs, meta: InstanceMeta::default() };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_meta(mut self, meta: InstanceMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        build_incidence(self.nodes, &self.arcs)?;
        let m = self.arcs.len();
        if self.capacities.len() != m {
            return Err(Error::Dimension(format!("{} capacities for {m} arcs", self.capacities.len())));
        }
        if let Some(c) = self.capacities.iter().find(|c| **c < 0) {
            return Err(Error::Input(format!("negative capacity {c}")));
        }
        if self.players.is_empty() {
            return Err(Error::Input("instance has no players".into()));
        }
        if self.costs.len() != self.players.len() {
            return Err(Error::Dimension(format!(
                "{} cost blocks for {} players",
                self.costs.len(),
                self.players.len()
            )));
        }
        for (i, p) in self.players.iter().enumerate() {
            if p.source >= self.nodes || p.sink >= self.nodes {
                return Err(Error::Input(format!("player {i} endpoint outside the node range")));
            }
            if p.source == p.sink {
                return Err(Error::Input(format!("player {i} has source = sink")));
            }
            if p.demand < 0 {
                return Err(Error::Input(format!("player {i} has negative demand")));
            }
        }
        for (i, c) in self.costs.iter().enumerate() {
            let ok = match c {
                PlayerCost::Bilinear { c1, c2 } => {
                    c2.len() == m && c1.len() == m && c1.iter().all(|r| r.len() == m)
                }
                PlayerCost::Congestion { diagonal } => diagonal.len() == m,
            };
            if !ok {
                return Err(Error::Dimension(format!("cost block of player {i} is not sized for {m} arcs")));
            }
        }
        Ok(())
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    /// Total number of coordinates `k = n·m`.
    pub fn dim(&self) -> usize {
        self.num_arcs() * self.num_players()
    }

    pub fn incidence(&self) -> Vec<Vec<i64>> {
        build_incidence(self.nodes, &self.arcs).expect("validated instance")
    }

    /// `bᵢ`: `dᵢ` at the source, `−dᵢ` at the sink.
    pub fn demand_vector(&self, i: usize) -> Vec<i64> {
        let p = self.players[i];
        let mut b = vec![0; self.nodes];
        b[p.source] = p.demand;
        b[p.sink] = -p.demand;
        b
    }

    /// `max(n, d₁, …, dₙ)`, the range used for capacities and random starts.
    pub fn scale(&self) -> i64 {
        self.players.iter().map(|p| p.demand).max().unwrap_or(0).max(self.num_players() as i64)
    }

    /// Whether every player uses the unit-demand congestion cost form.
    pub fn is_congestion(&self) -> bool {
        self.costs.iter().all(|c| matches!(c, PlayerCost::Congestion { .. }))
    }

    pub fn check_profile<T>(&self, x: &[Vec<T>]) -> Result<()> {
        if x.len() != self.num_players() {
            return Err(Error::Dimension(format!(
                "profile has {} blocks for {} players",
                x.len(),
                self.num_players()
            )));
        }
        if let Some((i, b)) = x.iter().enumerate().find(|(_, b)| b.len() != self.num_arcs()) {
            return Err(Error::Dimension(format!(
                "block {i} has {} entries for {} arcs",
                b.len(),
                self.num_arcs()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_player(&self, i: usize) -> Result<()> {
        if i >= self.num_players() {
            return Err(Error::PlayerIndex { index: i, players: self.num_players() });
        }
        Ok(())
    }

    /// `Σ_{j≠i} xⱼ`.
    pub fn rival_load<T>(&self, i: usize, x: &[Vec<T>]) -> Vec<T>
    where
        T: Copy + std::ops::Add<Output = T> + Default,
    {
        let mut load = vec![T::default(); self.num_arcs()];
        for (j, xj) in x.iter().enumerate() {
            if j != i {
                for (l, v) in load.iter_mut().zip(xj) {
                    *l = *l + *v;
                }
            }
        }
        load
    }

    /// `Cᵢ(x₋ᵢ)` from the rivals' load, exact.
    pub fn cost_vector(&self, i: usize, load: &[i64]) -> Vec<i64> {
        match &self.costs[i] {
            PlayerCost::Bilinear { c1, c2 } => (0..self.num_arcs())
                .map(|a| c2[a] + (0..self.num_arcs()).map(|b| load[b] * c1[b][a]).sum::<i64>())
                .collect(),
            PlayerCost::Congestion { diagonal } => {
                diagonal.iter().zip(load).map(|(d, l)| d * (1 + l)).collect()
            }
        }
    }

    pub fn cost_vector_f64(&self, i: usize, load: &[f64]) -> Vec<f64> {
        match &self.costs[i] {
            PlayerCost::Bilinear { c1, c2 } => (0..self.num_arcs())
                .map(|a| {
                    c2[a] as f64 + (0..self.num_arcs()).map(|b| load[b] * c1[b][a] as f64).sum::<f64>()
                })
                .collect(),
            PlayerCost::Congestion { diagonal } => {
                diagonal.iter().zip(load).map(|(d, l)| *d as f64 * (1.0 + l)).collect()
            }
        }
    }

    /// `C¹ᵢ v`: the derivative of `Cᵢ(x₋ᵢ)ᵀ v` with respect to any rival block.
    pub fn load_sensitivity(&self, i: usize, v: &[f64]) -> Vec<f64> {
        match &self.costs[i] {
            PlayerCost::Bilinear { c1, .. } => c1
                .iter()
                .map(|row| row.iter().zip(v).map(|(c, x)| *c as f64 * x).sum())
                .collect(),
            PlayerCost::Congestion { diagonal } => {
                diagonal.iter().zip(v).map(|(d, x)| *d as f64 * x).collect()
            }
        }
    }

    /// `πᵢ(x)` for an integral profile.
    pub fn player_cost(&self, i: usize, x: &[Vec<i64>]) -> Result<i64> {
        self.check_player(i)?;
        self.check_profile(x)?;
        let c = self.cost_vector(i, &self.rival_load(i, x));
        Ok(c.iter().zip(&x[i]).map(|(a, b)| a * b).sum())
    }

    pub fn player_cost_f64(&self, i: usize, x: &[Vec<f64>]) -> f64 {
        let c = self.cost_vector_f64(i, &self.rival_load(i, x));
        c.iter().zip(&x[i]).map(|(a, b)| a * b).sum()
    }

    /// `c − Σ_{j≠i} xⱼ`.
    pub fn residual_capacities(&self, i: usize, x: &[Vec<i64>]) -> Vec<i64> {
        let load = self.rival_load(i, x);
        self.capacities.iter().zip(&load).map(|(c, l)| c - l).collect()
    }

    /// `A y = bᵢ` and `y ≥ 0`.
    pub fn is_player_flow(&self, i: usize, y: &[i64]) -> bool {
        if y.len() != self.num_arcs() || y.iter().any(|v| *v < 0) {
            return false;
        }
        let mut net = vec![0i64; self.nodes];
        for (&(u, v), f) in self.arcs.iter().zip(y) {
            net[u] += f;
            net[v] -= f;
        }
        net == self.demand_vector(i)
    }

    /// `x ∈ X(x)`: every block is a valid flow and the joint load fits.
    pub fn is_feasible(&self, x: &[Vec<i64>]) -> Result<bool> {
        self.check_profile(x)?;
        if !(0..self.num_players()).all(|i| self.is_player_flow(i, &x[i])) {
            return Ok(false);
        }
        let total = self.rival_load(usize::MAX, x);
        Ok(total.iter().zip(&self.capacities).all(|(l, c)| l <= c))
    }

    pub fn flatten<T: Clone>(&self, x: &[Vec<T>]) -> Vec<T> {
        x.iter().flatten().cloned().collect()
    }

    pub fn unflatten<T: Clone>(&self, flat: &[T]) -> Vec<Vec<T>> {
        flat.chunks(self.num_arcs()).map(<[T]>::to_vec).collect()
    }
}
