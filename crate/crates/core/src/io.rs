//! JSON formats: flow-game instances and finite point-set games.
//!
//! Rational coordinates in point-set files are strings such as `"5/2"` or
//! `"3"`; both formats carry a `schema_version` field.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flowgame::{CdfgInstance, InstanceMeta, PlayerCost, PlayerSpec};
use crate::model::{FiniteGnep, Point, StrategyProfile};
use crate::Rational;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
    pub capacities: Vec<i64>,
    pub players: Vec<PlayerSpec>,
    pub costs: Vec<PlayerCost>,
    #[serde(default)]
    pub metadata: InstanceMeta,
}

// serde_json messages already end in "at line L column C".
fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn instance_to_json(inst: &CdfgInstance) -> String {
    let file = InstanceFile {
        schema_version: SCHEMA_VERSION,
        nodes: inst.nodes,
        arcs: inst.arcs.clone(),
        capacities: inst.capacities.clone(),
        players: inst.players.clone(),
        costs: inst.costs.clone(),
        metadata: inst.meta.clone(),
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<CdfgInstance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(parse_err)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema_version {}", file.schema_version)));
    }
    Ok(CdfgInstance::new(file.nodes, file.arcs, file.capacities, file.players, file.costs)?
        .with_meta(file.metadata))
}

/// Finite game given either by a joint point set or by explicit tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub schema_version: u32,
    #[serde(default)]
    pub label: String,
    /// Coordinates read off a plot rather than stated exactly.
    #[serde(default)]
    pub approximate: bool,
    pub dims: Vec<usize>,
    #[serde(flatten)]
    pub body: PointSetBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSetBody {
    /// `Xᵢ(x₋ᵢ) = {xᵢ : (xᵢ, x₋ᵢ) ∈ X}` for the listed flat points.
    JointlyConstrained { points: Vec<Vec<String>> },
    /// One list of entries per player.
    Tables { tables: Vec<Vec<TableEntry>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    /// Flat rival coordinates, players in order with `i` skipped.
    pub rivals: Vec<String>,
    pub strategies: Vec<Vec<String>>,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

fn parse_point(v: &[String]) -> Result<Point> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn split_blocks(flat: Point, dims: &[usize]) -> Result<Vec<Point>> {
    if flat.len() != dims.iter().sum::<usize>() {
        return Err(Error::Dimension(format!(
            "point with {} coordinates for block sizes {dims:?}",
            flat.len()
        )));
    }
    let mut out = Vec::with_capacity(dims.len());
    let mut it = flat.into_iter();
    for &k in dims {
        out.push(it.by_ref().take(k).collect());
    }
    Ok(out)
}

impl PointSetFile {
    pub fn to_game(&self) -> Result<FiniteGnep> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema_version {}", self.schema_version)));
        }
        let dims = self.dims.clone();
        match &self.body {
            PointSetBody::JointlyConstrained { points } => {
                let profiles = points
                    .iter()
                    .map(|p| Ok(StrategyProfile::new(split_blocks(parse_point(p)?, &dims)?)))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGnep::jointly_constrained(dims, profiles)
            }
            PointSetBody::Tables { tables } => {
                if tables.len() != dims.len() {
                    return Err(Error::Dimension(format!("{} tables for {} players", tables.len(), dims.len())));
                }
                let mut out = Vec::with_capacity(dims.len());
                for (i, entries) in tables.iter().enumerate() {
                    let rival_dims: Vec<usize> =
                        dims.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, k)| *k).collect();
                    let mut table: BTreeMap<Vec<Point>, BTreeSet<Point>> = BTreeMap::new();
                    for e in entries {
                        let key = split_blocks(parse_point(&e.rivals)?, &rival_dims)?;
                        let set = table.entry(key).or_default();
                        for s in &e.strategies {
                            set.insert(parse_point(s)?);
                        }
                    }
                    out.push(table);
                }
                FiniteGnep::new(dims, out)
            }
        }
    }
}

pub fn point_set_from_json(text: &str) -> Result<PointSetFile> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn game_from_point_set_json(text: &str) -> Result<FiniteGnep> {
    point_set_from_json(text)?.to_game()
}

/// Formats a point as `(a, b, …)` with exact rationals.
pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}
