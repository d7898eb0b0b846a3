//! Benchmark sweeps over generated instances, reported as CSV.
//!
//! A config lists instance types, instance seeds and method variants; every
//! (instance, variant) pair becomes one record row, followed by one aggregate
//! row per (type, variant) with the GNE rate and the mean time over the runs
//! that found an equilibrium.

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flowgame::{generate_instance, GenParams, IntProfile};
use crate::nikaido::{is_gne, profile_from_ints};
use crate::solvers::{solve, Method, SolveConfig, Status, DEFAULT_BUDGET, DEFAULT_ENUM_CAP, DEFAULT_STARTS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    pub method: Method,
    #[serde(default)]
    pub penalized: bool,
}

fn default_starts() -> usize {
    DEFAULT_STARTS
}
fn default_time_limit() -> f64 {
    60.0
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}
fn default_enum_cap() -> usize {
    DEFAULT_ENUM_CAP
}
fn default_alpha() -> f64 {
    crate::nikaido::DEFAULT_ALPHA
}
fn default_beta() -> f64 {
    crate::nikaido::DEFAULT_BETA
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub types: Vec<GenParams>,
    /// Instance seeds; each type is generated once per seed.
    pub seeds: Vec<u64>,
    pub variants: Vec<Variant>,
    /// Seed of the solvers' random streams.
    #[serde(default)]
    pub solver_seed: u64,
    #[serde(default = "default_starts")]
    pub starts: usize,
    /// Seconds per run.
    #[serde(default = "default_time_limit")]
    pub time_limit: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_enum_cap")]
    pub enum_cap: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: BenchConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if !(cfg.time_limit >= 0.0 && cfg.time_limit.is_finite()) {
            return Err(Error::Input(format!("time_limit must be a nonnegative number, got {}", cfg.time_limit)));
        }
        Ok(cfg)
    }

    fn solve_config(&self, v: Variant) -> SolveConfig {
        SolveConfig {
            method: v.method,
            penalized: v.penalized,
            alpha: self.alpha,
            beta: self.beta,
            starts: self.starts,
            seed: self.solver_seed,
            time_limit: Duration::from_secs_f64(self.time_limit),
            budget: self.budget,
            enum_cap: self.enum_cap,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    /// `<type label>#<seed>`.
    pub id: String,
    pub instance_type: String,
    pub method: Method,
    pub penalized: bool,
    pub found: bool,
    /// `gne_found`, `no_gne_certified`, `timeout`, `budget_exhausted`, or
    /// `error` for runs that could not be carried out.
    pub status: String,
    pub time_s: f64,
    pub starts: usize,
    /// Exact objective at the returned profile, as a rational string.
    pub value: Option<String>,
    /// Returned profile as compact JSON.
    pub profile: Option<String>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub instance_type: String,
    pub method: Method,
    pub penalized: bool,
    pub runs: usize,
    pub found: usize,
    pub gne_rate: f64,
    /// Mean over runs with `found`; `None` when nothing was found.
    pub mean_time_found_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchmarkRecord>,
    pub aggregates: Vec<Aggregate>,
}

fn run_one(cfg: &BenchConfig, params: GenParams, seed: u64, v: Variant) -> BenchmarkRecord {
    let label = params.type_label();
    let mut rec = BenchmarkRecord {
        id: format!("{label}#{seed}"),
        instance_type: label,
        method: v.method,
        penalized: v.penalized,
        found: false,
        status: "error".into(),
        time_s: 0.0,
        starts: 0,
        value: None,
        profile: None,
        diagnostic: None,
    };
    let inst = match generate_instance(params, seed) {
        Ok(inst) => inst,
        Err(e) => {
            rec.diagnostic = Some(e.to_string());
            return rec;
        }
    };
    let began = Instant::now();
    let outcome = solve(&inst, &cfg.solve_config(v));
    rec.time_s = began.elapsed().as_secs_f64();
    match outcome {
        Err(e) => rec.diagnostic = Some(e.to_string()),
        Ok(r) => {
            rec.status = r.status.name().into();
            rec.starts = r.starts_used;
            rec.value = r.value.as_ref().map(|v| v.to_string());
            rec.profile = r.profile.as_ref().map(profile_json);
            rec.diagnostic = r.diagnostic.clone();
            rec.found = r.status == Status::GneFound
                && r.profile.as_ref().is_some_and(|x| is_gne(&inst, &profile_from_ints(x)));
            if r.status == Status::GneFound && !rec.found {
                rec.status = "error".into();
                rec.diagnostic = Some("returned profile failed re-verification".into());
            }
        }
    }
    rec
}

fn profile_json(x: &IntProfile) -> String {
    serde_json::to_string(x).expect("integer profile serializes")
}

/// Runs every (instance, variant) pair in parallel; records come back in
/// config order regardless of scheduling.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport> {
    for v in &cfg.variants {
        cfg.solve_config(*v).validate()?;
    }
    let jobs: Vec<(GenParams, u64, Variant)> = cfg
        .types
        .iter()
        .flat_map(|t| cfg.seeds.iter().flat_map(move |s| cfg.variants.iter().map(move |v| (*t, *s, *v))))
        .collect();
    let records: Vec<BenchmarkRecord> = jobs.par_iter().map(|(t, s, v)| run_one(cfg, *t, *s, *v)).collect();
    let aggregates = aggregate(cfg, &records);
    Ok(BenchReport { records, aggregates })
}

/// One row per (type, variant); the mean time covers successful runs only.
pub fn aggregate(cfg: &BenchConfig, records: &[BenchmarkRecord]) -> Vec<Aggregate> {
    let mut aggregates = Vec::new();
    for t in &cfg.types {
        let label = t.type_label();
        for v in &cfg.variants {
            let runs: Vec<&BenchmarkRecord> = records
                .iter()
                .filter(|r| r.instance_type == label && r.method == v.method && r.penalized == v.penalized)
                .collect();
            let found: Vec<f64> = runs.iter().filter(|r| r.found).map(|r| r.time_s).collect();
            aggregates.push(Aggregate {
                instance_type: label.clone(),
                method: v.method,
                penalized: v.penalized,
                runs: runs.len(),
                found: found.len(),
                gne_rate: if runs.is_empty() { 0.0 } else { found.len() as f64 / runs.len() as f64 },
                mean_time_found_s: (!found.is_empty()).then(|| found.iter().sum::<f64>() / found.len() as f64),
            });
        }
    }
    aggregates
}

/// Fixed CSV columns shared by record and aggregate rows.
#[derive(Debug, Serialize)]
struct Row<'a> {
    kind: &'a str,
    id: &'a str,
    instance_type: &'a str,
    method: &'a str,
    penalized: bool,
    found: Option<bool>,
    status: &'a str,
    time_s: Option<f64>,
    starts: Option<usize>,
    value: Option<&'a str>,
    runs: Option<usize>,
    found_count: Option<usize>,
    gne_rate: Option<f64>,
    mean_time_found_s: Option<f64>,
    profile: Option<&'a str>,
    diagnostic: Option<&'a str>,
}

pub const CSV_COLUMNS: &[&str] = &[
    "kind",
    "id",
    "instance_type",
    "method",
    "penalized",
    "found",
    "status",
    "time_s",
    "starts",
    "value",
    "runs",
    "found_count",
    "gne_rate",
    "mean_time_found_s",
    "profile",
    "diagnostic",
];

pub fn write_csv<W: Write>(report: &BenchReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Input(format!("writing CSV: {e}"));
    for r in &report.records {
        w.serialize(Row {
            kind: "record",
            id: &r.id,
            instance_type: &r.instance_type,
            method: r.method.name(),
            penalized: r.penalized,
            found: Some(r.found),
            status: &r.status,
            time_s: Some(r.time_s),
            starts: Some(r.starts),
            value: r.value.as_deref(),
            runs: None,
            found_count: None,
            gne_rate: None,
            mean_time_found_s: None,
            profile: r.profile.as_deref(),
            diagnostic: r.diagnostic.as_deref(),
        })
        .map_err(io)?;
    }
    for a in &report.aggregates {
        w.serialize(Row {
            kind: "aggregate",
            id: "",
            instance_type: &a.instance_type,
            method: a.method.name(),
            penalized: a.penalized,
            found: None,
            status: "",
            time_s: None,
            starts: None,
            value: None,
            runs: Some(a.runs),
            found_count: Some(a.found),
            gne_rate: Some(a.gne_rate),
            mean_time_found_s: a.mean_time_found_s,
            profile: None,
            diagnostic: None,
        })
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Input(format!("writing CSV: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> BenchConfig {
        BenchConfig::from_json(
            r#"{
                "types": [{"nodes": 6, "players": 2, "source_mode": "multi", "weight_mode": "unit"}],
                "seeds": [3],
                "variants": [{"method": "valpha"}, {"method": "reformulation-exhaustive"}],
                "starts": 10,
                "time_limit": 30
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn one_instance_two_methods() {
        let report = run_benchmark(&config()).unwrap();
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.aggregates.len(), 2);
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 2 + 2);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
    }

    #[test]
    fn mean_time_counts_only_successes() {
        let cfg = config();
        let params = cfg.types[0];
        let mk = |found: bool, t: f64| BenchmarkRecord {
            id: String::new(),
            instance_type: params.type_label(),
            method: Method::Valpha,
            penalized: false,
            found,
            status: String::new(),
            time_s: t,
            starts: 1,
            value: None,
            profile: None,
            diagnostic: None,
        };
        let aggs = aggregate(&cfg, &[mk(true, 1.0), mk(false, 100.0), mk(true, 3.0)]);
        assert_eq!(aggs[0].runs, 3);
        assert_eq!(aggs[0].found, 2);
        assert_eq!(aggs[0].mean_time_found_s, Some(2.0));
        assert_eq!(aggs[1].runs, 0);
        assert_eq!(aggs[1].mean_time_found_s, None);
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        assert!(matches!(BenchConfig::from_json(r#"{"types": [], "seeds": [], "variants": [], "x": 1}"#), Err(Error::Parse(_))));
    }
}
