//! Equilibrium search on flow games: multistart descent with rounding,
//! Gauss–Seidel best responses and the exhaustive reformulation oracle.

pub mod descent;
pub mod exhaustive;
pub mod gauss_seidel;
pub mod multistart;
pub mod search;

use std::time::Duration;

use crate::flowgame::IntProfile;
use crate::nikaido::{Objective, DEFAULT_ALPHA, DEFAULT_BETA};
use crate::Rational;

pub use descent::{local_descent, round_profile, DescentOptions, DescentOutcome, DescentProblem};
pub use exhaustive::{reformulation_values, solve_reformulation_exhaustive, ProfileValue};
pub use gauss_seidel::gauss_seidel;
pub use multistart::{multistart_round, random_starts};

pub const DEFAULT_STARTS: usize = 100;
pub const DEFAULT_BUDGET: usize = 15_000;
pub const DEFAULT_ENUM_CAP: usize = 1_000_000;
pub const DEFAULT_MAX_ROUNDS: usize = 1000;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Vhat,
    Valpha,
    Vbar,
    ReformulationExhaustive,
    GaussSeidel,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Vhat => "vhat",
            Method::Valpha => "valpha",
            Method::Vbar => "vbar",
            Method::ReformulationExhaustive => "reformulation-exhaustive",
            Method::GaussSeidel => "gauss-seidel",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        [Method::Vhat, Method::Valpha, Method::Vbar, Method::ReformulationExhaustive, Method::GaussSeidel]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| crate::Error::Input(format!("unknown method {s:?}")))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub method: Method,
    pub penalized: bool,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub starts: usize,
    pub seed: u64,
    pub time_limit: Duration,
    /// Function evaluations per local solve.
    pub budget: usize,
    pub enum_cap: usize,
    pub max_rounds: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            method: Method::Valpha,
            penalized: false,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            c: 0.0,
            starts: DEFAULT_STARTS,
            seed: 0,
            time_limit: DEFAULT_TIME_LIMIT,
            budget: DEFAULT_BUDGET,
            enum_cap: DEFAULT_ENUM_CAP,
            max_rounds: DEFAULT_MAX_ROUNDS,
        }
    }
}

impl SolveConfig {
    /// The descent objective of the configured method, if it has one.
    pub fn objective(&self) -> Option<Objective> {
        match self.method {
            Method::Vhat => Some(Objective::VHat),
            Method::Valpha => Some(Objective::VAlpha { alpha: self.alpha }),
            Method::Vbar => Some(Objective::VBar { alpha: self.alpha, beta: self.beta, c: self.c }),
            _ => None,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let bad = |m: String| Err(crate::Error::Input(m));
        if self.starts == 0 || self.budget == 0 || self.max_rounds == 0 {
            return bad("starts, budget and max_rounds must be positive".into());
        }
        if !(self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.method == Method::Vbar && !(self.alpha < self.beta && self.c >= 0.0) {
            return bad(format!("vbar needs alpha < beta and c >= 0, got {} {} {}", self.alpha, self.beta, self.c));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    GneFound,
    NoGneCertified,
    Timeout,
    BudgetExhausted,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::GneFound => "gne_found",
            Status::NoGneCertified => "no_gne_certified",
            Status::Timeout => "timeout",
            Status::BudgetExhausted => "budget_exhausted",
        }
    }
}

/// One start of a multistart run.
#[derive(Debug, Clone, PartialEq)]
pub struct StartTrace {
    pub start: usize,
    pub evaluations: usize,
    pub iterations: usize,
    /// Objective at the local minimizer (or where the run stopped).
    pub objective: f64,
    pub rounded: IntProfile,
    pub feasible: bool,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    pub profile: Option<IntProfile>,
    /// Exact `V̂^conv` at `profile` (the certified minimum for the
    /// exhaustive method).
    pub value: Option<Rational>,
    pub starts_used: usize,
    pub evaluations: usize,
    pub trace: Vec<StartTrace>,
    pub diagnostic: Option<String>,
}

impl SolveResult {
    pub(crate) fn empty(status: Status) -> Self {
        Self {
            status,
            profile: None,
            value: None,
            starts_used: 0,
            evaluations: 0,
            trace: Vec::new(),
            diagnostic: None,
        }
    }

    pub fn found(&self) -> bool {
        self.status == Status::GneFound
    }
}

/// Runs the configured method; descent methods start from [`random_starts`],
/// Gauss–Seidel from the first profile found by greedy routing.
pub fn solve(inst: &crate::CdfgInstance, cfg: &SolveConfig) -> crate::Result<SolveResult> {
    cfg.validate()?;
    match cfg.method {
        Method::Vhat | Method::Valpha | Method::Vbar => multistart_round(inst, cfg),
        Method::ReformulationExhaustive => solve_reformulation_exhaustive(inst, cfg.enum_cap),
        Method::GaussSeidel => {
            let x0 = crate::flowgame::greedy_routing(inst)
                .map(Ok)
                .or_else(|| crate::flowgame::find_joint_profile(inst, cfg.enum_cap).transpose())
                .transpose()?
                .ok_or_else(|| crate::Error::Input("no feasible starting profile found".into()))?;
            gauss_seidel(inst, &x0, cfg.max_rounds)
        }
    }
}
