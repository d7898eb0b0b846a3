//! Capacitated discrete flow games.

pub mod enumerate;
pub mod generate;
pub mod instance;
pub mod mcf;
pub mod quasi;
pub mod relaxed;

pub use enumerate::{enumerate_integral_flows, enumerate_joint_profiles, find_joint_profile, finite_game};
pub use generate::{generate_instance, greedy_routing};
pub use instance::{
    build_incidence, CdfgInstance, GenParams, InstanceMeta, IntProfile, PlayerCost, PlayerSpec, SourceMode,
    WeightMode,
};
pub use quasi::{best_response_flow, lp_best_response, quasi_linear_data, reformulation_objective, QuasiLinearData};
pub use relaxed::{PlayerFlowSet, RelaxedJointSet};
