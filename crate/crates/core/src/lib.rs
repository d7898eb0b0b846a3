//! Generalized Nash equilibria of non-convex and mixed-integer games.
//!
//! Equilibria of a game are recovered from a convexified game: a feasible
//! profile is an equilibrium iff the convexified Nikaido–Isoda value vanishes
//! there. For quasi-linear games (capacitated discrete flow games in
//! particular) that value has an LP-duality representation, which turns
//! equilibrium search into a single minimization.

pub mod bench;
pub mod convexify;
pub mod error;
pub mod fixtures;
pub mod flowgame;
pub mod io;
pub mod kernel;
pub mod model;
pub mod nikaido;
pub mod rng;
pub mod solvers;

pub type Rational = num_rational::BigRational;

pub use error::{Error, Result};
pub use flowgame::{CdfgInstance, PlayerCost, PlayerSpec};
pub use model::{FiniteGnep, Point, StrategyProfile};
