//! Exact analysis of finite games through periodic strategies.
//!
//! All arithmetic is over arbitrary-precision rationals. The crate builds
//! periodicity graphs and their cycles, computes mixed periodic strategies
//! and mixed Nash equilibria of bimatrix games, runs iterated elimination of
//! dominated strategies, solves the cooperative-competitive value of
//! bimatrix games, and turns Bayesian games into complete-information games.

pub mod bayesian;
pub mod coco;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod mixed;
pub mod periodicity;
pub mod random;
pub mod rational;
pub mod rationalizability;

pub use bayesian::BayesianGame;
pub use error::{Error, Result};
pub use game::{ActionProfile, Game, MixedProfile};
pub use periodicity::{Cycle, Node, PeriodicityGraph, TiePolicy};
pub use rational::Rational;
