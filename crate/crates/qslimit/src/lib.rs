//! Limiting distribution of the Quicksort cost.
//!
//! Sorting n distinct keys with classic Quicksort (uniformly random pivots)
//! takes a random number of comparisons X_n. The normalized cost
//! (X_n - E X_n) / n converges in law to a random variable Y whose law is
//! the unique zero-mean fixed point of
//!
//! ```text
//! V  ->  U V + (1 - U) V' + g(U),    g(u) = 2u ln u + 2(1-u) ln(1-u) + 1
//! ```
//!
//! where U is uniform on (0, 1) and V, V', U are independent. This crate
//! computes that law and quantifies how fast iterates of the map approach
//! it:
//!
//! * fixed-point iteration of densities, characteristic functions, and
//!   moment generating functions on grids ([`transform`]),
//! * certified error bounds for the characteristic function tail, density
//!   approximation, and Kolmogorov/total-variation/Wasserstein rates
//!   ([`bounds`]),
//! * exact rational moments of the cost and of the limit law ([`cost`],
//!   [`moments`]),
//! * distances between distributions on a common grid ([`metrics`]),
//! * Monte-Carlo simulation of Quicksort and of truncated recursion trees
//!   ([`montecarlo`]).
//!
//! The `qslimit` binary exposes the same operations as subcommands
//! (`iterate`, `bounds`, `simulate`, `distance`, `moments`).

pub mod bounds;
pub mod cli;
pub mod constants;
pub mod cost;
pub mod error;
pub mod grid;
pub mod metrics;
pub mod moments;
pub mod montecarlo;
pub mod quad;
pub mod start;
pub mod transform;

pub use constants::Constants;
pub use error::{Error, Result};
pub use grid::{GridFunction, GridKind};
pub use start::StartLaw;
