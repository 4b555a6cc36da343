//! Partitions into sums of two squares.
//!
//! Let S = {1, 2, 4, 5, 8, 9, 10, ...} be the set of integers expressible
//! as a^2 + b^2 with a, b >= 0, and p_S(n) the number of partitions of n
//! with every part in S. This crate computes p_S(n) exactly (bignum dynamic
//! programming over a sieved part set) and asymptotically (saddle-point
//! evaluation of the generating series), and quantifies how the two agree.
//!
//! The pieces:
//!
//! - [`twosquares`]: sieve and query S, count S(x), and compute the
//!   Landau-Ramanujan constant K in S(x) ~ K x / sqrt(log x).
//! - [`exactcount`]: exact restricted partition counts for S and for
//!   arbitrary part sets, with cross-check oracles.
//! - [`saddle`]: the generating-series log Phi and its log-derivatives,
//!   the saddle-point solve x = rho Phi'(rho), and log-space estimates
//!   of p_S(n) and its difference function.
//! - [`cli`]: the `sqpart` command-line front end.

pub mod cli;
pub mod error;
pub mod exactcount;
pub mod saddle;
pub mod twosquares;

pub use error::{Error, Result};
