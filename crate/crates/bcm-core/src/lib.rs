//! Dynamic balancing of indivisible, real-valued loads on arbitrary
//! connected networks using the balancing circuit model (BCM).
//!
//! A BCM applies a fixed, edge-coloring-derived sequence of matchings to a
//! network each round; matched node pairs rebalance their loads pairwise.
//! Because the loads are atomic work packets with real-valued weights, a
//! matched pair can only approximate an even split. This crate provides:
//!
//! * [`network`] — random connected graph generation, greedy edge coloring
//!   into a matching schedule, matching/round matrices, and the spectral
//!   quantity `lambda(M)` that governs convergence.
//! * [`binpack`] — the offline weighted balls-into-bins placement algorithms
//!   `Greedy` and `SortedGreedy`, discrepancy traces, and an exhaustive
//!   optimal-partition oracle.
//! * [`protocol`] — the DLB protocol that drives the placement algorithms
//!   over a matching schedule, with full or partial load mobility and an
//!   exactly-divisible continuous reference process.
//! * [`bounds`] — closed-form calculators for the convergence and deviation
//!   bounds of the model.
//! * [`metrics`] — discrepancy statistics, movement counts, and the figure
//!   of merit `S` with its algorithm-relative form.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature,
//! enabled by default, switches float math to the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod binpack;
pub mod bounds;
mod error;
mod math;
pub mod metrics;
pub mod network;
pub mod protocol;

pub use binpack::Algorithm;
pub use error::{Error, Result};
pub use protocol::Mobility;
