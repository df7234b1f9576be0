//! Slot-level simulation of single-hop beeping networks.
//!
//! Nodes share one channel on which, each slot, they beep, listen or sleep;
//! listeners learn only whether at least one node beeped. On top of the
//! engine sit two naming protocols and a counting protocol:
//!
//! * [`naming::detnaml_run`] names `M` nodes with distinct identifiers in
//!   exactly `M` seasons while most nodes sleep through most exchanges;
//!   [`naming::reference_detnaml_run`] is the always-awake oracle for it.
//! * [`randnaml::randnaml_run`] names `n` anonymous nodes by splitting them
//!   into random groups that take turns, passing the running label count
//!   from group to group.
//! * [`randnaml::counting_run`] appends one broadcast so every node learns `n`.
//!
//! Every run meters energy per node in an [`engine::EnergyLedger`], and can
//! write a line-oriented trace of every awake slot. [`verify`] holds the
//! oracles and invariant checks, [`sweep`] the size sweeps and their CSV rows,
//! and [`cli`] the `beepnet` command.

pub mod cli;
pub mod codeword;
pub mod engine;
mod error;
pub mod naming;
pub mod randnaml;
pub mod rng;
pub mod sweep;
pub mod verify;

pub use error::SimError;
