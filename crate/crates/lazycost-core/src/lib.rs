//! Demand semantics and cost analysis for a first-order lazy calculus.
//!
//! The crate is `no_std` and needs only `alloc`. It provides:
//!
//! * [`calculus`]: syntax and typing of a calculus with explicit thunks;
//! * [`lattice`]: total values, approximations, definedness and joins;
//! * [`eval`]: the pure forward semantics;
//! * [`demand`]: the backward demand semantics, which computes the cost of
//!   lazy evaluation together with the minimal input demand;
//! * [`clairvoyant`]: the nondeterministic clairvoyant semantics used as an
//!   independent oracle, and [`theorems`] which cross-checks the two;
//! * [`stdlib`]: hand-written demand functions for lazy list functions;
//! * [`banker`] and [`implicit`]: two lazy persistent queues with their
//!   demand functions and potentials;
//! * [`trace`]: persistent-usage traces and amortized cost checks.

#![no_std]

extern crate alloc;

pub mod banker;
pub mod calculus;
pub mod clairvoyant;
pub mod demand;
pub mod eval;
pub mod implicit;
pub mod lattice;
pub mod nondet;
pub mod stdlib;
pub mod theorems;
pub mod thunk;
pub mod trace;
