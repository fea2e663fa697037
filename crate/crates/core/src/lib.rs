//! Coarse cops and robbers on Cayley graphs.
//!
//! The crate is `no_std` with `alloc`; file formats, the command line and the
//! session server live in the `qicops` crate.
#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod space;
pub mod engine;
pub mod agents;
pub mod analysis;
pub mod homothety;
pub mod metagame;
