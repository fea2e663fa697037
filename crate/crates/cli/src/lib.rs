//! The `qicops` command line: matches, trace replay, family verification,
//! geometry scans and the interactive session server.

pub mod codec;
pub mod commands;
pub mod error;
pub mod serve;
pub mod specs;
