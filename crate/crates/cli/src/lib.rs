//! Command implementations behind the `metatop` binary.

pub mod commands;
pub mod report;
