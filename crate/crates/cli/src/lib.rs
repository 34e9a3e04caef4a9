//! Configuration, report emission and subcommands behind the `sg-nft`
//! binary.

pub mod commands;
pub mod config;
pub mod report;
