//! Library half of the command-line front end.
//!
//! The binary in `main.rs` is a thin clap wrapper over these modules:
//! [`parse`] turns flag text into values, [`config`] merges flags with the
//! optional config file into an [`config::ExperimentSpec`], [`commands`]
//! runs the drivers against the `qwalk` library, and [`report`] emits
//! deterministic CSV/JSON tables. Keeping the logic here makes it callable
//! from integration tests and fuzz targets without spawning the binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod parse;
pub mod report;
