//! Std companion to `rollup-game`: parameter files, CSV/JSON output,
//! threaded simulation and the `rollup-game` command line.

pub mod app;
pub mod config;
pub mod number;
pub mod simulate;
pub mod sweep;
pub mod verify;
