//! Batch experiment runner for the greedy approximation laboratory:
//! configuration, seeded generators, file formats and the command
//! implementations behind the `greedylab` binary.

pub mod config;
pub mod gen;
pub mod io;
pub mod runner;
