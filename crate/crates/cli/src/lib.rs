//! Library side of the `freetest` command: argument types, the corpus
//! harness and the regression suites, kept here so tests can drive them
//! without spawning a process.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod sample;
pub mod suites;
