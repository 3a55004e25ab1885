//! Front end for the `juggler-core` simulator: species files, TOML sweep
//! configuration, parallel window sweeps, CSV and SVG output, and the
//! rate table.

pub mod acceptance;
pub mod config;
pub mod output;
pub mod run;
pub mod species_file;
pub mod table;
