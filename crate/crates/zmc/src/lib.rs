//! Command-line front end and file formats for `zmc-core`: text meshes,
//! JSON reports, CSV region maps, Weierstrass data files and `key = value`
//! configuration.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod mesh;
pub mod parse;

pub use error::CliError;
