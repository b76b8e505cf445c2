//! Building blocks of the `plancherel` binary: flat key-value configuration
//! files, deterministic CSV/JSON table output, and the command
//! implementations themselves.  Split out as a library so the pieces can be
//! exercised directly by tests and fuzz targets.

pub mod commands;
pub mod config;
pub mod output;
