//! File formats, configuration, plots and the command line.

pub mod cli;
pub mod config;
pub mod ingest;
pub mod plot;
pub mod report;
