//! Command-line front end for the nst closed forms and their Monte Carlo
//! checks: CSV and JSON output, SVG plots, exit codes.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod report;
pub mod svg;
pub mod table;
pub mod threads;
