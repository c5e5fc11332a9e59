//! Command-line front end for the quiver moduli toolkit.
//!
//! `qmod` reads a JSON quiver spec and runs one of `analyze`, `frame`,
//! `reduce` or `verify`, printing a text report or, with `--json`, the
//! schema-versioned [`report::Report`].

pub mod commands;
pub mod report;
pub mod spec;

pub use commands::{run, run_from_args, Cli, Flags, Outcome};
