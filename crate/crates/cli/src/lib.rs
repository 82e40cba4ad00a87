//! Command-line front end for the biweyl operator engine.
//!
//! [`parser`] turns text like `"(1 - x - y)*Dx - 1"` into normal-form
//! operators; [`app`] wires the subcommands (`reduce`, `eliminate`,
//! `verify`, `gap-demo`, `bound`, `check`) to the engine, re-verifying
//! every certificate before printing. Exit codes: 0 verified, 1 usage
//! error, 2 verification failure, 3 budget exhausted.

pub mod app;
pub mod parser;

pub use app::run;
