//! Command-line experiments on averaged projections in CAT(0) spaces:
//! configuration parsing, the four subcommands, and report writing.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod setup;
pub mod stats;
