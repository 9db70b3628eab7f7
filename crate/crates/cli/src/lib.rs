//! File formats, figures and the command-line driver around
//! `leastgrad-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod field;
pub mod geometry;
pub mod io;
pub mod number;
pub mod svg;
pub mod table;
pub mod verify;

pub use error::{CliError, Result};
