//! Parsing and command implementations behind the `locsym` binary.

pub mod commands;
pub mod parse;
