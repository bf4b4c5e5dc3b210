//! Command implementations behind the `adt` binary.

pub mod suite;
pub mod sweep;
