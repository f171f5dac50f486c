//! File formats and command-line front end for `skewable-core`.

pub mod app;
pub mod commands;
pub mod format;
pub mod number;
