//! File format, resolution cache, reports and subcommands of the `gstab` tool.

pub mod cache;
pub mod commands;
pub mod format;
pub mod report;

pub use commands::run;
