//! Library half of the `tempqa` binary: the run configuration file format.

pub mod config;
