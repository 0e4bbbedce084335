//! Library side of the `qsr` binary: instance file parsing, report
//! rendering, and one function per subcommand. Kept as a library so the
//! integration tests can exercise parsing and report round-trips without
//! spawning a process.

pub mod commands;
pub mod format;
pub mod report;
