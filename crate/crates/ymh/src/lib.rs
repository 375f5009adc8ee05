//! File formats and command-line front end for `ymh-core`.

pub mod cli;
pub mod grid;
pub mod report_io;
pub mod table_io;
