//! File formats, instance generators, JSON reports and the command-line
//! front end for [`maglap_core`].

pub mod cli;
pub mod dot;
pub mod format;
pub mod generate;
pub mod report;
