//! File formats, reports, rayon runners and the command line built on
//! `rgmis-core`.

pub mod cli;
pub mod edgelist;
pub mod parallel;
pub mod report;
pub mod source;
pub mod trace;
