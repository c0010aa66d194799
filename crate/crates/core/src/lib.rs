//! Spectra of infinite graphs built by attaching a one-sided infinite path
//! to a finite graph.

pub mod graph;
pub mod numerics;
pub mod poly;
pub mod families;
pub mod oracle;
pub mod tail;
pub mod cli;
