//! Spec-file parsing and report emission for the `ctrlexpr` binary.

pub mod report;
pub mod spec_file;
