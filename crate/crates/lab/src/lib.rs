//! Generators, the hypergraph document format, run reports, verification
//! suites and the command-line front end for `container-lab-core`.

pub mod cli;
pub mod corpus;
pub mod document;
pub mod generators;
pub mod report;
pub mod suites;
