//! Files, external solvers and the command line around `flexcap-core`.

pub mod artifacts;
pub mod backend;
pub mod cli;
pub mod params;
pub mod pipeline;
pub mod series;
