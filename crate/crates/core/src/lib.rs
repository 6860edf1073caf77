pub mod config;
pub mod error;
pub mod golden;
pub mod hull;
pub mod kernel;
pub mod optimizer;
pub mod partition;
pub mod report;
pub mod simplex;
pub mod svg;
pub mod sweep;
pub mod types;
pub mod verify;
