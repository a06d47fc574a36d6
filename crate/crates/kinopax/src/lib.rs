//! Host-side companion to `kinopax-core`: worker pools, wall clocks,
//! environment files, scene generation, benchmark batches and exports.

pub use kinopax_core as core;

pub mod audit;
pub mod bench;
pub mod envfile;
pub mod error;
pub mod exec;
pub mod export;
pub mod generate;
pub mod regions;
