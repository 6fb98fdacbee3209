//! Experiment runner for the `plateau-core` laboratory: sweep commands that
//! reproduce the scaling, depth, shot-noise, spectral, and optimization
//! datasets, with deterministic CSV outputs and JSON run manifests.

pub mod cli;
pub mod commands;
pub mod csvio;
pub mod manifest;
pub mod pool;

pub use manifest::RunManifest;
