//! File formats, pipelines, the `invlearn` CLI and the HTTP service on top of
//! [`invlearn_core`].

pub mod cli;
pub mod diet_io;
pub mod formats;
pub mod pipeline;
pub mod report;
pub mod service;
pub mod synthetic;

pub use invlearn_core as core;
