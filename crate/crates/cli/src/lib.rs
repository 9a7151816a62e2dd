//! Rendering and configuration helpers behind the `slidecam` binary.

pub mod config;
pub mod render;
