//! Text formats, DOT export and the command-line surface.

pub mod cli;
pub mod dot;
pub mod layers_format;
pub mod upg;
