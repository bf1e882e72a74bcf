//! Exact computations with homomorphisms from finite groups into extensions
//! of finite groups by tori, their centralizers, and the mapping-space
//! decompositions they determine.

pub mod cochain;
pub mod config;
pub mod defs;
pub mod error;
pub mod group;
pub mod linalg;
pub mod mapping;
pub mod nerve;
pub mod oracle;
pub mod random;
pub mod report;
pub mod toral;

pub use config::Limits;
pub use error::{Error, Result};
