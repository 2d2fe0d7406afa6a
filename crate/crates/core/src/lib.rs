pub mod corpus;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod nests;
pub mod oracle;
pub mod separability;
pub mod spec;
pub mod twisted;
pub mod zoo;

pub use error::{Error, Result};
