pub mod corpus;
pub mod error;
pub mod fields;
pub mod graded;
pub mod laurent;
pub mod lattice;
pub mod parse;
pub mod profile;
pub mod selftest;
pub mod ring;
pub mod sk1;
pub mod symbol;

pub use error::{Error, Result};
