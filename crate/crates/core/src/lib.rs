//! Prefix-free parsing of a text, the Wheeler graph of its parse, path
//! tunnelling, and expansion into a Wheeler graph of the text itself.

pub mod bitvec;
pub mod corpus;
pub mod error;
pub mod expand;
pub mod pfp;
pub mod pipeline;
pub mod suffix_bwt;
pub mod symbol;
pub mod tunnel;
pub mod wheeler;

pub use error::{Error, Result};
pub use symbol::Symbol;
pub use wheeler::WheelerGraph;

/// Wheeler graph over text symbol codes.
pub type TextGraph = WheelerGraph<u8>;
/// Wheeler graph over phrase ranks of a parse.
pub type ParseGraph = WheelerGraph<u64>;
