pub mod apps;
pub mod bench;
pub mod character;
pub mod cli;
pub mod count;
pub mod enumerate;
pub mod error;
pub mod extremal;
mod graph;
pub mod newick;
pub mod oracle;
pub mod tree;
pub mod verify;

pub use character::Character;
pub use count::{count_gk, has_gk, BigCount, GkCache};
pub use enumerate::{is_convex, list_gk, parsimony_score, ListGk};
pub use error::{Error, Result};
pub use tree::{Split, TaxonSet, Tree, Tripartition};
