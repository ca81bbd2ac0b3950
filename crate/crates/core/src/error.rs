use thiserror::Error;

/// Errors raised by tree construction, counting, enumeration and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("newick syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid taxon label {0:?}")]
    InvalidLabel(String),

    #[error("duplicate taxon label {0:?}")]
    DuplicateLabel(String),

    #[error("vertex of degree {degree} is not allowed in a binary tree")]
    NonBinary { degree: usize },

    #[error("tree is not connected or contains a cycle")]
    NotATree,

    #[error("taxon subset is empty")]
    EmptySubset,

    #[error("unknown taxon {0:?}")]
    UnknownTaxon(String),

    #[error("cannot delete every taxon of the tree")]
    DeleteAll,

    #[error("character is not a partition of the taxon set: {0}")]
    NotAPartition(String),

    #[error("taxon sets of the input trees differ")]
    TaxonMismatch,

    #[error("{n} taxa exceed the brute-force limit of {limit}")]
    SizeGuard { n: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown objective {0:?}")]
    UnknownObjective(String),
}

pub type Result<T> = std::result::Result<T, Error>;
