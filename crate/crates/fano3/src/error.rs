use thiserror::Error;

/// Errors raised by the intersection calculus and the atlas.
#[derive(Debug, Error)]
pub enum Error {
    /// A divisor class or curve vector does not match the rank of the ring it
    /// is used with.
    #[error("dimension mismatch: ring has rank {rank}, got a vector of length {got}")]
    DimensionMismatch { rank: usize, got: usize },

    /// Requested seed space is not in the catalog.
    #[error("unknown seed space `{0}`")]
    UnknownSeed(String),

    /// Two surface classes on different base surfaces were combined.
    #[error("base surface mismatch: {0} vs {1}")]
    BaseMismatch(&'static str, &'static str),

    /// Record id not present in the atlas.
    #[error("no record with id `{0}`")]
    UnknownId(String),

    /// A bounded search produced a surviving row at the cap boundary, so the
    /// cap cannot be trusted to be exhaustive.
    #[error("search cap {cap} exhausted by {what}; raise the cap")]
    CapExhausted { cap: i64, what: String },

    /// The embedded database failed to parse or is internally broken.
    #[error("atlas data error: {0}")]
    BadAtlas(String),

    /// Checked 64-bit arithmetic overflowed. All quantities in scope are
    /// small, so this indicates corrupted input rather than a size limit.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
