use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("rank {rank} outside supported range {min}..={max}")]
    InvalidRank { rank: usize, min: usize, max: usize },

    #[error("rank {rank} too large for dense representation (limit {limit})")]
    RankTooLarge { rank: usize, limit: usize },

    #[error("site {site} out of range for rank {rank}")]
    SiteOutOfRange { site: usize, rank: usize },

    #[error("two-site gate needs distinct sites, got {0} twice")]
    SameSite(usize),

    #[error("level {level} out of range for rank {rank}")]
    LevelOutOfRange { level: usize, rank: usize },

    #[error("sequence has a nonzero recurring tail and no integer index")]
    NotFiniteCountable,

    #[error("operation undefined on the zero vector")]
    ZeroVector,

    #[error("state has transbosonic support (key {0})")]
    NotBosonic(u64),

    #[error("|z|^2 = {norm_sqr} exceeds truncation guard {limit}")]
    TruncationRisk { norm_sqr: f64, limit: f64 },

    #[error("invalid physical parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("ladder construction drifted from basis state |2^{level}): deviation {deviation:e}")]
    LadderDrift { level: usize, deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
