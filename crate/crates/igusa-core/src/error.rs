//! Error type shared by all modules of the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{name}` at byte {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} is not a prime number")]
    NotPrime(u64),

    #[error("empty support set")]
    EmptySupport,

    #[error("component {index} is a constant polynomial")]
    ConstantComponent { index: usize },

    #[error("component {index} vanishes identically modulo {p}")]
    VanishesModP { index: usize, p: u64 },

    #[error("component {index} has a nonzero constant term; it must vanish at the origin")]
    NonzeroAtOrigin { index: usize },

    #[error("mapping must have between 1 and n = {nvars} components, got {got}")]
    BadComponentCount { nvars: usize, got: usize },

    #[error("enumeration budget exceeded: {needed} points > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("mapping is degenerate; rerun with the degenerate override to force formula assembly")]
    DegenerateMapping,

    #[error("evaluation point {point} lies outside the valid region {region}")]
    OutsideRegion { point: String, region: String },

    #[error("rays do not span a pointed cone")]
    BadCone,

    #[error("integer overflow in {context}")]
    Overflow { context: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
