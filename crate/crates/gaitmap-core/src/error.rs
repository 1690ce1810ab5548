//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the pipeline stages.
///
/// Variants are grouped roughly by stage: file I/O and parsing, recording
/// construction, segmentation, feature extraction, map identification,
/// clustering/restoration, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// A required column is absent from a CSV header.
    #[error("missing column `{0}` in header")]
    MissingColumn(String),

    /// The file header line is malformed.
    #[error("bad header: {0}")]
    BadHeader(String),

    /// A numeric field failed to parse or is NaN/inf.
    #[error("non-finite or unparseable value at line {line}")]
    NonFiniteValue { line: usize },

    /// Structured text file does not match the expected layout.
    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },

    /// A model artifact required by the simulation is not on disk.
    #[error("model file missing: {0}")]
    ModelMissing(PathBuf),

    /// Joint traces of a recording disagree in length.
    #[error("joint traces have inconsistent lengths")]
    InconsistentLength,

    /// A parameter violates its documented range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Segmentation found fewer than two cycle boundaries.
    #[error("no complete gait cycles found")]
    NoCyclesFound,

    /// The reference trace carries no usable oscillation.
    #[error("signal is flat: no oscillation to segment")]
    FlatSignal,

    /// A cycle slice is too short to resample onto the phase grid.
    #[error("cycle slice too short to resample")]
    SliceTooShort,

    /// A curve is too short for finite-difference rate estimation.
    #[error("curve too short for change-rate estimation")]
    TooShort,

    /// An operation received an empty collection.
    #[error("empty input")]
    EmptyInput,

    /// All pooled rates are equal; no band can be fitted.
    #[error("degenerate rate distribution: band would be empty")]
    DegenerateDistribution,

    /// A cycle lacks a usable trough or peak for some joint.
    #[error("feature incomplete: {0}")]
    FeatureIncomplete(String),

    /// Not enough samples for the requested estimate.
    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    /// The design matrix is numerically rank deficient.
    #[error("design matrix rank deficient (condition number {cond:.3e})")]
    RankDeficient { cond: f64 },

    /// Clustering produced fewer usable clusters than required.
    #[error("too few non-empty clusters: need {needed}, got {got}")]
    TooFewClusters { needed: usize, got: usize },

    /// K-means kept producing empty clusters after the restart budget.
    #[error("k-means produced an empty cluster after {restarts} restarts")]
    EmptyCluster { restarts: usize },

    /// The 4x4 reference matrix cannot be inverted reliably.
    #[error("reference matrix singular or near-singular")]
    SingularReferenceMatrix,

    /// Requested Fourier order needs more samples than available.
    #[error("fourier order {order} too high for {n} samples")]
    OrderTooHigh { order: usize, n: usize },

    /// Analysis needs more compared cycles than available.
    #[error("too few cycles for analysis: need at least {needed}, got {got}")]
    TooFewCycles { needed: usize, got: usize },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
