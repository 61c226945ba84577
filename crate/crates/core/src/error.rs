// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("line {line}: unknown node label `{label}`")]
    UnknownLabel { line: usize, label: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has {nodes} nodes; brute force is limited to {limit}")]
    SizeLimit { nodes: usize, limit: usize },

    #[error("degenerate distribution: all samples equal {0}")]
    DegenerateDistribution(u64),

    #[error("too few samples: {got} (need at least {need})")]
    SampleSize { got: usize, need: usize },

    #[error("inconsistent clusterings: {0}")]
    Consistency(String),

    #[error("recursion depth {depth} exceeded after emitting {emitted} clusters")]
    RecursionDepth { depth: usize, emitted: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
