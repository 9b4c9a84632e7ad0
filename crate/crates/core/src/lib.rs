//! Mimicking networks for k-terminal networks with exact rational costs.
//!
//! The crate compresses a network into a smaller one on the same terminals
//! that preserves every minimum terminal-bipartition cut value, checks the
//! planar structure behind the compression through duality, and runs the
//! matching lower-bound experiments (cutset-edge incidence ranks, extremal
//! families, and an explicit terminal-cut table).

pub mod error;
pub(crate) mod flow;
pub mod format;
pub mod generate;
pub mod incidence;
pub mod lowerbound;
pub mod mimick;
pub mod mincut;
pub mod network;
pub mod oracle;
pub mod planar;
pub mod report;
pub mod tcscheme;

pub use error::{Error, Result};
pub use mincut::{min_separating_cut, uniqueness_by_flow, CutResult, CutSolver, GapReport, GapValue};
pub use network::{
    contract, connected_components, enumerate_bipartitions, ratio, whole, Bipartition, ContractionMap, Edge,
    EdgeSet, Network, Rational,
};
pub use incidence::{build_incidence, perturb, IncidenceMatrix, PerturbConfig, PerturbScope, PerturbedNetwork};
pub use mimick::{build_by_contraction, build_by_signature, verify, verify_generalized, MimickingResult};
pub use planar::{build_dual, DualGraph, PlaneEmbedding};
pub use report::{ClaimRecord, Report, Verdict};
pub use tcscheme::TcStore;
