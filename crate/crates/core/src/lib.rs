//! Returning-secretary online algorithms.
//!
//! Items arrive `k` times each in uniformly random order and a decision about
//! an item may be made any time before its last arrival. The crate provides:
//!
//! * [`arrival`]: permutation and continuous-time arrival streams,
//! * [`secretary`]: stopping policies and closed-form win probabilities,
//! * [`oracle`]: exhaustive enumeration for tiny instances,
//! * [`matroid`]: returning matroid secretary with uniform, graphic and
//!   transversal matroids,
//! * [`matching`]: returning bipartite edge-weighted matching,
//! * [`harness`]: seeded Monte Carlo experiments and reports.

pub mod arrival;
pub mod cli;
pub mod error;
pub mod harness;
pub mod matching;
pub mod matroid;
pub mod oracle;
pub mod rng;
pub mod secretary;

pub use arrival::{
    gen_permutation_sequence, gen_timed_sequence, ArrivalEvent, ArrivalSequence, ItemId,
};
pub use error::{Error, Result};
