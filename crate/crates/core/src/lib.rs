//! Core inference machinery for collapsed LDA: count tables, alias sampling
//! structures, the token samplers (collapsed Gibbs, sparse bucket, stale-alias
//! Metropolis-Hastings and the factorized cycle-proposal sampler), likelihood
//! evaluation and an exact-posterior enumeration oracle for tiny corpora.
//!
//! The crate is `no_std`-compatible (requires `alloc`); everything that touches
//! files, threads or the network lives in the companion `lda-engine` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod alias;
pub mod hyper;
pub mod likelihood;
mod math;
pub mod posterior;
pub mod proposal;
pub mod rng;
pub mod samplers;
pub mod snapshot;
pub mod tables;

pub use hyper::Hyperparams;
pub use likelihood::LikelihoodReport;
pub use snapshot::SliceSnapshot;

/// A token paired with its current topic assignment. Tokens are stored
/// side-by-side with their topic indicators so that a sampling pass touches
/// one contiguous array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(C)]
pub struct TokenTopicPair {
    pub word: u32,
    pub topic: u32,
}

impl TokenTopicPair {
    #[inline]
    pub fn new(word: u32, topic: u32) -> Self {
        Self { word, topic }
    }
}
