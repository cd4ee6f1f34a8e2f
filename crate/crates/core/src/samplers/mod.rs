//! Token samplers. All four kinds draw a new topic for one token given the
//! current count tables and leave every conservation invariant intact.
//!
//! The sampler reads word-topic and summary counts through a [`ModelView`].
//! A [`DirectView`] mutates live tables in place (sequential semantics: later
//! tokens see earlier updates). A [`FrozenView`] reads an immutable slice
//! state and records updates in a thread-local [`DeltaBuf`] to be merged at
//! the slice boundary, which is the multi-threaded execution mode.
//!
//! Exclusion of the current token (the -di superscript) is handled
//! arithmetically: raw reads always include the token at its pre-sampling
//! topic, and samplers subtract one at that coordinate.

mod alias_lda;
mod gibbs;
mod light;
mod sparse;

pub use alias_lda::{aliaslda_token, StaleAliasTables};
pub use gibbs::gibbs_token;
pub use light::{
    light_doc_accept, light_doc_propose, light_token, light_word_accept, ExcludedCounts,
    LightTokenArgs, ProposalCounts,
};
pub use sparse::{sparse_bucket_masses, sparse_token, BucketMasses, SmoothingBucket};

use alloc::vec::Vec;

use crate::tables::{SummaryRow, WordTopicTable};

/// Which token sampler to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    /// Collapsed Gibbs, O(K) per token.
    Gibbs,
    /// Bucket-decomposed collapsed Gibbs, O(K_d + K_w) per token.
    Sparse,
    /// Metropolis-Hastings against a stale per-word dense alias proposal.
    Alias,
    /// Factorized Metropolis-Hastings cycling doc- and word-proposals.
    Light,
    /// Word-proposal-only ablation of `Light`.
    LightWordOnly,
    /// Doc-proposal-only ablation of `Light`.
    LightDocOnly,
}

impl SamplerKind {
    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Gibbs => "gibbs",
            SamplerKind::Sparse => "sparse",
            SamplerKind::Alias => "alias",
            SamplerKind::Light => "light",
            SamplerKind::LightWordOnly => "light-word-only",
            SamplerKind::LightDocOnly => "light-doc-only",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "gibbs" => SamplerKind::Gibbs,
            "sparse" => SamplerKind::Sparse,
            "alias" => SamplerKind::Alias,
            "light" => SamplerKind::Light,
            "light-word-only" => SamplerKind::LightWordOnly,
            "light-doc-only" => SamplerKind::LightDocOnly,
            _ => return None,
        })
    }

    /// Whether this kind runs the factorized Metropolis-Hastings loop.
    pub fn is_light(self) -> bool {
        matches!(
            self,
            SamplerKind::Light | SamplerKind::LightWordOnly | SamplerKind::LightDocOnly
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    /// Metropolis-Hastings sub-steps per token. For `Light` the sub-steps
    /// alternate doc, word, doc, word, ...
    pub mh_steps: u32,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(kind: SamplerKind, mh_steps: u32, seed: u64) -> Self {
        assert!(mh_steps >= 1, "mh_steps must be at least 1");
        Self {
            kind,
            mh_steps,
            seed,
        }
    }
}

/// Thread-local buffer of pending word-topic and summary updates.
#[derive(Debug, Clone)]
pub struct DeltaBuf {
    pub entries: Vec<(u32, u32, i32)>,
    pub summary: Vec<i64>,
}

impl DeltaBuf {
    pub fn new(num_topics: u32) -> Self {
        Self {
            entries: Vec::new(),
            summary: alloc::vec![0; num_topics as usize],
        }
    }

    #[inline]
    pub fn record_move(&mut self, w: u32, from: u32, to: u32) {
        if from == to {
            return;
        }
        self.entries.push((w, from, -1));
        self.entries.push((w, to, 1));
        self.summary[from as usize] -= 1;
        self.summary[to as usize] += 1;
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.summary.iter().all(|&d| d == 0)
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.summary.fill(0);
    }
}

/// Read access to word-topic and summary counts plus a commit hook for a
/// finished token. Raw reads include the current token at its pre-sampling
/// topic.
pub trait ModelView {
    /// True when commits are visible to subsequent reads through this view.
    const LIVE: bool;

    fn num_topics(&self) -> u32;
    fn word_count(&self, w: u32, k: u32) -> i64;
    fn topic_total(&self, k: u32) -> i64;
    fn for_each_word_nonzero(&self, w: u32, f: impl FnMut(u32, i64));
    /// The token moved `from -> to`. No-op when `from == to`.
    fn commit_move(&mut self, w: u32, from: u32, to: u32);
}

/// Mutates live tables in place; optionally records deltas for a server push.
pub struct DirectView<'a> {
    pub word_topic: &'a mut WordTopicTable,
    pub summary: &'a mut SummaryRow,
    pub deltas: Option<&'a mut DeltaBuf>,
}

impl ModelView for DirectView<'_> {
    const LIVE: bool = true;

    #[inline]
    fn num_topics(&self) -> u32 {
        self.word_topic.num_topics()
    }

    #[inline]
    fn word_count(&self, w: u32, k: u32) -> i64 {
        self.word_topic.get(w, k) as i64
    }

    #[inline]
    fn topic_total(&self, k: u32) -> i64 {
        self.summary.get(k)
    }

    #[inline]
    fn for_each_word_nonzero(&self, w: u32, mut f: impl FnMut(u32, i64)) {
        self.word_topic.for_each_nonzero(w, |k, c| f(k, c as i64));
    }

    #[inline]
    fn commit_move(&mut self, w: u32, from: u32, to: u32) {
        if from == to {
            return;
        }
        self.word_topic.update(w, from, -1);
        self.word_topic.update(w, to, 1);
        self.summary.update(from, -1);
        self.summary.update(to, 1);
        if let Some(deltas) = self.deltas.as_deref_mut() {
            deltas.record_move(w, from, to);
        }
    }
}

/// Reads an immutable slice state; commits only touch the delta buffer.
pub struct FrozenView<'a> {
    pub word_topic: &'a WordTopicTable,
    pub summary: &'a SummaryRow,
    pub deltas: &'a mut DeltaBuf,
}

impl ModelView for FrozenView<'_> {
    const LIVE: bool = false;

    #[inline]
    fn num_topics(&self) -> u32 {
        self.word_topic.num_topics()
    }

    #[inline]
    fn word_count(&self, w: u32, k: u32) -> i64 {
        self.word_topic.get(w, k) as i64
    }

    #[inline]
    fn topic_total(&self, k: u32) -> i64 {
        self.summary.get(k)
    }

    #[inline]
    fn for_each_word_nonzero(&self, w: u32, mut f: impl FnMut(u32, i64)) {
        self.word_topic.for_each_nonzero(w, |k, c| f(k, c as i64));
    }

    #[inline]
    fn commit_move(&mut self, w: u32, from: u32, to: u32) {
        if from == to {
            return;
        }
        self.deltas.record_move(w, from, to);
    }
}

/// Reusable per-thread buffers for the samplers.
#[derive(Debug)]
pub struct SamplerScratch {
    pub masses: Vec<f64>,
    pub topics_a: Vec<u32>,
    pub masses_a: Vec<f64>,
    pub topics_b: Vec<u32>,
    pub masses_b: Vec<f64>,
}

impl SamplerScratch {
    pub fn new(num_topics: u32) -> Self {
        Self {
            masses: Vec::with_capacity(num_topics as usize),
            topics_a: Vec::new(),
            masses_a: Vec::new(),
            topics_b: Vec::new(),
            masses_b: Vec::new(),
        }
    }
}

/// Draws an index proportional to `masses` using one uniform variate in
/// [0, 1). Falls back to the last positive entry if rounding pushes the
/// cursor past the end.
#[inline]
pub(crate) fn draw_from_masses(masses: &[f64], total: f64, u: f64) -> usize {
    debug_assert!(total > 0.0);
    let mut cursor = u * total;
    let mut last_positive = 0usize;
    for (i, &m) in masses.iter().enumerate() {
        if m > 0.0 {
            if cursor < m {
                return i;
            }
            cursor -= m;
            last_positive = i;
        }
    }
    last_positive
}
