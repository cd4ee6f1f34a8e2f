//! The length-K summary row n_k: total tokens assigned to each topic.

use alloc::vec::Vec;

/// 64-bit per-topic totals (word-topic rows are 32-bit, but the summary row
/// aggregates the whole corpus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryRow {
    totals: Vec<i64>,
}

impl SummaryRow {
    pub fn new(num_topics: u32) -> Self {
        Self {
            totals: alloc::vec![0; num_topics as usize],
        }
    }

    pub fn from_totals(totals: Vec<i64>) -> Self {
        assert!(totals.iter().all(|&c| c >= 0));
        Self { totals }
    }

    #[inline]
    pub fn num_topics(&self) -> u32 {
        self.totals.len() as u32
    }

    #[inline]
    pub fn get(&self, k: u32) -> i64 {
        self.totals[k as usize]
    }

    #[inline]
    pub fn update(&mut self, k: u32, delta: i64) {
        let v = &mut self.totals[k as usize];
        *v += delta;
        assert!(*v >= 0, "summary count went negative");
    }

    /// Total token count L.
    pub fn total(&self) -> i64 {
        self.totals.iter().sum()
    }

    pub fn totals(&self) -> &[i64] {
        &self.totals
    }
}
