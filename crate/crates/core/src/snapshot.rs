//! Immutable snapshots of a vocabulary slice of the word-topic table plus
//! the summary row, as fetched by a worker. Proposal structures and the
//! Metropolis-Hastings correction factors both read from the same snapshot.

use alloc::vec::Vec;

use crate::tables::{SummaryRow, WordTopicTable};

/// Frozen rows for one vocabulary slice: CSR-style (topic, count) lists per
/// word, sorted by topic, plus the summary row at snapshot time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceSnapshot {
    words: Vec<u32>,
    offsets: Vec<u32>,
    entries: Vec<(u32, i32)>,
    summary: Vec<i64>,
}

impl SliceSnapshot {
    /// Snapshots `words` (must be sorted ascending) out of the live table.
    pub fn capture(table: &WordTopicTable, summary: &SummaryRow, words: &[u32]) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        let mut offsets = Vec::with_capacity(words.len() + 1);
        let mut entries = Vec::new();
        offsets.push(0u32);
        for &w in words {
            entries.extend(table.sorted_row(w));
            offsets.push(entries.len() as u32);
        }
        Self {
            words: words.to_vec(),
            offsets,
            entries,
            summary: summary.totals().to_vec(),
        }
    }

    pub fn from_parts(words: Vec<u32>, rows: Vec<Vec<(u32, i32)>>, summary: Vec<i64>) -> Self {
        debug_assert_eq!(words.len(), rows.len());
        let mut offsets = Vec::with_capacity(words.len() + 1);
        let mut entries = Vec::new();
        offsets.push(0u32);
        for mut row in rows {
            row.sort_unstable_by_key(|&(k, _)| k);
            entries.extend(row);
            offsets.push(entries.len() as u32);
        }
        Self {
            words,
            offsets,
            entries,
            summary,
        }
    }

    #[inline]
    pub fn num_words(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    /// Position of `word` within the slice, if covered.
    pub fn find(&self, word: u32) -> Option<usize> {
        self.words.binary_search(&word).ok()
    }

    /// The (topic, count) row of the word at slice position `idx`.
    #[inline]
    pub fn row(&self, idx: usize) -> &[(u32, i32)] {
        let lo = self.offsets[idx] as usize;
        let hi = self.offsets[idx + 1] as usize;
        &self.entries[lo..hi]
    }

    /// Snapshot n_kw for the word at slice position `idx`.
    #[inline]
    pub fn row_count(&self, idx: usize, k: u32) -> i32 {
        let row = self.row(idx);
        match row.binary_search_by_key(&k, |&(topic, _)| topic) {
            Ok(at) => row[at].1,
            Err(_) => 0,
        }
    }

    /// Snapshot summary row n_k.
    #[inline]
    pub fn summary(&self) -> &[i64] {
        &self.summary
    }

    #[inline]
    pub fn summary_count(&self, k: u32) -> i64 {
        self.summary[k as usize]
    }

    pub fn nonzeros(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn num_topics(&self) -> u32 {
        self.summary.len() as u32
    }
}
