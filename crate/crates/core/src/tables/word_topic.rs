//! The hybrid word-topic table: frequent words get dense per-topic count
//! arrays, long-tail words get open-addressing hash rows with quadratic
//! probing and a load factor kept at or below 0.5.

use alloc::vec::Vec;

const EMPTY_KEY: u32 = u32::MAX;
const NO_POS: u32 = u32::MAX;

/// Storage layout for one word's row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Dense,
    Hash { capacity: u32 },
}

/// Dense row: a full K-length count array plus an index of the nonzero
/// topics so iteration costs O(K_w) rather than O(K).
#[derive(Debug, Clone)]
struct DenseRow {
    counts: Vec<i32>,
    nz: Vec<u32>,
    pos: Vec<u32>,
}

impl DenseRow {
    fn new(num_topics: u32) -> Self {
        Self {
            counts: alloc::vec![0; num_topics as usize],
            nz: Vec::new(),
            pos: alloc::vec![NO_POS; num_topics as usize],
        }
    }

    #[inline]
    fn get(&self, k: u32) -> i32 {
        self.counts[k as usize]
    }

    /// Returns (old, new) count.
    fn update(&mut self, k: u32, delta: i32) -> (i32, i32) {
        let k = k as usize;
        let old = self.counts[k];
        let new = old
            .checked_add(delta)
            .expect("word-topic count overflowed i32");
        assert!(new >= 0, "word-topic count went negative");
        self.counts[k] = new;
        if old == 0 && new > 0 {
            self.pos[k] = self.nz.len() as u32;
            self.nz.push(k as u32);
        } else if old > 0 && new == 0 {
            let at = self.pos[k] as usize;
            let last = *self.nz.last().unwrap();
            self.nz.swap_remove(at);
            if (last as usize) != k {
                self.pos[last as usize] = at as u32;
            }
            self.pos[k] = NO_POS;
        }
        (old, new)
    }

    fn heap_bytes(&self) -> u64 {
        (self.counts.capacity() * 4 + self.nz.capacity() * 4 + self.pos.capacity() * 4) as u64
    }
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    key: u32,
    count: i32,
}

/// Open-addressing row with quadratic probing over a power-of-two capacity:
/// slot(i) = (h + i·(i+1)/2) mod capacity, which visits every slot.
/// A count decremented to zero stays as a tombstone until the next rehash.
#[derive(Debug, Clone)]
struct HashRow {
    slots: Vec<Slot>,
    live: u32,
    used: u32,
}

impl HashRow {
    fn new(capacity: u32) -> Self {
        debug_assert!(capacity.is_power_of_two());
        Self {
            slots: alloc::vec![
                Slot {
                    key: EMPTY_KEY,
                    count: 0
                };
                capacity as usize
            ],
            live: 0,
            used: 0,
        }
    }

    #[inline]
    fn hash(k: u32) -> u32 {
        ((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 32) as u32
    }

    #[inline]
    fn get(&self, k: u32) -> i32 {
        let mask = self.slots.len() as u32 - 1;
        let mut idx = Self::hash(k) & mask;
        let mut step = 0u32;
        loop {
            let slot = &self.slots[idx as usize];
            if slot.key == k {
                return slot.count;
            }
            if slot.key == EMPTY_KEY {
                return 0;
            }
            step += 1;
            idx = (idx + step) & mask;
        }
    }

    /// Returns (old, new); rehashes first when the insert would push the
    /// occupancy (live entries plus tombstones) past half capacity.
    fn update(&mut self, k: u32, delta: i32) -> (i32, i32) {
        let mask = self.slots.len() as u32 - 1;
        let mut idx = Self::hash(k) & mask;
        let mut step = 0u32;
        loop {
            let slot = &mut self.slots[idx as usize];
            if slot.key == k {
                let old = slot.count;
                let new = old
                    .checked_add(delta)
                    .expect("word-topic count overflowed i32");
                assert!(new >= 0, "word-topic count went negative");
                slot.count = new;
                if old == 0 && new > 0 {
                    self.live += 1;
                } else if old > 0 && new == 0 {
                    self.live -= 1; // tombstone remains in place
                }
                return (old, new);
            }
            if slot.key == EMPTY_KEY {
                assert!(delta >= 0, "word-topic count went negative");
                if delta == 0 {
                    return (0, 0);
                }
                if 2 * (self.used + 1) > self.slots.len() as u32 {
                    self.rehash();
                    return self.update(k, delta);
                }
                let slot = &mut self.slots[idx as usize];
                slot.key = k;
                slot.count = delta;
                self.used += 1;
                self.live += 1;
                return (0, delta);
            }
            step += 1;
            idx = (idx + step) & mask;
        }
    }

    /// Drops tombstones; grows 2x when live entries alone would exceed the
    /// 0.5 load factor.
    fn rehash(&mut self) {
        let mut cap = self.slots.len() as u32;
        while 2 * (self.live + 1) > cap {
            cap *= 2;
        }
        let old = core::mem::replace(
            &mut self.slots,
            alloc::vec![
                Slot {
                    key: EMPTY_KEY,
                    count: 0
                };
                cap as usize
            ],
        );
        self.used = 0;
        self.live = 0;
        for slot in old {
            if slot.key != EMPTY_KEY && slot.count > 0 {
                self.update(slot.key, slot.count);
            }
        }
    }

    fn heap_bytes(&self) -> u64 {
        (self.slots.capacity() * core::mem::size_of::<Slot>()) as u64
    }
}

#[derive(Debug, Clone)]
enum Row {
    Dense(DenseRow),
    Hash(HashRow),
}

/// The model n_kw. Rows are dense or hashed per [`RowKind`]; counts are
/// 32-bit, with overflow or underflow treated as a bookkeeping bug (panic).
#[derive(Debug, Clone)]
pub struct WordTopicTable {
    rows: Vec<Row>,
    num_topics: u32,
    nonzeros: u64,
}

impl WordTopicTable {
    pub fn new(num_topics: u32, kinds: &[RowKind]) -> Self {
        let rows = kinds
            .iter()
            .map(|kind| match *kind {
                RowKind::Dense => Row::Dense(DenseRow::new(num_topics)),
                RowKind::Hash { capacity } => Row::Hash(HashRow::new(capacity.max(8))),
            })
            .collect();
        Self {
            rows,
            num_topics,
            nonzeros: 0,
        }
    }

    /// All-dense table (small vocabularies / tests).
    pub fn dense(num_topics: u32, num_words: u32) -> Self {
        let kinds = alloc::vec![RowKind::Dense; num_words as usize];
        Self::new(num_topics, &kinds)
    }

    /// Hybrid table sized from corpus frequencies.
    pub fn hybrid(num_topics: u32, classification: &Classification) -> Self {
        Self::new(num_topics, &classification.kinds)
    }

    #[inline]
    pub fn num_words(&self) -> u32 {
        self.rows.len() as u32
    }

    #[inline]
    pub fn num_topics(&self) -> u32 {
        self.num_topics
    }

    /// Current n_kw; absent hash entries read as zero.
    #[inline]
    pub fn get(&self, w: u32, k: u32) -> i32 {
        debug_assert!(k < self.num_topics);
        match &self.rows[w as usize] {
            Row::Dense(r) => r.get(k),
            Row::Hash(r) => r.get(k),
        }
    }

    /// Adjusts n_kw by `delta`. Panics if the count would go negative or
    /// overflow; grows hash rows as needed to keep load factor <= 0.5.
    pub fn update(&mut self, w: u32, k: u32, delta: i32) {
        debug_assert!(k < self.num_topics);
        if delta == 0 {
            return;
        }
        let (old, new) = match &mut self.rows[w as usize] {
            Row::Dense(r) => r.update(k, delta),
            Row::Hash(r) => r.update(k, delta),
        };
        if old == 0 && new > 0 {
            self.nonzeros += 1;
        } else if old > 0 && new == 0 {
            self.nonzeros -= 1;
        }
    }

    /// Number of topics word `w` currently participates in (K_w).
    pub fn nonzero_count(&self, w: u32) -> u32 {
        match &self.rows[w as usize] {
            Row::Dense(r) => r.nz.len() as u32,
            Row::Hash(r) => r.live,
        }
    }

    /// Visits exactly the nonzero (topic, count) entries of row `w`, in no
    /// particular order. O(K_w) for dense rows, O(capacity) for hash rows
    /// (capacity is at most ~2x the word's corpus frequency).
    #[inline]
    pub fn for_each_nonzero(&self, w: u32, mut f: impl FnMut(u32, i32)) {
        match &self.rows[w as usize] {
            Row::Dense(r) => {
                for &k in &r.nz {
                    f(k, r.counts[k as usize]);
                }
            }
            Row::Hash(r) => {
                for slot in &r.slots {
                    if slot.key != EMPTY_KEY && slot.count > 0 {
                        f(slot.key, slot.count);
                    }
                }
            }
        }
    }

    /// Nonzero entries of row `w` sorted by topic id (canonical order for
    /// dumps, snapshots and hashing).
    pub fn sorted_row(&self, w: u32) -> Vec<(u32, i32)> {
        let mut row = Vec::with_capacity(self.nonzero_count(w) as usize);
        self.for_each_nonzero(w, |k, c| row.push((k, c)));
        row.sort_unstable_by_key(|&(k, _)| k);
        row
    }

    pub fn row_sum(&self, w: u32) -> i64 {
        let mut sum = 0i64;
        self.for_each_nonzero(w, |_, c| sum += c as i64);
        sum
    }

    /// Total nonzero entries across all rows (the "model size" metric).
    #[inline]
    pub fn total_nonzeros(&self) -> u64 {
        self.nonzeros
    }

    /// Bytes of heap memory currently held by the rows.
    pub fn heap_bytes(&self) -> u64 {
        let mut total = (self.rows.capacity() * core::mem::size_of::<Row>()) as u64;
        for row in &self.rows {
            total += match row {
                Row::Dense(r) => r.heap_bytes(),
                Row::Hash(r) => r.heap_bytes(),
            };
        }
        total
    }

    pub fn is_dense_row(&self, w: u32) -> bool {
        matches!(self.rows[w as usize], Row::Dense(_))
    }
}

/// Result of splitting the vocabulary into dense ("hot") and hashed rows.
#[derive(Debug, Clone)]
pub struct Classification {
    pub kinds: Vec<RowKind>,
    pub dense_words: u32,
    /// Estimated bytes for the hybrid layout (count arrays, nonzero indexes,
    /// hash slots).
    pub estimated_bytes: u64,
    /// Bytes a fully dense V x K count matrix would take (4 bytes per cell).
    pub dense_matrix_bytes: u64,
}

/// Picks the `hot_fraction` most frequent words (ties broken by word id) for
/// dense storage, capped so the dense count arrays fit `memory_budget`;
/// everything else gets a hash row with power-of-two capacity >= 2x the
/// word's corpus frequency (minimum 8).
pub fn classify_words(
    freqs: &[u64],
    hot_fraction: f64,
    memory_budget: u64,
    num_topics: u32,
) -> Classification {
    assert!(
        (0.0..=1.0).contains(&hot_fraction),
        "hot_fraction must be within [0, 1]"
    );
    let v = freqs.len();
    let mut order: Vec<u32> = (0..v as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        freqs[b as usize]
            .cmp(&freqs[a as usize])
            .then(a.cmp(&b))
    });

    // counts + nonzero position index per dense row
    let dense_row_bytes = 8 * num_topics as u64;
    let mut want_hot = (hot_fraction * v as f64).floor() as usize;
    if hot_fraction >= 1.0 {
        want_hot = v;
    }
    if dense_row_bytes > 0 {
        want_hot = want_hot.min((memory_budget / dense_row_bytes) as usize);
    }

    let mut kinds = alloc::vec![RowKind::Dense; v];
    let mut estimated = 0u64;
    for (rank, &w) in order.iter().enumerate() {
        let freq = freqs[w as usize];
        if rank < want_hot {
            kinds[w as usize] = RowKind::Dense;
            estimated += dense_row_bytes + 4 * freq.min(num_topics as u64);
        } else {
            let capacity = (2 * freq).next_power_of_two().max(8) as u32;
            kinds[w as usize] = RowKind::Hash { capacity };
            estimated += capacity as u64 * 8;
        }
    }

    Classification {
        kinds,
        dense_words: want_hot as u32,
        estimated_bytes: estimated,
        dense_matrix_bytes: v as u64 * num_topics as u64 * 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{uniform_f64, uniform_u32};
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn mixed_table(num_topics: u32, num_words: u32) -> WordTopicTable {
        let kinds: Vec<RowKind> = (0..num_words)
            .map(|w| {
                if w % 2 == 0 {
                    RowKind::Dense
                } else {
                    RowKind::Hash { capacity: 8 }
                }
            })
            .collect();
        WordTopicTable::new(num_topics, &kinds)
    }

    #[test]
    fn fresh_table_reads_zero() {
        let t = mixed_table(16, 10);
        for w in 0..10 {
            for k in 0..16 {
                assert_eq!(t.get(w, k), 0);
            }
            assert_eq!(t.nonzero_count(w), 0);
        }
    }

    #[test]
    fn inc_three_dec_one() {
        let mut t = mixed_table(16, 4);
        for w in 0..4 {
            t.update(w, 5, 1);
            t.update(w, 5, 1);
            t.update(w, 5, 1);
            t.update(w, 5, -1);
            assert_eq!(t.get(w, 5), 2);
        }
    }

    #[test]
    #[should_panic(expected = "negative")]
    fn underflow_panics_dense() {
        let mut t = WordTopicTable::dense(4, 1);
        t.update(0, 0, -1);
    }

    #[test]
    #[should_panic(expected = "negative")]
    fn underflow_panics_hash() {
        let mut t = WordTopicTable::new(4, &[RowKind::Hash { capacity: 8 }]);
        t.update(0, 1, 1);
        t.update(0, 1, -2);
    }

    #[test]
    fn dense_reference_oracle_million_ops() {
        let num_words = 50u32;
        let num_topics = 64u32;
        let mut table = mixed_table(num_topics, num_words);
        let mut reference = alloc::vec![alloc::vec![0i64; num_topics as usize]; num_words as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(99);

        for op in 0..1_000_000u32 {
            let w = uniform_u32(&mut rng, num_words);
            let k = uniform_u32(&mut rng, num_topics);
            let cur = reference[w as usize][k as usize];
            // Bias towards increments so counts stay positive; decrement only
            // when legal.
            let delta = if cur > 0 && rng.next_u64() % 3 == 0 {
                -1
            } else {
                1
            };
            reference[w as usize][k as usize] += delta as i64;
            table.update(w, k, delta);

            if op % 9973 == 0 {
                let pw = uniform_u32(&mut rng, num_words);
                let pk = uniform_u32(&mut rng, num_topics);
                assert_eq!(table.get(pw, pk) as i64, reference[pw as usize][pk as usize]);
            }
        }
        let mut nnz = 0u64;
        for w in 0..num_words {
            for k in 0..num_topics {
                assert_eq!(
                    table.get(w, k) as i64,
                    reference[w as usize][k as usize],
                    "mismatch at ({w},{k})"
                );
                if reference[w as usize][k as usize] != 0 {
                    nnz += 1;
                }
            }
            // nonzero iteration yields exactly the nonzero entries
            let mut seen = alloc::vec![0i64; num_topics as usize];
            table.for_each_nonzero(w, |k, c| {
                assert!(c > 0);
                assert_eq!(seen[k as usize], 0, "duplicate topic {k} in row {w}");
                seen[k as usize] = c as i64;
            });
            assert_eq!(seen, reference[w as usize]);
        }
        assert_eq!(table.total_nonzeros(), nnz);
    }

    #[test]
    fn quadratic_probe_visits_all_slots() {
        for shift in 3..=16u32 {
            let cap = 1u32 << shift;
            let mut seen = alloc::vec![false; cap as usize];
            let start = HashRow::hash(12345) & (cap - 1);
            let mut idx = start;
            let mut step = 0u32;
            for _ in 0..cap {
                assert!(!seen[idx as usize], "slot revisited at capacity {cap}");
                seen[idx as usize] = true;
                step += 1;
                idx = (idx + step) & (cap - 1);
            }
            assert!(seen.iter().all(|&s| s), "not all slots visited at {cap}");
        }
    }

    #[test]
    fn hash_row_load_factor_bounded() {
        let mut row = HashRow::new(8);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let k = uniform_u32(&mut rng, 512);
            if uniform_f64(&mut rng) < 0.7 {
                row.update(k, 1);
            } else if row.get(k) > 0 {
                row.update(k, -1);
            }
            assert!(
                2 * row.used <= row.slots.len() as u32,
                "load factor exceeded 0.5"
            );
        }
    }

    #[test]
    fn classify_all_dense() {
        let freqs = [10u64, 5, 3, 1];
        let c = classify_words(&freqs, 1.0, u64::MAX, 32);
        assert_eq!(c.dense_words, 4);
        assert!(c.kinds.iter().all(|k| matches!(k, RowKind::Dense)));
        assert!(c.estimated_bytes >= c.dense_matrix_bytes);
    }

    #[test]
    fn classify_all_hashed() {
        let freqs = [10u64, 5, 3, 1];
        let c = classify_words(&freqs, 0.0, u64::MAX, 32);
        assert_eq!(c.dense_words, 0);
        assert!(c.kinds.iter().all(|k| matches!(k, RowKind::Hash { .. })));
        // capacity >= 2x frequency, minimum 8, power of two
        match c.kinds[0] {
            RowKind::Hash { capacity } => {
                assert!(capacity >= 20 && capacity.is_power_of_two())
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn classify_budget_caps_dense_rows() {
        let freqs = [100u64, 90, 80, 70];
        // budget for exactly two dense rows (8 bytes per topic each)
        let c = classify_words(&freqs, 1.0, 2 * 8 * 32, 32);
        assert_eq!(c.dense_words, 2);
        assert!(matches!(c.kinds[0], RowKind::Dense));
        assert!(matches!(c.kinds[1], RowKind::Dense));
        assert!(matches!(c.kinds[2], RowKind::Hash { .. }));
    }

    #[test]
    fn classify_zipf_dense_rows_cover_most_tokens() {
        // Zipf(1.0) frequency profile over a large vocabulary: top 10% of
        // words should cover at least 80% of the token mass.
        let v = 100_000usize;
        let freqs: Vec<u64> = (0..v)
            .map(|r| (1e7 / (r as f64 + 1.0)).round() as u64)
            .collect();
        let c = classify_words(&freqs, 0.1, u64::MAX, 1024);
        let total: u64 = freqs.iter().sum();
        let covered: u64 = freqs
            .iter()
            .zip(&c.kinds)
            .filter(|(_, k)| matches!(k, RowKind::Dense))
            .map(|(f, _)| *f)
            .sum();
        let frac = covered as f64 / total as f64;
        assert!(frac >= 0.80, "dense coverage {frac}");
    }

    #[test]
    fn hybrid_estimate_below_dense_when_tail_exists() {
        let freqs = [1000u64, 500, 3, 2, 1, 1, 1, 1, 1, 1];
        let c = classify_words(&freqs, 0.2, u64::MAX, 256);
        assert!(c.estimated_bytes < c.dense_matrix_bytes);
    }

    proptest::proptest! {
        #[test]
        fn random_ops_match_reference(ops in proptest::collection::vec((0u32..8, 0u32..16, proptest::bool::ANY), 1..500)) {
            let mut table = mixed_table(16, 8);
            let mut reference = alloc::vec![alloc::vec![0i64; 16]; 8];
            for (w, k, inc) in ops {
                if inc || reference[w as usize][k as usize] == 0 {
                    reference[w as usize][k as usize] += 1;
                    table.update(w, k, 1);
                } else {
                    reference[w as usize][k as usize] -= 1;
                    table.update(w, k, -1);
                }
            }
            for w in 0..8u32 {
                for k in 0..16u32 {
                    proptest::prop_assert_eq!(table.get(w, k) as i64, reference[w as usize][k as usize]);
                }
            }
        }
    }
}
