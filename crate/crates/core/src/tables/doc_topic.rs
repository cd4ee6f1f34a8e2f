//! Per-document sparse topic counts n_kd.

use alloc::vec::Vec;

const NO_POS: u32 = u32::MAX;

/// Topic counts a sampler reads and writes while working on one document.
///
/// Implemented both by [`DocTopicSparse`] directly (O(K_d) lookups, fine for
/// tests and tiny documents) and by [`ActiveDoc`] (O(1) lookups through a
/// per-thread dense scratch array).
pub trait DocState {
    fn count(&self, k: u32) -> u32;
    fn incr(&mut self, k: u32);
    /// Panics if the count is already zero.
    fn decr(&mut self, k: u32);
    /// Current total count (n_d, minus any detached token).
    fn n_tokens(&self) -> u32;
    /// Number of distinct topics present (K_d).
    fn topic_count(&self) -> u32;
    fn for_each(&self, f: impl FnMut(u32, u32));
}

impl<T: DocState> DocState for &mut T {
    fn count(&self, k: u32) -> u32 {
        (**self).count(k)
    }
    fn incr(&mut self, k: u32) {
        (**self).incr(k)
    }
    fn decr(&mut self, k: u32) {
        (**self).decr(k)
    }
    fn n_tokens(&self) -> u32 {
        (**self).n_tokens()
    }
    fn topic_count(&self) -> u32 {
        (**self).topic_count()
    }
    fn for_each(&self, f: impl FnMut(u32, u32)) {
        (**self).for_each(f)
    }
}

/// Sparse (topic, count) list for one document; entries are dropped as soon
/// as a count reaches zero so the list length is exactly K_d.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocTopicSparse {
    entries: Vec<(u32, u32)>,
    n_d: u32,
}

impl DocTopicSparse {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_topics(topics: impl IntoIterator<Item = u32>) -> Self {
        let mut doc = Self::new();
        for k in topics {
            doc.incr(k);
        }
        doc
    }

    pub fn get(&self, k: u32) -> u32 {
        self.entries
            .iter()
            .find(|&&(topic, _)| topic == k)
            .map_or(0, |&(_, c)| c)
    }

    pub fn inc(&mut self, k: u32) {
        self.n_d += 1;
        for entry in &mut self.entries {
            if entry.0 == k {
                entry.1 += 1;
                return;
            }
        }
        self.entries.push((k, 1));
    }

    /// Removes the entry when the count reaches zero (keeps K_d tight).
    pub fn dec(&mut self, k: u32) {
        let at = self
            .entries
            .iter()
            .position(|&(topic, _)| topic == k)
            .expect("doc-topic count went negative");
        self.n_d -= 1;
        if self.entries[at].1 == 1 {
            self.entries.swap_remove(at);
        } else {
            self.entries[at].1 -= 1;
        }
    }

    #[inline]
    pub fn n_d(&self) -> u32 {
        self.n_d
    }

    #[inline]
    pub fn k_d(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn clear(&mut self) {
        self.entries.clear();
        self.n_d = 0;
    }

    fn set_entries(&mut self, entries: &mut Vec<(u32, u32)>, n_d: u32) {
        core::mem::swap(&mut self.entries, entries);
        self.n_d = n_d;
    }
}

impl DocState for DocTopicSparse {
    fn count(&self, k: u32) -> u32 {
        self.get(k)
    }
    fn incr(&mut self, k: u32) {
        self.inc(k);
    }
    fn decr(&mut self, k: u32) {
        self.dec(k);
    }
    fn n_tokens(&self) -> u32 {
        self.n_d
    }
    fn topic_count(&self) -> u32 {
        self.k_d()
    }
    fn for_each(&self, mut f: impl FnMut(u32, u32)) {
        for &(k, c) in &self.entries {
            f(k, c);
        }
    }
}

/// Per-thread dense scratch giving O(1) doc-topic access for the document a
/// thread is currently sampling.
#[derive(Debug)]
pub struct DocScratch {
    counts: Vec<u32>,
    pos: Vec<u32>,
    nz: Vec<u32>,
    staged: Vec<(u32, u32)>,
}

impl DocScratch {
    pub fn new(num_topics: u32) -> Self {
        Self {
            counts: alloc::vec![0; num_topics as usize],
            pos: alloc::vec![NO_POS; num_topics as usize],
            nz: Vec::new(),
            staged: Vec::new(),
        }
    }

    /// Loads `doc` into the scratch. Call [`ActiveDoc::finish`] to write the
    /// updated counts back.
    pub fn begin<'a>(&'a mut self, doc: &'a mut DocTopicSparse) -> ActiveDoc<'a> {
        debug_assert!(self.nz.is_empty(), "scratch already in use");
        let mut n = 0u32;
        for &(k, c) in doc.entries.iter() {
            self.counts[k as usize] = c;
            self.pos[k as usize] = self.nz.len() as u32;
            self.nz.push(k);
            n += c;
        }
        debug_assert_eq!(n, doc.n_d);
        ActiveDoc {
            scratch: self,
            doc,
            n,
        }
    }
}

/// Live view of one document's topic counts backed by [`DocScratch`].
#[derive(Debug)]
pub struct ActiveDoc<'a> {
    scratch: &'a mut DocScratch,
    doc: &'a mut DocTopicSparse,
    n: u32,
}

impl ActiveDoc<'_> {
    /// Writes the counts back to the sparse document (entries sorted by
    /// topic for deterministic downstream iteration) and clears the scratch.
    pub fn finish(self) {
        let scratch = self.scratch;
        scratch.nz.sort_unstable();
        scratch.staged.clear();
        for &k in &scratch.nz {
            let c = scratch.counts[k as usize];
            if c > 0 {
                scratch.staged.push((k, c));
            }
            scratch.counts[k as usize] = 0;
            scratch.pos[k as usize] = NO_POS;
        }
        scratch.nz.clear();
        self.doc.set_entries(&mut scratch.staged, self.n);
    }
}

impl DocState for ActiveDoc<'_> {
    #[inline]
    fn count(&self, k: u32) -> u32 {
        self.scratch.counts[k as usize]
    }

    #[inline]
    fn incr(&mut self, k: u32) {
        let ku = k as usize;
        if self.scratch.counts[ku] == 0 {
            self.scratch.pos[ku] = self.scratch.nz.len() as u32;
            self.scratch.nz.push(k);
        }
        self.scratch.counts[ku] += 1;
        self.n += 1;
    }

    #[inline]
    fn decr(&mut self, k: u32) {
        let ku = k as usize;
        assert!(self.scratch.counts[ku] > 0, "doc-topic count went negative");
        self.scratch.counts[ku] -= 1;
        self.n -= 1;
        if self.scratch.counts[ku] == 0 {
            let at = self.scratch.pos[ku] as usize;
            let last = *self.scratch.nz.last().unwrap();
            self.scratch.nz.swap_remove(at);
            if last != k {
                self.scratch.pos[last as usize] = at as u32;
            }
            self.scratch.pos[ku] = NO_POS;
        }
    }

    #[inline]
    fn n_tokens(&self) -> u32 {
        self.n
    }

    #[inline]
    fn topic_count(&self) -> u32 {
        self.scratch.nz.len() as u32
    }

    #[inline]
    fn for_each(&self, mut f: impl FnMut(u32, u32)) {
        for &k in &self.scratch.nz {
            f(k, self.scratch.counts[k as usize]);
        }
    }
}
