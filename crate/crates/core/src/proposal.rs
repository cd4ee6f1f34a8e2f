//! The word-proposal p_w(k) ∝ (n_kw + β_w)/(n_k + β̄) over a slice snapshot,
//! decomposed into a sparse per-word part n_kw/(n_k + β̄) and a dense part
//! β_w/(n_k + β̄) shared by every word in the slice. Drawing picks a part by
//! its mass and then samples the part's alias table, so a draw is O(1) while
//! per-word build cost is only O(K_w).

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::alias::AliasTable;
use crate::hyper::Hyperparams;
use crate::rng::uniform_f64;
use crate::snapshot::SliceSnapshot;

#[derive(Debug)]
struct WordMixture {
    alias: Option<AliasTable>,
    topics: Vec<u32>,
    mass: f64,
}

/// Word proposals for every word of one slice snapshot. The dense alias over
/// 1/(n_k + β̄) is built once and shared; with symmetric β its mass is scaled
/// per word by the scalar β_w, which is exact because β_w factors out of
/// every bin.
#[derive(Debug)]
pub struct SliceProposals {
    dense: AliasTable,
    dense_mass: f64,
    words: Vec<WordMixture>,
    /// Total alias bins constructed (Σ_w K_w + K); lets tests verify the
    /// dense part is built once per slice rather than once per word.
    pub bins_built: u64,
}

impl SliceProposals {
    pub fn build(snap: &SliceSnapshot, hp: &Hyperparams) -> Self {
        let num_topics = snap.num_topics();
        let beta_bar = hp.beta_bar();
        let mut bins_built = 0u64;

        let mut inv_totals = Vec::with_capacity(num_topics as usize);
        let mut unit_mass = 0.0f64;
        for k in 0..num_topics {
            let inv = 1.0 / (snap.summary_count(k) as f64 + beta_bar);
            inv_totals.push(inv);
            unit_mass += inv;
        }
        let dense = AliasTable::build(&inv_totals).expect("positive denominators");
        bins_built += num_topics as u64;

        let mut words = Vec::with_capacity(snap.num_words());
        let mut weights: Vec<f64> = Vec::new();
        for idx in 0..snap.num_words() {
            let row = snap.row(idx);
            if row.is_empty() {
                words.push(WordMixture {
                    alias: None,
                    topics: Vec::new(),
                    mass: 0.0,
                });
                continue;
            }
            weights.clear();
            let mut topics = Vec::with_capacity(row.len());
            let mut mass = 0.0f64;
            for &(k, c) in row {
                let wgt = c as f64 * inv_totals[k as usize];
                weights.push(wgt);
                topics.push(k);
                mass += wgt;
            }
            let alias = AliasTable::build(&weights).expect("nonzero row weights");
            bins_built += row.len() as u64;
            words.push(WordMixture {
                alias: Some(alias),
                topics,
                mass,
            });
        }

        Self {
            dense,
            dense_mass: hp.beta() * unit_mass,
            words,
            bins_built,
        }
    }

    /// The assembled mixture proposal for the word at slice position `idx`.
    pub fn word(&self, idx: usize) -> SparseWordProposal<'_> {
        let mix = &self.words[idx];
        SparseWordProposal {
            sparse: mix.alias.as_ref().map(|a| (a, mix.topics.as_slice())),
            mass_sparse: mix.mass,
            dense: &self.dense,
            mass_dense: self.dense_mass,
        }
    }
}

/// One word's proposal: the sparse alias over its nonzero snapshot counts
/// plus the shared dense prior-mass alias.
#[derive(Debug, Clone, Copy)]
pub struct SparseWordProposal<'a> {
    sparse: Option<(&'a AliasTable, &'a [u32])>,
    pub mass_sparse: f64,
    dense: &'a AliasTable,
    pub mass_dense: f64,
}

impl SparseWordProposal<'_> {
    #[inline]
    pub fn total_mass(&self) -> f64 {
        self.mass_sparse + self.mass_dense
    }

    /// Draws a topic distributed as p_w(k) at snapshot time.
    #[inline]
    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> u32 {
        let pick = uniform_f64(rng) * self.total_mass();
        if pick < self.mass_sparse {
            let (alias, topics) = self.sparse.expect("sparse mass implies entries");
            topics[alias.draw_with(rng) as usize]
        } else {
            self.dense.draw_with(rng)
        }
    }

    /// Unnormalized per-topic proposal mass reconstructed from the alias
    /// tables themselves (retained plus aliased-in mass, scaled by the
    /// mixture weights). Exercises the exact tables a draw would use.
    pub fn reconstructed_masses(&self, num_topics: u32) -> Vec<f64> {
        let mut out = alloc::vec![0.0f64; num_topics as usize];
        let dense_probs = self.dense.reconstruction();
        for (k, p) in dense_probs.iter().enumerate() {
            out[k] += p * self.mass_dense;
        }
        if let Some((alias, topics)) = self.sparse {
            for (bin, p) in alias.reconstruction().iter().enumerate() {
                out[topics[bin] as usize] += p * self.mass_sparse;
            }
        }
        out
    }
}
