//! Bucket-decomposed collapsed Gibbs sampling. The conditional splits into a
//! smoothing bucket α_k·β_w/(n_k + β̄), a doc bucket n_kd·β_w/(n_k + β̄) and a
//! word bucket n_kw·(n_kd + α_k)/(n_k + β̄); the smoothing bucket's mass is
//! cached and maintained incrementally, the other two cost O(K_d) and O(K_w).

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::hyper::Hyperparams;
use crate::rng::uniform_f64;
use crate::samplers::{ModelView, SamplerScratch};
use crate::tables::DocState;

const REFRESH_EVERY: u64 = 1 << 20;

/// Cached Σ_k α_k/(n_k + β̄) over the raw (token-attached) topic totals of
/// one view. Adjusted in O(1) when a total changes; refreshed periodically
/// to cap float drift.
#[derive(Debug, Clone)]
pub struct SmoothingBucket {
    value: f64,
    updates: u64,
}

impl SmoothingBucket {
    pub fn build<V: ModelView>(view: &V, hp: &Hyperparams) -> Self {
        let mut cache = Self {
            value: 0.0,
            updates: 0,
        };
        cache.rebuild(view, hp);
        cache
    }

    pub fn rebuild<V: ModelView>(&mut self, view: &V, hp: &Hyperparams) {
        let beta_bar = hp.beta_bar();
        let mut value = 0.0f64;
        for k in 0..view.num_topics() {
            value += hp.alpha(k) / (view.topic_total(k) as f64 + beta_bar);
        }
        self.value = value;
        self.updates = 0;
    }

    #[inline]
    pub fn on_total_change(&mut self, k: u32, old: i64, new: i64, hp: &Hyperparams) {
        let beta_bar = hp.beta_bar();
        self.value += hp.alpha(k) * (1.0 / (new as f64 + beta_bar) - 1.0 / (old as f64 + beta_bar));
        self.updates += 1;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    fn needs_refresh(&self) -> bool {
        self.updates >= REFRESH_EVERY
    }
}

/// Per-topic masses of the three buckets with the current token excluded;
/// used to check the decomposition against the plain conditional.
#[derive(Debug, Clone)]
pub struct BucketMasses {
    pub smoothing: Vec<f64>,
    pub doc: Vec<f64>,
    pub word: Vec<f64>,
}

/// Evaluates all three buckets densely (O(K)); test and oracle support.
pub fn sparse_bucket_masses<V: ModelView, D: DocState>(
    view: &V,
    doc: &D,
    w: u32,
    current: u32,
    hp: &Hyperparams,
) -> BucketMasses {
    let num_topics = view.num_topics();
    let beta = hp.beta();
    let beta_bar = hp.beta_bar();
    let mut smoothing = Vec::with_capacity(num_topics as usize);
    let mut doc_bucket = alloc::vec![0.0f64; num_topics as usize];
    let mut word_bucket = alloc::vec![0.0f64; num_topics as usize];
    for k in 0..num_topics {
        let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
        smoothing.push(hp.alpha(k) * beta / (n_k + beta_bar));
    }
    doc.for_each(|k, c| {
        let c = c - (k == current) as u32;
        if c > 0 {
            let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
            doc_bucket[k as usize] = c as f64 * beta / (n_k + beta_bar);
        }
    });
    view.for_each_word_nonzero(w, |k, c| {
        let c = c - (k == current) as i64;
        if c > 0 {
            let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
            let n_kd = (doc.count(k) - (k == current) as u32) as f64;
            word_bucket[k as usize] = c as f64 * (n_kd + hp.alpha(k)) / (n_k + beta_bar);
        }
    });
    BucketMasses {
        smoothing,
        doc: doc_bucket,
        word: word_bucket,
    }
}

/// Resamples one token; identical distribution to `gibbs_token` but with
/// O(K_d + K_w) work per token.
///
/// The caller passes the document with the token still attached; the cache
/// must correspond to this view's raw totals (rebuild it per slice for
/// frozen views; live views keep it adjusted here).
pub fn sparse_token<V: ModelView, D: DocState, R: RngCore>(
    view: &mut V,
    doc: &mut D,
    w: u32,
    current: u32,
    hp: &Hyperparams,
    cache: &mut SmoothingBucket,
    scratch: &mut SamplerScratch,
    rng: &mut R,
) -> u32 {
    if cache.needs_refresh() {
        cache.rebuild(view, hp);
    }
    doc.decr(current);
    let beta = hp.beta();
    let beta_bar = hp.beta_bar();

    // Smoothing bucket: cached value adjusted for the excluded token.
    let n_cur = view.topic_total(current) as f64;
    let r_mass = beta
        * (cache.value()
            + hp.alpha(current) * (1.0 / (n_cur - 1.0 + beta_bar) - 1.0 / (n_cur + beta_bar)));

    // Doc bucket over the document's nonzero topics.
    let topics_s = &mut scratch.topics_a;
    let masses_s = &mut scratch.masses_a;
    topics_s.clear();
    masses_s.clear();
    let mut s_mass = 0.0f64;
    doc.for_each(|k, c| {
        let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
        let m = c as f64 * beta / (n_k + beta_bar);
        topics_s.push(k);
        masses_s.push(m);
        s_mass += m;
    });

    // Word bucket over the word's nonzero topics.
    let topics_t = &mut scratch.topics_b;
    let masses_t = &mut scratch.masses_b;
    topics_t.clear();
    masses_t.clear();
    let mut t_mass = 0.0f64;
    view.for_each_word_nonzero(w, |k, c| {
        let c_excl = c - (k == current) as i64;
        if c_excl > 0 {
            let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
            let m = c_excl as f64 * (doc.count(k) as f64 + hp.alpha(k)) / (n_k + beta_bar);
            topics_t.push(k);
            masses_t.push(m);
            t_mass += m;
        }
    });

    let total = r_mass + s_mass + t_mass;
    let mut cursor = uniform_f64(rng) * total;
    let new = if cursor < t_mass {
        pick_from(topics_t, masses_t, cursor)
    } else if cursor - t_mass < s_mass {
        pick_from(topics_s, masses_s, cursor - t_mass)
    } else {
        cursor -= t_mass + s_mass;
        // Smoothing bucket: O(K) scan, rarely hit.
        let mut chosen = view.num_topics() - 1;
        for k in 0..view.num_topics() {
            let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
            let m = hp.alpha(k) * beta / (n_k + beta_bar);
            if cursor < m {
                chosen = k;
                break;
            }
            cursor -= m;
        }
        chosen
    };

    doc.incr(new);
    if V::LIVE && new != current {
        let old_cur = view.topic_total(current);
        let old_new = view.topic_total(new);
        view.commit_move(w, current, new);
        cache.on_total_change(current, old_cur, old_cur - 1, hp);
        cache.on_total_change(new, old_new, old_new + 1, hp);
    } else {
        view.commit_move(w, current, new);
    }
    new
}

#[inline]
fn pick_from(topics: &[u32], masses: &[f64], mut cursor: f64) -> u32 {
    for (i, &m) in masses.iter().enumerate() {
        if cursor < m {
            return topics[i];
        }
        cursor -= m;
    }
    *topics.last().expect("bucket drawn with zero entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::testutil::TinyState;
    use crate::samplers::{DirectView, SamplerScratch};
    use alloc::vec;
    use alloc::vec::Vec;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn random_state(rng: &mut ChaCha8Rng) -> TinyState {
        let num_topics = 2 + crate::rng::uniform_u32(rng, 6);
        let vocab = 2 + crate::rng::uniform_u32(rng, 5);
        let mut docs: Vec<Vec<(u32, u32)>> = Vec::new();
        for _ in 0..(1 + crate::rng::uniform_u32(rng, 3)) {
            let len = 1 + crate::rng::uniform_u32(rng, 8);
            let doc: Vec<(u32, u32)> = (0..len)
                .map(|_| {
                    (
                        crate::rng::uniform_u32(rng, vocab),
                        crate::rng::uniform_u32(rng, num_topics),
                    )
                })
                .collect();
            docs.push(doc);
        }
        let borrowed: Vec<&[(u32, u32)]> = docs.iter().map(|d| d.as_slice()).collect();
        TinyState::build(
            num_topics,
            vocab,
            0.1 + crate::rng::uniform_u32(rng, 10) as f64 / 10.0,
            0.05 + crate::rng::uniform_u32(rng, 10) as f64 / 20.0,
            &borrowed,
        )
    }

    #[test]
    fn buckets_sum_to_plain_conditional_on_random_contexts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..100 {
            let mut state = random_state(&mut rng);
            let d = 0usize;
            let i = crate::rng::uniform_u32(&mut rng, state.docs[d].len() as u32) as usize;
            let oracle = state.conditional_oracle(d, i);

            let pair = state.docs[d][i];
            let doc = core::mem::take(&mut state.doc_topics[d]);
            let view = DirectView {
                word_topic: &mut state.word_topic,
                summary: &mut state.summary,
                deltas: None,
            };
            let buckets = sparse_bucket_masses(&view, &doc, pair.word, pair.topic, &state.hp);
            for k in 0..state.hp.num_topics() as usize {
                let sum = buckets.smoothing[k] + buckets.doc[k] + buckets.word[k];
                assert!(
                    (sum - oracle[k]).abs() <= 1e-12 * (1.0 + oracle[k]),
                    "case {case} topic {k}: buckets {sum} vs oracle {}",
                    oracle[k]
                );
            }
        }
    }

    #[test]
    fn empty_document_has_zero_doc_bucket() {
        // Single-token document: once the token is excluded, n_kd = 0 for
        // every k.
        let mut state = TinyState::build(3, 2, 0.5, 0.1, &[&[(0, 1)], &[(1, 2), (1, 2)]]);
        let doc = core::mem::take(&mut state.doc_topics[0]);
        let view = DirectView {
            word_topic: &mut state.word_topic,
            summary: &mut state.summary,
            deltas: None,
        };
        let buckets = sparse_bucket_masses(&view, &doc, 0, 1, &state.hp);
        assert!(buckets.doc.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn fresh_word_has_zero_word_bucket() {
        // Word 1 appears only as this token: excluded, its row is empty.
        let mut state = TinyState::build(3, 2, 0.5, 0.1, &[&[(1, 0), (0, 2)]]);
        let doc = core::mem::take(&mut state.doc_topics[0]);
        let view = DirectView {
            word_topic: &mut state.word_topic,
            summary: &mut state.summary,
            deltas: None,
        };
        let buckets = sparse_bucket_masses(&view, &doc, 1, 0, &state.hp);
        assert!(buckets.word.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn empirical_distribution_matches_oracle() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut state = TinyState::build(
            4,
            3,
            0.3,
            0.2,
            &[&[(0, 1), (1, 2), (0, 1), (2, 3)], &[(1, 0), (2, 2)]],
        );
        let oracle = crate::samplers::testutil::normalized(&state.conditional_oracle(0, 2));

        let mut scratch = SamplerScratch::new(4);
        let draws = 100_000usize;
        let mut counts = vec![0u64; 4];
        let mut doc = core::mem::take(&mut state.doc_topics[0]);
        let mut cur = state.docs[0][2].topic;
        for _ in 0..draws {
            let mut view = DirectView {
                word_topic: &mut state.word_topic,
                summary: &mut state.summary,
                deltas: None,
            };
            let mut cache = SmoothingBucket::build(&view, &state.hp);
            let z = sparse_token(
                &mut view,
                &mut doc,
                0,
                cur,
                &state.hp,
                &mut cache,
                &mut scratch,
                &mut rng,
            );
            counts[z as usize] += 1;
            let mut view = DirectView {
                word_topic: &mut state.word_topic,
                summary: &mut state.summary,
                deltas: None,
            };
            doc.dec(z);
            doc.inc(1);
            view.commit_move(0, z, 1);
            cur = 1;
        }
        let mut chi2 = 0.0;
        for k in 0..4 {
            let expect = draws as f64 * oracle[k];
            if expect > 0.0 {
                let diff = counts[k] as f64 - expect;
                chi2 += diff * diff / expect;
            }
        }
        let p = 1.0 - ChiSquared::new(3.0).unwrap().cdf(chi2);
        assert!(p > 0.01, "chi2 {chi2} p {p}");
    }

    #[test]
    fn smoothing_cache_tracks_rebuild_under_updates() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut state = TinyState::build(5, 3, 0.7, 0.3, &[&[(0, 0), (1, 1), (2, 2)]]);
        let mut view = DirectView {
            word_topic: &mut state.word_topic,
            summary: &mut state.summary,
            deltas: None,
        };
        let mut cache = SmoothingBucket::build(&view, &state.hp);
        for _ in 0..20_000 {
            let k = crate::rng::uniform_u32(&mut rng, 5);
            let old = view.topic_total(k);
            let delta = if old > 0 && rng.next_u64() % 2 == 0 {
                -1i64
            } else {
                1i64
            };
            view.summary.update(k, delta);
            cache.on_total_change(k, old, old + delta, &state.hp);
        }
        let mut fresh = SmoothingBucket::build(&view, &state.hp);
        fresh.rebuild(&view, &state.hp);
        assert!(
            (cache.value() - fresh.value()).abs() <= 1e-9 * (1.0 + fresh.value()),
            "cache drifted: {} vs {}",
            cache.value(),
            fresh.value()
        );
    }
}
