//! Plain collapsed Gibbs: draws the token's topic exactly from the full
//! conditional, O(K) per token.

use rand_core::RngCore;

use crate::hyper::Hyperparams;
use crate::rng::uniform_f64;
use crate::samplers::{draw_from_masses, ModelView, SamplerScratch};
use crate::tables::DocState;

/// Resamples one token currently assigned to `current`; returns the new
/// topic. The conditional splits into a smoothing part (n_kd + α_k)·β_w and
/// a word part (n_kd + α_k)·n_kw so only K_w entries need the word count.
pub fn gibbs_token<V: ModelView, D: DocState, R: RngCore>(
    view: &mut V,
    doc: &mut D,
    w: u32,
    current: u32,
    hp: &Hyperparams,
    scratch: &mut SamplerScratch,
    rng: &mut R,
) -> u32 {
    let num_topics = view.num_topics();
    doc.decr(current);

    let beta = hp.beta();
    let beta_bar = hp.beta_bar();
    let masses = &mut scratch.masses;
    masses.clear();
    let mut total = 0.0f64;
    for k in 0..num_topics {
        let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
        let m = (doc.count(k) as f64 + hp.alpha(k)) * beta / (n_k + beta_bar);
        masses.push(m);
        total += m;
    }
    view.for_each_word_nonzero(w, |k, c| {
        let c_excl = c - (k == current) as i64;
        if c_excl > 0 {
            let n_k = (view.topic_total(k) - (k == current) as i64) as f64;
            let m = (doc.count(k) as f64 + hp.alpha(k)) * c_excl as f64 / (n_k + beta_bar);
            masses[k as usize] += m;
            total += m;
        }
    });

    let new = draw_from_masses(masses, total, uniform_f64(rng)) as u32;
    doc.incr(new);
    view.commit_move(w, current, new);
    new
}
