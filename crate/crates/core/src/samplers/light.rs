//! Factorized Metropolis-Hastings sampling: cheap doc- and word-proposals
//! applied as an alternating cycle, each corrected by an O(1) acceptance
//! ratio so the chain targets the exact collapsed conditional.

use rand_core::RngCore;

use crate::alias::AliasTable;
use crate::hyper::Hyperparams;
use crate::proposal::SparseWordProposal;
use crate::rng::{uniform_f64, uniform_u32};
use crate::samplers::{ModelView, SamplerKind};
use crate::snapshot::SliceSnapshot;
use crate::tables::DocState;
use crate::TokenTopicPair;

/// Target-side factors with the current token excluded (the -di counts),
/// for both the current state `s` and the proposed state `t`.
#[derive(Debug, Clone, Copy)]
pub struct ExcludedCounts {
    pub n_sd: f64,
    pub n_sw: f64,
    pub n_s: f64,
    pub n_td: f64,
    pub n_tw: f64,
    pub n_t: f64,
}

/// Word-proposal factors as seen by the proposal itself (snapshot counts
/// when the proposal was built from a snapshot, live counts otherwise).
#[derive(Debug, Clone, Copy)]
pub struct ProposalCounts {
    pub n_sw: f64,
    pub n_tw: f64,
    pub n_s: f64,
    pub n_t: f64,
}

/// Acceptance probability for a word-proposal transition s → t: the exact
/// target ratio times the proposal ratio p_w(s)/p_w(t), evaluated in O(1).
#[inline]
pub fn light_word_accept(
    s: u32,
    t: u32,
    ex: &ExcludedCounts,
    pc: &ProposalCounts,
    hp: &Hyperparams,
) -> f64 {
    if s == t {
        return 1.0;
    }
    let beta = hp.beta();
    let beta_bar = hp.beta_bar();
    let num = (ex.n_td + hp.alpha(t))
        * (ex.n_tw + beta)
        * (ex.n_s + beta_bar)
        * (pc.n_sw + beta)
        * (pc.n_t + beta_bar);
    let den = (ex.n_sd + hp.alpha(s))
        * (ex.n_sw + beta)
        * (ex.n_t + beta_bar)
        * (pc.n_tw + beta)
        * (pc.n_s + beta_bar);
    (num / den).min(1.0)
}

/// Acceptance probability for a doc-proposal transition s → t. The
/// doc-proposal factors n_sd + α_s and n_td + α_t use live counts (the
/// proposal redraws from the document's current token array every step).
#[inline]
pub fn light_doc_accept(
    s: u32,
    t: u32,
    ex: &ExcludedCounts,
    n_sd_live: f64,
    n_td_live: f64,
    hp: &Hyperparams,
) -> f64 {
    if s == t {
        return 1.0;
    }
    let beta = hp.beta();
    let beta_bar = hp.beta_bar();
    let num = (ex.n_td + hp.alpha(t))
        * (ex.n_tw + beta)
        * (ex.n_s + beta_bar)
        * (n_sd_live + hp.alpha(s));
    let den = (ex.n_sd + hp.alpha(s))
        * (ex.n_sw + beta)
        * (ex.n_t + beta_bar)
        * (n_td_live + hp.alpha(t));
    (num / den).min(1.0)
}

/// Draws from the doc-proposal p_d(k) ∝ n_kd + α_k in O(1): with probability
/// n_d/(n_d + ᾱ) the document's own token array serves as the alias table
/// (pick a uniform token and return its topic, current token included);
/// otherwise draw from the static α_k alias table.
#[inline]
pub fn light_doc_propose<R: RngCore + ?Sized>(
    pairs: &[TokenTopicPair],
    alpha_alias: &AliasTable,
    alpha_bar: f64,
    rng: &mut R,
) -> u32 {
    let n_d = pairs.len();
    debug_assert!(n_d >= 1);
    let pick = uniform_f64(rng) * (n_d as f64 + alpha_bar);
    if pick < n_d as f64 {
        pairs[uniform_u32(rng, n_d as u32) as usize].topic
    } else {
        alpha_alias.draw_with(rng)
    }
}

/// Everything `light_token` needs besides the mutable views.
pub struct LightTokenArgs<'a> {
    /// The document's full (word, topic) array; `index` is the token being
    /// resampled. Updated in place as sub-steps accept.
    pub pairs: &'a mut [TokenTopicPair],
    pub index: usize,
    /// Snapshot the word proposal was built from; also supplies the
    /// unsuperscripted factors of the word-proposal acceptance ratio.
    pub snapshot: &'a SliceSnapshot,
    /// Position of the token's word within the snapshot.
    pub word_idx: usize,
    pub word_proposal: &'a SparseWordProposal<'a>,
    /// Static alias over the α_k weights.
    pub alpha_alias: &'a AliasTable,
}

/// Runs `mh_steps` Metropolis-Hastings sub-steps for one token (doc, word,
/// doc, word, ... for the cycle kind) and returns the final topic.
pub fn light_token<V: ModelView, D: DocState, R: RngCore>(
    args: &mut LightTokenArgs<'_>,
    view: &mut V,
    doc: &mut D,
    hp: &Hyperparams,
    kind: SamplerKind,
    mh_steps: u32,
    rng: &mut R,
) -> u32 {
    let w = args.pairs[args.index].word;
    let origin = args.pairs[args.index].topic;
    doc.decr(origin);
    let mut s = origin;

    for step in 0..mh_steps {
        let use_doc = match kind {
            SamplerKind::Light => step % 2 == 0,
            SamplerKind::LightDocOnly => true,
            SamplerKind::LightWordOnly => false,
            _ => unreachable!("light_token called with a non-light sampler kind"),
        };

        let t = if use_doc {
            light_doc_propose(args.pairs, args.alpha_alias, hp.alpha_bar(), rng)
        } else {
            args.word_proposal.draw(rng)
        };
        if t == s {
            continue;
        }

        // Raw view counts include the token at its origin topic; subtract it
        // there. The document was detached above, so its counts are already
        // exclusion-adjusted.
        let ex = ExcludedCounts {
            n_sd: doc.count(s) as f64,
            n_sw: (view.word_count(w, s) - (s == origin) as i64) as f64,
            n_s: (view.topic_total(s) - (s == origin) as i64) as f64,
            n_td: doc.count(t) as f64,
            n_tw: (view.word_count(w, t) - (t == origin) as i64) as f64,
            n_t: (view.topic_total(t) - (t == origin) as i64) as f64,
        };
        let acc = if use_doc {
            // Live doc counts include this token at its current topic s.
            light_doc_accept(s, t, &ex, ex.n_sd + 1.0, ex.n_td, hp)
        } else {
            let pc = ProposalCounts {
                n_sw: args.snapshot.row_count(args.word_idx, s) as f64,
                n_tw: args.snapshot.row_count(args.word_idx, t) as f64,
                n_s: args.snapshot.summary_count(s) as f64,
                n_t: args.snapshot.summary_count(t) as f64,
            };
            light_word_accept(s, t, &ex, &pc, hp)
        };
        if acc >= 1.0 || uniform_f64(rng) < acc {
            s = t;
            // Keep the token array current: the doc-proposal reads it.
            args.pairs[args.index].topic = t;
        }
    }

    args.pairs[args.index].topic = s;
    doc.incr(s);
    view.commit_move(w, origin, s);
    s
}
