//! Collapsed joint log-likelihood log p(w, z): a document part from the
//! doc-topic counts and a word part from the word-topic table, each a
//! Dirichlet-multinomial marginal. The two parts sum to the total.

use alloc::vec::Vec;

use crate::hyper::Hyperparams;
use crate::math::ln_gamma;
use crate::tables::{DocTopicSparse, SummaryRow, WordTopicTable};

pub use crate::math::ln_gamma as log_gamma;

/// Likelihood split used by the convergence reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodReport {
    pub doc_loglik: f64,
    pub word_loglik: f64,
    pub total_loglik: f64,
    pub nonzero_entries: u64,
}

impl LikelihoodReport {
    pub fn new(doc_loglik: f64, word_loglik: f64, nonzero_entries: u64) -> Self {
        Self {
            doc_loglik,
            word_loglik,
            total_loglik: doc_loglik + word_loglik,
            nonzero_entries,
        }
    }
}

/// Contribution of a single document:
/// ln Γ(ᾱ) − ln Γ(n_d + ᾱ) + Σ_k [ln Γ(n_kd + α_k) − ln Γ(α_k)].
pub fn doc_loglik_term(doc: &DocTopicSparse, hp: &Hyperparams) -> f64 {
    let mut ll = ln_gamma(hp.alpha_bar()) - ln_gamma(doc.n_d() as f64 + hp.alpha_bar());
    for &(k, c) in doc.entries() {
        ll += ln_gamma(c as f64 + hp.alpha(k)) - ln_gamma(hp.alpha(k));
    }
    ll
}

pub fn doc_loglik<'a>(docs: impl IntoIterator<Item = &'a DocTopicSparse>, hp: &Hyperparams) -> f64 {
    docs.into_iter().map(|d| doc_loglik_term(d, hp)).sum()
}

/// Word part:
/// Σ_k [ln Γ(β̄) − ln Γ(n_k + β̄)] + Σ_{w,k: n_kw>0} [ln Γ(n_kw + β_w) − ln Γ(β_w)].
/// Zero entries contribute nothing, so the cost is O(K + nnz).
pub fn word_loglik(table: &WordTopicTable, summary: &SummaryRow, hp: &Hyperparams) -> f64 {
    let lg_beta_bar = ln_gamma(hp.beta_bar());
    let lg_beta = ln_gamma(hp.beta());
    let mut ll = 0.0f64;
    for k in 0..summary.num_topics() {
        ll += lg_beta_bar - ln_gamma(summary.get(k) as f64 + hp.beta_bar());
    }
    for w in 0..table.num_words() {
        table.for_each_nonzero(w, |_, c| {
            ll += ln_gamma(c as f64 + hp.beta()) - lg_beta;
        });
    }
    ll
}

/// Posterior-mean point estimate of the topic-word distributions:
/// φ̂_kw = (n_kw + β_w)/(n_k + β̄). Returns K rows of length V; each row sums
/// to one. Dense output, intended for desk-scale models.
pub fn estimate_phi(
    table: &WordTopicTable,
    summary: &SummaryRow,
    hp: &Hyperparams,
) -> Vec<Vec<f64>> {
    let num_topics = summary.num_topics();
    let vocab = table.num_words();
    let mut phi = Vec::with_capacity(num_topics as usize);
    for k in 0..num_topics {
        let denom = summary.get(k) as f64 + hp.beta_bar();
        let mut row = alloc::vec![hp.beta() / denom; vocab as usize];
        for w in 0..vocab {
            let c = table.get(w, k);
            if c != 0 {
                row[w as usize] = (c as f64 + hp.beta()) / denom;
            }
        }
        phi.push(row);
    }
    phi
}

/// Posterior-mean point estimate of the per-document topic mixtures:
/// θ̂_kd = (n_kd + α_k)/(n_d + ᾱ). One row per document, each summing to one.
pub fn estimate_theta(docs: &[DocTopicSparse], hp: &Hyperparams) -> Vec<Vec<f64>> {
    docs.iter()
        .map(|doc| {
            let denom = doc.n_d() as f64 + hp.alpha_bar();
            let mut row: Vec<f64> = (0..hp.num_topics())
                .map(|k| hp.alpha(k) / denom)
                .collect();
            for &(k, c) in doc.entries() {
                row[k as usize] = (c as f64 + hp.alpha(k)) / denom;
            }
            row
        })
        .collect()
}
