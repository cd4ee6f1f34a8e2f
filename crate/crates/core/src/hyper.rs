//! Dirichlet hyperparameters shared by every sampler.

use alloc::vec::Vec;

/// Model priors: per-topic α (symmetric scalar unless a full vector is
/// supplied) and symmetric per-word β, together with their sums ᾱ = Σ_k α_k
/// and β̄ = Σ_w β_w.
#[derive(Debug, Clone)]
pub struct Hyperparams {
    num_topics: u32,
    alpha: f64,
    alpha_vec: Option<Vec<f64>>,
    alpha_bar: f64,
    beta: f64,
    beta_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HyperError {
    #[error("alpha must be positive")]
    NonPositiveAlpha,
    #[error("beta must be positive")]
    NonPositiveBeta,
    #[error("topic count must be positive")]
    ZeroTopics,
    #[error("alpha vector length {got} does not match topic count {topics}")]
    AlphaLen { got: usize, topics: u32 },
}

impl Hyperparams {
    /// Symmetric priors: α_k = alpha for all k, β_w = beta for all w.
    pub fn symmetric(
        num_topics: u32,
        vocab_size: u32,
        alpha: f64,
        beta: f64,
    ) -> Result<Self, HyperError> {
        if num_topics == 0 {
            return Err(HyperError::ZeroTopics);
        }
        if !(alpha > 0.0) {
            return Err(HyperError::NonPositiveAlpha);
        }
        if !(beta > 0.0) {
            return Err(HyperError::NonPositiveBeta);
        }
        Ok(Self {
            num_topics,
            alpha,
            alpha_vec: None,
            alpha_bar: alpha * num_topics as f64,
            beta,
            beta_bar: beta * vocab_size as f64,
        })
    }

    /// Asymmetric per-topic α with symmetric β.
    pub fn with_alpha_vec(
        alpha_vec: Vec<f64>,
        vocab_size: u32,
        beta: f64,
    ) -> Result<Self, HyperError> {
        let num_topics = alpha_vec.len() as u32;
        if num_topics == 0 {
            return Err(HyperError::ZeroTopics);
        }
        if alpha_vec.iter().any(|&a| !(a > 0.0)) {
            return Err(HyperError::NonPositiveAlpha);
        }
        if !(beta > 0.0) {
            return Err(HyperError::NonPositiveBeta);
        }
        let alpha_bar = alpha_vec.iter().sum();
        Ok(Self {
            num_topics,
            alpha: alpha_vec[0],
            alpha_vec: Some(alpha_vec),
            alpha_bar,
            beta,
            beta_bar: beta * vocab_size as f64,
        })
    }

    #[inline]
    pub fn num_topics(&self) -> u32 {
        self.num_topics
    }

    #[inline]
    pub fn alpha(&self, k: u32) -> f64 {
        match &self.alpha_vec {
            Some(v) => v[k as usize],
            None => self.alpha,
        }
    }

    #[inline]
    pub fn alpha_bar(&self) -> f64 {
        self.alpha_bar
    }

    /// Symmetric β_w (the same for every word).
    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn beta_bar(&self) -> f64 {
        self.beta_bar
    }

    /// The α_k weights as a dense vector (used to build the static prior
    /// alias table for the doc-proposal).
    pub fn alpha_weights(&self) -> Vec<f64> {
        match &self.alpha_vec {
            Some(v) => v.clone(),
            None => alloc::vec![self.alpha; self.num_topics as usize],
        }
    }
}
