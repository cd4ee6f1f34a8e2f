//! Walker alias tables: O(n) construction, O(1) draws from a fixed discrete
//! distribution.

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::rng::uniform_f64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AliasError {
    #[error("cannot build an alias table from an empty weight vector")]
    Empty,
    #[error("weight at index {0} is negative or not finite")]
    BadWeight(usize),
    #[error("all weights are zero")]
    ZeroMass,
}

/// Alias table over `n` bins. Each bin keeps the probability mass retained
/// by its own outcome (`split`, scaled so the mean bin mass is 1) and the
/// outcome that receives the remainder (`alias`).
#[derive(Debug, Clone)]
pub struct AliasTable {
    split: Vec<f64>,
    alias: Vec<u32>,
    total_mass: f64,
}

impl AliasTable {
    /// Two-worklist construction. Bins whose scaled mass lands exactly on the
    /// mean go to the small list; leftovers in either list are resolved to
    /// full bins aliased to themselves.
    pub fn build(weights: &[f64]) -> Result<Self, AliasError> {
        let n = weights.len();
        if n == 0 {
            return Err(AliasError::Empty);
        }
        let mut total = 0.0f64;
        for (i, &w) in weights.iter().enumerate() {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(AliasError::BadWeight(i));
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(AliasError::ZeroMass);
        }

        let scale = n as f64 / total;
        let mut split: Vec<f64> = weights.iter().map(|&w| w * scale).collect();
        let mut alias: Vec<u32> = (0..n as u32).collect();

        let mut small: Vec<u32> = Vec::new();
        let mut large: Vec<u32> = Vec::new();
        for (i, &s) in split.iter().enumerate() {
            if s <= 1.0 {
                small.push(i as u32);
            } else {
                large.push(i as u32);
            }
        }

        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s as usize] = l;
            // The large bin donates exactly what the small bin lacks.
            let rest = split[l as usize] - (1.0 - split[s as usize]);
            split[l as usize] = rest;
            if rest <= 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Whatever remains (numerical leftovers) keeps its full bin.
        for &i in small.iter().chain(large.iter()) {
            split[i as usize] = 1.0;
            alias[i as usize] = i;
        }

        Ok(Self {
            split,
            alias,
            total_mass: total,
        })
    }

    #[inline]
    pub fn n_bins(&self) -> usize {
        self.split.len()
    }

    /// The unnormalized mass the table was built from.
    #[inline]
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// One draw from two uniform variates in [0, 1).
    #[inline]
    pub fn draw(&self, u1: f64, u2: f64) -> u32 {
        let n = self.split.len();
        let mut bin = (u1 * n as f64) as usize;
        if bin >= n {
            bin = n - 1;
        }
        if u2 < self.split[bin] {
            bin as u32
        } else {
            self.alias[bin]
        }
    }

    #[inline]
    pub fn draw_with<R: RngCore + ?Sized>(&self, rng: &mut R) -> u32 {
        let u1 = uniform_f64(rng);
        let u2 = uniform_f64(rng);
        self.draw(u1, u2)
    }

    /// Probability each outcome receives under the table: its own retained
    /// mass plus everything aliased to it from other bins. Summed exactly in
    /// bin order; used to check the table reproduces the input weights.
    pub fn reconstruction(&self) -> Vec<f64> {
        let n = self.split.len();
        let mut probs = alloc::vec![0.0f64; n];
        for i in 0..n {
            probs[i] += self.split[i] / n as f64;
            if self.split[i] < 1.0 {
                probs[self.alias[i] as usize] += (1.0 - self.split[i]) / n as f64;
            }
        }
        probs
    }

    pub(crate) fn split_points(&self) -> &[f64] {
        &self.split
    }

    pub(crate) fn aliases(&self) -> &[u32] {
        &self.alias
    }
}
