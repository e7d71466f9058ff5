use serde::{Deserialize, Serialize};

use crate::error::{parameter, Error, Result};

/// Multiplicities of `s = i_1 + ... + i_k` over `(i_1, ..., i_k) ∈ {0..ρ-1}^k`.
///
/// These collapse the k-fold sum in the kernel representation to a single
/// sum over `s` with `k(ρ-1) + 1` terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWeights {
    pub rho: u32,
    pub k: u32,
    pub counts: Vec<u64>,
}

impl KernelWeights {
    /// Largest `s` with a nonzero count, `k (ρ - 1)`.
    pub fn max_sum(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Builds the counts by `k - 1` convolutions of the all-ones vector of
/// length `ρ`, in exact integer arithmetic.
pub fn composition_counts(rho: u32, k: u32) -> Result<KernelWeights> {
    if rho < 1 || k < 1 {
        return Err(parameter("rho >= 1 and k >= 1 for composition counts"));
    }
    let total = (rho as u64)
        .checked_pow(k)
        .filter(|&t| t < 1u64 << 62)
        .ok_or_else(|| Error::Overflow(format!("rho^k = {rho}^{k} exceeds 2^62")))?;
    let width = rho as usize;
    let mut counts = vec![1u64; width];
    for _ in 1..k {
        // Sliding window of length ρ over the previous counts.
        let len = counts.len() + width - 1;
        let mut next = vec![0u64; len];
        let mut window = 0u64;
        for (s, slot) in next.iter_mut().enumerate() {
            if s < counts.len() {
                window += counts[s];
            }
            if s >= width {
                window -= counts[s - width];
            }
            *slot = window;
        }
        counts = next;
    }
    debug_assert_eq!(counts.iter().sum::<u64>(), total);
    Ok(KernelWeights { rho, k, counts })
}
