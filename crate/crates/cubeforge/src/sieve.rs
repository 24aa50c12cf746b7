//! Bit tables over `[0, max_value]` with word-level shift kernels.
//!
//! The search and sumset modules both reduce to one primitive: intersect a
//! set with a shifted copy of itself or of another set. On 64-bit words a
//! downward shift by `s` is a word offset plus a sub-word shift, so
//! `B ∩ (B - s)` costs two reads and an AND per word instead of a hash probe
//! per element.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("sieve over [0, {max_value}] needs {needed_mb} MiB, budget is {budget_mb} MiB")]
    BudgetExceeded {
        max_value: u64,
        needed_mb: u64,
        budget_mb: u64,
    },
}

/// Environment key for the memory ceiling, in MiB.
pub const MEM_BUDGET_ENV: &str = "CUBEFORGE_MEM_BUDGET_MB";
pub const DEFAULT_MEM_BUDGET_MB: u64 = 2048;

/// Current allocation ceiling for a single sieve, in MiB.
pub fn mem_budget_mb() -> u64 {
    std::env::var(MEM_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MEM_BUDGET_MB)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSieve {
    words: Vec<u64>,
    max_value: u64,
}

impl BitSieve {
    /// All-zero table for `[0, max_value]`, refusing allocations beyond the
    /// `CUBEFORGE_MEM_BUDGET_MB` ceiling.
    pub fn empty(max_value: u64) -> Result<Self, SieveError> {
        Self::empty_with_budget(max_value, mem_budget_mb())
    }

    pub fn empty_with_budget(max_value: u64, budget_mb: u64) -> Result<Self, SieveError> {
        Self::budget_check(max_value, budget_mb)?;
        let nwords = max_value / 64 + 1;
        Ok(BitSieve {
            words: vec![0; nwords as usize],
            max_value,
        })
    }

    /// Would a sieve for `[0, max_value]` fit the environment budget?
    /// Checks without allocating.
    pub fn budget_for(max_value: u64) -> Result<(), SieveError> {
        Self::budget_check(max_value, mem_budget_mb())
    }

    fn budget_check(max_value: u64, budget_mb: u64) -> Result<(), SieveError> {
        let nwords = max_value / 64 + 1;
        let bytes = nwords.saturating_mul(8);
        if bytes > budget_mb.saturating_mul(1024 * 1024) {
            return Err(SieveError::BudgetExceeded {
                max_value,
                needed_mb: bytes.div_ceil(1024 * 1024),
                budget_mb,
            });
        }
        Ok(())
    }

    pub fn max_value(&self) -> u64 {
        self.max_value
    }

    pub fn set(&mut self, x: u64) {
        debug_assert!(x <= self.max_value);
        self.words[(x / 64) as usize] |= 1 << (x % 64);
    }

    /// Membership; values beyond the table are reported absent.
    pub fn contains(&self, x: u64) -> bool {
        if x > self.max_value {
            return false;
        }
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter_ones(&self) -> Ones<'_> {
        self.iter_ones_from(0)
    }

    /// Set bits `>= lo`, ascending.
    pub fn iter_ones_from(&self, lo: u64) -> Ones<'_> {
        if lo > self.max_value {
            return Ones {
                words: &[],
                word_idx: 0,
                current: 0,
            };
        }
        let word_idx = (lo / 64) as usize;
        let current = self.words[word_idx] & !((1u64 << (lo % 64)) - 1);
        Ones {
            words: &self.words,
            word_idx,
            current,
        }
    }

    /// Word of `src >> shift` (value-shift downward) at word index `i`.
    #[inline]
    fn shifted_word(src: &[u64], i: usize, wq: usize, wr: u32) -> u64 {
        let lo = src.get(i + wq).copied().unwrap_or(0);
        if wr == 0 {
            lo
        } else {
            let hi = src.get(i + wq + 1).copied().unwrap_or(0);
            lo >> wr | hi << (64 - wr)
        }
    }

    /// `self = src ∩ (src - shift)`: the values `x` with both `x` and
    /// `x + shift` in `src`. Reuses `self`'s allocation when shapes match.
    pub fn assign_self_overlap(&mut self, src: &BitSieve, shift: u64) {
        self.words.resize(src.words.len(), 0);
        self.max_value = src.max_value;
        let (wq, wr) = ((shift / 64) as usize, (shift % 64) as u32);
        for i in 0..self.words.len() {
            self.words[i] = src.words[i] & Self::shifted_word(&src.words, i, wq, wr);
        }
    }

    /// In-place `self ∩= (self - shift)`. Reads run ahead of writes, so a
    /// single ascending pass is sound.
    pub fn restrict_to_self_overlap(&mut self, shift: u64) {
        let (wq, wr) = ((shift / 64) as usize, (shift % 64) as u32);
        for i in 0..self.words.len() {
            let shifted = Self::shifted_word(&self.words, i, wq, wr);
            self.words[i] &= shifted;
        }
    }

    /// `self = (src - shift) ∩ [0, self.max_value]`.
    pub fn assign_shifted(&mut self, src: &BitSieve, shift: u64) {
        let (wq, wr) = ((shift / 64) as usize, (shift % 64) as u32);
        for i in 0..self.words.len() {
            self.words[i] = Self::shifted_word(&src.words, i, wq, wr);
        }
        self.mask_tail();
    }

    /// `self ∩= (src - shift)`.
    pub fn intersect_shifted(&mut self, src: &BitSieve, shift: u64) {
        let (wq, wr) = ((shift / 64) as usize, (shift % 64) as u32);
        for i in 0..self.words.len() {
            self.words[i] &= Self::shifted_word(&src.words, i, wq, wr);
        }
    }

    /// `|self ∩ (src - shift) ∩ [0, limit]|` without materializing the
    /// shift. One fused pass; the sweep's inner loop.
    pub fn count_overlap_with_shifted(&self, src: &BitSieve, shift: u64, limit: u64) -> u64 {
        let (wq, wr) = ((shift / 64) as usize, (shift % 64) as u32);
        let last = ((limit / 64) as usize).min(self.words.len() - 1);
        let mut total = 0u64;
        for i in 0..=last {
            let mut w = self.words[i] & Self::shifted_word(&src.words, i, wq, wr);
            if i as u64 == limit / 64 {
                let used = limit % 64;
                if used < 63 {
                    w &= (1u64 << (used + 1)) - 1;
                }
            }
            total += w.count_ones() as u64;
        }
        total
    }

    /// Clear bits above `max_value` in the final word.
    fn mask_tail(&mut self) {
        let used = self.max_value % 64;
        if used < 63 {
            if let Some(w) = self.words.last_mut() {
                *w &= (1u64 << (used + 1)) - 1;
            }
        }
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as u64;
        self.current &= self.current - 1;
        Some(self.word_idx as u64 * 64 + bit)
    }
}
