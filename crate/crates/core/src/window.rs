//! Base-`|X|` positional codes for fixed-length symbol windows.
//!
//! The oldest symbol is the most significant digit, so appending a new symbol
//! and dropping the oldest is `(code * base + x) mod base^len`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpace {
    base: usize,
    len: usize,
    size: usize,
}

impl WindowSpace {
    /// Fails with `TableTooLarge` when `base^len` exceeds `limit`.
    pub fn new(base: usize, len: usize, limit: usize) -> Result<Self> {
        let size = checked_pow(base, len).filter(|&s| s <= limit).ok_or_else(|| {
            Error::TableTooLarge {
                entries: (base as u128).checked_pow(len as u32).unwrap_or(u128::MAX),
                limit: limit as u128,
            }
        })?;
        Ok(WindowSpace { base, len, size })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of distinct windows, `base^len`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, symbols: &[usize]) -> usize {
        debug_assert_eq!(symbols.len(), self.len);
        symbols.iter().fold(0, |acc, &s| {
            debug_assert!(s < self.base);
            acc * self.base + s
        })
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut out = vec![0; self.len];
        for slot in out.iter_mut().rev() {
            *slot = code % self.base;
            code /= self.base;
        }
        out
    }

    /// `s(ā, x)`: drop the oldest symbol, append `x`.
    pub fn successor(&self, code: usize, x: usize) -> usize {
        if self.len == 0 {
            return 0;
        }
        (code * self.base + x) % self.size
    }

    /// Symbol at position `i` (0 = oldest).
    pub fn digit(&self, code: usize, i: usize) -> usize {
        let shift = self.len - 1 - i;
        (code / checked_pow(self.base, shift).unwrap_or(usize::MAX)) % self.base
    }

    /// Code of the last `k` symbols of the window.
    pub fn suffix(&self, code: usize, k: usize) -> usize {
        debug_assert!(k <= self.len);
        code % checked_pow(self.base, k).unwrap_or(usize::MAX)
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}
