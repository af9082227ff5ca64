//! Row-in/column-out block interleaving.

use serde::{Deserialize, Serialize};

/// `rows x cols` block interleaver. Digits are written row by row and read
/// column by column. Anything beyond `rows * cols` passes through in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInterleaver {
    rows: usize,
    cols: usize,
}

impl BlockInterleaver {
    pub fn new(rows: usize, cols: usize) -> Self {
        BlockInterleaver { rows, cols }
    }

    /// Largest matrix with `cols` columns that fits in `len` digits.
    pub fn for_len(len: usize, cols: usize) -> Self {
        let cols = cols.max(1);
        BlockInterleaver { rows: len / cols, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn block_len(&self) -> usize {
        self.rows * self.cols
    }

    /// Input position that lands at output position `k` (for `k < block_len`).
    pub fn source_of(&self, k: usize) -> usize {
        let (c, r) = (k / self.rows, k % self.rows);
        r * self.cols + c
    }

    pub fn interleave<T: Copy>(&self, digits: &[T]) -> Vec<T> {
        let n = self.block_len().min(digits.len());
        if n < self.block_len() {
            return digits.to_vec();
        }
        let mut out = Vec::with_capacity(digits.len());
        out.extend((0..n).map(|k| digits[self.source_of(k)]));
        out.extend_from_slice(&digits[n..]);
        out
    }

    pub fn deinterleave<T: Copy>(&self, digits: &[T]) -> Vec<T> {
        let n = self.block_len();
        if digits.len() < n {
            return digits.to_vec();
        }
        let mut out = digits.to_vec();
        for k in 0..n {
            out[self.source_of(k)] = digits[k];
        }
        out
    }
}
