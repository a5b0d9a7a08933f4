//! Bit-packed tape mirror for fast shifted comparisons.
//!
//! Window analysis spends nearly all of its time asking how far two shifted
//! copies of the tape agree around the head. Packing one cell per bit lets
//! that comparison run 64 cells per word.

use crate::machine::Symbol;

const MARGIN: i64 = 256;

/// Cells by absolute position; bit `i` of the packed store is position `base + i`.
#[derive(Debug, Clone)]
pub(crate) struct BitTape {
    words: Vec<u64>,
    base: i64,
}

impl BitTape {
    pub(crate) fn with_input(input: &[Symbol]) -> BitTape {
        let mut t = BitTape {
            words: vec![0; 16],
            base: -(8 * 64),
        };
        t.ensure(0, input.len() as i64);
        for (i, &s) in input.iter().enumerate() {
            t.set(i as i64, s);
        }
        t
    }

    fn bits(&self) -> i64 {
        self.words.len() as i64 * 64
    }

    /// Grows storage so that `[lo - MARGIN, hi + MARGIN]` is covered.
    pub(crate) fn ensure(&mut self, lo: i64, hi: i64) {
        if lo - MARGIN < self.base {
            let need = self.base - (lo - MARGIN);
            let add = ((need + 63) / 64).max(self.words.len() as i64) as usize;
            let mut words = vec![0u64; add + self.words.len()];
            words[add..].copy_from_slice(&self.words);
            self.words = words;
            self.base -= add as i64 * 64;
        }
        if hi + MARGIN >= self.base + self.bits() {
            let need = hi + MARGIN - (self.base + self.bits()) + 1;
            let add = ((need + 63) / 64).max(self.words.len() as i64) as usize;
            self.words.resize(self.words.len() + add, 0);
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, pos: i64, value: Symbol) {
        let i = (pos - self.base) as usize;
        let (w, b) = (i / 64, i % 64);
        if value == 0 {
            self.words[w] &= !(1u64 << b);
        } else {
            self.words[w] |= 1u64 << b;
        }
    }

    #[inline]
    pub(crate) fn get(&self, pos: i64) -> Symbol {
        let i = pos - self.base;
        if i < 0 || i >= self.bits() {
            return 0;
        }
        let i = i as usize;
        ((self.words[i / 64] >> (i % 64)) & 1) as Symbol
    }

    /// Cells `pos .. pos + 64` packed into one word, bit 0 = `pos`.
    #[inline]
    fn word(&self, pos: i64) -> u64 {
        let i = pos - self.base;
        if i < 0 || i + 64 > self.bits() {
            return (0..64).fold(0u64, |acc, b| acc | ((self.get(pos + b) as u64) << b));
        }
        let i = i as usize;
        let (w, s) = (i / 64, i % 64);
        if s == 0 {
            self.words[w]
        } else {
            (self.words[w] >> s) | (self.words[w + 1] << (64 - s))
        }
    }

    /// Smallest `k` in `[from, to]` with `cell(p + k) != cell(q + k)`.
    #[inline]
    fn forward_block(&self, p: i64, q: i64, from: i64, to: i64) -> Option<i64> {
        let mut k = from;
        while k <= to {
            let mut x = self.word(p + k) ^ self.word(q + k);
            let span = to - k + 1;
            if span < 64 {
                x &= (1u64 << span) - 1;
            }
            if x != 0 {
                return Some(k + x.trailing_zeros() as i64);
            }
            k += 64;
        }
        None
    }

    /// Smallest `k` in `[from, to]` with `cell(p - k) != cell(q - k)`.
    #[inline]
    fn backward_block(&self, p: i64, q: i64, from: i64, to: i64) -> Option<i64> {
        let mut k = from;
        while k <= to {
            // Bit 63 is cell p - k, bit 0 is cell p - k - 63.
            let mut x = self.word(p - k - 63) ^ self.word(q - k - 63);
            let span = to - k + 1;
            if span < 64 {
                x &= !0u64 << (64 - span);
            }
            if x != 0 {
                return Some(k + x.leading_zeros() as i64);
            }
            k += 64;
        }
        None
    }

    /// Smallest `k >= from` (up to `cap`) where the tape read forward from `p`
    /// and from `q` differ on either side, i.e. `cell(p + k) != cell(q + k)`
    /// or `cell(p - k) != cell(q - k)`. `right_end` and `left_end` bound the
    /// offsets past which both reads are blank.
    pub(crate) fn shifted_mismatch(
        &self,
        p: i64,
        q: i64,
        from: i64,
        right_end: i64,
        left_end: i64,
        cap: i64,
    ) -> Option<i64> {
        const BLOCK: i64 = 256;
        let mut k = from;
        while k <= cap {
            let to = (k + BLOCK - 1).min(cap);
            let r = if k <= right_end {
                self.forward_block(p, q, k, to.min(right_end))
            } else {
                None
            };
            let l = if k <= left_end {
                self.backward_block(p, q, k, to.min(left_end))
            } else {
                None
            };
            match (r, l) {
                (Some(a), Some(b)) => return Some(a.min(b)),
                (Some(a), None) | (None, Some(a)) => return Some(a),
                (None, None) => {}
            }
            if k > right_end && k > left_end {
                return None;
            }
            k = to + 1;
        }
        None
    }
}
