//! Growable two-sided tape over `{0,1}`.

use crate::machine::{Move, Symbol};

const INITIAL_CAPACITY: usize = 64;

/// Cells are stored in one `Vec<u8>`; the vector grows geometrically on
/// whichever side the head runs off. Cells outside the vector read 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    cells: Vec<u8>,
    /// Vector index of absolute position 0 (the starting head cell).
    origin: usize,
    head: usize,
    /// Inclusive touched extent, as vector indices.
    lo: usize,
    hi: usize,
}

impl Tape {
    /// A tape holding `input` from the head cell rightward. An empty input
    /// gives a blank tape whose only touched cell is the head cell.
    pub fn with_input(input: &[Symbol]) -> Tape {
        let span = input.len().max(1);
        let pad = INITIAL_CAPACITY.max(span);
        let mut cells = vec![0u8; pad + span + pad];
        cells[pad..pad + input.len()].copy_from_slice(input);
        Tape {
            cells,
            origin: pad,
            head: pad,
            lo: pad,
            hi: pad + span - 1,
        }
    }

    #[inline]
    pub fn read(&self) -> Symbol {
        self.cells[self.head]
    }

    #[inline]
    pub fn write(&mut self, symbol: Symbol) {
        self.cells[self.head] = symbol;
    }

    #[inline]
    pub fn shift(&mut self, mv: Move) {
        match mv {
            Move::Left => {
                if self.head == 0 {
                    self.grow_left();
                }
                self.head -= 1;
                if self.head < self.lo {
                    self.lo = self.head;
                }
            }
            Move::Stay => {}
            Move::Right => {
                if self.head + 1 == self.cells.len() {
                    self.grow_right();
                }
                self.head += 1;
                if self.head > self.hi {
                    self.hi = self.head;
                }
            }
        }
    }

    fn grow_left(&mut self) {
        let extra = self.cells.len().max(INITIAL_CAPACITY);
        let mut cells = vec![0u8; extra + self.cells.len()];
        cells[extra..].copy_from_slice(&self.cells);
        self.cells = cells;
        self.origin += extra;
        self.head += extra;
        self.lo += extra;
        self.hi += extra;
    }

    fn grow_right(&mut self) {
        let extra = self.cells.len().max(INITIAL_CAPACITY);
        self.cells.resize(self.cells.len() + extra, 0);
    }

    /// Head position relative to the starting cell.
    pub fn head_offset(&self) -> i64 {
        self.head as i64 - self.origin as i64
    }

    /// Touched extent relative to the starting cell, inclusive.
    pub fn extent(&self) -> (i64, i64) {
        (
            self.lo as i64 - self.origin as i64,
            self.hi as i64 - self.origin as i64,
        )
    }

    /// Symbol at `offset` cells from the head (0 outside storage).
    #[inline]
    pub fn at(&self, offset: isize) -> Symbol {
        let idx = self.head as isize + offset;
        if idx < 0 {
            0
        } else {
            self.cells.get(idx as usize).copied().unwrap_or(0)
        }
    }

    /// Touched cells left of the head, leftmost first.
    pub fn before(&self) -> &[Symbol] {
        &self.cells[self.lo..self.head]
    }

    /// Touched cells from the head rightward.
    pub fn after(&self) -> &[Symbol] {
        &self.cells[self.head..=self.hi]
    }

    /// Raw storage, head index, and touched extent, for scanning code that
    /// needs direct slice access.
    pub fn raw(&self) -> (&[u8], usize, usize, usize) {
        (&self.cells, self.head, self.lo, self.hi)
    }

    pub fn ones(&self) -> u64 {
        self.cells[self.lo..=self.hi]
            .iter()
            .map(|&c| c as u64)
            .sum()
    }
}
