//! Instantaneous descriptions: full configurations and fixed-radius windows.
//!
//! A configuration is written `w_before[q>w_after`, the head sitting on the
//! first symbol of `w_after`. A window of radius `n` keeps the `n` cells left
//! of the head and the `n + 1` cells from the head rightward:
//! `b_n..b_1[q>a_0..a_n`. Cells outside the touched extent read as blank (0).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::machine::{State, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    /// Touched cells left of the head, leftmost first.
    pub before: Vec<Symbol>,
    pub state: State,
    /// Head cell first, then the touched cells to its right. Never empty.
    pub after: Vec<Symbol>,
}

impl Configuration {
    pub fn new(before: Vec<Symbol>, state: State, after: Vec<Symbol>) -> Configuration {
        assert!(!after.is_empty(), "the head cell is always part of a configuration");
        Configuration {
            before,
            state,
            after,
        }
    }

    /// The symbol under the head.
    pub fn head(&self) -> Symbol {
        self.after[0]
    }

    /// Symbol at `offset` from the head; blank outside the touched extent.
    pub fn at(&self, offset: isize) -> Symbol {
        if offset < 0 {
            let back = (-offset) as usize;
            if back <= self.before.len() {
                self.before[self.before.len() - back]
            } else {
                0
            }
        } else {
            self.after.get(offset as usize).copied().unwrap_or(0)
        }
    }

    pub fn ones(&self) -> u64 {
        self.before
            .iter()
            .chain(self.after.iter())
            .map(|&c| c as u64)
            .sum()
    }

    pub fn is_blank(&self) -> bool {
        self.before.iter().chain(self.after.iter()).all(|&c| c == 0)
    }

    /// Equality of the blank-padded, two-way infinite pictures. Head alignment
    /// is preserved; only leading/trailing blanks are ignored.
    pub fn same_picture(&self, other: &Configuration) -> bool {
        self.state == other.state
            && eq_toward_head(&self.before, &other.before)
            && eq_from_head(&self.after, &other.after)
    }

    pub fn window(&self, n: usize) -> WindowConfig {
        WindowConfig {
            n,
            left: (1..=n).rev().map(|k| self.at(-(k as isize))).collect(),
            state: self.state,
            right: (0..=n).map(|k| self.at(k as isize)).collect(),
        }
    }
}

/// Compares two left-of-head sequences aligned at their right ends, padding
/// the shorter one with blanks on the left.
pub(crate) fn eq_toward_head(a: &[Symbol], b: &[Symbol]) -> bool {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let split = long.len() - short.len();
    long[split..] == *short && long[..split].iter().all(|&c| c == 0)
}

/// Compares two sequences aligned at their left ends, padding the shorter
/// one with blanks on the right.
pub(crate) fn eq_from_head(a: &[Symbol], b: &[Symbol]) -> bool {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    long[..short.len()] == *short && long[short.len()..].iter().all(|&c| c == 0)
}

fn write_symbols(f: &mut fmt::Formatter<'_>, cells: &[Symbol]) -> fmt::Result {
    for &c in cells {
        f.write_str(if c == 0 { "0" } else { "1" })?;
    }
    Ok(())
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.before)?;
        write!(f, "[{}>", self.state)?;
        write_symbols(f, &self.after)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseConfigError {
    #[error("expected the form <bits>[<state>><bits>")]
    Shape,
    #[error("bad symbol {0:?}")]
    Symbol(char),
    #[error("bad state {0:?}")]
    State(String),
    #[error("head cell missing")]
    NoHead,
}

fn parse_bits(s: &str) -> Result<Vec<Symbol>, ParseConfigError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(ParseConfigError::Symbol(other)),
        })
        .collect()
}

fn parse_parts(s: &str) -> Result<(Vec<Symbol>, State, Vec<Symbol>), ParseConfigError> {
    let (before, rest) = s.trim().split_once('[').ok_or(ParseConfigError::Shape)?;
    let (state, after) = rest.split_once('>').ok_or(ParseConfigError::Shape)?;
    let state: State = state
        .parse()
        .map_err(|_| ParseConfigError::State(state.to_string()))?;
    Ok((parse_bits(before)?, state, parse_bits(after)?))
}

impl FromStr for Configuration {
    type Err = ParseConfigError;

    /// Parses `0101[3>1101`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (before, state, after) = parse_parts(s)?;
        if after.is_empty() {
            return Err(ParseConfigError::NoHead);
        }
        Ok(Configuration {
            before,
            state,
            after,
        })
    }
}

/// A radius-`n` view of a configuration: `n` cells left of the head and
/// `n + 1` cells from the head rightward.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WindowConfig {
    pub n: usize,
    /// `b_n .. b_1`, with `b_1` adjacent to the head.
    pub left: Vec<Symbol>,
    pub state: State,
    /// `a_0 .. a_n`, with `a_0` under the head.
    pub right: Vec<Symbol>,
}

impl WindowConfig {
    pub fn head(&self) -> Symbol {
        self.right[0]
    }

    /// Symbol at `offset` from the head, for `-n <= offset <= n`.
    pub fn at(&self, offset: isize) -> Symbol {
        if offset < 0 {
            self.left[(self.n as isize + offset) as usize]
        } else {
            self.right[offset as usize]
        }
    }

    /// The radius `m <= n` window obtained by dropping outer cells.
    pub fn shrink(&self, m: usize) -> WindowConfig {
        assert!(m <= self.n);
        WindowConfig {
            n: m,
            left: self.left[self.n - m..].to_vec(),
            state: self.state,
            right: self.right[..=m].to_vec(),
        }
    }
}

impl fmt::Display for WindowConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.left)?;
        write!(f, "[{}>", self.state)?;
        write_symbols(f, &self.right)
    }
}

impl FromStr for WindowConfig {
    type Err = ParseConfigError;

    /// Parses `01[3>110`; the left side fixes the radius.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (left, state, right) = parse_parts(s)?;
        if right.len() != left.len() + 1 {
            return Err(ParseConfigError::Shape);
        }
        Ok(WindowConfig {
            n: left.len(),
            left,
            state,
            right,
        })
    }
}

/// One observed transition seen through radius-`n` windows.
///
/// `margin` holds the two cells of the earlier configuration just outside its
/// window (`b_{n+1}`, `a_{n+1}`): the cells a left or right move brings into view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WindowStep {
    pub from: WindowConfig,
    pub to: WindowConfig,
    pub margin: [Symbol; 2],
}

impl WindowStep {
    pub fn between(c: &Configuration, next: &Configuration, n: usize) -> WindowStep {
        WindowStep {
            from: c.window(n),
            to: next.window(n),
            margin: [c.at(-(n as isize) - 1), c.at(n as isize + 1)],
        }
    }

    pub fn radius(&self) -> usize {
        self.from.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let c: Configuration = "0101[7>1101".parse().unwrap();
        assert_eq!(c.before, vec![0, 1, 0, 1]);
        assert_eq!(c.state, 7);
        assert_eq!(c.head(), 1);
        assert_eq!(c.to_string(), "0101[7>1101");
        assert_eq!("01[0>".parse::<Configuration>(), Err(ParseConfigError::NoHead));
        assert_eq!("012[0>1".parse::<Configuration>(), Err(ParseConfigError::Symbol('2')));
    }

    #[test]
    fn window_of_all_ones_region() {
        let c: Configuration = "11111[3>11111".parse().unwrap();
        let w = c.window(2);
        assert_eq!(w.left, vec![1, 1]);
        assert_eq!(w.right, vec![1, 1, 1]);
        assert_eq!(w.to_string(), "11[3>111");
    }

    #[test]
    fn window_pads_with_blanks() {
        let c: Configuration = "[0>1".parse().unwrap();
        assert_eq!(c.window(2).to_string(), "00[0>100");
        let w0 = "0101[2>1101".parse::<Configuration>().unwrap().window(0);
        assert!(w0.left.is_empty());
        assert_eq!(w0.right, vec![1]);
    }

    #[test]
    fn shrink_drops_outer_cells() {
        let c: Configuration = "0110101[1>0011".parse().unwrap();
        for n in 0..6 {
            assert_eq!(c.window(n + 1).shrink(n), c.window(n));
        }
    }

    #[test]
    fn pictures_ignore_outer_blanks() {
        let a: Configuration = "001[0>10".parse().unwrap();
        let b: Configuration = "1[0>1000".parse().unwrap();
        let c: Configuration = "1[0>11".parse().unwrap();
        assert!(a.same_picture(&b));
        assert!(!a.same_picture(&c));
    }

    #[test]
    fn window_step_margins() {
        let c: Configuration = "0101[0>1101".parse().unwrap();
        let next: Configuration = "010[0>10101".parse().unwrap();
        let s = WindowStep::between(&c, &next, 2);
        assert_eq!(s.from.to_string(), "01[0>110");
        assert_eq!(s.to.to_string(), "10[0>101");
        assert_eq!(s.margin, [1, 1]);
    }
}
