//! Automata over tuples of base-`k` digits read most significant first, one
//! track per variable.
//!
//! A word over the tuple alphabet represents a tuple of naturals once each
//! track is read as a numeral. Shorter numerals are padded with leading
//! zeros, so every automaton returned by this module is *padding invariant*:
//! prepending an all-zero column never changes acceptance. Tracks are kept
//! sorted by name, and every public operation returns a minimal automaton
//! with states numbered in breadth-first order, so equal languages over the
//! same tracks have identical serializations.

mod format;
mod minimize;
mod ops;
mod predicates;

pub use ops::BoolOp;
pub use predicates::{
    accept_all, add_predicate, const_predicate, empty, eq_predicate, linear_predicate, lt_predicate,
    seq_compare_predicate, seq_letter_predicate, LinearRel, SeqCmp,
};

use thiserror::Error;

use crate::numeration::digits_msd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("BaseMismatch: {0} vs {1}")]
    BaseMismatch(u32, u32),
    #[error("UnknownTrack: {0}")]
    UnknownTrack(String),
    #[error("UnknownLetter: {0}")]
    UnknownLetter(String),
    #[error("letter order comparison needs identical alphabets")]
    AlphabetMismatch,
    #[error("duplicate track {0}")]
    DuplicateTrack(String),
    #[error("StateCapExceeded: intermediate automaton passed {cap} states")]
    StateCapExceeded { cap: usize },
    #[error("format error: {0}")]
    Format(String),
}

/// Deterministic, total automaton over the tuple alphabet.
///
/// Symbols are numbered by reading the tuple as a base-`k` numeral with the
/// first track most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiTrackDfa {
    base: u32,
    tracks: Vec<String>,
    initial: usize,
    accepting: Vec<bool>,
    trans: Vec<u32>,
}

impl MultiTrackDfa {
    /// Build from raw tables; tracks must be sorted and distinct. The result
    /// is minimized but not padding-normalized; see
    /// [`MultiTrackDfa::normalize_padding`].
    pub fn from_parts(
        base: u32,
        tracks: Vec<String>,
        initial: usize,
        accepting: Vec<bool>,
        trans: Vec<u32>,
    ) -> Result<Self, AutomataError> {
        if base < 2 {
            return Err(AutomataError::Format(format!("base must be at least 2, got {base}")));
        }
        for w in tracks.windows(2) {
            if w[0] == w[1] {
                return Err(AutomataError::DuplicateTrack(w[0].clone()));
            }
            if w[0] > w[1] {
                return Err(AutomataError::Format("tracks must be sorted".into()));
            }
        }
        let sigma = symbol_count(base, tracks.len());
        let n = accepting.len();
        if n == 0 || initial >= n || trans.len() != n * sigma || trans.iter().any(|&t| t as usize >= n) {
            return Err(AutomataError::Format("inconsistent transition table".into()));
        }
        Ok(MultiTrackDfa { base, tracks, initial, accepting, trans }.minimize())
    }

    pub(crate) fn raw(base: u32, tracks: Vec<String>, initial: usize, accepting: Vec<bool>, trans: Vec<u32>) -> Self {
        debug_assert_eq!(trans.len(), accepting.len() * symbol_count(base, tracks.len()));
        MultiTrackDfa { base, tracks, initial, accepting, trans }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn tracks(&self) -> &[String] {
        &self.tracks
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn symbols(&self) -> usize {
        symbol_count(self.base, self.tracks.len())
    }

    pub fn next(&self, q: usize, sym: usize) -> usize {
        self.trans[q * self.symbols() + sym] as usize
    }

    pub fn track_index(&self, name: &str) -> Result<usize, AutomataError> {
        self.tracks.iter().position(|t| t == name).ok_or_else(|| AutomataError::UnknownTrack(name.to_string()))
    }

    /// Symbol of a digit tuple given in track order.
    pub fn encode(&self, digits: &[u32]) -> usize {
        encode(self.base, digits)
    }

    pub fn decode(&self, sym: usize) -> Vec<u32> {
        decode(self.base, self.tracks.len(), sym)
    }

    pub fn run(&self, columns: &[usize]) -> usize {
        columns.iter().fold(self.initial, |q, &s| self.next(q, s))
    }

    /// Whether the tuple of values (in track order) is accepted.
    pub fn accepts(&self, values: &[u64]) -> bool {
        assert_eq!(values.len(), self.tracks.len(), "one value per track");
        self.accepts_padded(values, 0)
    }

    /// Acceptance of the representation with `extra` additional leading zero columns.
    pub fn accepts_padded(&self, values: &[u64], extra: usize) -> bool {
        let digits: Vec<Vec<u32>> = values.iter().map(|&v| digits_msd(v, self.base)).collect();
        let len = digits.iter().map(Vec::len).max().unwrap_or(0) + extra;
        let columns: Vec<usize> = (0..len)
            .map(|pos| {
                let col: Vec<u32> = digits
                    .iter()
                    .map(|d| {
                        let pad = len - d.len();
                        if pos < pad {
                            0
                        } else {
                            d[pos - pad]
                        }
                    })
                    .collect();
                self.encode(&col)
            })
            .collect();
        self.accepting[self.run(&columns)]
    }

    /// Acceptance for named values; every track must be assigned.
    pub fn accepts_named(&self, values: &[(&str, u64)]) -> Result<bool, AutomataError> {
        let mut v = vec![None; self.tracks.len()];
        for &(name, x) in values {
            v[self.track_index(name)?] = Some(x);
        }
        let v = v
            .into_iter()
            .zip(&self.tracks)
            .map(|(x, t)| x.ok_or_else(|| AutomataError::UnknownTrack(format!("{t} unassigned"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.accepts(&v))
    }

    /// True when no accepting state is reachable.
    pub fn is_empty(&self) -> bool {
        self.reachable().iter().all(|&q| !self.accepting[q])
    }

    /// True when every reachable state accepts.
    pub fn is_universal(&self) -> bool {
        self.reachable().iter().all(|&q| self.accepting[q])
    }

    pub(crate) fn reachable(&self) -> Vec<usize> {
        let sigma = self.symbols();
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for s in 0..sigma {
                let t = self.next(q, s);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// States from which some accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let sigma = self.symbols();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for s in 0..sigma {
                preds[self.next(q, s)].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Language equality: same base and tracks and identical canonical forms.
    pub fn equivalent(&self, other: &MultiTrackDfa) -> bool {
        self.base == other.base
            && self.tracks == other.tracks
            && self.minimize().to_string() == other.minimize().to_string()
    }
}

pub(crate) fn symbol_count(base: u32, tracks: usize) -> usize {
    (base as usize).pow(tracks as u32)
}

pub(crate) fn encode(base: u32, digits: &[u32]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base as usize + d as usize)
}

pub(crate) fn decode(base: u32, tracks: usize, mut sym: usize) -> Vec<u32> {
    let mut out = vec![0; tracks];
    for slot in out.iter_mut().rev() {
        *slot = (sym % base as usize) as u32;
        sym /= base as usize;
    }
    out
}
