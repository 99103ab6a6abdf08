//! Counting sequences of two-track automata.
//!
//! For an automaton `A` over tracks `(i, n)` the sequence
//! `a(n) = #{i : A accepts (i, n)}` is `k`-regular. This module counts it
//! directly, builds its linear representation, and, when the sequence is
//! bounded, turns the representation into a DFAO.

mod direct;
mod representation;

use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::automata::{AutomataError, MultiTrackDfa};
use crate::linalg::Q;
use crate::word::{Alphabet, Dfao};

pub use direct::count_direct;
pub use representation::{
    counting_representation, counting_representation_capped, LinearRepresentation, DEFAULT_ITERATION_CAP,
};

pub const DEFAULT_DFAO_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("InfiniteCount: infinitely many i are accepted with n = {n}")]
    InfiniteCount { n: u64 },
    #[error("NoConvergence: leading-padding sum still growing after {cap} iterations")]
    NoConvergence { cap: usize },
    #[error("Overflow: count does not fit")]
    Overflow,
    #[error("BadTracks: expected two tracks, one of them `n`, found {0:?}")]
    BadTracks(Vec<String>),
    #[error("StateCapExceeded: more than {cap} distinct vectors (unbounded sequence?)")]
    StateCapExceeded { cap: usize },
    #[error("NonIntegerOutput: {0}")]
    NonIntegerOutput(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// Track layout of an automaton over `(i, n)`: the index track is `n`, the
/// other one is counted.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Pair {
    base: u32,
    counted_first: bool,
}

impl Pair {
    pub(crate) fn new(a: &MultiTrackDfa) -> Result<Pair, CountingError> {
        let tracks = a.tracks();
        if tracks.len() != 2 || !tracks.iter().any(|t| t == "n") || tracks[0] == tracks[1] {
            return Err(CountingError::BadTracks(tracks.to_vec()));
        }
        Ok(Pair { base: a.base(), counted_first: tracks[1] == "n" })
    }

    /// Symbol of the column with digit `e` on the counted track and `d` on `n`.
    pub(crate) fn symbol(&self, e: u32, d: u32) -> usize {
        let (hi, lo) = if self.counted_first { (e, d) } else { (d, e) };
        (hi * self.base + lo) as usize
    }
}

/// Rename the tracks of `a` so that `index` becomes `n`, ready for counting.
pub fn as_pair(a: &MultiTrackDfa, counted: &str, index: &str) -> Result<MultiTrackDfa, CountingError> {
    if a.tracks().len() != 2 || a.track_index(counted).is_err() || a.track_index(index).is_err() || counted == index {
        return Err(CountingError::BadTracks(a.tracks().to_vec()));
    }
    if index == "n" {
        return Ok(a.clone());
    }
    let tmp = "\u{0}i";
    Ok(a.rename(&[(counted, tmp), (index, "n")])?.rename(&[(tmp, "i")])?)
}

/// The DFAO computing the sequence of `r` on canonical representations.
///
/// States are the distinct row vectors `v zeta(x)`, compared exactly, plus an
/// initial state fixed by digit 0. `r` should be minimized first: a bounded
/// sequence then has finitely many such vectors.
pub fn to_dfao(r: &LinearRepresentation, state_cap: usize) -> Result<Dfao, CountingError> {
    let k = r.base;
    let mut ids: HashMap<Vec<Q>, usize> = HashMap::new();
    let mut vectors: Vec<Vec<Q>> = vec![r.v.clone()];
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < vectors.len() {
        let u = vectors[i].clone();
        let mut row = Vec::with_capacity(k as usize);
        for d in 0..k {
            if i == 0 && d == 0 {
                row.push(0);
                continue;
            }
            let t = r.row_times(&u, d);
            let id = match ids.get(&t) {
                Some(&id) => id,
                None => {
                    if vectors.len() >= state_cap {
                        return Err(CountingError::StateCapExceeded { cap: state_cap });
                    }
                    ids.insert(t.clone(), vectors.len());
                    vectors.push(t);
                    vectors.len() - 1
                }
            };
            row.push(id);
        }
        transitions.push(row);
        i += 1;
    }
    let values = vectors
        .iter()
        .map(|u| {
            let x = r.output(u);
            if !x.is_integer() || x < Q::zero() {
                return Err(CountingError::NonIntegerOutput(x.to_string()));
            }
            x.to_integer().to_u64().ok_or(CountingError::Overflow)
        })
        .collect::<Result<Vec<u64>, _>>()?;
    let mut distinct = values.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() > 256 {
        return Err(CountingError::Overflow);
    }
    let alphabet =
        Alphabet::new(distinct.iter().map(|x| x.to_string())).map_err(|e| CountingError::Format(e.to_string()))?;
    let outputs = values.iter().map(|x| distinct.binary_search(x).expect("present") as u8).collect();
    let d = Dfao::new(k, alphabet, transitions, outputs).map_err(|e| CountingError::Format(e.to_string()))?;
    Ok(d.minimize())
}

/// Numeric value of a letter of a DFAO built by [`to_dfao`].
pub fn output_value(d: &Dfao, state: usize) -> u64 {
    d.alphabet().name(d.output(state)).parse().expect("numeric alphabet")
}

pub fn eval_dfao(d: &Dfao, n: u64) -> u64 {
    output_value(d, d.run(&crate::numeration::digits_msd(n, d.base())))
}

/// Largest value taken on a canonical representation: the initial state,
/// and everything reachable from it through a nonzero first digit.
pub fn sup_value(d: &Dfao) -> u64 {
    let k = d.base();
    let mut seen = vec![false; d.num_states()];
    let mut stack: Vec<usize> = (1..k).map(|a| d.next(0, a)).collect();
    let mut best = output_value(d, 0);
    while let Some(q) = stack.pop() {
        if seen[q] {
            continue;
        }
        seen[q] = true;
        best = best.max(output_value(d, q));
        stack.extend((0..k).map(|a| d.next(q, a)));
    }
    best
}

#[cfg(test)]
mod tests;
