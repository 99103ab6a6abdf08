//! Atomic automata: linear constraints and sequence-letter tests.

use std::collections::{BTreeMap, HashMap};

use super::{symbol_count, AutomataError, MultiTrackDfa};
use crate::word::{Dfao, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearRel {
    Eq,
    Lt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqCmp {
    Eq,
    Lt,
}

pub fn accept_all(base: u32, tracks: &[&str]) -> MultiTrackDfa {
    constant(base, tracks, true)
}

pub fn empty(base: u32, tracks: &[&str]) -> MultiTrackDfa {
    constant(base, tracks, false)
}

fn constant(base: u32, tracks: &[&str], accept: bool) -> MultiTrackDfa {
    let mut t: Vec<String> = tracks.iter().map(|s| s.to_string()).collect();
    t.sort();
    t.dedup();
    let sigma = symbol_count(base, t.len());
    MultiTrackDfa::raw(base, t, 0, vec![accept], vec![0; sigma])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Partial {
    Low,
    Val(i64),
    High,
}

/// Tuples with `sum c_i x_i + c0 (rel) 0`. Repeated names have their
/// coefficients added; a name with total coefficient zero still gets a track.
///
/// Reading a column maps the partial sum `s` to `k s + sum c_i d_i`. Once
/// `|s|` exceeds `max(sum |c_i|, |c0|)` its sign can no longer change, so two
/// sinks suffice.
pub fn linear_predicate(base: u32, terms: &[(&str, i64)], c0: i64, rel: LinearRel) -> MultiTrackDfa {
    let mut merged: BTreeMap<String, i64> = BTreeMap::new();
    for &(name, c) in terms {
        *merged.entry(name.to_string()).or_default() += c;
    }
    let tracks: Vec<String> = merged.keys().cloned().collect();
    let coeffs: Vec<i64> = merged.values().copied().collect();
    let bound = coeffs.iter().map(|c| c.abs()).sum::<i64>().max(c0.abs());
    let k = base as i64;
    let sigma = symbol_count(base, tracks.len());
    // Weighted digit sum for every symbol.
    let weight: Vec<i64> = (0..sigma)
        .map(|s| super::decode(base, tracks.len(), s).iter().zip(&coeffs).map(|(&d, &c)| d as i64 * c).sum())
        .collect();
    let step = |p: Partial, w: i64| match p {
        Partial::Val(s) => {
            let t = k * s + w;
            if t > bound {
                Partial::High
            } else if t < -bound {
                Partial::Low
            } else {
                Partial::Val(t)
            }
        }
        sink => sink,
    };
    let accept = |p: Partial| match (p, rel) {
        (Partial::Val(s), LinearRel::Eq) => s + c0 == 0,
        (Partial::Val(s), LinearRel::Lt) => s + c0 < 0,
        (Partial::Low, LinearRel::Lt) => true,
        _ => false,
    };
    let mut ids: HashMap<Partial, u32> = HashMap::new();
    let mut states = vec![Partial::Val(0)];
    ids.insert(Partial::Val(0), 0);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let p = states[i];
        i += 1;
        for &w in &weight {
            let t = step(p, w);
            let next = states.len() as u32;
            let id = *ids.entry(t).or_insert_with(|| {
                states.push(t);
                next
            });
            trans.push(id);
        }
    }
    let accepting = states.iter().map(|&p| accept(p)).collect();
    MultiTrackDfa::raw(base, tracks, 0, accepting, trans).minimize()
}

/// `x + y = z`.
pub fn add_predicate(x: &str, y: &str, z: &str, base: u32) -> MultiTrackDfa {
    linear_predicate(base, &[(x, 1), (y, 1), (z, -1)], 0, LinearRel::Eq)
}

/// `x < y`.
pub fn lt_predicate(x: &str, y: &str, base: u32) -> MultiTrackDfa {
    linear_predicate(base, &[(x, 1), (y, -1)], 0, LinearRel::Lt)
}

/// `x = y`.
pub fn eq_predicate(x: &str, y: &str, base: u32) -> MultiTrackDfa {
    linear_predicate(base, &[(x, 1), (y, -1)], 0, LinearRel::Eq)
}

/// `x = c`.
pub fn const_predicate(x: &str, c: u64, base: u32) -> MultiTrackDfa {
    linear_predicate(base, &[(x, 1)], -(c as i64), LinearRel::Eq)
}

fn letter_of(d: &Dfao, letter: &str) -> Result<Letter, AutomataError> {
    d.alphabet().letter(letter).map_err(|_| AutomataError::UnknownLetter(letter.to_string()))
}

/// `d[x] = letter`.
pub fn seq_letter_predicate(d: &Dfao, x: &str, letter: &str) -> Result<MultiTrackDfa, AutomataError> {
    let target = letter_of(d, letter)?;
    let d = d.zero_insensitive();
    let k = d.base();
    let trans =
        (0..d.num_states()).flat_map(|q| (0..k).map(move |a| (q, a))).map(|(q, a)| d.next(q, a) as u32).collect();
    let accepting = (0..d.num_states()).map(|q| d.output(q) == target).collect();
    Ok(MultiTrackDfa::raw(k, vec![x.to_string()], 0, accepting, trans).minimize())
}

/// `dx[x] = dy[y]` (same letter name) or `dx[x] < dy[y]` (declared letter
/// order; both alphabets must then coincide).
pub fn seq_compare_predicate(
    dx: &Dfao,
    x: &str,
    dy: &Dfao,
    y: &str,
    cmp: SeqCmp,
) -> Result<MultiTrackDfa, AutomataError> {
    let k = dx.base();
    if dy.base() != k {
        return Err(AutomataError::BaseMismatch(k, dy.base()));
    }
    if cmp == SeqCmp::Lt && dx.alphabet() != dy.alphabet() {
        return Err(AutomataError::AlphabetMismatch);
    }
    let (dx, dy) = (dx.zero_insensitive(), dy.zero_insensitive());
    let (nx, ny) = (dx.num_states(), dy.num_states());
    let holds = |p: usize, q: usize| {
        let (a, b) = (dx.output(p), dy.output(q));
        match cmp {
            SeqCmp::Eq => dx.alphabet().name(a) == dy.alphabet().name(b),
            SeqCmp::Lt => a < b,
        }
    };
    let accepting: Vec<bool> = (0..nx * ny).map(|s| holds(s / ny, s % ny)).collect();
    let mut trans = Vec::new();
    if x == y {
        for s in 0..nx * ny {
            for a in 0..k {
                trans.push((dx.next(s / ny, a) * ny + dy.next(s % ny, a)) as u32);
            }
        }
        return Ok(MultiTrackDfa::raw(k, vec![x.to_string()], 0, accepting, trans).minimize());
    }
    // Symbols list the digit of the alphabetically first track first.
    let swap = x > y;
    for s in 0..nx * ny {
        for a in 0..k {
            for b in 0..k {
                let (ax, by) = if swap { (b, a) } else { (a, b) };
                trans.push((dx.next(s / ny, ax) * ny + dy.next(s % ny, by)) as u32);
            }
        }
    }
    let mut tracks = vec![x.to_string(), y.to_string()];
    tracks.sort();
    Ok(MultiTrackDfa::raw(k, tracks, 0, accepting, trans).minimize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Bundled;

    #[test]
    fn addition_examples() {
        let add = add_predicate("x", "y", "z", 2);
        assert!(add.accepts(&[1, 2, 3]));
        for n in [0, 1, 5, 13] {
            assert!(add.accepts(&[0, n, n]));
        }
        assert!(!add.accepts(&[5, 7, 11]));
        assert_eq!(add.num_states(), add_predicate("x", "y", "z", 2).minimize().num_states());
    }

    #[test]
    fn order_and_equality() {
        let lt = lt_predicate("x", "y", 2);
        assert!(lt.accepts(&[2, 5]));
        assert!(!lt.accepts(&[5, 5]));
        assert!(!lt.accepts(&[6, 5]));
        let eq = eq_predicate("x", "y", 3);
        for n in 0..200 {
            assert!(eq.accepts(&[n, n]));
            assert!(!eq.accepts(&[n, n + 1]));
        }
        // Named in reverse order: track list is still sorted.
        let gt = lt_predicate("y", "x", 2);
        assert_eq!(gt.tracks(), ["x", "y"]);
        assert!(gt.accepts(&[5, 2]));
    }

    #[test]
    fn constants() {
        let zero = const_predicate("x", 0, 2);
        assert!(zero.accepts(&[0]));
        assert!(zero.accepts_padded(&[0], 5));
        assert!(!zero.accepts(&[1]));
        let seven = const_predicate("x", 7, 3);
        assert_eq!(seven.accepted_values(100), vec![vec![7]]);
    }

    #[test]
    fn same_name_twice() {
        // x + x = z
        let dbl = add_predicate("x", "x", "z", 2);
        assert_eq!(dbl.tracks(), ["x", "z"]);
        assert!(dbl.accepts(&[3, 6]));
        assert!(!dbl.accepts(&[3, 7]));
        let triv = eq_predicate("x", "x", 2);
        assert!(triv.is_universal());
    }

    #[test]
    fn thue_morse_letters() {
        let d = Bundled::ThueMorse.dfao().unwrap();
        let one = seq_letter_predicate(&d, "x", "1").unwrap();
        let zero = seq_letter_predicate(&d, "x", "0").unwrap();
        assert!(one.accepts(&[1]));
        assert!(zero.accepts(&[0]));
        for x in 0..500 {
            assert!(one.accepts(&[x]) != zero.accepts(&[x]));
            assert_eq!(one.accepts(&[x]), d.eval(x) == 1);
        }
        assert!(matches!(seq_letter_predicate(&d, "x", "7"), Err(AutomataError::UnknownLetter(_))));
    }

    #[test]
    fn letter_comparisons() {
        let d = Bundled::Vtm.dfao().unwrap();
        let eq = seq_compare_predicate(&d, "i", &d, "j", SeqCmp::Eq).unwrap();
        let lt = seq_compare_predicate(&d, "j", &d, "i", SeqCmp::Lt).unwrap();
        for i in 0..40 {
            for j in 0..40 {
                assert_eq!(eq.accepts(&[i, j]), d.eval(i) == d.eval(j));
                assert_eq!(lt.accepts(&[i, j]), d.eval(j) < d.eval(i));
            }
        }
        assert!(seq_compare_predicate(&d, "i", &d, "i", SeqCmp::Eq).unwrap().is_universal());
        assert!(seq_compare_predicate(&d, "i", &d, "i", SeqCmp::Lt).unwrap().is_empty());
        let tm = Bundled::ThueMorse.dfao().unwrap();
        // vtm[i] = tm[i] as letter names.
        let mixed = seq_compare_predicate(&d, "i", &tm, "i", SeqCmp::Eq).unwrap();
        for i in 0..64 {
            assert_eq!(mixed.accepts(&[i]), d.alphabet().name(d.eval(i)) == tm.alphabet().name(tm.eval(i)));
        }
        assert_eq!(seq_compare_predicate(&d, "i", &tm, "j", SeqCmp::Lt), Err(AutomataError::AlphabetMismatch));
    }
}
