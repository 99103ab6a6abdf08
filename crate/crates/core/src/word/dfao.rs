use std::fmt;

use super::{Alphabet, Letter, Prefix, WordError};
use crate::numeration::digits_msd;

/// Deterministic finite automaton with output reading base-`k` digits
/// most-significant first. State 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    base: u32,
    alphabet: Alphabet,
    transitions: Vec<Vec<usize>>,
    outputs: Vec<Letter>,
}

impl Dfao {
    pub fn new(
        base: u32,
        alphabet: Alphabet,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Letter>,
    ) -> Result<Self, WordError> {
        if base < 2 {
            return Err(WordError::Format(format!("base must be at least 2, got {base}")));
        }
        if transitions.is_empty() || transitions.len() != outputs.len() {
            return Err(WordError::Format("state count mismatch".into()));
        }
        let n = transitions.len();
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != base as usize {
                return Err(WordError::Format(format!("state {q} has {} transitions, expected {base}", row.len())));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return Err(WordError::Format(format!("state {q} points to missing state {t}")));
            }
        }
        if let Some(&o) = outputs.iter().find(|&&o| usize::from(o) >= alphabet.len()) {
            return Err(WordError::UnknownLetter(o.to_string()));
        }
        Ok(Dfao { base, alphabet, transitions, outputs })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn next(&self, state: usize, digit: u32) -> usize {
        self.transitions[state][digit as usize]
    }

    pub fn output(&self, state: usize) -> Letter {
        self.outputs[state]
    }

    pub fn run(&self, digits: &[u32]) -> usize {
        digits.iter().fold(0, |q, &d| self.next(q, d))
    }

    /// Output after reading the canonical representation of `n`
    /// (the empty string for `n = 0`).
    pub fn eval(&self, n: u64) -> Letter {
        self.output(self.run(&digits_msd(n, self.base)))
    }

    /// `eval(i)` for `i < len`, computed in one pass: the state of `n` is the
    /// state of `n / k` followed by digit `n % k`.
    pub fn prefix(&self, len: usize) -> Vec<Letter> {
        let k = self.base as usize;
        let mut states = Vec::with_capacity(len);
        for n in 0..len {
            let q = if n == 0 { 0 } else { self.next(states[n / k], (n % k) as u32) };
            states.push(q);
        }
        states.into_iter().map(|q| self.output(q)).collect()
    }

    pub fn prefix_tagged(&self, len: usize, tag: &str) -> Prefix {
        Prefix::new(self.prefix(len), self.alphabet.clone(), tag.to_string())
    }

    /// True when the initial state loops on digit 0, so leading zeros do not
    /// change the output.
    pub fn is_zero_fixed(&self) -> bool {
        self.next(0, 0) == 0
    }

    /// An equivalent DFAO on canonical representations whose initial state
    /// is fixed by digit 0. Returns a clone when that already holds.
    pub fn zero_insensitive(&self) -> Dfao {
        if self.is_zero_fixed() {
            return self.clone();
        }
        // New initial state 0 copies the old initial state except on digit 0;
        // old states shift up by one.
        let mut transitions = Vec::with_capacity(self.num_states() + 1);
        let mut first: Vec<usize> = self.transitions[0].iter().map(|&t| t + 1).collect();
        first[0] = 0;
        transitions.push(first);
        transitions.extend(self.transitions.iter().map(|row| row.iter().map(|&t| t + 1).collect::<Vec<_>>()));
        let mut outputs = vec![self.outputs[0]];
        outputs.extend_from_slice(&self.outputs);
        Dfao { base: self.base, alphabet: self.alphabet.clone(), transitions, outputs }
    }

    /// The same sequence read in base `b`, where `b * b` is the current base.
    ///
    /// Binary strings are cut into digit pairs from the right, so the pairing
    /// depends on the parity of the length. A state keeps both readings: the
    /// state reached under the pairing that ends here, and the state of the
    /// other pairing together with its pending half digit.
    pub fn root_base(&self, b: u32) -> Result<Dfao, WordError> {
        if b < 2 || b.checked_mul(b) != Some(self.base) {
            return Err(WordError::Format(format!("{b} squared is not {}", self.base)));
        }
        let d = self.zero_insensitive();
        let mut ids: std::collections::HashMap<(usize, usize, u32), usize> = std::collections::HashMap::new();
        let mut states = vec![(0usize, 0usize, 0u32)];
        ids.insert(states[0], 0);
        let mut transitions = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (complete, other, half) = states[i];
            let mut row = Vec::with_capacity(b as usize);
            for a in 0..b {
                let t = (d.next(other, half * b + a), complete, a);
                let fresh = states.len();
                let id = *ids.entry(t).or_insert_with(|| {
                    states.push(t);
                    fresh
                });
                row.push(id);
            }
            transitions.push(row);
            i += 1;
        }
        let outputs = states.iter().map(|&(c, _, _)| d.output(c)).collect();
        Ok(Dfao { base: b, alphabet: self.alphabet.clone(), transitions, outputs }.minimize())
    }

    /// Minimal equivalent DFAO: unreachable states dropped, equivalent states
    /// merged by Moore refinement, states numbered in BFS order.
    pub fn minimize(&self) -> Dfao {
        let k = self.base as usize;
        let mut order = vec![0usize];
        let mut seen = vec![false; self.num_states()];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            for &t in &self.transitions[order[i]] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        let mut class: Vec<usize> = vec![0; self.num_states()];
        for &q in &order {
            class[q] = usize::from(self.outputs[q]);
        }
        let mut count = 0;
        loop {
            let mut ids: std::collections::HashMap<Vec<usize>, usize> = std::collections::HashMap::new();
            let mut next = class.clone();
            for &q in &order {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                sig.extend(self.transitions[q].iter().map(|&t| class[t]));
                let fresh = ids.len();
                next[q] = *ids.entry(sig).or_insert(fresh);
            }
            class = next;
            if ids.len() == count {
                break;
            }
            count = ids.len();
        }
        // BFS renumbering of the classes.
        let mut number = vec![usize::MAX; count];
        let mut reps = Vec::new();
        number[class[0]] = 0;
        reps.push(0usize);
        let mut i = 0;
        while i < reps.len() {
            for &t in &self.transitions[reps[i]] {
                if number[class[t]] == usize::MAX {
                    number[class[t]] = reps.len();
                    reps.push(t);
                }
            }
            i += 1;
        }
        let transitions =
            reps.iter().map(|&q| self.transitions[q].iter().map(|&t| number[class[t]]).collect()).collect();
        let outputs = reps.iter().map(|&q| self.outputs[q]).collect();
        Dfao { base: self.base, alphabet: self.alphabet.clone(), transitions, outputs }
    }

    /// Parse the text format:
    ///
    /// ```text
    /// base: 2
    /// state 0 output 0
    /// 0 -> 0
    /// 1 -> 1
    /// state 1 output 1
    /// 0 -> 1
    /// 1 -> 0
    /// ```
    ///
    /// An optional `alphabet:` line after the base declares the output letter
    /// order; without it the letters are ordered numerically when they are all
    /// numbers and by name otherwise.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut lines =
            text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).peekable();
        let base_line = lines.next().ok_or_else(|| WordError::Format("missing `base:` header".into()))?;
        let base: u32 = base_line
            .strip_prefix("base:")
            .and_then(|b| b.trim().parse().ok())
            .ok_or_else(|| WordError::Format(format!("bad base line {base_line:?}")))?;
        let mut declared = None;
        if let Some(l) = lines.peek() {
            if let Some(names) = l.strip_prefix("alphabet:") {
                declared = Some(Alphabet::new(names.split_whitespace())?);
                lines.next();
            }
        }

        struct Block {
            id: usize,
            output: String,
            edges: Vec<(u32, usize)>,
        }
        let mut blocks: Vec<Block> = Vec::new();
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.first() == Some(&"state") {
                match toks.as_slice() {
                    ["state", id, "output", out] => {
                        let id = id.parse().map_err(|_| WordError::Format(format!("bad state id in {line:?}")))?;
                        blocks.push(Block { id, output: out.to_string(), edges: Vec::new() });
                    }
                    _ => return Err(WordError::Format(format!("bad state line {line:?}"))),
                }
            } else {
                let block = blocks
                    .last_mut()
                    .ok_or_else(|| WordError::Format(format!("transition before any state: {line:?}")))?;
                let (d, t) = line
                    .split_once("->")
                    .ok_or_else(|| WordError::Format(format!("expected `d -> q`, got {line:?}")))?;
                let d: u32 = d.trim().parse().map_err(|_| WordError::Format(format!("bad digit in {line:?}")))?;
                let t: usize = t.trim().parse().map_err(|_| WordError::Format(format!("bad target in {line:?}")))?;
                if d >= base {
                    return Err(WordError::Format(format!("digit {d} out of range for base {base}")));
                }
                block.edges.push((d, t));
            }
        }

        let n = blocks.len();
        let alphabet = match declared {
            Some(a) => a,
            None => {
                let mut names: Vec<String> = blocks.iter().map(|b| b.output.clone()).collect();
                names.sort_by(|a, b| match (a.parse::<u64>(), b.parse::<u64>()) {
                    (Ok(x), Ok(y)) => x.cmp(&y),
                    _ => a.cmp(b),
                });
                names.dedup();
                Alphabet::new(names)?
            }
        };
        let mut transitions = vec![vec![usize::MAX; base as usize]; n];
        let mut outputs = vec![0; n];
        let mut seen = vec![false; n];
        for b in blocks {
            if b.id >= n || seen[b.id] {
                return Err(WordError::Format(format!("state ids must be 0..{n} without repeats")));
            }
            seen[b.id] = true;
            outputs[b.id] = alphabet.letter(&b.output)?;
            for (d, t) in b.edges {
                if transitions[b.id][d as usize] != usize::MAX {
                    return Err(WordError::Format(format!("state {} digit {d} defined twice", b.id)));
                }
                transitions[b.id][d as usize] = t;
            }
            if let Some(d) = transitions[b.id].iter().position(|&t| t == usize::MAX) {
                return Err(WordError::Format(format!("state {} has no transition on {d}", b.id)));
            }
        }
        Dfao::new(base, alphabet, transitions, outputs)
    }
}

impl fmt::Display for Dfao {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base: {}", self.base)?;
        writeln!(f, "alphabet: {}", self.alphabet)?;
        for (q, row) in self.transitions.iter().enumerate() {
            writeln!(f, "state {q} output {}", self.alphabet.name(self.outputs[q]))?;
            for (d, t) in row.iter().enumerate() {
                writeln!(f, "{d} -> {t}")?;
            }
        }
        Ok(())
    }
}
