//! Text form:
//!
//! ```text
//! base: 2
//! tracks: x y
//! state 0 accept 1
//! 0 0 -> 0
//! 0 1 -> 1
//! ...
//! ```
//!
//! Transition lines list one digit per track before the arrow.

use std::fmt;

use super::{AutomataError, MultiTrackDfa};

impl fmt::Display for MultiTrackDfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "base: {}", self.base)?;
        writeln!(f, "tracks: {}", self.tracks.join(" "))?;
        // States are written in initial-first order.
        let n = self.num_states();
        let order: Vec<usize> = std::iter::once(self.initial).chain((0..n).filter(|&q| q != self.initial)).collect();
        let mut pos = vec![0; n];
        for (i, &q) in order.iter().enumerate() {
            pos[q] = i;
        }
        for &q in &order {
            writeln!(f, "state {} accept {}", pos[q], u8::from(self.accepting[q]))?;
            for s in 0..self.symbols() {
                let digits: Vec<String> = self.decode(s).iter().map(u32::to_string).collect();
                let lhs = digits.join(" ");
                let sep = if lhs.is_empty() { "" } else { " " };
                writeln!(f, "{lhs}{sep}-> {}", pos[self.next(q, s)])?;
            }
        }
        Ok(())
    }
}

impl MultiTrackDfa {
    /// Parse the text form; state 0 is initial. Padding is normalized.
    pub fn parse(text: &str) -> Result<MultiTrackDfa, AutomataError> {
        let err = |m: String| AutomataError::Format(m);
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let base: u32 = lines
            .next()
            .and_then(|l| l.strip_prefix("base:"))
            .ok_or_else(|| err("expected `base:` line".into()))?
            .trim()
            .parse()
            .map_err(|e| err(format!("bad base: {e}")))?;
        let tracks: Vec<String> = lines
            .next()
            .and_then(|l| l.strip_prefix("tracks:"))
            .ok_or_else(|| err("expected `tracks:` line".into()))?
            .split_whitespace()
            .map(String::from)
            .collect();
        let mut sorted = tracks.clone();
        sorted.sort();
        let sigma = super::symbol_count(base.max(2), tracks.len());
        let mut accepting: Vec<Option<bool>> = Vec::new();
        let mut table: Vec<Vec<Option<usize>>> = Vec::new();
        let mut current: Option<usize> = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("state") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [id, "accept", flag] = parts[..] else {
                    return Err(err(format!("bad state line `{line}`")));
                };
                let id: usize = id.parse().map_err(|_| err(format!("bad state id in `{line}`")))?;
                let flag = match flag {
                    "0" => false,
                    "1" => true,
                    _ => return Err(err(format!("bad accept flag in `{line}`"))),
                };
                if id >= accepting.len() {
                    accepting.resize(id + 1, None);
                    table.resize(id + 1, vec![None; sigma]);
                }
                if accepting[id].replace(flag).is_some() {
                    return Err(err(format!("state {id} declared twice")));
                }
                current = Some(id);
                continue;
            }
            let q = current.ok_or_else(|| err(format!("transition before any state: `{line}`")))?;
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| err(format!("bad line `{line}`")))?;
            let digits: Vec<u32> = lhs
                .split_whitespace()
                .map(|d| d.parse::<u32>().ok().filter(|&d| d < base))
                .collect::<Option<_>>()
                .ok_or_else(|| err(format!("bad digits in `{line}`")))?;
            if digits.len() != tracks.len() {
                return Err(err(format!("expected {} digits in `{line}`", tracks.len())));
            }
            let target: usize = rhs.trim().parse().map_err(|_| err(format!("bad target in `{line}`")))?;
            let s = super::encode(base, &digits);
            if table[q][s].replace(target).is_some() {
                return Err(err(format!("duplicate transition in `{line}`")));
            }
        }
        let n = accepting.len();
        let accepting: Vec<bool> = accepting
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| err(format!("state {i} missing"))))
            .collect::<Result<_, _>>()?;
        let mut trans = Vec::with_capacity(n * sigma);
        for (q, row) in table.iter().enumerate() {
            for (s, t) in row.iter().enumerate() {
                let t = t.ok_or_else(|| err(format!("state {q} lacks a transition on symbol {s}")))?;
                if t >= n {
                    return Err(err(format!("target {t} out of range")));
                }
                trans.push(t as u32);
            }
        }
        if n == 0 {
            return Err(err("no states".into()));
        }
        let a = if sorted == tracks {
            MultiTrackDfa::from_parts(base, tracks, 0, accepting, trans)?
        } else {
            // Accept any track order; store sorted.
            let mut placeholder: Vec<String> = (0..tracks.len()).map(|i| format!("\u{1}{i:08}")).collect();
            placeholder.sort();
            let a = MultiTrackDfa::from_parts(base, placeholder.clone(), 0, accepting, trans)?;
            let map: Vec<(&str, &str)> =
                placeholder.iter().zip(&tracks).map(|(p, t)| (p.as_str(), t.as_str())).collect();
            a.rename(&map)?
        };
        a.normalize_padding()
    }
}
