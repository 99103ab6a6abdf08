use std::collections::HashMap;

use super::{decode, encode, symbol_count, AutomataError, MultiTrackDfa};

/// Default bound on intermediate automaton size.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Xor,
    Implies,
    Iff,
}

impl BoolOp {
    pub fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Xor => a != b,
            BoolOp::Implies => !a || b,
            BoolOp::Iff => a == b,
        }
    }
}

/// For every symbol over `to`, the symbol over `from` reading the same
/// digits on the shared tracks. `from` must be a subset of `to`.
fn symbol_map(base: u32, from: &[String], to: &[String]) -> Vec<usize> {
    let pos: Vec<usize> = from.iter().map(|t| to.iter().position(|u| u == t).expect("track subset")).collect();
    (0..symbol_count(base, to.len()))
        .map(|s| {
            let d = decode(base, to.len(), s);
            let sub: Vec<u32> = pos.iter().map(|&p| d[p]).collect();
            encode(base, &sub)
        })
        .collect()
}

fn union_tracks(a: &[String], b: &[String]) -> Vec<String> {
    let mut u: Vec<String> = a.iter().chain(b).cloned().collect();
    u.sort();
    u.dedup();
    u
}

impl MultiTrackDfa {
    /// Boolean combination over the union of both track lists.
    pub fn combine(&self, other: &MultiTrackDfa, op: BoolOp) -> Result<MultiTrackDfa, AutomataError> {
        self.combine_capped(other, op, DEFAULT_STATE_CAP)
    }

    pub fn combine_capped(
        &self,
        other: &MultiTrackDfa,
        op: BoolOp,
        cap: usize,
    ) -> Result<MultiTrackDfa, AutomataError> {
        if self.base != other.base {
            return Err(AutomataError::BaseMismatch(self.base, other.base));
        }
        let tracks = union_tracks(&self.tracks, &other.tracks);
        let ma = symbol_map(self.base, &self.tracks, &tracks);
        let mb = symbol_map(self.base, &other.tracks, &tracks);
        let sigma = ma.len();
        let mut ids: HashMap<(usize, usize), u32> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        ids.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            i += 1;
            for s in 0..sigma {
                let t = (self.next(p, ma[s]), other.next(q, mb[s]));
                let next_id = pairs.len() as u32;
                let id = *ids.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    next_id
                });
                trans.push(id);
            }
            if pairs.len() > cap {
                return Err(AutomataError::StateCapExceeded { cap });
            }
        }
        let accepting = pairs.iter().map(|&(p, q)| op.apply(self.accepting[p], other.accepting[q])).collect();
        Ok(MultiTrackDfa::raw(self.base, tracks, 0, accepting, trans).minimize())
    }

    pub fn and(&self, other: &MultiTrackDfa) -> Result<MultiTrackDfa, AutomataError> {
        self.combine(other, BoolOp::And)
    }

    pub fn or(&self, other: &MultiTrackDfa) -> Result<MultiTrackDfa, AutomataError> {
        self.combine(other, BoolOp::Or)
    }

    pub fn complement(&self) -> MultiTrackDfa {
        let mut c = self.clone();
        for a in c.accepting.iter_mut() {
            *a = !*a;
        }
        c.minimize().normalize_padding().expect("complement of a minimal automaton stays small")
    }

    /// The same language over a larger track list; the new tracks are ignored.
    pub fn cylindrify(&self, tracks: &[String]) -> Result<MultiTrackDfa, AutomataError> {
        let all = union_tracks(&self.tracks, tracks);
        let map = symbol_map(self.base, &self.tracks, &all);
        let sigma = map.len();
        let mut trans = Vec::with_capacity(self.num_states() * sigma);
        for q in 0..self.num_states() {
            trans.extend(map.iter().map(|&s| self.next(q, s) as u32));
        }
        Ok(MultiTrackDfa::raw(self.base, all, self.initial, self.accepting.clone(), trans).minimize())
    }

    /// Existential quantification of one track.
    pub fn project(&self, track: &str) -> Result<MultiTrackDfa, AutomataError> {
        self.project_capped(track, DEFAULT_STATE_CAP)
    }

    pub fn project_capped(&self, track: &str, cap: usize) -> Result<MultiTrackDfa, AutomataError> {
        let t = self.track_index(track)?;
        self.determinize(Some(t), cap)
    }

    /// Make acceptance depend only on the value tuple: a string is accepted
    /// iff some zero-padding of its shortest form was accepted before.
    pub fn normalize_padding(&self) -> Result<MultiTrackDfa, AutomataError> {
        let m = self.minimize();
        // A minimal automaton is padding invariant iff the zero column loops
        // on the initial state.
        if m.next(m.initial, 0) == m.initial {
            return Ok(m);
        }
        m.determinize(None, DEFAULT_STATE_CAP)
    }

    /// Subset construction after optionally deleting track `removed`. The
    /// initial subset is the closure of the initial state under zero columns
    /// and absorbs further zero columns.
    fn determinize(&self, removed: Option<usize>, cap: usize) -> Result<MultiTrackDfa, AutomataError> {
        let k = self.base as usize;
        let (tracks, lift): (Vec<String>, Vec<Vec<usize>>) = match removed {
            Some(t) => {
                let mut rest = self.tracks.clone();
                rest.remove(t);
                let lift = (0..symbol_count(self.base, rest.len()))
                    .map(|r| {
                        let d = decode(self.base, rest.len(), r);
                        (0..k as u32)
                            .map(|x| {
                                let mut full = d.clone();
                                full.insert(t, x);
                                encode(self.base, &full)
                            })
                            .collect()
                    })
                    .collect();
                (rest, lift)
            }
            None => (self.tracks.clone(), (0..self.symbols()).map(|s| vec![s]).collect()),
        };
        let sigma = lift.len();
        let n = self.num_states();
        let mut stamp = vec![usize::MAX; n];
        let mut tick = 0usize;
        let mut step = |set: &[u32], r: usize, out: &mut Vec<u32>| {
            tick += 1;
            out.clear();
            for &q in set {
                for &s in &lift[r] {
                    let t = self.next(q as usize, s);
                    if stamp[t] != tick {
                        stamp[t] = tick;
                        out.push(t as u32);
                    }
                }
            }
            out.sort_unstable();
        };

        let mut start = vec![self.initial as u32];
        let mut buf = Vec::new();
        loop {
            step(&start, 0, &mut buf);
            let mut merged = start.clone();
            merged.extend_from_slice(&buf);
            merged.sort_unstable();
            merged.dedup();
            if merged == start {
                break;
            }
            start = merged;
        }

        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets = vec![start.clone()];
        ids.insert(start, 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            for r in 0..sigma {
                // Leading zero columns stay in the padding phase.
                if i == 0 && r == 0 {
                    trans.push(0);
                    continue;
                }
                step(&sets[i], r, &mut buf);
                let id = match ids.get(&buf) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        ids.insert(buf.clone(), id);
                        sets.push(buf.clone());
                        id
                    }
                };
                trans.push(id);
            }
            if sets.len() > cap {
                return Err(AutomataError::StateCapExceeded { cap });
            }
            i += 1;
        }
        let accepting = sets.iter().map(|set| set.iter().any(|&q| self.accepting[q as usize])).collect();
        Ok(MultiTrackDfa::raw(self.base, tracks, 0, accepting, trans).minimize())
    }

    /// Rename tracks; names absent from `map` are kept. Targets must stay distinct.
    pub fn rename(&self, map: &[(&str, &str)]) -> Result<MultiTrackDfa, AutomataError> {
        for (from, _) in map {
            self.track_index(from)?;
        }
        let renamed: Vec<String> = self
            .tracks
            .iter()
            .map(|t| map.iter().find(|(f, _)| f == t).map(|(_, to)| to.to_string()).unwrap_or_else(|| t.clone()))
            .collect();
        let mut sorted = renamed.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(AutomataError::DuplicateTrack(w[0].clone()));
            }
        }
        // Symbol over `sorted` -> symbol over the old track order.
        let inverse = symbol_map(self.base, &renamed, &sorted);
        let sigma = inverse.len();
        let mut trans = Vec::with_capacity(self.num_states() * sigma);
        for q in 0..self.num_states() {
            trans.extend(inverse.iter().map(|&s| self.next(q, s) as u32));
        }
        Ok(MultiTrackDfa::raw(self.base, sorted, self.initial, self.accepting.clone(), trans).minimize())
    }

    /// Emptiness of the symmetric difference; agrees with [`MultiTrackDfa::equivalent`]
    /// whenever the track lists coincide.
    pub fn same_language(&self, other: &MultiTrackDfa) -> Result<bool, AutomataError> {
        Ok(self.combine(other, BoolOp::Xor)?.is_empty())
    }

    /// All accepted tuples with every coordinate below `bound`, in
    /// lexicographic order of the value tuple.
    pub fn accepted_values(&self, bound: u64) -> Vec<Vec<u64>> {
        let t = self.tracks.len();
        let mut out = Vec::new();
        let mut v = vec![0u64; t];
        if t == 0 {
            if self.accepts(&[]) {
                out.push(Vec::new());
            }
            return out;
        }
        loop {
            if self.accepts(&v) {
                out.push(v.clone());
            }
            let mut i = t;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                v[i] += 1;
                if v[i] < bound {
                    break;
                }
                v[i] = 0;
            }
        }
    }
}
