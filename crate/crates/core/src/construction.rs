//! A recurrent binary word of slowly growing factor complexity with
//! infinitely many primitive factors of unbounded exponent.
//!
//! Prefixes `u_1, u_2, ...` of the Fibonacci word are chosen so that each
//! ends with the previous one and is much longer. With
//! `a_{i,j} = ceil(|u_i| / |u_j|)`,
//!
//! ```text
//! v_n = u_n u_{n-1}^{a_{n,n-1}} ... u_2^{a_{n,2}} u_1^{a_{n,1}} u_2^{a_{n,2}} ... u_{n-1}^{a_{n,n-1}} u_n
//! s_1 = u_1,   s_n = s_{n-1} v_n s_{n-1} v_n,
//! ```
//!
//! and the word is the limit of the `s_n`. The growth thresholds come from
//! `f`: `|u_i| > 2^{m_i} |u_{i-1}|` where `m_j` is the largest `m` with
//! `f(m) <= 19 j^2`. For any slowly growing `f` these lengths are far out of
//! reach, so toy mode replaces `2^{m_i}` by small multipliers `g_i`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::complexity::{count_occurrences, primitive_root};
use crate::word::{Alphabet, Bundled, Letter, Prefix};

pub const DEFAULT_SCAN_CAP: usize = 1 << 24;
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 26;
/// Horizon of the weakly increasing envelope of a custom `f`.
pub const ENVELOPE_LOOKAHEAD: u128 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("SuffixSearchExceeded: no Fibonacci prefix of length at most {cap} qualifies as u_{stage}")]
    SuffixSearchExceeded { stage: usize, cap: usize },
    #[error("ParameterOverflow: {0}")]
    ParameterOverflow(String),
    #[error("PrefixTooShort: need {needed} letters, prefix has {len}")]
    PrefixTooShort { needed: usize, len: usize },
    #[error("WindowUnstable: p({n}) differs between the prefix and its first half")]
    WindowUnstable { n: usize },
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

/// The complexity budget `f`.
#[derive(Clone)]
pub enum Growth {
    /// `ceil(log2(log2(n + 4)))`
    LogLog,
    /// `ceil(log2(n + 2))`
    Log,
    /// `ceil(sqrt(n))`, at least 1
    Sqrt,
    /// `n + 1`
    Linear,
    /// Any function tending to infinity; made weakly increasing by taking the
    /// minimum over the next [`ENVELOPE_LOOKAHEAD`] arguments.
    Custom(Arc<dyn Fn(u128) -> u128 + Send + Sync>),
}

impl fmt::Debug for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn ceil_log2(x: u128) -> u128 {
    if x <= 1 {
        0
    } else {
        u128::from(128 - (x - 1).leading_zeros())
    }
}

impl Growth {
    pub fn parse(s: &str) -> Result<Growth, ConstructionError> {
        match s {
            "loglog" => Ok(Growth::LogLog),
            "log" => Ok(Growth::Log),
            "sqrt" => Ok(Growth::Sqrt),
            "linear" => Ok(Growth::Linear),
            _ => Err(ConstructionError::Invalid(format!("unknown growth function `{s}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Growth::LogLog => "loglog",
            Growth::Log => "log",
            Growth::Sqrt => "sqrt",
            Growth::Linear => "linear",
            Growth::Custom(_) => "custom",
        }
    }

    fn raw(&self, n: u128) -> u128 {
        match self {
            // ceil(log2(x)) <= t iff x <= 2^t, so this is exact on integers.
            Growth::LogLog => ceil_log2(ceil_log2(n.saturating_add(4))),
            Growth::Log => ceil_log2(n.saturating_add(2)),
            Growth::Sqrt => {
                let r = (n as f64).sqrt() as u128;
                let r = (r.saturating_sub(2)..=r + 2).find(|&r| r.saturating_mul(r) >= n).unwrap_or(r);
                r.max(1)
            }
            Growth::Linear => n.saturating_add(1),
            Growth::Custom(f) => f(n),
        }
    }

    /// `f(n)`, weakly increasing in `n`.
    pub fn value(&self, n: u128) -> u128 {
        match self {
            Growth::Custom(_) => (n..=n.saturating_add(ENVELOPE_LOOKAHEAD)).map(|j| self.raw(j)).min().unwrap_or(0),
            _ => self.raw(n),
        }
    }

    /// Largest `m` with `f(m) <= bound`, or `None` when even `u128::MAX`
    /// qualifies or no `m` does.
    pub fn threshold(&self, bound: u128) -> Option<u128> {
        if self.value(0) > bound || self.value(u128::MAX - ENVELOPE_LOOKAHEAD) <= bound {
            return None;
        }
        let (mut lo, mut hi) = (0u128, u128::MAX - ENVELOPE_LOOKAHEAD);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.value(mid) <= bound {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Thresholds `2^{m_i}` from `f`.
    Honest,
    /// Thresholds `g_i`, each at least 2; the last one repeats if the list
    /// is shorter than the depth.
    Toy { g: Vec<u64> },
}

/// How the `u_2` factor left of `u_1` in `v_n` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VnReading {
    /// `u_2^{a_{n,2}}` on both sides of `u_1`.
    Symmetric,
    /// `u_2^{a_{2,1}}` left of `u_1`, as printed in the original display.
    Verbatim,
}

#[derive(Clone, Debug)]
pub struct ConstructionParams {
    pub f: Growth,
    pub depth: usize,
    pub mode: Mode,
    pub reading: VnReading,
    pub scan_cap: usize,
    /// Largest word, in letters, the build may hold.
    pub memory_budget: usize,
}

impl ConstructionParams {
    pub fn toy(depth: usize, g: Vec<u64>) -> Self {
        ConstructionParams {
            f: Growth::LogLog,
            depth,
            mode: Mode::Toy { g },
            reading: VnReading::Symmetric,
            scan_cap: DEFAULT_SCAN_CAP,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }

    pub fn honest(depth: usize, f: Growth) -> Self {
        ConstructionParams { f, mode: Mode::Honest, ..ConstructionParams::toy(depth, vec![2]) }
    }
}

/// Every word of the build, indexed from 1 as in the construction (slot 0
/// of each list is stage 1).
#[derive(Clone, Debug)]
pub struct ConstructionTrace {
    pub reading: VnReading,
    pub thresholds: Vec<u128>,
    pub u: Vec<Vec<Letter>>,
    /// `a[i-1][j-1] = a_{i,j}`.
    pub a: Vec<Vec<u64>>,
    /// `v[n-2] = v_n` for `n >= 2`.
    pub v: Vec<Vec<Letter>>,
    pub s: Vec<Vec<Letter>>,
    pub prefix: Prefix,
}

impl ConstructionTrace {
    pub fn depth(&self) -> usize {
        self.u.len()
    }

    /// `d_i = |u_i|`.
    pub fn lengths(&self) -> Vec<usize> {
        self.u.iter().map(Vec::len).collect()
    }

    pub fn u(&self, i: usize) -> &[Letter] {
        &self.u[i - 1]
    }

    pub fn a(&self, i: usize, j: usize) -> u64 {
        self.a[i - 1][j - 1]
    }

    pub fn v(&self, n: usize) -> &[Letter] {
        &self.v[n - 2]
    }

    pub fn s(&self, n: usize) -> &[Letter] {
        &self.s[n - 1]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let text = |w: &[Letter]| w.iter().map(|a| char::from(b'0' + a)).collect::<String>();
        #[derive(Serialize)]
        struct Record<'a> {
            reading: VnReading,
            depth: usize,
            thresholds: Vec<String>,
            d: Vec<usize>,
            a: &'a [Vec<u64>],
            u: Vec<String>,
            v_lengths: Vec<usize>,
            s_lengths: Vec<usize>,
            prefix: String,
        }
        serde_json::to_value(Record {
            reading: self.reading,
            depth: self.depth(),
            thresholds: self.thresholds.iter().map(u128::to_string).collect(),
            d: self.lengths(),
            a: &self.a,
            u: self.u.iter().map(|w| text(w)).collect(),
            v_lengths: self.v.iter().map(Vec::len).collect(),
            s_lengths: self.s.iter().map(Vec::len).collect(),
            prefix: text(self.prefix.letters()),
        })
        .expect("plain data serializes")
    }
}

fn overflow(msg: String) -> ConstructionError {
    ConstructionError::ParameterOverflow(msg)
}

/// Growth multipliers: `g_i` in toy mode, `2^{m_i}` in honest mode.
fn thresholds(params: &ConstructionParams) -> Result<Vec<u128>, ConstructionError> {
    match &params.mode {
        Mode::Toy { g } => {
            if g.is_empty() || g.iter().any(|&x| x < 2) {
                return Err(ConstructionError::Invalid("toy multipliers must be at least 2".into()));
            }
            Ok((0..params.depth).map(|i| u128::from(g[i.min(g.len() - 1)])).collect())
        }
        Mode::Honest => (1..=params.depth as u128)
            .map(|j| {
                let bound = 19 * j * j;
                let m = params
                    .f
                    .threshold(bound)
                    .ok_or_else(|| overflow(format!("m_{j} = max {{m : f(m) <= {bound}}} does not fit in 128 bits")))?;
                if m >= 127 {
                    return Err(overflow(format!("m_{j} = {m}, so 2^m_{j} does not fit in 128 bits")));
                }
                Ok(1u128 << m)
            })
            .collect(),
    }
}

struct Fibonacci {
    letters: Vec<Letter>,
}

impl Fibonacci {
    fn get(&mut self, len: usize) -> &[Letter] {
        if self.letters.len() < len {
            let want = len.max(2 * self.letters.len()).max(64);
            self.letters = Bundled::Fibonacci.generator().letters(want);
        }
        &self.letters[..len]
    }
}

fn power(w: &[Letter], e: u64, out: &mut Vec<Letter>) {
    for _ in 0..e {
        out.extend_from_slice(w);
    }
}

/// `v_n` from `u_1..u_n` and the exponents.
fn assemble_v(u: &[Vec<Letter>], a: &[Vec<u64>], n: usize, reading: VnReading) -> Vec<Letter> {
    let exp = |j: usize| a[n - 1][j - 1];
    let mut out = Vec::new();
    for j in (2..=n).rev() {
        let e = if j == 2 && n > 2 && reading == VnReading::Verbatim { a[1][0] } else { exp(j) };
        power(&u[j - 1], e, &mut out);
    }
    power(&u[0], exp(1), &mut out);
    for j in 2..=n {
        power(&u[j - 1], exp(j), &mut out);
    }
    out
}

pub fn build(params: &ConstructionParams) -> Result<ConstructionTrace, ConstructionError> {
    if params.depth == 0 {
        return Err(ConstructionError::Invalid("depth must be at least 1".into()));
    }
    let budget = params.memory_budget;
    let thresholds = thresholds(params)?;
    let too_big = |what: &str, len: u128| overflow(format!("{what} needs {len} letters, over the budget of {budget}"));
    let mut fib = Fibonacci { letters: Vec::new() };

    let first = thresholds[0];
    if first > budget as u128 {
        return Err(too_big("|u_1|", first));
    }
    let mut u: Vec<Vec<Letter>> = vec![fib.get(first as usize).to_vec()];
    for stage in 2..=params.depth {
        let prev = u.last().expect("nonempty").clone();
        let min_len = thresholds[stage - 1]
            .checked_mul(prev.len() as u128)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| overflow(format!("|u_{stage}| does not fit in 128 bits")))?;
        if min_len > budget as u128 {
            return Err(too_big(&format!("|u_{stage}|"), min_len));
        }
        let cap = params.scan_cap.min(budget);
        let mut len = min_len as usize;
        loop {
            if len > cap {
                return Err(ConstructionError::SuffixSearchExceeded { stage, cap });
            }
            let p = fib.get(len);
            if p.ends_with(&prev) {
                u.push(p.to_vec());
                break;
            }
            len += 1;
        }
    }

    let d: Vec<u64> = u.iter().map(|w| w.len() as u64).collect();
    let a: Vec<Vec<u64>> = d.iter().map(|&di| d.iter().map(|&dj| di.div_ceil(dj)).collect()).collect();

    let mut v = Vec::new();
    let mut s = vec![u[0].clone()];
    for n in 2..=params.depth {
        let vn = assemble_v(&u, &a, n, params.reading);
        let prev = s.last().expect("nonempty");
        let len = 2 * (prev.len() as u128 + vn.len() as u128);
        if len > budget as u128 {
            return Err(too_big(&format!("s_{n}"), len));
        }
        let mut sn = Vec::with_capacity(len as usize);
        for _ in 0..2 {
            sn.extend_from_slice(prev);
            sn.extend_from_slice(&vn);
        }
        v.push(vn);
        s.push(sn);
    }
    let prefix = Prefix::new(
        s.last().expect("nonempty").clone(),
        Alphabet::digits(2),
        format!("construction depth={}", params.depth),
    );
    Ok(ConstructionTrace { reading: params.reading, thresholds, u, a, v, s, prefix })
}

fn occurs(pattern: &[Letter], text: &[Letter]) -> bool {
    pattern.len() <= text.len() && text.windows(pattern.len()).any(|w| w == pattern)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// The structural facts the construction promises, each checked on the
/// built words.
pub fn check_invariants(t: &ConstructionTrace) -> Vec<InvariantCheck> {
    let depth = t.depth();
    let d = t.lengths();
    let mut checks = Vec::new();
    let mut push = |name, holds| checks.push(InvariantCheck { name, holds });

    let fib = Bundled::Fibonacci.generator().letters(d[depth - 1]);
    push("u_i is a Fibonacci prefix", t.u.iter().all(|w| fib.starts_with(w)));
    push("u_{i-1} is a suffix of u_i", (2..=depth).all(|i| t.u(i).ends_with(t.u(i - 1))));
    push(
        "|u_i| exceeds the threshold times |u_{i-1}|",
        (2..=depth).all(|i| d[i - 1] as u128 > t.thresholds[i - 1] * d[i - 2] as u128),
    );
    push(
        "a_{i,j} = ceil(|u_i| / |u_j|)",
        (1..=depth).all(|i| (1..=depth).all(|j| t.a(i, j) == (d[i - 1] as u64).div_ceil(d[j - 1] as u64))),
    );
    push("a_{i,i} = 1", (1..=depth).all(|i| t.a(i, i) == 1));
    push("v_n has the displayed shape", (2..=depth).all(|n| t.v(n) == assemble_v(&t.u, &t.a, n, t.reading).as_slice()));
    push("s_1 = u_1", t.s(1) == t.u(1));
    push(
        "s_n = s_{n-1} v_n s_{n-1} v_n",
        (2..=depth).all(|n| {
            let (p, v) = (t.s(n - 1), t.v(n));
            let half = [p, v].concat();
            t.s(n) == [half.as_slice(), half.as_slice()].concat().as_slice()
        }),
    );
    push("s_i is a prefix of s_{i+1}", (2..=depth).all(|n| t.s(n).starts_with(t.s(n - 1))));
    // Two occurrences of s_i give two occurrences of each of its factors.
    push(
        "every factor of s_i occurs twice in s_{i+1}",
        (2..=depth).all(|n| count_occurrences(t.s(n - 1), t.s(n)) >= 2),
    );
    push(
        "u_i^{a_{n,i}} is a factor of v_n",
        (2..=depth).all(|n| (1..n).all(|i| occurs(&t.u(i).repeat(t.a(n, i) as usize), t.v(n)))),
    );
    push(
        "u_i = y_i^e with e in {1, 2, 3}",
        t.u.iter().all(|w| {
            let root = primitive_root(w).expect("nonempty");
            (1..=3).contains(&(w.len() / root.len()))
        }),
    );
    checks
}

/// Number of distinct primitive roots among `u_1, ..., u_depth`.
pub fn distinct_primitive_roots(t: &ConstructionTrace) -> usize {
    let mut roots: Vec<Vec<Letter>> = t.u.iter().map(|w| primitive_root(w).expect("nonempty")).collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

/// Whether `u_i^e` is a factor of the built prefix.
pub fn verify_powers(t: &ConstructionTrace, i: usize, e: usize) -> Result<bool, ConstructionError> {
    if i == 0 || i > t.depth() {
        return Err(ConstructionError::Invalid(format!("stage {i} not built")));
    }
    let w = t.u(i).repeat(e);
    let len = t.prefix.len();
    if w.len() > len {
        return Err(ConstructionError::PrefixTooShort { needed: w.len(), len });
    }
    Ok(occurs(&w, t.prefix.letters()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub p: usize,
    pub budget: u128,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    /// Set in honest mode, where `p(n) <= n f(n)` is promised for
    /// `n >= |u_1|`; in toy mode the rows are informational.
    pub contract_from: Option<usize>,
}

impl BoundReport {
    /// True when every row the contract covers is ok.
    pub fn contract_holds(&self) -> bool {
        match self.contract_from {
            Some(n0) => self.rows.iter().filter(|r| r.n >= n0).all(|r| r.ok),
            None => true,
        }
    }
}

/// Rows `(n, p(n), n f(n), ok)` on the built prefix. A row is only reported
/// when `p(n)` is the same on the prefix and on its first half.
pub fn verify_complexity_bound(
    t: &ConstructionTrace,
    f: &Growth,
    honest: bool,
    n_range: std::ops::RangeInclusive<usize>,
) -> Result<BoundReport, ConstructionError> {
    let letters = t.prefix.letters();
    let half = &letters[..letters.len() / 2];
    let count = |w: &[Letter], n: usize| {
        let mut set: Vec<&[Letter]> = w.windows(n).collect();
        set.sort_unstable();
        set.dedup();
        set.len()
    };
    let mut rows = Vec::new();
    for n in n_range {
        if n == 0 || n > half.len() {
            return Err(ConstructionError::PrefixTooShort { needed: 2 * n.max(1), len: letters.len() });
        }
        let p = count(letters, n);
        if count(half, n) != p {
            return Err(ConstructionError::WindowUnstable { n });
        }
        let budget = (n as u128).saturating_mul(f.value(n as u128));
        rows.push(BoundRow { n, p, budget, ok: p as u128 <= budget });
    }
    Ok(BoundReport { rows, contract_from: honest.then(|| t.u(1).len()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(depth: usize) -> ConstructionTrace {
        build(&ConstructionParams::toy(depth, vec![2])).unwrap()
    }

    #[test]
    fn toy_depth_three() {
        let t = toy(3);
        let d = t.lengths();
        assert!(d[0] < d[1] && d[1] < d[2]);
        assert_eq!(t.s(1), t.u(1));
        for i in 1..=3 {
            assert_eq!(t.a(i, i), 1);
        }
        assert!(verify_powers(&t, 1, t.a(3, 1) as usize).unwrap());
        for i in 1..=3 {
            assert!(verify_powers(&t, i, 1).unwrap());
        }
        assert!(check_invariants(&t).iter().all(|c| c.holds), "{:?}", check_invariants(&t));
    }

    #[test]
    fn toy_depth_four_invariants() {
        let t = toy(4);
        for c in check_invariants(&t) {
            assert!(c.holds, "{}", c.name);
        }
        for i in 1..4 {
            assert!(verify_powers(&t, i, t.a(4, i) as usize).unwrap());
        }
        assert!(distinct_primitive_roots(&t) > distinct_primitive_roots(&toy(2)));
        let huge = t.prefix.len();
        assert!(matches!(verify_powers(&t, 1, huge), Err(ConstructionError::PrefixTooShort { .. })));
    }

    #[test]
    fn verbatim_reading() {
        let mut params = ConstructionParams::toy(4, vec![2, 3]);
        params.reading = VnReading::Verbatim;
        let t = build(&params).unwrap();
        for c in check_invariants(&t) {
            assert!(c.holds, "{}", c.name);
        }
        let sym = build(&ConstructionParams::toy(4, vec![2, 3])).unwrap();
        // The readings agree on v_2 and wherever a_{n,2} = a_{2,1}.
        assert_eq!(t.v(2), sym.v(2));
        assert_eq!(t.v(3) == sym.v(3), t.a(3, 2) == t.a(2, 1));
        assert_ne!(t.a(4, 2), t.a(2, 1));
        assert_ne!(t.v(4), sym.v(4));
        assert_eq!(t.thresholds, vec![2, 3, 3, 3]);
    }

    #[test]
    fn complexity_report() {
        let t = toy(4);
        let report = verify_complexity_bound(&t, &Growth::LogLog, false, 1..=16).unwrap();
        assert_eq!(report.rows[0].p, 2);
        assert!(report.rows.windows(2).all(|w| w[0].p <= w[1].p));
        assert!(report.contract_holds());
        assert_eq!(
            verify_complexity_bound(&t, &Growth::LogLog, false, 1..=40),
            Err(ConstructionError::WindowUnstable { n: 18 })
        );
    }

    #[test]
    fn honest_mode_overflows() {
        let err = build(&ConstructionParams::honest(4, Growth::LogLog)).unwrap_err();
        assert!(matches!(err, ConstructionError::ParameterOverflow(_)), "{err}");
        // f(n) = n + 1: m_1 = 18, so u_1 fits but u_2 needs over 2^93 letters.
        assert_eq!(Growth::Linear.threshold(19), Some(18));
        let err = build(&ConstructionParams::honest(2, Growth::Linear)).unwrap_err();
        assert!(matches!(err, ConstructionError::ParameterOverflow(_)), "{err}");
        let t = build(&ConstructionParams::honest(1, Growth::Linear)).unwrap();
        assert_eq!(t.u(1).len(), 1 << 18);
    }

    #[test]
    fn growth_functions() {
        assert_eq!(Growth::LogLog.value(0), 1);
        assert_eq!(Growth::LogLog.value(12), 2);
        assert_eq!(Growth::LogLog.value(13), 3);
        assert_eq!(Growth::LogLog.threshold(19), None);
        assert_eq!(Growth::Log.threshold(4), Some(14));
        assert_eq!(Growth::Sqrt.value(16), 4);
        assert_eq!(Growth::Sqrt.value(17), 5);
        // A dip is smoothed out by the envelope.
        let bumpy = Growth::Custom(Arc::new(|n| if n == 10 { 100 } else { n / 4 }));
        assert_eq!(bumpy.value(10), 2);
        assert!((0..300).all(|n| bumpy.value(n) <= bumpy.value(n + 1)));
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(build(&ConstructionParams::toy(0, vec![2])), Err(ConstructionError::Invalid(_))));
        assert!(matches!(build(&ConstructionParams::toy(2, vec![1])), Err(ConstructionError::Invalid(_))));
        let mut p = ConstructionParams::toy(4, vec![2]);
        p.scan_cap = 20;
        assert!(matches!(build(&p), Err(ConstructionError::SuffixSearchExceeded { .. })));
    }

    #[test]
    fn trace_json() {
        let t = toy(3);
        let j = t.to_json();
        assert_eq!(j["depth"], 3);
        assert_eq!(j["d"][0], 2);
        assert_eq!(j["prefix"].as_str().unwrap().len(), t.prefix.len());
        assert_eq!(j["a"][2][0], t.a(3, 1));
    }
}
