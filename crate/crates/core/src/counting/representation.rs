use std::fmt;

use num_traits::{One, Zero};

use super::{CountingError, Pair};
use crate::automata::MultiTrackDfa;
use crate::linalg::{q, Echelon, Q};
use crate::numeration::digits_msd;

pub const DEFAULT_ITERATION_CAP: usize = 10_000;

/// `a(n) = v * zeta(x_1) ... zeta(x_L) * w` for the canonical base-`k`
/// representation `x` of `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRepresentation {
    pub base: u32,
    pub v: Vec<Q>,
    /// `zeta[d]` is a `dim x dim` matrix, stored by rows.
    pub zeta: Vec<Vec<Vec<Q>>>,
    pub w: Vec<Q>,
}

fn row_times(row: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let dim = m.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); dim];
    for (x, mrow) in row.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(mrow) {
            if !y.is_zero() {
                *o += x * y;
            }
        }
    }
    out
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let dim = m.len();
    (0..dim).map(|j| (0..dim).map(|i| m[i][j].clone()).collect()).collect()
}

impl LinearRepresentation {
    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `v * zeta(x)` for the canonical representation of `n`.
    pub fn state(&self, n: u64) -> Vec<Q> {
        digits_msd(n, self.base).iter().fold(self.v.clone(), |u, &d| row_times(&u, &self.zeta[d as usize]))
    }

    pub fn eval(&self, n: u64) -> Q {
        dot(&self.state(n), &self.w)
    }

    pub fn row_times(&self, u: &[Q], d: u32) -> Vec<Q> {
        row_times(u, &self.zeta[d as usize])
    }

    pub fn output(&self, u: &[Q]) -> Q {
        dot(u, &self.w)
    }

    /// Restrict to the span of the reachable row vectors `v * zeta(x)`.
    fn reduce_left(&self) -> LinearRepresentation {
        let dim = self.dim();
        let mut span = Echelon::new(dim);
        if !span.insert(&self.v) {
            return LinearRepresentation {
                base: self.base,
                v: Vec::new(),
                zeta: vec![Vec::new(); self.base as usize],
                w: Vec::new(),
            };
        }
        let mut i = 0;
        while i < span.rank() {
            let b = span.basis()[i].clone();
            for m in &self.zeta {
                span.insert(&row_times(&b, m));
            }
            i += 1;
        }
        let basis = span.basis().to_vec();
        let r = basis.len();
        let coords = |u: &[Q]| span.coordinates(u).expect("closed under zeta");
        let zeta = self.zeta.iter().map(|m| basis.iter().map(|b| coords(&row_times(b, m))).collect()).collect();
        let mut v = vec![Q::zero(); r];
        v[0] = Q::one();
        let w = basis.iter().map(|b| dot(b, &self.w)).collect();
        LinearRepresentation { base: self.base, v, zeta, w }
    }

    fn transposed(&self) -> LinearRepresentation {
        LinearRepresentation {
            base: self.base,
            v: self.w.clone(),
            zeta: self.zeta.iter().map(|m| transpose(m)).collect(),
            w: self.v.clone(),
        }
    }

    /// Read in reverse: the transpose computes `a` on reversed digit strings,
    /// so reducing it on the left is a right reduction of `self`.
    pub fn minimize(&self) -> LinearRepresentation {
        self.reduce_left().transposed().reduce_left().transposed()
    }

    /// True when every entry of `v`, `zeta` and `w` is a nonnegative integer.
    pub fn is_nonnegative_integral(&self) -> bool {
        let ok = |x: &Q| x.is_integer() && *x >= Q::zero();
        self.v.iter().all(ok) && self.w.iter().all(ok) && self.zeta.iter().flatten().flatten().all(ok)
    }

    pub fn parse(text: &str) -> Result<LinearRepresentation, CountingError> {
        let err = |m: String| CountingError::Format(m);
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let mut field = |key: &str| -> Result<String, CountingError> {
            let l = lines.next().ok_or_else(|| err(format!("missing `{key}`")))?;
            l.strip_prefix(key)
                .map(|r| r.trim().to_string())
                .ok_or_else(|| err(format!("expected `{key}`, found `{l}`")))
        };
        let parse_q =
            |s: &str| -> Result<Q, CountingError> { s.parse::<Q>().map_err(|_| err(format!("bad number `{s}`"))) };
        let parse_row = |s: &str, dim: usize| -> Result<Vec<Q>, CountingError> {
            let row: Vec<Q> = s.split_whitespace().map(parse_q).collect::<Result<_, _>>()?;
            if row.len() != dim {
                return Err(err(format!("expected {dim} entries in `{s}`")));
            }
            Ok(row)
        };
        let base: u32 = field("base:")?.parse().map_err(|_| err("bad base".into()))?;
        if base < 2 {
            return Err(err("base must be at least 2".into()));
        }
        let dim: usize = field("dim:")?.parse().map_err(|_| err("bad dim".into()))?;
        let v = parse_row(&field("v:")?, dim)?;
        let mut zeta = Vec::new();
        for d in 0..base {
            let rest = field("zeta")?;
            if rest.trim_end_matches(':').trim() != d.to_string() {
                return Err(err(format!("expected `zeta {d}:`")));
            }
            let m = (0..dim).map(|_| parse_row(&field("")?, dim)).collect::<Result<Vec<_>, _>>()?;
            zeta.push(m);
        }
        let w = parse_row(&field("w:")?, dim)?;
        Ok(LinearRepresentation { base, v, zeta, w })
    }
}

impl fmt::Display for LinearRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[Q]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "base: {}", self.base)?;
        writeln!(f, "dim: {}", self.dim())?;
        writeln!(f, "v: {}", row(&self.v))?;
        for (d, m) in self.zeta.iter().enumerate() {
            writeln!(f, "zeta {d}:")?;
            for r in m {
                writeln!(f, "{}", row(r))?;
            }
        }
        writeln!(f, "w: {}", row(&self.w))
    }
}

/// The representation of `n -> #{i : a accepts (i, n)}`.
///
/// `zeta(d)[p][q]` counts the digits `e` of `i` moving `p` to `q` on the
/// column `(e, d)`. Values of `i` longer than `n` are folded into `v`: it
/// sums, over every number of leading columns `(e, 0)` with the first `e`
/// nonzero, the weighted states reached. The sum stops once no weight is
/// left on a state that can still reach acceptance.
pub fn counting_representation(a: &MultiTrackDfa) -> Result<LinearRepresentation, CountingError> {
    counting_representation_capped(a, DEFAULT_ITERATION_CAP)
}

pub fn counting_representation_capped(a: &MultiTrackDfa, cap: usize) -> Result<LinearRepresentation, CountingError> {
    let p = Pair::new(a)?;
    let k = a.base();
    let dim = a.num_states();
    let mut zeta = vec![vec![vec![0u32; dim]; dim]; k as usize];
    for (d, m) in zeta.iter_mut().enumerate() {
        for (s, row) in m.iter_mut().enumerate() {
            for e in 0..k {
                row[a.next(s, p.symbol(e, d as u32))] += 1;
            }
        }
    }
    let live = a.coreachable();
    let mut v: Vec<Q> = (0..dim).map(|s| q(i64::from(s == a.initial()))).collect();
    let mut u = vec![Q::zero(); dim];
    for e in 1..k {
        u[a.next(a.initial(), p.symbol(e, 0))] += Q::one();
    }
    // Live weight surviving `dim` rounds lies on a cycle and never dies out.
    let limit = cap.min(dim);
    let mut rounds = 0;
    loop {
        for (s, x) in u.iter_mut().enumerate() {
            if !live[s] {
                *x = Q::zero();
            }
        }
        if u.iter().all(Q::is_zero) {
            break;
        }
        rounds += 1;
        if rounds > limit {
            return Err(CountingError::NoConvergence { cap });
        }
        for (vs, x) in v.iter_mut().zip(&u) {
            *vs += x;
        }
        let mut next = vec![Q::zero(); dim];
        for (s, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (t, &c) in zeta[0][s].iter().enumerate() {
                if c != 0 {
                    next[t] += x * Q::from_integer(c.into());
                }
            }
        }
        u = next;
    }
    let to_q = |x: u32| Q::from_integer(x.into());
    Ok(LinearRepresentation {
        base: k,
        v,
        zeta: zeta.into_iter().map(|m| m.into_iter().map(|r| r.into_iter().map(to_q).collect()).collect()).collect(),
        w: (0..dim).map(|s| q(i64::from(a.is_accepting(s)))).collect(),
    })
}
