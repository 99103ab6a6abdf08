//! The factor algebra of a word: length-`n` factors span `V_n`, and the
//! commutators `ab - ba` with `|a| + |b| = n` span `W_n`, where a product
//! that is not a factor is zero. The Lie complexity is `dim V_n - dim W_n`.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::complexity::{lie_complexity, FactorSet};
use crate::linalg::{q, rank_mod_p, Echelon, Q};
use crate::word::Letter;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("UncertifiedData: factor set of length {0} is heuristic")]
    UncertifiedData(usize),
    #[error("factor sets must cover lengths 0..={needed}; entry {index} has length {found}")]
    MissingLength { needed: usize, index: usize, found: usize },
}

/// Coordinates of `V_n`: the length-`n` factors in a fixed order.
#[derive(Clone, Debug)]
pub struct FactorBasis {
    pub n: usize,
    pub basis: Vec<Vec<Letter>>,
    pub index: HashMap<Vec<Letter>, usize>,
}

impl FactorBasis {
    pub fn new(fs: &FactorSet) -> Self {
        let basis: Vec<Vec<Letter>> = fs.members.iter().cloned().collect();
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        FactorBasis { n: fs.n, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// A commutator `ab - ba` in basis coordinates: `(+1 at ab) (-1 at ba)`,
/// either side absent when the product is not a factor.
pub type Commutator = (Option<usize>, Option<usize>);

#[derive(Clone, Debug)]
pub struct CommutatorSpan {
    pub n: usize,
    pub generators: Vec<Commutator>,
    pub rank: usize,
}

fn check_family(fs_all: &[FactorSet], n: usize, allow_uncertified: bool) -> Result<(), AlgebraError> {
    for i in 0..=n {
        let fs = fs_all.get(i).ok_or(AlgebraError::MissingLength { needed: n, index: i, found: 0 })?;
        if fs.n != i {
            return Err(AlgebraError::MissingLength { needed: n, index: i, found: fs.n });
        }
        if !allow_uncertified && !fs.certified {
            return Err(AlgebraError::UncertifiedData(i));
        }
    }
    Ok(())
}

fn commutator_vector(c: Commutator, dim: usize) -> Vec<Q> {
    let mut v = vec![q(0); dim];
    if let Some(i) = c.0 {
        v[i] += q(1);
    }
    if let Some(j) = c.1 {
        v[j] -= q(1);
    }
    v
}

/// Distinct nonzero commutators of total length `n`, streamed into an
/// echelon accumulator. Pairs with an empty side are zero and skipped.
pub fn commutator_span(
    fs_all: &[FactorSet],
    n: usize,
    allow_uncertified: bool,
) -> Result<CommutatorSpan, AlgebraError> {
    check_family(fs_all, n, allow_uncertified)?;
    let basis = FactorBasis::new(&fs_all[n]);
    let mut seen: HashSet<Commutator> = HashSet::new();
    let mut generators = Vec::new();
    let mut echelon = Echelon::new(basis.dim());
    let mut ab = Vec::with_capacity(n);
    let mut ba = Vec::with_capacity(n);
    for split in 1..n {
        for a in &fs_all[split].members {
            for b in &fs_all[n - split].members {
                ab.clear();
                ab.extend_from_slice(a);
                ab.extend_from_slice(b);
                ba.clear();
                ba.extend_from_slice(b);
                ba.extend_from_slice(a);
                let (x, y) = (basis.index.get(&ab).copied(), basis.index.get(&ba).copied());
                if x == y {
                    continue;
                }
                // ab - ba and ba - ab span the same line.
                let key = match (x, y) {
                    (Some(i), Some(j)) if j < i => (Some(j), Some(i)),
                    (None, Some(j)) => (Some(j), None),
                    other => other,
                };
                if seen.insert(key) {
                    echelon.insert(&commutator_vector(key, basis.dim()));
                    generators.push(key);
                }
            }
        }
    }
    Ok(CommutatorSpan { n, generators, rank: echelon.rank() })
}

/// `dim W_n` over the rationals.
pub fn commutator_rank(fs_all: &[FactorSet], n: usize) -> Result<usize, AlgebraError> {
    Ok(commutator_span(fs_all, n, false)?.rank)
}

/// `dim V_n - dim W_n`.
pub fn lie_via_algebra(fs_all: &[FactorSet], n: usize) -> Result<usize, AlgebraError> {
    let span = commutator_span(fs_all, n, false)?;
    Ok(fs_all[n].len() - span.rank)
}

/// Rank of the same generators over `Z/pZ`.
pub fn commutator_rank_mod_p(span: &CommutatorSpan, dim: usize, p: u64) -> usize {
    let rows: Vec<Vec<i64>> = span
        .generators
        .iter()
        .map(|&(x, y)| {
            let mut v = vec![0i64; dim];
            if let Some(i) = x {
                v[i] += 1;
            }
            if let Some(j) = y {
                v[j] -= 1;
            }
            v
        })
        .collect();
    rank_mod_p(&rows, dim, p)
}

/// One line of `algebra-check` output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraRow {
    pub n: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
    #[serde(rename = "L_algebra")]
    pub lie_algebra: usize,
    #[serde(rename = "L_direct")]
    pub lie_direct: usize,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl AlgebraRow {
    pub const TSV_HEADER: &'static str = "n\tdimV\tdimW\tL_algebra\tL_direct\tmatch";

    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.n, self.dim_v, self.dim_w, self.lie_algebra, self.lie_direct, self.matches
        )
    }
}

pub fn algebra_row(fs_all: &[FactorSet], n: usize, allow_uncertified: bool) -> Result<AlgebraRow, AlgebraError> {
    let span = commutator_span(fs_all, n, allow_uncertified)?;
    let dim_v = fs_all[n].len();
    let lie_algebra = dim_v - span.rank;
    let lie_direct = lie_complexity(&fs_all[n]);
    Ok(AlgebraRow { n, dim_v, dim_w: span.rank, lie_algebra, lie_direct, matches: lie_algebra == lie_direct })
}
