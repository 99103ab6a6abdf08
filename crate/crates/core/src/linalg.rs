//! Exact linear algebra over the rationals, plus a prime-field rank used as
//! an independent cross-check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Incrementally built row-echelon basis of a subspace of `Q^dim`.
///
/// Besides the echelon rows it keeps, for each row, its coefficients in
/// terms of the vectors originally inserted, so membership queries can
/// return coordinates in the inserted basis.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    // rows[i] = sum_j coeffs[i][j] * basis[j]
    coeffs: Vec<Vec<Q>>,
    basis: Vec<Vec<Q>>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new(), coeffs: Vec::new(), basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The independent vectors accepted so far, in insertion order.
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    /// Reduce `v` against the rows; returns the remainder and the
    /// coefficients `c` with `v = remainder + sum_i c[i] * rows[i]`.
    fn reduce(&self, v: &[Q]) -> (Vec<Q>, Vec<Q>) {
        assert_eq!(v.len(), self.dim, "vector length does not match the space");
        let mut rem = v.to_vec();
        let mut used = vec![Q::zero(); self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if rem[p].is_zero() {
                continue;
            }
            let c = rem[p].clone();
            for (x, r) in rem.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
            used[i] = c;
        }
        (rem, used)
    }

    /// Add `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let (mut rem, used) = self.reduce(v);
        let Some(p) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let k = self.basis.len();
        // rem = v - sum_i used[i] rows[i] = b_k - sum_i used[i] sum_j coeffs[i][j] b_j
        let mut coeff = vec![Q::zero(); k + 1];
        coeff[k] = Q::one();
        for (c, row) in used.iter().zip(&self.coeffs) {
            if !c.is_zero() {
                for (x, r) in coeff.iter_mut().zip(row) {
                    *x -= c * r;
                }
            }
        }
        let inv = rem[p].recip();
        for x in rem.iter_mut() {
            *x *= &inv;
        }
        for x in coeff.iter_mut() {
            *x *= &inv;
        }
        for row in self.coeffs.iter_mut() {
            row.push(Q::zero());
        }
        self.rows.push(rem);
        self.pivots.push(p);
        self.coeffs.push(coeff);
        self.basis.push(v.to_vec());
        true
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).0.iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the inserted basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let (rem, used) = self.reduce(v);
        if !rem.iter().all(Zero::is_zero) {
            return None;
        }
        let mut out = vec![Q::zero(); self.basis.len()];
        for (c, row) in used.iter().zip(&self.coeffs) {
            if !c.is_zero() {
                for (x, r) in out.iter_mut().zip(row) {
                    *x += c * r;
                }
            }
        }
        Some(out)
    }
}

pub fn rank(rows: &[Vec<Q>], dim: usize) -> usize {
    let mut e = Echelon::new(dim);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Rank of an integer matrix over `Z/pZ`.
pub fn rank_mod_p(rows: &[Vec<i64>], dim: usize, p: u64) -> usize {
    let reduce = |x: i64| x.rem_euclid(p as i64) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for row in rows {
        let mut v: Vec<u64> = row.iter().map(|&x| reduce(x)).collect();
        assert_eq!(v.len(), dim);
        for (piv, b) in &basis {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + p - (c as u128 * *y as u128 % p as u128) as u64) % p;
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = pow(v[piv], p - 2);
            for x in v.iter_mut() {
                *x = (*x as u128 * inv as u128 % p as u128) as u64;
            }
            basis.push((piv, v));
        }
    }
    basis.len()
}

/// `Some(n)` when `x` is an integer.
pub fn as_integer(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

pub fn is_nonnegative(x: &Q) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn small_ranks() {
        let rows = vec![qv(&[1, 2, 3]), qv(&[2, 4, 6]), qv(&[0, 1, 1])];
        assert_eq!(rank(&rows, 3), 2);
        assert_eq!(rank(&[], 3), 0);
        assert_eq!(rank(&[qv(&[0, 0])], 2), 0);
    }

    #[test]
    fn coordinates_recover_combinations() {
        let mut e = Echelon::new(3);
        assert!(e.insert(&qv(&[1, 1, 0])));
        assert!(e.insert(&qv(&[0, 2, 1])));
        assert!(!e.insert(&qv(&[2, 4, 1])));
        let c = e.coordinates(&qv(&[3, 7, 2])).unwrap();
        assert_eq!(c, qv(&[3, 2]));
        assert!(e.coordinates(&qv(&[0, 0, 1])).is_none());
    }

    proptest! {
        #[test]
        fn rational_rank_matches_prime_rank(
            rows in prop::collection::vec(prop::collection::vec(-1i64..=1, 6), 0..10)
        ) {
            let qrows: Vec<Vec<Q>> = rows.iter().map(|r| qv(r)).collect();
            prop_assert_eq!(rank(&qrows, 6), rank_mod_p(&rows, 6, 1_000_000_007));
        }

        #[test]
        fn coordinates_are_exact(
            rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6),
            mix in prop::collection::vec(-4i64..=4, 6)
        ) {
            let mut e = Echelon::new(5);
            for r in &rows {
                e.insert(&qv(r));
            }
            let target: Vec<Q> = (0..5)
                .map(|j| rows.iter().zip(&mix).map(|(r, &m)| q(r[j] * m)).sum())
                .collect();
            let c = e.coordinates(&target).unwrap();
            let rebuilt: Vec<Q> = (0..5)
                .map(|j| e.basis().iter().zip(&c).map(|(b, x)| &b[j] * x).sum())
                .collect();
            prop_assert_eq!(rebuilt, target);
        }
    }
}
