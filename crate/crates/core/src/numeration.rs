//! Base-`k` numerals, most significant digit first.

/// Canonical base-`k` digits of `n`, most significant first; empty for 0.
pub fn digits_msd(mut n: u64, base: u32) -> Vec<u32> {
    let k = u64::from(base);
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % k) as u32);
        n /= k;
    }
    digits.reverse();
    digits
}

/// Value of a digit string, `None` on overflow.
pub fn value_msd(digits: &[u32], base: u32) -> Option<u64> {
    digits.iter().try_fold(0u64, |acc, &d| acc.checked_mul(u64::from(base))?.checked_add(u64::from(d)))
}

/// `digits_msd(n)` left-padded with zeros to `len` digits.
pub fn digits_padded(n: u64, base: u32, len: usize) -> Vec<u32> {
    let d = digits_msd(n, base);
    assert!(d.len() <= len, "{n} needs more than {len} base-{base} digits");
    let mut out = vec![0; len - d.len()];
    out.extend(d);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!(digits_msd(0, 2).is_empty());
        assert_eq!(digits_msd(6, 2), vec![1, 1, 0]);
        assert_eq!(digits_msd(7, 3), vec![2, 1]);
        assert_eq!(digits_padded(3, 2, 4), vec![0, 0, 1, 1]);
        assert_eq!(value_msd(&[0, 2, 1], 3), Some(7));
        assert_eq!(value_msd(&[], 3), Some(0));
    }

    #[test]
    fn round_trip() {
        for base in 2..6 {
            for n in 0..500 {
                assert_eq!(value_msd(&digits_msd(n, base), base), Some(n));
            }
        }
    }
}
