use super::ComplexityError;

/// Start index of the lexicographically least rotation (Booth's algorithm).
pub fn least_rotation_start<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let c = &s[j % n];
        let mut i = fail[j - k - 1];
        while i != -1 && *c != s[(k + i as usize + 1) % n] {
            if *c < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        // Here i == -1 or c matches; in the first case compare against s[k].
        if i == -1 && *c != s[k % n] {
            if *c < s[k % n] {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % n
}

pub fn rotate<T: Clone>(s: &[T], t: usize) -> Vec<T> {
    let t = if s.is_empty() { 0 } else { t % s.len() };
    s[t..].iter().chain(&s[..t]).cloned().collect()
}

pub fn least_rotation<T: Ord + Clone>(v: &[T]) -> Result<Vec<T>, ComplexityError> {
    if v.is_empty() {
        return Err(ComplexityError::EmptyWord);
    }
    Ok(rotate(v, least_rotation_start(v)))
}

/// KMP failure function: `fail[i]` is the length of the longest proper
/// border of `s[..=i]`.
fn borders<T: Eq>(s: &[T]) -> Vec<usize> {
    let mut fail = vec![0; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Number of (possibly overlapping) occurrences of `pattern` in `text`.
pub fn count_occurrences<T: Eq>(pattern: &[T], text: &[T]) -> usize {
    if pattern.is_empty() {
        return text.len() + 1;
    }
    let fail = borders(pattern);
    let (mut k, mut count) = (0, 0);
    for c in text {
        while k > 0 && *c != pattern[k] {
            k = fail[k - 1];
        }
        if *c == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            count += 1;
            k = fail[k - 1];
        }
    }
    count
}

/// `v` is primitive iff it occurs exactly twice in `vv`.
pub fn is_primitive<T: Eq + Clone>(v: &[T]) -> Result<bool, ComplexityError> {
    if v.is_empty() {
        return Err(ComplexityError::EmptyWord);
    }
    let vv: Vec<T> = v.iter().chain(v).cloned().collect();
    Ok(count_occurrences(v, &vv) == 2)
}

/// The primitive `u` with `v = u^e`: the shortest period of `v` if it divides
/// `|v|`, otherwise `v` itself.
pub fn primitive_root<T: Eq + Clone>(v: &[T]) -> Result<Vec<T>, ComplexityError> {
    if v.is_empty() {
        return Err(ComplexityError::EmptyWord);
    }
    let n = v.len();
    let period = n - borders(v)[n - 1];
    let len = if n.is_multiple_of(period) { period } else { n };
    Ok(v[..len].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn brute_least<T: Ord + Clone>(v: &[T]) -> Vec<T> {
        (0..v.len()).map(|t| rotate(v, t)).min().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(least_rotation(&chars("tea")).unwrap(), chars("ate"));
        assert_eq!(least_rotation(&chars("aaa")).unwrap(), chars("aaa"));
        assert_eq!(least_rotation(&[1u8, 0]).unwrap(), vec![0, 1]);
        assert_eq!(least_rotation::<u8>(&[]), Err(ComplexityError::EmptyWord));
    }

    #[test]
    fn primitivity_examples() {
        assert!(!is_primitive(&chars("0101")).unwrap());
        assert!(is_primitive(&chars("01")).unwrap());
        assert!(is_primitive(&chars("0110")).unwrap());
        assert_eq!(primitive_root(&chars("010101")).unwrap(), chars("01"));
        assert_eq!(primitive_root(&chars("011")).unwrap(), chars("011"));
        assert_eq!(primitive_root(&chars("101101")).unwrap(), chars("101"));
        assert_eq!(primitive_root(&chars("aaaa")).unwrap(), chars("a"));
        assert_eq!(primitive_root(&chars("abaab")).unwrap(), chars("abaab"));
        assert!(is_primitive::<u8>(&[]).is_err());
        assert!(primitive_root::<u8>(&[]).is_err());
    }

    #[test]
    fn occurrences() {
        assert_eq!(count_occurrences(&chars("aa"), &chars("aaaa")), 3);
        assert_eq!(count_occurrences(&chars("ab"), &chars("abab")), 2);
        assert_eq!(count_occurrences(&chars("x"), &chars("abab")), 0);
    }

    proptest! {
        #[test]
        fn booth_matches_brute_force(v in prop::collection::vec(0u8..3, 1..40)) {
            prop_assert_eq!(least_rotation(&v).unwrap(), brute_least(&v));
        }

        #[test]
        fn least_rotation_is_rotation_invariant(v in prop::collection::vec(0u8..3, 1..30), t in 0usize..30) {
            let canon = least_rotation(&v).unwrap();
            prop_assert_eq!(least_rotation(&rotate(&v, t)).unwrap(), canon.clone());
            prop_assert_eq!(least_rotation(&canon).unwrap(), canon);
        }

        #[test]
        fn primitive_iff_own_root(v in prop::collection::vec(0u8..2, 1..24)) {
            let root = primitive_root(&v).unwrap();
            prop_assert_eq!(is_primitive(&v).unwrap(), root == v);
            prop_assert!(is_primitive(&root).unwrap());
            prop_assert_eq!(v.len() % root.len(), 0);
            let rebuilt: Vec<u8> = root.iter().cycle().take(v.len()).copied().collect();
            prop_assert_eq!(rebuilt, v);
        }

        #[test]
        fn powers_are_not_primitive(v in prop::collection::vec(0u8..3, 1..10), e in 2usize..5) {
            let p: Vec<u8> = v.iter().cycle().take(v.len() * e).copied().collect();
            prop_assert!(!is_primitive(&p).unwrap());
        }
    }
}
