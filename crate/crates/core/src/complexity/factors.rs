use std::collections::{BTreeSet, HashSet};

use super::rotation::{least_rotation, rotate};
use super::ComplexityError;
use crate::word::{Letter, Prefix};

/// The length-`n` blocks of a prefix window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSet {
    pub n: usize,
    pub members: BTreeSet<Vec<Letter>>,
    pub window: usize,
    pub certified: bool,
}

impl FactorSet {
    pub fn from_letters(letters: &[Letter], n: usize, certified: bool) -> Result<FactorSet, ComplexityError> {
        if n > letters.len() {
            return Err(ComplexityError::LengthExceedsPrefix { n, len: letters.len() });
        }
        let members = if n == 0 {
            BTreeSet::from([Vec::new()])
        } else {
            letters.windows(n).collect::<HashSet<_>>().into_iter().map(<[Letter]>::to_vec).collect()
        };
        Ok(FactorSet { n, members, window: letters.len(), certified })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.members.contains(w)
    }
}

/// All length-`n` factors of a prefix. The result is not certified; use
/// [`crate::word::Saturator`] to pick a certified window.
pub fn factor_set(prefix: &Prefix, n: usize) -> Result<FactorSet, ComplexityError> {
    FactorSet::from_letters(prefix.letters(), n, false)
}

/// Classes `[v]` whose every rotation is a member, counted by least rotation.
pub fn lie_complexity(fs: &FactorSet) -> usize {
    if fs.n == 0 {
        return 1;
    }
    full_classes(fs).len()
}

/// Least rotations of the members whose whole class lies in the set.
pub fn full_classes(fs: &FactorSet) -> BTreeSet<Vec<Letter>> {
    if fs.n == 0 {
        return BTreeSet::from([Vec::new()]);
    }
    let mut full = BTreeSet::new();
    let mut seen = HashSet::new();
    for v in &fs.members {
        let canon = least_rotation(v).expect("members are nonempty");
        if !seen.insert(canon.clone()) {
            continue;
        }
        if (0..fs.n).all(|t| fs.contains(&rotate(&canon, t))) {
            full.insert(canon);
        }
    }
    full
}

/// Classes meeting the set in at least one member.
pub fn cyclic_complexity(fs: &FactorSet) -> usize {
    if fs.n == 0 {
        return 1;
    }
    fs.members.iter().map(|v| least_rotation(v).expect("members are nonempty")).collect::<HashSet<_>>().len()
}

/// Distinct Parikh vectors; a sorted copy of a word identifies its vector.
pub fn abelian_complexity(fs: &FactorSet) -> usize {
    fs.members
        .iter()
        .map(|v| {
            let mut s = v.clone();
            s.sort_unstable();
            s
        })
        .collect::<HashSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Bundled;

    fn set(letters: &str, n: usize) -> FactorSet {
        let w: Vec<Letter> = letters.bytes().map(|b| b - b'0').collect();
        FactorSet::from_letters(&w, n, true).unwrap()
    }

    #[test]
    fn thue_morse_pairs() {
        let fs = set("01101001", 2);
        let expected: BTreeSet<Vec<Letter>> = [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]].into_iter().collect();
        assert_eq!(fs.members, expected);
        assert_eq!(lie_complexity(&fs), 3);
        assert_eq!(cyclic_complexity(&fs), 3);
        assert_eq!(abelian_complexity(&fs), 3);
    }

    #[test]
    fn least_rotation_must_itself_be_a_factor() {
        // 21 is a factor but 12 is not, so [12] is not full.
        let fs = set("021", 2);
        assert_eq!(lie_complexity(&fs), 0);
        assert_eq!(cyclic_complexity(&fs), 2);
    }

    fn naive_lie(fs: &FactorSet) -> usize {
        let mut classes = BTreeSet::new();
        for v in &fs.members {
            let rots: Vec<Vec<Letter>> = (0..fs.n).map(|t| rotate(v, t)).collect();
            if rots.iter().all(|r| fs.contains(r)) {
                classes.insert(rots.into_iter().min().expect("n >= 1"));
            }
        }
        classes.len()
    }

    proptest::proptest! {
        #[test]
        fn lie_matches_naive_count(w in proptest::collection::vec(0u8..4, 1..60), n in 1usize..6) {
            proptest::prop_assume!(n <= w.len());
            let fs = FactorSet::from_letters(&w, n, true).unwrap();
            proptest::prop_assert_eq!(lie_complexity(&fs), naive_lie(&fs));
        }
    }

    #[test]
    fn empty_length() {
        let fs = set("0110", 0);
        assert_eq!(fs.len(), 1);
        assert!(fs.contains(&[]));
        assert_eq!(lie_complexity(&fs), 1);
        assert_eq!(cyclic_complexity(&fs), 1);
        assert_eq!(abelian_complexity(&fs), 1);
    }

    #[test]
    fn too_long() {
        let w = [0u8, 1];
        assert!(matches!(
            FactorSet::from_letters(&w, 3, false),
            Err(ComplexityError::LengthExceedsPrefix { n: 3, len: 2 })
        ));
    }

    #[test]
    fn constant_word() {
        let fs = set("00000000", 3);
        assert_eq!(cyclic_complexity(&fs), 1);
        assert_eq!(lie_complexity(&fs), 1);
    }

    #[test]
    fn thue_morse_length_five_has_no_full_class() {
        let w = Bundled::ThueMorse.generator().letters(4096);
        let fs = FactorSet::from_letters(&w, 5, true).unwrap();
        assert_eq!(lie_complexity(&fs), 0);
    }

    #[test]
    fn cantor_length_four() {
        let w = Bundled::Cantor.generator().letters(3usize.pow(8));
        let fs = FactorSet::from_letters(&w, 4, false).unwrap();
        assert_eq!(lie_complexity(&fs), 3);
    }

    #[test]
    fn fibonacci_is_sturmian() {
        let w = Bundled::Fibonacci.generator().letters(4096);
        for n in 0..=20 {
            let fs = FactorSet::from_letters(&w, n, true).unwrap();
            assert_eq!(fs.len(), n + 1, "n={n}");
            if n >= 1 {
                assert_eq!(abelian_complexity(&fs), 2, "n={n}");
            }
        }
    }
}
