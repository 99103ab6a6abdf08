use std::collections::{BTreeSet, HashSet};

use super::rotation::{is_primitive, least_rotation};
use super::ComplexityError;
use crate::word::{Generator, Letter};

/// Least rotations of the primitive words `y` with `|y| <= max_root_len`
/// such that `y^exp` is a factor of `word`.
pub fn scan_powers(word: &[Letter], max_root_len: usize, exp: usize) -> BTreeSet<Vec<Letter>> {
    let mut found = BTreeSet::new();
    for len in 1..=max_root_len {
        let need = len * (exp - 1);
        if word.len() < len * exp {
            break;
        }
        // agree[j]: how many consecutive positions from j satisfy w[t] == w[t + len].
        let m = word.len() - len;
        let mut agree = vec![0usize; m + 1];
        for j in (0..m).rev() {
            if word[j] == word[j + len] {
                agree[j] = agree[j + 1] + 1;
            }
        }
        let mut roots = HashSet::new();
        for (i, &a) in agree.iter().enumerate().take(m) {
            if a >= need {
                roots.insert(&word[i..i + len]);
            }
        }
        for y in roots {
            if is_primitive(y).expect("roots are nonempty") {
                found.insert(least_rotation(y).expect("roots are nonempty"));
            }
        }
    }
    found
}

/// Primitive roots of `exp`-th powers in the first `window` letters,
/// reported once per conjugacy class.
pub fn unbounded_exponent_scan(
    generator: &Generator,
    max_root_len: usize,
    exp: usize,
    window: usize,
) -> Result<Vec<Vec<Letter>>, ComplexityError> {
    if exp < 2 {
        return Err(ComplexityError::BadExponent(exp));
    }
    if window < exp * max_root_len {
        return Err(ComplexityError::WindowTooSmall { window, needed: exp * max_root_len });
    }
    let word = generator.letters(window);
    Ok(scan_powers(&word, max_root_len, exp).into_iter().collect())
}

/// Number of classes of primitive roots that survive the largest exponent of
/// the schedule; a finite-window stand-in for the number of periodic tails.
pub fn per_w_estimate(
    generator: &Generator,
    max_root_len: usize,
    exp_schedule: &[usize],
    window: usize,
) -> Result<usize, ComplexityError> {
    let exp = exp_schedule.iter().copied().max().ok_or(ComplexityError::BadExponent(0))?;
    for &e in exp_schedule {
        if e < 2 {
            return Err(ComplexityError::BadExponent(e));
        }
    }
    Ok(unbounded_exponent_scan(generator, max_root_len, exp, window)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Bundled, Dfao};

    fn periodic() -> Generator {
        let d = Dfao::parse("base: 2\nstate 0 output 0\n0 -> 0\n1 -> 1\nstate 1 output 1\n0 -> 0\n1 -> 1\n").unwrap();
        Generator::automatic("periodic-01", d)
    }

    #[test]
    fn brute_force_agrees_on_small_words() {
        let word: Vec<Letter> = "0010010010110".bytes().map(|b| b - b'0').collect();
        let found = scan_powers(&word, 4, 3);
        // (001)^3 at the start; its class has least rotation 001.
        assert_eq!(found, BTreeSet::from([vec![0, 0, 1]]));
        let found = scan_powers(&word, 4, 2);
        assert!(found.contains(&vec![0]));
        assert!(found.contains(&vec![0, 0, 1]));
        assert!(found.contains(&vec![0, 1]));
    }

    #[test]
    fn cantor_has_zero_runs() {
        let g = Bundled::Cantor.generator();
        let found = unbounded_exponent_scan(&g, 3, 4, 1 << 14).unwrap();
        assert!(found.contains(&vec![0]));
    }

    #[test]
    fn fibonacci_and_thue_morse_have_no_high_powers() {
        let fib = unbounded_exponent_scan(&Bundled::Fibonacci.generator(), 8, 4, 1 << 16).unwrap();
        assert!(fib.is_empty());
        let tm = unbounded_exponent_scan(&Bundled::ThueMorse.generator(), 8, 3, 1 << 16).unwrap();
        assert!(tm.is_empty());
    }

    #[test]
    fn per_w_examples() {
        assert_eq!(per_w_estimate(&Bundled::Cantor.generator(), 8, &[2, 4, 8], 1 << 14).unwrap(), 1);
        assert_eq!(per_w_estimate(&Bundled::ThueMorse.generator(), 8, &[3, 4], 1 << 14).unwrap(), 0);
        assert_eq!(per_w_estimate(&periodic(), 8, &[4, 16], 1 << 10).unwrap(), 1);
    }

    #[test]
    fn argument_errors() {
        let g = Bundled::ThueMorse.generator();
        assert!(matches!(unbounded_exponent_scan(&g, 8, 4, 16), Err(ComplexityError::WindowTooSmall { .. })));
        assert!(matches!(unbounded_exponent_scan(&g, 8, 1, 1024), Err(ComplexityError::BadExponent(1))));
        assert!(per_w_estimate(&g, 8, &[], 1024).is_err());
    }
}
