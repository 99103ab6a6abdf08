use std::sync::OnceLock;

use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::automata::{accept_all, const_predicate, empty, lt_predicate, MultiTrackDfa};
use crate::linalg::q;
use crate::logic::{build_predicate_library, compile_definitions, Env, PredicateLibrary, LIE_FOL};
use crate::word::{Bundled, Dfao};

fn tm_library() -> &'static PredicateLibrary {
    static LIB: OnceLock<PredicateLibrary> = OnceLock::new();
    LIB.get_or_init(|| build_predicate_library(&Bundled::ThueMorse.dfao().unwrap()).unwrap())
}

/// Lie complexity of Thue-Morse in closed form.
fn tm_lie(n: u64) -> u64 {
    match n {
        0 => 1,
        1 | 4 => 2,
        2 => 3,
        _ if n.is_power_of_two() && n >= 8 => 1,
        _ if n.is_multiple_of(3) && (n / 3).is_power_of_two() => 2,
        _ => 0,
    }
}

#[test]
fn direct_counts_thue_morse() {
    let lie = tm_library().lie();
    assert_eq!(count_direct(lie, 2).unwrap(), 3);
    assert_eq!(count_direct(lie, 16).unwrap(), 1);
    assert_eq!(count_direct(lie, 5).unwrap(), 0);
    for n in 0..=300 {
        assert_eq!(count_direct(lie, n).unwrap(), u128::from(tm_lie(n)), "n={n}");
    }
}

#[test]
fn representation_matches_direct() {
    let lie = tm_library().lie();
    let r = counting_representation(lie).unwrap();
    assert!(r.is_nonnegative_integral());
    assert_eq!(r.eval(12), q(2));
    assert_eq!(r.eval(4), q(2));
    assert_eq!(r.eval(64), q(1));
    let m = r.minimize();
    assert!(m.dim() <= r.dim());
    for n in 0..=1000 {
        let d = Q::from_integer(count_direct(lie, n).unwrap().into());
        assert_eq!(r.eval(n), d, "n={n}");
        assert_eq!(m.eval(n), d, "n={n}");
    }
    assert_eq!(m.minimize().dim(), m.dim());
}

/// `lie` together with its first-occurrence-restricted companions.
fn counting_predicates(d: &Dfao) -> Vec<(String, MultiTrackDfa)> {
    let text = LIE_FOL.replace("\nlie(i,n)\n", "\n")
        + "def firstocc(i,n) := Aj factoreq(i,j,n) => j>=i\n"
        + "def leastfirst(i,n) := lexleast(i,n) & firstocc(i,n)\n"
        + "def allfirst(i,n) := allconj(i,n) & firstocc(i,n)\n";
    let lib = compile_definitions(&text, &Env::single(d)).unwrap();
    ["lie", "firstocc", "leastfirst", "allfirst"]
        .iter()
        .map(|&name| (name.to_string(), lib.get(name).unwrap().clone()))
        .collect()
}

#[test]
fn every_counting_predicate_agrees() {
    for b in [Bundled::ThueMorse, Bundled::Vtm] {
        for (name, a) in counting_predicates(&b.dfao().unwrap()) {
            let r = counting_representation(&a).unwrap();
            assert!(r.is_nonnegative_integral());
            let m = r.minimize();
            for n in 0..=1000 {
                let d = Q::from_integer(count_direct(&a, n).unwrap().into());
                assert_eq!(r.eval(n), d, "{b:?} {name} n={n}");
                assert_eq!(m.eval(n), d, "{b:?} {name} n={n}");
            }
        }
    }
    // Without the first-occurrence clause the count is infinite.
    let lexleast = tm_library().get("lexleast").unwrap();
    assert_eq!(count_direct(lexleast, 3), Err(CountingError::InfiniteCount { n: 3 }));
    assert!(matches!(counting_representation(lexleast), Err(CountingError::NoConvergence { .. })));
}

#[test]
fn thue_morse_dfao() {
    let r = counting_representation(tm_library().lie()).unwrap().minimize();
    let d = to_dfao(&r, DEFAULT_DFAO_CAP).unwrap();
    for n in 0..=4096 {
        assert_eq!(eval_dfao(&d, n), tm_lie(n), "n={n}");
    }
    assert_eq!(eval_dfao(&d, 3), 2);
    assert_eq!(sup_value(&d), 3);
}

#[test]
fn cantor_sup() {
    let lib = build_predicate_library(&Bundled::Cantor.dfao().unwrap()).unwrap();
    let r = counting_representation(lib.lie()).unwrap().minimize();
    let d = to_dfao(&r, DEFAULT_DFAO_CAP).unwrap();
    assert_eq!(eval_dfao(&d, 4), 3);
    assert_eq!(sup_value(&d), 3);
}

#[test]
fn trivial_and_empty() {
    // Only i = 0, any n.
    let zero = const_predicate("i", 0, 2).and(&accept_all(2, &["n"])).unwrap();
    let r = counting_representation(&zero).unwrap();
    let none = counting_representation(&empty(2, &["i", "n"])).unwrap();
    for n in 0..100 {
        assert_eq!(r.eval(n), q(1));
        assert_eq!(count_direct(&zero, n).unwrap(), 1);
        assert_eq!(none.eval(n), q(0));
    }
    // i < n: a(n) = n, unbounded.
    let lt = lt_predicate("i", "n", 3);
    let r = counting_representation(&lt).unwrap().minimize();
    for n in 0..200 {
        assert_eq!(r.eval(n), Q::from_integer(n.into()));
    }
    assert_eq!(to_dfao(&r, 50), Err(CountingError::StateCapExceeded { cap: 50 }));
}

#[test]
fn infinite_counts_fail_loudly() {
    let all = accept_all(2, &["i", "n"]);
    assert_eq!(count_direct(&all, 3), Err(CountingError::InfiniteCount { n: 3 }));
    assert_eq!(counting_representation(&all), Err(CountingError::NoConvergence { cap: DEFAULT_ITERATION_CAP }));
    let bad = accept_all(2, &["i", "j"]);
    assert!(matches!(count_direct(&bad, 0), Err(CountingError::BadTracks(_))));
}

#[test]
fn renaming_for_counting() {
    // #{x : x < y} = y, with the tracks called x and y.
    let lt = lt_predicate("x", "y", 2);
    let a = as_pair(&lt, "x", "y").unwrap();
    assert_eq!(a.tracks(), ["i", "n"]);
    assert_eq!(count_direct(&a, 9).unwrap(), 9);
    // Index track sorted first.
    let gt = lt_predicate("n", "a", 2);
    assert_eq!(count_direct(&gt, 5), Err(CountingError::InfiniteCount { n: 5 }));
    assert_eq!(count_direct(&lt_predicate("a", "n", 2), 5).unwrap(), 5);
    let a = as_pair(&lt_predicate("b", "a", 2), "b", "a").unwrap();
    assert_eq!(count_direct(&a, 5).unwrap(), 5);
}

#[test]
fn constant_sequence() {
    let r = LinearRepresentation { base: 2, v: vec![q(1)], zeta: vec![vec![vec![q(1)]]; 2], w: vec![q(1)] };
    let d = to_dfao(&r, 10).unwrap();
    assert_eq!(d.num_states(), 1);
    assert_eq!(sup_value(&d), 1);
    let half = LinearRepresentation { w: vec![Q::new(1.into(), 2.into())], ..r };
    assert!(matches!(to_dfao(&half, 10), Err(CountingError::NonIntegerOutput(_))));
}

#[test]
fn padding_a_representation_then_minimizing() {
    let r = counting_representation(tm_library().lie()).unwrap().minimize();
    let dim = r.dim();
    let mut padded = r.clone();
    padded.v.push(Q::zero());
    padded.w.push(Q::one());
    for m in padded.zeta.iter_mut() {
        for row in m.iter_mut() {
            row.push(Q::zero());
        }
        m.push(vec![Q::zero(); dim + 1]);
    }
    assert_eq!(padded.minimize().dim(), dim);
}

#[test]
fn text_round_trip() {
    let r = counting_representation(tm_library().lie()).unwrap().minimize();
    let text = r.to_string();
    assert_eq!(LinearRepresentation::parse(&text).unwrap(), r);
    assert!(LinearRepresentation::parse("base: 2\ndim: 1\nv: 1\n").is_err());
    let frac = "base: 2\ndim: 1\nv: 1/2\nzeta 0:\n1\nzeta 1:\n-3/4\nw: 2\n";
    let r = LinearRepresentation::parse(frac).unwrap();
    assert_eq!(r.eval(1), Q::new((-3).into(), 4.into()));
    assert_eq!(LinearRepresentation::parse(&r.to_string()).unwrap(), r);
}

fn small_pair() -> impl Strategy<Value = MultiTrackDfa> {
    // Random linear constraints with a bounded counted variable.
    (-3i64..=3, 1i64..=3, -4i64..=4, any::<bool>(), 2u32..=3).prop_map(|(a, b, c, eq, k)| {
        let rel = if eq { crate::automata::LinearRel::Eq } else { crate::automata::LinearRel::Lt };
        let base = crate::automata::linear_predicate(k, &[("n", a), ("i", b)], c, rel);
        base.and(&lt_predicate("i", "n", k).or(&const_predicate("i", 0, k)).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn eval_agrees_with_direct(a in small_pair()) {
        let r = counting_representation(&a).unwrap();
        prop_assert!(r.is_nonnegative_integral());
        let m = r.minimize();
        for n in 0..120u64 {
            let d = Q::from_integer(count_direct(&a, n).unwrap().into());
            prop_assert_eq!(&r.eval(n), &d);
            prop_assert_eq!(&m.eval(n), &d);
        }
    }
}
