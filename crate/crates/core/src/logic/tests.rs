use super::*;
use crate::automata::{add_predicate, lt_predicate};
use crate::complexity::{full_classes, lie_complexity, FactorSet};
use crate::word::{Bundled, Dfao};

fn tm() -> Dfao {
    Bundled::ThueMorse.dfao().unwrap()
}

fn first_occurrences(word: &[u8], n: usize) -> Vec<u64> {
    // Start of the first occurrence of each lex-least full class.
    let fs = FactorSet::from_letters(word, n, true).unwrap();
    let mut out: Vec<u64> = full_classes(&fs)
        .iter()
        .map(|v| (0..=word.len() - n).find(|&i| word[i..i + n] == v[..]).unwrap() as u64)
        .collect();
    out.sort_unstable();
    out
}

#[test]
fn trivial_formulas() {
    let env = Env::single(&tm());
    let a = compile(&parse("x+0=x").unwrap(), &env).unwrap();
    assert_eq!(a.tracks(), ["x"]);
    assert!(a.is_universal());
    let a = compile(&parse("Ej W[j]=@1").unwrap(), &env).unwrap();
    assert!(a.tracks().is_empty());
    assert!(a.is_universal());
    let a = compile(&parse("Ej W[j]=@1 & W[j+1]=@1 & W[j+2]=@1").unwrap(), &env).unwrap();
    assert!(a.is_empty());
}

#[test]
fn arithmetic_atoms_match_predicates() {
    let env = Env::new(2);
    let a = compile(&parse("x+y=z").unwrap(), &env).unwrap();
    assert!(a.equivalent(&add_predicate("x", "y", "z", 2)));
    let b = compile(&parse("y>x").unwrap(), &env).unwrap();
    assert!(b.equivalent(&lt_predicate("x", "y", 2)));
    let c = compile(&parse("(x-1)+1=x").unwrap(), &env).unwrap();
    // Holds exactly where the subtraction is defined.
    assert_eq!(c.accepted_values(10), (1..10).map(|x| vec![x]).collect::<Vec<_>>());
    let d = compile(&parse("Ez x=z+z").unwrap(), &env).unwrap();
    for x in 0..50u64 {
        assert_eq!(d.accepts(&[x]), x % 2 == 0);
    }
}

#[test]
fn forall_is_not_exists_not() {
    let env = Env::single(&tm());
    for body in ["x<y | W[x]=W[y]", "x+y=z => W[z]=@0", "x<=y & W[x]<W[y]"] {
        let vars: Vec<&str> = vec!["x", "y"];
        for v in vars {
            let direct = compile(&parse(&format!("A{v} {body}")).unwrap(), &env).unwrap();
            let via = compile(&parse(&format!("~E{v} ~({body})")).unwrap(), &env).unwrap();
            assert!(direct.equivalent(&via), "{v} {body}");
        }
    }
}

#[test]
fn unbound_sequence_and_letter() {
    let env = Env::single(&tm());
    assert!(matches!(compile(&parse("V[x]=@0").unwrap(), &env), Err(LogicError::UnboundSequence(_))));
    assert!(matches!(compile(&parse("W[x]=@7").unwrap(), &env), Err(LogicError::UnknownLetter { .. })));
}

#[test]
fn blowup_cap() {
    let mut env = Env::single(&tm());
    env.cap = 2;
    assert!(matches!(
        compile(&parse("Au,v (i+v=j+u & u>=i & u<i+n) => W[u]=W[v]").unwrap(), &env),
        Err(LogicError::CompileBlowup { cap: 2 })
    ));
}

#[test]
fn thue_morse_library() {
    let d = tm();
    let lib = build_predicate_library(&d).unwrap();
    let word = d.prefix(1 << 12);
    assert!(lib.holds("factoreq", &[("i", 0), ("j", 3), ("n", 2)]).unwrap());
    assert!(!lib.holds("factoreq", &[("i", 0), ("j", 1), ("n", 2)]).unwrap());
    let lie = lib.lie();
    assert_eq!(lie.tracks(), ["i", "n"]);
    let at2: Vec<u64> = accepted_values(lie, &[("n", 2)], 64).unwrap().iter().map(|a| a[0].1).collect();
    assert_eq!(at2, vec![0, 1, 5]);
    assert_eq!(accepted_values(lie, &[("n", 0)], 64).unwrap().len(), 1);
    assert!(accepted_values(lib.get("allconj").unwrap(), &[("n", 5)], 1 << 10).unwrap().is_empty());
    for n in 0..=20usize {
        let got: Vec<u64> = accepted_values(lie, &[("n", n as u64)], 1 << 10).unwrap().iter().map(|a| a[0].1).collect();
        assert_eq!(got, first_occurrences(&word, n), "n={n}");
        let fs = FactorSet::from_letters(&word, n, true).unwrap();
        assert_eq!(got.len(), lie_complexity(&fs));
    }
    let lt = lib.get("lessthan").unwrap();
    let fe = lib.get("factoreq").unwrap();
    let le = lib.get("lessthaneq").unwrap();
    assert!(lt.and(fe).unwrap().is_empty());
    assert!(lt.or(fe).unwrap().equivalent(le));
    // conj is symmetric and reflexive on occurrences.
    let conj = lib.get("conj").unwrap();
    let swapped = conj.rename(&[("i", "j"), ("j", "i")]).unwrap();
    assert!(swapped.equivalent(conj));
    let refl = compile(&parse_with("Ai,n conj(i,i,n)", &lib.file.definitions).unwrap(), &Env::single(&d)).unwrap();
    assert!(refl.is_universal());
}

#[test]
fn other_bundled_sequences() {
    for b in [Bundled::Vtm, Bundled::Cantor] {
        let d = b.dfao().unwrap();
        let lib = build_predicate_library(&d).unwrap();
        let word = d.prefix(1 << 14);
        for n in 0..=12usize {
            let got: Vec<u64> =
                accepted_values(lib.lie(), &[("n", n as u64)], 1 << 12).unwrap().iter().map(|a| a[0].1).collect();
            assert_eq!(got, first_occurrences(&word, n), "{b} n={n}");
        }
    }
}
