use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::{Formula, Term};
use super::LogicError;
use crate::automata::{
    accept_all, linear_predicate, seq_compare_predicate, seq_letter_predicate, AutomataError, BoolOp, LinearRel,
    MultiTrackDfa, SeqCmp,
};
use crate::word::Dfao;

pub const DEFAULT_CAP: usize = 1_000_000;

/// Sequences available to formulas, all in one base.
#[derive(Clone, Debug)]
pub struct Env {
    base: u32,
    sequences: BTreeMap<String, Dfao>,
    pub cap: usize,
}

impl Env {
    pub fn new(base: u32) -> Env {
        Env { base, sequences: BTreeMap::new(), cap: DEFAULT_CAP }
    }

    /// An environment binding `W` to `d`.
    pub fn single(d: &Dfao) -> Env {
        Env::new(d.base()).with_sequence("W", d.clone()).expect("same base")
    }

    pub fn with_sequence(mut self, name: &str, d: Dfao) -> Result<Env, LogicError> {
        if d.base() != self.base {
            return Err(AutomataError::BaseMismatch(self.base, d.base()).into());
        }
        self.sequences.insert(name.to_string(), d);
        Ok(self)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    fn sequence(&self, name: &str) -> Result<&Dfao, LogicError> {
        self.sequences.get(name).ok_or_else(|| LogicError::UnboundSequence(name.to_string()))
    }
}

/// `sum coeffs[x] x + c0`, valid where every guard holds.
#[derive(Default)]
struct Linear {
    coeffs: BTreeMap<String, i64>,
    c0: i64,
    guards: Vec<Formula>,
}

fn linearize(t: &Term, sign: i64, out: &mut Linear) {
    match t {
        Term::Var(v) => *out.coeffs.entry(v.clone()).or_default() += sign,
        Term::Const(c) => out.c0 += sign * *c as i64,
        Term::Plus(a, b) => {
            linearize(a, sign, out);
            linearize(b, sign, out);
        }
        Term::Minus(a, b) => {
            // a - b over the integers, plus the side condition b <= a that
            // makes it agree with natural subtraction.
            out.guards.push(Formula::Leq((**b).clone(), (**a).clone()));
            linearize(a, sign, out);
            linearize(b, -sign, out);
        }
    }
}

/// Flatten a formula into conjuncts, pushing negations through `|`, `=>`,
/// `~` and `A`.
fn conjuncts(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        Formula::Not(inner) => match &**inner {
            Formula::Not(g) => conjuncts(g, out),
            Formula::Or(a, b) => {
                conjuncts(&Formula::not((**a).clone()), out);
                conjuncts(&Formula::not((**b).clone()), out);
            }
            Formula::Implies(a, b) => {
                conjuncts(a, out);
                conjuncts(&Formula::not((**b).clone()), out);
            }
            Formula::Forall(x, body) => out.push(Formula::Exists(x.clone(), Box::new(Formula::not((**body).clone())))),
            _ => out.push(f.clone()),
        },
        _ => out.push(f.clone()),
    }
}

/// Compiles formulas against one environment, reusing results for repeated
/// subformulas.
pub struct Compiler<'a> {
    env: &'a Env,
    memo: HashMap<Formula, MultiTrackDfa>,
    fresh: usize,
    /// Largest automaton produced so far.
    pub peak_states: usize,
}

impl<'a> Compiler<'a> {
    pub fn new(env: &'a Env) -> Self {
        Compiler { env, memo: HashMap::new(), fresh: 0, peak_states: 0 }
    }

    fn blowup(&self, e: AutomataError) -> LogicError {
        match e {
            AutomataError::StateCapExceeded { cap } => LogicError::CompileBlowup { cap },
            other => other.into(),
        }
    }

    fn note(&mut self, a: MultiTrackDfa) -> Result<MultiTrackDfa, LogicError> {
        self.peak_states = self.peak_states.max(a.num_states());
        if a.num_states() > self.env.cap {
            return Err(LogicError::CompileBlowup { cap: self.env.cap });
        }
        Ok(a)
    }

    fn combine(&mut self, a: &MultiTrackDfa, b: &MultiTrackDfa, op: BoolOp) -> Result<MultiTrackDfa, LogicError> {
        let r = a.combine_capped(b, op, self.env.cap).map_err(|e| self.blowup(e))?;
        self.note(r)
    }

    fn project(&mut self, a: &MultiTrackDfa, x: &str) -> Result<MultiTrackDfa, LogicError> {
        if !a.tracks().iter().any(|t| t == x) {
            return Ok(a.clone());
        }
        let r = a.project_capped(x, self.env.cap).map_err(|e| self.blowup(e))?;
        self.note(r)
    }

    /// Conjunction, combining the smallest operands first.
    fn conjoin(&mut self, mut parts: Vec<MultiTrackDfa>) -> Result<MultiTrackDfa, LogicError> {
        if parts.is_empty() {
            return Ok(accept_all(self.env.base, &[]));
        }
        while parts.len() > 1 {
            parts.sort_by_key(|a| std::cmp::Reverse(a.num_states()));
            let a = parts.pop().expect("nonempty");
            let b = parts.pop().expect("nonempty");
            let c = self.combine(&a, &b, BoolOp::And)?;
            if c.is_empty() {
                let tracks: BTreeSet<String> =
                    parts.iter().flat_map(|p| p.tracks().iter().cloned()).chain(c.tracks().iter().cloned()).collect();
                let names: Vec<&str> = tracks.iter().map(String::as_str).collect();
                return Ok(crate::automata::empty(self.env.base, &names));
            }
            parts.push(c);
        }
        Ok(parts.pop().expect("nonempty"))
    }

    /// The automaton over the free variables of `f` accepting its models.
    pub fn compile(&mut self, f: &Formula) -> Result<MultiTrackDfa, LogicError> {
        if let Some(a) = self.memo.get(f) {
            return Ok(a.clone());
        }
        let a = self.compile_uncached(f)?;
        let free: Vec<String> = f.free_vars().into_iter().collect();
        let a = if a.tracks() == free.as_slice() { a } else { a.cylindrify(&free)? };
        self.memo.insert(f.clone(), a.clone());
        Ok(a)
    }

    fn compile_uncached(&mut self, f: &Formula) -> Result<MultiTrackDfa, LogicError> {
        match f {
            Formula::Forall(x, body) => {
                let inner = self.exists(x, &Formula::not((**body).clone()))?;
                Ok(inner.complement())
            }
            Formula::Exists(x, body) => self.exists(x, body),
            Formula::And(..) => {
                let mut parts = Vec::new();
                conjuncts(f, &mut parts);
                let compiled = parts.iter().map(|p| self.compile(p)).collect::<Result<Vec<_>, _>>()?;
                self.conjoin(compiled)
            }
            Formula::Or(a, b) => self.binary(a, b, BoolOp::Or),
            Formula::Implies(a, b) => self.binary(a, b, BoolOp::Implies),
            Formula::Iff(a, b) => self.binary(a, b, BoolOp::Iff),
            Formula::Not(a) => {
                let mut parts = Vec::new();
                conjuncts(f, &mut parts);
                if parts.len() > 1 || parts[0] != *f {
                    let compiled = parts.iter().map(|p| self.compile(p)).collect::<Result<Vec<_>, _>>()?;
                    return self.conjoin(compiled);
                }
                Ok(self.compile(a)?.complement())
            }
            Formula::Eq(a, b) => self.linear(a, b, 0, LinearRel::Eq),
            Formula::Lt(a, b) => self.linear(a, b, 0, LinearRel::Lt),
            // a <= b  iff  a - b - 1 < 0
            Formula::Leq(a, b) => self.linear(a, b, -1, LinearRel::Lt),
            Formula::Geq(a, b) => self.linear(b, a, -1, LinearRel::Lt),
            Formula::SeqEq(w, a, v, b) => self.seq_pair(w, a, v, b, SeqCmp::Eq),
            Formula::SeqLetterLt(w, a, v, b) => self.seq_pair(w, a, v, b, SeqCmp::Lt),
            Formula::SeqIs(w, a, c) => {
                let d = self.env.sequence(w)?.clone();
                let (x, side) = self.index_var(a)?;
                let atom = seq_letter_predicate(&d, &x, c).map_err(|e| match e {
                    AutomataError::UnknownLetter(l) => LogicError::UnknownLetter { sequence: w.clone(), letter: l },
                    other => other.into(),
                })?;
                self.close_indices(atom, side)
            }
        }
    }

    fn binary(&mut self, a: &Formula, b: &Formula, op: BoolOp) -> Result<MultiTrackDfa, LogicError> {
        let x = self.compile(a)?;
        let y = self.compile(b)?;
        self.combine(&x, &y, op)
    }

    /// `E x body`, quantifying only over the conjuncts that mention `x`.
    fn exists(&mut self, x: &str, body: &Formula) -> Result<MultiTrackDfa, LogicError> {
        let mut parts = Vec::new();
        conjuncts(body, &mut parts);
        let (with, without): (Vec<Formula>, Vec<Formula>) = parts.into_iter().partition(|p| p.free_vars().contains(x));
        let inner = with.iter().map(|p| self.compile(p)).collect::<Result<Vec<_>, _>>()?;
        let inner = self.conjoin(inner)?;
        let projected = self.project(&inner, x)?;
        let mut rest = without.iter().map(|p| self.compile(p)).collect::<Result<Vec<_>, _>>()?;
        rest.push(projected);
        self.conjoin(rest)
    }

    /// `lhs - rhs + c0 (rel) 0`, with subtraction guards conjoined.
    fn linear(&mut self, lhs: &Term, rhs: &Term, c0: i64, rel: LinearRel) -> Result<MultiTrackDfa, LogicError> {
        let mut lin = Linear::default();
        linearize(lhs, 1, &mut lin);
        linearize(rhs, -1, &mut lin);
        let terms: Vec<(&str, i64)> = lin.coeffs.iter().map(|(v, &c)| (v.as_str(), c)).collect();
        let atom = linear_predicate(self.env.base, &terms, lin.c0 + c0, rel);
        let mut parts = vec![atom];
        for g in &lin.guards {
            parts.push(self.compile(g)?);
        }
        self.conjoin(parts)
    }

    /// A variable standing for the index term, plus the constraint tying a
    /// fresh variable to a compound term.
    fn index_var(&mut self, t: &Term) -> Result<(String, Option<(String, MultiTrackDfa)>), LogicError> {
        if let Term::Var(v) = t {
            return Ok((v.clone(), None));
        }
        let z = format!("_z{}", self.fresh);
        self.fresh += 1;
        let tie = self.linear(&Term::Var(z.clone()), t, 0, LinearRel::Eq)?;
        Ok((z.clone(), Some((z, tie))))
    }

    fn close_indices(
        &mut self,
        mut atom: MultiTrackDfa,
        sides: impl IntoIterator<Item = (String, MultiTrackDfa)>,
    ) -> Result<MultiTrackDfa, LogicError> {
        for (z, tie) in sides {
            let joined = self.combine(&atom, &tie, BoolOp::And)?;
            atom = self.project(&joined, &z)?;
        }
        Ok(atom)
    }

    fn seq_pair(&mut self, w: &str, a: &Term, v: &str, b: &Term, cmp: SeqCmp) -> Result<MultiTrackDfa, LogicError> {
        let dw = self.env.sequence(w)?.clone();
        let dv = self.env.sequence(v)?.clone();
        let (x, sx) = self.index_var(a)?;
        let (y, sy) = self.index_var(b)?;
        let atom = seq_compare_predicate(&dw, &x, &dv, &y, cmp)?;
        self.close_indices(atom, sx.into_iter().chain(sy))
    }
}

/// Compile with a fresh compiler.
pub fn compile(f: &Formula, env: &Env) -> Result<MultiTrackDfa, LogicError> {
    Compiler::new(env).compile(f)
}

/// Accepted assignments of the tracks not fixed, each below `bound`, in
/// lexicographic order of the remaining tracks.
pub fn accepted_values(
    a: &MultiTrackDfa,
    fixed: &[(&str, u64)],
    bound: u64,
) -> Result<Vec<Vec<(String, u64)>>, LogicError> {
    let mut r = a.clone();
    for &(name, value) in fixed {
        let pin = crate::automata::const_predicate(name, value, a.base());
        r = r.and(&pin)?.project(name)?;
    }
    Ok(r.accepted_values(bound).into_iter().map(|vals| r.tracks().iter().cloned().zip(vals).collect()).collect())
}
