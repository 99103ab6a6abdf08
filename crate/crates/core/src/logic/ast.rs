use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(u64),
    Plus(Box<Term>, Box<Term>),
    /// Natural subtraction; only meaningful where the right side is at most the left.
    Minus(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Eq(Term, Term),
    Lt(Term, Term),
    Leq(Term, Term),
    Geq(Term, Term),
    /// `S[t] = T[u]`
    SeqEq(String, Term, String, Term),
    /// `S[t] < T[u]` in the declared letter order.
    SeqLetterLt(String, Term, String, Term),
    /// `S[t] = @c`
    SeqIs(String, Term, String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Plus(a, b) | Term::Minus(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    fn substitute(&self, var: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => by.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Plus(a, b) => Term::Plus(Box::new(a.substitute(var, by)), Box::new(b.substitute(var, by))),
            Term::Minus(a, b) => Term::Minus(Box::new(a.substitute(var, by)), Box::new(b.substitute(var, by))),
        }
    }
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let mut inner = body.free_vars();
                inner.remove(x);
                out.extend(inner);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Not(a) => a.collect_free(out),
            Formula::Eq(s, t) | Formula::Lt(s, t) | Formula::Leq(s, t) | Formula::Geq(s, t) => {
                s.vars(out);
                t.vars(out);
            }
            Formula::SeqEq(_, s, _, t) | Formula::SeqLetterLt(_, s, _, t) => {
                s.vars(out);
                t.vars(out);
            }
            Formula::SeqIs(_, t, _) => t.vars(out),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                out.insert(x.clone());
                body.all_vars(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::Not(a) => a.all_vars(out),
            _ => self.collect_free(out),
        }
    }

    pub fn sequences(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Forall(_, a) | Formula::Exists(_, a) | Formula::Not(a) => a.sequences(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.sequences(out);
                b.sequences(out);
            }
            Formula::SeqEq(s, _, t, _) | Formula::SeqLetterLt(s, _, t, _) => {
                out.insert(s.clone());
                out.insert(t.clone());
            }
            Formula::SeqIs(s, _, _) => {
                out.insert(s.clone());
            }
            _ => {}
        }
    }

    /// Simultaneous capture-avoiding substitution of terms for free variables.
    pub fn substitute(&self, map: &[(String, Term)]) -> Formula {
        let mut avoid = BTreeSet::new();
        for (_, t) in map {
            t.vars(&mut avoid);
        }
        // Rename in two steps through placeholders so the substitution is simultaneous.
        let mut f = self.clone();
        self.all_vars(&mut avoid);
        let mut placeholders = Vec::new();
        for (i, (v, _)) in map.iter().enumerate() {
            let p = fresh(&format!("{v}_s{i}"), &avoid);
            avoid.insert(p.clone());
            f = f.subst_one(v, &Term::Var(p.clone()), &avoid);
            placeholders.push(p);
        }
        for (p, (_, t)) in placeholders.iter().zip(map) {
            f = f.subst_one(p, t, &avoid);
        }
        f
    }

    fn subst_one(&self, var: &str, by: &Term, avoid: &BTreeSet<String>) -> Formula {
        let s = |t: &Term| t.substitute(var, by);
        match self {
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                if x == var || !body.free_vars().contains(var) {
                    return self.clone();
                }
                let mut by_vars = BTreeSet::new();
                by.vars(&mut by_vars);
                let (x2, body2) = if by_vars.contains(x) {
                    let mut avoid2 = avoid.clone();
                    avoid2.extend(by_vars);
                    body.all_vars(&mut avoid2);
                    let y = fresh(x, &avoid2);
                    (y.clone(), body.subst_one(x, &Term::Var(y), &avoid2))
                } else {
                    (x.clone(), (**body).clone())
                };
                let inner = Box::new(body2.subst_one(var, by, avoid));
                match self {
                    Formula::Forall(..) => Formula::Forall(x2, inner),
                    _ => Formula::Exists(x2, inner),
                }
            }
            Formula::And(a, b) => {
                Formula::And(Box::new(a.subst_one(var, by, avoid)), Box::new(b.subst_one(var, by, avoid)))
            }
            Formula::Or(a, b) => {
                Formula::Or(Box::new(a.subst_one(var, by, avoid)), Box::new(b.subst_one(var, by, avoid)))
            }
            Formula::Implies(a, b) => {
                Formula::Implies(Box::new(a.subst_one(var, by, avoid)), Box::new(b.subst_one(var, by, avoid)))
            }
            Formula::Iff(a, b) => {
                Formula::Iff(Box::new(a.subst_one(var, by, avoid)), Box::new(b.subst_one(var, by, avoid)))
            }
            Formula::Not(a) => Formula::Not(Box::new(a.subst_one(var, by, avoid))),
            Formula::Eq(a, b) => Formula::Eq(s(a), s(b)),
            Formula::Lt(a, b) => Formula::Lt(s(a), s(b)),
            Formula::Leq(a, b) => Formula::Leq(s(a), s(b)),
            Formula::Geq(a, b) => Formula::Geq(s(a), s(b)),
            Formula::SeqEq(w, a, v, b) => Formula::SeqEq(w.clone(), s(a), v.clone(), s(b)),
            Formula::SeqLetterLt(w, a, v, b) => Formula::SeqLetterLt(w.clone(), s(a), v.clone(), s(b)),
            Formula::SeqIs(w, a, c) => Formula::SeqIs(w.clone(), s(a), c.clone()),
        }
    }
}

/// `base`, or `base` with a numeric suffix, avoiding `taken`.
pub(crate) fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|c| !taken.contains(c)).expect("unbounded")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Plus(a, b) => write!(f, "({a}+{b})"),
            Term::Minus(a, b) => write!(f, "({a}-{b})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Forall(x, body) => write!(f, "(A{x} {body})"),
            Formula::Exists(x, body) => write!(f, "(E{x} {body})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <=> {b})"),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Lt(a, b) => write!(f, "{a}<{b}"),
            Formula::Leq(a, b) => write!(f, "{a}<={b}"),
            Formula::Geq(a, b) => write!(f, "{a}>={b}"),
            Formula::SeqEq(w, a, v, b) => write!(f, "{w}[{a}]={v}[{b}]"),
            Formula::SeqLetterLt(w, a, v, b) => write!(f, "{w}[{a}]<{v}[{b}]"),
            Formula::SeqIs(w, a, c) => write!(f, "{w}[{a}]=@{c}"),
        }
    }
}
