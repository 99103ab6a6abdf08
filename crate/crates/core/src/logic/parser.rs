//! Concrete syntax:
//!
//! ```text
//! formula  := iff
//! iff      := implies ("<=>" implies)*
//! implies  := or ("=>" implies)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "~" unary | ("A"|"E") var ("," var)* formula | primary
//! primary  := "(" formula ")" | name "(" term ("," term)* ")" | atom
//! atom     := operand ("="|"!="|"<"|"<="|">"|">=") operand
//! operand  := term | Seq "[" term "]" | "@" letter
//! term     := tatom (("+"|"-") tatom)*
//! tatom    := number | var | "(" term ")"
//! ```
//!
//! A quantifier body extends as far to the right as possible. Variables and
//! macro names start with a lowercase letter; sequence names start with an
//! uppercase letter and are always followed by `[`. `Au,v` and `A u, v` both
//! quantify `u` and `v`.

use std::collections::BTreeMap;

use super::ast::{Formula, Term};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Seq(String),
    Quant(char),
    Num(u64),
    Letter(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    And,
    Or,
    Not,
    Implies,
    Iff,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Define,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> LogicError {
    LogicError::Syntax { line, col, msg: msg.into() }
}

fn tokenize(text: &str, line0: usize) -> Result<Vec<Token>, LogicError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = line0 + li;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: line_no, col });
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '#' {
                break;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| syntax(line_no, col, format!("number `{s}` too large")))?;
                push(&mut out, Tok::Num(n));
                continue;
            }
            if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let mut j = i;
                while j < chars.len() && chars[j].is_whitespace() {
                    j += 1;
                }
                let indexed = j < chars.len() && chars[j] == '[';
                if c.is_ascii_uppercase() {
                    if indexed {
                        push(&mut out, Tok::Seq(word));
                    } else if c == 'A' || c == 'E' {
                        push(&mut out, Tok::Quant(c));
                        if word.len() > 1 {
                            out.push(Token { tok: Tok::Ident(word[1..].to_string()), line: line_no, col: col + 1 });
                        }
                    } else {
                        return Err(syntax(
                            line_no,
                            col,
                            format!("`{word}` is neither a quantifier nor an indexed sequence"),
                        ));
                    }
                } else {
                    push(&mut out, Tok::Ident(word));
                }
                continue;
            }
            if c == '@' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                if i == start {
                    return Err(syntax(line_no, col, "empty letter constant"));
                }
                push(&mut out, Tok::Letter(chars[start..i].iter().collect()));
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let (tok, len) = if rest.starts_with("<=>") {
                (Tok::Iff, 3)
            } else if rest.starts_with("=>") {
                (Tok::Implies, 2)
            } else if rest.starts_with(":=") {
                (Tok::Define, 2)
            } else if rest.starts_with("!=") {
                (Tok::Ne, 2)
            } else if rest.starts_with("<=") {
                (Tok::Le, 2)
            } else if rest.starts_with(">=") {
                (Tok::Ge, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ',' => Tok::Comma,
                    '&' => Tok::And,
                    '|' => Tok::Or,
                    '~' => Tok::Not,
                    '=' => Tok::Eq,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    _ => return Err(syntax(line_no, col, format!("unexpected character `{c}`"))),
                };
                (t, 1)
            };
            push(&mut out, tok);
            i += len;
        }
    }
    Ok(out)
}

/// A named formula with parameters; its body is already macro-expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Macro {
    pub params: Vec<String>,
    pub body: Formula,
}

pub type Definitions = BTreeMap<String, Macro>;

/// A formula file: `def name(params) := body` lines, then the main formula.
#[derive(Clone, Debug, Default)]
pub struct FormulaFile {
    pub order: Vec<String>,
    pub definitions: Definitions,
    pub main: Option<Formula>,
}

enum Operand {
    Term(Term),
    Seq(String, Term),
    Letter(String),
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    defs: &'a Definitions,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(text: &str, line0: usize, defs: &'a Definitions) -> Result<Self, LogicError> {
        let toks = tokenize(text, line0)?;
        let last_line = line0 + text.lines().count().saturating_sub(1);
        let end = (last_line, text.lines().last().map_or(0, |l| l.chars().count()) + 1);
        Ok(Parser { toks, pos: 0, defs, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn err(&self, msg: impl Into<String>) -> LogicError {
        let (l, c) = self.here();
        syntax(l, c, msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), LogicError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, LogicError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected a variable name")),
        }
    }

    fn finish(&self) -> Result<(), LogicError> {
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some(Tok::Quant(q)) = self.peek() {
            let q = *q;
            self.pos += 1;
            let mut vars = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                vars.push(self.ident()?);
            }
            let body = self.formula()?;
            return Ok(vars.into_iter().rev().fold(body, |b, v| {
                if q == 'A' {
                    Formula::Forall(v, Box::new(b))
                } else {
                    Formula::Exists(v, Box::new(b))
                }
            }));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, LogicError> {
        if let (Some(Tok::Ident(name)), Some(Tok::LParen)) = (self.peek(), self.peek_at(1)) {
            let name = name.clone();
            return self.call(&name);
        }
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            let atom_err = match self.atom() {
                Ok(f) => return Ok(f),
                Err(e) => e,
            };
            let atom_pos = self.pos;
            self.pos = save + 1;
            let inner = self.formula().and_then(|f| {
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            });
            return match inner {
                Ok(f) => Ok(f),
                Err(e) => Err(if atom_pos > self.pos { atom_err } else { e }),
            };
        }
        self.atom()
    }

    fn call(&mut self, name: &str) -> Result<Formula, LogicError> {
        let (line, col) = self.here();
        self.pos += 2;
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(&Tok::RParen, "`)` after arguments")?;
        let m = self.defs.get(name).ok_or_else(|| LogicError::UnknownMacro { name: name.to_string(), line, col })?;
        if m.params.len() != args.len() {
            return Err(LogicError::Arity { name: name.to_string(), expected: m.params.len(), found: args.len() });
        }
        let map: Vec<(String, Term)> = m.params.iter().cloned().zip(args).collect();
        Ok(m.body.substitute(&map))
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let mut lhs = self.tatom()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Term::Plus(Box::new(lhs), Box::new(self.tatom()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Term::Minus(Box::new(lhs), Box::new(self.tatom()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn tatom(&mut self) -> Result<Term, LogicError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Term::Const(n))
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn operand(&mut self) -> Result<Operand, LogicError> {
        match self.peek().cloned() {
            Some(Tok::Seq(s)) => {
                self.pos += 1;
                self.expect(&Tok::LBrack, "`[`")?;
                let t = self.term()?;
                self.expect(&Tok::RBrack, "`]`")?;
                Ok(Operand::Seq(s, t))
            }
            Some(Tok::Letter(c)) => {
                self.pos += 1;
                Ok(Operand::Letter(c))
            }
            _ => Ok(Operand::Term(self.term()?)),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.operand()?;
        let (line, col) = self.here();
        let rel = match self.peek() {
            Some(t @ (Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge)) => t.clone(),
            _ => return Err(self.err("expected a comparison")),
        };
        self.pos += 1;
        let rhs = self.operand()?;
        let bad = |msg: &str| syntax(line, col, msg);
        Ok(match (lhs, rhs) {
            (Operand::Term(a), Operand::Term(b)) => match rel {
                Tok::Eq => Formula::Eq(a, b),
                Tok::Ne => Formula::not(Formula::Eq(a, b)),
                Tok::Lt => Formula::Lt(a, b),
                Tok::Le => Formula::Leq(a, b),
                Tok::Gt => Formula::Lt(b, a),
                _ => Formula::Geq(a, b),
            },
            (Operand::Seq(w, a), Operand::Seq(v, b)) => match rel {
                Tok::Eq => Formula::SeqEq(w, a, v, b),
                Tok::Ne => Formula::not(Formula::SeqEq(w, a, v, b)),
                Tok::Lt => Formula::SeqLetterLt(w, a, v, b),
                Tok::Gt => Formula::SeqLetterLt(v, b, w, a),
                Tok::Le => Formula::not(Formula::SeqLetterLt(v, b, w, a)),
                _ => Formula::not(Formula::SeqLetterLt(w, a, v, b)),
            },
            (Operand::Seq(w, a), Operand::Letter(c)) | (Operand::Letter(c), Operand::Seq(w, a)) => match rel {
                Tok::Eq => Formula::SeqIs(w, a, c),
                Tok::Ne => Formula::not(Formula::SeqIs(w, a, c)),
                _ => return Err(bad("letter constants only support `=` and `!=`")),
            },
            _ => return Err(bad("cannot compare a number with a letter")),
        })
    }
}

/// Parse one formula, expanding calls to `defs`.
pub fn parse_with(text: &str, defs: &Definitions) -> Result<Formula, LogicError> {
    let mut p = Parser::new(text, 1, defs)?;
    if p.toks.is_empty() {
        return Err(p.err("empty formula"));
    }
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse(text: &str) -> Result<Formula, LogicError> {
    parse_with(text, &Definitions::new())
}

/// Every free variable of `f` must be one of `declared`.
pub fn validate(f: &Formula, declared: &[&str]) -> Result<(), LogicError> {
    match f.free_vars().into_iter().find(|v| !declared.contains(&v.as_str())) {
        Some(v) => Err(LogicError::UnboundVariable(v)),
        None => Ok(()),
    }
}

fn parse_definition(line: &str, line_no: usize, defs: &Definitions) -> Result<(String, Macro), LogicError> {
    let mut p = Parser::new(line, line_no, defs)?;
    match p.peek() {
        Some(Tok::Ident(kw)) if kw == "def" => p.pos += 1,
        _ => return Err(p.err("expected `def`")),
    }
    let name = p.ident()?;
    p.expect(&Tok::LParen, "`(`")?;
    let mut params = vec![p.ident()?];
    while p.eat(&Tok::Comma) {
        params.push(p.ident()?);
    }
    p.expect(&Tok::RParen, "`)`")?;
    p.expect(&Tok::Define, "`:=`")?;
    let body = p.formula()?;
    p.finish()?;
    for (i, x) in params.iter().enumerate() {
        if params[..i].contains(x) {
            return Err(syntax(line_no, 1, format!("parameter `{x}` repeated in `{name}`")));
        }
    }
    let declared: Vec<&str> = params.iter().map(String::as_str).collect();
    validate(&body, &declared)?;
    Ok((name, Macro { params, body }))
}

impl FormulaFile {
    /// Lines starting with `def` are definitions, usable by later lines; the
    /// remaining lines together form the main formula, if any.
    pub fn parse(text: &str) -> Result<FormulaFile, LogicError> {
        FormulaFile::parse_with(text, Definitions::new())
    }

    pub fn parse_with(text: &str, base: Definitions) -> Result<FormulaFile, LogicError> {
        let mut file = FormulaFile { definitions: base, ..FormulaFile::default() };
        let mut main = String::new();
        let mut main_line = None;
        for (i, line) in text.lines().enumerate() {
            let code = line.split('#').next().unwrap_or("");
            if code.trim().is_empty() {
                if main_line.is_some() {
                    main.push('\n');
                }
                continue;
            }
            if code.trim_start().starts_with("def ") {
                if main_line.is_some() {
                    return Err(syntax(i + 1, 1, "definitions must precede the main formula"));
                }
                let (name, m) = parse_definition(code, i + 1, &file.definitions)?;
                if file.definitions.insert(name.clone(), m).is_some() {
                    return Err(syntax(i + 1, 1, format!("`{name}` defined twice")));
                }
                file.order.push(name);
            } else {
                main_line.get_or_insert(i + 1);
                main.push_str(code);
                main.push('\n');
            }
        }
        if let Some(line0) = main_line {
            let mut p = Parser::new(&main, line0, &file.definitions)?;
            let f = p.formula()?;
            p.finish()?;
            file.main = Some(f);
        }
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    #[test]
    fn simple_atom() {
        assert_eq!(parse("x+0=x").unwrap(), Formula::Eq(plus(v("x"), Term::Const(0)), v("x")));
    }

    #[test]
    fn factoreq_body() {
        let f = parse("Au,v (i+v=j+u & u>=i & u<i+n) => W[u]=W[v]").unwrap();
        let guard = Formula::and(
            Formula::and(Formula::Eq(plus(v("i"), v("v")), plus(v("j"), v("u"))), Formula::Geq(v("u"), v("i"))),
            Formula::Lt(v("u"), plus(v("i"), v("n"))),
        );
        let body = Formula::implies(guard, Formula::SeqEq("W".into(), v("u"), "W".into(), v("v")));
        let expected = Formula::Forall("u".into(), Box::new(Formula::Forall("v".into(), Box::new(body))));
        assert_eq!(f, expected);
        assert_eq!(parse("A u, v (i+v=j+u & u>=i & u<i+n) => W[u]=W[v]").unwrap(), expected);
    }

    #[test]
    fn precedence() {
        let f = parse("x=0 | y=0 & z=0 => ~w=0").unwrap();
        let expected = Formula::implies(
            Formula::or(
                Formula::Eq(v("x"), Term::Const(0)),
                Formula::and(Formula::Eq(v("y"), Term::Const(0)), Formula::Eq(v("z"), Term::Const(0))),
            ),
            Formula::not(Formula::Eq(v("w"), Term::Const(0))),
        );
        assert_eq!(f, expected);
        // Implication is right associative.
        let f = parse("a=0 => b=0 => c=0").unwrap();
        assert!(matches!(f, Formula::Implies(_, ref r) if matches!(**r, Formula::Implies(..))));
    }

    #[test]
    fn parenthesized_terms_and_formulas() {
        assert_eq!(parse("(x+1)=y").unwrap(), Formula::Eq(plus(v("x"), Term::Const(1)), v("y")));
        assert_eq!(parse("(x=y)").unwrap(), Formula::Eq(v("x"), v("y")));
        assert_eq!(parse("((x=y))").unwrap(), Formula::Eq(v("x"), v("y")));
    }

    #[test]
    fn macro_calls_expand() {
        let file = FormulaFile::parse(
            "def shift(i,j,n,t) := i+t=j+n\ndef conj(i,j,n) := Et (t<=n) & shift(i,j,n,t)\nconj(a,b,c)\n",
        )
        .unwrap();
        let conj = &file.definitions["conj"];
        assert_eq!(conj.body, parse("Et (t<=n) & i+t=j+n").unwrap());
        assert_eq!(file.main.unwrap(), parse("Et (t<=c) & a+t=b+c").unwrap());
    }

    #[test]
    fn substitution_avoids_capture() {
        let file = FormulaFile::parse("def p(x) := Ey y=x+1\np(y)\n").unwrap();
        let main = file.main.unwrap();
        assert_eq!(main.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert_eq!(main, parse("Ey1 y1=y+1").unwrap());
        // Simultaneous substitution: swapping arguments.
        let file = FormulaFile::parse("def q(a,b) := a<b\nq(b,a)\n").unwrap();
        assert_eq!(file.main.unwrap(), parse("b<a").unwrap());
    }

    #[test]
    fn letters_and_sequences() {
        assert_eq!(
            parse("Ej W[j]=@1").unwrap(),
            Formula::Exists("j".into(), Box::new(Formula::SeqIs("W".into(), v("j"), "1".into())))
        );
        assert_eq!(parse("W[i] > W[j]").unwrap(), Formula::SeqLetterLt("W".into(), v("j"), "W".into(), v("i")));
        assert!(parse("W[i] < @1").is_err());
    }

    #[test]
    fn pretty_print_round_trip() {
        for text in [
            "Au,v (i+v=j+u & u>=i & u<i+n) => W[u]=W[v]",
            "Et (t<=n) & (x-(y+1))=3 | ~W[x]<W[y] <=> W[0]=@a",
            "Ex x>=2 & Ey y<x",
            "W[i]!=W[j]",
        ] {
            let f = parse(text).unwrap();
            let again = parse(&f.to_string()).unwrap();
            assert_eq!(again, f, "{text}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse("x = = y") {
            Err(LogicError::Syntax { line: 1, col: 5, .. }) => {}
            other => panic!("{other:?}"),
        }
        match FormulaFile::parse("def f(x) := x=0\n\nf(x) & (y <\n") {
            Err(LogicError::Syntax { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("Q=1"), Err(LogicError::Syntax { .. })));
        assert!(matches!(parse("g(x)"), Err(LogicError::UnknownMacro { .. })));
        assert!(matches!(
            FormulaFile::parse("def f(x) := x=y\n"),
            Err(LogicError::UnboundVariable(ref y)) if y == "y"
        ));
        assert!(matches!(FormulaFile::parse("def f(x) := x=0\nf(1,2)\n"), Err(LogicError::Arity { .. })));
        assert!(validate(&parse("x<y").unwrap(), &["x"]).is_err());
    }
}
