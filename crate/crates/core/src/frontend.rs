//! Surface syntax: lexer, parser, printer and the theorem-file format.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::axioms::{AxKind, AxiomId};
use crate::proof::{Erased, PVar, Proof};
use crate::syntax::sugar::{exists_unique, iff, match_exists_unique, match_numeral, match_succ, numeral, succ};
use crate::syntax::{Formula, NwfConst, Schema, Term, Var};
use crate::typing::Mode;

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Semi,
    Bar,
    FatArrow,
    Arrow,
    Iff,
    AndOp,
    OrOp,
    Tilde,
    Equals,
    At,
    Assign,
    Lt,
    Gt,
    Bang,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Bar => "|",
            Tok::FatArrow => "=>",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::AndOp => "/\\",
            Tok::OrOp => "\\/",
            Tok::Tilde => "~",
            Tok::Equals => "=",
            Tok::At => "@",
            Tok::Assign => ":=",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Bang => "!",
            Tok::Eof => return write!(f, "end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

/// A positioned diagnostic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {}; found {})", self.expected.join(" or "), self.found)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| ParseError {
        line,
        col,
        expected: vec![],
        found: String::new(),
        message: msg,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| err(l0, c0, format!("number `{s}` is too large")))?;
            out.push(Token {
                tok: Tok::Num(n),
                line: l0,
                col: c0,
            });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        let (tok, n) = if three == "<->" {
            (Tok::Iff, 3)
        } else if two == "=>" {
            (Tok::FatArrow, 2)
        } else if two == "->" {
            (Tok::Arrow, 2)
        } else if two == "/\\" {
            (Tok::AndOp, 2)
        } else if two == "\\/" {
            (Tok::OrOp, 2)
        } else if two == ":=" {
            (Tok::Assign, 2)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                '|' => Tok::Bar,
                '~' => Tok::Tilde,
                '=' => Tok::Equals,
                '@' => Tok::At,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '!' => Tok::Bang,
                other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
            };
            (t, 1)
        };
        adv(n, &mut i, &mut col);
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: &[&str] = &[
    "thm", "eval", "realize", "mode", "fun", "case", "of", "let", "in", "ini", "inl", "inr", "fst", "snd", "magic",
    "ind", "forall", "exists", "bot", "empty", "omega", "union", "power", "sep", "repl", "S",
];

/// Axiom constructor names `<ax>Rep` / `<ax>Prop` with a fixed (non-schema) axiom.
fn fixed_axiom(name: &str) -> Option<(AxiomId, bool)> {
    let (stem, rep) = if let Some(s) = name.strip_suffix("Rep") {
        (s, true)
    } else if let Some(s) = name.strip_suffix("Prop") {
        (s, false)
    } else {
        return None;
    };
    let ax = match stem {
        "empty" => AxiomId::Empty,
        "pair" => AxiomId::Pair,
        "inf" => AxiomId::Inf,
        "union" => AxiomId::Union,
        "power" => AxiomId::Power,
        "in" => AxiomId::In,
        "eq" => AxiomId::Eq,
        "n" => AxiomId::Nwf,
        "s" => AxiomId::Sep0,
        s => {
            let digits = s.strip_prefix("inac")?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            AxiomId::Inac(digits.parse().ok()?)
        }
    };
    Some((ax, rep))
}

fn inac_const(name: &str) -> Option<u32> {
    let d = name.strip_prefix('V')?;
    if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    d.parse().ok()
}

fn is_reserved(name: &str, mode: Mode) -> bool {
    KEYWORDS.contains(&name)
        || fixed_axiom(name).is_some()
        || inac_const(name).is_some()
        || (mode == Mode::Nwf && (name == "C" || name == "D"))
}

// ---------------------------------------------------------------------------
// Theorem files

#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: String,
    pub formula: Formula,
    pub proof: Proof,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Thm(Decl),
    Eval(String),
    Realize(String),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct TheoremFile {
    pub mode: Mode,
    pub items: Vec<Item>,
}

impl TheoremFile {
    pub fn decls(&self) -> impl Iterator<Item = &Decl> {
        self.items.iter().filter_map(|it| match it {
            Item::Thm(d) => Some(d),
            _ => None,
        })
    }

    pub fn decl(&self, name: &str) -> Option<&Decl> {
        self.decls().find(|d| d.name == name)
    }

    pub fn eval_targets(&self) -> Vec<&str> {
        self.items
            .iter()
            .filter_map(|it| match it {
                Item::Eval(n) => Some(n.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn realize_targets(&self) -> Vec<&str> {
        self.items
            .iter()
            .filter_map(|it| match it {
                Item::Realize(n) => Some(n.as_str()),
                _ => None,
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    mode: Mode,
    scope: Vec<PVar>,
    decls: HashMap<String, Proof>,
    // first-order names seen so far in the current declaration
    seen: BTreeSet<Var>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str, mode: Mode) -> PResult<Parser> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            mode,
            scope: Vec::new(),
            decls: HashMap::new(),
            seen: BTreeSet::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str], message: &str) -> ParseError {
        let t = self.here();
        ParseError {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
            message: message.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let shown = tok.to_string();
            Err(self.error(&[&shown], "syntax error"))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            let shown = format!("`{kw}`");
            Err(self.error(&[&shown], "syntax error"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s, self.mode) => {
                self.bump();
                Ok(s)
            }
            Tok::Ident(s) => Err(self.error(&[what], &format!("`{s}` is reserved"))),
            _ => Err(self.error(&[what], "syntax error")),
        }
    }

    // -- files

    fn file(&mut self) -> PResult<TheoremFile> {
        let mut file = TheoremFile::default();
        if self.eat_kw("mode") {
            match self.peek().clone() {
                Tok::Ident(s) if s == "nwf" => file.mode = Mode::Nwf,
                Tok::Ident(s) if s == "standard" => file.mode = Mode::Standard,
                _ => return Err(self.error(&["`nwf`", "`standard`"], "unknown mode")),
            }
            self.bump();
            self.expect(Tok::Dot)?;
            self.mode = file.mode;
        }
        file.mode = self.mode;
        loop {
            if *self.peek() == Tok::Eof {
                break;
            }
            if self.eat_kw("thm") {
                self.seen.clear();
                let at = self.here().clone();
                let name = self.ident("theorem name")?;
                if self.decls.contains_key(&name) {
                    return Err(ParseError {
                        line: at.line,
                        col: at.col,
                        expected: vec![],
                        found: name.clone(),
                        message: format!("theorem `{name}` is declared twice"),
                    });
                }
                self.expect(Tok::Colon)?;
                let formula = self.formula()?;
                self.expect(Tok::Assign)?;
                let proof = self.proof()?;
                self.expect(Tok::Dot)?;
                self.decls.insert(name.clone(), proof.clone());
                file.items.push(Item::Thm(Decl { name, formula, proof }));
            } else if self.is_kw("eval") || self.is_kw("realize") {
                let eval = self.is_kw("eval");
                self.bump();
                let at = self.here().clone();
                let name = self.ident("theorem name")?;
                if !self.decls.contains_key(&name) {
                    return Err(ParseError {
                        line: at.line,
                        col: at.col,
                        expected: vec!["a declared theorem".into()],
                        found: name.clone(),
                        message: format!("unknown theorem `{name}`"),
                    });
                }
                self.expect(Tok::Dot)?;
                file.items.push(if eval { Item::Eval(name) } else { Item::Realize(name) });
            } else {
                return Err(self.error(&["`thm`", "`eval`", "`realize`"], "expected a declaration"));
            }
        }
        Ok(file)
    }

    // -- terms

    fn term(&mut self) -> PResult<Term> {
        let t = self.here().clone();
        match t.tok.clone() {
            Tok::Ident(s) => match s.as_str() {
                "empty" => {
                    self.bump();
                    Ok(Term::Empty)
                }
                "omega" => {
                    self.bump();
                    Ok(Term::Omega)
                }
                "union" => {
                    self.bump();
                    Ok(Term::union(self.term()?))
                }
                "power" => {
                    self.bump();
                    Ok(Term::power(self.term()?))
                }
                "S" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let a = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(succ(a))
                }
                "sep" | "repl" => {
                    self.bump();
                    let binders = if s == "sep" { 1 } else { 2 };
                    let schema = self.schema(binders)?;
                    self.expect(Tok::LParen)?;
                    let carrier = self.term()?;
                    let args = self.term_args_after_semi()?;
                    self.expect(Tok::RParen)?;
                    self.schema_term(&t, s == "sep", schema, carrier, args)
                }
                "C" if self.mode == Mode::Nwf => {
                    self.bump();
                    Ok(Term::Const(NwfConst::C))
                }
                "D" if self.mode == Mode::Nwf => {
                    self.bump();
                    Ok(Term::Const(NwfConst::D))
                }
                other => {
                    if let Some(i) = inac_const(other) {
                        if i == 0 {
                            return Err(self.error(&[], "inaccessible level must be at least 1 (V0 is omega)"));
                        }
                        self.bump();
                        return Ok(Term::Inac(i));
                    }
                    let v = Var::new(&self.ident("a term")?);
                    self.seen.insert(v.clone());
                    Ok(Term::Var(v))
                }
            },
            Tok::LBrace => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::RBrace)?;
                Ok(Term::pair(a, b))
            }
            Tok::Lt => {
                self.bump();
                let n = match self.bump() {
                    Tok::Num(n) if n <= 10_000 => n as u32,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&["a numeral"], "syntax error"));
                    }
                };
                self.expect(Tok::Gt)?;
                Ok(numeral(n))
            }
            _ => Err(self.error(&["a term"], "syntax error")),
        }
    }

    fn schema_term(&self, at: &Token, sep: bool, schema: Schema, carrier: Term, args: Vec<Term>) -> PResult<Term> {
        let r = if sep {
            Term::sep(Arc::new(schema), carrier, args)
        } else {
            Term::repl(Arc::new(schema), carrier, args)
        };
        r.map_err(|e| ParseError {
            line: at.line,
            col: at.col,
            expected: vec![],
            found: String::new(),
            message: e.to_string(),
        })
    }

    fn term_args_after_semi(&mut self) -> PResult<Vec<Term>> {
        let mut args = Vec::new();
        if *self.peek() == Tok::Semi {
            self.bump();
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
        }
        Ok(args)
    }

    /// `x (y)? (; p q)? | F` followed by `]`.
    fn schema(&mut self, binders: usize) -> PResult<Schema> {
        let at = self.here().clone();
        self.expect(Tok::LBrack)?;
        let mut bs = Vec::new();
        for _ in 0..binders {
            bs.push(Var::new(&self.ident("a bound variable")?));
        }
        let mut ps = Vec::new();
        if *self.peek() == Tok::Semi {
            self.bump();
            while let Tok::Ident(_) = self.peek() {
                ps.push(Var::new(&self.ident("a parameter")?));
            }
        }
        self.expect(Tok::Bar)?;
        let body = self.formula()?;
        self.expect(Tok::RBrack)?;
        Schema::new(bs, ps, body).map_err(|e| ParseError {
            line: at.line,
            col: at.col,
            expected: vec![],
            found: String::new(),
            message: e.to_string(),
        })
    }

    // -- formulas

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            return Ok(iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> PResult<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Formula> {
        let lhs = self.and()?;
        if *self.peek() == Tok::OrOp {
            self.bump();
            let rhs = self.or()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Formula> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::AndOp {
            self.bump();
            let rhs = self.and()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            let f = self.unary()?;
            return Ok(Formula::imp(f, Formula::Bottom));
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            let all = self.is_kw("forall");
            self.bump();
            let unique = !all && *self.peek() == Tok::Bang;
            if unique {
                self.bump();
            }
            let mut vs = vec![Var::new(&self.ident("a bound variable")?)];
            while let Tok::Ident(_) = self.peek() {
                vs.push(Var::new(&self.ident("a bound variable")?));
            }
            self.expect(Tok::Comma)?;
            let body = self.formula()?;
            return Ok(vs.into_iter().rev().fold(body, |acc, v| {
                if all {
                    Formula::Forall(v, Box::new(acc))
                } else if unique {
                    exists_unique(&v, acc)
                } else {
                    Formula::Exists(v, Box::new(acc))
                }
            }));
        }
        self.atom_formula()
    }

    fn atom_formula(&mut self) -> PResult<Formula> {
        if self.eat_kw("bot") {
            return Ok(Formula::Bottom);
        }
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        let lhs = self.term()?;
        let f = if self.eat_kw("in") {
            Formula::Mem(lhs, self.term()?)
        } else if self.eat_kw("ini") {
            Formula::MemI(lhs, self.term()?)
        } else if *self.peek() == Tok::Equals {
            self.bump();
            Formula::Eq(lhs, self.term()?)
        } else {
            return Err(self.error(&["`in`", "`ini`", "`=`"], "expected a relation"));
        };
        Ok(f)
    }

    // -- proofs

    fn proof(&mut self) -> PResult<Proof> {
        if self.eat_kw("fun") {
            enum B {
                P(PVar, Formula),
                F(Var),
            }
            let mut bs = Vec::new();
            loop {
                match self.peek() {
                    Tok::LParen => {
                        self.bump();
                        let x = PVar::new(&self.ident("a proof variable")?);
                        self.expect(Tok::Colon)?;
                        let f = self.formula()?;
                        self.expect(Tok::RParen)?;
                        bs.push(B::P(x, f));
                    }
                    Tok::Ident(s) if !is_reserved(s, self.mode) => {
                        let v = Var::new(&self.ident("a variable")?);
                        self.seen.insert(v.clone());
                        bs.push(B::F(v));
                    }
                    _ => break,
                }
            }
            if bs.is_empty() {
                return Err(self.error(&["a binder"], "`fun` needs at least one binder"));
            }
            self.expect(Tok::FatArrow)?;
            let mark = self.scope.len();
            for b in &bs {
                if let B::P(x, _) = b {
                    self.scope.push(x.clone());
                }
            }
            let body = self.proof();
            self.scope.truncate(mark);
            let body = body?;
            return Ok(bs.into_iter().rev().fold(body, |acc, b| match b {
                B::P(x, f) => Proof::LamP(x, f, Box::new(acc)),
                B::F(a) => Proof::LamF(a, Box::new(acc)),
            }));
        }
        if self.eat_kw("let") {
            self.expect(Tok::LBrack)?;
            let a = Var::new(&self.ident("a variable")?);
            self.seen.insert(a.clone());
            self.expect(Tok::Comma)?;
            let x = PVar::new(&self.ident("a proof variable")?);
            self.expect(Tok::Colon)?;
            let ty = self.formula()?;
            self.expect(Tok::RBrack)?;
            self.expect(Tok::Assign)?;
            let bound = self.proof()?;
            self.expect_kw("in")?;
            let body = self.scoped(&x, |p| p.proof())?;
            return Ok(Proof::Let {
                a,
                x,
                ty,
                bound: Box::new(bound),
                body: Box::new(body),
            });
        }
        if self.eat_kw("case") {
            let scrut = self.proof()?;
            self.expect_kw("of")?;
            self.expect_kw("inl")?;
            let (lvar, lty) = self.annotated_binder()?;
            self.expect(Tok::FatArrow)?;
            let lbody = self.scoped(&lvar, |p| p.proof())?;
            self.expect(Tok::Bar)?;
            self.expect_kw("inr")?;
            let (rvar, rty) = self.annotated_binder()?;
            self.expect(Tok::FatArrow)?;
            let rbody = self.scoped(&rvar, |p| p.proof())?;
            return Ok(Proof::Case {
                scrut: Box::new(scrut),
                lvar,
                lty,
                lbody: Box::new(lbody),
                rvar,
                rty,
                rbody: Box::new(rbody),
            });
        }
        self.application()
    }

    fn scoped<T>(&mut self, x: &PVar, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.scope.push(x.clone());
        let r = f(self);
        self.scope.pop();
        r
    }

    fn annotated_binder(&mut self) -> PResult<(PVar, Formula)> {
        self.expect(Tok::LParen)?;
        let x = PVar::new(&self.ident("a proof variable")?);
        self.expect(Tok::Colon)?;
        let f = self.formula()?;
        self.expect(Tok::RParen)?;
        Ok((x, f))
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::LBrack => true,
            Tok::Ident(s) => {
                matches!(s.as_str(), "fst" | "snd" | "inl" | "inr" | "magic" | "ind" | "sep" | "repl")
                    || fixed_axiom(s).is_some()
                    || !is_reserved(s, self.mode)
            }
            _ => false,
        }
    }

    fn application(&mut self) -> PResult<Proof> {
        let mut head = self.atom()?;
        loop {
            if *self.peek() == Tok::At {
                self.bump();
                let t = self.term()?;
                head = Proof::AppT(Box::new(head), t);
            } else if self.starts_atom() {
                let arg = self.atom()?;
                head = Proof::app(head, arg);
            } else {
                return Ok(head);
            }
        }
    }

    fn atom(&mut self) -> PResult<Proof> {
        let start = self.here().clone();
        match start.tok.clone() {
            Tok::LParen => {
                self.bump();
                let a = self.proof()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let b = self.proof()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Proof::pair(a, b));
                }
                self.expect(Tok::RParen)?;
                Ok(a)
            }
            Tok::LBrack => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::Comma)?;
                let m = self.proof()?;
                self.expect(Tok::RBrack)?;
                Ok(Proof::ExIntro(t, Box::new(m)))
            }
            Tok::Ident(s) => match s.as_str() {
                "fst" | "snd" | "inl" | "inr" | "magic" => {
                    self.bump();
                    if !self.starts_atom() {
                        return Err(ParseError {
                            line: start.line,
                            col: start.col,
                            expected: vec!["an argument".into()],
                            found: self.here().tok.to_string(),
                            message: format!("`{s}` expects an argument"),
                        });
                    }
                    let a = Box::new(self.atom()?);
                    Ok(match s.as_str() {
                        "fst" => Proof::Fst(a),
                        "snd" => Proof::Snd(a),
                        "inl" => Proof::Inl(a),
                        "inr" => Proof::Inr(a),
                        _ => Proof::Magic(a),
                    })
                }
                "ind" => {
                    self.bump();
                    let schema = Arc::new(self.schema(1)?);
                    self.expect(Tok::LParen)?;
                    let premise = self.proof()?;
                    let args = self.term_args_after_semi()?;
                    self.expect(Tok::RParen)?;
                    Ok(Proof::Ind {
                        schema,
                        premise: Box::new(premise),
                        args,
                    })
                }
                "sep" | "repl" => {
                    self.bump();
                    let schema = Arc::new(self.schema(if s == "sep" { 1 } else { 2 })?);
                    let rep = match self.peek().clone() {
                        Tok::Ident(k) if k == "Rep" => true,
                        Tok::Ident(k) if k == "Prop" => false,
                        _ => return Err(self.error(&["`Rep`", "`Prop`"], "syntax error")),
                    };
                    self.bump();
                    let ax = if s == "sep" {
                        AxiomId::Sep(schema)
                    } else {
                        AxiomId::Repl(schema)
                    };
                    self.ax_call(ax, rep)
                }
                name => {
                    if let Some((ax, rep)) = fixed_axiom(name) {
                        self.bump();
                        return self.ax_call(ax, rep);
                    }
                    let x = self.ident("a proof")?;
                    let pv = PVar::new(&x);
                    if !self.scope.contains(&pv) {
                        if let Some(m) = self.decls.get(&x) {
                            return Ok(m.rename_fo_apart(&self.seen));
                        }
                    }
                    Ok(Proof::Var(pv))
                }
            },
            _ => Err(self.error(&["a proof"], "syntax error")),
        }
    }

    fn ax_call(&mut self, ax: AxiomId, rep: bool) -> PResult<Proof> {
        let n_terms = 1 + ax.arity();
        self.expect(Tok::LParen)?;
        let t = self.term()?;
        let mut args = Vec::new();
        for _ in 1..n_terms {
            self.expect(Tok::Comma)?;
            args.push(self.term()?);
        }
        self.expect(Tok::Comma)?;
        let body = Box::new(self.proof()?);
        self.expect(Tok::RParen)?;
        Ok(if rep {
            Proof::AxRep { ax, t, args, body }
        } else {
            Proof::AxProp { ax, t, args, body }
        })
    }

    fn finish<T>(&mut self, v: T) -> PResult<T> {
        if *self.peek() != Tok::Eof {
            return Err(self.error(&["end of input"], "trailing input"));
        }
        Ok(v)
    }
}

pub fn parse_file(src: &str) -> Result<TheoremFile, ParseError> {
    let mut p = Parser::new(src, Mode::Standard)?;
    let f = p.file()?;
    p.finish(f)
}

pub fn parse_term(src: &str, mode: Mode) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, mode)?;
    let t = p.term()?;
    p.finish(t)
}

pub fn parse_formula(src: &str, mode: Mode) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src, mode)?;
    let f = p.formula()?;
    p.finish(f)
}

/// A bracketed schema `[x (y)? (; p ..)? | F]` with the given number of binders.
pub fn parse_schema(src: &str, binders: usize, mode: Mode) -> Result<Schema, ParseError> {
    let mut p = Parser::new(src, mode)?;
    let s = p.schema(binders)?;
    p.finish(s)
}

/// The axiom behind a surface stem (`pair`, `inac2`, `n`, ...) for families
/// without schema data.
pub fn fixed_axiom_named(stem: &str) -> Option<AxiomId> {
    fixed_axiom(&format!("{stem}Rep")).map(|(ax, _)| ax)
}

pub fn parse_proof(src: &str, mode: Mode) -> Result<Proof, ParseError> {
    let mut p = Parser::new(src, mode)?;
    let m = p.proof()?;
    p.finish(m)
}

// ---------------------------------------------------------------------------
// Printer

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    pt(t, &mut s);
    s
}

fn pt(t: &Term, out: &mut String) {
    if let Some(n) = match_numeral(t) {
        if n > 0 {
            out.push_str(&format!("<{n}>"));
            return;
        }
    }
    if let Some(inner) = match_succ(t) {
        out.push_str("S(");
        pt(inner, out);
        out.push(')');
        return;
    }
    match t {
        Term::Var(v) => out.push_str(v.name()),
        Term::Empty => out.push_str("empty"),
        Term::Omega => out.push_str("omega"),
        Term::Inac(i) => out.push_str(&format!("V{i}")),
        Term::Const(NwfConst::C) => out.push('C'),
        Term::Const(NwfConst::D) => out.push('D'),
        Term::Pair(a, b) => {
            out.push('{');
            pt(a, out);
            out.push_str(", ");
            pt(b, out);
            out.push('}');
        }
        Term::Union(a) => {
            out.push_str("union ");
            pt(a, out);
        }
        Term::Power(a) => {
            out.push_str("power ");
            pt(a, out);
        }
        Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
            out.push_str(if matches!(t, Term::Sep(..)) { "sep" } else { "repl" });
            print_schema(s, out);
            out.push('(');
            pt(u, out);
            if !args.is_empty() {
                out.push_str("; ");
                comma_terms(args, out);
            }
            out.push(')');
        }
    }
}

fn comma_terms(ts: &[Term], out: &mut String) {
    for (i, a) in ts.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        pt(a, out);
    }
}

fn print_schema(s: &Schema, out: &mut String) {
    out.push('[');
    out.push_str(&s.binders.iter().map(|v| v.name()).collect::<Vec<_>>().join(" "));
    if !s.params.is_empty() {
        out.push_str("; ");
        out.push_str(&s.params.iter().map(|v| v.name()).collect::<Vec<_>>().join(" "));
    }
    out.push_str(" | ");
    pf(&s.body, 0, true, out);
    out.push(']');
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    pf(f, 0, true, &mut s);
    s
}

fn match_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::And(l, r) = f else { return None };
    let (Formula::Imp(a, b), Formula::Imp(b2, a2)) = (l.as_ref(), r.as_ref()) else {
        return None;
    };
    if a == a2 && b == b2 {
        Some((a, b))
    } else {
        None
    }
}

// Precedences: 0 quantifier, 1 iff, 2 imp, 3 or, 4 and, 6 atom.
fn formula_prec(f: &Formula) -> u8 {
    if match_iff(f).is_some() {
        return 1;
    }
    match f {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Imp(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 6,
    }
}

fn pf(f: &Formula, prec: u8, right: bool, out: &mut String) {
    let mine = formula_prec(f);
    let paren = if mine == 0 { !right } else { mine < prec };
    let right = right || paren;
    if paren {
        out.push('(');
    }
    if let Some((a, b)) = match_iff(f) {
        pf(a, 2, false, out);
        out.push_str(" <-> ");
        pf(b, 2, right, out);
    } else {
        match f {
            Formula::Bottom => out.push_str("bot"),
            Formula::MemI(a, b) => {
                pt(a, out);
                out.push_str(" ini ");
                pt(b, out);
            }
            Formula::Mem(a, b) => {
                pt(a, out);
                out.push_str(" in ");
                pt(b, out);
            }
            Formula::Eq(a, b) => {
                pt(a, out);
                out.push_str(" = ");
                pt(b, out);
            }
            Formula::Imp(a, b) => {
                pf(a, 3, false, out);
                out.push_str(" -> ");
                pf(b, 2, right, out);
            }
            Formula::Or(a, b) => {
                pf(a, 4, false, out);
                out.push_str(" \\/ ");
                pf(b, 3, right, out);
            }
            Formula::And(a, b) => {
                pf(a, 5, false, out);
                out.push_str(" /\\ ");
                pf(b, 4, right, out);
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                if let Some((a, body)) = match_exists_unique(f) {
                    out.push_str("exists! ");
                    out.push_str(a.name());
                    out.push_str(", ");
                    pf(body, 0, right, out);
                } else {
                    let all = matches!(f, Formula::Forall(..));
                    out.push_str(if all { "forall" } else { "exists" });
                    let mut cur = f;
                    loop {
                        match (all, cur) {
                            (true, Formula::Forall(v, b)) | (false, Formula::Exists(v, b))
                                if !(cur != f && !all && match_exists_unique(cur).is_some()) =>
                            {
                                out.push(' ');
                                out.push_str(v.name());
                                cur = b;
                            }
                            _ => break,
                        }
                    }
                    out.push_str(", ");
                    pf(cur, 0, right, out);
                }
            }
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn print_proof(m: &Proof) -> String {
    let mut s = String::new();
    pp(m, 0, true, &mut s);
    s
}

// Levels: 0 open (fun/let/case), 1 application and prefix forms, 2 atoms.
fn proof_level(m: &Proof) -> u8 {
    match m {
        Proof::LamP(..) | Proof::LamF(..) | Proof::Let { .. } | Proof::Case { .. } => 0,
        Proof::App(..)
        | Proof::AppT(..)
        | Proof::Fst(_)
        | Proof::Snd(_)
        | Proof::Inl(_)
        | Proof::Inr(_)
        | Proof::Magic(_) => 1,
        _ => 2,
    }
}

fn pp(m: &Proof, level: u8, right: bool, out: &mut String) {
    let mine = proof_level(m);
    let paren = if mine == 0 { !right } else { mine < level };
    let right = right || paren;
    if paren {
        out.push('(');
    }
    match m {
        Proof::Var(x) => out.push_str(x.name()),
        Proof::LamP(..) | Proof::LamF(..) => {
            out.push_str("fun");
            let mut cur = m;
            loop {
                match cur {
                    Proof::LamP(x, ty, b) => {
                        out.push_str(" (");
                        out.push_str(x.name());
                        out.push_str(" : ");
                        pf(ty, 0, true, out);
                        out.push(')');
                        cur = b;
                    }
                    Proof::LamF(a, b) => {
                        out.push(' ');
                        out.push_str(a.name());
                        cur = b;
                    }
                    _ => break,
                }
            }
            out.push_str(" => ");
            pp(cur, 0, right, out);
        }
        Proof::App(f, a) => {
            pp(f, 1, false, out);
            out.push(' ');
            pp(a, 2, false, out);
        }
        Proof::AppT(f, t) => {
            pp(f, 1, false, out);
            out.push_str(" @");
            pt(t, out);
        }
        Proof::Pair(a, b) => {
            out.push('(');
            pp(a, 0, true, out);
            out.push_str(", ");
            pp(b, 0, true, out);
            out.push(')');
        }
        Proof::Fst(a) | Proof::Snd(a) | Proof::Inl(a) | Proof::Inr(a) | Proof::Magic(a) => {
            out.push_str(match m {
                Proof::Fst(_) => "fst ",
                Proof::Snd(_) => "snd ",
                Proof::Inl(_) => "inl ",
                Proof::Inr(_) => "inr ",
                _ => "magic ",
            });
            pp(a, 2, false, out);
        }
        Proof::Case {
            scrut,
            lvar,
            lty,
            lbody,
            rvar,
            rty,
            rbody,
        } => {
            out.push_str("case ");
            pp(scrut, 0, false, out);
            out.push_str(" of inl (");
            out.push_str(lvar.name());
            out.push_str(" : ");
            pf(lty, 0, true, out);
            out.push_str(") => ");
            pp(lbody, 0, false, out);
            out.push_str(" | inr (");
            out.push_str(rvar.name());
            out.push_str(" : ");
            pf(rty, 0, true, out);
            out.push_str(") => ");
            pp(rbody, 0, right, out);
        }
        Proof::ExIntro(t, a) => {
            out.push('[');
            pt(t, out);
            out.push_str(", ");
            pp(a, 0, true, out);
            out.push(']');
        }
        Proof::Let {
            a,
            x,
            ty,
            bound,
            body,
        } => {
            out.push_str("let [");
            out.push_str(a.name());
            out.push_str(", ");
            out.push_str(x.name());
            out.push_str(" : ");
            pf(ty, 0, true, out);
            out.push_str("] := ");
            pp(bound, 0, false, out);
            out.push_str(" in ");
            pp(body, 0, right, out);
        }
        Proof::Ind {
            schema,
            premise,
            args,
        } => {
            out.push_str("ind");
            print_schema(schema, out);
            out.push('(');
            pp(premise, 0, true, out);
            if !args.is_empty() {
                out.push_str("; ");
                comma_terms(args, out);
            }
            out.push(')');
        }
        Proof::AxRep { ax, t, args, body } | Proof::AxProp { ax, t, args, body } => {
            match ax {
                AxiomId::Sep(s) => {
                    out.push_str("sep");
                    print_schema(s, out);
                }
                AxiomId::Repl(s) => {
                    out.push_str("repl");
                    print_schema(s, out);
                }
                other => out.push_str(&other.name()),
            }
            out.push_str(if matches!(m, Proof::AxRep { .. }) { "Rep(" } else { "Prop(" });
            pt(t, out);
            for a in args {
                out.push_str(", ");
                pt(a, out);
            }
            out.push_str(", ");
            pp(body, 0, true, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

/// Display form for erased terms (not parsed back): prop lambdas `fun x =>`,
/// first-order lambdas `fun @a =>`.
pub fn print_erased(m: &Erased) -> String {
    let mut s = String::new();
    pe(m, 0, true, &mut s);
    s
}

fn erased_level(m: &Erased) -> u8 {
    match m {
        Erased::Lam(..) | Erased::LamF(..) | Erased::Let { .. } | Erased::Case { .. } => 0,
        Erased::App(..)
        | Erased::AppT(..)
        | Erased::Fst(_)
        | Erased::Snd(_)
        | Erased::Inl(_)
        | Erased::Inr(_)
        | Erased::Magic(_)
        | Erased::Ind(_) => 1,
        _ => 2,
    }
}

fn pe(m: &Erased, level: u8, right: bool, out: &mut String) {
    let mine = erased_level(m);
    let paren = if mine == 0 { !right } else { mine < level };
    let right = right || paren;
    if paren {
        out.push('(');
    }
    match m {
        Erased::Var(x) => out.push_str(x.name()),
        Erased::Lam(x, b) => {
            out.push_str("fun ");
            out.push_str(x.name());
            out.push_str(" => ");
            pe(b, 0, right, out);
        }
        Erased::LamF(a, b) => {
            out.push_str("fun @");
            out.push_str(a.name());
            out.push_str(" => ");
            pe(b, 0, right, out);
        }
        Erased::App(f, a) => {
            pe(f, 1, false, out);
            out.push(' ');
            pe(a, 2, false, out);
        }
        Erased::AppT(f, t) => {
            pe(f, 1, false, out);
            out.push_str(" @");
            pt(t, out);
        }
        Erased::Pair(a, b) => {
            out.push('(');
            pe(a, 0, true, out);
            out.push_str(", ");
            pe(b, 0, true, out);
            out.push(')');
        }
        Erased::Fst(a) | Erased::Snd(a) | Erased::Inl(a) | Erased::Inr(a) | Erased::Magic(a) | Erased::Ind(a) => {
            out.push_str(match m {
                Erased::Fst(_) => "fst ",
                Erased::Snd(_) => "snd ",
                Erased::Inl(_) => "inl ",
                Erased::Inr(_) => "inr ",
                Erased::Ind(_) => "ind ",
                _ => "magic ",
            });
            pe(a, 2, false, out);
        }
        Erased::Case {
            scrut,
            lvar,
            lbody,
            rvar,
            rbody,
        } => {
            out.push_str("case ");
            pe(scrut, 0, false, out);
            out.push_str(&format!(" of inl {} => ", lvar.name()));
            pe(lbody, 0, false, out);
            out.push_str(&format!(" | inr {} => ", rvar.name()));
            pe(rbody, 0, right, out);
        }
        Erased::ExIntro(t, a) => {
            out.push('[');
            pt(t, out);
            out.push_str(", ");
            pe(a, 0, true, out);
            out.push(']');
        }
        Erased::Let { a, x, bound, body } => {
            out.push_str(&format!("let [{}, {}] := ", a.name(), x.name()));
            pe(bound, 0, false, out);
            out.push_str(" in ");
            pe(body, 0, right, out);
        }
        Erased::AxRep(k, b) | Erased::AxProp(k, b) => {
            out.push_str(&k.prefix());
            out.push_str(if matches!(m, Erased::AxRep(..)) { "Rep(" } else { "Prop(" });
            pe(b, 0, true, out);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

/// Print a whole file; declarations print with their (inlined) proofs.
pub fn print_file(f: &TheoremFile) -> String {
    let mut out = String::new();
    if f.mode == Mode::Nwf {
        out.push_str("mode nwf .\n\n");
    }
    for it in &f.items {
        match it {
            Item::Thm(d) => {
                out.push_str(&format!(
                    "thm {} : {} :=\n  {} .\n\n",
                    d.name,
                    print_formula(&d.formula),
                    print_proof(&d.proof)
                ));
            }
            Item::Eval(n) => out.push_str(&format!("eval {n} .\n")),
            Item::Realize(n) => out.push_str(&format!("realize {n} .\n")),
        }
    }
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_proof(self))
    }
}

impl fmt::Display for Erased {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_erased(self))
    }
}

/// Names usable as generated variables (not reserved in any mode).
pub fn is_valid_var_name(name: &str) -> bool {
    let mut cs = name.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !is_reserved(name, Mode::Nwf)
}

/// Parse the axiom kind from its surface prefix.
pub fn ax_kind_from_prefix(s: &str) -> Option<AxKind> {
    fixed_axiom(&format!("{s}Rep")).and_then(|(ax, _)| ax.kind()).or(match s {
        "sep" => Some(AxKind::Sep),
        "repl" => Some(AxKind::Repl),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_declaration() {
        let f = parse_file("thm id : bot -> bot := fun (x:bot) => x .").unwrap();
        let d = f.decl("id").unwrap();
        assert_eq!(d.formula, Formula::imp(Formula::Bottom, Formula::Bottom));
        assert_eq!(d.proof, Proof::lam("x", Formula::Bottom, Proof::var("x")));
    }

    #[test]
    fn magic_without_argument_points_at_magic() {
        let e = parse_file("thm bad : bot := magic").unwrap_err();
        assert_eq!((e.line, e.col), (1, 18));
        assert!(e.message.contains("magic"));
    }

    #[test]
    fn printing_examples() {
        let b = Formula::Bottom;
        let f = Formula::imp(b.clone(), Formula::imp(b.clone(), b));
        assert_eq!(print_formula(&f), "bot -> bot -> bot");
        let g = Formula::forall("a", Formula::Eq(Term::var("a"), Term::var("a")));
        assert_eq!(print_formula(&g), "forall a, a = a");
    }

    #[test]
    fn quantifier_on_left_is_parenthesized() {
        let q = Formula::forall("a", Formula::Bottom);
        let f = Formula::and(q.clone(), Formula::Bottom);
        let s = print_formula(&f);
        assert_eq!(s, "(forall a, bot) /\\ bot");
        assert_eq!(parse_formula(&s, Mode::Standard).unwrap(), f);
        let g = Formula::and(Formula::Bottom, q);
        assert_eq!(print_formula(&g), "bot /\\ forall a, bot");
    }

    #[test]
    fn numerals_and_successor() {
        let t = parse_term("<2>", Mode::Standard).unwrap();
        assert_eq!(match_numeral(&t), Some(2));
        assert_eq!(print_term(&t), "<2>");
        assert_eq!(print_term(&succ(Term::var("b"))), "S(b)");
    }

    #[test]
    fn references_are_inlined() {
        let src = "thm id : bot -> bot := fun (x:bot) => x .\nthm id2 : bot -> bot := fun (y:bot) => id y .";
        let f = parse_file(src).unwrap();
        let d = f.decl("id2").unwrap();
        assert!(matches!(&d.proof, Proof::LamP(_, _, b) if matches!(b.as_ref(), Proof::App(h, _) if matches!(h.as_ref(), Proof::LamP(..)))));
    }

    #[test]
    fn nwf_constants_only_in_nwf_mode() {
        assert!(parse_term("C", Mode::Nwf).is_ok());
        assert_eq!(parse_term("C", Mode::Standard).unwrap(), Term::var("C"));
        let f = parse_file("mode nwf .\nthm t : C = C -> C = C := fun (x : C = C) => x .").unwrap();
        assert_eq!(f.mode, Mode::Nwf);
    }

    #[test]
    fn schema_terms_round_trip() {
        let s = "sep[z; p | z in p](a; b)";
        let t = parse_term(s, Mode::Standard).unwrap();
        assert_eq!(print_term(&t), s);
    }
}
