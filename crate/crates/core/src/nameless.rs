//! De Bruijn representation of terms and formulas.
//!
//! Kept independent of the named implementation in `syntax` so tests can use it
//! as an oracle for α-equivalence, free variables and substitution. Free
//! variables stay named (locally nameless), so substitution never shifts.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::syntax::{fresh_var, Formula, NwfConst, Schema, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NTerm {
    Bound(usize),
    Free(Var),
    Empty,
    Omega,
    Inac(u32),
    Const(NwfConst),
    Pair(Box<NTerm>, Box<NTerm>),
    Union(Box<NTerm>),
    Power(Box<NTerm>),
    Sep(NSchema, Box<NTerm>, Vec<NTerm>),
    Repl(NSchema, Box<NTerm>, Vec<NTerm>),
}

/// Body sees binders first, then params, innermost last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NSchema {
    pub binders: usize,
    pub params: usize,
    pub body: Box<NFormula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NFormula {
    Bottom,
    MemI(NTerm, NTerm),
    Mem(NTerm, NTerm),
    Eq(NTerm, NTerm),
    And(Box<NFormula>, Box<NFormula>),
    Or(Box<NFormula>, Box<NFormula>),
    Imp(Box<NFormula>, Box<NFormula>),
    Forall(Box<NFormula>),
    Exists(Box<NFormula>),
}

fn idx(env: &[Var], v: &Var) -> Option<usize> {
    env.iter().rev().position(|w| w == v)
}

fn term_in(t: &Term, env: &mut Vec<Var>) -> NTerm {
    match t {
        Term::Var(v) => match idx(env, v) {
            Some(i) => NTerm::Bound(i),
            None => NTerm::Free(v.clone()),
        },
        Term::Empty => NTerm::Empty,
        Term::Omega => NTerm::Omega,
        Term::Inac(i) => NTerm::Inac(*i),
        Term::Const(c) => NTerm::Const(*c),
        Term::Pair(a, b) => NTerm::Pair(Box::new(term_in(a, env)), Box::new(term_in(b, env))),
        Term::Union(a) => NTerm::Union(Box::new(term_in(a, env))),
        Term::Power(a) => NTerm::Power(Box::new(term_in(a, env))),
        Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
            let ns = schema_in(s, env);
            let nu = Box::new(term_in(u, env));
            let nargs = args.iter().map(|a| term_in(a, env)).collect();
            if matches!(t, Term::Sep(..)) {
                NTerm::Sep(ns, nu, nargs)
            } else {
                NTerm::Repl(ns, nu, nargs)
            }
        }
    }
}

fn schema_in(s: &Schema, env: &mut Vec<Var>) -> NSchema {
    let mark = env.len();
    env.extend(s.binders.iter().cloned());
    env.extend(s.params.iter().cloned());
    let body = formula_in(&s.body, env);
    env.truncate(mark);
    NSchema {
        binders: s.binders.len(),
        params: s.params.len(),
        body: Box::new(body),
    }
}

fn formula_in(f: &Formula, env: &mut Vec<Var>) -> NFormula {
    let bx = Box::new;
    match f {
        Formula::Bottom => NFormula::Bottom,
        Formula::MemI(a, b) => NFormula::MemI(term_in(a, env), term_in(b, env)),
        Formula::Mem(a, b) => NFormula::Mem(term_in(a, env), term_in(b, env)),
        Formula::Eq(a, b) => NFormula::Eq(term_in(a, env), term_in(b, env)),
        Formula::And(a, b) => NFormula::And(bx(formula_in(a, env)), bx(formula_in(b, env))),
        Formula::Or(a, b) => NFormula::Or(bx(formula_in(a, env)), bx(formula_in(b, env))),
        Formula::Imp(a, b) => NFormula::Imp(bx(formula_in(a, env)), bx(formula_in(b, env))),
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            env.push(v.clone());
            let nb = bx(formula_in(b, env));
            env.pop();
            if matches!(f, Formula::Forall(..)) {
                NFormula::Forall(nb)
            } else {
                NFormula::Exists(nb)
            }
        }
    }
}

pub fn term_to_nameless(t: &Term) -> NTerm {
    term_in(t, &mut Vec::new())
}

pub fn to_nameless(f: &Formula) -> NFormula {
    formula_in(f, &mut Vec::new())
}

impl NTerm {
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut acc = BTreeSet::new();
        self.collect(&mut acc);
        acc
    }

    fn collect(&self, acc: &mut BTreeSet<Var>) {
        match self {
            NTerm::Free(v) => {
                acc.insert(v.clone());
            }
            NTerm::Bound(_) | NTerm::Empty | NTerm::Omega | NTerm::Inac(_) | NTerm::Const(_) => {}
            NTerm::Pair(a, b) => {
                a.collect(acc);
                b.collect(acc);
            }
            NTerm::Union(a) | NTerm::Power(a) => a.collect(acc),
            NTerm::Sep(s, u, args) | NTerm::Repl(s, u, args) => {
                s.body.collect(acc);
                u.collect(acc);
                for a in args {
                    a.collect(acc);
                }
            }
        }
    }

    /// Replace the free name `x` by a locally closed `r`.
    pub fn subst(&self, x: &Var, r: &NTerm) -> NTerm {
        match self {
            NTerm::Free(v) if v == x => r.clone(),
            NTerm::Free(_) | NTerm::Bound(_) | NTerm::Empty | NTerm::Omega | NTerm::Inac(_) | NTerm::Const(_) => {
                self.clone()
            }
            NTerm::Pair(a, b) => NTerm::Pair(Box::new(a.subst(x, r)), Box::new(b.subst(x, r))),
            NTerm::Union(a) => NTerm::Union(Box::new(a.subst(x, r))),
            NTerm::Power(a) => NTerm::Power(Box::new(a.subst(x, r))),
            NTerm::Sep(s, u, args) | NTerm::Repl(s, u, args) => {
                let s2 = NSchema {
                    binders: s.binders,
                    params: s.params,
                    body: Box::new(s.body.subst(x, r)),
                };
                let u2 = Box::new(u.subst(x, r));
                let a2 = args.iter().map(|a| a.subst(x, r)).collect();
                if matches!(self, NTerm::Sep(..)) {
                    NTerm::Sep(s2, u2, a2)
                } else {
                    NTerm::Repl(s2, u2, a2)
                }
            }
        }
    }
}

impl NFormula {
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut acc = BTreeSet::new();
        self.collect(&mut acc);
        acc
    }

    fn collect(&self, acc: &mut BTreeSet<Var>) {
        match self {
            NFormula::Bottom => {}
            NFormula::MemI(a, b) | NFormula::Mem(a, b) | NFormula::Eq(a, b) => {
                a.collect(acc);
                b.collect(acc);
            }
            NFormula::And(a, b) | NFormula::Or(a, b) | NFormula::Imp(a, b) => {
                a.collect(acc);
                b.collect(acc);
            }
            NFormula::Forall(b) | NFormula::Exists(b) => b.collect(acc),
        }
    }

    pub fn subst(&self, x: &Var, r: &NTerm) -> NFormula {
        let bx = Box::new;
        match self {
            NFormula::Bottom => NFormula::Bottom,
            NFormula::MemI(a, b) => NFormula::MemI(a.subst(x, r), b.subst(x, r)),
            NFormula::Mem(a, b) => NFormula::Mem(a.subst(x, r), b.subst(x, r)),
            NFormula::Eq(a, b) => NFormula::Eq(a.subst(x, r), b.subst(x, r)),
            NFormula::And(a, b) => NFormula::And(bx(a.subst(x, r)), bx(b.subst(x, r))),
            NFormula::Or(a, b) => NFormula::Or(bx(a.subst(x, r)), bx(b.subst(x, r))),
            NFormula::Imp(a, b) => NFormula::Imp(bx(a.subst(x, r)), bx(b.subst(x, r))),
            NFormula::Forall(b) => NFormula::Forall(bx(b.subst(x, r))),
            NFormula::Exists(b) => NFormula::Exists(bx(b.subst(x, r))),
        }
    }
}

/// Read back with generated binder names that avoid every free name.
pub fn from_nameless(f: &NFormula) -> Formula {
    let avoid = f.free_vars();
    let mut rb = Readback { avoid, env: Vec::new() };
    rb.formula(f)
}

pub fn term_from_nameless(t: &NTerm) -> Term {
    let avoid = t.free_vars();
    let mut rb = Readback { avoid, env: Vec::new() };
    rb.term(t)
}

struct Readback {
    avoid: BTreeSet<Var>,
    env: Vec<Var>,
}

impl Readback {
    fn fresh(&mut self) -> Var {
        let mut taken = self.avoid.clone();
        taken.extend(self.env.iter().cloned());
        let v = fresh_var(&Var::new(&format!("v{}", self.env.len())), &taken);
        self.env.push(v.clone());
        v
    }

    fn term(&mut self, t: &NTerm) -> Term {
        match t {
            NTerm::Bound(i) => Term::Var(self.env[self.env.len() - 1 - i].clone()),
            NTerm::Free(v) => Term::Var(v.clone()),
            NTerm::Empty => Term::Empty,
            NTerm::Omega => Term::Omega,
            NTerm::Inac(i) => Term::Inac(*i),
            NTerm::Const(c) => Term::Const(*c),
            NTerm::Pair(a, b) => Term::pair(self.term(a), self.term(b)),
            NTerm::Union(a) => Term::union(self.term(a)),
            NTerm::Power(a) => Term::power(self.term(a)),
            NTerm::Sep(s, u, args) | NTerm::Repl(s, u, args) => {
                let mark = self.env.len();
                let binders: Vec<Var> = (0..s.binders).map(|_| self.fresh()).collect();
                let params: Vec<Var> = (0..s.params).map(|_| self.fresh()).collect();
                let body = self.formula(&s.body);
                self.env.truncate(mark);
                let schema = Arc::new(Schema::new(binders, params, body).expect("generated names are distinct"));
                let u2 = Box::new(self.term(u));
                let a2 = args.iter().map(|a| self.term(a)).collect();
                if matches!(t, NTerm::Sep(..)) {
                    Term::Sep(schema, u2, a2)
                } else {
                    Term::Repl(schema, u2, a2)
                }
            }
        }
    }

    fn formula(&mut self, f: &NFormula) -> Formula {
        match f {
            NFormula::Bottom => Formula::Bottom,
            NFormula::MemI(a, b) => Formula::MemI(self.term(a), self.term(b)),
            NFormula::Mem(a, b) => Formula::Mem(self.term(a), self.term(b)),
            NFormula::Eq(a, b) => Formula::Eq(self.term(a), self.term(b)),
            NFormula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            NFormula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            NFormula::Imp(a, b) => Formula::imp(self.formula(a), self.formula(b)),
            NFormula::Forall(b) | NFormula::Exists(b) => {
                let v = self.fresh();
                let body = self.formula(b);
                self.env.pop();
                if matches!(f, NFormula::Forall(_)) {
                    Formula::Forall(v, Box::new(body))
                } else {
                    Formula::Exists(v, Box::new(body))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binder_names_disappear() {
        let f = Formula::forall("b", Formula::Mem(Term::var("b"), Term::var("a")));
        let g = Formula::forall("c", Formula::Mem(Term::var("c"), Term::var("a")));
        assert_eq!(to_nameless(&f), to_nameless(&g));
        assert_eq!(
            to_nameless(&f),
            NFormula::Forall(Box::new(NFormula::Mem(NTerm::Bound(0), NTerm::Free(Var::new("a")))))
        );
    }

    #[test]
    fn readback_is_alpha_equal() {
        let f = Formula::forall("b", Formula::exists("c", Formula::Eq(Term::var("b"), Term::var("v0"))));
        let back = from_nameless(&to_nameless(&f));
        assert!(back.alpha_eq(&f));
        assert_eq!(to_nameless(&back), to_nameless(&f));
    }
}
