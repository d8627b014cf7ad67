//! First-order terms and formulas of the set theory, with capture-avoiding
//! substitution and α-equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A first-order (term) variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn primed(&self) -> Var {
        Var::new(&format!("{}'", self.0))
    }

    /// Reserved names used by canonical forms; the parser never produces them.
    pub(crate) fn canonical(k: usize) -> Var {
        Var::new(&format!("#{k}"))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

/// Pick `base`, `base'`, `base''`, ... whichever first avoids `avoid`.
pub fn fresh_var(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    let mut v = base.clone();
    while avoid.contains(&v) {
        v = v.primed();
    }
    v
}

/// Constants of the non-well-founded variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NwfConst {
    C,
    D,
}

/// A formula with bound variables: `binders` are the schema's own variables
/// (one for separation, two for replacement), `params` the parameters instantiated
/// by the term arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schema {
    pub binders: Vec<Var>,
    pub params: Vec<Var>,
    pub body: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("schema for {what} needs {expected} bound variable(s), found {found}")]
    BinderCount {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("schema has {params} parameter(s) but {args} argument(s) were supplied")]
    ArgCount { params: usize, args: usize },
    #[error("variable `{0}` is bound twice in one schema")]
    DuplicateBinder(Var),
    #[error("inaccessible level must be at least 1")]
    InacLevel,
}

impl Schema {
    pub fn new(binders: Vec<Var>, params: Vec<Var>, body: Formula) -> Result<Schema, SyntaxError> {
        let mut seen = BTreeSet::new();
        for v in binders.iter().chain(params.iter()) {
            if !seen.insert(v.clone()) {
                return Err(SyntaxError::DuplicateBinder(v.clone()));
            }
        }
        Ok(Schema {
            binders,
            params,
            body,
        })
    }

    /// All variables bound by the schema, binders first.
    pub fn bound(&self) -> Vec<Var> {
        self.binders.iter().chain(self.params.iter()).cloned().collect()
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut fv = self.body.free_vars();
        for b in self.binders.iter().chain(self.params.iter()) {
            fv.remove(b);
        }
        fv
    }

    /// Instantiate binders and params with terms: `body[binders := xs, params := args]`.
    pub fn instantiate(&self, xs: &[Term], args: &[Term]) -> Formula {
        let mut s = Subst::new();
        for (b, t) in self.binders.iter().zip(xs) {
            s.insert(b.clone(), t.clone());
        }
        for (p, t) in self.params.iter().zip(args) {
            s.insert(p.clone(), t.clone());
        }
        self.body.subst(&s)
    }

    pub fn subst(&self, s: &Subst) -> Schema {
        let (bound, s2) = under_binders(&self.bound(), &self.body.free_vars(), s);
        if s2.is_empty() {
            return self.clone();
        }
        let nb = self.binders.len();
        Schema {
            binders: bound[..nb].to_vec(),
            params: bound[nb..].to_vec(),
            body: self.body.subst(&s2),
        }
    }

    fn canon_in(&self, env: &mut Env) -> Schema {
        let bound = self.bound();
        let mark = env.len();
        let mut names = Vec::new();
        for b in &bound {
            names.push(env.push(b));
        }
        let body = self.body.canon_in(env);
        env.truncate(mark);
        let nb = self.binders.len();
        Schema {
            binders: names[..nb].to_vec(),
            params: names[nb..].to_vec(),
            body,
        }
    }
}

/// Terms of the set theory.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Empty,
    Omega,
    /// The i-th inaccessible, i ≥ 1.
    Inac(u32),
    Pair(Box<Term>, Box<Term>),
    Union(Box<Term>),
    Power(Box<Term>),
    /// Separation instance: schema (one binder), carrier, parameter arguments.
    Sep(Arc<Schema>, Box<Term>, Vec<Term>),
    /// Replacement instance: schema (two binders), carrier, parameter arguments.
    Repl(Arc<Schema>, Box<Term>, Vec<Term>),
    /// Constant of the non-well-founded variant.
    Const(NwfConst),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn union(a: Term) -> Term {
        Term::Union(Box::new(a))
    }

    pub fn power(a: Term) -> Term {
        Term::Power(Box::new(a))
    }

    pub fn inac(i: u32) -> Result<Term, SyntaxError> {
        if i == 0 {
            return Err(SyntaxError::InacLevel);
        }
        Ok(Term::Inac(i))
    }

    pub fn sep(schema: Arc<Schema>, carrier: Term, args: Vec<Term>) -> Result<Term, SyntaxError> {
        check_schema_shape(&schema, 1, "separation", args.len())?;
        Ok(Term::Sep(schema, Box::new(carrier), args))
    }

    pub fn repl(schema: Arc<Schema>, carrier: Term, args: Vec<Term>) -> Result<Term, SyntaxError> {
        check_schema_shape(&schema, 2, "replacement", args.len())?;
        Ok(Term::Repl(schema, Box::new(carrier), args))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut acc = BTreeSet::new();
        self.collect_fv(&mut acc);
        acc
    }

    pub(crate) fn collect_fv(&self, acc: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                acc.insert(v.clone());
            }
            Term::Empty | Term::Omega | Term::Inac(_) | Term::Const(_) => {}
            Term::Pair(a, b) => {
                a.collect_fv(acc);
                b.collect_fv(acc);
            }
            Term::Union(a) | Term::Power(a) => a.collect_fv(acc),
            Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
                acc.extend(s.free_vars());
                u.collect_fv(acc);
                for a in args {
                    a.collect_fv(acc);
                }
            }
        }
    }

    pub fn subst(&self, s: &Subst) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Empty | Term::Omega | Term::Inac(_) | Term::Const(_) => self.clone(),
            Term::Pair(a, b) => Term::pair(a.subst(s), b.subst(s)),
            Term::Union(a) => Term::union(a.subst(s)),
            Term::Power(a) => Term::power(a.subst(s)),
            Term::Sep(sc, u, args) => Term::Sep(
                Arc::new(sc.subst(s)),
                Box::new(u.subst(s)),
                args.iter().map(|a| a.subst(s)).collect(),
            ),
            Term::Repl(sc, u, args) => Term::Repl(
                Arc::new(sc.subst(s)),
                Box::new(u.subst(s)),
                args.iter().map(|a| a.subst(s)).collect(),
            ),
        }
    }

    pub fn subst1(&self, v: &Var, t: &Term) -> Term {
        let mut s = Subst::new();
        s.insert(v.clone(), t.clone());
        self.subst(&s)
    }

    /// Bound variables renamed to reserved positional names; α-equal terms
    /// have identical canonical forms.
    pub fn canonical(&self) -> Term {
        self.canon_in(&mut Env::default())
    }

    pub(crate) fn canon_in(&self, env: &mut Env) -> Term {
        match self {
            Term::Var(v) => Term::Var(env.lookup(v)),
            Term::Empty | Term::Omega | Term::Inac(_) | Term::Const(_) => self.clone(),
            Term::Pair(a, b) => Term::pair(a.canon_in(env), b.canon_in(env)),
            Term::Union(a) => Term::union(a.canon_in(env)),
            Term::Power(a) => Term::power(a.canon_in(env)),
            Term::Sep(sc, u, args) => Term::Sep(
                Arc::new(sc.canon_in(env)),
                Box::new(u.canon_in(env)),
                args.iter().map(|a| a.canon_in(env)).collect(),
            ),
            Term::Repl(sc, u, args) => Term::Repl(
                Arc::new(sc.canon_in(env)),
                Box::new(u.canon_in(env)),
                args.iter().map(|a| a.canon_in(env)).collect(),
            ),
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    /// Number of constructors, counting schema bodies.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Empty | Term::Omega | Term::Inac(_) | Term::Const(_) => 1,
            Term::Pair(a, b) => 1 + a.size() + b.size(),
            Term::Union(a) | Term::Power(a) => 1 + a.size(),
            Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
                1 + s.body.size() + u.size() + args.iter().map(Term::size).sum::<usize>()
            }
        }
    }

    pub fn mentions_const(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Var(_) | Term::Empty | Term::Omega | Term::Inac(_) => false,
            Term::Pair(a, b) => a.mentions_const() || b.mentions_const(),
            Term::Union(a) | Term::Power(a) => a.mentions_const(),
            Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
                s.body.mentions_const() || u.mentions_const() || args.iter().any(Term::mentions_const)
            }
        }
    }
}

fn check_schema_shape(
    schema: &Schema,
    binders: usize,
    what: &'static str,
    args: usize,
) -> Result<(), SyntaxError> {
    if schema.binders.len() != binders {
        return Err(SyntaxError::BinderCount {
            what,
            expected: binders,
            found: schema.binders.len(),
        });
    }
    if schema.params.len() != args {
        return Err(SyntaxError::ArgCount {
            params: schema.params.len(),
            args,
        });
    }
    Ok(())
}

/// Formulas. `∈̄` (intensional membership) is `MemI`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bottom,
    MemI(Term, Term),
    Mem(Term, Term),
    Eq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(Var::new(v), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(Var::new(v), Box::new(body))
    }

    pub fn forall_many(vs: &[Var], body: Formula) -> Formula {
        vs.iter()
            .rev()
            .fold(body, |acc, v| Formula::Forall(v.clone(), Box::new(acc)))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut acc = BTreeSet::new();
        self.collect_fv(&mut acc);
        acc
    }

    pub(crate) fn collect_fv(&self, acc: &mut BTreeSet<Var>) {
        match self {
            Formula::Bottom => {}
            Formula::MemI(a, b) | Formula::Mem(a, b) | Formula::Eq(a, b) => {
                a.collect_fv(acc);
                b.collect_fv(acc);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_fv(acc);
                b.collect_fv(acc);
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let mut inner = b.free_vars();
                inner.remove(v);
                acc.extend(inner);
            }
        }
    }

    pub fn subst(&self, s: &Subst) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::MemI(a, b) => Formula::MemI(a.subst(s), b.subst(s)),
            Formula::Mem(a, b) => Formula::Mem(a.subst(s), b.subst(s)),
            Formula::Eq(a, b) => Formula::Eq(a.subst(s), b.subst(s)),
            Formula::And(a, b) => Formula::and(a.subst(s), b.subst(s)),
            Formula::Or(a, b) => Formula::or(a.subst(s), b.subst(s)),
            Formula::Imp(a, b) => Formula::imp(a.subst(s), b.subst(s)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let (vs, s2) = under_binders(std::slice::from_ref(v), &b.free_vars(), s);
                if s2.is_empty() {
                    return self.clone();
                }
                let body = Box::new(b.subst(&s2));
                let v = vs.into_iter().next().expect("one binder");
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(v, body)
                } else {
                    Formula::Exists(v, body)
                }
            }
        }
    }

    pub fn subst1(&self, v: &Var, t: &Term) -> Formula {
        let mut s = Subst::new();
        s.insert(v.clone(), t.clone());
        self.subst(&s)
    }

    pub fn canonical(&self) -> Formula {
        self.canon_in(&mut Env::default())
    }

    pub(crate) fn canon_in(&self, env: &mut Env) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::MemI(a, b) => Formula::MemI(a.canon_in(env), b.canon_in(env)),
            Formula::Mem(a, b) => Formula::Mem(a.canon_in(env), b.canon_in(env)),
            Formula::Eq(a, b) => Formula::Eq(a.canon_in(env), b.canon_in(env)),
            Formula::And(a, b) => Formula::and(a.canon_in(env), b.canon_in(env)),
            Formula::Or(a, b) => Formula::or(a.canon_in(env), b.canon_in(env)),
            Formula::Imp(a, b) => Formula::imp(a.canon_in(env), b.canon_in(env)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let name = env.push(v);
                let body = Box::new(b.canon_in(env));
                env.pop();
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(name, body)
                } else {
                    Formula::Exists(name, body)
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom => 1,
            Formula::MemI(a, b) | Formula::Mem(a, b) | Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.size(),
        }
    }

    pub fn mentions_const(&self) -> bool {
        match self {
            Formula::Bottom => false,
            Formula::MemI(a, b) | Formula::Mem(a, b) | Formula::Eq(a, b) => {
                a.mentions_const() || b.mentions_const()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.mentions_const() || b.mentions_const()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.mentions_const(),
        }
    }

    /// True if some term inside is not a variable or constant-free atom the
    /// realizability checker can evaluate (inaccessibles are not evaluable).
    pub fn mentions_inac(&self) -> bool {
        fn t(x: &Term) -> bool {
            match x {
                Term::Inac(_) => true,
                Term::Var(_) | Term::Empty | Term::Omega | Term::Const(_) => false,
                Term::Pair(a, b) => t(a) || t(b),
                Term::Union(a) | Term::Power(a) => t(a),
                Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
                    s.body.mentions_inac() || t(u) || args.iter().any(t)
                }
            }
        }
        match self {
            Formula::Bottom => false,
            Formula::MemI(a, b) | Formula::Mem(a, b) | Formula::Eq(a, b) => t(a) || t(b),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.mentions_inac() || b.mentions_inac()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.mentions_inac(),
        }
    }
}

/// A simultaneous substitution of terms for variables.
pub type Subst = BTreeMap<Var, Term>;

/// Prepare a substitution for crossing `binders` whose body has free variables
/// `body_fv`: drops entries that are shadowed or irrelevant, and renames binders
/// that would capture a variable of the substituted terms.
pub(crate) fn under_binders(
    binders: &[Var],
    body_fv: &BTreeSet<Var>,
    s: &Subst,
) -> (Vec<Var>, Subst) {
    let mut s2: Subst = s
        .iter()
        .filter(|(k, _)| body_fv.contains(*k) && !binders.contains(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if s2.is_empty() {
        return (binders.to_vec(), s2);
    }
    let mut range_fv = BTreeSet::new();
    for t in s2.values() {
        t.collect_fv(&mut range_fv);
    }
    rename_binders(binders, body_fv, &range_fv, &mut s2)
}

/// Shared renaming step: any binder in `danger` is renamed away from `danger`
/// and the body's free variables, with the renaming added to `s2`.
pub(crate) fn rename_binders(
    binders: &[Var],
    body_fv: &BTreeSet<Var>,
    danger: &BTreeSet<Var>,
    s2: &mut Subst,
) -> (Vec<Var>, Subst) {
    let mut out = Vec::with_capacity(binders.len());
    let mut avoid: BTreeSet<Var> = danger.union(body_fv).cloned().collect();
    avoid.extend(binders.iter().cloned());
    for b in binders {
        if danger.contains(b) {
            let nb = fresh_var(b, &avoid);
            avoid.insert(nb.clone());
            s2.insert(b.clone(), Term::Var(nb.clone()));
            out.push(nb);
        } else {
            out.push(b.clone());
        }
    }
    (out, std::mem::take(s2))
}

/// Binder environment for canonicalization (positional names by depth).
#[derive(Default)]
pub(crate) struct Env {
    stack: Vec<(Var, Var)>,
}

impl Env {
    pub(crate) fn push(&mut self, v: &Var) -> Var {
        let name = Var::canonical(self.stack.len());
        self.stack.push((v.clone(), name.clone()));
        name
    }

    pub(crate) fn pop(&mut self) {
        self.stack.pop();
    }

    pub(crate) fn len(&self) -> usize {
        self.stack.len()
    }

    pub(crate) fn truncate(&mut self, n: usize) {
        self.stack.truncate(n);
    }

    pub(crate) fn lookup(&self, v: &Var) -> Var {
        self.stack
            .iter()
            .rev()
            .find(|(k, _)| k == v)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| v.clone())
    }
}

/// Derived notation, expanded at construction time.
pub mod sugar {
    use super::*;

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bottom)
    }

    /// `∃!a. φ` as `∃a. φ ∧ ∀b. φ[a:=b] → b = a`, with `b` fresh.
    pub fn exists_unique(a: &Var, phi: Formula) -> Formula {
        let mut avoid = phi.free_vars();
        avoid.insert(a.clone());
        let b = fresh_var(&a.primed(), &avoid);
        let other = phi.subst1(a, &Term::Var(b.clone()));
        Formula::Exists(
            a.clone(),
            Box::new(Formula::and(
                phi,
                Formula::Forall(
                    b.clone(),
                    Box::new(Formula::imp(other, Formula::Eq(Term::Var(b), Term::Var(a.clone())))),
                ),
            )),
        )
    }

    /// Recognize the shape produced by [`exists_unique`].
    pub fn match_exists_unique(f: &Formula) -> Option<(&Var, &Formula)> {
        let Formula::Exists(a, body) = f else { return None };
        let Formula::And(phi, rest) = body.as_ref() else { return None };
        let Formula::Forall(b, imp) = rest.as_ref() else { return None };
        let Formula::Imp(other, eq) = imp.as_ref() else { return None };
        let Formula::Eq(Term::Var(l), Term::Var(r)) = eq.as_ref() else { return None };
        if l != b || r != a || b == a || phi.free_vars().contains(b) {
            return None;
        }
        if !phi.subst1(a, &Term::Var(b.clone())).alpha_eq(other) {
            return None;
        }
        Some((a, phi))
    }

    /// `{a} = {a, a}`.
    pub fn singleton(a: Term) -> Term {
        Term::pair(a.clone(), a)
    }

    /// Successor `S(t) = ⋃{t, {t, t}}`.
    pub fn succ(t: Term) -> Term {
        Term::union(Term::pair(t.clone(), singleton(t)))
    }

    pub fn match_succ(t: &Term) -> Option<&Term> {
        let Term::Union(p) = t else { return None };
        let Term::Pair(a, s) = p.as_ref() else { return None };
        let Term::Pair(b, c) = s.as_ref() else { return None };
        if a == b && b == c {
            Some(a)
        } else {
            None
        }
    }

    /// Numeral `n̄ = S^n(∅)`.
    pub fn numeral(n: u32) -> Term {
        (0..n).fold(Term::Empty, |t, _| succ(t))
    }

    pub fn match_numeral(t: &Term) -> Option<u32> {
        let mut n = 0;
        let mut cur = t;
        loop {
            match cur {
                Term::Empty => return Some(n),
                _ => {
                    cur = match_succ(cur)?;
                    n += 1;
                }
            }
        }
    }

    /// Kuratowski ordered pair `(x, y) = {{x, x}, {x, y}}`.
    pub fn ordered_pair(x: Term, y: Term) -> Term {
        Term::pair(singleton(x.clone()), Term::pair(x, y))
    }
}
