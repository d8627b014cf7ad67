//! Axiom catalogue: set terms `t_A(ā)` and defining formulas `φ_A(c, ā)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::sugar::{exists_unique, iff, ordered_pair, succ};
use crate::syntax::{fresh_var, Formula, NwfConst, Schema, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AxiomId {
    Empty,
    Pair,
    Inf,
    Union,
    Power,
    Sep(Arc<Schema>),
    Repl(Arc<Schema>),
    Inac(u32),
    In,
    Eq,
    Ind(Arc<Schema>),
    /// `(NWF)`: C is its own only member.
    Nwf,
    /// `(SEP0)`: D separates from C the elements whose self-membership lands in C.
    Sep0,
}

/// Axiom identity without schema data; what survives erasure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxKind {
    Empty,
    Pair,
    Inf,
    Union,
    Power,
    Sep,
    Repl,
    Inac(u32),
    In,
    Eq,
    Nwf,
    Sep0,
}

impl AxKind {
    /// Surface prefix of the Rep/Prop constructors.
    pub fn prefix(&self) -> String {
        match self {
            AxKind::Empty => "empty".into(),
            AxKind::Pair => "pair".into(),
            AxKind::Inf => "inf".into(),
            AxKind::Union => "union".into(),
            AxKind::Power => "power".into(),
            AxKind::Sep => "sep".into(),
            AxKind::Repl => "repl".into(),
            AxKind::Inac(i) => format!("inac{i}"),
            AxKind::In => "in".into(),
            AxKind::Eq => "eq".into(),
            AxKind::Nwf => "n".into(),
            AxKind::Sep0 => "s".into(),
        }
    }
}

impl fmt::Display for AxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.prefix())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("axiom {ax} expects {expected} argument(s), got {found}")]
    Arity {
        ax: String,
        expected: usize,
        found: usize,
    },
    #[error("axiom {0} has no term form")]
    NoTermForm(String),
    #[error("inaccessible level must be at least 1")]
    InacLevel,
    #[error("axiom {0} has no Rep/Prop constructors")]
    NotRepProp(String),
}

impl AxiomId {
    /// Number of term arguments `ā` (the element `c` is not counted).
    pub fn arity(&self) -> usize {
        match self {
            AxiomId::Empty | AxiomId::Inf | AxiomId::Inac(_) | AxiomId::Nwf | AxiomId::Sep0 => 0,
            AxiomId::Pair => 2,
            AxiomId::Union | AxiomId::Power | AxiomId::In | AxiomId::Eq => 1,
            AxiomId::Sep(s) | AxiomId::Repl(s) => 1 + s.params.len(),
            AxiomId::Ind(s) => s.params.len(),
        }
    }

    pub fn kind(&self) -> Option<AxKind> {
        Some(match self {
            AxiomId::Empty => AxKind::Empty,
            AxiomId::Pair => AxKind::Pair,
            AxiomId::Inf => AxKind::Inf,
            AxiomId::Union => AxKind::Union,
            AxiomId::Power => AxKind::Power,
            AxiomId::Sep(_) => AxKind::Sep,
            AxiomId::Repl(_) => AxKind::Repl,
            AxiomId::Inac(i) => AxKind::Inac(*i),
            AxiomId::In => AxKind::In,
            AxiomId::Eq => AxKind::Eq,
            AxiomId::Nwf => AxKind::Nwf,
            AxiomId::Sep0 => AxKind::Sep0,
            AxiomId::Ind(_) => return None,
        })
    }

    pub fn is_nwf(&self) -> bool {
        matches!(self, AxiomId::Nwf | AxiomId::Sep0)
    }

    pub fn name(&self) -> String {
        match self {
            AxiomId::Ind(_) => "ind".into(),
            other => other.kind().expect("has kind").prefix(),
        }
    }

    fn check_arity(&self, args: &[Term]) -> Result<(), AxiomError> {
        if let AxiomId::Inac(0) = self {
            return Err(AxiomError::InacLevel);
        }
        if args.len() != self.arity() {
            return Err(AxiomError::Arity {
                ax: self.name(),
                expected: self.arity(),
                found: args.len(),
            });
        }
        Ok(())
    }

    /// α-equality of axiom identities, comparing embedded schemas up to α.
    pub fn alpha_eq(&self, other: &AxiomId) -> bool {
        match (self, other) {
            (AxiomId::Sep(a), AxiomId::Sep(b))
            | (AxiomId::Repl(a), AxiomId::Repl(b))
            | (AxiomId::Ind(a), AxiomId::Ind(b)) => schema_alpha_eq(a, b),
            _ => self == other,
        }
    }
}

pub(crate) fn schema_alpha_eq(a: &Schema, b: &Schema) -> bool {
    if a.binders.len() != b.binders.len() || a.params.len() != b.params.len() {
        return false;
    }
    // Compare via the sep-term wrapper so one routine owns schema α-equality.
    let wrap = |s: &Schema| {
        let args = s.params.iter().map(|_| Term::Empty).collect();
        Term::Sep(Arc::new(s.clone()), Box::new(Term::Empty), args)
    };
    wrap(a).alpha_eq(&wrap(b))
}

fn avoid_of(c: &Term, args: &[Term]) -> BTreeSet<Var> {
    let mut s = c.free_vars();
    for a in args {
        s.extend(a.free_vars());
    }
    s
}

fn fresh(base: &str, avoid: &mut BTreeSet<Var>) -> Var {
    let v = fresh_var(&Var::new(base), avoid);
    avoid.insert(v.clone());
    v
}

fn mem(a: &Term, b: &Term) -> Formula {
    Formula::Mem(a.clone(), b.clone())
}

fn eq(a: &Term, b: &Term) -> Formula {
    Formula::Eq(a.clone(), b.clone())
}

fn tv(v: &Var) -> Term {
    Term::Var(v.clone())
}

/// The set term `t_A(args)`.
pub fn term_head(ax: &AxiomId, args: &[Term]) -> Result<Term, AxiomError> {
    if matches!(ax, AxiomId::In | AxiomId::Eq | AxiomId::Ind(_)) {
        return Err(AxiomError::NoTermForm(ax.name()));
    }
    ax.check_arity(args)?;
    Ok(match ax {
        AxiomId::Empty => Term::Empty,
        AxiomId::Pair => Term::pair(args[0].clone(), args[1].clone()),
        AxiomId::Inf => Term::Omega,
        AxiomId::Union => Term::union(args[0].clone()),
        AxiomId::Power => Term::power(args[0].clone()),
        AxiomId::Sep(s) => Term::Sep(s.clone(), Box::new(args[0].clone()), args[1..].to_vec()),
        AxiomId::Repl(s) => Term::Repl(s.clone(), Box::new(args[0].clone()), args[1..].to_vec()),
        AxiomId::Inac(i) => Term::Inac(*i),
        AxiomId::Nwf => Term::Const(NwfConst::C),
        AxiomId::Sep0 => Term::Const(NwfConst::D),
        AxiomId::In | AxiomId::Eq | AxiomId::Ind(_) => unreachable!(),
    })
}

/// `V_i`, with `V_0` standing for ω.
pub fn inac_level(i: u32) -> Term {
    if i == 0 {
        Term::Omega
    } else {
        Term::Inac(i)
    }
}

/// "f is a function from a to b": every x ∈ a has exactly one y ∈ b with
/// (x, y) ∈ f, and every z ∈ f is some (x, y) with x ∈ a, y ∈ b.
pub fn function_formula(f: &Term, a: &Term, b: &Term) -> Formula {
    let mut avoid = avoid_of(f, &[a.clone(), b.clone()]);
    let x = fresh("x", &mut avoid);
    let y = fresh("y", &mut avoid);
    let z = fresh("z", &mut avoid);
    let total = Formula::Forall(
        x.clone(),
        Box::new(Formula::imp(
            mem(&tv(&x), a),
            exists_unique(
                &y,
                Formula::and(mem(&tv(&y), b), mem(&ordered_pair(tv(&x), tv(&y)), f)),
            ),
        )),
    );
    let graph = Formula::Forall(
        z.clone(),
        Box::new(Formula::imp(
            mem(&tv(&z), f),
            Formula::Exists(
                x.clone(),
                Box::new(Formula::and(
                    mem(&tv(&x), a),
                    Formula::Exists(
                        y.clone(),
                        Box::new(Formula::and(
                            mem(&tv(&y), b),
                            eq(&tv(&z), &ordered_pair(tv(&x), tv(&y))),
                        )),
                    ),
                )),
            ),
        )),
    );
    Formula::and(total, graph)
}

/// Membership conditions for the i-th inaccessible: five-way disjunction.
pub fn inac_phi1(i: u32, c: &Term) -> Result<Formula, AxiomError> {
    if i == 0 {
        return Err(AxiomError::InacLevel);
    }
    let vi = Term::Inac(i);
    let mut avoid = c.free_vars();
    let a = fresh("a", &mut avoid);
    let ta = tv(&a);
    let bounded = |body: Formula| {
        Formula::Exists(a.clone(), Box::new(Formula::and(mem(&ta, &vi), body)))
    };
    let clauses = vec![
        eq(c, &inac_level(i - 1)),
        bounded(mem(c, &ta)),
        bounded(eq(c, &Term::union(ta.clone()))),
        bounded(eq(c, &Term::power(ta.clone()))),
        bounded(function_formula(c, &ta, &vi)),
    ];
    Ok(fold_right(clauses, Formula::or))
}

/// Closure conditions "d is inaccessible at level i": five-way conjunction.
pub fn inac_phi2(i: u32, d: &Term) -> Result<Formula, AxiomError> {
    if i == 0 {
        return Err(AxiomError::InacLevel);
    }
    let mut avoid = d.free_vars();
    let e = fresh("e", &mut avoid);
    let f = fresh("f", &mut avoid);
    let (te, tf) = (tv(&e), tv(&f));
    let in_d = |t: &Term| mem(t, d);
    let all_e = |body: Formula| Formula::Forall(e.clone(), Box::new(Formula::imp(in_d(&te), body)));
    let clauses = vec![
        in_d(&inac_level(i - 1)),
        Formula::Forall(
            e.clone(),
            Box::new(Formula::Forall(
                f.clone(),
                Box::new(Formula::imp(Formula::and(in_d(&te), mem(&tf, &te)), in_d(&tf))),
            )),
        ),
        all_e(in_d(&Term::union(te.clone()))),
        all_e(in_d(&Term::power(te.clone()))),
        all_e(Formula::Forall(
            f.clone(),
            Box::new(Formula::imp(function_formula(&tf, &te, d), in_d(&tf))),
        )),
    ];
    Ok(fold_right(clauses, Formula::and))
}

fn fold_right(mut xs: Vec<Formula>, op: fn(Formula, Formula) -> Formula) -> Formula {
    let mut acc = xs.pop().expect("non-empty");
    while let Some(x) = xs.pop() {
        acc = op(x, acc);
    }
    acc
}

/// Defining formula `φ_A(c, args)`. For In/Eq these are the right-hand sides of
/// (IN)/(EQ) with `args = [u]`; for Ind it is the induction-step premise at `c`.
pub fn phi_a(ax: &AxiomId, c: &Term, args: &[Term]) -> Result<Formula, AxiomError> {
    ax.check_arity(args)?;
    let mut avoid = avoid_of(c, args);
    Ok(match ax {
        AxiomId::Empty => Formula::Bottom,
        AxiomId::Pair => Formula::or(eq(c, &args[0]), eq(c, &args[1])),
        AxiomId::Inf => {
            let b = fresh("b", &mut avoid);
            Formula::or(
                eq(c, &Term::Empty),
                Formula::Exists(
                    b.clone(),
                    Box::new(Formula::and(mem(&tv(&b), &Term::Omega), eq(c, &succ(tv(&b))))),
                ),
            )
        }
        AxiomId::Union => {
            let b = fresh("b", &mut avoid);
            Formula::Exists(
                b.clone(),
                Box::new(Formula::and(mem(&tv(&b), &args[0]), mem(c, &tv(&b)))),
            )
        }
        AxiomId::Power => {
            let b = fresh("b", &mut avoid);
            Formula::Forall(
                b.clone(),
                Box::new(Formula::imp(mem(&tv(&b), c), mem(&tv(&b), &args[0]))),
            )
        }
        AxiomId::Sep(s) => Formula::and(mem(c, &args[0]), s.instantiate(std::slice::from_ref(c), &args[1..])),
        AxiomId::Repl(s) => {
            let params = &args[1..];
            avoid.extend(s.free_vars());
            let x = fresh("x", &mut avoid);
            let y = fresh("y", &mut avoid);
            let total = Formula::Forall(
                x.clone(),
                Box::new(Formula::imp(
                    mem(&tv(&x), &args[0]),
                    exists_unique(&y, s.instantiate(&[tv(&x), tv(&y)], params)),
                )),
            );
            let hit = Formula::Exists(
                x.clone(),
                Box::new(Formula::and(
                    mem(&tv(&x), &args[0]),
                    s.instantiate(&[tv(&x), c.clone()], params),
                )),
            );
            Formula::and(total, hit)
        }
        AxiomId::Inac(i) => {
            let d = fresh("d", &mut avoid);
            Formula::and(
                inac_phi1(*i, c)?,
                Formula::Forall(
                    d.clone(),
                    Box::new(Formula::imp(inac_phi2(*i, &tv(&d))?, mem(c, &tv(&d)))),
                ),
            )
        }
        AxiomId::In => {
            let e = fresh("e", &mut avoid);
            Formula::Exists(
                e.clone(),
                Box::new(Formula::and(Formula::MemI(tv(&e), args[0].clone()), eq(c, &tv(&e)))),
            )
        }
        AxiomId::Eq => {
            let d = fresh("d", &mut avoid);
            let td = tv(&d);
            Formula::Forall(
                d.clone(),
                Box::new(Formula::and(
                    Formula::imp(Formula::MemI(td.clone(), c.clone()), mem(&td, &args[0])),
                    Formula::imp(Formula::MemI(td.clone(), args[0].clone()), mem(&td, c)),
                )),
            )
        }
        AxiomId::Ind(s) => ind_step(s, c, args),
        AxiomId::Nwf => {
            let e = fresh("e", &mut avoid);
            let te = tv(&e);
            let cc = Term::Const(NwfConst::C);
            Formula::Forall(
                e.clone(),
                Box::new(Formula::and(
                    Formula::imp(Formula::MemI(te.clone(), c.clone()), Formula::MemI(te.clone(), cc.clone())),
                    Formula::imp(Formula::MemI(te.clone(), cc), Formula::MemI(te, c.clone())),
                )),
            )
        }
        AxiomId::Sep0 => {
            let cc = Term::Const(NwfConst::C);
            Formula::and(
                Formula::MemI(c.clone(), cc.clone()),
                Formula::imp(Formula::MemI(c.clone(), c.clone()), Formula::MemI(c.clone(), cc)),
            )
        }
    })
}

/// `(∀b. b ∈̄ c → φ(b, args)) → φ(c, args)`.
pub fn ind_step(s: &Schema, c: &Term, args: &[Term]) -> Formula {
    let mut avoid = avoid_of(c, args);
    avoid.extend(s.free_vars());
    let b = fresh("b", &mut avoid);
    Formula::imp(
        Formula::Forall(
            b.clone(),
            Box::new(Formula::imp(
                Formula::MemI(tv(&b), c.clone()),
                s.instantiate(&[tv(&b)], args),
            )),
        ),
        s.instantiate(std::slice::from_ref(c), args),
    )
}

/// Premise checked for `ind_φ(M, t̄)`: `∀c. (∀b. b ∈̄ c → φ(b, t̄)) → φ(c, t̄)`.
pub fn ind_premise(s: &Schema, args: &[Term]) -> Formula {
    let mut avoid = avoid_of(&Term::Empty, args);
    avoid.extend(s.free_vars());
    let c = fresh("c", &mut avoid);
    Formula::Forall(c.clone(), Box::new(ind_step(s, &tv(&c), args)))
}

/// Conclusion of `ind_φ(M, t̄)`: `∀a. φ(a, t̄)`.
pub fn ind_conclusion(s: &Schema, args: &[Term]) -> Formula {
    let mut avoid = avoid_of(&Term::Empty, args);
    avoid.extend(s.free_vars());
    let base = s.binders.first().cloned().unwrap_or_else(|| Var::new("a"));
    let a = fresh_var(&base, &avoid);
    Formula::Forall(a.clone(), Box::new(s.instantiate(&[tv(&a)], args)))
}

/// The atomic formula introduced by `axRep(t, ū, ·)`: `t ∈̄ t_A(ū)`, or `t ∈ u` for
/// In and `t = u` for Eq.
pub fn rep_atom(ax: &AxiomId, t: &Term, args: &[Term]) -> Result<Formula, AxiomError> {
    match ax {
        AxiomId::In => {
            ax.check_arity(args)?;
            Ok(mem(t, &args[0]))
        }
        AxiomId::Eq => {
            ax.check_arity(args)?;
            Ok(eq(t, &args[0]))
        }
        AxiomId::Ind(_) => Err(AxiomError::NotRepProp(ax.name())),
        _ => Ok(Formula::MemI(t.clone(), term_head(ax, args)?)),
    }
}

/// Variable names for the closed statement of a term-form axiom.
fn arg_vars(ax: &AxiomId) -> Vec<Var> {
    match ax {
        AxiomId::Pair => vec![Var::new("a1"), Var::new("a2")],
        AxiomId::Union | AxiomId::Power => vec![Var::new("a")],
        AxiomId::Sep(s) | AxiomId::Repl(s) => {
            let mut avoid: BTreeSet<Var> = s.free_vars();
            avoid.insert(Var::new("c"));
            let mut out = vec![fresh("a", &mut avoid)];
            for p in &s.params {
                out.push(fresh(p.name(), &mut avoid));
            }
            out
        }
        AxiomId::Ind(s) => {
            let mut avoid: BTreeSet<Var> = s.free_vars();
            s.params.iter().map(|p| fresh(p.name(), &mut avoid)).collect()
        }
        _ => vec![],
    }
}

/// Argument variables used by [`axiom_statement`], in quantifier order.
pub fn statement_vars(ax: &AxiomId) -> (Vec<Var>, Var) {
    match ax {
        AxiomId::In | AxiomId::Eq => (vec![Var::new("b")], Var::new("a")),
        _ => (arg_vars(ax), Var::new("c")),
    }
}

/// The closed axiom.
pub fn axiom_statement(ax: &AxiomId) -> Result<Formula, AxiomError> {
    match ax {
        AxiomId::In | AxiomId::Eq => {
            let (a, b) = (Var::new("a"), Var::new("b"));
            let lhs = rep_atom(ax, &tv(&a), &[tv(&b)])?;
            let rhs = phi_a(ax, &tv(&a), &[tv(&b)])?;
            Ok(Formula::forall_many(&[a, b], iff(lhs, rhs)))
        }
        AxiomId::Ind(s) => {
            let vars = arg_vars(ax);
            let args: Vec<Term> = vars.iter().map(tv).collect();
            let body = Formula::imp(ind_premise_named(s, &args), ind_conclusion(s, &args));
            Ok(Formula::forall_many(&vars, body))
        }
        _ => {
            let vars = arg_vars(ax);
            let args: Vec<Term> = vars.iter().map(tv).collect();
            let c = Var::new("c");
            let body = iff(rep_atom(ax, &tv(&c), &args)?, phi_a(ax, &tv(&c), &args)?);
            let mut all = vars;
            all.push(c);
            Ok(Formula::forall_many(&all, body))
        }
    }
}

/// Induction premise quantified over `a` (the paper's naming).
fn ind_premise_named(s: &Schema, args: &[Term]) -> Formula {
    let mut avoid = avoid_of(&Term::Empty, args);
    avoid.extend(s.free_vars());
    let a = fresh("a", &mut avoid);
    Formula::Forall(a.clone(), Box::new(ind_step(s, &tv(&a), args)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn pair_phi() {
        let f = phi_a(&AxiomId::Pair, &v("c"), &[v("a"), v("b")]).unwrap();
        assert_eq!(f, Formula::or(eq(&v("c"), &v("a")), eq(&v("c"), &v("b"))));
    }

    #[test]
    fn empty_phi_is_bottom() {
        assert_eq!(phi_a(&AxiomId::Empty, &v("c"), &[]).unwrap(), Formula::Bottom);
    }

    #[test]
    fn inf_phi() {
        let f = phi_a(&AxiomId::Inf, &v("c"), &[]).unwrap();
        let expect = Formula::or(
            eq(&v("c"), &Term::Empty),
            Formula::exists(
                "b",
                Formula::and(mem(&v("b"), &Term::Omega), eq(&v("c"), &succ(v("b")))),
            ),
        );
        assert!(f.alpha_eq(&expect));
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(phi_a(&AxiomId::Pair, &v("c"), &[v("a")]), Err(AxiomError::Arity { .. })));
        assert!(matches!(term_head(&AxiomId::In, &[]), Err(AxiomError::NoTermForm(_))));
        assert_eq!(term_head(&AxiomId::Inac(3), &[]).unwrap(), Term::Inac(3));
        assert_eq!(
            term_head(&AxiomId::Pair, &[Term::Empty, Term::Omega]).unwrap(),
            Term::pair(Term::Empty, Term::Omega)
        );
    }

    fn disjuncts(f: &Formula) -> Vec<Formula> {
        match f {
            Formula::Or(a, b) => {
                let mut v = vec![(**a).clone()];
                v.extend(disjuncts(b));
                v
            }
            x => vec![x.clone()],
        }
    }

    fn conjuncts(f: &Formula) -> Vec<Formula> {
        match f {
            Formula::And(a, b) => {
                let mut v = vec![(**a).clone()];
                v.extend(conjuncts(b));
                v
            }
            x => vec![x.clone()],
        }
    }

    #[test]
    fn inac_phi1_clauses() {
        let c = v("c");
        let d1 = disjuncts(&inac_phi1(1, &c).unwrap());
        assert_eq!(d1.len(), 5);
        assert_eq!(d1[0], eq(&c, &Term::Omega));
        let d2 = disjuncts(&inac_phi1(2, &c).unwrap());
        assert_eq!(d2[0], eq(&c, &Term::Inac(1)));
        let third = Formula::exists(
            "a",
            Formula::and(mem(&v("a"), &Term::Inac(1)), eq(&c, &Term::union(v("a")))),
        );
        assert!(d1[2].alpha_eq(&third));
        assert!(inac_phi1(0, &c).is_err());
    }

    #[test]
    fn inac_phi2_clauses() {
        let d = v("d");
        let cs = conjuncts(&inac_phi2(1, &d).unwrap());
        assert_eq!(cs.len(), 5);
        assert_eq!(cs[0], mem(&Term::Omega, &d));
        let trans = Formula::forall(
            "e",
            Formula::forall(
                "f",
                Formula::imp(Formula::and(mem(&v("e"), &d), mem(&v("f"), &v("e"))), mem(&v("f"), &d)),
            ),
        );
        assert!(cs[1].alpha_eq(&trans));
        let pow = Formula::forall("e", Formula::imp(mem(&v("e"), &d), mem(&Term::power(v("e")), &d)));
        assert!(cs[3].alpha_eq(&pow));
    }

    #[test]
    fn in_and_eq_statements() {
        let a = v("a");
        let b = v("b");
        let in_rhs = Formula::exists(
            "c",
            Formula::and(Formula::MemI(v("c"), b.clone()), eq(&a, &v("c"))),
        );
        let expect = Formula::forall("a", Formula::forall("b", iff(mem(&a, &b), in_rhs)));
        assert!(axiom_statement(&AxiomId::In).unwrap().alpha_eq(&expect));

        let eq_rhs = Formula::forall(
            "d",
            Formula::and(
                Formula::imp(Formula::MemI(v("d"), a.clone()), mem(&v("d"), &b)),
                Formula::imp(Formula::MemI(v("d"), b.clone()), mem(&v("d"), &a)),
            ),
        );
        let expect = Formula::forall("a", Formula::forall("b", iff(eq(&a, &b), eq_rhs)));
        assert!(axiom_statement(&AxiomId::Eq).unwrap().alpha_eq(&expect));
    }

    #[test]
    fn ind_statement_for_reflexivity() {
        let s = Schema::new(vec![Var::new("a")], vec![], eq(&v("a"), &v("a"))).unwrap();
        let got = axiom_statement(&AxiomId::Ind(Arc::new(s))).unwrap();
        let expect = Formula::imp(
            Formula::forall(
                "a",
                Formula::imp(
                    Formula::forall("b", Formula::imp(Formula::MemI(v("b"), v("a")), eq(&v("b"), &v("b")))),
                    eq(&v("a"), &v("a")),
                ),
            ),
            Formula::forall("a", eq(&v("a"), &v("a"))),
        );
        assert!(got.alpha_eq(&expect));
    }

    #[test]
    fn power_statement() {
        let got = axiom_statement(&AxiomId::Power).unwrap();
        let expect = Formula::forall(
            "a",
            Formula::forall(
                "c",
                iff(
                    Formula::MemI(v("c"), Term::power(v("a"))),
                    Formula::forall("b", Formula::imp(mem(&v("b"), &v("c")), mem(&v("b"), &v("a")))),
                ),
            ),
        );
        assert!(got.alpha_eq(&expect));
    }
}
