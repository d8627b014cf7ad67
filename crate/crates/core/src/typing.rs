//! Bidirectional checker for `Γ ⊢ M : φ`, canonical forms and weakening.

use std::collections::BTreeSet;
use std::fmt;

use crate::axioms::{ind_conclusion, ind_premise, phi_a, rep_atom, AxiomError, AxiomId};
use crate::proof::{PVar, Proof};
use crate::syntax::{fresh_var, Formula, Term, Var};

/// Ordered hypotheses; lookup takes the rightmost binding.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Context {
    entries: Vec<(PVar, Formula)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn with(mut self, x: &str, phi: Formula) -> Context {
        self.entries.push((PVar::new(x), phi));
        self
    }

    pub fn push(&mut self, x: PVar, phi: Formula) {
        self.entries.push((x, phi));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn lookup(&self, x: &PVar) -> Option<&Formula> {
        self.entries.iter().rev().find(|(y, _)| y == x).map(|(_, f)| f)
    }

    pub fn contains(&self, x: &PVar) -> bool {
        self.entries.iter().any(|(y, _)| y == x)
    }

    pub fn free_vars_f(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for (_, f) in &self.entries {
            s.extend(f.free_vars());
        }
        s
    }

    pub fn entries(&self) -> &[(PVar, Formula)] {
        &self.entries
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    UnboundVar,
    Mismatch,
    NotAFunction,
    NotAConjunction,
    NotADisjunction,
    NotUniversal,
    NotExistential,
    SideCondition,
    AxiomShape,
    ArityMismatch,
    /// An introduction form without annotation was met in synthesis position.
    NeedsAnnotation,
    /// Canonical-forms classification met a value that contradicts its type.
    Inconsistent,
}

/// A type error with the child-index path from the root to the offending subterm.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Vec<u8>,
    pub expected: Option<Formula>,
    pub found: Option<Formula>,
    pub message: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at /{}", self.kind, path_string(&self.path))?;
        if !self.message.is_empty() {
            write!(f, ": {}", self.message)?;
        }
        if let Some(e) = &self.expected {
            write!(f, "\n  expected: {}", crate::frontend::print_formula(e))?;
        }
        if let Some(x) = &self.found {
            write!(f, "\n  found:    {}", crate::frontend::print_formula(x))?;
        }
        Ok(())
    }
}

impl std::error::Error for TypeError {}

pub fn path_string(path: &[u8]) -> String {
    path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("/")
}

type TResult<T> = Result<T, TypeError>;

/// Axiom mode of the checker.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Standard,
    Nwf,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Checker {
    pub mode: Mode,
}

pub fn infer(ctx: &Context, m: &Proof) -> TResult<Formula> {
    Checker::default().infer(ctx, m)
}

pub fn check(ctx: &Context, m: &Proof, phi: &Formula) -> TResult<()> {
    Checker::default().check(ctx, m, phi)
}

struct Walk<'a> {
    checker: &'a Checker,
    ctx: Context,
    path: Vec<u8>,
}

impl Checker {
    pub fn new(mode: Mode) -> Checker {
        Checker { mode }
    }

    pub fn infer(&self, ctx: &Context, m: &Proof) -> TResult<Formula> {
        Walk {
            checker: self,
            ctx: ctx.clone(),
            path: Vec::new(),
        }
        .infer(m)
    }

    pub fn check(&self, ctx: &Context, m: &Proof, phi: &Formula) -> TResult<()> {
        Walk {
            checker: self,
            ctx: ctx.clone(),
            path: Vec::new(),
        }
        .check(m, phi)
    }
}

impl Walk<'_> {
    fn err(&self, kind: TypeErrorKind, msg: impl Into<String>) -> TypeError {
        TypeError {
            kind,
            path: self.path.clone(),
            expected: None,
            found: None,
            message: msg.into(),
        }
    }

    fn err_ef(
        &self,
        kind: TypeErrorKind,
        expected: Option<&Formula>,
        found: Option<&Formula>,
        msg: impl Into<String>,
    ) -> TypeError {
        TypeError {
            kind,
            path: self.path.clone(),
            expected: expected.cloned(),
            found: found.cloned(),
            message: msg.into(),
        }
    }

    fn axiom_err(&self, e: AxiomError) -> TypeError {
        let kind = match e {
            AxiomError::Arity { .. } => TypeErrorKind::ArityMismatch,
            _ => TypeErrorKind::AxiomShape,
        };
        self.err(kind, e.to_string())
    }

    fn at<T>(&mut self, i: u8, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn under<T>(&mut self, x: &PVar, phi: &Formula, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        self.ctx.push(x.clone(), phi.clone());
        let r = f(self);
        self.ctx.pop();
        r
    }

    fn check_ax(&self, ax: &AxiomId) -> TResult<()> {
        if ax.is_nwf() && self.checker.mode != Mode::Nwf {
            return Err(self.err(TypeErrorKind::AxiomShape, "non-well-founded axiom outside nwf mode"));
        }
        if matches!(ax, AxiomId::Ind(_)) {
            return Err(self.err(TypeErrorKind::AxiomShape, "induction has no Rep/Prop constructors"));
        }
        Ok(())
    }

    fn fresh_for_ctx(&self, a: &Var, extra: Option<&Formula>) -> TResult<()> {
        if self.ctx.free_vars_f().contains(a) {
            return Err(self.err(
                TypeErrorKind::SideCondition,
                format!("variable `{a}` is free in the context"),
            ));
        }
        if let Some(f) = extra {
            if f.free_vars().contains(a) {
                return Err(self.err_ef(
                    TypeErrorKind::SideCondition,
                    None,
                    Some(f),
                    format!("variable `{a}` is free in the result type"),
                ));
            }
        }
        Ok(())
    }

    /// A replacement for binder `a` when it clashes with the context or one of
    /// `also`; binders are taken up to renaming.
    fn rename_binder(&self, a: &Var, body: &Proof, also: &[&Formula]) -> Option<Var> {
        let mut avoid = self.ctx.free_vars_f();
        let clash = avoid.contains(a) || also.iter().any(|f| f.free_vars().contains(a));
        if !clash {
            return None;
        }
        avoid.extend(body.free_vars().1);
        for f in also {
            avoid.extend(f.free_vars());
        }
        avoid.insert(a.clone());
        Some(fresh_var(a, &avoid))
    }

    fn infer(&mut self, m: &Proof) -> TResult<Formula> {
        use TypeErrorKind::*;
        match m {
            Proof::Var(x) => self
                .ctx
                .lookup(x)
                .cloned()
                .ok_or_else(|| self.err(UnboundVar, format!("unbound proof variable `{x}`"))),
            Proof::App(f, n) => {
                let tf = self.at(0, |w| w.infer(f))?;
                match tf {
                    Formula::Imp(a, b) => {
                        self.at(1, |w| w.check(n, &a))?;
                        Ok(*b)
                    }
                    other => Err(self.err_ef(NotAFunction, None, Some(&other), "applied proof is not an implication")),
                }
            }
            Proof::LamP(x, ty, body) => {
                let tb = self.under(x, ty, |w| w.at(0, |w| w.infer(body)))?;
                Ok(Formula::imp(ty.clone(), tb))
            }
            Proof::LamF(a, body) => {
                if let Some(a2) = self.rename_binder(a, body, &[]) {
                    let renamed = body.subst_term(a, &Term::Var(a2.clone()));
                    let tb = self.at(0, |w| w.infer(&renamed))?;
                    return Ok(Formula::Forall(a2, Box::new(tb)));
                }
                let tb = self.at(0, |w| w.infer(body))?;
                Ok(Formula::Forall(a.clone(), Box::new(tb)))
            }
            Proof::AppT(f, t) => {
                let tf = self.at(0, |w| w.infer(f))?;
                match tf {
                    Formula::Forall(a, body) => Ok(body.subst1(&a, t)),
                    other => Err(self.err_ef(NotUniversal, None, Some(&other), "term applied to a non-universal proof")),
                }
            }
            Proof::Pair(l, r) => {
                let tl = self.at(0, |w| w.infer(l))?;
                let tr = self.at(1, |w| w.infer(r))?;
                Ok(Formula::and(tl, tr))
            }
            Proof::Fst(p) | Proof::Snd(p) => {
                let tp = self.at(0, |w| w.infer(p))?;
                match tp {
                    Formula::And(a, b) => Ok(if matches!(m, Proof::Fst(_)) { *a } else { *b }),
                    other => Err(self.err_ef(NotAConjunction, None, Some(&other), "projection from a non-conjunction")),
                }
            }
            Proof::Inl(_) | Proof::Inr(_) | Proof::ExIntro(..) | Proof::Magic(_) => Err(self.err(
                NeedsAnnotation,
                "introduction form needs an expected type (use it where the type is known)",
            )),
            Proof::Case {
                scrut,
                lvar,
                lty,
                lbody,
                rvar,
                rty,
                rbody,
            } => {
                let disj = Formula::or(lty.clone(), rty.clone());
                self.at(0, |w| w.check(scrut, &disj))?;
                let tl = self.under(lvar, lty, |w| w.at(1, |w| w.infer(lbody)))?;
                self.under(rvar, rty, |w| w.at(2, |w| w.check(rbody, &tl)))?;
                Ok(tl)
            }
            Proof::Let {
                a,
                x,
                ty,
                bound,
                body,
            } => {
                self.check_let_bound(a, ty, bound)?;
                let (a, ty, body) = match self.rename_binder(a, body, &[]) {
                    Some(a2) => {
                        let v = Term::Var(a2.clone());
                        (a2, ty.subst1(a, &v), body.subst_term(a, &v))
                    }
                    None => (a.clone(), ty.clone(), (**body).clone()),
                };
                let tb = self.under(x, &ty, |w| w.at(1, |w| w.infer(&body)))?;
                self.fresh_for_ctx(&a, Some(&tb))?;
                Ok(tb)
            }
            Proof::Ind {
                schema,
                premise,
                args,
            } => {
                if schema.binders.len() != 1 {
                    return Err(self.err(AxiomShape, "induction schema needs exactly one bound variable"));
                }
                if args.len() != schema.params.len() {
                    return Err(self.err(
                        ArityMismatch,
                        format!("induction schema has {} parameter(s), got {}", schema.params.len(), args.len()),
                    ));
                }
                let prem = ind_premise(schema, args);
                self.at(0, |w| w.check(premise, &prem))?;
                Ok(ind_conclusion(schema, args))
            }
            Proof::AxRep { ax, t, args, body } => {
                self.check_ax(ax)?;
                let inner = phi_a(ax, t, args).map_err(|e| self.axiom_err(e))?;
                self.at(0, |w| w.check(body, &inner))?;
                rep_atom(ax, t, args).map_err(|e| self.axiom_err(e))
            }
            Proof::AxProp { ax, t, args, body } => {
                self.check_ax(ax)?;
                let atom = rep_atom(ax, t, args).map_err(|e| self.axiom_err(e))?;
                self.at(0, |w| w.check(body, &atom))?;
                phi_a(ax, t, args).map_err(|e| self.axiom_err(e))
            }
        }
    }

    fn check_let_bound(&mut self, a: &Var, ty: &Formula, bound: &Proof) -> TResult<()> {
        let declared = Formula::Exists(a.clone(), Box::new(ty.clone()));
        if !synthesizes(bound) {
            // A witness pair (or magic) left in place by reduction.
            return self.at(0, |w| w.check(bound, &declared));
        }
        let tb = self.at(0, |w| w.infer(bound))?;
        match &tb {
            Formula::Exists(..) => {
                if tb.alpha_eq(&declared) {
                    Ok(())
                } else {
                    Err(self.err_ef(
                        TypeErrorKind::Mismatch,
                        Some(&declared),
                        Some(&tb),
                        "let annotation disagrees with the existential",
                    ))
                }
            }
            other => Err(self.err_ef(
                TypeErrorKind::NotExistential,
                Some(&declared),
                Some(other),
                "let-bound proof is not an existential",
            )),
        }
    }

    fn check(&mut self, m: &Proof, phi: &Formula) -> TResult<()> {
        use TypeErrorKind::*;
        match (m, phi) {
            (Proof::Inl(p), Formula::Or(a, _)) => self.at(0, |w| w.check(p, a)),
            (Proof::Inr(p), Formula::Or(_, b)) => self.at(0, |w| w.check(p, b)),
            (Proof::Inl(_) | Proof::Inr(_), _) => {
                Err(self.err_ef(NotADisjunction, Some(phi), None, "injection checked against a non-disjunction"))
            }
            (Proof::ExIntro(t, p), Formula::Exists(a, body)) => {
                let inst = body.subst1(a, t);
                self.at(0, |w| w.check(p, &inst))
            }
            (Proof::ExIntro(..), _) => {
                Err(self.err_ef(NotExistential, Some(phi), None, "witness pair checked against a non-existential"))
            }
            (Proof::Magic(p), _) => self.at(0, |w| w.check(p, &Formula::Bottom)),
            (Proof::LamP(x, ty, body), Formula::Imp(a, b)) => {
                if !ty.alpha_eq(a) {
                    return Err(self.err_ef(Mismatch, Some(a), Some(ty), "lambda domain annotation"));
                }
                self.under(x, ty, |w| w.at(0, |w| w.check(body, b)))
            }
            (Proof::LamP(..), _) => Err(self.err_ef(NotAFunction, Some(phi), None, "lambda checked against a non-implication")),
            (Proof::LamF(a, body), Formula::Forall(b, psi)) => {
                if let Some(a2) = self.rename_binder(a, body, &[phi]) {
                    let v = Term::Var(a2);
                    let renamed = body.subst_term(a, &v);
                    return self.at(0, |w| w.check(&renamed, &psi.subst1(b, &v)));
                }
                let inst = psi.subst1(b, &Term::Var(a.clone()));
                self.at(0, |w| w.check(body, &inst))
            }
            (Proof::LamF(..), _) => Err(self.err_ef(NotUniversal, Some(phi), None, "first-order lambda checked against a non-universal")),
            (Proof::Pair(l, r), Formula::And(a, b)) => {
                self.at(0, |w| w.check(l, a))?;
                self.at(1, |w| w.check(r, b))
            }
            (Proof::Pair(..), _) => Err(self.err_ef(NotAConjunction, Some(phi), None, "pair checked against a non-conjunction")),
            (
                Proof::Case {
                    scrut,
                    lvar,
                    lty,
                    lbody,
                    rvar,
                    rty,
                    rbody,
                },
                _,
            ) => {
                let disj = Formula::or(lty.clone(), rty.clone());
                self.at(0, |w| w.check(scrut, &disj))?;
                self.under(lvar, lty, |w| w.at(1, |w| w.check(lbody, phi)))?;
                self.under(rvar, rty, |w| w.at(2, |w| w.check(rbody, phi)))
            }
            (
                Proof::Let {
                    a,
                    x,
                    ty,
                    bound,
                    body,
                },
                _,
            ) => {
                self.check_let_bound(a, ty, bound)?;
                match self.rename_binder(a, body, &[phi]) {
                    Some(a2) => {
                        let v = Term::Var(a2);
                        let (ty, body) = (ty.subst1(a, &v), body.subst_term(a, &v));
                        self.under(x, &ty, |w| w.at(1, |w| w.check(&body, phi)))
                    }
                    None => self.under(x, ty, |w| w.at(1, |w| w.check(body, phi))),
                }
            }
            (Proof::AxRep { ax, t, args, body }, _) => {
                self.check_ax(ax)?;
                let atom = rep_atom(ax, t, args).map_err(|e| self.axiom_err(e))?;
                if !atom.alpha_eq(phi) {
                    return Err(self.err_ef(Mismatch, Some(phi), Some(&atom), "axiom introduction"));
                }
                let inner = phi_a(ax, t, args).map_err(|e| self.axiom_err(e))?;
                self.at(0, |w| w.check(body, &inner))
            }
            (Proof::App(f, n), _) => {
                // A β-redex whose head cannot synthesize is checked as the redex would be.
                if let Proof::LamP(x, ty, body) = f.as_ref() {
                    if !synthesizes(f) {
                        self.at(1, |w| w.check(n, ty))?;
                        return self.at(0, |w| w.under(x, ty, |w| w.at(0, |w| w.check(body, phi))));
                    }
                }
                self.check_by_infer(m, phi)
            }
            _ => self.check_by_infer(m, phi),
        }
    }

    fn check_by_infer(&mut self, m: &Proof, phi: &Formula) -> TResult<()> {
        let got = self.infer(m)?;
        if got.alpha_eq(phi) {
            Ok(())
        } else {
            Err(self.err_ef(TypeErrorKind::Mismatch, Some(phi), Some(&got), "synthesized type differs"))
        }
    }
}

/// Whether `infer` can get past the shape of `m` without an expected type.
/// Mirrors the synthesis rules; deciding this up front keeps nested
/// check-mode fallbacks linear.
pub fn synthesizes(m: &Proof) -> bool {
    match m {
        Proof::Var(_) | Proof::Ind { .. } | Proof::AxRep { .. } | Proof::AxProp { .. } => true,
        Proof::Inl(_) | Proof::Inr(_) | Proof::ExIntro(..) | Proof::Magic(_) => false,
        Proof::App(f, _) | Proof::AppT(f, _) | Proof::Fst(f) | Proof::Snd(f) => synthesizes(f),
        Proof::LamP(_, _, b) | Proof::LamF(_, b) => synthesizes(b),
        Proof::Pair(l, r) => synthesizes(l) && synthesizes(r),
        Proof::Case { lbody, .. } => synthesizes(lbody),
        Proof::Let { body, .. } => synthesizes(body),
    }
}

/// Clause of the Canonical Forms classification for a closed value.
#[derive(Clone, Debug, PartialEq)]
pub enum CanonicalForm {
    /// Atomic type: `axRep(t, ū, N)` with `N : φ_A(t, ū)`.
    Rep {
        ax: AxiomId,
        t: Term,
        args: Vec<Term>,
        inner: Proof,
        inner_ty: Formula,
    },
    Left(Proof, Formula),
    Right(Proof, Formula),
    Pair(Proof, Proof),
    Lam(PVar, Formula, Proof),
    LamF(Var, Proof),
    Witness(Term, Proof, Formula),
}

pub fn canonical_form(phi: &Formula, v: &Proof) -> TResult<CanonicalForm> {
    canonical_form_in(Mode::Standard, phi, v)
}

pub fn canonical_form_in(mode: Mode, phi: &Formula, v: &Proof) -> TResult<CanonicalForm> {
    let checker = Checker::new(mode);
    checker.check(&Context::new(), v, phi)?;
    let bad = |msg: &str| TypeError {
        kind: TypeErrorKind::Inconsistent,
        path: vec![],
        expected: Some(phi.clone()),
        found: None,
        message: msg.to_string(),
    };
    if !v.is_value() {
        return Err(bad("not a value"));
    }
    match (phi, v) {
        (Formula::Bottom, _) => Err(bad("a closed value inhabits bottom")),
        (Formula::MemI(..) | Formula::Mem(..) | Formula::Eq(..), Proof::AxRep { ax, t, args, body }) => {
            let inner_ty = phi_a(ax, t, args).map_err(|e| bad(&e.to_string()))?;
            Ok(CanonicalForm::Rep {
                ax: ax.clone(),
                t: t.clone(),
                args: args.clone(),
                inner: (**body).clone(),
                inner_ty,
            })
        }
        (Formula::Or(a, _), Proof::Inl(n)) => Ok(CanonicalForm::Left((**n).clone(), (**a).clone())),
        (Formula::Or(_, b), Proof::Inr(n)) => Ok(CanonicalForm::Right((**n).clone(), (**b).clone())),
        (Formula::And(..), Proof::Pair(l, r)) => Ok(CanonicalForm::Pair((**l).clone(), (**r).clone())),
        (Formula::Imp(..), Proof::LamP(x, ty, b)) => Ok(CanonicalForm::Lam(x.clone(), ty.clone(), (**b).clone())),
        (Formula::Forall(..), Proof::LamF(a, b)) => Ok(CanonicalForm::LamF(a.clone(), (**b).clone())),
        (Formula::Exists(a, body), Proof::ExIntro(t, n)) => {
            Ok(CanonicalForm::Witness(t.clone(), (**n).clone(), body.subst1(a, t)))
        }
        _ => Err(bad("value shape contradicts its type")),
    }
}

/// Variables occurring anywhere in a proof (free or bound), both namespaces.
pub fn occurring_vars(m: &Proof) -> (BTreeSet<PVar>, BTreeSet<Var>) {
    fn fm(phi: &Formula, f: &mut BTreeSet<Var>) {
        // Bound formula variables are irrelevant to proof-level freshness.
        f.extend(phi.free_vars());
    }
    fn go(m: &Proof, p: &mut BTreeSet<PVar>, f: &mut BTreeSet<Var>) {
        match m {
            Proof::Var(x) => {
                p.insert(x.clone());
            }
            Proof::App(a, b) | Proof::Pair(a, b) => {
                go(a, p, f);
                go(b, p, f);
            }
            Proof::LamP(x, ty, b) => {
                p.insert(x.clone());
                fm(ty, f);
                go(b, p, f);
            }
            Proof::LamF(a, b) => {
                f.insert(a.clone());
                go(b, p, f);
            }
            Proof::AppT(b, t) | Proof::ExIntro(t, b) => {
                f.extend(t.free_vars());
                go(b, p, f);
            }
            Proof::Fst(b) | Proof::Snd(b) | Proof::Inl(b) | Proof::Inr(b) | Proof::Magic(b) => go(b, p, f),
            Proof::Case {
                scrut,
                lvar,
                lty,
                lbody,
                rvar,
                rty,
                rbody,
            } => {
                go(scrut, p, f);
                p.insert(lvar.clone());
                p.insert(rvar.clone());
                fm(lty, f);
                fm(rty, f);
                go(lbody, p, f);
                go(rbody, p, f);
            }
            Proof::Let {
                a,
                x,
                ty,
                bound,
                body,
            } => {
                f.insert(a.clone());
                p.insert(x.clone());
                fm(ty, f);
                go(bound, p, f);
                go(body, p, f);
            }
            Proof::Ind { premise, args, .. } => {
                for t in args {
                    f.extend(t.free_vars());
                }
                go(premise, p, f);
            }
            Proof::AxRep { t, args, body, .. } | Proof::AxProp { t, args, body, .. } => {
                f.extend(t.free_vars());
                for u in args {
                    f.extend(u.free_vars());
                }
                go(body, p, f);
            }
        }
    }
    let mut p = BTreeSet::new();
    let mut f = BTreeSet::new();
    go(m, &mut p, &mut f);
    (p, f)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeakenError {
    #[error("hypothesis `{0}` is not fresh for the derivation")]
    NotFresh(String),
}

/// Weakening: adding a fresh hypothesis does not change checkability.
pub fn weaken_ok(
    ctx: &Context,
    extra: (&PVar, &Formula),
    m: &Proof,
    phi: &Formula,
) -> Result<bool, WeakenError> {
    let (x, psi) = extra;
    let (mp, mf) = occurring_vars(m);
    if ctx.contains(x) || mp.contains(x) {
        return Err(WeakenError::NotFresh(x.name().to_string()));
    }
    let mut used = mf;
    used.extend(ctx.free_vars_f());
    used.extend(phi.free_vars());
    if let Some(v) = psi.free_vars().iter().find(|v| used.contains(*v)) {
        return Err(WeakenError::NotFresh(v.name().to_string()));
    }
    let base = check(ctx, m, phi).is_ok();
    let mut bigger = ctx.clone();
    bigger.push(x.clone(), psi.clone());
    let weak = check(&bigger, m, phi).is_ok();
    Ok(base == weak)
}
