//! Proof terms, the value classification, and erasure to untyped terms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::axioms::{AxKind, AxiomId};
use crate::syntax::{fresh_var, Env, Formula, Schema, Subst, Term, Var};

/// A propositional (proof) variable; a namespace separate from [`Var`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PVar(Arc<str>);

impl PVar {
    pub fn new(name: &str) -> PVar {
        PVar(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn primed(&self) -> PVar {
        PVar::new(&format!("{}'", self.0))
    }

    fn canonical(k: usize) -> PVar {
        PVar::new(&format!("#{k}"))
    }
}

impl fmt::Debug for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn fresh_pvar(base: &PVar, avoid: &BTreeSet<PVar>) -> PVar {
    let mut v = base.clone();
    while avoid.contains(&v) {
        v = v.primed();
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Proof {
    Var(PVar),
    App(Box<Proof>, Box<Proof>),
    LamP(PVar, Formula, Box<Proof>),
    LamF(Var, Box<Proof>),
    AppT(Box<Proof>, Term),
    Pair(Box<Proof>, Box<Proof>),
    Fst(Box<Proof>),
    Snd(Box<Proof>),
    Inl(Box<Proof>),
    Inr(Box<Proof>),
    Case {
        scrut: Box<Proof>,
        lvar: PVar,
        lty: Formula,
        lbody: Box<Proof>,
        rvar: PVar,
        rty: Formula,
        rbody: Box<Proof>,
    },
    ExIntro(Term, Box<Proof>),
    Let {
        a: Var,
        x: PVar,
        ty: Formula,
        bound: Box<Proof>,
        body: Box<Proof>,
    },
    Magic(Box<Proof>),
    Ind {
        schema: Arc<Schema>,
        premise: Box<Proof>,
        args: Vec<Term>,
    },
    AxRep {
        ax: AxiomId,
        t: Term,
        args: Vec<Term>,
        body: Box<Proof>,
    },
    AxProp {
        ax: AxiomId,
        t: Term,
        args: Vec<Term>,
        body: Box<Proof>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueTag {
    LamF,
    LamP,
    Inr,
    Inl,
    ExIntro,
    PairP,
    AxRep,
    NotValue,
}

impl ValueTag {
    pub fn is_value(self) -> bool {
        self != ValueTag::NotValue
    }
}

/// Convenience constructors.
impl Proof {
    pub fn var(x: &str) -> Proof {
        Proof::Var(PVar::new(x))
    }

    pub fn app(m: Proof, n: Proof) -> Proof {
        Proof::App(Box::new(m), Box::new(n))
    }

    pub fn lam(x: &str, ty: Formula, body: Proof) -> Proof {
        Proof::LamP(PVar::new(x), ty, Box::new(body))
    }

    pub fn lamf(a: &str, body: Proof) -> Proof {
        Proof::LamF(Var::new(a), Box::new(body))
    }

    pub fn app_t(m: Proof, t: Term) -> Proof {
        Proof::AppT(Box::new(m), t)
    }

    pub fn pair(m: Proof, n: Proof) -> Proof {
        Proof::Pair(Box::new(m), Box::new(n))
    }

    pub fn fst(m: Proof) -> Proof {
        Proof::Fst(Box::new(m))
    }

    pub fn snd(m: Proof) -> Proof {
        Proof::Snd(Box::new(m))
    }

    pub fn inl(m: Proof) -> Proof {
        Proof::Inl(Box::new(m))
    }

    pub fn inr(m: Proof) -> Proof {
        Proof::Inr(Box::new(m))
    }

    pub fn magic(m: Proof) -> Proof {
        Proof::Magic(Box::new(m))
    }

    pub fn ex(t: Term, m: Proof) -> Proof {
        Proof::ExIntro(t, Box::new(m))
    }

    pub fn rep(ax: AxiomId, t: Term, args: Vec<Term>, body: Proof) -> Proof {
        Proof::AxRep {
            ax,
            t,
            args,
            body: Box::new(body),
        }
    }

    pub fn prop(ax: AxiomId, t: Term, args: Vec<Term>, body: Proof) -> Proof {
        Proof::AxProp {
            ax,
            t,
            args,
            body: Box::new(body),
        }
    }

    pub fn case(scrut: Proof, l: (&str, Formula, Proof), r: (&str, Formula, Proof)) -> Proof {
        Proof::Case {
            scrut: Box::new(scrut),
            lvar: PVar::new(l.0),
            lty: l.1,
            lbody: Box::new(l.2),
            rvar: PVar::new(r.0),
            rty: r.1,
            rbody: Box::new(r.2),
        }
    }

    pub fn let_ex(a: &str, x: &str, ty: Formula, bound: Proof, body: Proof) -> Proof {
        Proof::Let {
            a: Var::new(a),
            x: PVar::new(x),
            ty,
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    pub fn ind(schema: Arc<Schema>, premise: Proof, args: Vec<Term>) -> Proof {
        Proof::Ind {
            schema,
            premise: Box::new(premise),
            args,
        }
    }
}

impl Proof {
    pub fn value_tag(&self) -> ValueTag {
        match self {
            Proof::LamF(..) => ValueTag::LamF,
            Proof::LamP(..) => ValueTag::LamP,
            Proof::Inr(_) => ValueTag::Inr,
            Proof::Inl(_) => ValueTag::Inl,
            Proof::ExIntro(..) => ValueTag::ExIntro,
            Proof::Pair(..) => ValueTag::PairP,
            Proof::AxRep { .. } => ValueTag::AxRep,
            _ => ValueTag::NotValue,
        }
    }

    pub fn is_value(&self) -> bool {
        self.value_tag().is_value()
    }

    pub fn size(&self) -> usize {
        match self {
            Proof::Var(_) => 1,
            Proof::App(m, n) | Proof::Pair(m, n) => 1 + m.size() + n.size(),
            Proof::LamP(_, _, m)
            | Proof::LamF(_, m)
            | Proof::AppT(m, _)
            | Proof::Fst(m)
            | Proof::Snd(m)
            | Proof::Inl(m)
            | Proof::Inr(m)
            | Proof::ExIntro(_, m)
            | Proof::Magic(m) => 1 + m.size(),
            Proof::Case {
                scrut, lbody, rbody, ..
            } => 1 + scrut.size() + lbody.size() + rbody.size(),
            Proof::Let { bound, body, .. } => 1 + bound.size() + body.size(),
            Proof::Ind { premise, .. } => 1 + premise.size(),
            Proof::AxRep { body, .. } | Proof::AxProp { body, .. } => 1 + body.size(),
        }
    }

    /// `(FV, FV_F)` including variables of annotations and embedded terms.
    pub fn free_vars(&self) -> (BTreeSet<PVar>, BTreeSet<Var>) {
        let mut p = BTreeSet::new();
        let mut f = BTreeSet::new();
        self.collect_fv(&mut p, &mut f);
        (p, f)
    }

    fn collect_fv(&self, p: &mut BTreeSet<PVar>, f: &mut BTreeSet<Var>) {
        match self {
            Proof::Var(x) => {
                p.insert(x.clone());
            }
            Proof::App(m, n) | Proof::Pair(m, n) => {
                m.collect_fv(p, f);
                n.collect_fv(p, f);
            }
            Proof::LamP(x, ty, m) => {
                ty.collect_fv(f);
                let (mut mp, mf) = m.free_vars();
                mp.remove(x);
                p.extend(mp);
                f.extend(mf);
            }
            Proof::LamF(a, m) => {
                let (mp, mut mf) = m.free_vars();
                mf.remove(a);
                p.extend(mp);
                f.extend(mf);
            }
            Proof::AppT(m, t) | Proof::ExIntro(t, m) => {
                m.collect_fv(p, f);
                t.collect_fv(f);
            }
            Proof::Fst(m) | Proof::Snd(m) | Proof::Inl(m) | Proof::Inr(m) | Proof::Magic(m) => {
                m.collect_fv(p, f)
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
                scrut.collect_fv(p, f);
                lty.collect_fv(f);
                rty.collect_fv(f);
                for (x, b) in [(lvar, lbody), (rvar, rbody)] {
                    let (mut bp, bf) = b.free_vars();
                    bp.remove(x);
                    p.extend(bp);
                    f.extend(bf);
                }
            }
            Proof::Let {
                a,
                x,
                ty,
                bound,
                body,
            } => {
                bound.collect_fv(p, f);
                let mut tf = ty.free_vars();
                tf.remove(a);
                f.extend(tf);
                let (mut bp, mut bf) = body.free_vars();
                bp.remove(x);
                bf.remove(a);
                p.extend(bp);
                f.extend(bf);
            }
            Proof::Ind {
                schema,
                premise,
                args,
            } => {
                f.extend(schema.free_vars());
                premise.collect_fv(p, f);
                for t in args {
                    t.collect_fv(f);
                }
            }
            Proof::AxRep { ax, t, args, body } | Proof::AxProp { ax, t, args, body } => {
                if let AxiomId::Sep(s) | AxiomId::Repl(s) | AxiomId::Ind(s) = ax {
                    f.extend(s.free_vars());
                }
                t.collect_fv(f);
                for u in args {
                    u.collect_fv(f);
                }
                body.collect_fv(p, f);
            }
        }
    }

    pub fn subst(&self, s: &ProofSubst) -> Proof {
        if s.is_empty() {
            return self.clone();
        }
        let ft = |t: &Term| t.subst(&s.terms);
        let ff = |phi: &Formula| phi.subst(&s.terms);
        match self {
            Proof::Var(x) => s.proofs.get(x).cloned().unwrap_or_else(|| self.clone()),
            Proof::App(m, n) => Proof::app(m.subst(s), n.subst(s)),
            Proof::Pair(m, n) => Proof::pair(m.subst(s), n.subst(s)),
            Proof::LamP(x, ty, m) => {
                let (x2, s2) = s.bind_p(x, m);
                Proof::LamP(x2, ff(ty), Box::new(m.subst(&s2)))
            }
            Proof::LamF(a, m) => {
                let (a2, s2) = s.bind_f(a, || m.free_vars());
                Proof::LamF(a2, Box::new(m.subst(&s2)))
            }
            Proof::AppT(m, t) => Proof::AppT(Box::new(m.subst(s)), ft(t)),
            Proof::ExIntro(t, m) => Proof::ExIntro(ft(t), Box::new(m.subst(s))),
            Proof::Fst(m) => Proof::fst(m.subst(s)),
            Proof::Snd(m) => Proof::snd(m.subst(s)),
            Proof::Inl(m) => Proof::inl(m.subst(s)),
            Proof::Inr(m) => Proof::inr(m.subst(s)),
            Proof::Magic(m) => Proof::magic(m.subst(s)),
            Proof::Case {
                scrut,
                lvar,
                lty,
                lbody,
                rvar,
                rty,
                rbody,
            } => {
                let (l2, sl) = s.bind_p(lvar, lbody);
                let (r2, sr) = s.bind_p(rvar, rbody);
                Proof::Case {
                    scrut: Box::new(scrut.subst(s)),
                    lvar: l2,
                    lty: ff(lty),
                    lbody: Box::new(lbody.subst(&sl)),
                    rvar: r2,
                    rty: ff(rty),
                    rbody: Box::new(rbody.subst(&sr)),
                }
            }
            Proof::Let {
                a,
                x,
                ty,
                bound,
                body,
            } => {
                let bound2 = bound.subst(s);
                let (a2, sa) = s.bind_f(a, || {
                    let (p, mut f) = body.free_vars();
                    f.extend(ty.free_vars());
                    (p, f)
                });
                let ty2 = ty.subst(&sa.terms);
                let (x2, sx) = sa.bind_p(x, body);
                Proof::Let {
                    a: a2,
                    x: x2,
                    ty: ty2,
                    bound: Box::new(bound2),
                    body: Box::new(body.subst(&sx)),
                }
            }
            Proof::Ind {
                schema,
                premise,
                args,
            } => Proof::Ind {
                schema: Arc::new(schema.subst(&s.terms)),
                premise: Box::new(premise.subst(s)),
                args: args.iter().map(ft).collect(),
            },
            Proof::AxRep { ax, t, args, body } => Proof::AxRep {
                ax: subst_ax(ax, &s.terms),
                t: ft(t),
                args: args.iter().map(ft).collect(),
                body: Box::new(body.subst(s)),
            },
            Proof::AxProp { ax, t, args, body } => Proof::AxProp {
                ax: subst_ax(ax, &s.terms),
                t: ft(t),
                args: args.iter().map(ft).collect(),
                body: Box::new(body.subst(s)),
            },
        }
    }

    /// `M[x := N]`.
    pub fn subst_proof(&self, x: &PVar, n: &Proof) -> Proof {
        let mut proofs = BTreeMap::new();
        proofs.insert(x.clone(), n.clone());
        self.subst(&ProofSubst::new(Subst::new(), proofs))
    }

    /// `M[a := t]`.
    pub fn subst_term(&self, a: &Var, t: &Term) -> Proof {
        let mut terms = Subst::new();
        terms.insert(a.clone(), t.clone());
        self.subst(&ProofSubst::new(terms, BTreeMap::new()))
    }

    /// Rename first-order binders that occur in `avoid` (and everything they
    /// bind) to fresh names. Used when a closed proof is pasted under binders.
    pub fn rename_fo_apart(&self, avoid: &BTreeSet<Var>) -> Proof {
        let rec = |m: &Proof| Box::new(m.rename_fo_apart(avoid));
        let pick = |a: &Var, scope: &Proof, extra: Option<&Formula>| -> Option<Var> {
            if !avoid.contains(a) {
                return None;
            }
            let mut taken = avoid.clone();
            taken.extend(scope.free_vars().1);
            if let Some(f) = extra {
                taken.extend(f.free_vars());
            }
            Some(fresh_var(a, &taken))
        };
        match self {
            Proof::Var(_) => self.clone(),
            Proof::LamF(a, b) => match pick(a, b, None) {
                Some(a2) => Proof::LamF(a2.clone(), rec(&b.subst_term(a, &Term::Var(a2)))),
                None => Proof::LamF(a.clone(), rec(b)),
            },
            Proof::Let { a, x, ty, bound, body } => {
                let (a2, ty2, body2) = match pick(a, body, Some(ty)) {
                    Some(a2) => {
                        let t = Term::Var(a2.clone());
                        (a2, ty.subst1(a, &t), body.subst_term(a, &t))
                    }
                    None => (a.clone(), ty.clone(), (**body).clone()),
                };
                Proof::Let {
                    a: a2,
                    x: x.clone(),
                    ty: ty2,
                    bound: rec(bound),
                    body: rec(&body2),
                }
            }
            Proof::App(f, n) => Proof::App(rec(f), rec(n)),
            Proof::LamP(x, ty, b) => Proof::LamP(x.clone(), ty.clone(), rec(b)),
            Proof::AppT(f, t) => Proof::AppT(rec(f), t.clone()),
            Proof::Pair(l, r) => Proof::Pair(rec(l), rec(r)),
            Proof::Fst(p) => Proof::Fst(rec(p)),
            Proof::Snd(p) => Proof::Snd(rec(p)),
            Proof::Inl(p) => Proof::Inl(rec(p)),
            Proof::Inr(p) => Proof::Inr(rec(p)),
            Proof::Magic(p) => Proof::Magic(rec(p)),
            Proof::ExIntro(t, p) => Proof::ExIntro(t.clone(), rec(p)),
            Proof::Case { scrut, lvar, lty, lbody, rvar, rty, rbody } => Proof::Case {
                scrut: rec(scrut),
                lvar: lvar.clone(),
                lty: lty.clone(),
                lbody: rec(lbody),
                rvar: rvar.clone(),
                rty: rty.clone(),
                rbody: rec(rbody),
            },
            Proof::Ind { schema, premise, args } => Proof::Ind {
                schema: schema.clone(),
                premise: rec(premise),
                args: args.clone(),
            },
            Proof::AxRep { ax, t, args, body } => Proof::AxRep {
                ax: ax.clone(),
                t: t.clone(),
                args: args.clone(),
                body: rec(body),
            },
            Proof::AxProp { ax, t, args, body } => Proof::AxProp {
                ax: ax.clone(),
                t: t.clone(),
                args: args.clone(),
                body: rec(body),
            },
        }
    }

    pub fn canonical(&self) -> Proof {
        self.canon_in(&mut Env::default(), &mut Vec::new())
    }

    fn canon_in(&self, fe: &mut Env, pe: &mut Vec<(PVar, PVar)>) -> Proof {
        fn push(pe: &mut Vec<(PVar, PVar)>, x: &PVar) -> PVar {
            let n = PVar::canonical(pe.len());
            pe.push((x.clone(), n.clone()));
            n
        }
        match self {
            Proof::Var(x) => Proof::Var(
                pe.iter()
                    .rev()
                    .find(|(k, _)| k == x)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(|| x.clone()),
            ),
            Proof::App(m, n) => Proof::app(m.canon_in(fe, pe), n.canon_in(fe, pe)),
            Proof::Pair(m, n) => Proof::pair(m.canon_in(fe, pe), n.canon_in(fe, pe)),
            Proof::LamP(x, ty, m) => {
                let ty = ty.canon_in(fe);
                let x2 = push(pe, x);
                let m = m.canon_in(fe, pe);
                pe.pop();
                Proof::LamP(x2, ty, Box::new(m))
            }
            Proof::LamF(a, m) => {
                let a2 = fe.push(a);
                let m = m.canon_in(fe, pe);
                fe.pop();
                Proof::LamF(a2, Box::new(m))
            }
            Proof::AppT(m, t) => Proof::AppT(Box::new(m.canon_in(fe, pe)), t.canon_in(fe)),
            Proof::ExIntro(t, m) => Proof::ExIntro(t.canon_in(fe), Box::new(m.canon_in(fe, pe))),
            Proof::Fst(m) => Proof::fst(m.canon_in(fe, pe)),
            Proof::Snd(m) => Proof::snd(m.canon_in(fe, pe)),
            Proof::Inl(m) => Proof::inl(m.canon_in(fe, pe)),
            Proof::Inr(m) => Proof::inr(m.canon_in(fe, pe)),
            Proof::Magic(m) => Proof::magic(m.canon_in(fe, pe)),
            Proof::Case {
                scrut,
                lvar,
                lty,
                lbody,
                rvar,
                rty,
                rbody,
            } => {
                let scrut = scrut.canon_in(fe, pe);
                let lty = lty.canon_in(fe);
                let rty = rty.canon_in(fe);
                let l2 = push(pe, lvar);
                let lbody = lbody.canon_in(fe, pe);
                pe.pop();
                let r2 = push(pe, rvar);
                let rbody = rbody.canon_in(fe, pe);
                pe.pop();
                Proof::Case {
                    scrut: Box::new(scrut),
                    lvar: l2,
                    lty,
                    lbody: Box::new(lbody),
                    rvar: r2,
                    rty,
                    rbody: Box::new(rbody),
                }
            }
            Proof::Let {
                a,
                x,
                ty,
                bound,
                body,
            } => {
                let bound = bound.canon_in(fe, pe);
                let a2 = fe.push(a);
                let ty = ty.canon_in(fe);
                let x2 = push(pe, x);
                let body = body.canon_in(fe, pe);
                pe.pop();
                fe.pop();
                Proof::Let {
                    a: a2,
                    x: x2,
                    ty,
                    bound: Box::new(bound),
                    body: Box::new(body),
                }
            }
            Proof::Ind {
                schema,
                premise,
                args,
            } => Proof::Ind {
                schema: canon_schema(schema, fe),
                premise: Box::new(premise.canon_in(fe, pe)),
                args: args.iter().map(|t| t.canon_in(fe)).collect(),
            },
            Proof::AxRep { ax, t, args, body } => Proof::AxRep {
                ax: canon_ax(ax, fe),
                t: t.canon_in(fe),
                args: args.iter().map(|t| t.canon_in(fe)).collect(),
                body: Box::new(body.canon_in(fe, pe)),
            },
            Proof::AxProp { ax, t, args, body } => Proof::AxProp {
                ax: canon_ax(ax, fe),
                t: t.canon_in(fe),
                args: args.iter().map(|t| t.canon_in(fe)).collect(),
                body: Box::new(body.canon_in(fe, pe)),
            },
        }
    }

    pub fn alpha_eq(&self, other: &Proof) -> bool {
        self == other || self.canonical() == other.canonical()
    }
}

fn canon_schema(s: &Arc<Schema>, fe: &mut Env) -> Arc<Schema> {
    // Reuse the term-level canonicalizer through a separation wrapper.
    let args = s.params.iter().map(|_| Term::Empty).collect();
    match Term::Sep(s.clone(), Box::new(Term::Empty), args).canon_in(fe) {
        Term::Sep(c, _, _) => c,
        _ => unreachable!(),
    }
}

fn canon_ax(ax: &AxiomId, fe: &mut Env) -> AxiomId {
    match ax {
        AxiomId::Sep(s) => AxiomId::Sep(canon_schema(s, fe)),
        AxiomId::Repl(s) => AxiomId::Repl(canon_schema(s, fe)),
        AxiomId::Ind(s) => AxiomId::Ind(canon_schema(s, fe)),
        other => other.clone(),
    }
}

fn subst_ax(ax: &AxiomId, s: &Subst) -> AxiomId {
    match ax {
        AxiomId::Sep(sc) => AxiomId::Sep(Arc::new(sc.subst(s))),
        AxiomId::Repl(sc) => AxiomId::Repl(Arc::new(sc.subst(s))),
        AxiomId::Ind(sc) => AxiomId::Ind(Arc::new(sc.subst(s))),
        other => other.clone(),
    }
}

/// Simultaneous substitution of terms for first-order variables and proofs for
/// propositional variables.
#[derive(Clone, Debug, Default)]
pub struct ProofSubst {
    pub terms: Subst,
    pub proofs: BTreeMap<PVar, Proof>,
    range_f: BTreeSet<Var>,
    range_p: BTreeSet<PVar>,
}

impl ProofSubst {
    pub fn new(terms: Subst, proofs: BTreeMap<PVar, Proof>) -> ProofSubst {
        let mut range_f = BTreeSet::new();
        let mut range_p = BTreeSet::new();
        for t in terms.values() {
            range_f.extend(t.free_vars());
        }
        for m in proofs.values() {
            let (p, f) = m.free_vars();
            range_p.extend(p);
            range_f.extend(f);
        }
        ProofSubst {
            terms,
            proofs,
            range_f,
            range_p,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.proofs.is_empty()
    }

    fn bind_f(
        &self,
        a: &Var,
        body_fv: impl FnOnce() -> (BTreeSet<PVar>, BTreeSet<Var>),
    ) -> (Var, ProofSubst) {
        let mut s = self.clone();
        s.terms.remove(a);
        if s.is_empty() || !s.range_f.contains(a) {
            return (a.clone(), s);
        }
        let (_, bf) = body_fv();
        let avoid: BTreeSet<Var> = s.range_f.union(&bf).cloned().collect();
        let a2 = fresh_var(a, &avoid);
        s.terms.insert(a.clone(), Term::Var(a2.clone()));
        s.range_f.insert(a2.clone());
        (a2, s)
    }

    fn bind_p(&self, x: &PVar, body: &Proof) -> (PVar, ProofSubst) {
        let mut s = self.clone();
        s.proofs.remove(x);
        if s.is_empty() || !s.range_p.contains(x) {
            return (x.clone(), s);
        }
        let (bp, _) = body.free_vars();
        let avoid: BTreeSet<PVar> = s.range_p.union(&bp).cloned().collect();
        let x2 = fresh_pvar(x, &avoid);
        s.proofs.insert(x.clone(), Proof::Var(x2.clone()));
        s.range_p.insert(x2.clone());
        (x2, s)
    }
}

/// Untyped proof terms: the image of [`erase`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Erased {
    Var(PVar),
    App(Box<Erased>, Box<Erased>),
    Lam(PVar, Box<Erased>),
    LamF(Var, Box<Erased>),
    AppT(Box<Erased>, Term),
    Pair(Box<Erased>, Box<Erased>),
    Fst(Box<Erased>),
    Snd(Box<Erased>),
    Inl(Box<Erased>),
    Inr(Box<Erased>),
    Case {
        scrut: Box<Erased>,
        lvar: PVar,
        lbody: Box<Erased>,
        rvar: PVar,
        rbody: Box<Erased>,
    },
    ExIntro(Term, Box<Erased>),
    Let {
        a: Var,
        x: PVar,
        bound: Box<Erased>,
        body: Box<Erased>,
    },
    Magic(Box<Erased>),
    Ind(Box<Erased>),
    AxRep(AxKind, Box<Erased>),
    AxProp(AxKind, Box<Erased>),
}

pub fn erase(m: &Proof) -> Erased {
    let b = |m: &Proof| Box::new(erase(m));
    match m {
        Proof::Var(x) => Erased::Var(x.clone()),
        Proof::App(m, n) => Erased::App(b(m), b(n)),
        Proof::LamP(x, _, m) => Erased::Lam(x.clone(), b(m)),
        Proof::LamF(a, m) => Erased::LamF(a.clone(), b(m)),
        Proof::AppT(m, t) => Erased::AppT(b(m), t.clone()),
        Proof::Pair(m, n) => Erased::Pair(b(m), b(n)),
        Proof::Fst(m) => Erased::Fst(b(m)),
        Proof::Snd(m) => Erased::Snd(b(m)),
        Proof::Inl(m) => Erased::Inl(b(m)),
        Proof::Inr(m) => Erased::Inr(b(m)),
        Proof::Case {
            scrut,
            lvar,
            lbody,
            rvar,
            rbody,
            ..
        } => Erased::Case {
            scrut: b(scrut),
            lvar: lvar.clone(),
            lbody: b(lbody),
            rvar: rvar.clone(),
            rbody: b(rbody),
        },
        Proof::ExIntro(t, m) => Erased::ExIntro(t.clone(), b(m)),
        Proof::Let {
            a, x, bound, body, ..
        } => Erased::Let {
            a: a.clone(),
            x: x.clone(),
            bound: b(bound),
            body: b(body),
        },
        Proof::Magic(m) => Erased::Magic(b(m)),
        Proof::Ind { premise, .. } => Erased::Ind(b(premise)),
        Proof::AxRep { ax, body, .. } => Erased::AxRep(ax_kind(ax), b(body)),
        Proof::AxProp { ax, body, .. } => Erased::AxProp(ax_kind(ax), b(body)),
    }
}

fn ax_kind(ax: &AxiomId) -> AxKind {
    // Ind never appears under Rep/Prop in checked terms; tag it as In so erasure is total.
    ax.kind().unwrap_or(AxKind::In)
}

impl Erased {
    pub fn value_tag(&self) -> ValueTag {
        match self {
            Erased::LamF(..) => ValueTag::LamF,
            Erased::Lam(..) => ValueTag::LamP,
            Erased::Inr(_) => ValueTag::Inr,
            Erased::Inl(_) => ValueTag::Inl,
            Erased::ExIntro(..) => ValueTag::ExIntro,
            Erased::Pair(..) => ValueTag::PairP,
            Erased::AxRep(..) => ValueTag::AxRep,
            _ => ValueTag::NotValue,
        }
    }

    pub fn is_value(&self) -> bool {
        self.value_tag().is_value()
    }

    pub fn lam(x: &str, body: Erased) -> Erased {
        Erased::Lam(PVar::new(x), Box::new(body))
    }

    pub fn lamf(a: &str, body: Erased) -> Erased {
        Erased::LamF(Var::new(a), Box::new(body))
    }

    pub fn var(x: &str) -> Erased {
        Erased::Var(PVar::new(x))
    }

    pub fn app(m: Erased, n: Erased) -> Erased {
        Erased::App(Box::new(m), Box::new(n))
    }

    pub fn app_t(m: Erased, t: Term) -> Erased {
        Erased::AppT(Box::new(m), t)
    }

    pub fn pair(m: Erased, n: Erased) -> Erased {
        Erased::Pair(Box::new(m), Box::new(n))
    }

    pub fn fst(m: Erased) -> Erased {
        Erased::Fst(Box::new(m))
    }

    pub fn snd(m: Erased) -> Erased {
        Erased::Snd(Box::new(m))
    }

    pub fn size(&self) -> usize {
        match self {
            Erased::Var(_) => 1,
            Erased::App(m, n) | Erased::Pair(m, n) => 1 + m.size() + n.size(),
            Erased::Lam(_, m)
            | Erased::LamF(_, m)
            | Erased::AppT(m, _)
            | Erased::Fst(m)
            | Erased::Snd(m)
            | Erased::Inl(m)
            | Erased::Inr(m)
            | Erased::ExIntro(_, m)
            | Erased::Magic(m)
            | Erased::Ind(m)
            | Erased::AxRep(_, m)
            | Erased::AxProp(_, m) => 1 + m.size(),
            Erased::Case {
                scrut, lbody, rbody, ..
            } => 1 + scrut.size() + lbody.size() + rbody.size(),
            Erased::Let { bound, body, .. } => 1 + bound.size() + body.size(),
        }
    }

    pub fn free_vars(&self) -> (BTreeSet<PVar>, BTreeSet<Var>) {
        let mut p = BTreeSet::new();
        let mut f = BTreeSet::new();
        self.collect_fv(&mut p, &mut f);
        (p, f)
    }

    fn collect_fv(&self, p: &mut BTreeSet<PVar>, f: &mut BTreeSet<Var>) {
        match self {
            Erased::Var(x) => {
                p.insert(x.clone());
            }
            Erased::App(m, n) | Erased::Pair(m, n) => {
                m.collect_fv(p, f);
                n.collect_fv(p, f);
            }
            Erased::Lam(x, m) => {
                let (mut mp, mf) = m.free_vars();
                mp.remove(x);
                p.extend(mp);
                f.extend(mf);
            }
            Erased::LamF(a, m) => {
                let (mp, mut mf) = m.free_vars();
                mf.remove(a);
                p.extend(mp);
                f.extend(mf);
            }
            Erased::AppT(m, t) | Erased::ExIntro(t, m) => {
                m.collect_fv(p, f);
                t.collect_fv(f);
            }
            Erased::Fst(m)
            | Erased::Snd(m)
            | Erased::Inl(m)
            | Erased::Inr(m)
            | Erased::Magic(m)
            | Erased::Ind(m)
            | Erased::AxRep(_, m)
            | Erased::AxProp(_, m) => m.collect_fv(p, f),
            Erased::Case {
                scrut,
                lvar,
                lbody,
                rvar,
                rbody,
            } => {
                scrut.collect_fv(p, f);
                for (x, b) in [(lvar, lbody), (rvar, rbody)] {
                    let (mut bp, bf) = b.free_vars();
                    bp.remove(x);
                    p.extend(bp);
                    f.extend(bf);
                }
            }
            Erased::Let { a, x, bound, body } => {
                bound.collect_fv(p, f);
                let (mut bp, mut bf) = body.free_vars();
                bp.remove(x);
                bf.remove(a);
                p.extend(bp);
                f.extend(bf);
            }
        }
    }

    pub fn subst(&self, s: &ErasedSubst) -> Erased {
        if s.is_empty() {
            return self.clone();
        }
        let ft = |t: &Term| t.subst(&s.terms);
        match self {
            Erased::Var(x) => s.proofs.get(x).cloned().unwrap_or_else(|| self.clone()),
            Erased::App(m, n) => Erased::app(m.subst(s), n.subst(s)),
            Erased::Pair(m, n) => Erased::pair(m.subst(s), n.subst(s)),
            Erased::Lam(x, m) => {
                let (x2, s2) = s.bind_p(x, m);
                Erased::Lam(x2, Box::new(m.subst(&s2)))
            }
            Erased::LamF(a, m) => {
                let (a2, s2) = s.bind_f(a, m);
                Erased::LamF(a2, Box::new(m.subst(&s2)))
            }
            Erased::AppT(m, t) => Erased::AppT(Box::new(m.subst(s)), ft(t)),
            Erased::ExIntro(t, m) => Erased::ExIntro(ft(t), Box::new(m.subst(s))),
            Erased::Fst(m) => Erased::Fst(Box::new(m.subst(s))),
            Erased::Snd(m) => Erased::Snd(Box::new(m.subst(s))),
            Erased::Inl(m) => Erased::Inl(Box::new(m.subst(s))),
            Erased::Inr(m) => Erased::Inr(Box::new(m.subst(s))),
            Erased::Magic(m) => Erased::Magic(Box::new(m.subst(s))),
            Erased::Ind(m) => Erased::Ind(Box::new(m.subst(s))),
            Erased::AxRep(k, m) => Erased::AxRep(*k, Box::new(m.subst(s))),
            Erased::AxProp(k, m) => Erased::AxProp(*k, Box::new(m.subst(s))),
            Erased::Case {
                scrut,
                lvar,
                lbody,
                rvar,
                rbody,
            } => {
                let (l2, sl) = s.bind_p(lvar, lbody);
                let (r2, sr) = s.bind_p(rvar, rbody);
                Erased::Case {
                    scrut: Box::new(scrut.subst(s)),
                    lvar: l2,
                    lbody: Box::new(lbody.subst(&sl)),
                    rvar: r2,
                    rbody: Box::new(rbody.subst(&sr)),
                }
            }
            Erased::Let { a, x, bound, body } => {
                let bound2 = bound.subst(s);
                let (a2, sa) = s.bind_f(a, body);
                let (x2, sx) = sa.bind_p(x, body);
                Erased::Let {
                    a: a2,
                    x: x2,
                    bound: Box::new(bound2),
                    body: Box::new(body.subst(&sx)),
                }
            }
        }
    }

    pub fn subst_proof(&self, x: &PVar, n: &Erased) -> Erased {
        let mut proofs = BTreeMap::new();
        proofs.insert(x.clone(), n.clone());
        self.subst(&ErasedSubst::new(Subst::new(), proofs))
    }

    pub fn subst_term(&self, a: &Var, t: &Term) -> Erased {
        let mut terms = Subst::new();
        terms.insert(a.clone(), t.clone());
        self.subst(&ErasedSubst::new(terms, BTreeMap::new()))
    }

    pub fn canonical(&self) -> Erased {
        self.canon_in(&mut Env::default(), &mut Vec::new())
    }

    fn canon_in(&self, fe: &mut Env, pe: &mut Vec<(PVar, PVar)>) -> Erased {
        fn push(pe: &mut Vec<(PVar, PVar)>, x: &PVar) -> PVar {
            let n = PVar::canonical(pe.len());
            pe.push((x.clone(), n.clone()));
            n
        }
        let bx = |e: Erased| Box::new(e);
        match self {
            Erased::Var(x) => Erased::Var(
                pe.iter()
                    .rev()
                    .find(|(k, _)| k == x)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(|| x.clone()),
            ),
            Erased::App(m, n) => Erased::app(m.canon_in(fe, pe), n.canon_in(fe, pe)),
            Erased::Pair(m, n) => Erased::pair(m.canon_in(fe, pe), n.canon_in(fe, pe)),
            Erased::Lam(x, m) => {
                let x2 = push(pe, x);
                let m = m.canon_in(fe, pe);
                pe.pop();
                Erased::Lam(x2, bx(m))
            }
            Erased::LamF(a, m) => {
                let a2 = fe.push(a);
                let m = m.canon_in(fe, pe);
                fe.pop();
                Erased::LamF(a2, bx(m))
            }
            Erased::AppT(m, t) => Erased::AppT(bx(m.canon_in(fe, pe)), t.canon_in(fe)),
            Erased::ExIntro(t, m) => Erased::ExIntro(t.canon_in(fe), bx(m.canon_in(fe, pe))),
            Erased::Fst(m) => Erased::Fst(bx(m.canon_in(fe, pe))),
            Erased::Snd(m) => Erased::Snd(bx(m.canon_in(fe, pe))),
            Erased::Inl(m) => Erased::Inl(bx(m.canon_in(fe, pe))),
            Erased::Inr(m) => Erased::Inr(bx(m.canon_in(fe, pe))),
            Erased::Magic(m) => Erased::Magic(bx(m.canon_in(fe, pe))),
            Erased::Ind(m) => Erased::Ind(bx(m.canon_in(fe, pe))),
            Erased::AxRep(k, m) => Erased::AxRep(*k, bx(m.canon_in(fe, pe))),
            Erased::AxProp(k, m) => Erased::AxProp(*k, bx(m.canon_in(fe, pe))),
            Erased::Case {
                scrut,
                lvar,
                lbody,
                rvar,
                rbody,
            } => {
                let scrut = scrut.canon_in(fe, pe);
                let l2 = push(pe, lvar);
                let lbody = lbody.canon_in(fe, pe);
                pe.pop();
                let r2 = push(pe, rvar);
                let rbody = rbody.canon_in(fe, pe);
                pe.pop();
                Erased::Case {
                    scrut: bx(scrut),
                    lvar: l2,
                    lbody: bx(lbody),
                    rvar: r2,
                    rbody: bx(rbody),
                }
            }
            Erased::Let { a, x, bound, body } => {
                let bound = bound.canon_in(fe, pe);
                let a2 = fe.push(a);
                let x2 = push(pe, x);
                let body = body.canon_in(fe, pe);
                pe.pop();
                fe.pop();
                Erased::Let {
                    a: a2,
                    x: x2,
                    bound: bx(bound),
                    body: bx(body),
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &Erased) -> bool {
        self == other || self.canonical() == other.canonical()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ErasedSubst {
    pub terms: Subst,
    pub proofs: BTreeMap<PVar, Erased>,
    range_f: BTreeSet<Var>,
    range_p: BTreeSet<PVar>,
}

impl ErasedSubst {
    pub fn new(terms: Subst, proofs: BTreeMap<PVar, Erased>) -> ErasedSubst {
        let mut range_f = BTreeSet::new();
        let mut range_p = BTreeSet::new();
        for t in terms.values() {
            range_f.extend(t.free_vars());
        }
        for m in proofs.values() {
            let (p, f) = m.free_vars();
            range_p.extend(p);
            range_f.extend(f);
        }
        ErasedSubst {
            terms,
            proofs,
            range_f,
            range_p,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.proofs.is_empty()
    }

    fn bind_f(&self, a: &Var, body: &Erased) -> (Var, ErasedSubst) {
        let mut s = self.clone();
        s.terms.remove(a);
        if s.is_empty() || !s.range_f.contains(a) {
            return (a.clone(), s);
        }
        let (_, bf) = body.free_vars();
        let avoid: BTreeSet<Var> = s.range_f.union(&bf).cloned().collect();
        let a2 = fresh_var(a, &avoid);
        s.terms.insert(a.clone(), Term::Var(a2.clone()));
        s.range_f.insert(a2.clone());
        (a2, s)
    }

    fn bind_p(&self, x: &PVar, body: &Erased) -> (PVar, ErasedSubst) {
        let mut s = self.clone();
        s.proofs.remove(x);
        if s.is_empty() || !s.range_p.contains(x) {
            return (x.clone(), s);
        }
        let (bp, _) = body.free_vars();
        let avoid: BTreeSet<PVar> = s.range_p.union(&bp).cloned().collect();
        let x2 = fresh_pvar(x, &avoid);
        s.proofs.insert(x.clone(), Erased::Var(x2.clone()));
        s.range_p.insert(x2.clone());
        (x2, s)
    }
}
