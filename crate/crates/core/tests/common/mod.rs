//! Helpers shared by the integration tests.
//!
//! The enumeration signature keeps one of each mirror pair (fst without snd,
//! inl without inr, case with equal branch annotations); the mirrored rules
//! are exercised by the corpus traces.
#![allow(dead_code)]

pub mod gen;
pub mod traces;

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use izf_core::syntax::{Formula, Schema, Term, Var};
use izf_core::{AxiomId, PVar, Proof};

/// Annotation formulas of the enumeration signature.
pub fn annotations() -> Vec<Formula> {
    vec![Formula::Bottom, Formula::Eq(Term::Empty, Term::Empty)]
}

/// Formulas tried in check mode when deciding whether an enumerated term is
/// typeable; they cover every shape the signature can introduce.
pub fn probe_formulas() -> Vec<Formula> {
    let e = Formula::Eq(Term::Empty, Term::Empty);
    let b = Formula::Bottom;
    let aa = Formula::Eq(Term::var("a"), Term::var("a"));
    let mut out = vec![b.clone(), e.clone()];
    let atoms = [b.clone(), e.clone()];
    for x in &atoms {
        for y in &atoms {
            out.push(Formula::and(x.clone(), y.clone()));
            out.push(Formula::or(x.clone(), y.clone()));
            out.push(Formula::imp(x.clone(), y.clone()));
        }
    }
    out.push(Formula::Exists(Var::new("a"), Box::new(aa.clone())));
    out.push(Formula::Forall(Var::new("a"), Box::new(aa)));
    out.push(Formula::Forall(Var::new("a"), Box::new(e.clone())));
    out.push(Formula::Mem(Term::Empty, Term::Empty));
    out
}

fn refl_schema() -> Arc<Schema> {
    let a = Var::new("a");
    Arc::new(Schema::new(vec![a.clone()], vec![], Formula::Eq(Term::Var(a.clone()), Term::Var(a))).unwrap())
}

fn xv(k: usize) -> PVar {
    PVar::new(&format!("x{k}"))
}

/// Exhaustive enumeration of closed proof terms by size over a small signature.
pub struct Enumerator {
    memo: HashMap<(usize, usize), Rc<Vec<Proof>>>,
    schema: Arc<Schema>,
}

impl Enumerator {
    pub fn new() -> Enumerator {
        Enumerator {
            memo: HashMap::new(),
            schema: refl_schema(),
        }
    }

    /// Visit every closed term of size at most `max`; the largest size is
    /// streamed rather than stored.
    pub fn for_each_closed(&mut self, max: usize, mut f: impl FnMut(&Proof)) {
        for n in 1..max {
            for m in self.sized(n, 0).iter() {
                f(m);
            }
        }
        self.build(max, 0, &mut |m| f(&m));
    }

    /// Terms of exactly size `n` whose free variables are among `x0..x{k-1}`.
    pub fn sized(&mut self, n: usize, k: usize) -> Rc<Vec<Proof>> {
        if let Some(v) = self.memo.get(&(n, k)) {
            return v.clone();
        }
        let mut v = Vec::new();
        self.build(n, k, &mut |m| v.push(m));
        let v = Rc::new(v);
        self.memo.insert((n, k), v.clone());
        v
    }

    fn build(&mut self, n: usize, k: usize, out: &mut dyn FnMut(Proof)) {
        let e = Term::Empty;
        if n == 1 {
            (0..k).for_each(|i| out(Proof::Var(xv(i))));
        } else {
            let b = |m: &Proof| Box::new(m.clone());
            for m in self.sized(n - 1, k + 1).iter() {
                for f in annotations() {
                    out(Proof::LamP(xv(k), f, b(m)));
                }
            }
            for m in self.sized(n - 1, k).iter() {
                out(Proof::LamF(Var::new("a"), b(m)));
                out(Proof::AppT(b(m), e.clone()));
                out(Proof::ExIntro(e.clone(), b(m)));
                out(Proof::Fst(b(m)));
                out(Proof::Inl(b(m)));
                out(Proof::Magic(b(m)));
                out(Proof::rep(AxiomId::Eq, e.clone(), vec![e.clone()], m.clone()));
                out(Proof::prop(AxiomId::Eq, e.clone(), vec![e.clone()], m.clone()));
                out(Proof::prop(AxiomId::In, e.clone(), vec![e.clone()], m.clone()));
                out(Proof::ind(self.schema.clone(), m.clone(), vec![]));
            }
            for i in 1..n - 1 {
                let j = n - 1 - i;
                let (l, r, rb) = (self.sized(i, k), self.sized(j, k), self.sized(j, k + 1));
                for x in l.iter() {
                    for y in r.iter() {
                        out(Proof::App(b(x), b(y)));
                        out(Proof::Pair(b(x), b(y)));
                    }
                    for y in rb.iter() {
                        out(Proof::Let {
                            a: Var::new("a"),
                            x: xv(k),
                            ty: Formula::Eq(Term::var("a"), Term::var("a")),
                            bound: b(x),
                            body: b(y),
                        });
                    }
                }
            }
            for i in 1..n - 1 {
                for j in 1..n - 1 - i {
                    let l = n - 1 - i - j;
                    if l == 0 {
                        continue;
                    }
                    let (s, lb, rb) = (self.sized(i, k), self.sized(j, k + 1), self.sized(l, k + 1));
                    for sc in s.iter() {
                        for x in lb.iter() {
                            for y in rb.iter() {
                                for t in annotations() {
                                    out(Proof::Case {
                                        scrut: b(sc),
                                        lvar: xv(k),
                                        lty: t.clone(),
                                        lbody: b(x),
                                        rvar: xv(k),
                                        rty: t,
                                        rbody: b(y),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Default)]
pub struct ProgressReport {
    pub terms: u64,
    pub values: u64,
    pub stepping: u64,
    pub stuck: u64,
    pub typed_nonvalues: u64,
    pub violations: Vec<String>,
}

pub fn typeable(m: &Proof) -> bool {
    let ctx = izf_core::Context::new();
    izf_core::infer(&ctx, m).is_ok() || probe_formulas().iter().any(|f| izf_core::check(&ctx, m, f).is_ok())
}

/// Determinism, progress and ⊥-emptiness over every closed term up to `max`.
pub fn progress_report(max: usize) -> ProgressReport {
    use izf_core::reduce::{decompositions, step, StepResult};
    let ctx = izf_core::Context::new();
    let mut r = ProgressReport::default();
    let flag = |r: &mut ProgressReport, m: &Proof, what: &str| {
        if r.violations.len() < 20 {
            r.violations.push(format!("{what}: {m}"));
        }
    };
    Enumerator::new().for_each_closed(max, |m| {
        r.terms += 1;
        let ds = decompositions(m);
        if m.is_value() {
            r.values += 1;
            if !ds.is_empty() {
                flag(&mut r, m, "value with a redex");
            }
            if izf_core::check(&ctx, m, &Formula::Bottom).is_ok() {
                flag(&mut r, m, "closed value of type bot");
            }
            return;
        }
        match step(m) {
            StepResult::Stepped { rule, path, .. } => {
                r.stepping += 1;
                if ds.len() != 1 || ds[0] != (path, rule) {
                    flag(&mut r, m, "decomposition does not match the step");
                }
                if izf_core::infer(&ctx, m).is_ok() {
                    r.typed_nonvalues += 1;
                }
            }
            StepResult::Stuck { .. } => {
                r.stuck += 1;
                if !ds.is_empty() {
                    flag(&mut r, m, "stuck term with a redex");
                }
                if typeable(m) {
                    flag(&mut r, m, "well-typed stuck term");
                }
            }
            StepResult::Value => flag(&mut r, m, "non-value reported as value"),
        }
    });
    r
}
