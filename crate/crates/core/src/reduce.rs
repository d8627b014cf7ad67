//! Deterministic lazy small-step reduction for typed and erased proof terms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::proof::{erase, fresh_pvar, Erased, PVar, Proof};
use crate::syntax::{fresh_var, Formula, Term, Var};

pub const DEFAULT_FUEL: u64 = 1_000_000;
pub const DEFAULT_TRACE_KEEP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Beta,
    BetaFo,
    Fst,
    Snd,
    CaseInl,
    CaseInr,
    Let,
    AxCancel,
    Ind,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Beta => "beta",
            Rule::BetaFo => "beta-fo",
            Rule::Fst => "fst",
            Rule::Snd => "snd",
            Rule::CaseInl => "case-inl",
            Rule::CaseInr => "case-inr",
            Rule::Let => "let",
            Rule::AxCancel => "ax-cancel",
            Rule::Ind => "ind",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepResult<T> {
    Stepped { next: T, rule: Rule, path: Vec<u8> },
    Value,
    Stuck { path: Vec<u8>, reason: String },
}

/// Shared interface of the two machines.
pub trait Reducible: Clone {
    type Canon: Hash + Eq;
    fn step(&self) -> StepResult<Self>;
    fn is_value(&self) -> bool;
    fn canon(&self) -> Self::Canon;
}

impl Reducible for Proof {
    type Canon = Proof;
    fn step(&self) -> StepResult<Proof> {
        step(self)
    }
    fn is_value(&self) -> bool {
        Proof::is_value(self)
    }
    fn canon(&self) -> Proof {
        self.canonical()
    }
}

impl Reducible for Erased {
    type Canon = Erased;
    fn step(&self) -> StepResult<Erased> {
        step_erased(self)
    }
    fn is_value(&self) -> bool {
        Erased::is_value(self)
    }
    fn canon(&self) -> Erased {
        self.canonical()
    }
}

enum Local<T> {
    Done(T, Rule),
    Into(u8),
    Stuck(String),
}

fn finish<T>(r: StepResult<T>) -> StepResult<T> {
    match r {
        StepResult::Stepped { next, rule, mut path } => {
            path.reverse();
            StepResult::Stepped { next, rule, path }
        }
        StepResult::Stuck { mut path, reason } => {
            path.reverse();
            StepResult::Stuck { path, reason }
        }
        v => v,
    }
}

/// One step of the typed machine.
pub fn step(m: &Proof) -> StepResult<Proof> {
    if m.is_value() {
        return StepResult::Value;
    }
    finish(step_rev(m))
}

// Paths are accumulated leaf-to-root and reversed once in `finish`.
fn step_rev(m: &Proof) -> StepResult<Proof> {
    match local(m) {
        Local::Done(next, rule) => StepResult::Stepped {
            next,
            rule,
            path: vec![],
        },
        Local::Stuck(reason) => StepResult::Stuck { path: vec![], reason },
        Local::Into(i) => {
            let child = child_mut_ref(m, i);
            match step_rev(child) {
                StepResult::Stepped { next, rule, mut path } => {
                    path.push(i);
                    StepResult::Stepped {
                        next: rebuild(m, next),
                        rule,
                        path,
                    }
                }
                StepResult::Stuck { mut path, reason } => {
                    path.push(i);
                    StepResult::Stuck { path, reason }
                }
                StepResult::Value => StepResult::Stuck {
                    path: vec![i],
                    reason: "internal: context hole is a value".into(),
                },
            }
        }
    }
}

fn child_mut_ref(m: &Proof, _i: u8) -> &Proof {
    match m {
        Proof::App(f, _) | Proof::AppT(f, _) => f,
        Proof::Fst(p) | Proof::Snd(p) | Proof::Magic(p) => p,
        Proof::Case { scrut, .. } => scrut,
        Proof::Let { bound, .. } => bound,
        Proof::AxProp { body, .. } => body,
        _ => unreachable!("not an evaluation context"),
    }
}

fn rebuild(m: &Proof, hole: Proof) -> Proof {
    let h = Box::new(hole);
    match m {
        Proof::App(_, n) => Proof::App(h, n.clone()),
        Proof::AppT(_, t) => Proof::AppT(h, t.clone()),
        Proof::Fst(_) => Proof::Fst(h),
        Proof::Snd(_) => Proof::Snd(h),
        Proof::Magic(_) => Proof::Magic(h),
        Proof::Case {
            lvar,
            lty,
            lbody,
            rvar,
            rty,
            rbody,
            ..
        } => Proof::Case {
            scrut: h,
            lvar: lvar.clone(),
            lty: lty.clone(),
            lbody: lbody.clone(),
            rvar: rvar.clone(),
            rty: rty.clone(),
            rbody: rbody.clone(),
        },
        Proof::Let {
            a, x, ty, body, ..
        } => Proof::Let {
            a: a.clone(),
            x: x.clone(),
            ty: ty.clone(),
            bound: h,
            body: body.clone(),
        },
        Proof::AxProp { ax, t, args, .. } => Proof::AxProp {
            ax: ax.clone(),
            t: t.clone(),
            args: args.clone(),
            body: h,
        },
        _ => unreachable!("not an evaluation context"),
    }
}

fn stuck_or_into<T>(hole: bool, what: &str) -> Local<T> {
    if hole {
        Local::Stuck(format!("{what} of an incompatible value"))
    } else {
        Local::Into(0)
    }
}

fn local(m: &Proof) -> Local<Proof> {
    match m {
        Proof::Var(x) => Local::Stuck(format!("free proof variable `{x}`")),
        Proof::App(f, n) => match f.as_ref() {
            Proof::LamP(x, _, b) => Local::Done(b.subst_proof(x, n), Rule::Beta),
            other => stuck_or_into(other.is_value(), "application"),
        },
        Proof::AppT(f, t) => match f.as_ref() {
            Proof::LamF(a, b) => Local::Done(b.subst_term(a, t), Rule::BetaFo),
            other => stuck_or_into(other.is_value(), "term application"),
        },
        Proof::Fst(p) => match p.as_ref() {
            Proof::Pair(l, _) => Local::Done((**l).clone(), Rule::Fst),
            other => stuck_or_into(other.is_value(), "fst"),
        },
        Proof::Snd(p) => match p.as_ref() {
            Proof::Pair(_, r) => Local::Done((**r).clone(), Rule::Snd),
            other => stuck_or_into(other.is_value(), "snd"),
        },
        Proof::Case {
            scrut,
            lvar,
            lbody,
            rvar,
            rbody,
            ..
        } => match scrut.as_ref() {
            Proof::Inl(v) => Local::Done(lbody.subst_proof(lvar, v), Rule::CaseInl),
            Proof::Inr(v) => Local::Done(rbody.subst_proof(rvar, v), Rule::CaseInr),
            other => stuck_or_into(other.is_value(), "case"),
        },
        Proof::Let {
            a, x, bound, body, ..
        } => match bound.as_ref() {
            Proof::ExIntro(t, w) => Local::Done(body.subst_term(a, t).subst_proof(x, w), Rule::Let),
            other => stuck_or_into(other.is_value(), "let"),
        },
        Proof::Magic(p) => {
            if p.is_value() {
                Local::Stuck("magic of a value".into())
            } else {
                Local::Into(0)
            }
        }
        Proof::AxProp { ax, t, args, body } => match body.as_ref() {
            Proof::AxRep {
                ax: ax2,
                t: t2,
                args: args2,
                body: inner,
            } => {
                if ax.alpha_eq(ax2)
                    && t.alpha_eq(t2)
                    && args.len() == args2.len()
                    && args.iter().zip(args2).all(|(a, b)| a.alpha_eq(b))
                {
                    Local::Done((**inner).clone(), Rule::AxCancel)
                } else {
                    Local::Stuck("axProp applied to a mismatched axRep".into())
                }
            }
            other => stuck_or_into(other.is_value(), "axProp"),
        },
        Proof::Ind { .. } => Local::Done(unfold_ind(m), Rule::Ind),
        _ => unreachable!("values are handled by the caller"),
    }
}

fn ind_fresh(fv_f: &BTreeSet<Var>, fv_p: &BTreeSet<PVar>) -> (Var, Var, PVar) {
    let mut avoid = fv_f.clone();
    let c = fresh_var(&Var::new("c"), &avoid);
    avoid.insert(c.clone());
    let b = fresh_var(&Var::new("b"), &avoid);
    let x = fresh_pvar(&PVar::new("x"), fv_p);
    (c, b, x)
}

/// `ind_φ(M, t̄) → λc. M c (λb. λx : b ∈̄ c. ind_φ(M, t̄) b)`.
pub fn unfold_ind(m: &Proof) -> Proof {
    let Proof::Ind { premise, .. } = m else {
        panic!("unfold_ind on a non-ind term")
    };
    let (fv_p, fv_f) = m.free_vars();
    let (c, b, x) = ind_fresh(&fv_f, &fv_p);
    let (tc, tb) = (Term::Var(c.clone()), Term::Var(b.clone()));
    let hyp = Proof::LamF(
        b.clone(),
        Box::new(Proof::LamP(
            x,
            Formula::MemI(tb.clone(), tc.clone()),
            Box::new(Proof::app_t(m.clone(), tb)),
        )),
    );
    Proof::LamF(
        c,
        Box::new(Proof::app(Proof::app_t((**premise).clone(), tc), hyp)),
    )
}

/// One step of the erased machine.
pub fn step_erased(m: &Erased) -> StepResult<Erased> {
    if m.is_value() {
        return StepResult::Value;
    }
    finish(step_erased_rev(m))
}

fn step_erased_rev(m: &Erased) -> StepResult<Erased> {
    match local_erased(m) {
        Local::Done(next, rule) => StepResult::Stepped {
            next,
            rule,
            path: vec![],
        },
        Local::Stuck(reason) => StepResult::Stuck { path: vec![], reason },
        Local::Into(i) => {
            let child = erased_hole(m);
            match step_erased_rev(child) {
                StepResult::Stepped { next, rule, mut path } => {
                    path.push(i);
                    StepResult::Stepped {
                        next: rebuild_erased(m, next),
                        rule,
                        path,
                    }
                }
                StepResult::Stuck { mut path, reason } => {
                    path.push(i);
                    StepResult::Stuck { path, reason }
                }
                StepResult::Value => StepResult::Stuck {
                    path: vec![i],
                    reason: "internal: context hole is a value".into(),
                },
            }
        }
    }
}

fn erased_hole(m: &Erased) -> &Erased {
    match m {
        Erased::App(f, _) | Erased::AppT(f, _) => f,
        Erased::Fst(p) | Erased::Snd(p) | Erased::Magic(p) | Erased::AxProp(_, p) => p,
        Erased::Case { scrut, .. } => scrut,
        Erased::Let { bound, .. } => bound,
        _ => unreachable!("not an evaluation context"),
    }
}

fn rebuild_erased(m: &Erased, hole: Erased) -> Erased {
    let h = Box::new(hole);
    match m {
        Erased::App(_, n) => Erased::App(h, n.clone()),
        Erased::AppT(_, t) => Erased::AppT(h, t.clone()),
        Erased::Fst(_) => Erased::Fst(h),
        Erased::Snd(_) => Erased::Snd(h),
        Erased::Magic(_) => Erased::Magic(h),
        Erased::AxProp(k, _) => Erased::AxProp(*k, h),
        Erased::Case {
            lvar,
            lbody,
            rvar,
            rbody,
            ..
        } => Erased::Case {
            scrut: h,
            lvar: lvar.clone(),
            lbody: lbody.clone(),
            rvar: rvar.clone(),
            rbody: rbody.clone(),
        },
        Erased::Let { a, x, body, .. } => Erased::Let {
            a: a.clone(),
            x: x.clone(),
            bound: h,
            body: body.clone(),
        },
        _ => unreachable!("not an evaluation context"),
    }
}

fn local_erased(m: &Erased) -> Local<Erased> {
    match m {
        Erased::Var(x) => Local::Stuck(format!("free proof variable `{x}`")),
        Erased::App(f, n) => match f.as_ref() {
            Erased::Lam(x, b) => Local::Done(b.subst_proof(x, n), Rule::Beta),
            other => stuck_or_into(other.is_value(), "application"),
        },
        Erased::AppT(f, t) => match f.as_ref() {
            Erased::LamF(a, b) => Local::Done(b.subst_term(a, t), Rule::BetaFo),
            other => stuck_or_into(other.is_value(), "term application"),
        },
        Erased::Fst(p) => match p.as_ref() {
            Erased::Pair(l, _) => Local::Done((**l).clone(), Rule::Fst),
            other => stuck_or_into(other.is_value(), "fst"),
        },
        Erased::Snd(p) => match p.as_ref() {
            Erased::Pair(_, r) => Local::Done((**r).clone(), Rule::Snd),
            other => stuck_or_into(other.is_value(), "snd"),
        },
        Erased::Case {
            scrut,
            lvar,
            lbody,
            rvar,
            rbody,
        } => match scrut.as_ref() {
            Erased::Inl(v) => Local::Done(lbody.subst_proof(lvar, v), Rule::CaseInl),
            Erased::Inr(v) => Local::Done(rbody.subst_proof(rvar, v), Rule::CaseInr),
            other => stuck_or_into(other.is_value(), "case"),
        },
        Erased::Let { a, x, bound, body } => match bound.as_ref() {
            Erased::ExIntro(t, w) => Local::Done(body.subst_term(a, t).subst_proof(x, w), Rule::Let),
            other => stuck_or_into(other.is_value(), "let"),
        },
        Erased::Magic(p) => {
            if p.is_value() {
                Local::Stuck("magic of a value".into())
            } else {
                Local::Into(0)
            }
        }
        Erased::AxProp(k, body) => match body.as_ref() {
            Erased::AxRep(k2, inner) if k == k2 => Local::Done((**inner).clone(), Rule::AxCancel),
            Erased::AxRep(..) => Local::Stuck("axProp applied to a mismatched axRep".into()),
            other => stuck_or_into(other.is_value(), "axProp"),
        },
        Erased::Ind(_) => Local::Done(unfold_ind_erased(m), Rule::Ind),
        _ => unreachable!("values are handled by the caller"),
    }
}

/// `ind(M) → λc. M c (λb. λx. ind(M) b)`.
pub fn unfold_ind_erased(m: &Erased) -> Erased {
    let Erased::Ind(premise) = m else {
        panic!("unfold_ind_erased on a non-ind term")
    };
    let (fv_p, fv_f) = m.free_vars();
    let (c, b, x) = ind_fresh(&fv_f, &fv_p);
    let (tc, tb) = (Term::Var(c.clone()), Term::Var(b.clone()));
    let hyp = Erased::LamF(
        b,
        Box::new(Erased::Lam(x, Box::new(Erased::app_t(m.clone(), tb)))),
    );
    Erased::LamF(c, Box::new(Erased::app(Erased::app_t((**premise).clone(), tc), hyp)))
}

/// Every (evaluation context, redex) decomposition of `m`, found by a search
/// independent of [`step`]: used to check that reduction is deterministic.
pub fn decompositions(m: &Proof) -> Vec<(Vec<u8>, Rule)> {
    let mut out = Vec::new();
    decomp(m, &mut Vec::new(), &mut out);
    out
}

fn decomp(m: &Proof, path: &mut Vec<u8>, out: &mut Vec<(Vec<u8>, Rule)>) {
    let root = match m {
        Proof::App(f, _) if matches!(**f, Proof::LamP(..)) => Some(Rule::Beta),
        Proof::AppT(f, _) if matches!(**f, Proof::LamF(..)) => Some(Rule::BetaFo),
        Proof::Fst(p) if matches!(**p, Proof::Pair(..)) => Some(Rule::Fst),
        Proof::Snd(p) if matches!(**p, Proof::Pair(..)) => Some(Rule::Snd),
        Proof::Case { scrut, .. } if matches!(**scrut, Proof::Inl(_)) => Some(Rule::CaseInl),
        Proof::Case { scrut, .. } if matches!(**scrut, Proof::Inr(_)) => Some(Rule::CaseInr),
        Proof::Let { bound, .. } if matches!(**bound, Proof::ExIntro(..)) => Some(Rule::Let),
        Proof::AxProp { ax, t, args, body } => match body.as_ref() {
            Proof::AxRep {
                ax: ax2,
                t: t2,
                args: a2,
                ..
            } if ax.alpha_eq(ax2)
                && t.alpha_eq(t2)
                && args.len() == a2.len()
                && args.iter().zip(a2).all(|(x, y)| x.alpha_eq(y)) =>
            {
                Some(Rule::AxCancel)
            }
            _ => None,
        },
        Proof::Ind { .. } => Some(Rule::Ind),
        _ => None,
    };
    if let Some(r) = root {
        out.push((path.clone(), r));
    }
    let hole: Option<&Proof> = match m {
        Proof::App(f, _) | Proof::AppT(f, _) => Some(f),
        Proof::Fst(p) | Proof::Snd(p) | Proof::Magic(p) => Some(p),
        Proof::Case { scrut, .. } => Some(scrut),
        Proof::Let { bound, .. } => Some(bound),
        Proof::AxProp { body, .. } => Some(body),
        _ => None,
    };
    if let Some(h) = hole {
        path.push(0);
        decomp(h, path, out);
        path.pop();
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Value,
    FuelExhausted,
    Stuck { path: Vec<u8>, reason: String },
}

/// The tail of a run: the last `keep` states (oldest first), with the index of
/// the first retained state.
#[derive(Clone, Debug)]
pub struct Trace<T> {
    pub states: VecDeque<T>,
    pub first_index: u64,
    pub steps: u64,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct StepEvent<'a, T> {
    pub index: u64,
    pub rule: Rule,
    pub path: &'a [u8],
    pub state: &'a T,
}

/// Drive a machine. `on_step` sees each new state after it is produced.
pub fn run<T: Reducible>(
    m: &T,
    fuel: u64,
    keep: usize,
    mut on_step: impl FnMut(StepEvent<'_, T>),
) -> (T, Trace<T>) {
    let mut cur = m.clone();
    let mut states = VecDeque::new();
    let mut first_index = 0;
    let mut steps = 0u64;
    let remember = |states: &mut VecDeque<T>, first_index: &mut u64, s: &T| {
        if keep == 0 {
            return;
        }
        if states.len() == keep {
            states.pop_front();
            *first_index += 1;
        }
        states.push_back(s.clone());
    };
    remember(&mut states, &mut first_index, &cur);
    let status = loop {
        match cur.step() {
            StepResult::Value => break Status::Value,
            StepResult::Stuck { path, reason } => break Status::Stuck { path, reason },
            StepResult::Stepped { next, rule, path } => {
                if steps >= fuel {
                    break Status::FuelExhausted;
                }
                steps += 1;
                on_step(StepEvent {
                    index: steps,
                    rule,
                    path: &path,
                    state: &next,
                });
                cur = next;
                remember(&mut states, &mut first_index, &cur);
            }
        }
    };
    let trace = Trace {
        states,
        first_index,
        steps,
        status,
    };
    (cur, trace)
}

#[derive(Clone, Debug)]
pub enum NormalizeError<T> {
    FuelExhausted(Trace<T>),
    Stuck(Trace<T>),
}

impl<T> fmt::Display for NormalizeError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizeError::FuelExhausted(t) => write!(f, "fuel exhausted after {} steps", t.steps),
            NormalizeError::Stuck(t) => match &t.status {
                Status::Stuck { path, reason } => write!(
                    f,
                    "stuck after {} steps at /{}: {reason}",
                    t.steps,
                    crate::typing::path_string(path)
                ),
                _ => write!(f, "stuck"),
            },
        }
    }
}

impl<T: fmt::Debug> std::error::Error for NormalizeError<T> {}

/// Normalize with a step budget; the error carries the last `keep` states.
pub fn normalize_keep<T: Reducible>(m: &T, fuel: u64, keep: usize) -> Result<(T, u64), NormalizeError<T>> {
    let (v, trace) = run(m, fuel, keep, |_| {});
    match trace.status {
        Status::Value => Ok((v, trace.steps)),
        Status::FuelExhausted => Err(NormalizeError::FuelExhausted(trace)),
        Status::Stuck { .. } => Err(NormalizeError::Stuck(trace)),
    }
}

pub fn normalize<T: Reducible>(m: &T, fuel: u64) -> Result<(T, u64), NormalizeError<T>> {
    normalize_keep(m, fuel, DEFAULT_TRACE_KEEP)
}

/// Evaluate without keeping any trace; `None` on fuel exhaustion or stuck state.
pub fn eval<T: Reducible>(m: &T, fuel: u64) -> Option<(T, u64)> {
    normalize_keep(m, fuel, 0).ok()
}

/// First recurrence of an α-equal state within `fuel` steps: `(prefix, period)`.
pub fn detect_cycle<T: Reducible>(m: &T, fuel: u64) -> Option<(u64, u64)> {
    let mut seen: HashMap<T::Canon, u64> = HashMap::new();
    let mut cur = m.clone();
    let mut i = 0u64;
    loop {
        let key = cur.canon();
        if let Some(&j) = seen.get(&key) {
            return Some((j, i - j));
        }
        seen.insert(key, i);
        if i >= fuel {
            return None;
        }
        match cur.step() {
            StepResult::Stepped { next, .. } => cur = next,
            _ => return None,
        }
        i += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Divergence {
    pub index: u64,
    pub typed_erased: Erased,
    pub erased: Erased,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErasureReport {
    pub steps: u64,
    pub typed_status: Status,
    pub erased_status: Status,
    pub divergence: Option<Divergence>,
}

impl ErasureReport {
    pub fn lockstep(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Run both machines side by side, comparing `erase(typed_i)` with `erased_i`.
pub fn simulate_erasure(m: &Proof, fuel: u64) -> ErasureReport {
    let mut typed = m.clone();
    let mut erased = erase(m);
    let mut i = 0u64;
    loop {
        let te = erase(&typed);
        if !te.alpha_eq(&erased) {
            return ErasureReport {
                steps: i,
                typed_status: Status::FuelExhausted,
                erased_status: Status::FuelExhausted,
                divergence: Some(Divergence {
                    index: i,
                    typed_erased: te,
                    erased,
                }),
            };
        }
        let (ts, es) = (step(&typed), step_erased(&erased));
        match (ts, es) {
            (StepResult::Stepped { next: tn, .. }, StepResult::Stepped { next: en, .. }) => {
                if i >= fuel {
                    return ErasureReport {
                        steps: i,
                        typed_status: Status::FuelExhausted,
                        erased_status: Status::FuelExhausted,
                        divergence: None,
                    };
                }
                typed = tn;
                erased = en;
                i += 1;
            }
            (t, e) => {
                let (t_st, e_st) = (result_status(&t), result_status(&e));
                let same = matches!(
                    (&t_st, &e_st),
                    (Some(Status::Value), Some(Status::Value))
                        | (Some(Status::Stuck { .. }), Some(Status::Stuck { .. }))
                );
                let divergence = if same {
                    None
                } else {
                    Some(Divergence {
                        index: i,
                        typed_erased: erase(&typed),
                        erased: erased.clone(),
                    })
                };
                return ErasureReport {
                    steps: i,
                    typed_status: t_st.unwrap_or(Status::FuelExhausted),
                    erased_status: e_st.unwrap_or(Status::FuelExhausted),
                    divergence,
                };
            }
        }
    }
}

fn result_status<T>(r: &StepResult<T>) -> Option<Status> {
    match r {
        StepResult::Value => Some(Status::Value),
        StepResult::Stuck { path, reason } => Some(Status::Stuck {
            path: path.clone(),
            reason: reason.clone(),
        }),
        StepResult::Stepped { .. } => None,
    }
}
