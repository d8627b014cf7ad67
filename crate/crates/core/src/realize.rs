//! Realizability over finite universes of λ-names.
//!
//! Every quantifier of the realizability clauses that ranges over a proper
//! class is replaced by a finite surrogate from [`RealizCfg`], so a verdict is
//! a test result relative to that configuration, not a decision.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::axioms::{phi_a, AxKind, AxiomId};
use crate::proof::{Erased, PVar};
use crate::reduce::{normalize_keep, NormalizeError};
use crate::syntax::sugar::succ;
use crate::syntax::{Formula, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RealizError {
    #[error("unsupported formula: {0}")]
    UnsupportedFormula(String),
    #[error("variable `{0}` has no value in the environment")]
    Unbound(Var),
    #[error("label `{0}` is not a value")]
    LabelNotValue(String),
    #[error("configuration has an empty {0}")]
    EmptyConfig(&'static str),
}

/// A hereditarily finite set of (erased value, λ-name) pairs. Labels are kept
/// in canonical form, so equality is set equality up to α on labels.
#[derive(Clone)]
pub struct LambdaName(Arc<NameInner>);

struct NameInner {
    members: Vec<(Erased, LambdaName)>,
    key: String,
    depth: usize,
}

impl LambdaName {
    pub fn empty() -> LambdaName {
        LambdaName::build(Vec::new())
    }

    pub fn new(members: impl IntoIterator<Item = (Erased, LambdaName)>) -> Result<LambdaName, RealizError> {
        let mut out = Vec::new();
        for (l, a) in members {
            if !l.is_value() {
                return Err(RealizError::LabelNotValue(l.to_string()));
            }
            out.push((l.canonical(), a));
        }
        Ok(LambdaName::build(out))
    }

    pub fn singleton(label: Erased, a: LambdaName) -> Result<LambdaName, RealizError> {
        LambdaName::new([(label, a)])
    }

    fn build(members: Vec<(Erased, LambdaName)>) -> LambdaName {
        let mut keyed: Vec<(String, Erased, LambdaName)> = members
            .into_iter()
            .map(|(l, a)| (format!("{l}:{}", a.key()), l, a))
            .collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));
        keyed.dedup_by(|x, y| x.0 == y.0);
        let key = format!("{{{}}}", keyed.iter().map(|k| k.0.as_str()).collect::<Vec<_>>().join(", "));
        let depth = keyed.iter().map(|k| k.2.depth() + 1).max().unwrap_or(0);
        LambdaName(Arc::new(NameInner {
            members: keyed.into_iter().map(|(_, l, a)| (l, a)).collect(),
            key,
            depth,
        }))
    }

    pub fn members(&self) -> &[(Erased, LambdaName)] {
        &self.0.members
    }

    pub fn is_empty(&self) -> bool {
        self.0.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.members.len()
    }

    /// 0 for the empty name; one more than the deepest member otherwise.
    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn key(&self) -> &str {
        &self.0.key
    }

    pub fn contains(&self, v: &Erased, a: &LambdaName) -> bool {
        let v = v.canonical();
        self.members().iter().any(|(l, b)| *l == v && b == a)
    }

    /// Labels occurring anywhere in the name, without repetition.
    pub fn labels(&self) -> Vec<Erased> {
        let mut out: Vec<Erased> = Vec::new();
        fn go(n: &LambdaName, out: &mut Vec<Erased>) {
            for (l, a) in n.members() {
                if !out.contains(l) {
                    out.push(l.clone());
                }
                go(a, out);
            }
        }
        go(self, &mut out);
        out
    }
}

impl PartialEq for LambdaName {
    fn eq(&self, other: &LambdaName) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.key() == other.key()
    }
}

impl Eq for LambdaName {}

impl std::hash::Hash for LambdaName {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.key().hash(h)
    }
}

impl PartialOrd for LambdaName {
    fn partial_cmp(&self, other: &LambdaName) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LambdaName {
    fn cmp(&self, other: &LambdaName) -> std::cmp::Ordering {
        self.key().cmp(other.key())
    }
}

impl fmt::Display for LambdaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl fmt::Debug for LambdaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// The meaning of a set term: a finite name, ω′, or the intensional meaning of
/// a term-form axiom set `{(axRep(N), B) | N ⊩ φ_A(B, ū)}`.
#[derive(Clone, Debug)]
pub enum Den {
    Name(LambdaName),
    Omega,
    Term {
        ax: AxiomId,
        args: Vec<Den>,
        /// Values of schema variables that are free in the term.
        captured: Arc<Env>,
        key: String,
    },
}

impl Den {
    fn term(ax: AxiomId, args: Vec<Den>, captured: Env) -> Den {
        let cap: Vec<String> = captured.iter().map(|(v, d)| format!("{v}={}", d.key())).collect();
        let key = format!(
            "{ax:?}({}){}",
            args.iter().map(|a| a.key()).collect::<Vec<_>>().join(", "),
            if cap.is_empty() { String::new() } else { format!("[{}]", cap.join(", ")) }
        );
        Den::Term {
            ax,
            args,
            captured: Arc::new(captured),
            key,
        }
    }

    pub fn key(&self) -> String {
        match self {
            Den::Name(n) => n.key().to_string(),
            Den::Omega => "ω′".into(),
            Den::Term { key, .. } => key.clone(),
        }
    }

    pub fn as_name(&self) -> Option<&LambdaName> {
        match self {
            Den::Name(n) => Some(n),
            _ => None,
        }
    }
}

impl From<LambdaName> for Den {
    fn from(n: LambdaName) -> Den {
        Den::Name(n)
    }
}

impl PartialEq for Den {
    fn eq(&self, other: &Den) -> bool {
        self.key() == other.key()
    }
}

impl fmt::Display for Den {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

pub type Env = BTreeMap<Var, Den>;

/// Meaning of a term in an environment. V_i and the nwf constants have none here.
pub fn denote(t: &Term, env: &Env) -> Result<Den, RealizError> {
    let d = |t: &Term| denote(t, env);
    Ok(match t {
        Term::Var(v) => env.get(v).cloned().ok_or_else(|| RealizError::Unbound(v.clone()))?,
        // φ_∅ is ⊥, so the term meaning has no members.
        Term::Empty => Den::Name(LambdaName::empty()),
        Term::Omega => Den::Omega,
        Term::Inac(i) => return Err(RealizError::UnsupportedFormula(format!("V{i}"))),
        Term::Const(c) => return Err(RealizError::UnsupportedFormula(format!("constant {c:?}"))),
        Term::Pair(a, b) => Den::term(AxiomId::Pair, vec![d(a)?, d(b)?], Env::new()),
        Term::Union(a) => Den::term(AxiomId::Union, vec![d(a)?], Env::new()),
        Term::Power(a) => Den::term(AxiomId::Power, vec![d(a)?], Env::new()),
        Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
            let ax = if matches!(t, Term::Sep(..)) {
                AxiomId::Sep(s.clone())
            } else {
                AxiomId::Repl(s.clone())
            };
            let mut dens = vec![d(u)?];
            for a in args {
                dens.push(d(a)?);
            }
            let mut captured = Env::new();
            for v in s.free_vars() {
                captured.insert(v.clone(), env.get(&v).cloned().ok_or(RealizError::Unbound(v))?);
            }
            Den::term(ax, dens, captured)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Realizes,
    Fails,
    Unknown(String),
}

impl Verdict {
    pub fn is_realizes(&self) -> bool {
        *self == Verdict::Realizes
    }

    fn and_then(self, f: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Realizes => f(),
            Verdict::Fails => Verdict::Fails,
            u @ Verdict::Unknown(_) => match f() {
                Verdict::Fails => Verdict::Fails,
                _ => u,
            },
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Realizes => write!(f, "realizes"),
            Verdict::Fails => write!(f, "fails"),
            Verdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

fn bool_v(b: bool) -> Verdict {
    if b {
        Verdict::Realizes
    } else {
        Verdict::Fails
    }
}

/// Conjunction over a lazily produced family; stops at the first failure.
fn all(it: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut unknown = None;
    for v in it {
        match v {
            Verdict::Realizes => {}
            Verdict::Fails => return Verdict::Fails,
            u @ Verdict::Unknown(_) => {
                unknown.get_or_insert(u);
            }
        }
    }
    unknown.unwrap_or(Verdict::Realizes)
}

/// Disjunction over a lazily produced family; stops at the first success.
fn any(it: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut unknown = None;
    for v in it {
        match v {
            Verdict::Realizes => return Verdict::Realizes,
            Verdict::Fails => {}
            u @ Verdict::Unknown(_) => {
                unknown.get_or_insert(u);
            }
        }
    }
    unknown.unwrap_or(Verdict::Fails)
}

#[derive(Clone, Debug)]
pub struct RealizCfg {
    pub fuel: u64,
    /// Surrogate for the class of all λ-names.
    pub universe: Vec<LambdaName>,
    /// Surrogate for "all realizers" in negative positions.
    pub pool: Vec<Erased>,
    /// Surrogate for the set of all terms.
    pub terms: Vec<Term>,
    /// When set, a negative-position quantifier whose candidates came from a
    /// finite surrogate answers Unknown instead of Realizes.
    pub truncated: bool,
    pub candidate_cap: usize,
    pub depth_limit: u32,
}

impl RealizCfg {
    pub fn new(depth: usize) -> RealizCfg {
        RealizCfg {
            fuel: 10_000,
            universe: universe(depth),
            pool: default_pool(),
            terms: vec![Term::Empty],
            truncated: false,
            candidate_cap: 32,
            depth_limit: 64,
        }
    }

    pub fn validate(&self) -> Result<(), RealizError> {
        if self.universe.is_empty() {
            return Err(RealizError::EmptyConfig("name universe"));
        }
        if self.pool.is_empty() {
            return Err(RealizError::EmptyConfig("realizer pool"));
        }
        if self.terms.is_empty() {
            return Err(RealizError::EmptyConfig("term pool"));
        }
        Ok(())
    }
}

impl Default for RealizCfg {
    fn default() -> RealizCfg {
        RealizCfg::new(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Rel {
    MemI,
    Mem,
    Eq,
}

/// Candidate realizers of some formula, each already checked to realize it.
/// `exact` means no realizer outside the list can make a difference.
#[derive(Clone, Debug)]
struct Cands {
    items: Vec<Erased>,
    exact: bool,
}

impl Cands {
    fn exact(items: Vec<Erased>) -> Cands {
        Cands { items, exact: true }
    }

    fn push_unique(&mut self, m: Erased) {
        let c = m.canonical();
        if !self.items.iter().any(|x| x.canonical() == c) {
            self.items.push(m);
        }
    }
}

/// Which set the predecessor of a successor entry of ω′ must belong to.
#[derive(Clone, Copy)]
enum Approx<'a> {
    Full,
    Finite(&'a LambdaName),
}

macro_rules! whnf {
    ($s:expr, $m:expr) => {
        match $s.whnf($m) {
            Ok(v) => v,
            Err(r) => return r,
        }
    };
}

/// Clause evaluator with memoized atomic verdicts for one configuration.
pub struct Realizer {
    cfg: RealizCfg,
    memo: RefCell<HashMap<(Rel, Erased, String, String), Verdict>>,
    gen_memo: RefCell<HashMap<String, Cands>>,
    depth: Cell<u32>,
}

impl Realizer {
    pub fn new(cfg: RealizCfg) -> Result<Realizer, RealizError> {
        cfg.validate()?;
        Ok(Realizer {
            cfg,
            memo: RefCell::new(HashMap::new()),
            gen_memo: RefCell::new(HashMap::new()),
            depth: Cell::new(0),
        })
    }

    pub fn cfg(&self) -> &RealizCfg {
        &self.cfg
    }

    fn whnf(&self, m: &Erased) -> Result<Erased, Verdict> {
        if m.is_value() {
            return Ok(m.clone());
        }
        match normalize_keep(m, self.cfg.fuel, 0) {
            Ok((v, _)) => Ok(v),
            Err(NormalizeError::FuelExhausted(_)) => Err(Verdict::Unknown("fuel exhausted".into())),
            Err(NormalizeError::Stuck(_)) => Err(Verdict::Fails),
        }
    }

    fn guarded(&self, f: impl FnOnce() -> Verdict) -> Verdict {
        let d = self.depth.get();
        if d >= self.cfg.depth_limit {
            return Verdict::Unknown("recursion depth limit".into());
        }
        self.depth.set(d + 1);
        let r = f();
        self.depth.set(d);
        r
    }

    fn memoized(&self, rel: Rel, v: &Erased, a: &Den, b: &Den, f: impl FnOnce() -> Verdict) -> Verdict {
        let key = (rel, v.canonical(), a.key(), b.key());
        if let Some(r) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        let r = self.guarded(f);
        // Unknown may stem from the depth guard, which depends on the call path.
        if !matches!(r, Verdict::Unknown(_)) {
            self.memo.borrow_mut().insert(key, r.clone());
        }
        r
    }

    fn names(&self, witness: Option<&Term>) -> Vec<Den> {
        let mut out: Vec<Den> = self.cfg.universe.iter().cloned().map(Den::Name).collect();
        if let Some(t) = witness {
            if let Ok(d) = denote(t, &Env::new()) {
                if !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out
    }

    /// `M ⊩ A ∈̄ B`.
    pub fn mem_i(&self, m: &Erased, a: &Den, b: &Den) -> Verdict {
        let v = whnf!(self, m);
        self.memoized(Rel::MemI, &v, a, b, || match b {
            Den::Name(bn) => match a {
                Den::Name(an) => bool_v(bn.contains(&v, an)),
                _ => Verdict::Unknown("element of a finite name is not itself finite".into()),
            },
            Den::Omega => self.omega_clause(&v, a, Approx::Full),
            Den::Term { ax, args, captured, .. } => {
                let Erased::AxRep(k, body) = &v else {
                    return Verdict::Fails;
                };
                if ax.kind() != Some(*k) {
                    return Verdict::Fails;
                }
                let (phi, env) = phi_instance(ax, a, args, captured);
                self.formula(body, &phi, &env)
            }
        })
    }

    /// `M ⊩ A ∈ B`.
    pub fn mem(&self, m: &Erased, a: &Den, b: &Den) -> Verdict {
        let v = whnf!(self, m);
        self.memoized(Rel::Mem, &v, a, b, || {
            let Erased::AxRep(AxKind::In, n) = &v else {
                return Verdict::Fails;
            };
            let w = whnf!(self, n);
            let Erased::ExIntro(u, o) = &w else {
                return Verdict::Fails;
            };
            let p = whnf!(self, o);
            let Erased::Pair(o1, o2) = &p else {
                return Verdict::Fails;
            };
            let l = whnf!(self, o1);
            let cs: Vec<Den> = match b {
                Den::Name(bn) => {
                    let lc = l.canonical();
                    bn.members()
                        .iter()
                        .filter(|(lab, _)| *lab == lc)
                        .map(|(_, c)| Den::Name(c.clone()))
                        .collect()
                }
                _ => self.names(Some(u)),
            };
            any(cs.iter().map(|c| self.mem_i(&l, c, b).and_then(|| self.eq(o2, a, c))))
        })
    }

    /// `M ⊩ A = B`.
    pub fn eq(&self, m: &Erased, a: &Den, b: &Den) -> Verdict {
        let v = whnf!(self, m);
        self.memoized(Rel::Eq, &v, a, b, || {
            let Erased::AxRep(AxKind::Eq, m0) = &v else {
                return Verdict::Fails;
            };
            let f = whnf!(self, m0);
            let Erased::LamF(av, m1) = &f else {
                return Verdict::Fails;
            };
            let ds = self.eq_range(a, b);
            all(self.cfg.terms.iter().map(|t| {
                let body = m1.subst_term(av, t);
                let p = whnf!(self, &body);
                let Erased::Pair(o, pp) = &p else {
                    return Verdict::Fails;
                };
                let ov = whnf!(self, o);
                let Erased::Lam(x, o1) = &ov else {
                    return Verdict::Fails;
                };
                let pv = whnf!(self, pp);
                let Erased::Lam(y, p1) = &pv else {
                    return Verdict::Fails;
                };
                all(ds
                    .iter()
                    .map(|d| self.direction(x, o1, d, a, b).and_then(|| self.direction(y, p1, d, b, a))))
            }))
        })
    }

    /// `∀N. N ⊩ D ∈̄ from → body[x:=N] ⊩ D ∈ to`.
    fn direction(&self, x: &PVar, body: &Erased, d: &Den, from: &Den, to: &Den) -> Verdict {
        let cs = self.cands_mem_i(d, from);
        self.forall_cands(&cs, |n| self.mem(&body.subst_proof(x, n), d, to))
    }

    /// Range of `∀D` in the equality clause. For two finite names only their
    /// members matter; other D make both implications vacuous.
    fn eq_range(&self, a: &Den, b: &Den) -> Vec<Den> {
        let mut out: Vec<Den> = Vec::new();
        let finite = |d: &Den, out: &mut Vec<Den>| {
            if let Den::Name(n) = d {
                for (_, c) in n.members() {
                    let c = Den::Name(c.clone());
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        };
        finite(a, &mut out);
        finite(b, &mut out);
        if a.as_name().is_none() || b.as_name().is_none() {
            for n in &self.cfg.universe {
                let c = Den::Name(n.clone());
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn forall_cands(&self, cs: &Cands, f: impl Fn(&Erased) -> Verdict) -> Verdict {
        let r = all(cs.items.iter().map(f));
        if r.is_realizes() && !cs.exact && self.cfg.truncated {
            Verdict::Unknown("realizer pool truncated".into())
        } else {
            r
        }
    }

    fn pool_filter(&self, cs: &mut Cands, extra: &[Erased], ok: impl Fn(&Erased) -> bool) {
        for m in self.cfg.pool.iter().chain(extra) {
            if cs.items.len() >= self.cfg.candidate_cap {
                cs.exact = false;
                return;
            }
            if ok(m) {
                cs.push_unique(m.clone());
            }
        }
    }

    fn cap(&self, mut cs: Cands) -> Cands {
        if cs.items.len() > self.cfg.candidate_cap {
            cs.items.truncate(self.cfg.candidate_cap);
            cs.exact = false;
        }
        cs
    }

    /// Candidate realizers of `D ∈̄ B`.
    fn cands_mem_i(&self, d: &Den, b: &Den) -> Cands {
        let key = format!("memi|{}|{}", d.key(), b.key());
        if let Some(c) = self.gen_memo.borrow().get(&key) {
            return c.clone();
        }
        let cs = match b {
            Den::Name(bn) => match d {
                Den::Name(dn) => Cands::exact(
                    bn.members()
                        .iter()
                        .filter(|(_, c)| c == dn)
                        .map(|(l, _)| l.clone())
                        .collect(),
                ),
                _ => Cands {
                    items: Vec::new(),
                    exact: false,
                },
            },
            Den::Omega => {
                let zero = Den::Name(LambdaName::empty());
                let mut cs = Cands {
                    items: Vec::new(),
                    exact: false,
                };
                for o in self.cands_atom(Rel::Eq, d, &zero).items {
                    cs.push_unique(Erased::AxRep(AxKind::Inf, Box::new(Erased::Inl(Box::new(o)))));
                }
                self.pool_filter(&mut cs, &[], |m| self.mem_i(m, d, b).is_realizes());
                cs
            }
            Den::Term { ax, args, captured, .. } => {
                let (phi, env) = phi_instance(ax, d, args, captured);
                let inner = self.gen(&phi, &env);
                let k = ax.kind().expect("term-form axiom");
                let mut cs = Cands {
                    items: inner
                        .items
                        .into_iter()
                        .map(|n| Erased::AxRep(k, Box::new(n)))
                        .collect(),
                    exact: inner.exact,
                };
                self.pool_filter(&mut cs, &[], |m| self.mem_i(m, d, b).is_realizes());
                cs
            }
        };
        let cs = self.cap(cs);
        self.gen_memo.borrow_mut().insert(key, cs.clone());
        cs
    }

    /// Candidate realizers of `A ∈ B` or `A = B`.
    fn cands_atom(&self, rel: Rel, a: &Den, b: &Den) -> Cands {
        let key = format!("{rel:?}|{}|{}", a.key(), b.key());
        if let Some(c) = self.gen_memo.borrow().get(&key) {
            return c.clone();
        }
        // Placeholder against re-entry while this entry is being computed.
        self.gen_memo.borrow_mut().insert(
            key.clone(),
            Cands {
                items: Vec::new(),
                exact: false,
            },
        );
        let mut cs = Cands {
            items: Vec::new(),
            exact: false,
        };
        let mut extra = Vec::new();
        for d in [a, b] {
            if let Den::Name(n) = d {
                extra.extend(n.labels());
            }
        }
        if rel == Rel::Mem {
            if let Den::Name(bn) = b {
                for (l, c) in bn.members() {
                    for e in self.cands_atom(Rel::Eq, a, &Den::Name(c.clone())).items {
                        let w = Erased::ExIntro(Term::Empty, Box::new(Erased::Pair(Box::new(l.clone()), Box::new(e))));
                        cs.push_unique(Erased::AxRep(AxKind::In, Box::new(w)));
                    }
                }
            }
        }
        match rel {
            Rel::Mem => self.pool_filter(&mut cs, &extra, |m| self.mem(m, a, b).is_realizes()),
            _ => self.pool_filter(&mut cs, &extra, |m| self.eq(m, a, b).is_realizes()),
        }
        let cs = self.cap(cs);
        self.gen_memo.borrow_mut().insert(key, cs.clone());
        cs
    }

    /// Candidate realizers of `φ` under `env`, each checked.
    fn gen(&self, phi: &Formula, env: &Env) -> Cands {
        let den = |t: &Term| denote(t, env);
        match phi {
            Formula::Bottom => Cands::exact(Vec::new()),
            Formula::MemI(t, s) | Formula::Mem(t, s) | Formula::Eq(t, s) => {
                let (Ok(a), Ok(b)) = (den(t), den(s)) else {
                    return Cands {
                        items: Vec::new(),
                        exact: false,
                    };
                };
                match phi {
                    Formula::MemI(..) => self.cands_mem_i(&a, &b),
                    Formula::Mem(..) => self.cands_atom(Rel::Mem, &a, &b),
                    _ => self.cands_atom(Rel::Eq, &a, &b),
                }
            }
            Formula::And(p, q) => {
                let (cp, cq) = (self.gen(p, env), self.gen(q, env));
                let mut items = Vec::new();
                for x in &cp.items {
                    for y in &cq.items {
                        items.push(Erased::Pair(Box::new(x.clone()), Box::new(y.clone())));
                    }
                }
                self.cap(Cands {
                    items,
                    exact: cp.exact && cq.exact,
                })
            }
            Formula::Or(p, q) => {
                let (cp, cq) = (self.gen(p, env), self.gen(q, env));
                let mut items: Vec<Erased> = cp.items.into_iter().map(|x| Erased::Inl(Box::new(x))).collect();
                items.extend(cq.items.into_iter().map(|x| Erased::Inr(Box::new(x))));
                self.cap(Cands {
                    items,
                    exact: cp.exact && cq.exact,
                })
            }
            Formula::Exists(a, p) => {
                let mut cs = Cands {
                    items: Vec::new(),
                    exact: false,
                };
                for n in &self.cfg.universe {
                    let mut e = env.clone();
                    e.insert(a.clone(), Den::Name(n.clone()));
                    for x in self.gen(p, &e).items {
                        cs.push_unique(Erased::ExIntro(Term::Empty, Box::new(x)));
                        if cs.items.len() >= self.cfg.candidate_cap {
                            return cs;
                        }
                    }
                }
                cs
            }
            Formula::Imp(..) | Formula::Forall(..) => {
                let mut cs = Cands {
                    items: Vec::new(),
                    exact: false,
                };
                self.pool_filter(&mut cs, &[], |m| self.formula(m, phi, env).is_realizes());
                cs
            }
        }
    }

    /// `M ⊩_ρ φ` for a formula already validated against `env`.
    fn formula(&self, m: &Erased, phi: &Formula, env: &Env) -> Verdict {
        self.guarded(|| self.formula_inner(m, phi, env))
    }

    fn formula_inner(&self, m: &Erased, phi: &Formula, env: &Env) -> Verdict {
        let atom = |t: &Term, s: &Term, f: &dyn Fn(&Den, &Den) -> Verdict| match (denote(t, env), denote(s, env)) {
            (Ok(a), Ok(b)) => f(&a, &b),
            (Err(e), _) | (_, Err(e)) => Verdict::Unknown(e.to_string()),
        };
        match phi {
            Formula::Bottom => Verdict::Fails,
            Formula::MemI(t, s) => atom(t, s, &|a, b| self.mem_i(m, a, b)),
            Formula::Mem(t, s) => atom(t, s, &|a, b| self.mem(m, a, b)),
            Formula::Eq(t, s) => atom(t, s, &|a, b| self.eq(m, a, b)),
            Formula::And(p, q) => {
                let v = whnf!(self, m);
                let Erased::Pair(m1, m2) = &v else {
                    return Verdict::Fails;
                };
                self.formula(m1, p, env).and_then(|| self.formula(m2, q, env))
            }
            Formula::Or(p, q) => match whnf!(self, m) {
                Erased::Inl(n) => self.formula(&n, p, env),
                Erased::Inr(n) => self.formula(&n, q, env),
                _ => Verdict::Fails,
            },
            Formula::Imp(p, q) => {
                let v = whnf!(self, m);
                let Erased::Lam(x, body) = &v else {
                    return Verdict::Fails;
                };
                let cs = self.gen(p, env);
                self.forall_cands(&cs, |n| self.formula(&body.subst_proof(x, n), q, env))
            }
            Formula::Exists(a, p) => {
                let v = whnf!(self, m);
                let Erased::ExIntro(t, n) = &v else {
                    return Verdict::Fails;
                };
                any(self.names(Some(t)).into_iter().map(|d| {
                    let mut e = env.clone();
                    e.insert(a.clone(), d);
                    self.formula(n, p, &e)
                }))
            }
            Formula::Forall(a, p) => {
                let v = whnf!(self, m);
                let Erased::LamF(av, n) = &v else {
                    return Verdict::Fails;
                };
                all(self.cfg.universe.iter().flat_map(|d| {
                    self.cfg.terms.iter().map(move |t| {
                        let mut e = env.clone();
                        e.insert(a.clone(), Den::Name(d.clone()));
                        self.formula(&n.subst_term(av, t), p, &e)
                    })
                }))
            }
        }
    }

    /// Whether `(v, A)` is justified as a member of ω′ by the base clause or the
    /// successor clause, predecessors being drawn from ω′ itself or from `approx`.
    fn omega_clause(&self, v: &Erased, a: &Den, approx: Approx<'_>) -> Verdict {
        let Erased::AxRep(AxKind::Inf, n) = v else {
            return Verdict::Fails;
        };
        match whnf!(self, n) {
            Erased::Inl(o) => self.eq(&o, a, &Den::Name(LambdaName::empty())),
            Erased::Inr(n1) => {
                let e = whnf!(self, &n1);
                let Erased::ExIntro(t, o) = &e else {
                    return Verdict::Fails;
                };
                let p = whnf!(self, o);
                let Erased::Pair(mm, pp) = &p else {
                    return Verdict::Fails;
                };
                let mut bs = self.names(Some(t));
                let carrier = match approx {
                    Approx::Full => Den::Omega,
                    Approx::Finite(n) => {
                        for (_, c) in n.members() {
                            let c = Den::Name(c.clone());
                            if !bs.contains(&c) {
                                bs.push(c);
                            }
                        }
                        Den::Name(n.clone())
                    }
                };
                any(bs
                    .iter()
                    .map(|b| self.mem(mm, b, &carrier).and_then(|| self.eq(pp, a, &succ_den(b)))))
            }
            _ => Verdict::Fails,
        }
    }

    pub fn reals(&self, m: &Erased, phi: &Formula, env: &Env) -> Result<Verdict, RealizError> {
        validate_formula(phi, env)?;
        Ok(self.formula(m, phi, env))
    }

    pub fn omega_prime_member(&self, entry: (&Erased, &LambdaName), approx: &LambdaName) -> Verdict {
        let v = whnf!(self, entry.0);
        self.omega_clause(&v, &Den::Name(entry.1.clone()), Approx::Finite(approx))
    }
}

fn validate_formula(phi: &Formula, env: &Env) -> Result<(), RealizError> {
    if phi.mentions_inac() {
        return Err(RealizError::UnsupportedFormula(format!("`{phi}` mentions an inaccessible")));
    }
    if phi.mentions_const() {
        return Err(RealizError::UnsupportedFormula(format!("`{phi}` mentions an nwf constant")));
    }
    if let Some(v) = phi.free_vars().into_iter().find(|v| !env.contains_key(v)) {
        return Err(RealizError::Unbound(v));
    }
    Ok(())
}

/// `φ_A(c, ū)` over fresh variables bound to the given meanings.
fn phi_instance(ax: &AxiomId, c: &Den, args: &[Den], captured: &Env) -> (Formula, Env) {
    let mut env = captured.clone();
    let cv = Var::new("%c");
    env.insert(cv.clone(), c.clone());
    let mut ts = Vec::new();
    for (i, a) in args.iter().enumerate() {
        let v = Var::new(&format!("%u{i}"));
        env.insert(v.clone(), a.clone());
        ts.push(Term::Var(v));
    }
    let phi = phi_a(ax, &Term::Var(cv), &ts).expect("arity matches the term former");
    (phi, env)
}

fn succ_den(b: &Den) -> Den {
    let v = Var::new("%b");
    let env = Env::from([(v.clone(), b.clone())]);
    denote(&succ(Term::Var(v)), &env).expect("closed under env")
}

/// `M ⊩ A ∈̄ B`: evaluate `M` and look it up.
pub fn reals_mem_i(m: &Erased, a: &LambdaName, b: &LambdaName, fuel: u64) -> Verdict {
    let v = if m.is_value() {
        m.clone()
    } else {
        match normalize_keep(m, fuel, 0) {
            Ok((v, _)) => v,
            Err(NormalizeError::FuelExhausted(_)) => return Verdict::Unknown("fuel exhausted".into()),
            Err(NormalizeError::Stuck(_)) => return Verdict::Fails,
        }
    };
    bool_v(b.contains(&v, a))
}

pub fn reals_mem(m: &Erased, a: &Den, b: &Den, cfg: &RealizCfg) -> Result<Verdict, RealizError> {
    Ok(Realizer::new(cfg.clone())?.mem(m, a, b))
}

pub fn reals_eq(m: &Erased, a: &Den, b: &Den, cfg: &RealizCfg) -> Result<Verdict, RealizError> {
    Ok(Realizer::new(cfg.clone())?.eq(m, a, b))
}

pub fn reals(m: &Erased, phi: &Formula, env: &Env, cfg: &RealizCfg) -> Result<Verdict, RealizError> {
    Realizer::new(cfg.clone())?.reals(m, phi, env)
}

pub fn omega_prime_member(
    entry: (&Erased, &LambdaName),
    approx: &LambdaName,
    cfg: &RealizCfg,
) -> Result<Verdict, RealizError> {
    Ok(Realizer::new(cfg.clone())?.omega_prime_member(entry, approx))
}

// Term builders for the realizers below.

fn v(x: &str) -> Erased {
    Erased::var(x)
}

fn bx(m: Erased) -> Box<Erased> {
    Box::new(m)
}

fn lam(x: &str, b: Erased) -> Erased {
    Erased::lam(x, b)
}

fn lamf(a: &str, b: Erased) -> Erased {
    Erased::lamf(a, b)
}

fn app(f: Erased, n: Erased) -> Erased {
    Erased::app(f, n)
}

fn at(f: Erased, a: &str) -> Erased {
    Erased::app_t(f, Term::var(a))
}

fn pair(m: Erased, n: Erased) -> Erased {
    Erased::pair(m, n)
}

fn fst(m: Erased) -> Erased {
    Erased::fst(m)
}

fn snd(m: Erased) -> Erased {
    Erased::snd(m)
}

fn ex(t: &str, m: Erased) -> Erased {
    Erased::ExIntro(Term::var(t), bx(m))
}

fn rep(k: AxKind, m: Erased) -> Erased {
    Erased::AxRep(k, bx(m))
}

fn prop(k: AxKind, m: Erased) -> Erased {
    Erased::AxProp(k, bx(m))
}

fn let_ex(a: &str, x: &str, bound: Erased, body: Erased) -> Erased {
    Erased::Let {
        a: Var::new(a),
        x: PVar::new(x),
        bound: bx(bound),
        body: bx(body),
    }
}

/// `ind(M)`, `M = λc. λx. eqRep(λd. <N, N>)`, `N = λy. inRep([d, <y, x d y>])`.
pub fn mk_eq_refl() -> Erased {
    let n = lam(
        "y",
        rep(AxKind::In, ex("d", pair(v("y"), app(at(v("x"), "d"), v("y"))))),
    );
    let m = lamf("c", lam("x", rep(AxKind::Eq, lamf("d", pair(n.clone(), n)))));
    Erased::Ind(bx(m))
}

/// `λa, b. λx. eqRep(λd. <snd(eqProp(x) d), fst(eqProp(x) d)>)`.
pub fn mk_eq_symm() -> Erased {
    let px = || at(prop(AxKind::Eq, v("x")), "d");
    lamf(
        "a",
        lamf("b", lam("x", rep(AxKind::Eq, lamf("d", pair(snd(px()), fst(px())))))),
    )
}

/// `ind(M₀)` with the two halves `N` and `O` of the equality proof.
pub fn mk_eq_trans() -> Erased {
    let ih = || {
        app(
            at(at(app(at(v("x1"), "a2"), fst(v("x4"))), "f"), "a3"),
            pair(snd(v("x4")), snd(v("x5"))),
        )
    };
    let fin = || rep(AxKind::In, ex("a3", pair(fst(v("x5")), ih())));
    let half = |first: fn(Erased) -> Erased, second: fn(Erased) -> Erased, sel: fn(Erased) -> Erased| {
        let inner = let_ex(
            "a3",
            "x5",
            prop(
                AxKind::In,
                app(sel(at(prop(AxKind::Eq, second(v("x2"))), "a2")), fst(v("x4"))),
            ),
            fin(),
        );
        lam(
            "x3",
            let_ex(
                "a2",
                "x4",
                prop(AxKind::In, app(sel(at(prop(AxKind::Eq, first(v("x2"))), "f")), v("x3"))),
                inner,
            ),
        )
    };
    // N walks A → B → C through fst components, O walks C → B → A through snd.
    let n = half(fst, snd, fst);
    let o = half(snd, fst, snd);
    let m0 = lamf(
        "b",
        lam(
            "x1",
            lamf("a1", lamf("c", lam("x2", rep(AxKind::Eq, lamf("f", pair(n, o)))))),
        ),
    );
    Erased::Ind(bx(m0))
}

/// `λa, b, c, x. let [d, y] := inProp(fst(x)) in
///  inRep([d, <fst(y), eqTrans a b c <eqSymm a b snd(x), snd(y)>>])`.
pub fn mk_lei() -> Erased {
    let symm = app(at(at(mk_eq_symm(), "a"), "b"), snd(v("x")));
    let trans = app(at(at(at(mk_eq_trans(), "a"), "b"), "c"), pair(symm, snd(v("y"))));
    lamf(
        "a",
        lamf(
            "b",
            lamf(
                "c",
                lam(
                    "x",
                    let_ex(
                        "d",
                        "y",
                        prop(AxKind::In, fst(v("x"))),
                        rep(AxKind::In, ex("d", pair(fst(v("y")), trans))),
                    ),
                ),
            ),
        ),
    )
}

pub fn identity() -> Erased {
    lam("x", v("x"))
}

/// `eqRefl` after its one unfolding step.
pub fn eq_refl_value() -> Erased {
    normalize_keep(&mk_eq_refl(), 16, 0).expect("unfolds in one step").0
}

/// Labels used to build name universes: the identity, its two injections and
/// the unfolded `eqRefl`.
pub fn labels() -> Vec<Erased> {
    let id = identity();
    vec![
        id.clone(),
        Erased::Inl(bx(id.clone())),
        Erased::Inr(bx(id)),
        eq_refl_value(),
    ]
}

/// Deterministic name universe of the given depth. Depth d adds singletons
/// over the names first reached at depth d-1, and for d ≥ 2 the name
/// `{(id, ∅), (id, X)}` with X the first such name.
pub fn universe(depth: usize) -> Vec<LambdaName> {
    let ls = labels();
    let mut out = vec![LambdaName::empty()];
    let mut frontier = vec![LambdaName::empty()];
    for d in 1..=depth {
        let mut next = Vec::new();
        for a in &frontier {
            for l in &ls {
                next.push(LambdaName::singleton(l.clone(), a.clone()).expect("labels are values"));
            }
        }
        if d >= 2 {
            let x = frontier[0].clone();
            next.push(
                LambdaName::new([(ls[0].clone(), LambdaName::empty()), (ls[0].clone(), x)]).expect("labels are values"),
            );
        }
        out.extend(next.iter().cloned());
        frontier = next.into_iter().filter(|n| n.depth() == d).collect();
    }
    out
}

/// Realizer pool: uniform equality realizers plus a few simple values.
pub fn default_pool() -> Vec<Erased> {
    let e = |m: Erased| Erased::app_t(m, Term::Empty);
    let refl0 = e(mk_eq_refl());
    let id = identity();
    // Equality realizer sending every member back through the label `id`.
    let collapse = rep(
        AxKind::Eq,
        lamf(
            "d",
            pair(
                lam("y", rep(AxKind::In, ex("d", pair(v("y"), at(mk_eq_refl(), "d"))))),
                lam("y", rep(AxKind::In, ex("d", pair(identity(), at(mk_eq_refl(), "d"))))),
            ),
        ),
    );
    vec![
        refl0.clone(),
        app(e(e(mk_eq_symm())), refl0.clone()),
        app(e(e(e(mk_eq_trans()))), pair(refl0.clone(), refl0.clone())),
        collapse,
        id.clone(),
        Erased::Inl(bx(id.clone())),
        Erased::Inr(bx(id.clone())),
        pair(id.clone(), id.clone()),
        Erased::ExIntro(Term::Empty, bx(refl0.clone())),
        eq_refl_value(),
        rep(AxKind::In, Erased::ExIntro(Term::Empty, bx(pair(id, refl0)))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty() -> Den {
        Den::Name(LambdaName::empty())
    }

    #[test]
    fn names_are_sets() {
        let id = identity();
        let a = LambdaName::new([(id.clone(), LambdaName::empty()), (id.clone(), LambdaName::empty())]).unwrap();
        assert_eq!(a.len(), 1);
        let renamed = Erased::lam("z", Erased::var("z"));
        assert_eq!(a, LambdaName::singleton(renamed, LambdaName::empty()).unwrap());
        assert!(LambdaName::singleton(Erased::fst(id), LambdaName::empty()).is_err());
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(universe(0).len(), 1);
        assert_eq!(universe(1).len(), 5);
        assert_eq!(universe(2).len(), 22);
        assert!(universe(2).iter().all(|n| n.depth() <= 2));
    }

    #[test]
    fn lookup_relation() {
        let id = identity();
        let b = LambdaName::singleton(id.clone(), LambdaName::empty()).unwrap();
        assert_eq!(reals_mem_i(&id, &LambdaName::empty(), &b, 10), Verdict::Realizes);
        let redex = Erased::app(identity(), identity());
        assert_eq!(reals_mem_i(&redex, &LambdaName::empty(), &b, 10), Verdict::Realizes);
        assert_eq!(reals_mem_i(&id, &LambdaName::empty(), &LambdaName::empty(), 10), Verdict::Fails);
    }

    #[test]
    fn nothing_is_in_the_empty_name() {
        let cfg = RealizCfg::new(1);
        for m in default_pool() {
            for a in &cfg.universe {
                assert_eq!(reals_mem(&m, &Den::Name(a.clone()), &empty(), &cfg).unwrap(), Verdict::Fails);
            }
        }
    }

    fn refl_at(t: Term) -> Erased {
        Erased::app_t(mk_eq_refl(), t)
    }

    fn base_label() -> Erased {
        rep(AxKind::Inf, Erased::Inl(bx(refl_at(Term::Empty))))
    }

    #[test]
    fn omega_base_entry() {
        let cfg = RealizCfg::new(1);
        let zero = LambdaName::empty();
        let r = omega_prime_member((&base_label(), &zero), &LambdaName::empty(), &cfg).unwrap();
        assert_eq!(r, Verdict::Realizes);
        let one = LambdaName::singleton(identity(), LambdaName::empty()).unwrap();
        let r = omega_prime_member((&base_label(), &one), &LambdaName::empty(), &cfg).unwrap();
        assert_eq!(r, Verdict::Fails);
    }

    #[test]
    fn omega_entry_with_wrong_head() {
        let cfg = RealizCfg::new(1);
        let label = rep(AxKind::Pair, Erased::Inl(bx(refl_at(Term::Empty))));
        let r = omega_prime_member((&label, &LambdaName::empty()), &LambdaName::empty(), &cfg).unwrap();
        assert_eq!(r, Verdict::Fails);
    }

    /// A realizer of `{(id, ∅)} = S(∅)`: the forward half shows `∅ ∈ S(∅)`
    /// through `∅ ∈ {∅, ∅}`, the backward half answers with the label `id`.
    fn succ_zero_eq() -> Erased {
        let e = Term::Empty;
        let ee = Term::pair(Term::Empty, Term::Empty);
        let refl = refl_at;
        let in_w = |t: Term, label: Erased, eq: Erased| {
            rep(AxKind::In, Erased::ExIntro(t, bx(pair(label, eq))))
        };
        let ee_in_pair = in_w(ee.clone(), rep(AxKind::Pair, Erased::Inr(bx(refl(ee.clone())))), refl(ee.clone()));
        let zero_in_ee = in_w(e.clone(), rep(AxKind::Pair, Erased::Inl(bx(refl(e.clone())))), refl(e.clone()));
        let w = Erased::ExIntro(ee, bx(pair(ee_in_pair, zero_in_ee)));
        let fwd = in_w(e.clone(), rep(AxKind::Union, w), refl(e.clone()));
        let back = in_w(e.clone(), identity(), refl(e));
        rep(AxKind::Eq, lamf("d", pair(lam("y", fwd), lam("y", back))))
    }

    #[test]
    fn omega_successor_entry() {
        let cfg = RealizCfg::new(1);
        let zero = LambdaName::empty();
        let approx = LambdaName::singleton(base_label(), zero.clone()).unwrap();
        let m = rep(
            AxKind::In,
            Erased::ExIntro(Term::Empty, bx(pair(base_label(), refl_at(Term::Empty)))),
        );
        let label = rep(
            AxKind::Inf,
            Erased::Inr(bx(Erased::ExIntro(Term::Empty, bx(pair(m, succ_zero_eq()))))),
        );
        let one = LambdaName::singleton(identity(), zero).unwrap();
        assert_eq!(omega_prime_member((&label, &one), &approx, &cfg).unwrap(), Verdict::Realizes);
        // Without the predecessor admitted the same entry is not justified.
        assert_eq!(
            omega_prime_member((&label, &one), &LambdaName::empty(), &cfg).unwrap(),
            Verdict::Fails
        );
        // Nor does it justify a name that is not the successor.
        let other = LambdaName::singleton(identity(), one.clone()).unwrap();
        assert_eq!(omega_prime_member((&label, &other), &approx, &cfg).unwrap(), Verdict::Fails);
    }

    #[test]
    fn incompatible_singletons_are_not_equal() {
        // eqRefl sends the label `id` of A to itself, and B only has `inl id`.
        let cfg = RealizCfg::new(1);
        let a = LambdaName::singleton(identity(), LambdaName::empty()).unwrap();
        let b = LambdaName::singleton(Erased::Inl(bx(identity())), LambdaName::empty()).unwrap();
        let m = refl_at(Term::Empty);
        assert_eq!(reals_eq(&m, &a.clone().into(), &b.clone().into(), &cfg).unwrap(), Verdict::Fails);
        assert_eq!(reals_eq(&m, &a.clone().into(), &a.into(), &cfg).unwrap(), Verdict::Realizes);
    }

    #[test]
    fn identity_is_not_symmetry() {
        // The collapsing realizer in the pool proves {(id, ∅)} = {(id, ∅), (inl id, ∅)},
        // whose converse fails.
        let mut cfg = RealizCfg::new(1);
        let wide = LambdaName::new([
            (identity(), LambdaName::empty()),
            (Erased::Inl(bx(identity())), LambdaName::empty()),
        ])
        .unwrap();
        cfg.universe.push(wide);
        let phi = crate::parse_formula("forall a b, a = b -> b = a", crate::Mode::Standard).unwrap();
        let m = lamf("a", lamf("b", lam("x", v("x"))));
        assert_eq!(reals(&m, &phi, &Env::new(), &cfg).unwrap(), Verdict::Fails);
        assert_eq!(reals(&mk_eq_symm(), &phi, &Env::new(), &cfg).unwrap(), Verdict::Realizes);
    }

    #[test]
    fn diverging_realizer_is_unknown() {
        let l2 = crate::corpus::nwf_file().decl("l2").unwrap().proof.clone();
        let m = crate::erase(&l2);
        let a = LambdaName::empty();
        let b = LambdaName::singleton(identity(), LambdaName::empty()).unwrap();
        assert!(matches!(reals_mem_i(&m, &a, &b, 1000), Verdict::Unknown(_)));
    }

    #[test]
    fn realizer_shapes() {
        assert!(matches!(mk_eq_refl(), Erased::Ind(_)));
        let (v, _) = normalize_keep(&mk_eq_symm(), 1000, 0).unwrap();
        let Erased::LamF(_, inner) = v else { panic!("not a first-order lambda") };
        assert!(matches!(*inner, Erased::LamF(..)));
        for m in [mk_eq_refl(), mk_eq_symm(), mk_eq_trans(), mk_lei()] {
            assert!(normalize_keep(&m, 1000, 0).is_ok());
        }
    }

    #[test]
    fn term_meanings_reject_inaccessibles() {
        let phi = Formula::Mem(Term::Empty, Term::Inac(1));
        let r = reals(&identity(), &phi, &Env::new(), &RealizCfg::new(0));
        assert!(matches!(r, Err(RealizError::UnsupportedFormula(_))));
    }
}
