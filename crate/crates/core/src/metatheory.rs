//! Extraction of constructive content from closed proofs: disjunction and
//! witness properties, numerals, and term-free defining formulas.

use std::collections::BTreeSet;
use std::fmt;

use crate::axioms::{phi_a, AxiomId};
use crate::proof::Proof;
use crate::reduce::{normalize_keep, NormalizeError, DEFAULT_FUEL};
use crate::syntax::sugar::{iff, not, numeral};
use crate::syntax::{fresh_var, Formula, Term, Var};
use crate::typing::{Checker, Context, Mode, TypeError};

#[derive(Clone, Debug)]
pub struct ExtractionConfig {
    pub fuel: u64,
    pub depth_cap: u32,
    /// Recheck every intermediate proof against its expected type.
    pub paranoid: bool,
    pub mode: Mode,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            fuel: DEFAULT_FUEL,
            depth_cap: 1 << 16,
            paranoid: false,
            mode: Mode::Standard,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExtractError {
    FuelExhausted { stage: &'static str },
    Stuck { stage: &'static str },
    DepthExceeded(u32),
    ShapeError(String),
    IllTyped(TypeError),
    Recheck { stage: &'static str, error: TypeError },
}

impl fmt::Display for ExtractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractError::FuelExhausted { stage } => write!(f, "fuel exhausted while normalizing {stage}"),
            ExtractError::Stuck { stage } => write!(f, "reduction stuck while normalizing {stage}"),
            ExtractError::DepthExceeded(d) => write!(f, "numeral depth cap {d} exceeded"),
            ExtractError::ShapeError(s) => write!(f, "shape error: {s}"),
            ExtractError::IllTyped(e) => write!(f, "input does not check: {e}"),
            ExtractError::Recheck { stage, error } => write!(f, "intermediate {stage} fails to recheck: {error}"),
        }
    }
}

impl std::error::Error for ExtractError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

struct Extractor<'a> {
    cfg: &'a ExtractionConfig,
    checker: Checker,
    steps: u64,
}

impl Extractor<'_> {
    fn new(cfg: &ExtractionConfig) -> Extractor<'_> {
        Extractor {
            cfg,
            checker: Checker::new(cfg.mode),
            steps: 0,
        }
    }

    fn whnf(&mut self, m: &Proof, stage: &'static str) -> Result<Proof, ExtractError> {
        let budget = self.cfg.fuel.saturating_sub(self.steps);
        match normalize_keep(m, budget, 0) {
            Ok((v, n)) => {
                self.steps += n;
                Ok(v)
            }
            Err(NormalizeError::FuelExhausted(_)) => Err(ExtractError::FuelExhausted { stage }),
            Err(NormalizeError::Stuck(_)) => Err(ExtractError::Stuck { stage }),
        }
    }

    fn recheck(&self, m: &Proof, phi: &Formula, stage: &'static str) -> Result<(), ExtractError> {
        if self.cfg.paranoid {
            self.checker
                .check(&Context::new(), m, phi)
                .map_err(|error| ExtractError::Recheck { stage, error })?;
        }
        Ok(())
    }

    fn input(&self, m: &Proof, goal: &Formula) -> Result<(), ExtractError> {
        self.checker.check(&Context::new(), m, goal).map_err(ExtractError::IllTyped)
    }
}

fn shape(stage: &str, v: &Proof) -> ExtractError {
    ExtractError::ShapeError(format!("{stage}: unexpected value `{v}`"))
}

/// Normalize a proof of `φ ∨ ψ` and report the selected side with its sub-proof.
pub fn extract_dp(m: &Proof, goal: &Formula, cfg: &ExtractionConfig) -> Result<(Side, Proof, Formula), ExtractError> {
    let Formula::Or(l, r) = goal else {
        return Err(ExtractError::ShapeError(format!("goal `{goal}` is not a disjunction")));
    };
    let mut x = Extractor::new(cfg);
    x.input(m, goal)?;
    let v = x.whnf(m, "the disjunction")?;
    let out = match v {
        Proof::Inl(n) => (Side::Left, *n, (**l).clone()),
        Proof::Inr(n) => (Side::Right, *n, (**r).clone()),
        other => return Err(shape("disjunction", &other)),
    };
    // The selected sub-proof always rechecks; this is the property on offer.
    x.checker
        .check(&Context::new(), &out.1, &out.2)
        .map_err(|error| ExtractError::Recheck {
            stage: "the selected disjunct",
            error,
        })?;
    Ok(out)
}

/// Normalize a proof of `∃a. φ` and return the witness with a proof of `φ[a:=t]`.
pub fn extract_witness(m: &Proof, goal: &Formula, cfg: &ExtractionConfig) -> Result<(Term, Proof, Formula), ExtractError> {
    let Formula::Exists(a, body) = goal else {
        return Err(ExtractError::ShapeError(format!("goal `{goal}` is not an existential")));
    };
    let mut x = Extractor::new(cfg);
    x.input(m, goal)?;
    let v = x.whnf(m, "the existential")?;
    let Proof::ExIntro(t, n) = v else {
        return Err(shape("existential", &v));
    };
    let inst = body.subst1(a, &t);
    x.checker
        .check(&Context::new(), &n, &inst)
        .map_err(|error| ExtractError::Recheck {
            stage: "the witness proof",
            error,
        })?;
    Ok((t, *n, inst))
}

/// Read off the natural number `n` from a closed proof of `t ∈ ω`, by unfolding
/// canonical forms through the membership and infinity axiom shapes.
pub fn extract_numeral(m: &Proof, goal: &Formula, cfg: &ExtractionConfig) -> Result<u32, ExtractError> {
    match goal {
        Formula::Mem(_, Term::Omega) => {}
        _ => return Err(ExtractError::ShapeError(format!("goal `{goal}` is not of the form t in omega"))),
    }
    let mut x = Extractor::new(cfg);
    x.input(m, goal)?;
    let mut cur = m.clone();
    let mut cur_ty: Formula;
    let mut n = 0u32;
    loop {
        if n >= cfg.depth_cap {
            return Err(ExtractError::DepthExceeded(cfg.depth_cap));
        }
        let v = x.whnf(&cur, "the membership proof")?;
        let Proof::AxRep {
            ax: AxiomId::In,
            t,
            args,
            body,
        } = &v
        else {
            return Err(shape("membership", &v));
        };
        let inner_ty = phi_a(&AxiomId::In, t, args).map_err(|e| ExtractError::ShapeError(e.to_string()))?;
        x.recheck(body, &inner_ty, "the membership witness")?;

        let w = x.whnf(body, "the membership witness")?;
        let (Proof::ExIntro(c, p), Formula::Exists(e, ebody)) = (&w, &inner_ty) else {
            return Err(shape("membership witness", &w));
        };
        let pair_ty = ebody.subst1(e, c);
        x.recheck(p, &pair_ty, "the witness pair")?;

        let pv = x.whnf(p, "the witness pair")?;
        let (Proof::Pair(mi, _), Formula::And(mi_ty, _)) = (&pv, &pair_ty) else {
            return Err(shape("witness pair", &pv));
        };
        x.recheck(mi, mi_ty, "the intensional membership")?;

        let iv = x.whnf(mi, "the intensional membership")?;
        let Proof::AxRep {
            ax: AxiomId::Inf,
            t: c2,
            body: q,
            ..
        } = &iv
        else {
            return Err(shape("intensional membership", &iv));
        };
        let q_ty = phi_a(&AxiomId::Inf, c2, &[]).map_err(|e| ExtractError::ShapeError(e.to_string()))?;
        x.recheck(q, &q_ty, "the infinity disjunction")?;

        let qv = x.whnf(q, "the infinity disjunction")?;
        let Formula::Or(_, succ_ty) = &q_ty else { unreachable!() };
        match qv {
            Proof::Inl(_) => return Ok(n),
            Proof::Inr(r) => {
                x.recheck(&r, succ_ty, "the predecessor witness")?;
                let rv = x.whnf(&r, "the predecessor witness")?;
                let (Proof::ExIntro(b, s), Formula::Exists(bv, sbody)) = (&rv, succ_ty.as_ref()) else {
                    return Err(shape("predecessor witness", &rv));
                };
                let s_ty = sbody.subst1(bv, b);
                x.recheck(s, &s_ty, "the predecessor pair")?;
                let sv = x.whnf(s, "the predecessor pair")?;
                let (Proof::Pair(s1, _), Formula::And(s1_ty, _)) = (&sv, &s_ty) else {
                    return Err(shape("predecessor pair", &sv));
                };
                cur = (**s1).clone();
                cur_ty = (**s1_ty).clone();
                n += 1;
            }
            other => return Err(shape("infinity disjunction", &other)),
        }
        x.recheck(&cur, &cur_ty, "the predecessor membership")?;
    }
}

/// A proof of `n̄ ∈ ω` built from the infinity and membership axioms, using
/// the given reflexivity proof (of `∀a. a = a`).
pub fn build_numeral_proof_with(n: u32, eq_refl: &Proof) -> Proof {
    let refl = |t: &Term| Proof::app_t(eq_refl.clone(), t.clone());
    let omega_args = vec![Term::Omega];
    let mut acc: Option<Proof> = None;
    for k in 0..=n {
        let nk = numeral(k);
        let q = match acc.take() {
            None => Proof::inl(refl(&Term::Empty)),
            Some(prev) => Proof::inr(Proof::ex(numeral(k - 1), Proof::pair(prev, refl(&nk)))),
        };
        let intensional = Proof::rep(AxiomId::Inf, nk.clone(), vec![], q);
        let witness = Proof::ex(nk.clone(), Proof::pair(intensional, refl(&nk)));
        acc = Some(Proof::rep(AxiomId::In, nk, omega_args.clone(), witness));
    }
    acc.expect("at least one layer")
}

/// `build_numeral_proof_with` over the corpus reflexivity proof.
pub fn build_numeral_proof(n: u32) -> Proof {
    build_numeral_proof_with(n, &crate::corpus::eq_refl())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefineError {
    OpenTerm(BTreeSet<Var>),
    Unsupported(String),
}

impl fmt::Display for DefineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefineError::OpenTerm(vs) => {
                let names: Vec<&str> = vs.iter().map(|v| v.name()).collect();
                write!(f, "term has free variables: {}", names.join(", "))
            }
            DefineError::Unsupported(s) => write!(f, "no defining formula for {s}"),
        }
    }
}

impl std::error::Error for DefineError {}

/// A formula `ψ(x)` without function symbols such that `x = t` is characterized
/// by `ψ(x)`. Compound arguments are named by existentials.
pub fn defining_formula(t: &Term, x: &Var) -> Result<Formula, DefineError> {
    let fv = t.free_vars();
    if !fv.is_empty() {
        return Err(DefineError::OpenTerm(fv));
    }
    let mut avoid: BTreeSet<Var> = [x.clone()].into();
    define(t, x, &mut avoid)
}

fn term_axiom(t: &Term) -> Option<(AxiomId, Vec<Term>)> {
    Some(match t {
        Term::Empty => (AxiomId::Empty, vec![]),
        Term::Omega => (AxiomId::Inf, vec![]),
        Term::Inac(i) => (AxiomId::Inac(*i), vec![]),
        Term::Pair(a, b) => (AxiomId::Pair, vec![(**a).clone(), (**b).clone()]),
        Term::Union(a) => (AxiomId::Union, vec![(**a).clone()]),
        Term::Power(a) => (AxiomId::Power, vec![(**a).clone()]),
        Term::Sep(s, u, args) => {
            let mut all = vec![(**u).clone()];
            all.extend(args.iter().cloned());
            (AxiomId::Sep(s.clone()), all)
        }
        Term::Repl(s, u, args) => {
            let mut all = vec![(**u).clone()];
            all.extend(args.iter().cloned());
            (AxiomId::Repl(s.clone()), all)
        }
        Term::Var(_) | Term::Const(_) => return None,
    })
}

fn take_fresh(base: &str, avoid: &mut BTreeSet<Var>) -> Var {
    let v = fresh_var(&Var::new(base), avoid);
    avoid.insert(v.clone());
    v
}

fn define(t: &Term, x: &Var, avoid: &mut BTreeSet<Var>) -> Result<Formula, DefineError> {
    let xt = Term::Var(x.clone());
    if let Term::Var(v) = t {
        return Ok(Formula::Eq(xt, Term::Var(v.clone())));
    }
    let Some((ax, args)) = term_axiom(t) else {
        return Err(DefineError::Unsupported(format!("`{t}`")));
    };
    if ax == AxiomId::Empty {
        let c = take_fresh("c", avoid);
        return Ok(Formula::Forall(c.clone(), Box::new(not(Formula::Mem(Term::Var(c), xt)))));
    }
    // Name every compound argument.
    let mut names = Vec::new();
    let mut simple = Vec::new();
    for a in &args {
        match a {
            Term::Var(_) => simple.push(a.clone()),
            _ => {
                let y = take_fresh("e", avoid);
                names.push((y.clone(), a.clone()));
                simple.push(Term::Var(y));
            }
        }
    }
    let c = take_fresh("c", avoid);
    avoid.extend(simple.iter().flat_map(|s| s.free_vars()));
    let mut spec = phi_a(&ax, &Term::Var(c.clone()), &simple).map_err(|e| DefineError::Unsupported(e.to_string()))?;
    // Self-reference: ω and V_i mention themselves in their own characterization.
    if matches!(ax, AxiomId::Inf | AxiomId::Inac(_)) {
        let p = take_fresh("self", avoid);
        spec = replace_ground(&spec, t, &Term::Var(p.clone())).subst1(&p, &xt);
    }
    avoid.extend(all_vars(&spec));
    let spec = eliminate_terms(&spec, avoid)?;
    let mut body = Formula::Forall(c.clone(), Box::new(iff(Formula::Mem(Term::Var(c), xt), spec)));
    for (y, a) in names.into_iter().rev() {
        let dy = define(&a, &y, avoid)?;
        body = Formula::Exists(y, Box::new(Formula::and(dy, body)));
    }
    Ok(body)
}

/// Replace compound arguments of atoms by existentially named variables.
fn eliminate_terms(f: &Formula, avoid: &mut BTreeSet<Var>) -> Result<Formula, DefineError> {
    let bx = Box::new;
    Ok(match f {
        Formula::Bottom => Formula::Bottom,
        Formula::MemI(a, b) | Formula::Mem(a, b) | Formula::Eq(a, b) => {
            let mut named = Vec::new();
            let mut name = |t: &Term, avoid: &mut BTreeSet<Var>| -> Term {
                if let Term::Var(_) = t {
                    t.clone()
                } else {
                    let z = take_fresh("z", avoid);
                    named.push((z.clone(), t.clone()));
                    Term::Var(z)
                }
            };
            let (a2, b2) = (name(a, avoid), name(b, avoid));
            let mut atom = match f {
                Formula::MemI(..) => Formula::MemI(a2, b2),
                Formula::Mem(..) => Formula::Mem(a2, b2),
                _ => Formula::Eq(a2, b2),
            };
            for (z, t) in named.into_iter().rev() {
                let dz = define(&t, &z, avoid)?;
                atom = Formula::Exists(z, bx(Formula::and(dz, atom)));
            }
            atom
        }
        Formula::And(a, b) => Formula::and(eliminate_terms(a, avoid)?, eliminate_terms(b, avoid)?),
        Formula::Or(a, b) => Formula::or(eliminate_terms(a, avoid)?, eliminate_terms(b, avoid)?),
        Formula::Imp(a, b) => Formula::imp(eliminate_terms(a, avoid)?, eliminate_terms(b, avoid)?),
        Formula::Forall(v, b) => Formula::Forall(v.clone(), bx(eliminate_terms(b, avoid)?)),
        Formula::Exists(v, b) => Formula::Exists(v.clone(), bx(eliminate_terms(b, avoid)?)),
    })
}

fn replace_ground(f: &Formula, g: &Term, by: &Term) -> Formula {
    fn rt(t: &Term, g: &Term, by: &Term) -> Term {
        if t == g {
            return by.clone();
        }
        match t {
            Term::Pair(a, b) => Term::pair(rt(a, g, by), rt(b, g, by)),
            Term::Union(a) => Term::union(rt(a, g, by)),
            Term::Power(a) => Term::power(rt(a, g, by)),
            Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
                let s2 = crate::syntax::Schema {
                    binders: s.binders.clone(),
                    params: s.params.clone(),
                    body: replace_ground(&s.body, g, by),
                };
                let u2 = Box::new(rt(u, g, by));
                let a2 = args.iter().map(|a| rt(a, g, by)).collect();
                if matches!(t, Term::Sep(..)) {
                    Term::Sep(std::sync::Arc::new(s2), u2, a2)
                } else {
                    Term::Repl(std::sync::Arc::new(s2), u2, a2)
                }
            }
            _ => t.clone(),
        }
    }
    let bx = Box::new;
    match f {
        Formula::Bottom => Formula::Bottom,
        Formula::MemI(a, b) => Formula::MemI(rt(a, g, by), rt(b, g, by)),
        Formula::Mem(a, b) => Formula::Mem(rt(a, g, by), rt(b, g, by)),
        Formula::Eq(a, b) => Formula::Eq(rt(a, g, by), rt(b, g, by)),
        Formula::And(a, b) => Formula::and(replace_ground(a, g, by), replace_ground(b, g, by)),
        Formula::Or(a, b) => Formula::or(replace_ground(a, g, by), replace_ground(b, g, by)),
        Formula::Imp(a, b) => Formula::imp(replace_ground(a, g, by), replace_ground(b, g, by)),
        Formula::Forall(v, b) => Formula::Forall(v.clone(), bx(replace_ground(b, g, by))),
        Formula::Exists(v, b) => Formula::Exists(v.clone(), bx(replace_ground(b, g, by))),
    }
}

/// Every variable name in a formula, bound or free.
fn all_vars(f: &Formula) -> BTreeSet<Var> {
    fn t_vars(t: &Term, acc: &mut BTreeSet<Var>) {
        match t {
            Term::Var(v) => {
                acc.insert(v.clone());
            }
            Term::Pair(a, b) => {
                t_vars(a, acc);
                t_vars(b, acc);
            }
            Term::Union(a) | Term::Power(a) => t_vars(a, acc),
            Term::Sep(s, u, args) | Term::Repl(s, u, args) => {
                acc.extend(s.binders.iter().cloned());
                acc.extend(s.params.iter().cloned());
                acc.extend(all_vars(&s.body));
                t_vars(u, acc);
                for a in args {
                    t_vars(a, acc);
                }
            }
            _ => {}
        }
    }
    let mut acc = BTreeSet::new();
    fn go(f: &Formula, acc: &mut BTreeSet<Var>) {
        match f {
            Formula::Bottom => {}
            Formula::MemI(a, b) | Formula::Mem(a, b) | Formula::Eq(a, b) => {
                t_vars(a, acc);
                t_vars(b, acc);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                go(a, acc);
                go(b, acc);
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                acc.insert(v.clone());
                go(b, acc);
            }
        }
    }
    go(f, &mut acc);
    acc
}

/// True when no function symbol (anything but a variable) occurs in an atom.
pub fn is_term_free(f: &Formula) -> bool {
    match f {
        Formula::Bottom => true,
        Formula::MemI(a, b) | Formula::Mem(a, b) | Formula::Eq(a, b) => {
            matches!(a, Term::Var(_)) && matches!(b, Term::Var(_))
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => is_term_free(a) && is_term_free(b),
        Formula::Forall(_, b) | Formula::Exists(_, b) => is_term_free(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn empty_definition() {
        let f = defining_formula(&Term::Empty, &Var::new("x")).unwrap();
        let expect = Formula::forall("c", not(Formula::Mem(v("c"), v("x"))));
        assert!(f.alpha_eq(&expect), "{f}");
    }

    #[test]
    fn power_of_empty_definition() {
        let f = defining_formula(&Term::power(Term::Empty), &Var::new("x")).unwrap();
        let expect = Formula::exists(
            "e",
            Formula::and(
                Formula::forall("c", not(Formula::Mem(v("c"), v("e")))),
                Formula::forall(
                    "c",
                    iff(
                        Formula::Mem(v("c"), v("x")),
                        Formula::forall("b", Formula::imp(Formula::Mem(v("b"), v("c")), Formula::Mem(v("b"), v("e")))),
                    ),
                ),
            ),
        );
        assert!(f.alpha_eq(&expect), "{f}");
    }

    #[test]
    fn omega_definition_is_term_free() {
        let f = defining_formula(&Term::Omega, &Var::new("x")).unwrap();
        assert!(is_term_free(&f), "{f}");
        assert_eq!(f.free_vars(), [Var::new("x")].into());
    }

    #[test]
    fn open_terms_are_rejected() {
        assert!(matches!(
            defining_formula(&v("y"), &Var::new("x")),
            Err(DefineError::OpenTerm(_))
        ));
    }
}
