//! Proptest generators for syntax trees over a small variable pool, so that
//! shadowing and capture show up often.

use std::sync::Arc;

use proptest::prelude::*;

use izf_core::syntax::{Formula, Schema, Term, Var};
use izf_core::{AxiomId, PVar, Proof};

pub const TERM_VARS: [&str; 5] = ["a", "b", "c", "x", "y"];
pub const PROOF_VARS: [&str; 3] = ["h", "k", "m"];

pub fn var() -> impl Strategy<Value = Var> {
    prop::sample::select(&TERM_VARS[..]).prop_map(Var::new)
}

pub fn pvar() -> impl Strategy<Value = PVar> {
    prop::sample::select(&PROOF_VARS[..]).prop_map(PVar::new)
}

/// Two distinct variables.
pub fn pair_of_vars() -> impl Strategy<Value = (Var, Var)> {
    prop::sample::subsequence(&TERM_VARS[..], 2)
        .prop_shuffle()
        .prop_map(|v| (Var::new(v[0]), Var::new(v[1])))
}

fn leaf_term() -> BoxedStrategy<Term> {
    prop_oneof![
        4 => var().prop_map(Term::Var),
        2 => Just(Term::Empty),
        1 => Just(Term::Omega),
        1 => (1u32..3).prop_map(Term::Inac),
    ]
    .boxed()
}

fn atom(t: BoxedStrategy<Term>) -> impl Strategy<Value = Formula> {
    prop_oneof![
        1 => Just(Formula::Bottom),
        2 => (t.clone(), t.clone()).prop_map(|(a, b)| Formula::Mem(a, b)),
        1 => (t.clone(), t.clone()).prop_map(|(a, b)| Formula::MemI(a, b)),
        2 => (t.clone(), t).prop_map(|(a, b)| Formula::Eq(a, b)),
    ]
}

/// Schema bodies: small formulas over leaf terms, with one quantifier layer.
fn schema_body() -> impl Strategy<Value = Formula> {
    atom(leaf_term()).prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (var(), inner).prop_map(|(v, b)| Formula::Forall(v, Box::new(b))),
        ]
    })
}

/// Distinct binders, an optional single parameter, and a body.
fn schema(binders: usize) -> impl Strategy<Value = Arc<Schema>> {
    (
        prop::sample::subsequence(&TERM_VARS[..], binders + 1).prop_shuffle(),
        any::<bool>(),
        schema_body(),
    )
        .prop_map(move |(names, with_param, body)| {
            let bs = names[..binders].iter().map(|n| Var::new(n)).collect();
            let ps = if with_param { vec![Var::new(names[binders])] } else { vec![] };
            Arc::new(Schema::new(bs, ps, body).expect("distinct by construction"))
        })
}

pub fn term() -> BoxedStrategy<Term> {
    leaf_term().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pair(a, b)),
            2 => inner.clone().prop_map(Term::union),
            2 => inner.clone().prop_map(Term::power),
            1 => (schema(1), inner.clone(), inner.clone()).prop_filter_map("arity", |(s, c, p)| {
                let args = if s.params.is_empty() { vec![] } else { vec![p] };
                Term::sep(s, c, args).ok()
            }),
            1 => (schema(2), inner.clone(), inner).prop_filter_map("arity", |(s, c, p)| {
                let args = if s.params.is_empty() { vec![] } else { vec![p] };
                Term::repl(s, c, args).ok()
            }),
        ]
    })
    .boxed()
}

pub fn formula() -> impl Strategy<Value = Formula> {
    atom(term()).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (var(), inner.clone()).prop_map(|(v, b)| Formula::Forall(v, Box::new(b))),
            (var(), inner).prop_map(|(v, b)| Formula::Exists(v, Box::new(b))),
        ]
    })
}

fn small_formula() -> impl Strategy<Value = Formula> {
    atom(leaf_term()).prop_recursive(1, 3, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b))
    })
}

fn fixed_axiom() -> impl Strategy<Value = AxiomId> {
    prop::sample::select(vec![
        AxiomId::Empty,
        AxiomId::Pair,
        AxiomId::Inf,
        AxiomId::Union,
        AxiomId::Power,
        AxiomId::Inac(1),
        AxiomId::In,
        AxiomId::Eq,
    ])
}

fn ax_parts() -> impl Strategy<Value = (AxiomId, Term, Vec<Term>)> {
    (fixed_axiom(), leaf_term(), prop::collection::vec(leaf_term(), 2)).prop_map(|(ax, t, mut args)| {
        args.truncate(ax.arity());
        (ax, t, args)
    })
}

/// Raw proof trees; not necessarily well-typed.
pub fn proof() -> impl Strategy<Value = Proof> {
    let leaf = pvar().prop_map(Proof::Var);
    leaf.prop_recursive(4, 32, 3, |inner| {
        let b = |p: Proof| Box::new(p);
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(move |(m, n)| Proof::App(b(m), b(n))),
            3 => (pvar(), small_formula(), inner.clone()).prop_map(move |(x, f, m)| Proof::LamP(x, f, b(m))),
            2 => (var(), inner.clone()).prop_map(move |(a, m)| Proof::LamF(a, b(m))),
            2 => (inner.clone(), leaf_term()).prop_map(move |(m, t)| Proof::AppT(b(m), t)),
            2 => (inner.clone(), inner.clone()).prop_map(move |(m, n)| Proof::Pair(b(m), b(n))),
            1 => inner.clone().prop_map(move |m| Proof::Fst(b(m))),
            1 => inner.clone().prop_map(move |m| Proof::Snd(b(m))),
            1 => inner.clone().prop_map(move |m| Proof::Inl(b(m))),
            1 => inner.clone().prop_map(move |m| Proof::Inr(b(m))),
            1 => (
                inner.clone(),
                (pvar(), small_formula(), inner.clone()),
                (pvar(), small_formula(), inner.clone())
            )
                .prop_map(move |(s, (lvar, lty, l), (rvar, rty, r))| Proof::Case {
                    scrut: b(s),
                    lvar,
                    lty,
                    lbody: b(l),
                    rvar,
                    rty,
                    rbody: b(r),
                }),
            2 => (leaf_term(), inner.clone()).prop_map(move |(t, m)| Proof::ExIntro(t, b(m))),
            1 => (var(), pvar(), small_formula(), inner.clone(), inner.clone()).prop_map(
                move |(a, x, ty, m, n)| Proof::Let {
                    a,
                    x,
                    ty,
                    bound: b(m),
                    body: b(n),
                }
            ),
            1 => inner.clone().prop_map(move |m| Proof::Magic(b(m))),
            1 => (schema(1), inner.clone(), leaf_term()).prop_map(move |(schema, m, t)| {
                let args = if schema.params.is_empty() { vec![] } else { vec![t] };
                Proof::Ind {
                    schema,
                    premise: b(m),
                    args,
                }
            }),
            1 => (ax_parts(), inner.clone()).prop_map(move |((ax, t, args), m)| Proof::AxRep {
                ax,
                t,
                args,
                body: b(m),
            }),
            1 => (ax_parts(), inner).prop_map(move |((ax, t, args), m)| Proof::AxProp {
                ax,
                t,
                args,
                body: b(m),
            }),
        ]
    })
}
