mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::gen::term;
use izf_core::axioms::{inac_phi1, inac_phi2, ind_premise, phi_a, statement_vars};
use izf_core::corpus;
use izf_core::metatheory::{defining_formula, is_term_free};
use izf_core::syntax::{Formula, Subst, Term, Var};
use izf_core::AxiomId;

fn term_form_axioms() -> Vec<AxiomId> {
    corpus::axiom_families()
        .into_iter()
        .filter(|a| !matches!(a, AxiomId::In | AxiomId::Eq | AxiomId::Ind(_)))
        .chain([AxiomId::Inac(2), AxiomId::Inac(3)])
        .collect()
}

fn mentions_memi(f: &Formula) -> bool {
    match f {
        Formula::MemI(..) => true,
        Formula::Bottom | Formula::Mem(..) | Formula::Eq(..) => false,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => mentions_memi(a) || mentions_memi(b),
        Formula::Forall(_, b) | Formula::Exists(_, b) => mentions_memi(b),
    }
}

#[test]
fn defining_formulas_avoid_intensional_membership() {
    for ax in term_form_axioms() {
        let (vars, c) = statement_vars(&ax);
        let args: Vec<Term> = vars.into_iter().map(Term::Var).collect();
        let phi = phi_a(&ax, &Term::Var(c), &args).unwrap();
        assert!(!mentions_memi(&phi), "{}", ax.name());
    }
    let ind = corpus::ind_instance();
    assert!(mentions_memi(&ind_premise(&ind, &[])));
}

/// Replace `V_k` by `V_{k+1}` everywhere and ω (as `V_0`) by `V_1`.
fn shift_t(t: &Term) -> Term {
    match t {
        Term::Omega => Term::Inac(1),
        Term::Inac(k) => Term::Inac(k + 1),
        Term::Pair(a, b) => Term::pair(shift_t(a), shift_t(b)),
        Term::Union(a) => Term::union(shift_t(a)),
        Term::Power(a) => Term::power(shift_t(a)),
        other => other.clone(),
    }
}

fn shift(f: &Formula) -> Formula {
    match f {
        Formula::Bottom => Formula::Bottom,
        Formula::MemI(a, b) => Formula::MemI(shift_t(a), shift_t(b)),
        Formula::Mem(a, b) => Formula::Mem(shift_t(a), shift_t(b)),
        Formula::Eq(a, b) => Formula::Eq(shift_t(a), shift_t(b)),
        Formula::And(a, b) => Formula::and(shift(a), shift(b)),
        Formula::Or(a, b) => Formula::or(shift(a), shift(b)),
        Formula::Imp(a, b) => Formula::imp(shift(a), shift(b)),
        Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(shift(b))),
        Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(shift(b))),
    }
}

#[test]
fn inaccessible_levels_differ_only_in_index() {
    let c = Term::var("c");
    for i in 1..4 {
        assert_eq!(shift(&inac_phi1(i, &c).unwrap()), inac_phi1(i + 1, &c).unwrap(), "phi1 at {i}");
        assert_eq!(shift(&inac_phi2(i, &c).unwrap()), inac_phi2(i + 1, &c).unwrap(), "phi2 at {i}");
    }
}

fn instance_terms(n: usize) -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(term(), n)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn instantiation_commutes_with_substitution(ts in instance_terms(4), which in 0usize..10) {
        let axs = term_form_axioms();
        let ax = &axs[which % axs.len()];
        let (vars, c) = statement_vars(ax);
        let generic = phi_a(ax, &Term::Var(c.clone()), &vars.iter().cloned().map(Term::Var).collect::<Vec<_>>()).unwrap();
        let mut s = Subst::new();
        s.insert(c, ts[0].clone());
        for (v, t) in vars.iter().zip(&ts[1..]) {
            s.insert(v.clone(), t.clone());
        }
        let direct = phi_a(ax, &ts[0], &ts[1..=vars.len()]).unwrap();
        prop_assert!(direct.alpha_eq(&generic.subst(&s)), "{}", ax.name());
    }

    #[test]
    fn defining_formulas_are_term_free(t in term()) {
        // Close the term off first.
        let closed = t.free_vars().iter().fold(t.clone(), |acc, v| acc.subst1(v, &Term::Empty));
        let x = Var::new("x");
        let psi = defining_formula(&closed, &x).unwrap();
        prop_assert!(is_term_free(&psi));
        prop_assert_eq!(psi.free_vars(), BTreeSet::from([x]));
    }
}
