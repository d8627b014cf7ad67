mod common;

use common::traces::sweep;
use izf_core::corpus::{self, Expect};
use izf_core::metatheory::{build_numeral_proof, extract_dp, extract_witness, ExtractionConfig};
use izf_core::reduce::{detect_cycle, normalize, NormalizeError};
use izf_core::syntax::Formula;
use izf_core::{erase, parse_file, parse_proof, PVar, Checker, Context, Mode, Proof, Term};

#[test]
fn shipped_axiom_file_matches_generated_theorems() {
    let f = parse_file(corpus::AXIOMS_SRC).unwrap();
    let generated = corpus::axiom_theorems();
    let shipped: Vec<_> = f.decls().collect();
    assert_eq!(shipped.len(), 11);
    assert_eq!(generated.len(), 11);
    for (d, e) in shipped.iter().zip(&generated) {
        assert_eq!(d.name, e.name);
        assert!(d.formula.alpha_eq(&e.formula), "{}", d.name);
        assert!(d.proof.alpha_eq(&e.proof), "{}", d.name);
    }
    assert_eq!(corpus::render_axioms_file(), corpus::AXIOMS_SRC);
}

#[test]
fn entry_counts() {
    assert_eq!(corpus::equality_theorems().len(), 5);
    assert_eq!(corpus::numeral_theorems().len(), 6);
    assert_eq!(corpus::nwf_suite().len(), 4);
}

#[test]
fn checked_entries_reduce_soundly_within_their_bounds() {
    let r = sweep(&corpus::all_entries(), 10_000);
    assert!(r.ok(), "{r:#?}");
    assert!(r.states_checked >= 500, "{}", r.states_checked);
}

#[test]
fn loop_has_period_three_from_the_start() {
    let l2 = corpus::nwf_suite().into_iter().find(|e| e.name == "l2").unwrap();
    assert_eq!(l2.expect, Expect::Diverges { period: 3 });
    assert_eq!(detect_cycle(&l2.proof, 100), Some((0, 3)));
    assert!(matches!(normalize(&l2.proof, 100_000), Err(NormalizeError::FuelExhausted(_))));
    // The divergence claim is about the erased term too.
    assert_eq!(detect_cycle(&erase(&l2.proof), 100), Some((0, 3)));
}

#[test]
fn infer_is_deterministic() {
    for e in corpus::all_entries() {
        let c = Checker::new(e.mode);
        let a = c.infer(&Context::new(), &e.proof).map_err(|e| e.to_string());
        let b = c.infer(&Context::new(), &e.proof).map_err(|e| e.to_string());
        assert_eq!(a, b, "{}", e.name);
    }
}

/// Peel `fun a => M` off a proof of `forall a, φ` and substitute closed terms.
#[test]
fn first_order_substitution_preserves_typing() {
    let terms = [
        Term::Empty,
        Term::Omega,
        Term::pair(Term::Empty, Term::Omega),
        Term::power(Term::Empty),
    ];
    let mut tried = 0;
    for e in corpus::all_checked() {
        let (Proof::LamF(a, body), Formula::Forall(b, phi)) = (&e.proof, &e.formula) else {
            continue;
        };
        let phi = phi.subst1(b, &Term::Var(a.clone()));
        let ctx = Context::new();
        izf_core::check(&ctx, body, &phi).unwrap();
        for t in &terms {
            izf_core::check(&ctx, &body.subst_term(a, t), &phi.subst1(a, t))
                .unwrap_or_else(|err| panic!("{} at {t}: {err}", e.name));
            tried += 1;
        }
    }
    assert!(tried >= 20, "{tried}");
}

/// Peel corpus proofs: instantiate universals at ∅ and ω, and replace
/// each hypothesis with every closed pool proof of its type.
#[test]
fn proof_substitution_preserves_typing() {
    let refl = corpus::eq_refl();
    let at = |t: Term| Proof::app_t(refl.clone(), t);
    let mut pool = vec![
        at(Term::Empty),
        at(Term::Omega),
        Proof::inl(at(Term::Empty)),
        Proof::inr(at(Term::Empty)),
        Proof::inl(at(Term::Omega)),
        Proof::inr(at(Term::Omega)),
        build_numeral_proof(0),
        build_numeral_proof(1),
    ];
    for src in [
        "pairRep(empty, empty, empty, inl (eq_refl @empty))",
        "infRep(empty, inl (eq_refl @empty))",
        "inRep(empty, omega, [empty, (infRep(empty, inl (eq_refl @empty)), eq_refl @empty)])",
    ] {
        pool.push(with_refl(src));
    }
    let singles = pool.clone();
    for a in &singles {
        for b in &singles {
            pool.push(Proof::pair(a.clone(), b.clone()));
        }
    }
    let mut tried = 0;
    for e in corpus::all_checked() {
        peel(&e.name, &e.proof, &e.formula, &pool, &mut tried);
    }
    assert!(tried >= 20, "{tried}");
}

fn with_refl(src: &str) -> Proof {
    let m = parse_proof(&src.replace("eq_refl", "r"), Mode::Standard).unwrap();
    m.subst_proof(&PVar::new("r"), &corpus::eq_refl())
}

fn peel(name: &str, m: &Proof, phi: &Formula, pool: &[Proof], tried: &mut usize) {
    let ctx = Context::new();
    match (m, phi) {
        (Proof::LamF(a, body), Formula::Forall(b, psi)) => {
            for t in [Term::Empty, Term::Omega] {
                peel(name, &body.subst_term(a, &t), &psi.subst1(b, &t), pool, tried)
            }
        }
        (Proof::Pair(l, r), Formula::And(a, b)) => {
            peel(name, l, a, pool, tried);
            peel(name, r, b, pool, tried);
        }
        (Proof::LamP(x, ty, body), Formula::Imp(_, psi)) => {
            for n in pool.iter().filter(|n| izf_core::check(&ctx, n, ty).is_ok()) {
                let s = body.subst_proof(x, n);
                izf_core::check(&ctx, &s, psi).unwrap_or_else(|err| panic!("{name}: {err}"));
                *tried += 1;
                peel(name, &s, psi, pool, tried);
            }
        }
        _ => {}
    }
}

#[test]
fn disjunctive_and_existential_corpus_theorems_extract() {
    let cfg = ExtractionConfig {
        paranoid: true,
        ..ExtractionConfig::default()
    };
    let f = parse_file(corpus::EXTRACTION_SRC).unwrap();
    let mut dp = 0;
    let mut wit = 0;
    for d in f.decls() {
        match &d.formula {
            Formula::Or(..) => {
                let (_, n, phi) = extract_dp(&d.proof, &d.formula, &cfg).unwrap();
                izf_core::check(&Context::new(), &n, &phi).unwrap();
                dp += 1;
            }
            Formula::Exists(a, body) => {
                let (t, n, phi) = extract_witness(&d.proof, &d.formula, &cfg).unwrap();
                assert!(phi.alpha_eq(&body.subst1(a, &t)));
                izf_core::check(&Context::new(), &n, &phi).unwrap();
                wit += 1;
            }
            _ => {}
        }
    }
    for n in [3, 4, 33] {
        let (m, goal) = corpus::swap_chain(n);
        let (_, p, phi) = extract_dp(&m, &goal, &cfg).unwrap();
        izf_core::check(&Context::new(), &p, &phi).unwrap();
    }
    assert!(dp >= 1 && wit >= 1);
}

#[test]
fn nwf_constants_need_nwf_mode() {
    let l05 = corpus::nwf_suite().into_iter().find(|e| e.name == "l05").unwrap();
    assert_eq!(l05.mode, Mode::Nwf);
    assert!(Checker::new(Mode::Standard).check(&Context::new(), &l05.proof, &l05.formula).is_err());
    assert!(Checker::new(Mode::Nwf).check(&Context::new(), &l05.proof, &l05.formula).is_ok());
}
