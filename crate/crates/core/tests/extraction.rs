use izf_core::corpus::{self, EQUALITY_SRC, EXTRACTION_SRC, TWO_IN_OMEGA_SRC};
use izf_core::frontend::TheoremFile;
use izf_core::metatheory::{
    build_numeral_proof, extract_dp, extract_numeral, extract_witness, ExtractError, ExtractionConfig, Side,
};
use izf_core::syntax::sugar::numeral;
use izf_core::{check, parse_file, parse_formula, Context, Formula, Mode, Proof, Term};

fn with_equality(extra: &str) -> TheoremFile {
    parse_file(&format!("{EQUALITY_SRC}\n{extra}")).expect("parses")
}

fn cfg() -> ExtractionConfig {
    ExtractionConfig {
        paranoid: true,
        ..ExtractionConfig::default()
    }
}

#[test]
fn numerals_round_trip() {
    for n in 0..=5 {
        let m = build_numeral_proof(n);
        let goal = corpus::numeral_formula(n);
        check(&Context::new(), &m, &goal).expect("numeral proof checks");
        assert_eq!(extract_numeral(&m, &goal, &cfg()).unwrap(), n);
    }
}

#[test]
fn numeral_proof_layers() {
    // Zero has no inr layer, one has exactly one.
    let count_inr = |n| format!("{}", build_numeral_proof(n)).matches("inr").count();
    assert_eq!(count_inr(0), 0);
    assert_eq!(count_inr(1), 1);
    assert_eq!(count_inr(3), 3);
}

#[test]
fn two_in_omega_file() {
    let f = parse_file(TWO_IN_OMEGA_SRC).unwrap();
    let d = f.decl("two").unwrap();
    assert_eq!(extract_numeral(&d.proof, &d.formula, &cfg()).unwrap(), 2);
    let d = f.decl("one").unwrap();
    assert_eq!(extract_numeral(&d.proof, &d.formula, &cfg()).unwrap(), 1);
}

#[test]
fn membership_in_a_power_set_is_a_shape_error() {
    let f = with_equality(
        "thm e : empty in power empty :=
           inRep(empty, power empty,
             [empty, (powerRep(empty, empty, fun b (x : b in empty) => x), eq_refl @empty)]) .",
    );
    let d = f.decl("e").unwrap();
    check(&Context::new(), &d.proof, &d.formula).expect("checks");
    assert!(matches!(
        extract_numeral(&d.proof, &d.formula, &cfg()),
        Err(ExtractError::ShapeError(_))
    ));
}

#[test]
fn disjunction_property() {
    let f = parse_file(EXTRACTION_SRC).unwrap();
    let d = f.decl("dp").unwrap();
    let (side, n, phi) = extract_dp(&d.proof, &d.formula, &cfg()).unwrap();
    assert_eq!(side, Side::Right);
    assert_eq!(phi, parse_formula("empty = empty", Mode::Standard).unwrap());
    check(&Context::new(), &n, &phi).unwrap();

    let f = with_equality(
        "thm l : empty = empty \\/ bot := inl (eq_refl @empty) .
         thm r : bot \\/ empty = empty := inr (eq_refl @empty) .
         thm c : omega = omega \\/ empty = empty :=
           case inl (eq_refl @empty) of inl (y : empty = empty) => inr y | inr (z : omega = omega) => inl z .",
    );
    let side = |name: &str| {
        let d = f.decl(name).unwrap();
        extract_dp(&d.proof, &d.formula, &cfg()).unwrap().0
    };
    assert_eq!(side("l"), Side::Left);
    assert_eq!(side("r"), Side::Right);
    assert_eq!(side("c"), Side::Right);
}

#[test]
fn witness_property() {
    let f = parse_file(EXTRACTION_SRC).unwrap();
    let d = f.decl("witness").unwrap();
    let (t, n, phi) = extract_witness(&d.proof, &d.formula, &cfg()).unwrap();
    assert_eq!(t, Term::Omega);
    assert_eq!(phi, Formula::Eq(Term::Omega, Term::Omega));
    check(&Context::new(), &n, &phi).unwrap();

    let f = with_equality("thm w : exists x, x = x := [empty, eq_refl @empty] .");
    let d = f.decl("w").unwrap();
    let (t, _, _) = extract_witness(&d.proof, &d.formula, &cfg()).unwrap();
    assert_eq!(t, Term::Empty);
}

#[test]
fn extraction_rejects_wrong_goals() {
    let m = build_numeral_proof(1);
    let goal = corpus::numeral_formula(1);
    assert!(matches!(extract_dp(&m, &goal, &cfg()), Err(ExtractError::ShapeError(_))));
    assert!(matches!(extract_witness(&m, &goal, &cfg()), Err(ExtractError::ShapeError(_))));
    let wrong = Formula::Mem(numeral(2), Term::Omega);
    assert!(matches!(extract_numeral(&m, &wrong, &cfg()), Err(ExtractError::IllTyped(_))));
}

#[test]
fn fuel_is_respected() {
    let (m, goal) = corpus::swap_chain(40);
    let tight = ExtractionConfig {
        fuel: 10,
        ..ExtractionConfig::default()
    };
    assert!(matches!(
        extract_dp(&m, &goal, &tight),
        Err(ExtractError::FuelExhausted { .. })
    ));
    assert!(extract_dp(&m, &goal, &cfg()).is_ok());
    let _: &Proof = &m;
}
