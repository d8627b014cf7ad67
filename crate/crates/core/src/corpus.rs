//! The checked theorem library.

use std::sync::{Arc, OnceLock};

use crate::axioms::{axiom_statement, phi_a, rep_atom, statement_vars, AxiomId};
use crate::frontend::{parse_file, TheoremFile};
use crate::metatheory::build_numeral_proof_with;
use crate::proof::{PVar, Proof};
use crate::syntax::sugar::numeral;
use crate::syntax::{Formula, Schema, Term, Var};
use crate::typing::Mode;

pub const AXIOMS_SRC: &str = include_str!("../../../corpus/axioms.izf");
pub const EQUALITY_SRC: &str = include_str!("../../../corpus/equality.izf");
pub const NUMERALS_SRC: &str = include_str!("../../../corpus/numerals.izf");
pub const TWO_IN_OMEGA_SRC: &str = include_str!("../../../corpus/two_in_omega.izf");
pub const EXTRACTION_SRC: &str = include_str!("../../../corpus/extraction.izf");
pub const NWF_LOOP_SRC: &str = include_str!("../../../corpus/nwf_loop.izf");

/// Shipped corpus files by name, for tools that sweep all of them.
pub const FILES: &[(&str, &str)] = &[
    ("axioms.izf", AXIOMS_SRC),
    ("equality.izf", EQUALITY_SRC),
    ("numerals.izf", NUMERALS_SRC),
    ("two_in_omega.izf", TWO_IN_OMEGA_SRC),
    ("extraction.izf", EXTRACTION_SRC),
    ("nwf_loop.izf", NWF_LOOP_SRC),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    /// Type-checks and reaches a value within `step_bound` steps.
    Checks { step_bound: u64 },
    /// Type-checks and loops with the given period.
    Diverges { period: u64 },
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: Formula,
    pub proof: Proof,
    pub expect: Expect,
    pub mode: Mode,
}

impl CorpusEntry {
    fn checks(name: impl Into<String>, formula: Formula, proof: Proof, step_bound: u64) -> CorpusEntry {
        CorpusEntry {
            name: name.into(),
            formula,
            proof,
            expect: Expect::Checks { step_bound },
            mode: Mode::Standard,
        }
    }
}

fn parsed(cell: &'static OnceLock<TheoremFile>, src: &str) -> &'static TheoremFile {
    cell.get_or_init(|| parse_file(src).unwrap_or_else(|e| panic!("corpus file does not parse: {e}")))
}

pub fn equality_file() -> &'static TheoremFile {
    static F: OnceLock<TheoremFile> = OnceLock::new();
    parsed(&F, EQUALITY_SRC)
}

pub fn nwf_file() -> &'static TheoremFile {
    static F: OnceLock<TheoremFile> = OnceLock::new();
    parsed(&F, NWF_LOOP_SRC)
}

pub fn parse_named(name: &str) -> Option<TheoremFile> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| parse_file(src).unwrap_or_else(|e| panic!("{name} does not parse: {e}")))
}

fn equality_proof(name: &str) -> Proof {
    equality_file()
        .decl(name)
        .unwrap_or_else(|| panic!("equality corpus lacks `{name}`"))
        .proof
        .clone()
}

/// The reflexivity proof `∀a. a = a`, by ∈-induction.
pub fn eq_refl() -> Proof {
    equality_proof("eq_refl")
}

pub fn eq_symm() -> Proof {
    equality_proof("eq_symm")
}

pub fn eq_trans() -> Proof {
    equality_proof("eq_trans")
}

pub fn lei() -> Proof {
    equality_proof("lei")
}

/// The schema instances used for SEP, REPL and IND.
pub fn sep_instance() -> Arc<Schema> {
    let body = Formula::Mem(Term::var("z"), Term::var("p"));
    Arc::new(Schema::new(vec![Var::new("z")], vec![Var::new("p")], body).expect("distinct"))
}

pub fn repl_instance() -> Arc<Schema> {
    let body = Formula::Eq(Term::var("y"), Term::var("x"));
    Arc::new(Schema::new(vec![Var::new("x"), Var::new("y")], vec![], body).expect("distinct"))
}

pub fn ind_instance() -> Arc<Schema> {
    let body = Formula::Eq(Term::var("a"), Term::var("a"));
    Arc::new(Schema::new(vec![Var::new("a")], vec![], body).expect("distinct"))
}

/// The axioms covered by `axiom_theorems`, in order.
pub fn axiom_families() -> Vec<AxiomId> {
    vec![
        AxiomId::Empty,
        AxiomId::Pair,
        AxiomId::Inf,
        AxiomId::Union,
        AxiomId::Power,
        AxiomId::Sep(sep_instance()),
        AxiomId::Repl(repl_instance()),
        AxiomId::Inac(1),
        AxiomId::In,
        AxiomId::Eq,
        AxiomId::Ind(ind_instance()),
    ]
}

/// `λā λc. ⟨λx. axProp(c, ā, x), λx. axRep(c, ā, x)⟩`, or for induction
/// `λā λx. ind(x, ā)`.
pub fn axiom_proof(ax: &AxiomId) -> Proof {
    let (vars, c) = statement_vars(ax);
    let args: Vec<Term> = vars.iter().map(|v| Term::Var(v.clone())).collect();
    let wrap = |vars: &[Var], body: Proof| vars.iter().rev().fold(body, |acc, v| Proof::LamF(v.clone(), Box::new(acc)));
    let x = PVar::new("x");
    match ax {
        AxiomId::Ind(s) => {
            let premise = crate::axioms::ind_premise(s, &args);
            let body = Proof::LamP(
                x.clone(),
                premise,
                Box::new(Proof::Ind {
                    schema: s.clone(),
                    premise: Box::new(Proof::Var(x)),
                    args,
                }),
            );
            wrap(&vars, body)
        }
        AxiomId::In | AxiomId::Eq => {
            // Statement order is `∀a b`: the subject first, then the argument.
            let mut all = vec![c.clone()];
            all.extend(vars.iter().cloned());
            wrap(&all, rep_prop_pair(ax, &Term::Var(c.clone()), &args))
        }
        _ => {
            let mut all = vars.clone();
            all.push(c.clone());
            wrap(&all, rep_prop_pair(ax, &Term::Var(c), &args))
        }
    }
}

fn rep_prop_pair(ax: &AxiomId, t: &Term, args: &[Term]) -> Proof {
    let atom = rep_atom(ax, t, args).expect("arity fixed by statement_vars");
    let inner = phi_a(ax, t, args).expect("arity fixed by statement_vars");
    let x = || Box::new(Proof::var("x"));
    Proof::pair(
        Proof::LamP(
            PVar::new("x"),
            atom,
            Box::new(Proof::AxProp {
                ax: ax.clone(),
                t: t.clone(),
                args: args.to_vec(),
                body: x(),
            }),
        ),
        Proof::LamP(
            PVar::new("x"),
            inner,
            Box::new(Proof::AxRep {
                ax: ax.clone(),
                t: t.clone(),
                args: args.to_vec(),
                body: x(),
            }),
        ),
    )
}

pub fn axiom_theorem_name(ax: &AxiomId) -> String {
    match ax {
        AxiomId::Inac(i) => format!("inac{i}_ax"),
        AxiomId::Ind(_) => "ind_ax".into(),
        other => format!("{}_ax", other.name()),
    }
}

pub fn axiom_theorems() -> Vec<CorpusEntry> {
    axiom_families()
        .iter()
        .map(|ax| {
            let formula = axiom_statement(ax).expect("term-free statement");
            CorpusEntry::checks(axiom_theorem_name(ax), formula, axiom_proof(ax), 0)
        })
        .collect()
}

/// The file `corpus/axioms.izf` is this rendering of `axiom_theorems`.
pub fn render_axioms_file() -> String {
    let mut out = String::from("-- One theorem per axiom: each axiom statement, proved from its Rep/Prop pair.\n\n");
    for e in axiom_theorems() {
        out.push_str(&format!(
            "thm {} :\n  {} :=\n  {} .\n\n",
            e.name,
            crate::frontend::print_formula(&e.formula),
            crate::frontend::print_proof(&e.proof)
        ));
    }
    out
}

pub fn equality_theorems() -> Vec<CorpusEntry> {
    let bounds = [("eq_refl", 1), ("eq_symm", 0), ("eq_trans", 1), ("lei", 0), ("ext", 0)];
    bounds
        .iter()
        .map(|(name, bound)| {
            let d = equality_file().decl(name).expect("declared");
            CorpusEntry::checks(*name, d.formula.clone(), d.proof.clone(), *bound)
        })
        .collect()
}

pub fn numeral_formula(n: u32) -> Formula {
    Formula::Mem(numeral(n), Term::Omega)
}

pub fn numeral_theorems() -> Vec<CorpusEntry> {
    let refl = eq_refl();
    (0..=5)
        .map(|n| CorpusEntry::checks(format!("numeral_{n}"), numeral_formula(n), build_numeral_proof_with(n, &refl), 0))
        .collect()
}

pub fn nwf_suite() -> Vec<CorpusEntry> {
    let f = nwf_file();
    ["l0", "l05", "l1", "l2"]
        .iter()
        .map(|name| {
            let d = f.decl(name).expect("declared");
            CorpusEntry {
                name: name.to_string(),
                formula: d.formula.clone(),
                proof: d.proof.clone(),
                expect: if *name == "l2" {
                    Expect::Diverges { period: 3 }
                } else {
                    Expect::Checks { step_bound: 0 }
                },
                mode: Mode::Nwf,
            }
        })
        .collect()
}

fn eqf(a: Term, b: Term) -> Formula {
    Formula::Eq(a, b)
}

/// `P ∨ Q → Q ∨ P` by case analysis.
fn swap(p: &Formula, q: &Formula) -> Proof {
    Proof::lam(
        "h",
        Formula::or(p.clone(), q.clone()),
        Proof::case(
            Proof::var("h"),
            ("y", p.clone(), Proof::inr(Proof::var("y"))),
            ("z", q.clone(), Proof::inl(Proof::var("z"))),
        ),
    )
}

/// `n` alternating swaps over `inl(refl ∅)`; its type is `P ∨ Q` or `Q ∨ P`.
pub fn swap_chain(n: usize) -> (Proof, Formula) {
    let p = eqf(Term::Empty, Term::Empty);
    let q = eqf(Term::Omega, Term::Omega);
    let refl = eq_refl();
    let mut m = Proof::inl(Proof::app_t(refl, Term::Empty));
    let (mut l, mut r) = (p, q);
    for _ in 0..n {
        m = Proof::app(swap(&l, &r), m);
        std::mem::swap(&mut l, &mut r);
    }
    (m, Formula::or(l, r))
}

/// `n` nested lets re-packing the witness of `∃a. a = a`.
pub fn let_chain(n: usize) -> (Proof, Formula) {
    let a = Var::new("a");
    let body = eqf(Term::Var(a.clone()), Term::Var(a.clone()));
    let goal = Formula::Exists(a.clone(), Box::new(body.clone()));
    let id = Proof::lam("p", goal.clone(), Proof::var("p"));
    let mut m = Proof::app(id.clone(), Proof::ex(Term::Omega, Proof::app_t(eq_refl(), Term::Omega)));
    for _ in 0..n {
        let repack = Proof::let_ex("a", "x", body.clone(), m, Proof::ex(Term::Var(a.clone()), Proof::var("x")));
        m = Proof::app(id.clone(), repack);
    }
    (m, goal)
}

/// Membership transported along `n` equalities with `lei`, each one a
/// symmetric detour through `eq_symm`.
pub fn transport_chain(n: usize) -> (Proof, Formula) {
    let (e, o) = (Term::Empty, Term::Omega);
    let refl = eq_refl();
    let zero_in_omega = build_numeral_proof_with(0, &refl);
    let mut m = zero_in_omega;
    for _ in 0..n {
        let eq = Proof::app(
            Proof::app_t(Proof::app_t(eq_symm(), e.clone()), e.clone()),
            Proof::app_t(refl.clone(), e.clone()),
        );
        let lei_inst = Proof::app_t(Proof::app_t(Proof::app_t(lei(), e.clone()), e.clone()), o.clone());
        m = Proof::app(lei_inst, Proof::pair(m, eq));
    }
    (m, Formula::Mem(e, o))
}

pub fn exercise_theorems() -> Vec<CorpusEntry> {
    let (m1, f1) = swap_chain(200);
    let (m2, f2) = swap_chain(33);
    let (m3, f3) = let_chain(48);
    let (m4, f4) = transport_chain(4);
    let symm = Proof::app(
        Proof::app_t(Proof::app_t(eq_symm(), Term::Omega), Term::Omega),
        Proof::app_t(eq_refl(), Term::Omega),
    );
    vec![
        CorpusEntry::checks("swap_chain_200", f1, m1, 400),
        CorpusEntry::checks("swap_chain_33", f2, m2, 66),
        CorpusEntry::checks("let_chain_48", f3, m3, 97),
        CorpusEntry::checks("transport_chain_4", f4, m4, 28),
        CorpusEntry::checks("symm_of_refl", eqf(Term::Omega, Term::Omega), symm, 3),
    ]
}

/// Every standard-mode entry expected to check.
pub fn all_checked() -> Vec<CorpusEntry> {
    let mut v = axiom_theorems();
    v.extend(equality_theorems());
    v.extend(numeral_theorems());
    v.extend(exercise_theorems());
    v
}

/// Everything, nwf suite included.
pub fn all_entries() -> Vec<CorpusEntry> {
    let mut v = all_checked();
    v.extend(nwf_suite());
    v
}
