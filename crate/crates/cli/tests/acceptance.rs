//! One line per acceptance criterion; exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::gen::{formula, pair_of_vars, proof, term};
use common::traces::{sweep, TraceSweep};
use izf_core::corpus::{self, CorpusEntry, Expect};
use izf_core::metatheory::{build_numeral_proof, extract_dp, extract_numeral, extract_witness, ExtractionConfig};
use izf_core::realize::{mk_eq_refl, mk_eq_symm, mk_eq_trans, mk_lei, Env, RealizCfg, Realizer, Verdict};
use izf_core::reduce::{detect_cycle, normalize, NormalizeError};
use izf_core::syntax::{Formula, Term};
use izf_core::{
    erase, parse_file, parse_formula, parse_proof, parse_term, print_formula, print_proof, print_term, Checker,
    Context, Mode,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn corpus_path(name: &str) -> String {
    format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn corpus_check() -> Outcome {
    let started = Instant::now();
    let mut entries = corpus::axiom_theorems();
    entries.extend(corpus::equality_theorems());
    entries.extend(corpus::numeral_theorems());
    let counts = (
        corpus::axiom_theorems().len(),
        corpus::equality_theorems().len(),
        corpus::numeral_theorems().len(),
    );
    let failed: Vec<String> = entries
        .iter()
        .filter(|e| Checker::new(e.mode).check(&Context::new(), &e.proof, &e.formula).is_err())
        .map(|e| e.name.clone())
        .collect();
    let mut cli_codes = Vec::new();
    for f in ["axioms.izf", "equality.izf", "numerals.izf"] {
        let code = Command::new(env!("CARGO_BIN_EXE_izf"))
            .args(["check", &corpus_path(f)])
            .output()
            .map(|o| o.status.code())
            .unwrap_or(None);
        cli_codes.push(code);
    }
    let elapsed = started.elapsed();
    let pass = counts == (11, 5, 6)
        && failed.is_empty()
        && cli_codes.iter().all(|c| *c == Some(0))
        && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{}+{}+{} entries, {} failed, izf check exit codes {:?}, {} (limit 10 s)",
            counts.0,
            counts.1,
            counts.2,
            failed.len(),
            cli_codes,
            secs(elapsed)
        ),
    )
}

fn subject_reduction(s: &TraceSweep) -> Outcome {
    let steps = s.states_checked - s.entries as u64;
    outcome(
        s.subject_failures.is_empty() && steps >= 500,
        format!(
            "{} entries, {steps} steps re-checked (need >= 500), {} failures {:?}",
            s.entries,
            s.subject_failures.len(),
            s.subject_failures
        ),
    )
}

fn progress() -> Outcome {
    let started = Instant::now();
    let r = common::progress_report(7);
    outcome(
        r.violations.is_empty() && r.typed_nonvalues > 0 && r.stuck > 0,
        format!(
            "{} terms of size <= 7: {} values, {} stepping ({} well-typed), {} stuck, {} violations, {}",
            r.terms,
            r.values,
            r.stepping,
            r.typed_nonvalues,
            r.stuck,
            r.violations.len(),
            secs(started.elapsed())
        ),
    )
}

fn normalization(entries: &[CorpusEntry], s: &TraceSweep) -> Outcome {
    let worst = entries
        .iter()
        .filter_map(|e| match e.expect {
            Expect::Checks { step_bound } => Some(step_bound),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    outcome(
        s.bound_failures.is_empty(),
        format!(
            "largest declared bound {worst} (limit 10000), {} failures {:?}",
            s.bound_failures.len(),
            s.bound_failures
        ),
    )
}

fn nwf_divergence() -> Outcome {
    let Some(l2) = corpus::nwf_suite().into_iter().find(|e| e.name == "l2") else {
        return outcome(false, "l2 missing from the nwf suite");
    };
    let steps = match normalize(&l2.proof, 100_000) {
        Err(NormalizeError::FuelExhausted(t)) => Some(t.steps),
        _ => None,
    };
    let typed = detect_cycle(&l2.proof, 100);
    let erased = detect_cycle(&erase(&l2.proof), 100);
    let within = |c: Option<(u64, u64)>| matches!(c, Some((p, 3)) if p + 3 <= 100);
    outcome(
        steps == Some(100_000) && within(typed) && within(erased),
        format!("fuel exhausted after {steps:?} steps; cycle (prefix, period) typed {typed:?}, erased {erased:?}"),
    )
}

fn erasure(s: &TraceSweep) -> Outcome {
    outcome(
        s.lockstep_failures.is_empty(),
        format!(
            "{} lockstep steps over {} entries, {} divergences {:?}",
            s.lockstep_steps,
            s.entries,
            s.lockstep_failures.len(),
            s.lockstep_failures
        ),
    )
}

fn extraction() -> Outcome {
    let cfg = ExtractionConfig {
        paranoid: true,
        ..ExtractionConfig::default()
    };
    let mut problems = Vec::new();
    for n in 0..=5u32 {
        match extract_numeral(&build_numeral_proof(n), &corpus::numeral_formula(n), &cfg) {
            Ok(k) if k == n => {}
            other => problems.push(format!("numeral {n}: {other:?}")),
        }
    }
    let recheck = |m: &izf_core::Proof, phi: &Formula| izf_core::check(&Context::new(), m, phi).is_ok();
    let mut extracted = 0;
    let file = parse_file(corpus::EXTRACTION_SRC).expect("corpus parses");
    let mut goals: Vec<(String, izf_core::Proof, Formula)> = file
        .decls()
        .map(|d| (d.name.clone(), d.proof.clone(), d.formula.clone()))
        .collect();
    for n in [1, 2, 33] {
        let (m, f) = corpus::swap_chain(n);
        goals.push((format!("swap_chain_{n}"), m, f));
    }
    for (name, m, phi) in &goals {
        let ok = match phi {
            Formula::Or(..) => extract_dp(m, phi, &cfg).map(|(_, n, psi)| recheck(&n, &psi)),
            Formula::Exists(..) => extract_witness(m, phi, &cfg).map(|(_, n, psi)| recheck(&n, &psi)),
            _ => continue,
        };
        extracted += 1;
        if !matches!(ok, Ok(true)) {
            problems.push(format!("{name}: {ok:?}"));
        }
    }
    outcome(
        problems.is_empty() && extracted >= 3,
        format!("numerals 0..5 round trip, {extracted} dp/witness extractions rechecked, problems {problems:?}"),
    )
}

fn realizability() -> Outcome {
    let started = Instant::now();
    let eq_file = corpus::equality_file();
    let statement = |name: &str| eq_file.decl(name).expect("declared").formula.clone();
    let mut cfg2 = RealizCfg::new(2);
    cfg2.pool.truncate(8);
    cfg2.fuel = 10_000;
    let names2 = cfg2.universe.len();
    let mut cfg1 = RealizCfg::new(1);
    cfg1.pool.truncate(8);
    cfg1.fuel = 10_000;
    let (Ok(r2), Ok(r1)) = (Realizer::new(cfg2), Realizer::new(cfg1)) else {
        return outcome(false, "configuration rejected");
    };
    let runs = [
        ("eqRefl", mk_eq_refl(), statement("eq_refl"), &r2),
        ("eqSymm", mk_eq_symm(), statement("eq_symm"), &r2),
        ("lei", mk_lei(), statement("lei"), &r2),
        ("eqTrans", mk_eq_trans(), statement("eq_trans"), &r1),
    ];
    let mut all = true;
    let mut parts = Vec::new();
    for (name, m, phi, r) in runs {
        let t = Instant::now();
        let v = r.reals(&m, &phi, &Env::new());
        all &= matches!(v, Ok(Verdict::Realizes));
        let v = match v {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        parts.push(format!("{name} {v} ({})", secs(t.elapsed())));
    }
    let elapsed = started.elapsed();
    outcome(
        all && names2 >= 20 && elapsed < Duration::from_secs(60),
        format!(
            "{}; universe {names2} names, pool 8, fuel 10^4; {} (limit 60 s)",
            parts.join(", "),
            secs(elapsed)
        ),
    )
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn substitution_commutation() -> Outcome {
    let cases = 10_000;
    let res = runner(cases).run(
        &(formula(), pair_of_vars(), term(), term()),
        |(f, (a, b), t, u)| {
            let t = t.subst1(&b, &Term::Empty);
            let lhs = f.subst1(&a, &t).subst1(&b, &u.subst1(&a, &t));
            let rhs = f.subst1(&b, &u).subst1(&a, &t);
            if lhs.alpha_eq(&rhs) {
                Ok(())
            } else {
                Err(TestCaseError::fail(format!("{} vs {}", print_formula(&lhs), print_formula(&rhs))))
            }
        },
    );
    match res {
        Ok(()) => outcome(true, format!("{cases} generated instances, 0 counterexamples")),
        Err(e) => outcome(false, format!("counterexample: {e}")),
    }
}

fn round_trip() -> Outcome {
    let fail = |s: &str, e: String| TestCaseError::fail(format!("{s}: {e}"));
    let f = runner(4_000).run(&formula(), |f| {
        let s = print_formula(&f);
        let back = parse_formula(&s, Mode::Standard).map_err(|e| fail(&s, e.to_string()))?;
        if back.alpha_eq(&f) { Ok(()) } else { Err(fail(&s, "not alpha-equal".into())) }
    });
    let t = runner(3_000).run(&term(), |t| {
        let s = print_term(&t);
        let back = parse_term(&s, Mode::Standard).map_err(|e| fail(&s, e.to_string()))?;
        if back.alpha_eq(&t) { Ok(()) } else { Err(fail(&s, "not alpha-equal".into())) }
    });
    let p = runner(3_000).run(&proof(), |m| {
        let s = print_proof(&m);
        let back = parse_proof(&s, Mode::Standard).map_err(|e| fail(&s, e.to_string()))?;
        if back.alpha_eq(&m) { Ok(()) } else { Err(fail(&s, "not alpha-equal".into())) }
    });
    let mut bad_files = Vec::new();
    for (name, src) in corpus::FILES {
        let ok = parse_file(src).ok().and_then(|f| {
            let back = parse_file(&izf_core::frontend::print_file(&f)).ok()?;
            let same = f.mode == back.mode
                && f.items.len() == back.items.len()
                && f.decls().zip(back.decls()).all(|(a, b)| {
                    a.name == b.name && a.formula.alpha_eq(&b.formula) && a.proof.alpha_eq(&b.proof)
                });
            Some(same)
        });
        if ok != Some(true) {
            bad_files.push(*name);
        }
    }
    let errs: Vec<String> = [f.map_err(|e| e.to_string()), t.map_err(|e| e.to_string()), p.map_err(|e| e.to_string())]
        .into_iter()
        .filter_map(Result::err)
        .collect();
    outcome(
        errs.is_empty() && bad_files.is_empty(),
        format!(
            "10000 generated ASTs (4000 formulas, 3000 terms, 3000 proofs) and {} corpus files; failures {errs:?} {bad_files:?}",
            corpus::FILES.len()
        ),
    )
}

fn main() {
    let entries = corpus::all_entries();
    let s = sweep(&entries, 10_000);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("corpus check", Box::new(corpus_check)),
        ("subject reduction", Box::new(|| subject_reduction(&s))),
        ("progress and determinism", Box::new(progress)),
        ("normalization bound", Box::new(|| normalization(&entries, &s))),
        ("nwf divergence", Box::new(nwf_divergence)),
        ("erasure simulation", Box::new(|| erasure(&s))),
        ("extraction round trip", Box::new(extraction)),
        ("realizability smoke", Box::new(realizability)),
        ("substitution commutation", Box::new(substitution_commutation)),
        ("round-trip parsing", Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
