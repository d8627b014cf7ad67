//! Sweeps over the corpus traces shared by the corpus suite and acceptance.

use izf_core::corpus::{CorpusEntry, Expect};
use izf_core::reduce::{detect_cycle, run, simulate_erasure, Status};
use izf_core::{Checker, Context};

/// Steps of a diverging entry that are re-checked and compared with erasure.
pub const DIVERGING_PREFIX: u64 = 1_000;

#[derive(Debug, Default)]
pub struct TraceSweep {
    pub entries: usize,
    pub states_checked: u64,
    pub subject_failures: Vec<String>,
    pub lockstep_steps: u64,
    pub lockstep_failures: Vec<String>,
    /// Entries that did not reach a value within their declared bound, or
    /// whose bound exceeds `limit`.
    pub bound_failures: Vec<String>,
    /// Diverging entries whose behaviour differs from the declared period.
    pub divergence_failures: Vec<String>,
}

impl TraceSweep {
    pub fn ok(&self) -> bool {
        self.subject_failures.is_empty()
            && self.lockstep_failures.is_empty()
            && self.bound_failures.is_empty()
            && self.divergence_failures.is_empty()
    }
}

pub fn sweep(entries: &[CorpusEntry], limit: u64) -> TraceSweep {
    let mut r = TraceSweep::default();
    for e in entries {
        r.entries += 1;
        let checker = Checker::new(e.mode);
        let ctx = Context::new();
        if let Err(err) = checker.check(&ctx, &e.proof, &e.formula) {
            r.subject_failures.push(format!("{}: initial state: {err}", e.name));
            continue;
        }
        r.states_checked += 1;
        let fuel = match e.expect {
            Expect::Checks { step_bound } => {
                if step_bound > limit {
                    r.bound_failures.push(format!("{}: declared bound {step_bound} > {limit}", e.name));
                }
                step_bound
            }
            Expect::Diverges { .. } => DIVERGING_PREFIX,
        };
        let mut first_failure = None;
        let (_, trace) = run(&e.proof, fuel, 0, |ev| {
            r.states_checked += 1;
            if first_failure.is_none() {
                if let Err(err) = checker.check(&ctx, ev.state, &e.formula) {
                    first_failure = Some(format!("{}: step {} ({}): {err}", e.name, ev.index, ev.rule));
                }
            }
        });
        r.subject_failures.extend(first_failure);
        match (&e.expect, &trace.status) {
            (Expect::Checks { .. }, Status::Value) => {}
            (Expect::Checks { step_bound }, st) => r
                .bound_failures
                .push(format!("{}: {st:?} after {} steps (bound {step_bound})", e.name, trace.steps)),
            (Expect::Diverges { .. }, Status::FuelExhausted) => {}
            (Expect::Diverges { .. }, st) => r.divergence_failures.push(format!("{}: ended with {st:?}", e.name)),
        }
        if let Expect::Diverges { period } = e.expect {
            match detect_cycle(&e.proof, DIVERGING_PREFIX) {
                Some((_, p)) if p == period => {}
                other => r
                    .divergence_failures
                    .push(format!("{}: cycle {other:?}, expected period {period}", e.name)),
            }
        }
        let sim = simulate_erasure(&e.proof, fuel);
        r.lockstep_steps += sim.steps;
        if let Some(d) = &sim.divergence {
            r.lockstep_failures.push(format!("{}: erasure diverges at step {}", e.name, d.index));
        }
    }
    r
}
