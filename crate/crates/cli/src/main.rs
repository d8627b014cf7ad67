use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use izf_core::axioms::axiom_statement;
use izf_core::corpus;
use izf_core::frontend::{
    fixed_axiom_named, parse_schema, print_erased, Decl, TheoremFile,
};
use izf_core::metatheory::{extract_dp, extract_numeral, extract_witness, ExtractionConfig, Side};
use izf_core::realize::{default_pool, RealizCfg, Realizer, Verdict};
use izf_core::reduce::{detect_cycle, run, Reducible, Status, DEFAULT_FUEL};
use izf_core::typing::path_string;
use izf_core::{erase, parse_file, print_formula, print_proof, print_term, AxiomId, Checker, Context, Mode};

/// Cycle search is bounded separately: it keeps every state it has seen.
const CYCLE_WINDOW: u64 = 10_000;

#[derive(Parser)]
#[command(name = "izf", version, about = "Check, normalize and extract from izf theorem files")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and type-check every declaration.
    Check {
        file: PathBuf,
        /// Print a JSON report instead of one line per declaration.
        #[arg(long)]
        json: bool,
    },
    /// Reduce declarations (the `eval` targets, or all) to values.
    Normalize {
        file: PathBuf,
        #[arg(long, env = "IZF_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Write one JSON record per step.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        decl: Option<String>,
        /// Run the erased machine instead of the typed one.
        #[arg(long)]
        erased: bool,
    },
    /// Read a disjunct, witness or numeral off a closed proof.
    Extract {
        file: PathBuf,
        #[arg(long, value_enum)]
        goal: Goal,
        #[arg(long)]
        decl: Option<String>,
        #[arg(long, env = "IZF_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Recheck every intermediate proof.
        #[arg(long)]
        paranoid: bool,
    },
    /// Decide whether erased proofs realize their statements over a finite universe.
    Realize {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, env = "IZF_FUEL", default_value_t = 10_000)]
        fuel: u64,
        /// Number of default pool realizers to use.
        #[arg(long)]
        pool: Option<usize>,
        #[arg(long)]
        decl: Option<String>,
    },
    /// Print the closed statement of an axiom (all of them when no name is given).
    Axiom {
        /// empty, pair, inf, union, power, sep, repl, inac<i>, in, eq, ind, n, s
        name: Option<String>,
        /// Schema for sep/repl/ind, e.g. "[z; p | z in p]".
        #[arg(long)]
        inst: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Goal {
    Dp,
    Witness,
    Numeral,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Check { file, json } => cmd_check(&file, json),
        Cmd::Normalize {
            file,
            fuel,
            trace,
            decl,
            erased,
        } => cmd_normalize(&file, fuel, trace.as_deref(), decl.as_deref(), erased),
        Cmd::Extract {
            file,
            goal,
            decl,
            fuel,
            paranoid,
        } => cmd_extract(&file, goal, decl.as_deref(), fuel, paranoid),
        Cmd::Realize {
            file,
            depth,
            fuel,
            pool,
            decl,
        } => cmd_realize(&file, depth, fuel, pool, decl.as_deref()),
        Cmd::Axiom { name, inst } => cmd_axiom(name.as_deref(), inst.as_deref()),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<TheoremFile> {
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_file(&src).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn targets<'a>(file: &'a TheoremFile, decl: Option<&str>, directives: Vec<&str>) -> Result<Vec<&'a Decl>> {
    if let Some(name) = decl {
        return Ok(vec![file.decl(name).ok_or_else(|| anyhow!("no declaration named `{name}`"))?]);
    }
    if directives.is_empty() {
        return Ok(file.decls().collect());
    }
    directives
        .into_iter()
        .map(|n| file.decl(n).ok_or_else(|| anyhow!("directive names unknown declaration `{n}`")))
        .collect()
}

#[derive(Serialize)]
struct DeclReport {
    name: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct CheckReport {
    file: String,
    mode: &'static str,
    decls: Vec<DeclReport>,
    exit_code: u8,
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Standard => "standard",
        Mode::Nwf => "nwf",
    }
}

fn cmd_check(path: &Path, json: bool) -> Result<bool> {
    let file = load(path)?;
    let checker = Checker::new(file.mode);
    let started = Instant::now();
    let decls: Vec<DeclReport> = file
        .decls()
        .map(|d| match checker.check(&Context::new(), &d.proof, &d.formula) {
            Ok(()) => DeclReport {
                name: d.name.clone(),
                status: "checked",
                error: None,
            },
            Err(e) => DeclReport {
                name: d.name.clone(),
                status: "failed",
                error: Some(e.to_string()),
            },
        })
        .collect();
    let ok = decls.iter().all(|d| d.error.is_none());
    if json {
        let report = CheckReport {
            file: path.display().to_string(),
            mode: mode_name(file.mode),
            decls,
            exit_code: if ok { 0 } else { 1 },
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for d in &decls {
            match &d.error {
                None => println!("ok      {}", d.name),
                Some(e) => println!("FAILED  {}: {e}", d.name),
            }
        }
        let failed = decls.iter().filter(|d| d.error.is_some()).count();
        println!(
            "{} checked, {failed} failed in {:.2?}",
            decls.len() - failed,
            started.elapsed()
        );
    }
    Ok(ok)
}

#[derive(Serialize)]
struct TraceLine<'a> {
    decl: &'a str,
    step: u64,
    rule: &'static str,
    path: String,
    term: String,
}

fn cmd_normalize(path: &Path, fuel: u64, trace: Option<&Path>, decl: Option<&str>, erased: bool) -> Result<bool> {
    let file = load(path)?;
    let checker = Checker::new(file.mode);
    let mut out = match trace {
        Some(p) => Some(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => None,
    };
    let mut all_ok = true;
    for d in targets(&file, decl, file.eval_targets())? {
        if let Err(e) = checker.check(&Context::new(), &d.proof, &d.formula) {
            println!("{}: does not check: {e}", d.name);
            all_ok = false;
            continue;
        }
        let ok = if erased {
            drive(&d.name, &erase(&d.proof), fuel, out.as_mut(), print_erased)?
        } else {
            drive(&d.name, &d.proof, fuel, out.as_mut(), print_proof)?
        };
        all_ok &= ok;
    }
    if let Some(w) = out.as_mut() {
        w.flush()?;
    }
    Ok(all_ok)
}

fn drive<T: Reducible>(
    name: &str,
    m: &T,
    fuel: u64,
    mut out: Option<&mut BufWriter<File>>,
    show: fn(&T) -> String,
) -> Result<bool> {
    let mut io_err = None;
    let (v, trace) = run(m, fuel, 1, |ev| {
        let Some(w) = out.as_mut() else { return };
        if io_err.is_some() {
            return;
        }
        let line = TraceLine {
            decl: name,
            step: ev.index,
            rule: ev.rule.name(),
            path: path_string(ev.path),
            term: show(ev.state),
        };
        let res = serde_json::to_writer(&mut **w, &line)
            .map_err(anyhow::Error::from)
            .and_then(|_| w.write_all(b"\n").map_err(Into::into));
        if let Err(e) = res {
            io_err = Some(e);
        }
    });
    if let Some(e) = io_err {
        return Err(e.context("writing trace"));
    }
    match trace.status {
        Status::Value => {
            println!("{name}: value after {} steps", trace.steps);
            println!("  {}", show(&v));
            Ok(true)
        }
        Status::FuelExhausted => {
            println!("{name}: FuelExhausted after {} steps", trace.steps);
            match detect_cycle(m, fuel.min(CYCLE_WINDOW)) {
                Some((prefix, period)) => println!("  cycle: prefix {prefix}, period {period}"),
                None => println!("  no cycle within {} steps", fuel.min(CYCLE_WINDOW)),
            }
            Ok(false)
        }
        Status::Stuck { path, reason } => {
            println!(
                "{name}: stuck after {} steps at /{}: {reason}",
                trace.steps,
                path_string(&path)
            );
            Ok(false)
        }
    }
}

fn cmd_extract(path: &Path, goal: Goal, decl: Option<&str>, fuel: u64, paranoid: bool) -> Result<bool> {
    let file = load(path)?;
    let cfg = ExtractionConfig {
        fuel,
        paranoid,
        mode: file.mode,
        ..ExtractionConfig::default()
    };
    let ds = targets(&file, decl, file.eval_targets())?;
    let labelled = ds.len() > 1;
    let mut all_ok = true;
    for d in ds {
        let res = match goal {
            Goal::Numeral => extract_numeral(&d.proof, &d.formula, &cfg).map(|n| n.to_string()),
            Goal::Dp => extract_dp(&d.proof, &d.formula, &cfg).map(|(side, n, phi)| {
                let side = match side {
                    Side::Left => "left",
                    Side::Right => "right",
                };
                format!("{side}\n  {} : {}", print_proof(&n), print_formula(&phi))
            }),
            Goal::Witness => extract_witness(&d.proof, &d.formula, &cfg)
                .map(|(t, n, phi)| format!("{}\n  {} : {}", print_term(&t), print_proof(&n), print_formula(&phi))),
        };
        match res {
            Ok(s) if labelled => println!("{}: {s}", d.name),
            Ok(s) => println!("{s}"),
            Err(e) => {
                println!("{}: {e}", d.name);
                all_ok = false;
            }
        }
    }
    Ok(all_ok)
}

fn cmd_realize(path: &Path, depth: usize, fuel: u64, pool: Option<usize>, decl: Option<&str>) -> Result<bool> {
    let file = load(path)?;
    if file.mode == Mode::Nwf {
        bail!("realizability is only defined for standard-mode files");
    }
    let mut cfg = RealizCfg::new(depth);
    cfg.fuel = fuel;
    if let Some(p) = pool {
        let full = default_pool().len();
        if p == 0 || p > full {
            bail!("--pool must be between 1 and {full}");
        }
        cfg.pool.truncate(p);
    }
    let universe = cfg.universe.len();
    let realizer = Realizer::new(cfg)?;
    let checker = Checker::new(file.mode);
    let ds = targets(&file, decl, file.realize_targets())?;
    let width = ds.iter().map(|d| d.name.len()).max().unwrap_or(0).max(4);
    println!("{:width$}  verdict  (universe {universe} names)", "decl");
    let mut all_ok = true;
    for d in ds {
        let verdict = match checker.check(&Context::new(), &d.proof, &d.formula) {
            Err(e) => format!("ill-typed: {e}"),
            Ok(()) => match realizer.reals(&erase(&d.proof), &d.formula, &Default::default()) {
                Ok(v) => {
                    all_ok &= v == Verdict::Realizes;
                    v.to_string()
                }
                Err(e) => format!("error: {e}"),
            },
        };
        if verdict.starts_with("ill-typed") || verdict.starts_with("error") {
            all_ok = false;
        }
        println!("{:width$}  {verdict}", d.name);
    }
    Ok(all_ok)
}

fn axiom_by_name(name: &str, inst: Option<&str>) -> Result<AxiomId> {
    let schema = |binders: usize, default: fn() -> Arc<izf_core::Schema>| -> Result<Arc<izf_core::Schema>> {
        match inst {
            Some(s) => Ok(Arc::new(parse_schema(s, binders, Mode::Standard).map_err(|e| anyhow!("--inst: {e}"))?)),
            None => Ok(default()),
        }
    };
    let ax = match name {
        "sep" => AxiomId::Sep(schema(1, corpus::sep_instance)?),
        "repl" => AxiomId::Repl(schema(2, corpus::repl_instance)?),
        "ind" => AxiomId::Ind(schema(1, corpus::ind_instance)?),
        other => {
            if inst.is_some() {
                bail!("--inst only applies to sep, repl and ind");
            }
            fixed_axiom_named(other).ok_or_else(|| anyhow!("unknown axiom `{other}`"))?
        }
    };
    Ok(ax)
}

fn cmd_axiom(name: Option<&str>, inst: Option<&str>) -> Result<bool> {
    let axs = match name {
        Some(n) => vec![axiom_by_name(n, inst)?],
        None => {
            let mut v = corpus::axiom_families();
            v.extend([AxiomId::Nwf, AxiomId::Sep0]);
            v
        }
    };
    for ax in axs {
        let phi = axiom_statement(&ax).map_err(|e| anyhow!("{e}"))?;
        println!("{}: {}", ax.name(), print_formula(&phi));
    }
    Ok(true)
}
