//! Command-line reasoner for conditional knowledge bases.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict,
//! 2 usage or parse error, 3 solver failure.

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crank::construct::{self, SolverMode, SolverOptions};
use crank::indifference::indifference_verdict;
use crank::logic::{parse_conditional, parse_kb_with_cap, KnowledgeBase};
use crank::postulates::{check_cr, probe_set};
use crank::ranking::{Rank, OCF};
use crank::structures::{kernel_basis, structure_table};
use crank::zsystems::{kappa_star, kappa_z, kappa_z_c, minimal_core, tolerance_partition, z_star};
use crank::Error;

#[derive(Parser)]
#[command(
    name = "crank",
    version,
    about = "Conditional knowledge bases: ranking constructions, conditional structures, and revision checks"
)]
struct Cli {
    /// Emit machine-readable JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,

    /// Override the default cap of 24 signature atoms.
    #[arg(long, global = true, value_name = "N")]
    max_atoms: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a knowledge base and echo its rules.
    Parse { kb: PathBuf },
    /// Print the conditional structure of every world.
    Structures { kb: PathBuf },
    /// Print a basis of the kernel of the structure map.
    Kernel {
        kb: PathBuf,
        /// Intersect with the top-balanced words (equal generator counts).
        #[arg(long)]
        top: bool,
    },
    /// System-Z ranks of the rules.
    Zrank {
        kb: PathBuf,
        /// Emit the system-Z ranking as OCF JSON instead.
        #[arg(long)]
        ocf: bool,
    },
    /// System-Z* ranks of the rules; fails on non-minimal-core bases.
    Zstar {
        kb: PathBuf,
        /// Emit the system-Z* ranking as OCF JSON instead.
        #[arg(long)]
        ocf: bool,
    },
    /// Construct a c-representation (constants and ranking).
    Crep {
        kb: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Nonneg)]
        mode: ModeArg,
    },
    /// Revise a prior ranking by the whole base (c-revision).
    Revise {
        kb: PathBuf,
        /// Prior ranking as OCF JSON.
        #[arg(long)]
        prior: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Nonneg)]
        mode: ModeArg,
    },
    /// Does a ranking accept a conditional? Target is a base (constructed
    /// via --engine) or an OCF JSON file.
    Query {
        /// Knowledge base (.ckb) or ranking (.json).
        target: PathBuf,
        /// The conditional, e.g. "(w | p, b, !f, a)".
        conditional: String,
        /// Ranking construction when the target is a base.
        #[arg(long, value_enum, default_value_t = EngineArg::Crep)]
        engine: EngineArg,
    },
    /// Is a ranking indifferent with respect to a base?
    #[command(name = "check-indifference")]
    CheckIndifference { ocf: PathBuf, kb: PathBuf },
    /// Check the postulates CR5-CR8 for a revision by one conditional.
    Postulates {
        #[arg(long)]
        prior: PathBuf,
        #[arg(long)]
        posterior: PathBuf,
        /// The revising conditional.
        #[arg(long)]
        rev: String,
        #[arg(long, default_value_t = 2)]
        max_literals: usize,
    },
    /// Side-by-side system-Z, additive-Z, and system-Z* rankings.
    Compare { kb: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(name = "nonneg")]
    Nonneg,
    #[value(name = "strictly_positive")]
    StrictlyPositive,
    #[value(name = "from_z_ranks")]
    FromZRanks,
}

impl ModeArg {
    fn to_mode(self) -> SolverMode {
        match self {
            ModeArg::Nonneg => SolverMode::NonNegative,
            ModeArg::StrictlyPositive => SolverMode::StrictlyPositive,
            ModeArg::FromZRanks => SolverMode::FromZRanks,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModeArg::Nonneg => "nonneg",
            ModeArg::StrictlyPositive => "strictly_positive",
            ModeArg::FromZRanks => "from_z_ranks",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Z,
    Zc,
    Zstar,
    Crep,
}

impl EngineArg {
    fn name(self) -> &'static str {
        match self {
            EngineArg::Z => "z",
            EngineArg::Zc => "zc",
            EngineArg::Zstar => "zstar",
            EngineArg::Crep => "crep",
        }
    }
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e {
                Error::InconsistentKb
                | Error::NoConstantsFound
                | Error::EmptyWorldSet { .. }
                | Error::SearchSpaceExceeded(_)
                | Error::PresuppositionViolated { .. }
                | Error::NonIntegralRank { .. }
                | Error::InfiniteAntecedent { .. }
                | Error::InfiniteCondition
                | Error::NotKappaConsistent { .. }
                | Error::AllInfinite => 3,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes (e.g. `crank structures | head`)
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_kb(path: &Path, cli: &Cli) -> Result<KnowledgeBase, Failure> {
    let cap = cli.max_atoms.unwrap_or(crank::logic::DEFAULT_ATOM_CAP);
    Ok(parse_kb_with_cap(&read_input(path)?, cap)?)
}

fn load_ocf(path: &Path) -> Result<OCF, Failure> {
    Ok(OCF::from_json_str(&read_input(path)?)?)
}

fn emit(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("valid JSON")
    );
}

fn rank_cell(r: Rank) -> Value {
    match r {
        Rank::Finite(v) => json!(v),
        Rank::Infinite => json!("inf"),
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Parse { kb } => cmd_parse(cli, kb),
        Command::Structures { kb } => cmd_structures(cli, kb),
        Command::Kernel { kb, top } => cmd_kernel(cli, kb, *top),
        Command::Zrank { kb, ocf } => cmd_zrank(cli, kb, *ocf),
        Command::Zstar { kb, ocf } => cmd_zstar(cli, kb, *ocf),
        Command::Crep { kb, mode } => cmd_crep(cli, kb, *mode),
        Command::Revise { kb, prior, mode } => cmd_revise(cli, kb, prior, *mode),
        Command::Query {
            target,
            conditional,
            engine,
        } => cmd_query(cli, target, conditional, *engine),
        Command::CheckIndifference { ocf, kb } => cmd_check_indifference(cli, ocf, kb),
        Command::Postulates {
            prior,
            posterior,
            rev,
            max_literals,
        } => cmd_postulates(cli, prior, posterior, rev, *max_literals),
        Command::Compare { kb } => cmd_compare(cli, kb),
    }
}

fn cmd_parse(cli: &Cli, path: &Path) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    let sig = kb.signature();
    if cli.json {
        emit(&json!({
            "signature": sig.atoms(),
            "worlds": sig.world_count(),
            "conditionals": kb.conditionals().iter().map(|c| json!({
                "label": c.label,
                "consequent": c.consequent.render(sig),
                "antecedent": c.antecedent.render(sig),
            })).collect::<Vec<_>>(),
        }));
    } else {
        println!(
            "signature: {}  ({} worlds)",
            sig.atoms().join(", "),
            sig.world_count()
        );
        for c in kb.conditionals() {
            println!("{}: {}", c.label.as_deref().unwrap_or("?"), c.render(sig));
        }
    }
    Ok(0)
}

fn cmd_structures(cli: &Cli, path: &Path) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    let sig = kb.signature();
    let table = structure_table(&kb);
    if cli.json {
        emit(&json!({
            "signature": sig.atoms(),
            "structures": table.iter().map(|(w, word)| json!({
                "world": sig.render_world(*w),
                "structure": word.to_string(),
            })).collect::<Vec<_>>(),
        }));
    } else {
        let width = table
            .iter()
            .map(|(w, _)| sig.render_world(*w).len())
            .max()
            .unwrap_or(5);
        println!("{:<width$}  structure", "world");
        for (w, word) in &table {
            println!("{:<width$}  {}", sig.render_world(*w), word);
        }
    }
    Ok(0)
}

fn cmd_kernel(cli: &Cli, path: &Path, top: bool) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    let sig = kb.signature();
    let basis = kernel_basis(&kb, top);
    let rendered: Vec<String> = basis.iter().map(|w| w.render(sig)).collect();
    if cli.json {
        emit(&json!({"include_top": top, "basis": rendered}));
    } else {
        println!(
            "kernel basis ({} element{}, top {})",
            basis.len(),
            if basis.len() == 1 { "" } else { "s" },
            if top { "balanced" } else { "free" }
        );
        for b in &rendered {
            println!("{b}");
        }
    }
    Ok(0)
}

fn cmd_zrank(cli: &Cli, path: &Path, ocf: bool) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    if ocf {
        println!("{}", kappa_z(&kb)?.to_json_string());
        return Ok(0);
    }
    let partition = tolerance_partition(&kb).ok_or(Error::InconsistentKb)?;
    if cli.json {
        emit(&json!({"Z": partition.z_ranks()}));
    } else {
        for (i, z) in partition.z_ranks().iter().enumerate() {
            println!("{}: {z}", kb.label(i));
        }
    }
    Ok(0)
}

fn cmd_zstar(cli: &Cli, path: &Path, ocf: bool) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    if ocf {
        let ranking = kappa_star(&kb)?.ok_or(Error::NoConstantsFound)?;
        println!("{}", ranking.to_json_string());
        return Ok(0);
    }
    match z_star(&kb)? {
        Some(zs) => {
            if cli.json {
                emit(&json!({"Zstar": zs.ranks()}));
            } else {
                for (i, z) in zs.ranks().iter().enumerate() {
                    println!("{}: {z}", kb.label(i));
                }
            }
            Ok(0)
        }
        None => {
            let report = minimal_core(&kb);
            if cli.json {
                emit(&json!({"minimal_core": false, "witness": report.witness}));
            } else {
                match &report.witness {
                    Some(w) => eprintln!("not a minimal-core base (witness: {w})"),
                    None => eprintln!("not a minimal-core base"),
                }
            }
            Ok(3)
        }
    }
}

fn construction_json(kb: &KnowledgeBase, mode: ModeArg, c: &construct::Construction) -> Value {
    let sig = kb.signature();
    json!({
        "mode": mode.name(),
        "constants": c.constants.to_json_value(),
        "ocf": {
            "signature": sig.atoms(),
            "ranks": sig.worlds().map(|w| json!({
                "world": sig.render_world(w),
                "rank": rank_cell(c.ocf.rank(w)),
            })).collect::<Vec<_>>(),
        },
    })
}

fn print_construction(kb: &KnowledgeBase, c: &construct::Construction) {
    let sig = kb.signature();
    let minus: Vec<String> = c.constants.minus.iter().map(|q| q.to_string()).collect();
    println!("constants: kappa- = ({})", minus.join(", "));
    let width = sig
        .worlds()
        .map(|w| sig.render_world(w).len())
        .max()
        .unwrap_or(5);
    println!("{:<width$}  rank", "world");
    for w in sig.worlds() {
        println!("{:<width$}  {}", sig.render_world(w), c.ocf.rank(w));
    }
}

fn cmd_crep(cli: &Cli, path: &Path, mode: ModeArg) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    let opts = SolverOptions {
        mode: mode.to_mode(),
        ..Default::default()
    };
    let construction = construct::construct(&kb, &opts)?;
    if cli.json {
        emit(&construction_json(&kb, mode, &construction));
    } else {
        print_construction(&kb, &construction);
    }
    Ok(0)
}

fn cmd_revise(cli: &Cli, path: &Path, prior: &Path, mode: ModeArg) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    let prior = load_ocf(prior)?;
    if prior.signature() != kb.signature() {
        return Err(Failure::Core(Error::SignatureMismatch));
    }
    let opts = SolverOptions {
        mode: mode.to_mode(),
        prior: Some(prior),
        ..Default::default()
    };
    let construction = construct::construct(&kb, &opts)?;
    if cli.json {
        emit(&construction_json(&kb, mode, &construction));
    } else {
        print_construction(&kb, &construction);
    }
    Ok(0)
}

fn cmd_query(
    cli: &Cli,
    target: &Path,
    conditional: &str,
    engine: EngineArg,
) -> Result<u8, Failure> {
    let is_ocf = target.extension().is_some_and(|e| e == "json");
    let (ranking, engine_name) = if is_ocf {
        (load_ocf(target)?, None)
    } else {
        let kb = load_kb(target, cli)?;
        let ranking = match engine {
            EngineArg::Z => kappa_z(&kb)?,
            EngineArg::Zc => kappa_z_c(&kb)?,
            EngineArg::Zstar => kappa_star(&kb)?.ok_or(Error::NoConstantsFound)?,
            EngineArg::Crep => construct::c_representation(&kb, &SolverOptions::default())?,
        };
        (ranking, Some(engine.name()))
    };
    let cond = parse_conditional(conditional, ranking.signature())?;
    let verified = ranking.rank_formula(&crank::Formula::and(
        cond.antecedent.clone(),
        cond.consequent.clone(),
    ));
    let falsified = ranking.rank_formula(&crank::Formula::and(
        cond.antecedent.clone(),
        crank::Formula::not(cond.consequent.clone()),
    ));
    let accepted = ranking.accepts(&cond);
    if cli.json {
        emit(&json!({
            "conditional": cond.render(ranking.signature()),
            "engine": engine_name,
            "accepted": accepted,
            "rank_verifying": rank_cell(verified),
            "rank_falsifying": rank_cell(falsified),
        }));
    } else {
        println!(
            "{}: {} (verifying side {}, falsifying side {})",
            cond.render(ranking.signature()),
            if accepted { "accepted" } else { "not accepted" },
            verified,
            falsified
        );
    }
    Ok(u8::from(!accepted))
}

fn cmd_check_indifference(cli: &Cli, ocf: &Path, kb: &Path) -> Result<u8, Failure> {
    let kb = load_kb(kb, cli)?;
    let ranking = load_ocf(ocf)?;
    if ranking.signature() != kb.signature() {
        return Err(Failure::Core(Error::SignatureMismatch));
    }
    let verdict = indifference_verdict(&ranking, &kb);
    if cli.json {
        emit(&verdict.to_json_value());
    } else if verdict.indifferent {
        println!("indifferent");
    } else {
        println!("not indifferent");
        if let Some(w) = &verdict.witness {
            println!(
                "witness: {}",
                serde_json::to_string(&w.to_json_value()).expect("valid JSON")
            );
        }
    }
    Ok(u8::from(!verdict.indifferent))
}

fn cmd_postulates(
    cli: &Cli,
    prior: &Path,
    posterior: &Path,
    rev: &str,
    max_literals: usize,
) -> Result<u8, Failure> {
    let prior = load_ocf(prior)?;
    let posterior = load_ocf(posterior)?;
    let rev = parse_conditional(rev, prior.signature())?;
    let probes = probe_set(prior.signature(), max_literals)?;
    let report = check_cr(&prior, &posterior, &rev, &probes)?;
    if cli.json {
        emit(&report.to_json_value());
    } else {
        for (name, verdict) in [
            ("CR5", &report.cr5),
            ("CR6", &report.cr6),
            ("CR7", &report.cr7),
            ("CR8", &report.cr8),
        ] {
            if verdict.holds {
                println!("{name}: holds");
            } else {
                println!("{name}: violated ({})", verdict.witnesses.join(", "));
            }
        }
    }
    Ok(u8::from(!report.core_holds()))
}

fn cmd_compare(cli: &Cli, path: &Path) -> Result<u8, Failure> {
    let kb = load_kb(path, cli)?;
    let sig = kb.signature();
    let kz = kappa_z(&kb)?;
    let kzc = kappa_z_c(&kb)?;
    let kstar = kappa_star(&kb)?;
    if cli.json {
        let finite = |k: &OCF| -> Vec<Value> { k.ranks().iter().map(|r| rank_cell(*r)).collect() };
        emit(&json!({
            "signature": sig.atoms(),
            "worlds": sig.worlds().map(|w| sig.render_world(w)).collect::<Vec<_>>(),
            "kappa_z": finite(&kz),
            "kappa_z_c": finite(&kzc),
            "kappa_star": kstar.as_ref().map(finite),
        }));
    } else {
        let width = sig
            .worlds()
            .map(|w| sig.render_world(w).len())
            .max()
            .unwrap_or(5)
            .max(5);
        match &kstar {
            Some(ks) => {
                println!("{:<width$}  kappa_z  kappa_z_c  kappa_star", "world");
                for w in sig.worlds() {
                    println!(
                        "{:<width$}  {:<7}  {:<9}  {}",
                        sig.render_world(w),
                        kz.rank(w).to_string(),
                        kzc.rank(w).to_string(),
                        ks.rank(w)
                    );
                }
            }
            None => {
                println!(
                    "{:<width$}  kappa_z  kappa_z_c   (no system-Z* ranking)",
                    "world"
                );
                for w in sig.worlds() {
                    println!(
                        "{:<width$}  {:<7}  {}",
                        sig.render_world(w),
                        kz.rank(w).to_string(),
                        kzc.rank(w)
                    );
                }
            }
        }
    }
    Ok(0)
}
