//! The `chainforge` command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chains::{stability_report, StabilityReport};
use crate::error::{Error, Result};
use crate::groups::{core, DEFAULT_MAX_ELEMENTS};
use crate::io::{parse_chain_spec, parse_family, parse_group, parse_sequence, parse_subgroup, read_json, ChainSpec};
use crate::profinite::{
    adjoint_kernels, family_discriminants, family_stability_report, family_to_chain_with, lenstra_chain,
    rational_core_check, wild_certificate, CoreCheckMode, FamilySpec, Mode,
};
use crate::taileq::{
    asymptotically_constant, check_sequence, family_sequence_structural, family_tail_decide,
    interleaving_search, HomSequence,
};

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Parser, Debug)]
#[command(name = "chainforge", version, about = "Core towers and discriminants of group chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stability report (cores, discriminants, ψ kernels) of a chain or family.
    Analyze(SpecArgs),
    /// Discriminants, adjoint kernels and the wild certificate of a family.
    Family(SpecArgs),
    /// Tail comparison of two families or two homomorphism sequences.
    Compare(CompareArgs),
    /// Normal core of a subgroup.
    Core(CommonArgs),
    /// Chain H_ℓ = H ∩ Ŵ_ℓ of a family, with its recovery checks.
    Lenstra(SpecArgs),
    /// Tidy CSV of discriminant and kernel orders.
    PlotData(SpecArgs),
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Largest group that may be enumerated.
    #[arg(long, env = "CHAINFORGE_MAX_ELEMENTS", default_value_t = DEFAULT_MAX_ELEMENTS,
          value_parser = positive)]
    pub max_elements: usize,
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_parser = positive)]
    pub depth: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    pub other: PathBuf,
    #[arg(long, value_parser = positive)]
    pub window: Option<usize>,
    #[arg(long, default_value_t = 100_000, value_parser = positive)]
    pub bound: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Structural,
    Explicit,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Structural => Mode::Structural,
            ModeArg::Explicit => Mode::Explicit,
            ModeArg::Both => Mode::Both,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

enum Input {
    Chain(ChainSpec),
    Family(FamilySpec),
}

/// A chain spec file, or a bare family file (recognised by `"primes"`).
fn read_input(args: &SpecArgs) -> Result<Input> {
    let v = read_json(&args.common.input)?;
    let mut input = if v.get("primes").is_some() {
        Input::Family(parse_family(&v, "family")?)
    } else {
        match parse_chain_spec(&v, args.common.max_elements)? {
            ChainSpec::Family(f) => Input::Family(f),
            other => Input::Chain(other),
        }
    };
    if let Input::Family(f) = &mut input {
        if let Some(d) = args.depth {
            *f = f.with_depth(d).map_err(|e| Error::Spec(format!("--depth: {e}")))?;
        }
        if let Some(m) = args.mode {
            f.mode = m.into();
        }
    }
    Ok(input)
}

fn family_input(args: &SpecArgs) -> Result<FamilySpec> {
    match read_input(args)? {
        Input::Family(f) => Ok(f),
        Input::Chain(_) => Err(Error::Spec(format!(
            "{}: expected a family spec",
            args.common.input.display()
        ))),
    }
}

/// Structural, explicit or both; `both` fails unless the two agree.
fn family_report(fam: &FamilySpec, max_elements: usize) -> Result<StabilityReport> {
    let structural = fam.mode.structural().then(|| family_stability_report(fam)).transpose()?;
    let explicit = if fam.mode.explicit() {
        Some(stability_report(&family_to_chain_with(fam, max_elements)?)?)
    } else {
        None
    };
    match (structural, explicit) {
        (Some(s), Some(mut e)) => {
            if s.records != e.records {
                return Err(Error::Invariant(
                    "structural and explicit family reports disagree".into(),
                ));
            }
            e.notes.push("structural and explicit orders agree".into());
            Ok(e)
        }
        (Some(s), None) => Ok(s),
        (None, Some(e)) => Ok(e),
        (None, None) => unreachable!("a mode is always structural or explicit"),
    }
}

fn report_for(args: &SpecArgs) -> Result<StabilityReport> {
    match read_input(args)? {
        Input::Family(f) => family_report(&f, args.common.max_elements),
        Input::Chain(c) => {
            let chain = c.to_chain(args.common.max_elements)?;
            if let Some(d) = args.depth {
                if d < chain.depth() {
                    let base = chain.base().clone();
                    let levels = (1..=d).map(|k| chain.level(k).clone()).collect();
                    return stability_report(&crate::chains::GroupChain::explicit(base, levels)?);
                }
            }
            stability_report(&chain)
        }
    }
}

fn opt(x: Option<u128>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// `n,level,disc_order,psi_kernel_order`
pub fn report_csv(report: &StabilityReport) -> String {
    let mut s = String::from("n,level,disc_order,psi_kernel_order\n");
    for r in &report.records {
        let _ = writeln!(s, "{},{},{},{}", r.n, r.level, r.disc_order, opt(r.psi_kernel_order));
    }
    s
}

/// `n,level,discriminant_order,kernel_order,mode`
pub fn plot_csv(report: &StabilityReport, mode: &str) -> String {
    let mut s = String::from("n,level,discriminant_order,kernel_order,mode\n");
    for r in &report.records {
        let _ = writeln!(s, "{},{},{},{},{mode}", r.n, r.level, r.disc_order, opt(r.psi_kernel_order));
    }
    s
}

fn cmd_analyze(args: &SpecArgs) -> Result<()> {
    let report = report_for(args)?;
    let out = args.common.out.as_deref();
    match args.common.format {
        Format::Csv => emit(out, &report_csv(&report)),
        Format::Json => {
            emit(out, &to_json(&report)?)?;
            if let Some(p) = out {
                std::fs::write(p.with_extension("csv"), report_csv(&report))?;
            }
            Ok(())
        }
    }
}

fn cmd_plot_data(args: &SpecArgs) -> Result<()> {
    let input = read_input(args)?;
    let mode = match &input {
        Input::Chain(_) => "explicit".to_string(),
        Input::Family(f) => serde_json::to_value(f.mode)?.as_str().unwrap_or_default().to_string(),
    };
    let report = match input {
        Input::Family(f) => family_report(&f, args.common.max_elements)?,
        Input::Chain(_) => report_for(args)?,
    };
    emit(args.common.out.as_deref(), &plot_csv(&report, &mode))
}

fn cmd_family(args: &SpecArgs) -> Result<()> {
    let fam = family_input(args)?;
    let depth = fam.depth();
    let spec = fam.base()?;
    let d = fam.closed_subgroup(&spec)?;
    let discriminants = (0..depth)
        .map(|n| family_discriminants(&fam, n))
        .collect::<Result<Vec<_>>>()?;
    let sequence = check_sequence(&family_sequence_structural(&fam, depth)?)?;
    let constancy = asymptotically_constant(&sequence, depth)?;
    let kernels = adjoint_kernels(&spec, &d, depth, fam.mode)?;
    let certificate = wild_certificate(&spec, &d, depth)?;
    let mut rational = Vec::new();
    for l in 1..=depth {
        let factorwise = rational_core_check(&spec, &d, l, CoreCheckMode::Factorwise)?;
        let explicit = if fam.mode.explicit() && l <= 2 {
            Some(rational_core_check(&spec, &d, l, CoreCheckMode::Explicit)?)
        } else {
            None
        };
        if explicit.is_some_and(|e| e != factorwise) {
            return Err(Error::Invariant(format!(
                "rational core check at level {l}: explicit and factorwise disagree"
            )));
        }
        rational.push(json!({"level": l, "factorwise": factorwise, "explicit": explicit}));
    }
    let mut notes = vec![crate::profinite::Density::PerFactor.note(depth)];
    if fam.mode.explicit() {
        let report = family_report(&fam, args.common.max_elements)?;
        notes.extend(report.notes);
    }
    let out = json!({
        "family": fam,
        "discriminants": discriminants,
        "psi_kernels": constancy,
        "rational_core": rational,
        "adjoint_kernels": kernels,
        "certificate": certificate,
        "notes": notes,
    });
    emit(args.common.out.as_deref(), &to_json(&out)?)
}

fn cmd_lenstra(args: &SpecArgs) -> Result<()> {
    let fam = family_input(args)?;
    let depth = fam.depth();
    let spec = fam.base()?;
    let d = fam.closed_subgroup(&spec)?;
    let result = lenstra_chain(&spec, &d, depth)?;
    let mut rational = Vec::new();
    for l in 1..=depth {
        rational.push(json!({
            "level": l,
            "factorwise": rational_core_check(&spec, &d, l, CoreCheckMode::Factorwise)?,
            "explicit": rational_core_check(&spec, &d, l, CoreCheckMode::Explicit)?,
        }));
    }
    let out = json!({
        "family": fam,
        "levels": result.summaries()?,
        "rational_core": rational,
        "notes": result.notes,
    });
    emit(args.common.out.as_deref(), &to_json(&out)?)
}

fn cmd_core(args: &CommonArgs) -> Result<()> {
    let v = read_json(&args.input)?;
    let g = parse_group(
        v.get("group").ok_or_else(|| Error::Spec("missing field \"group\"".into()))?,
        "group",
    )?
    .with_max_elements(args.max_elements);
    let h = parse_subgroup(
        &g,
        v.get("subgroup").ok_or_else(|| Error::Spec("missing field \"subgroup\"".into()))?,
        "subgroup",
    )?;
    let c = core(&g, &h)?.into_group();
    let normal = c.is_normal_in(&g)? && c.is_subgroup_of(&h)?;
    let gens: Vec<Value> = c.generators().iter().map(|x| x.to_descriptor()).collect();
    let out = json!({
        "group_order": crate::numbers::Count(g.order()?),
        "subgroup_order": crate::numbers::Count(h.order()?),
        "core_order": crate::numbers::Count(c.order()?),
        "core_generators": gens,
        "core_is_normal": normal,
        "subgroup_is_normal": h.is_normal_in(&g)?,
    });
    emit(args.out.as_deref(), &to_json(&out)?)
}

enum Comparable {
    Family(FamilySpec),
    Sequence(HomSequence),
}

fn read_comparable(path: &Path) -> Result<Comparable> {
    let v = read_json(path)?;
    if v.get("primes").is_some() {
        Ok(Comparable::Family(parse_family(&v, "family")?))
    } else if let Some(f) = v.get("family") {
        Ok(Comparable::Family(parse_family(f, "family")?))
    } else {
        Ok(Comparable::Sequence(parse_sequence(&v)?))
    }
}

fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let left = read_comparable(&args.common.input)?;
    let right = read_comparable(&args.other)?;
    let out = match (left, right) {
        (Comparable::Family(f1), Comparable::Family(f2)) => {
            let verdict = family_tail_decide(&f1, &f2, args.window)?;
            let w = match &verdict {
                crate::taileq::TailVerdict::EquivalentOnWindow { window, .. }
                | crate::taileq::TailVerdict::DistinctEvidence { window, .. } => *window,
            };
            let a = family_sequence_structural(&f1, w)?;
            let b = family_sequence_structural(&f2, w)?;
            let search = interleaving_search(&a, &b, args.bound)?;
            json!({"verdict": verdict, "search": search})
        }
        (Comparable::Sequence(a), Comparable::Sequence(b)) => {
            let (mut a, mut b) = (check_sequence(&a)?, check_sequence(&b)?);
            if let Some(w) = args.window {
                a = a.truncated(w);
                b = b.truncated(w);
            }
            let window = a.len().max(b.len());
            json!({
                "left": asymptotically_constant(&a, window)?,
                "right": asymptotically_constant(&b, window)?,
                "search": interleaving_search(&a, &b, args.bound)?,
            })
        }
        _ => {
            return Err(Error::Spec(
                "compare needs two family specs or two sequence specs".into(),
            ))
        }
    };
    emit(args.common.out.as_deref(), &to_json(&out)?)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Family(a) => cmd_family(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Core(a) => cmd_core(a),
        Command::Lenstra(a) => cmd_lenstra(a),
        Command::PlotData(a) => cmd_plot_data(a),
    }
}
