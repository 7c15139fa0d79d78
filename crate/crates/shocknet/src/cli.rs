//! The `shocknet` command line.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 numeric failure
//! (enumeration or sampler limit, representation mismatch, a model that
//! never fails).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use shocknet_core::ordering::{
    compare_networks, count_pmf_matrix, ihr_ratio_profile, ihra_check, tp2_check, ComparisonReport, ModelSpec,
    OrderingVerdict,
};
use shocknet_core::partition::DEFAULT_ENUMERATION_LIMIT;
use shocknet_core::reliability::{
    hazard_curve, reliability_component_model, reliability_fatal, ShockMixture,
};
use shocknet_core::signature::classical_signature;
use shocknet_core::sim::{curve_from_lifetimes, SimConfig, SimMode};
use shocknet_core::{
    BetaSequence, DamageModel, Grid, Network, ReliabilityCurve, SignatureKind, SignatureVector,
};

use crate::manifest::{mode_name, parse_mode, Manifest};
use crate::spec::{parse_damage, parse_grid, parse_law, GridSpec};
use crate::{csvio, netfile, parallel, Error, Result};

const LAW_HELP: &str = "First-arrival law: exp:rate=R, weibull:shape=K,scale=S, linhaz:a=A,b=B \
(hazard a + 2bt, so Lambda(t) = at + bt^2; linhaz:a=1,b=1 gives survival exp(-t - t^2)), \
or mvf:file=PATH (CSV of t,Lambda knots, linear between knots)";

const DAMAGE_HELP: &str = "Damage per shock: binomial:p=P (or binomial:q=Q with q = 1 - p), one-per-shock, fatal";

const GRID_HELP: &str = "Time grid: auto (200 points up to where R < 1e-3), start:end:count, or t1,t2,...";

#[derive(Debug, Parser)]
#[command(name = "shocknet", version, about = "Signature-based reliability of networks under shock models")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact or Monte Carlo signatures of a network.
    Signature(SignatureArgs),
    /// Reliability curve of a network under a shock model.
    Reliability(ReliabilityArgs),
    /// Hazard rate of the shock model.
    Hazard(HazardArgs),
    /// Aging and total-positivity checks.
    Check(CheckArgs),
    /// Compare the shock models of two manifests.
    Compare(CompareArgs),
    /// Monte Carlo reliability curve from a manifest.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Classical,
    Tie,
    Fatal,
    All,
}

#[derive(Debug, Args)]
struct SignatureArgs {
    /// Network file.
    network: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    kind: KindArg,
    /// Estimate from this many Monte Carlo trials instead of enumerating.
    #[arg(long, value_name = "TRIALS")]
    mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    /// t-signature mixture over shock counts.
    Shock,
    /// Classical signature with one component failure per arrival.
    Component,
    /// Fatal-shock signature; every shock fails at least one link.
    Fatal,
    /// Classical-signature mixture, the analytic target of mechanistic simulation.
    Mechanistic,
}

impl ModelArg {
    fn name(self) -> &'static str {
        match self {
            ModelArg::Shock => "shock",
            ModelArg::Component => "component",
            ModelArg::Fatal => "fatal",
            ModelArg::Mechanistic => "mechanistic",
        }
    }
}

#[derive(Debug, Args)]
struct ReliabilityArgs {
    network: PathBuf,
    #[arg(long, help = LAW_HELP)]
    law: String,
    #[arg(long, help = DAMAGE_HELP)]
    damage: Option<String>,
    #[arg(long, default_value = "auto", help = GRID_HELP)]
    grid: String,
    #[arg(long, value_enum, default_value = "shock")]
    model: ModelArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HazardArgs {
    network: PathBuf,
    #[arg(long, help = LAW_HELP)]
    law: String,
    #[arg(long, help = DAMAGE_HELP)]
    damage: String,
    #[arg(long, default_value = "auto", help = GRID_HELP)]
    grid: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    /// beta*_k^(1/k) non-increasing.
    Ihra,
    /// beta*_{k+1}/beta*_k non-increasing.
    IhrRatio,
    /// Shock-count pmf TP2 in (t, k); needs --law.
    Tp2,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Network file (not needed for tp2).
    network: Option<PathBuf>,
    #[arg(long, value_enum)]
    check: CheckKind,
    /// Per-shock link failure probability.
    #[arg(long, conflicts_with = "q")]
    p: Option<f64>,
    /// Per-shock link survival probability, 1 - p.
    #[arg(long)]
    q: Option<f64>,
    /// Largest shock count examined.
    #[arg(long, default_value_t = 50)]
    k: usize,
    #[arg(long, help = LAW_HELP)]
    law: Option<String>,
    #[arg(long, default_value = "auto", help = GRID_HELP)]
    grid: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
    /// Overrides the grid of the first manifest.
    #[arg(long, help = GRID_HELP)]
    grid: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    manifest: PathBuf,
    /// model-faithful or mechanistic (overrides the manifest).
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the manifest grid; auto uses the empirical curve.
    #[arg(long, help = GRID_HELP)]
    grid: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::Core(shocknet_core::Error::EnumerationLimit { .. }) = e {
                let _ = writeln!(stderr, "hint: rerun with --mc <TRIALS> --seed <SEED> to estimate the signature");
            }
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let (output, text) = match command {
        Command::Signature(a) => (a.output.clone(), cmd_signature(&a)?),
        Command::Reliability(a) => (a.output.clone(), cmd_reliability(&a)?),
        Command::Hazard(a) => (a.output.clone(), cmd_hazard(&a, stderr)?),
        Command::Check(a) => (a.output.clone(), cmd_check(&a)?),
        Command::Compare(a) => (a.output.clone(), cmd_compare(&a)?),
        Command::Simulate(a) => (a.output.clone(), cmd_simulate(&a)?),
    };
    match output {
        Some(path) => fs::write(&path, text).map_err(|e| Error::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

fn base_dir() -> &'static Path {
    Path::new(".")
}

fn tie_signature(net: &Network) -> Result<SignatureVector> {
    Ok(parallel::partition_tally(net, DEFAULT_ENUMERATION_LIMIT)?.tie_signature()?)
}

fn cmd_signature(a: &SignatureArgs) -> Result<String> {
    let net = netfile::read_network(&a.network)?;
    let kinds: Vec<SignatureKind> = match a.kind {
        KindArg::Classical => vec![SignatureKind::Classical],
        KindArg::Tie => vec![SignatureKind::Tie],
        KindArg::Fatal => vec![SignatureKind::Fatal],
        KindArg::All => vec![SignatureKind::Classical, SignatureKind::Tie, SignatureKind::Fatal],
    };
    let mut comments = vec![
        "shocknet signature".to_string(),
        format!("network: {}", a.network.display()),
        format!("links: {}", net.link_count()),
    ];
    match a.mc {
        Some(trials) => {
            comments.push(format!("monte carlo: trials = {trials}, seed = {}", a.seed));
            let estimates = kinds
                .iter()
                .map(|&kind| parallel::signature_mc(&net, kind, trials, a.seed))
                .collect::<shocknet_core::Result<Vec<_>>>()?;
            csvio::write_signature_estimates(&comments, &estimates)
        }
        None => {
            let mut sigs = Vec::new();
            let mut tally = None;
            for kind in kinds {
                sigs.push(match kind {
                    SignatureKind::Classical => classical_signature(&net)?,
                    _ => {
                        if tally.is_none() {
                            tally = Some(parallel::partition_tally(&net, DEFAULT_ENUMERATION_LIMIT)?);
                        }
                        let tally = tally.as_ref().expect("just computed");
                        if kind == SignatureKind::Tie { tally.tie_signature()? } else { tally.fatal_signature()? }
                    }
                });
            }
            csvio::write_signatures(&comments, &sigs)
        }
    }
}

/// A point evaluator for auto grids.
fn single_point(curve: impl Fn(&Grid) -> shocknet_core::Result<ReliabilityCurve>) -> impl FnMut(f64) -> shocknet_core::Result<f64> {
    move |t| Ok(curve(&Grid::new(vec![t])?)?.reliability[0])
}

fn cmd_reliability(a: &ReliabilityArgs) -> Result<String> {
    let net = netfile::read_network(&a.network)?;
    let law = parse_law(&a.law, base_dir())?;
    let damage = a.damage.as_deref().map(parse_damage).transpose()?;
    let grid_spec = parse_grid(&a.grid)?;
    let incompatible = |allowed: &str| {
        Error::Usage(format!(
            "--model {} is incompatible with --damage {}; it needs {allowed}",
            a.model.name(),
            a.damage.as_deref().unwrap_or("(none)")
        ))
    };
    let curve = match a.model {
        ModelArg::Shock | ModelArg::Mechanistic => {
            let damage = match damage {
                Some(d @ (DamageModel::Binomial { .. } | DamageModel::OnePerShock)) => d,
                Some(DamageModel::Fatal) if a.model == ModelArg::Shock => {
                    return Err(Error::Usage("fatal damage uses --model fatal".into()))
                }
                _ => return Err(incompatible("--damage binomial:p=P or one-per-shock")),
            };
            let model = if a.model == ModelArg::Shock {
                ShockMixture::new(&tie_signature(&net)?, &law, damage)?
            } else {
                ShockMixture::mechanistic(&classical_signature(&net)?, &law, damage)?
            };
            let grid = grid_spec.resolve(|t| model.reliability(t))?;
            model.curve(&grid)?
        }
        ModelArg::Fatal => {
            if !matches!(damage, None | Some(DamageModel::Fatal)) {
                return Err(incompatible("--damage fatal or no --damage"));
            }
            let sig = parallel::partition_tally(&net, DEFAULT_ENUMERATION_LIMIT)?.fatal_signature()?;
            let grid = grid_spec.resolve(single_point(|g| reliability_fatal(&sig, &law, g)))?;
            reliability_fatal(&sig, &law, &grid)?
        }
        ModelArg::Component => {
            if !matches!(damage, None | Some(DamageModel::OnePerShock)) {
                return Err(incompatible("--damage one-per-shock or no --damage"));
            }
            let sig = classical_signature(&net)?;
            let grid = grid_spec.resolve(single_point(|g| reliability_component_model(&sig, &law, g)))?;
            reliability_component_model(&sig, &law, &grid)?
        }
    };
    let comments = vec![
        "shocknet reliability".to_string(),
        format!("network: {}", a.network.display()),
        format!("model: {}", a.model.name()),
        format!("law: {}", a.law),
        format!("damage: {}", a.damage.as_deref().unwrap_or("(none)")),
        format!("grid: {}", a.grid),
    ];
    csvio::write_curve(&comments, &curve)
}

fn cmd_hazard(a: &HazardArgs, stderr: &mut dyn Write) -> Result<String> {
    let net = netfile::read_network(&a.network)?;
    let law = parse_law(&a.law, base_dir())?;
    let damage = parse_damage(&a.damage)?;
    if damage == DamageModel::Fatal {
        return Err(Error::Usage("hazard needs --damage binomial:p=P or one-per-shock".into()));
    }
    let sig = tie_signature(&net)?;
    let model = ShockMixture::new(&sig, &law, damage)?;
    let grid = parse_grid(&a.grid)?.resolve(|t| model.reliability(t))?;
    let curve = hazard_curve(&sig, &law, damage, &grid)?;
    if let Some(t) = curve.truncated_at {
        let _ = writeln!(stderr, "warning: reliability underflows at t = {t}; hazard rows from there on are omitted");
    }
    let comments = vec![
        "shocknet hazard".to_string(),
        format!("network: {}", a.network.display()),
        format!("law: {}", a.law),
        format!("damage: {}", a.damage),
        format!("grid: {}", a.grid),
    ];
    csvio::write_hazard(&comments, &curve)
}

fn check_damage(a: &CheckArgs) -> Result<DamageModel> {
    let p = match (a.p, a.q) {
        (Some(p), None) => p,
        (None, Some(q)) => 1.0 - q,
        _ => return Err(Error::Usage(format!("--check {:?} needs --p or --q", a.check).to_lowercase())),
    };
    Ok(DamageModel::binomial(p)?)
}

fn cmd_check(a: &CheckArgs) -> Result<String> {
    let mut out = String::new();
    match a.check {
        CheckKind::Ihra | CheckKind::IhrRatio => {
            let path = a.network.as_ref().ok_or_else(|| Error::Usage("this check needs a network file".into()))?;
            let net = netfile::read_network(path)?;
            let damage = check_damage(a)?;
            let tail = tie_signature(&net)?.tail().to_f64();
            let beta = BetaSequence::compute(&tail, damage, a.k)?;
            let DamageModel::Binomial { p, q } = damage else { unreachable!() };
            writeln!(out, "network: {}", path.display()).unwrap();
            writeln!(out, "damage: binomial p = {p}, q = {q}; k = 0..={}", a.k).unwrap();
            if a.check == CheckKind::Ihra {
                let verdict = ihra_check(&beta);
                match verdict.first_violation {
                    None => writeln!(out, "IHRA (beta*_k^(1/k) non-increasing): holds").unwrap(),
                    Some(k) => writeln!(out, "IHRA (beta*_k^(1/k) non-increasing): NOT monotone; first increase at k = {k}").unwrap(),
                }
            } else {
                let profile = ihr_ratio_profile(&beta);
                let label = "IHR ratio beta*_{k+1}/beta*_k";
                if profile.constant {
                    writeln!(out, "{label}: monotone (constant)").unwrap();
                } else if let Some(k) = profile.first_increase {
                    writeln!(out, "{label}: NOT monotone; first increase at k = {k}").unwrap();
                } else {
                    writeln!(out, "{label}: monotone (non-increasing)").unwrap();
                }
                writeln!(out, "k,ratio").unwrap();
                for (k, r) in profile.ratios.iter().enumerate() {
                    writeln!(out, "{k},{r}").unwrap();
                }
            }
        }
        CheckKind::Tp2 => {
            let spec = a.law.as_deref().ok_or_else(|| Error::Usage("--check tp2 needs --law".into()))?;
            let law = parse_law(spec, base_dir())?;
            let grid = parse_grid(&a.grid)?.resolve(|t| Ok(law.survival(t)))?;
            let verdict = tp2_check(&count_pmf_matrix(&law, &grid, a.k));
            writeln!(out, "law: {spec}; grid: {} points; k = 0..={}", grid.len(), a.k).unwrap();
            match verdict.witness {
                None => writeln!(out, "TP2 of P(xi(t) = k) in (t, k): holds").unwrap(),
                Some((i, k)) => writeln!(
                    out,
                    "TP2 of P(xi(t) = k) in (t, k): fails; minor at t-index {i}, k = {k} is {}",
                    verdict.minor
                )
                .unwrap(),
            }
        }
    }
    Ok(out)
}

fn model_spec(m: &Manifest) -> Result<ModelSpec> {
    if m.damage == DamageModel::Fatal {
        return Err(Error::Usage(format!("{}: compare needs binomial or one-per-shock damage", m.path.display())));
    }
    Ok(ModelSpec { signature: m.signature(SignatureKind::Tie)?, law: m.law.clone(), damage: m.damage })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn observed(v: &OrderingVerdict, report: &ComparisonReport) -> String {
    match v.witness {
        None => "holds".to_string(),
        Some(i) => format!("fails (first at t = {})", report.first.times[i]),
    }
}

fn cmd_compare(a: &CompareArgs) -> Result<String> {
    let m1 = Manifest::load(&a.first)?;
    let m2 = Manifest::load(&a.second)?;
    let (s1, s2) = (model_spec(&m1)?, model_spec(&m2)?);
    let grid_spec = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => m1.grid.clone(),
    };
    let grid = match grid_spec {
        GridSpec::Auto => {
            let r1 = ShockMixture::new(&s1.signature, &s1.law, s1.damage)?;
            let r2 = ShockMixture::new(&s2.signature, &s2.law, s2.damage)?;
            Grid::auto(|t| Ok(r1.reliability(t)?.max(r2.reliability(t)?)))?
        }
        other => other.resolve(|_| Ok(1.0))?,
    };
    let report = compare_networks(&s1, &s2, &grid)?;

    let mut out = String::new();
    writeln!(out, "first:  {}", a.first.display()).unwrap();
    writeln!(out, "second: {}", a.second.display()).unwrap();
    writeln!(out, "grid: {} points on [{}, {}]", grid.len(), grid.points()[0], grid.last()).unwrap();
    writeln!(out).unwrap();
    let width = report.premises.iter().map(|p| p.name.len()).max().unwrap_or(0).max("premise".len());
    writeln!(out, "{:<width$}  holds", "premise").unwrap();
    for p in &report.premises {
        writeln!(out, "{:<width$}  {}", p.name, yes_no(p.holds)).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "{:<12}  {:<9}  observed", "conclusion", "predicted").unwrap();
    writeln!(out, "{:<12}  {:<9}  {}", "T1 <=st T2", yes_no(report.st_predicted), observed(&report.st_observed, &report)).unwrap();
    writeln!(out, "{:<12}  {:<9}  {}", "T1 <=hr T2", yes_no(report.hr_predicted), observed(&report.hr_observed, &report)).unwrap();
    writeln!(out, "{:<12}  {:<9}  {}", "T2 <=st T1", "-", observed(&report.st_reverse_observed, &report)).unwrap();
    match report.crossing {
        Some(t) => writeln!(out, "curves cross: yes (first sign change at t = {t})").unwrap(),
        None => writeln!(out, "curves cross: no").unwrap(),
    }
    if report.prediction_violated() {
        writeln!(out, "WARNING: a predicted order is contradicted by the curves").unwrap();
    }
    Ok(out)
}

fn cmd_simulate(a: &SimulateArgs) -> Result<String> {
    let m = Manifest::load(&a.manifest)?;
    let mode = match &a.mode {
        Some(name) => parse_mode(name)?,
        None => m.mode.unwrap_or(SimMode::ModelFaithful),
    };
    let trials = a.trials.or(m.trials).unwrap_or(10_000);
    let seed = a.seed.or(m.seed).unwrap_or(0);
    let cfg = match mode {
        SimMode::ModelFaithful => {
            let kind = if m.damage == DamageModel::Fatal { SignatureKind::Fatal } else { SignatureKind::Tie };
            SimConfig::model_faithful(&m.signature(kind)?, m.law.clone(), m.damage, trials, seed)?
        }
        SimMode::Mechanistic => {
            let net = m
                .network()
                .ok_or_else(|| Error::Usage("mechanistic mode needs a manifest with a `network` file".into()))?;
            SimConfig::mechanistic(net, m.law.clone(), m.damage, trials, seed)?
        }
    };
    let lifetimes = parallel::simulate_lifetimes(&cfg);
    let grid_spec = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => m.grid.clone(),
    };
    let grid = grid_spec.resolve(|t| Ok(lifetimes.iter().filter(|&&l| l > t).count() as f64 / lifetimes.len() as f64))?;
    let curve = curve_from_lifetimes(&lifetimes, &grid)?;
    let mut comments = vec!["shocknet simulate".to_string()];
    comments.extend(m.echo());
    comments.push(format!("effective: mode = {}, trials = {trials}, seed = {seed}", mode_name(mode)));
    csvio::write_curve(&comments, &curve)
}
