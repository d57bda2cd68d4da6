//! Command-line surface.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use melforge_core::averaging::{averaged_functions, bautin_family, PerturbedOscillator, BAUTIN_PARAMS};
use melforge_core::bifurcate::{classify_quadratic, QuadraticVerdict};
use melforge_core::ideals::{chain_stabilization_of, groebner, reduce_averaged_chain};
use melforge_core::numlab::IntegratorConfig;
use melforge_core::poissonred::{
    euler_reduce, kappa_summary, mb_reduce, EulerPerturbation, Hemisphere, MBPerturbation, ReductionConvention,
};
use melforge_core::poly::MPoly;
use melforge_core::{MonomialOrder, Rat};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::files::{
    emit, parse_rat, read_json, to_json_string, EulerPerturbationFile, GeneratorsFile, GoldenFile, LambdaFile,
    MBPerturbationFile, Provenance, SpectrumFile, SystemFile,
};
use crate::report::Report;
use crate::repro::{repro_proposition, repro_theorem, NumericLeg, MAX_THEOREM_ORDER};
use crate::sweep::find_cycles;

#[derive(Debug, Parser)]
#[command(
    name = "melforge",
    version,
    about = "Averaged functions and limit cycles of perturbed oscillators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderArg {
    Degrevlex,
    Lex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConventionArg {
    ChainRule,
    AsPrinted,
}

impl From<ConventionArg> for ReductionConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::ChainRule => ReductionConvention::ChainRule,
            ConventionArg::AsPrinted => ReductionConvention::AsPrinted,
        }
    }
}

/// Cycle search settings shared by `classify` and `verify`.
#[derive(Clone, Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub zmin: f64,
    #[arg(long, default_value_t = 2.0)]
    pub zmax: f64,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-16)]
    pub atol: f64,
    /// Bisection stops once brackets are this narrow.
    #[arg(long, default_value_t = 1e-10)]
    pub z_tol: f64,
}

impl SearchArgs {
    fn config(&self) -> Result<IntegratorConfig> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(CliError::input("tolerances must be positive"));
        }
        Ok(IntegratorConfig::with_tolerances(self.rtol, self.atol))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Averaged functions f_1 .. f_N of a perturbed oscillator.
    Avg {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Groebner basis of an ideal, optionally reducing a polynomial.
    Groebner {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long, value_enum, default_value = "degrevlex")]
        order: OrderArg,
        /// Polynomial to reduce modulo the basis.
        #[arg(long)]
        reduce: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduces each averaged function modulo the coefficients of the lower ones.
    AvgReduce {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Case and cycle count of a quadratic Bautin parameter point.
    Classify {
        #[arg(long)]
        lambda: PathBuf,
        /// Cross-check the cycle count with the integrator.
        #[arg(long)]
        verify_numeric: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planar system on a Maxwell-Bloch leaf.
    MbReduce {
        #[arg(long)]
        pert: PathBuf,
        /// Leaf value of the Casimir.
        #[arg(long, allow_negative_numbers = true)]
        c: String,
        #[arg(long, value_enum, default_value = "chain-rule")]
        convention: ConventionArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planar system on one hemisphere of an Euler-top leaf.
    EulerReduce {
        /// Moments of inertia, comma separated.
        #[arg(long)]
        mu: String,
        #[arg(long)]
        pert: PathBuf,
        #[arg(long)]
        c2: String,
        /// `+` or `-`.
        #[arg(long, allow_hyphen_values = true)]
        hemisphere: String,
        #[arg(long, value_enum, default_value = "chain-rule")]
        convention: ConventionArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric displacement scan and cycle search, written as CSV.
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        lambda: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recomputes the quadratic classification polynomials.
    ReproTheorem {
        #[arg(long, default_value_t = MAX_THEOREM_ORDER)]
        order: usize,
        /// Reference polynomials by name, replacing the built-in ones.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recomputes the cubic fold example and counts its cycles.
    ReproProposition {
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1e-14)]
        rtol: f64,
        #[arg(long, default_value_t = 1e-20)]
        atol: f64,
        #[arg(long, default_value_t = 91)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Avg { system, order, out } => cmd_avg(&system, order, out.as_deref()),
        Command::Groebner {
            gens,
            order,
            reduce,
            out,
        } => cmd_groebner(&gens, order, reduce.as_deref(), out.as_deref()),
        Command::AvgReduce { spectrum, out } => cmd_avg_reduce(&spectrum, out.as_deref()),
        Command::Classify {
            lambda,
            verify_numeric,
            search,
            out,
        } => cmd_classify(&lambda, verify_numeric.then_some(&search), out.as_deref()),
        Command::MbReduce {
            pert,
            c,
            convention,
            out,
        } => cmd_mb_reduce(&pert, &c, convention.into(), out.as_deref()),
        Command::EulerReduce {
            mu,
            pert,
            c2,
            hemisphere,
            convention,
            out,
        } => cmd_euler_reduce(&mu, &pert, &c2, &hemisphere, convention.into(), out.as_deref()),
        Command::Verify {
            system,
            lambda,
            search,
            out,
        } => cmd_verify(&system, lambda.as_deref(), &search, out.as_deref()),
        Command::ReproTheorem { order, golden, out } => {
            let golden = golden.as_deref().map(read_json::<GoldenFile>).transpose()?;
            finish(repro_theorem(order, golden.as_ref())?, out.as_deref())
        }
        Command::ReproProposition {
            eps,
            rtol,
            atol,
            grid,
            out,
        } => {
            let leg = NumericLeg {
                eps,
                config: IntegratorConfig::with_tolerances(rtol, atol),
                z_range: (0.3, 1.2, grid),
                ..NumericLeg::default()
            };
            finish(repro_proposition(&leg)?, out.as_deref())
        }
    }
}

/// Writes the report; failed checks turn into a mismatch error.
fn finish(report: Report, out: Option<&Path>) -> Result<()> {
    emit(out, &to_json_string(&report))?;
    let failures = report.failures();
    if failures.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = failures.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    Err(CliError::Mismatch(lines.join("; ")))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })
}

pub fn cmd_avg(system: &Path, order: usize, out: Option<&Path>) -> Result<()> {
    if order == 0 {
        return Err(CliError::input("order must be at least 1"));
    }
    let sys = read_json::<SystemFile>(system)?.to_system()?;
    let spec = averaged_functions(&sys, order)?;
    emit(out, &to_json_string(&SpectrumFile::from_spectrum(&spec)))
}

#[derive(Serialize)]
struct GroebnerOutput {
    vars: Vec<String>,
    order: &'static str,
    basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reduced: Option<Reduced>,
}

#[derive(Serialize)]
struct Reduced {
    input: String,
    normal_form: String,
    member: bool,
}

pub fn cmd_groebner(gens: &Path, order: OrderArg, reduce: Option<&str>, out: Option<&Path>) -> Result<()> {
    let (vars, polys) = read_json::<GeneratorsFile>(gens)?.parse()?;
    let (mo, name) = match order {
        OrderArg::Degrevlex => (MonomialOrder::degrevlex(vars.len()), "degrevlex"),
        OrderArg::Lex => (MonomialOrder::lex(vars.len()), "lex"),
    };
    let g = groebner(&vars, &polys, mo)?;
    let reduced = match reduce {
        Some(text) => {
            let p = MPoly::parse(text, &vars)?;
            let nf = g.normal_form(&p)?;
            Some(Reduced {
                input: p.to_string(),
                member: nf.is_zero(),
                normal_form: nf.to_string(),
            })
        }
        None => None,
    };
    let output = GroebnerOutput {
        vars: vars.names().to_vec(),
        order: name,
        basis: g.basis().iter().map(MPoly::to_string).collect(),
        reduced,
    };
    emit(out, &to_json_string(&output))
}

#[derive(Serialize)]
struct HattedCoefficientOut {
    z_power: u32,
    pi_power: Option<u32>,
    raw: String,
    hatted: String,
}

#[derive(Serialize)]
struct HattedLevelOut {
    order: usize,
    hatted_f: String,
    coefficients: Vec<HattedCoefficientOut>,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct HattedOutput {
    params: Vec<String>,
    levels: Vec<HattedLevelOut>,
    stabilization: String,
}

pub fn cmd_avg_reduce(spectrum: &Path, out: Option<&Path>) -> Result<()> {
    let spec = read_json::<SpectrumFile>(spectrum)?.to_spectrum()?;
    let nparams = spec.vars().len() - 2;
    let chain = reduce_averaged_chain(&spec, MonomialOrder::degrevlex_ascending(nparams))?;
    let stab = chain_stabilization_of(&chain)?;
    let output = HattedOutput {
        params: chain.param_vars.names().to_vec(),
        levels: chain
            .levels
            .iter()
            .map(|l| HattedLevelOut {
                order: l.order,
                hatted_f: l.hatted_f.to_string(),
                coefficients: l
                    .coefficients
                    .iter()
                    .map(|c| HattedCoefficientOut {
                        z_power: c.z_power,
                        pi_power: c.pi_power,
                        raw: c.raw.to_string(),
                        hatted: c.hatted.to_string(),
                    })
                    .collect(),
                basis: l.basis.basis().iter().map(MPoly::to_string).collect(),
            })
            .collect(),
        stabilization: stab.note,
    };
    emit(out, &to_json_string(&output))
}

#[derive(Serialize)]
struct Verdict {
    case: &'static str,
    #[serde(rename = "N")]
    n: Option<u32>,
    witnesses: BTreeMap<&'static str, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<(&'static str, String)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    reasons: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    numeric: Option<Report>,
}

impl From<QuadraticVerdict> for Verdict {
    fn from(v: QuadraticVerdict) -> Self {
        Verdict {
            case: v.case.label(),
            n: v.n,
            witnesses: v.witnesses.into_iter().map(|(k, r)| (k, r.to_string())).collect(),
            ratio: v.ratio.map(|(k, r)| (k, r.to_string())),
            warnings: v.warnings,
            reasons: v.reasons,
            numeric: None,
        }
    }
}

fn bautin_lambda(file: &LambdaFile) -> Result<[Rat; 10]> {
    let names: Vec<String> = BAUTIN_PARAMS.iter().map(|s| s.to_string()).collect();
    let values = file.ordered(&names)?;
    Ok(values.try_into().expect("ten names"))
}

pub fn cmd_classify(lambda: &Path, numeric: Option<&SearchArgs>, out: Option<&Path>) -> Result<()> {
    let file: LambdaFile = read_json(lambda)?;
    let lam = bautin_lambda(&file)?;
    let verdict = classify_quadratic(&lam);
    let n = verdict.n;
    let mut v = Verdict::from(verdict);
    let mut failed = None;
    if let Some(search) = numeric {
        let mut report = Report::new("classify-numeric", &[&read_bytes(lambda)?]);
        let cfg = search.config()?;
        let params: Vec<f64> = lam.iter().map(Rat::to_f64).collect();
        let found = find_cycles(
            &bautin_family(),
            &params,
            search.eps,
            (search.zmin, search.zmax, search.grid),
            &cfg,
            search.z_tol,
        )?;
        let zs: Vec<f64> = found.cycles.iter().map(|c| c.z).collect();
        let tol = format!(
            "rtol {:e}, atol {:e}, z in [{}, {}]",
            search.rtol, search.atol, search.zmin, search.zmax
        );
        match n {
            Some(n) => {
                report.check_tol(
                    "cycle count",
                    zs.len() == n as usize,
                    format!("{} numeric cycle(s) at z = {zs:?}, predicted {n}", zs.len()),
                    tol,
                );
            }
            None => {
                report.check_tol(
                    "cycle count",
                    true,
                    format!("no prediction; {} numeric cycle(s) at z = {zs:?}", zs.len()),
                    tol,
                );
            }
        }
        report.result("suspects", &found.suspects);
        if !report.passed {
            failed = Some(
                report
                    .failures()
                    .iter()
                    .map(|c| c.detail.clone())
                    .collect::<Vec<_>>()
                    .join("; "),
            );
        }
        v.numeric = Some(report.without_timings());
    }
    emit(out, &to_json_string(&v))?;
    match failed {
        Some(msg) => Err(CliError::Mismatch(msg)),
        None => Ok(()),
    }
}

fn provenance(reducer: &str, details: BTreeMap<String, String>) -> Option<Provenance> {
    Some(Provenance {
        reducer: reducer.to_string(),
        details,
    })
}

pub fn cmd_mb_reduce(pert: &Path, c: &str, convention: ReductionConvention, out: Option<&Path>) -> Result<()> {
    let [a, b, cc] = read_json::<MBPerturbationFile>(pert)?.polys()?;
    let leaf = parse_rat(c)?;
    let pert = MBPerturbation::new(a, b, cc, leaf.clone())?;
    let red = mb_reduce(&pert, convention)?;
    let details = BTreeMap::from([
        ("c".to_string(), leaf.to_string()),
        ("convention".to_string(), convention.name().to_string()),
        ("quotient".to_string(), red.quotient.to_string()),
        ("parity_A".to_string(), red.parity_a.name().to_string()),
        ("parity_B".to_string(), red.parity_b.name().to_string()),
    ]);
    emit(
        out,
        &to_json_string(&SystemFile::from_system(
            &red.system,
            provenance("maxwell-bloch", details),
        )),
    )
}

fn parse_mu(text: &str) -> Result<[Rat; 3]> {
    let parts: Vec<Rat> = text.split(',').map(|s| parse_rat(s.trim())).collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|_| CliError::input(format!("--mu needs three comma separated values, got `{text}`")))
}

pub fn cmd_euler_reduce(
    mu: &str,
    pert: &Path,
    c2: &str,
    hemisphere: &str,
    convention: ReductionConvention,
    out: Option<&Path>,
) -> Result<()> {
    let mu = parse_mu(mu)?;
    let [p, q, r] = read_json::<EulerPerturbationFile>(pert)?.polys()?;
    let c2 = parse_rat(c2)?;
    let h = Hemisphere::from_symbol(hemisphere)?;
    let pert = EulerPerturbation::new(mu.clone(), p, q, r, c2.clone())?;
    let red = euler_reduce(&pert, h, convention)?;
    let mut details = kappa_summary(&red.kappa13, &red.kappa23);
    details.insert("mu".into(), mu.iter().map(Rat::to_string).collect::<Vec<_>>().join(","));
    details.insert("c2".into(), c2.to_string());
    details.insert("hemisphere".into(), h.symbol().to_string());
    details.insert("convention".into(), convention.name().to_string());
    if red.flags.constant_part {
        details.insert(
            "warning".into(),
            "constant terms in P or Q: averaging will reject this system".into(),
        );
    }
    emit(
        out,
        &to_json_string(&SystemFile::from_system(&red.system, provenance("euler-top", details))),
    )
}

/// Parameter values for a numeric run: square-root constants are filled in,
/// everything else comes from the lambda file (which may override them).
pub fn numeric_params(sys: &PerturbedOscillator, lambda: Option<&LambdaFile>) -> Result<Vec<f64>> {
    let values = match lambda {
        Some(l) => l.values()?,
        None => BTreeMap::new(),
    };
    let vars = sys.vars();
    let mut out = Vec::new();
    for name in sys.param_names() {
        let i = vars.index_of(&name).expect("parameter");
        let v = match (values.get(&name), vars.sqrt_rule(i)) {
            (Some(v), _) => v.to_f64(),
            (None, Some(square)) => square.to_f64().sqrt(),
            (None, None) => return Err(CliError::input(format!("no value for parameter `{name}`"))),
        };
        out.push(v);
    }
    Ok(out)
}

#[derive(Serialize)]
struct CsvRow {
    kind: &'static str,
    z: f64,
    d: f64,
    error: f64,
}

pub fn cmd_verify(system: &Path, lambda: Option<&Path>, search: &SearchArgs, out: Option<&Path>) -> Result<()> {
    let sys = read_json::<SystemFile>(system)?.to_system()?;
    let lambda = lambda.map(read_json::<LambdaFile>).transpose()?;
    let params = numeric_params(&sys, lambda.as_ref())?;
    let cfg = search.config()?;
    let found = find_cycles(
        &sys,
        &params,
        search.eps,
        (search.zmin, search.zmax, search.grid),
        &cfg,
        search.z_tol,
    )?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = found
        .scan
        .iter()
        .map(|&(z, d, error)| CsvRow {
            kind: "scan",
            z,
            d,
            error,
        })
        .chain(found.cycles.iter().map(|c| CsvRow {
            kind: "root",
            z: c.z,
            d: 0.0,
            error: c.error_bound,
        }));
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::input(format!("cannot format CSV: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::input(format!("cannot format CSV: {e}")))?;
    emit(out, &String::from_utf8(bytes).expect("CSV is UTF-8"))?;
    if out.is_some() {
        let zs: Vec<f64> = found.cycles.iter().map(|c| c.z).collect();
        eprintln!("{} cycle(s) at z = {zs:?}", zs.len());
    }
    Ok(())
}
