//! JSON documents read and written by the command line.

use std::collections::BTreeMap;
use std::path::Path;

use melforge_core::averaging::{AveragedSpectrum, Orientation, PerturbedOscillator};
use melforge_core::poly::{MPoly, VarSet};
use melforge_core::rat::Rat;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SYSTEM_FORMAT: &str = "melforge.system.v1";
pub const SPECTRUM_FORMAT: &str = "melforge.spectrum.v1";

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Writes to `out`, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.into(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_vars(names: &[String], sqrt_rules: &BTreeMap<String, String>) -> Result<VarSet> {
    let mut vars = VarSet::new(names)?;
    for (name, square) in sqrt_rules {
        vars = vars.with_sqrt_rule(name, parse_rat(square)?)?;
    }
    Ok(vars)
}

fn rules_of(vars: &VarSet) -> BTreeMap<String, String> {
    (0..vars.len())
        .filter_map(|i| vars.sqrt_rule(i).map(|q| (vars.name(i).to_string(), q.to_string())))
        .collect()
}

pub fn parse_rat(text: &str) -> Result<Rat> {
    text.parse::<Rat>()
        .map_err(|_| CliError::input(format!("`{text}` is not a rational number")))
}

fn parse_polys(texts: &[String], vars: &VarSet) -> Result<Vec<MPoly>> {
    texts
        .iter()
        .map(|t| MPoly::parse(t, vars).map_err(CliError::from))
        .collect()
}

/// Which reduction produced a system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub reducer: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
}

/// A perturbed oscillator: `p[j]`, `q[j]` are the `ε^j` coefficients of the
/// perturbation, in the polynomial text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub format: String,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sqrt_rules: BTreeMap<String, String>,
    pub orientation: String,
    pub p: Vec<String>,
    pub q: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl SystemFile {
    pub fn from_system(sys: &PerturbedOscillator, provenance: Option<Provenance>) -> Self {
        let vars = sys.vars();
        SystemFile {
            format: SYSTEM_FORMAT.to_string(),
            vars: vars.names().to_vec(),
            sqrt_rules: rules_of(vars),
            orientation: sys.orientation().name().to_string(),
            p: sys.p().iter().map(|f| f.to_string()).collect(),
            q: sys.q().iter().map(|f| f.to_string()).collect(),
            provenance,
        }
    }

    pub fn to_system(&self) -> Result<PerturbedOscillator> {
        if self.format != SYSTEM_FORMAT {
            return Err(CliError::input(format!(
                "expected format {SYSTEM_FORMAT}, found {}",
                self.format
            )));
        }
        let vars = build_vars(&self.vars, &self.sqrt_rules)?;
        let orientation = Orientation::from_name(&self.orientation)?;
        Ok(PerturbedOscillator::new(
            &vars,
            orientation,
            parse_polys(&self.p, &vars)?,
            parse_polys(&self.q, &vars)?,
        )?)
    }
}

/// Averaged functions `f₁ .. f_N` and the first nonzero index `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub format: String,
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sqrt_rules: BTreeMap<String, String>,
    pub order: usize,
    pub ell: Option<usize>,
    pub f: Vec<String>,
}

impl SpectrumFile {
    pub fn from_spectrum(spec: &AveragedSpectrum) -> Self {
        SpectrumFile {
            format: SPECTRUM_FORMAT.to_string(),
            vars: spec.vars().names().to_vec(),
            sqrt_rules: rules_of(spec.vars()),
            order: spec.order(),
            ell: spec.first_nonzero_order(),
            f: spec.functions().iter().map(|f| f.to_string()).collect(),
        }
    }

    pub fn to_spectrum(&self) -> Result<AveragedSpectrum> {
        if self.format != SPECTRUM_FORMAT {
            return Err(CliError::input(format!(
                "expected format {SPECTRUM_FORMAT}, found {}",
                self.format
            )));
        }
        let vars = build_vars(&self.vars, &self.sqrt_rules)?;
        Ok(AveragedSpectrum::new(&vars, parse_polys(&self.f, &vars)?)?)
    }
}

/// Parameter values by name; numbers or strings such as `"-3/4"`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LambdaFile(pub BTreeMap<String, serde_json::Value>);

impl LambdaFile {
    pub fn values(&self) -> Result<BTreeMap<String, Rat>> {
        self.0
            .iter()
            .map(|(k, v)| {
                let r = match v {
                    serde_json::Value::String(s) => parse_rat(s)?,
                    serde_json::Value::Number(n) => parse_rat(&n.to_string())?,
                    other => {
                        return Err(CliError::input(format!(
                            "value of `{k}` must be a number, found {other}"
                        )))
                    }
                };
                Ok((k.clone(), r))
            })
            .collect()
    }

    /// Values in the order of `names`; every name must be present.
    pub fn ordered(&self, names: &[String]) -> Result<Vec<Rat>> {
        let values = self.values()?;
        names
            .iter()
            .map(|n| {
                values
                    .get(n)
                    .cloned()
                    .ok_or_else(|| CliError::input(format!("no value for parameter `{n}`")))
            })
            .collect()
    }
}

fn default_mb_vars() -> Vec<String> {
    ["x1", "x2", "x3"].map(String::from).to_vec()
}

fn default_euler_vars() -> Vec<String> {
    ["x1", "x2", "D"].map(String::from).to_vec()
}

fn zero_text() -> String {
    "0".into()
}

/// A Maxwell-Bloch perturbation `(A, B, C)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MBPerturbationFile {
    #[serde(default = "default_mb_vars")]
    pub vars: Vec<String>,
    #[serde(rename = "A", default = "zero_text")]
    pub a: String,
    #[serde(rename = "B", default = "zero_text")]
    pub b: String,
    #[serde(rename = "C", default = "zero_text")]
    pub c: String,
}

impl MBPerturbationFile {
    pub fn polys(&self) -> Result<[MPoly; 3]> {
        let vars = VarSet::new(&self.vars)?;
        let p = |t: &str| MPoly::parse(t, &vars).map_err(CliError::from);
        Ok([p(&self.a)?, p(&self.b)?, p(&self.c)?])
    }
}

/// An Euler-top perturbation `(P, Q, R)` in `x1, x2, D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerPerturbationFile {
    #[serde(default = "default_euler_vars")]
    pub vars: Vec<String>,
    #[serde(rename = "P", default = "zero_text")]
    pub p: String,
    #[serde(rename = "Q", default = "zero_text")]
    pub q: String,
    #[serde(rename = "R", default = "zero_text")]
    pub r: String,
}

impl EulerPerturbationFile {
    pub fn polys(&self) -> Result<[MPoly; 3]> {
        let vars = VarSet::new(&self.vars)?;
        let p = |t: &str| MPoly::parse(t, &vars).map_err(CliError::from);
        Ok([p(&self.p)?, p(&self.q)?, p(&self.r)?])
    }
}

/// Generators of an ideal for the `groebner` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorsFile {
    pub vars: Vec<String>,
    pub gens: Vec<String>,
}

impl GeneratorsFile {
    pub fn parse(&self) -> Result<(VarSet, Vec<MPoly>)> {
        let vars = VarSet::new(&self.vars)?;
        Ok((vars.clone(), parse_polys(&self.gens, &vars)?))
    }
}

/// Reference polynomials keyed by name, e.g. the printed hatted coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GoldenFile(pub BTreeMap<String, String>);
