use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use ildl::PivotKind;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Pivot {
    #[default]
    Rook,
    Bk,
    None,
}

impl From<Pivot> for PivotKind {
    fn from(p: Pivot) -> Self {
        match p {
            Pivot::Rook => PivotKind::Rook,
            Pivot::Bk => PivotKind::BunchKaufman,
            Pivot::None => PivotKind::None,
        }
    }
}

/// `auto` is Bunch for symmetric input and no scaling for skew input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Equil {
    #[default]
    Auto,
    Bunch,
    Ruiz,
    None,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Reorder {
    #[default]
    Amd,
    Rcm,
    None,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    #[default]
    Sqmr,
    Minres,
    None,
}

/// Right-hand side: `ones-solution` (b = A 1) or a file of `n` numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Rhs {
    #[default]
    OnesSolution,
    File(PathBuf),
}

impl FromStr for Rhs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "" => Err("empty right-hand side".into()),
            "ones-solution" => Ok(Rhs::OnesSolution),
            path => Ok(Rhs::File(PathBuf::from(path))),
        }
    }
}

impl TryFrom<String> for Rhs {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Rhs> for String {
    fn from(r: Rhs) -> String {
        match r {
            Rhs::OnesSolution => "ones-solution".into(),
            Rhs::File(p) => p.display().to_string(),
        }
    }
}

/// A built-in model problem, written `name:key=value,...`, e.g.
/// `helmholtz:m=80,c=0.3`, `convdiff:m=20,beta=20,gamma=2,delta=1` or
/// `random:n=300,density=1,skew=false`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum GenSpec {
    Helmholtz { m: usize, c: f64 },
    Convdiff { m: usize, beta: f64, gamma: f64, delta: f64 },
    Random { n: usize, density: f64, skew: bool },
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got '{part}'"))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str, default: Option<&str>| -> Result<String, String> {
            kv.remove(key)
                .or_else(|| default.map(str::to_string))
                .ok_or_else(|| format!("generator '{name}' needs '{key}='"))
        };
        fn num<T: FromStr>(key: &str, v: String) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value '{v}' for '{key}'"))
        }
        let spec = match name {
            "helmholtz" => GenSpec::Helmholtz {
                m: num("m", take("m", None)?)?,
                c: num("c", take("c", Some("0.3"))?)?,
            },
            "convdiff" => GenSpec::Convdiff {
                m: num("m", take("m", None)?)?,
                beta: num("beta", take("beta", Some("0"))?)?,
                gamma: num("gamma", take("gamma", Some("0"))?)?,
                delta: num("delta", take("delta", Some("0"))?)?,
            },
            "random" => GenSpec::Random {
                n: num("n", take("n", None)?)?,
                density: num("density", take("density", Some("1"))?)?,
                skew: num("skew", take("skew", Some("false"))?)?,
            },
            other => return Err(format!("unknown generator '{other}' (helmholtz, convdiff, random)")),
        };
        if let Some(k) = kv.keys().next() {
            return Err(format!("unknown key '{k}' for generator '{name}'"));
        }
        Ok(spec)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::Helmholtz { m, c } => write!(f, "helmholtz:m={m},c={c}"),
            GenSpec::Convdiff { m, beta, gamma, delta } => {
                write!(f, "convdiff:m={m},beta={beta},gamma={gamma},delta={delta}")
            }
            GenSpec::Random { n, density, skew } => write!(f, "random:n={n},density={density},skew={skew}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    File(PathBuf),
    Gen(GenSpec),
}

/// Everything one pipeline run depends on. Field names double as the
/// kebab-case command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    pub source: Option<Source>,
    pub pivot: Pivot,
    pub equil: Equil,
    pub reorder: Reorder,
    pub drop_tol: f64,
    #[serde(serialize_with = "ser_fill", deserialize_with = "de_fill")]
    pub fill_factor: f64,
    pub solver: Solver,
    pub rtol: f64,
    pub max_iter: usize,
    pub rhs: Rhs,
    pub output: PathBuf,
    /// Also write `L.mtx`, `D.mtx`, `P.vec` and `S.vec`.
    pub export_factors: bool,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let factor = ildl::FactorParams::default();
        let solver = ildl::SolverParams::default();
        RunConfig {
            source: None,
            pivot: Pivot::Rook,
            equil: Equil::Auto,
            reorder: Reorder::Amd,
            drop_tol: factor.drop_tol,
            fill_factor: factor.fill_factor,
            solver: Solver::Sqmr,
            rtol: solver.rtol,
            max_iter: solver.max_iter,
            rhs: Rhs::OnesSolution,
            output: PathBuf::from("."),
            export_factors: false,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        match &self.source {
            None => return usage("no input: give --input FILE or --gen SPEC".into()),
            Some(Source::File(p)) if p.as_os_str().is_empty() => return usage("empty input path".into()),
            _ => {}
        }
        if !(self.drop_tol >= 0.0 && self.drop_tol.is_finite()) {
            return usage(format!("--drop-tol must be finite and >= 0, got {}", self.drop_tol));
        }
        if self.fill_factor.is_nan() || self.fill_factor <= 0.0 {
            return usage(format!("--fill-factor must be > 0 (or inf), got {}", self.fill_factor));
        }
        if !(self.rtol > 0.0 && self.rtol.is_finite()) {
            return usage(format!("--rtol must be finite and > 0, got {}", self.rtol));
        }
        if self.max_iter == 0 {
            return usage("--max-iter must be at least 1".into());
        }
        Ok(())
    }

    pub fn factor_params(&self) -> ildl::FactorParams {
        ildl::FactorParams {
            drop_tol: self.drop_tol,
            fill_factor: self.fill_factor,
            pivot: self.pivot.into(),
            ..ildl::FactorParams::default()
        }
    }
}

// JSON has no infinity; an uncapped fill factor is written as "inf".
fn ser_fill<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn de_fill<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Fill {
        Num(f64),
        Text(String),
    }
    match Fill::deserialize(d)? {
        Fill::Num(v) => Ok(v),
        Fill::Text(t) => t.parse().map_err(serde::de::Error::custom),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_spec_round_trip() {
        for s in ["helmholtz:m=80,c=0.3", "convdiff:m=20,beta=20,gamma=2,delta=1", "random:n=30,density=0.5,skew=true"] {
            let g: GenSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert_eq!("helmholtz:m=4".parse::<GenSpec>().unwrap(), GenSpec::Helmholtz { m: 4, c: 0.3 });
        assert!("helmholtz".parse::<GenSpec>().is_err());
        assert!("helmholtz:m=4,q=1".parse::<GenSpec>().is_err());
        assert!("poisson:m=4".parse::<GenSpec>().is_err());
    }

    #[test]
    fn infinite_fill_factor_survives_json() {
        let cfg = RunConfig {
            fill_factor: f64::INFINITY,
            ..RunConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"fill-factor\":\"inf\""), "{text}");
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_config_takes_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"source": {"gen": {"problem": "helmholtz", "m": 4, "c": 0.3}}, "drop-tol": 0.01}"#)
                .unwrap();
        assert_eq!(cfg.drop_tol, 0.01);
        assert_eq!(cfg.fill_factor, 2.0);
        assert_eq!(cfg.rhs, Rhs::OnesSolution);
        assert!(serde_json::from_str::<RunConfig>(r#"{"droptol": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_err());
        let ok = RunConfig {
            source: Some(Source::Gen(GenSpec::Helmholtz { m: 3, c: 0.0 })),
            ..RunConfig::default()
        };
        ok.validate().unwrap();
        for bad in [
            RunConfig { drop_tol: -1.0, ..ok.clone() },
            RunConfig { fill_factor: 0.0, ..ok.clone() },
            RunConfig { rtol: 0.0, ..ok.clone() },
            RunConfig { max_iter: 0, ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(CliError::Usage(_))));
        }
    }
}
