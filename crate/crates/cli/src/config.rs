//! Experiment descriptions, read from TOML or JSON.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::ValueEnum;
use formsums::arith::{parse_rational, FunctionSpec};
use formsums::{BinaryForm, MultiplicativeFunction, Rational, UniPoly};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Disc,
    Shape,
    Rho,
    Rhostar,
    DanCheck,
    Fpd,
    Reduce,
    VerifyCert,
    Sum,
    NairCheck,
    EulerProduct,
    BoundCheck,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Disc => "disc",
            CommandKind::Shape => "shape",
            CommandKind::Rho => "rho",
            CommandKind::Rhostar => "rhostar",
            CommandKind::DanCheck => "dan-check",
            CommandKind::Fpd => "fpd",
            CommandKind::Reduce => "reduce",
            CommandKind::VerifyCert => "verify-cert",
            CommandKind::Sum => "sum",
            CommandKind::NairCheck => "nair-check",
            CommandKind::EulerProduct => "euler-product",
            CommandKind::BoundCheck => "bound-check",
        }
    }

    /// Input fields the command reads; anything else set in a config is
    /// rejected.
    fn fields(self) -> &'static [&'static str] {
        match self {
            CommandKind::Disc => &["form", "poly"],
            CommandKind::Shape => &["form"],
            CommandKind::Rho => &["poly", "moduli"],
            CommandKind::Rhostar => &["form", "moduli"],
            CommandKind::DanCheck => &["poly", "max_p", "max_modulus"],
            CommandKind::Fpd => &["poly"],
            CommandKind::Reduce => &["poly", "prime"],
            CommandKind::VerifyCert => &["certificate"],
            CommandKind::Sum => &["form", "poly", "h", "grid", "symmetric"],
            CommandKind::NairCheck => &["poly", "h", "grid", "threshold", "digits"],
            CommandKind::EulerProduct => &["form", "h", "grid"],
            CommandKind::BoundCheck => &["form", "h", "grid", "threshold", "mode", "digits"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// `S(X, X; h, F) / (X^2 E)`.
    Euler,
    /// `S(X, X; tau, F) / (X^2 ln X)`.
    Log,
    /// Both sides of the inequality obtained by fixing `n2`.
    FixN2,
}

/// A built-in name (`"tau"`) or a full function description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HSpec {
    Builtin(String),
    Custom(FunctionSpec),
}

impl HSpec {
    pub fn build(&self) -> formsums::Result<MultiplicativeFunction> {
        match self {
            HSpec::Builtin(id) => MultiplicativeFunction::from_builtin(id),
            HSpec::Custom(spec) => spec.build(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moduli: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<HSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<BoundMode>,
    /// Spread threshold as an exact rational, e.g. `"2"` or `"3/2"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn new(command: CommandKind) -> Self {
        ExperimentConfig {
            command,
            form: None,
            poly: None,
            moduli: Vec::new(),
            max_p: None,
            max_modulus: None,
            prime: None,
            certificate: None,
            h: None,
            grid: Vec::new(),
            symmetric: None,
            mode: None,
            threshold: None,
            digits: None,
            jobs: None,
            out: None,
            format: None,
        }
    }

    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| anyhow!("invalid config: {}", e.message()))
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow!("invalid config: {e}"))
    }

    /// JSON when the file name ends in `.json`, TOML otherwise.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises to TOML")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises to JSON")
    }

    /// SHA-256 of the canonical JSON of the experiment, ignoring where and
    /// how it runs (`jobs`, `out`, `format`).
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.jobs = None;
        c.out = None;
        c.format = None;
        hex::encode(Sha256::digest(serde_json::to_vec(&c).expect("serialises")))
    }

    fn set_fields(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut mark = |name, set: bool| {
            if set {
                v.push(name);
            }
        };
        mark("form", self.form.is_some());
        mark("poly", self.poly.is_some());
        mark("moduli", !self.moduli.is_empty());
        mark("max_p", self.max_p.is_some());
        mark("max_modulus", self.max_modulus.is_some());
        mark("prime", self.prime.is_some());
        mark("certificate", self.certificate.is_some());
        mark("h", self.h.is_some());
        mark("grid", !self.grid.is_empty());
        mark("symmetric", self.symmetric.is_some());
        mark("mode", self.mode.is_some());
        mark("threshold", self.threshold.is_some());
        mark("digits", self.digits.is_some());
        v
    }

    /// Structural checks; errors name the offending field.
    pub fn validate(&self) -> anyhow::Result<()> {
        let allowed = self.command.fields();
        for f in self.set_fields() {
            if !allowed.contains(&f) {
                bail!("field `{f}` is not used by command `{}`", self.command.name());
            }
        }
        if self.jobs == Some(0) {
            bail!("field `jobs` must be at least 1");
        }
        let need = |name: &str, ok: bool| -> anyhow::Result<()> {
            if ok {
                Ok(())
            } else {
                Err(anyhow!("field `{name}` is required by command `{}`", self.command.name()))
            }
        };
        use CommandKind::*;
        match self.command {
            Disc | Sum => {
                if self.form.is_some() == self.poly.is_some() {
                    bail!("exactly one of fields `form` and `poly` must be set for `{}`", self.command.name());
                }
            }
            Shape | Rhostar | EulerProduct | BoundCheck => need("form", self.form.is_some())?,
            Rho | DanCheck | Fpd | Reduce | NairCheck => need("poly", self.poly.is_some())?,
            VerifyCert => need("certificate", self.certificate.is_some())?,
        }
        match self.command {
            Rho | Rhostar => need("moduli", !self.moduli.is_empty())?,
            DanCheck => {
                need("max_p", self.max_p.is_some())?;
                need("max_modulus", self.max_modulus.is_some())?;
            }
            Sum | NairCheck | EulerProduct | BoundCheck => {
                need("grid", !self.grid.is_empty())?;
                if self.grid.contains(&0) {
                    bail!("field `grid` must contain positive values");
                }
                if self.grid.windows(2).any(|w| w[0] >= w[1]) {
                    bail!("field `grid` must be strictly increasing");
                }
                if self.command != BoundCheck || self.mode != Some(BoundMode::Log) {
                    need("h", self.h.is_some())?;
                }
            }
            _ => {}
        }
        match self.command {
            NairCheck => need("threshold", self.threshold.is_some())?,
            BoundCheck => {
                need("mode", self.mode.is_some())?;
                match self.mode {
                    Some(BoundMode::Euler) => need("threshold", self.threshold.is_some())?,
                    Some(BoundMode::Log) => {
                        need("threshold", self.threshold.is_some())?;
                        need("digits", self.digits.is_some())?;
                        if self.h.is_some() {
                            bail!("field `h` is fixed to tau in mode `log`; remove it");
                        }
                    }
                    Some(BoundMode::FixN2) | None => {}
                }
            }
            _ => {}
        }
        if let Some(t) = &self.threshold {
            let v = parse_rational(t).map_err(|e| anyhow!("field `threshold`: {e}"))?;
            if v <= Rational::from_integer(1.into()) {
                bail!("field `threshold` must exceed 1 (it bounds max/min of positive ratios)");
            }
        }
        if let Some(f) = &self.form {
            f.parse::<BinaryForm>().map_err(|e| anyhow!("field `form`: {e}"))?;
        }
        if let Some(p) = &self.poly {
            let f = p.parse::<UniPoly>().map_err(|e| anyhow!("field `poly`: {e}"))?;
            if f.is_zero() {
                bail!("field `poly`: zero polynomial");
            }
        }
        if let Some(h) = &self.h {
            h.build().map_err(|e| anyhow!("field `h`: {e}"))?;
        }
        Ok(())
    }

    pub fn form(&self) -> anyhow::Result<BinaryForm> {
        let s = self.form.as_deref().ok_or_else(|| anyhow!("field `form` is missing"))?;
        s.parse().map_err(|e| anyhow!("field `form`: {e}"))
    }

    pub fn poly(&self) -> anyhow::Result<UniPoly> {
        let s = self.poly.as_deref().ok_or_else(|| anyhow!("field `poly` is missing"))?;
        s.parse().map_err(|e| anyhow!("field `poly`: {e}"))
    }

    pub fn h(&self) -> anyhow::Result<MultiplicativeFunction> {
        let h = self.h.as_ref().ok_or_else(|| anyhow!("field `h` is missing"))?;
        h.build().map_err(|e| anyhow!("field `h`: {e}"))
    }

    pub fn threshold(&self) -> anyhow::Result<Rational> {
        let t = self.threshold.as_deref().ok_or_else(|| anyhow!("field `threshold` is missing"))?;
        parse_rational(t).map_err(|e| anyhow!("field `threshold`: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full() -> ExperimentConfig {
        let mut c = ExperimentConfig::new(CommandKind::BoundCheck);
        c.form = Some("3; 1 0 0 2".into());
        c.h = Some(HSpec::Builtin("tau".into()));
        c.grid = vec![10, 20];
        c.mode = Some(BoundMode::Euler);
        c.threshold = Some("2".into());
        c.jobs = Some(4);
        c
    }

    #[test]
    fn toml_and_json_round_trip() {
        let c = full();
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);
        let mut custom = ExperimentConfig::new(CommandKind::Sum);
        custom.poly = Some("1 0 1".into());
        custom.grid = vec![5];
        custom.h = Some(HSpec::Custom(FunctionSpec {
            name: "h".into(),
            builtin: None,
            rule: Some("l + 1".into()),
            a: Some("2".into()),
            b: None,
            epsilon: None,
        }));
        assert_eq!(ExperimentConfig::from_toml(&custom.to_toml()).unwrap(), custom);
        assert_eq!(ExperimentConfig::from_json(&custom.to_json()).unwrap(), custom);
    }

    #[test]
    fn digest_ignores_run_options() {
        let a = full();
        let mut b = full();
        b.jobs = Some(1);
        b.format = Some(Format::Json);
        assert_eq!(a.digest(), b.digest());
        b.grid.push(40);
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn validation_names_fields() {
        let mut c = full();
        c.grid.clear();
        assert!(c.validate().unwrap_err().to_string().contains("`grid`"));
        let mut c = full();
        c.moduli = vec![3];
        assert!(c.validate().unwrap_err().to_string().contains("`moduli`"));
        let mut c = full();
        c.threshold = Some("x".into());
        assert!(c.validate().unwrap_err().to_string().contains("`threshold`"));
        let err = ExperimentConfig::from_toml("command = \"rho\"\npoly = \"1 0 1\"\nmodulus = [5]\n").unwrap_err();
        assert!(err.to_string().contains("modulus"), "{err}");
    }
}
