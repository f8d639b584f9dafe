//! Experiment configuration: flat `key = value` files merged with CLI overrides.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{Domain1D, ProblemParams};
use crate::quadrature::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Constants,
    Spectrum,
    Lower,
    Upper,
    SweepMu,
    Lemmas,
    Weyl,
}

impl Suite {
    /// Whether a failure of this suite makes the run fail.
    pub fn is_gating(self) -> bool {
        !matches!(self, Suite::Upper | Suite::Weyl)
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::Spectrum => "spectrum",
            Suite::Lower => "lower",
            Suite::Upper => "upper",
            Suite::SweepMu => "sweep-mu",
            Suite::Lemmas => "lemmas",
            Suite::Weyl => "weyl",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A shift value, either absolute or a multiple of `λ̂_{s2,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum MuEntry {
    Absolute(f64),
    /// `factor · λ̂_{s2,1}`; written `-0.9lhat` in files and flags.
    RelativeToLhat(f64),
}

impl MuEntry {
    pub fn resolve(self, lambda_hat: f64) -> f64 {
        match self {
            MuEntry::Absolute(v) => v,
            MuEntry::RelativeToLhat(f) => f * lambda_hat,
        }
    }
}

impl FromStr for MuEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config(format!("cannot read shift value '{s}'")))
        };
        if let Some(head) = t.strip_suffix("lhat") {
            let head = head.trim().trim_end_matches('*');
            let factor = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                other => parse(other)?,
            };
            return Ok(MuEntry::RelativeToLhat(factor));
        }
        Ok(MuEntry::Absolute(parse(t)?))
    }
}

pub fn parse_mu_list(s: &str) -> Result<Vec<MuEntry>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

/// Values from a config file or the command line, before defaults apply.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub dim: Option<u32>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub mu: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub n: Option<usize>,
    pub k_max: Option<usize>,
    pub mu_list: Option<Vec<MuEntry>>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub single: Option<f64>,
    pub out: Option<PathBuf>,
    pub gauss_order: Option<usize>,
    pub per_entry_rel_tol: Option<f64>,
}

const KEYS: &[&str] = &[
    "N", "s1", "s2", "mu", "a", "b", "n", "k_max", "mu_list", "seed", "trials", "single", "out", "gauss_order",
    "per_entry_rel_tol",
];

fn value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T> {
    raw.parse::<T>()
        .map_err(|_| Error::Config(format!("line {line}: cannot read value '{raw}' for key '{key}'")))
}

impl Overrides {
    /// Parses a flat `key = value` file. `#` starts a comment; unknown or repeated keys are errors.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut seen = BTreeMap::new();
        let mut o = Overrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(Error::Config(format!("line {line}: expected 'key = value', got '{body}'")));
            };
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("line {line}: unknown key '{k}'")));
            }
            if seen.insert(k.to_string(), line).is_some() {
                return Err(Error::Config(format!("line {line}: key '{k}' given twice")));
            }
            match k {
                "N" => o.dim = Some(value(k, v, line)?),
                "s1" => o.s1 = Some(value(k, v, line)?),
                "s2" => o.s2 = Some(value(k, v, line)?),
                "mu" => o.mu = Some(value(k, v, line)?),
                "a" => o.a = Some(value(k, v, line)?),
                "b" => o.b = Some(value(k, v, line)?),
                "n" => o.n = Some(value(k, v, line)?),
                "k_max" => o.k_max = Some(value(k, v, line)?),
                "mu_list" => o.mu_list = Some(parse_mu_list(v)?),
                "seed" => o.seed = Some(value(k, v, line)?),
                "trials" => o.trials = Some(value(k, v, line)?),
                "single" => o.single = Some(value(k, v, line)?),
                "out" => o.out = Some(PathBuf::from(v)),
                "gauss_order" => o.gauss_order = Some(value(k, v, line)?),
                "per_entry_rel_tol" => o.per_entry_rel_tol = Some(value(k, v, line)?),
                _ => unreachable!("key list and match arms agree"),
            }
        }
        Ok(o)
    }

    /// Field-wise: values set in `top` win.
    pub fn layered_over(self, base: Overrides) -> Overrides {
        Overrides {
            dim: self.dim.or(base.dim),
            s1: self.s1.or(base.s1),
            s2: self.s2.or(base.s2),
            mu: self.mu.or(base.mu),
            a: self.a.or(base.a),
            b: self.b.or(base.b),
            n: self.n.or(base.n),
            k_max: self.k_max.or(base.k_max),
            mu_list: self.mu_list.or(base.mu_list),
            seed: self.seed.or(base.seed),
            trials: self.trials.or(base.trials),
            single: self.single.or(base.single),
            out: self.out.or(base.out),
            gauss_order: self.gauss_order.or(base.gauss_order),
            per_entry_rel_tol: self.per_entry_rel_tol.or(base.per_entry_rel_tol),
        }
    }
}

/// Fully resolved configuration of one suite run.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub params: ProblemParams,
    pub domain: Domain1D,
    pub k_max: usize,
    pub mu_list: Vec<MuEntry>,
    pub seed: u64,
    pub trials: usize,
    pub single: Option<f64>,
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
    pub quad: QuadratureSpec,
}

pub const DEFAULT_SEED: u64 = 20_240_607;

impl ExperimentConfig {
    /// Applies per-suite defaults and validates.
    pub fn resolve(suite: Suite, o: Overrides) -> Result<Self> {
        let diagnostic = matches!(suite, Suite::Upper | Suite::Weyl);
        let n = o.n.unwrap_or(if diagnostic { 1024 } else { 512 });
        let k_max = o.k_max.unwrap_or(if diagnostic { 40 } else { 20 });
        let mu = o.mu.unwrap_or(0.0);
        let params = ProblemParams::new(o.dim.unwrap_or(1), o.s1.unwrap_or(0.4), o.s2.unwrap_or(0.2), mu)?;
        let domain = Domain1D::new(o.a.unwrap_or(-1.0), o.b.unwrap_or(1.0), n)?;
        if k_max == 0 || k_max > n {
            return Err(Error::Config(format!("k_max must lie in [1, n] = [1, {n}], got {k_max}")));
        }
        let mu_list = match (o.mu_list, suite) {
            (Some(list), _) => list,
            (None, Suite::SweepMu) => vec![
                MuEntry::RelativeToLhat(-0.9),
                MuEntry::RelativeToLhat(-0.5),
                MuEntry::Absolute(0.0),
                MuEntry::Absolute(1.0),
                MuEntry::Absolute(10.0),
                MuEntry::Absolute(100.0),
                MuEntry::Absolute(1000.0),
            ],
            (None, Suite::Lower) if o.mu.is_none() => vec![MuEntry::Absolute(0.0), MuEntry::Absolute(1.0)],
            (None, _) => vec![MuEntry::Absolute(mu)],
        };
        let single = match (o.single, suite) {
            (Some(s), _) => Some(s),
            (None, Suite::Weyl) => Some(0.25),
            (None, _) => None,
        };
        if let Some(s) = single {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::Config(format!("single-operator order must lie in (0, 1), got {s}")));
            }
        }
        let mut quad = QuadratureSpec::default();
        if let Some(g) = o.gauss_order {
            quad.gauss_order = g;
        }
        if let Some(t) = o.per_entry_rel_tol {
            quad.per_entry_rel_tol = t;
        }
        quad.validate()?;
        Ok(Self {
            suite,
            params,
            domain,
            k_max,
            mu_list,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            trials: o.trials.unwrap_or(100),
            single,
            output_dir: o.out,
            quad,
        })
    }
}
