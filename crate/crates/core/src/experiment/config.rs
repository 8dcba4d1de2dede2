//! Experiment configuration: a flat TOML file whose keys are all optional,
//! resolved against per-experiment defaults and validated before dispatch.
//!
//! Recognised keys: `a`, `s`, `r`, `gamma`, `sequence_file`, `n_terms`,
//! `n_points`, `period`, `max_freq`, `decay`, `t`, `lambdas`,
//! `b_exponents`, `epsilon`, `x_samples`, `functions`, `seed`,
//! `min_sup`, `growth_factor`, `slope_tolerance`, `spread_limit`.
//! Anything else is rejected.

use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::counterexample::{build_schedule, default_epsilon, epsilon_bound, DKParamsA1};
use crate::error::{LabError, Result};
use crate::maximal::packet::MIN_SCALE_SPAN;
use crate::sequences::{
    critical_exponent, generate_sequence, read_sequence, Generator, TimeSequence,
};
use crate::spectral::build_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Propagate,
    Maximal,
    Scaling,
    Counterexample,
    Classify,
    Decompose,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Propagate => "propagate",
            ExperimentKind::Maximal => "maximal",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Counterexample => "counterexample",
            ExperimentKind::Classify => "classify",
            ExperimentKind::Decompose => "decompose",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Raw file contents; every key optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub a: Option<f64>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub gamma: Option<f64>,
    pub sequence_file: Option<PathBuf>,
    pub n_terms: Option<usize>,
    pub n_points: Option<usize>,
    pub period: Option<f64>,
    pub max_freq: Option<f64>,
    pub decay: Option<f64>,
    pub t: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub b_exponents: Option<Vec<i32>>,
    pub epsilon: Option<f64>,
    pub x_samples: Option<usize>,
    pub functions: Option<usize>,
    pub seed: Option<u64>,
    pub min_sup: Option<f64>,
    pub growth_factor: Option<f64>,
    pub slope_tolerance: Option<f64>,
    pub spread_limit: Option<f64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Where the time sequence comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceSource {
    Power { gamma: f64, n_terms: usize },
    File { path: PathBuf },
}

impl SequenceSource {
    pub fn load(&self) -> Result<TimeSequence> {
        match self {
            SequenceSource::Power { gamma, n_terms } => {
                generate_sequence(Generator::Power { gamma: *gamma }, *n_terms)
            }
            SequenceSource::File { path } => {
                let file = fs::File::open(path)
                    .map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
                read_sequence(BufReader::new(file))
            }
        }
    }
}

/// A fully resolved, validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub a: f64,
    pub s: f64,
    pub r: f64,
    pub sequence: SequenceSource,
    pub n_points: usize,
    pub period: f64,
    pub max_freq: f64,
    pub decay: f64,
    pub t: f64,
    pub lambdas: Vec<f64>,
    pub b_exponents: Vec<i32>,
    pub epsilon: f64,
    pub x_samples: usize,
    pub functions: usize,
    pub min_sup: f64,
    pub growth_factor: f64,
    pub slope_tolerance: f64,
    pub spread_limit: f64,
}

fn bad(field: &str, reason: impl fmt::Display) -> LabError {
    LabError::Config(format!("`{field}`: {reason}"))
}

fn positive(field: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(field, format!("{v} must be positive and finite")))
    }
}

impl ExperimentConfig {
    /// Fills defaults for `kind`, applies `seed_override` and checks every
    /// precondition the pipeline relies on.
    pub fn resolve(kind: ExperimentKind, file: ConfigFile, seed_override: Option<u64>) -> Result<Self> {
        use ExperimentKind::*;
        let a = positive("a", file.a.unwrap_or(2.0))?;
        let wave = (a - 1.0).abs() < 1e-12;

        let default_gamma = match kind {
            Counterexample if !wave => 2.0,
            _ => 1.0,
        };
        let default_terms = match kind {
            Classify => 100_000,
            _ => 1000,
        };
        let n_terms = file.n_terms.unwrap_or(default_terms);
        let sequence = match (&file.sequence_file, file.gamma) {
            (Some(_), Some(_)) => {
                return Err(bad("sequence_file", "give either `gamma` or `sequence_file`, not both"))
            }
            (Some(p), None) => {
                if !p.is_file() {
                    return Err(bad("sequence_file", format!("{} does not exist", p.display())));
                }
                SequenceSource::File { path: p.clone() }
            }
            (None, g) => {
                let gamma = positive("gamma", g.unwrap_or(default_gamma))?;
                if n_terms < 2 {
                    return Err(bad("n_terms", "must be at least 2"));
                }
                SequenceSource::Power { gamma, n_terms }
            }
        };
        let seq = sequence.load().map_err(|e| bad("sequence", e))?;

        let r = match (file.r, &sequence) {
            (Some(r), _) => positive("r", r)?,
            (None, SequenceSource::Power { gamma, .. }) => 1.0 / gamma,
            (None, SequenceSource::File { .. }) => {
                let est = critical_exponent(&seq).map_err(|e| {
                    bad("r", format!("not given and cannot be estimated: {e}"))
                })?;
                positive("r", est.estimate)?
            }
        };

        let default_s = match kind {
            Counterexample => 0.2,
            _ => crate::sequences::target_exponent(a, r),
        };
        let s = file.s.unwrap_or(default_s);

        let (dn, dp, dm) = match kind {
            Decompose => (1024, 16.0 * std::f64::consts::PI, 48.0),
            Maximal => (4096, 64.0, 32.0),
            _ => (4096, 256.0, 40.0),
        };
        let n_points = file.n_points.unwrap_or(dn);
        let period = file.period.unwrap_or(dp);
        let grid = build_grid(n_points, period).map_err(|e| bad("n_points/period", e))?;
        let max_freq = positive("max_freq", file.max_freq.unwrap_or(dm))?;
        if max_freq > grid.max_frequency() {
            return Err(bad(
                "max_freq",
                format!("{max_freq} exceeds the grid's largest frequency {}", grid.max_frequency()),
            ));
        }
        let decay = file.decay.unwrap_or(0.75);
        if !(decay.is_finite() && decay >= 0.0) {
            return Err(bad("decay", "must be nonnegative"));
        }
        let t = file.t.unwrap_or(0.5);
        if !t.is_finite() {
            return Err(bad("t", "must be finite"));
        }

        let default_lambdas: Vec<f64> = match kind {
            Counterexample => vec![1e2, 1e3, 1e4],
            _ => (6..=12).map(|k| f64::from(k).exp2()).collect(),
        };
        let lambdas = file.lambdas.unwrap_or(default_lambdas);
        let b_exponents = file.b_exponents.unwrap_or_else(|| vec![18, 30, 42]);
        let epsilon = file.epsilon.unwrap_or(default_epsilon(a));
        let x_samples = file.x_samples.unwrap_or(64);
        let functions = file.functions.unwrap_or(10);

        let cfg = ExperimentConfig {
            kind,
            seed: seed_override.or(file.seed).unwrap_or(0),
            a,
            s,
            r,
            sequence,
            n_points,
            period,
            max_freq,
            decay,
            t,
            lambdas,
            b_exponents,
            epsilon,
            x_samples,
            functions,
            min_sup: file.min_sup.unwrap_or(if wave { 0.5 } else { 0.48 }),
            growth_factor: positive("growth_factor", file.growth_factor.unwrap_or(2.0))?,
            slope_tolerance: positive("slope_tolerance", file.slope_tolerance.unwrap_or(0.08))?,
            spread_limit: positive("spread_limit", file.spread_limit.unwrap_or(10.0))?,
        };
        cfg.check(&seq)?;
        Ok(cfg)
    }

    fn check(&self, seq: &TimeSequence) -> Result<()> {
        use ExperimentKind::*;
        let wave = (self.a - 1.0).abs() < 1e-12;
        match self.kind {
            Propagate | Classify => {}
            Maximal => {
                if !(self.s >= 0.0) {
                    return Err(bad("s", "must be nonnegative"));
                }
            }
            Scaling => {
                if self.lambdas.len() < 4 {
                    return Err(bad("lambdas", "need at least 4 scales"));
                }
                if self.lambdas.iter().any(|l| !(*l > 1.0 && l.is_finite())) {
                    return Err(bad("lambdas", "every scale must exceed 1"));
                }
                let lo = self.lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = self.lambdas.iter().cloned().fold(0.0, f64::max);
                if hi / lo < MIN_SCALE_SPAN * (1.0 - 1e-12) {
                    return Err(bad("lambdas", format!("must span a factor of {MIN_SCALE_SPAN}")));
                }
            }
            Counterexample if wave => {
                if self.lambdas.is_empty() {
                    return Err(bad("lambdas", "need at least one scale"));
                }
                for &l in &self.lambdas {
                    DKParamsA1::for_lambda(self.s, l).map_err(|e| bad("lambdas/s", e))?;
                }
                if self.x_samples < 2 {
                    return Err(bad("x_samples", "must be at least 2"));
                }
            }
            Counterexample => {
                if !(self.epsilon > 0.0 && self.epsilon < epsilon_bound(self.a)) {
                    return Err(bad(
                        "epsilon",
                        format!("must lie in (0, {})", epsilon_bound(self.a)),
                    ));
                }
                if self.b_exponents.is_empty() || self.b_exponents.iter().any(|e| *e < 1) {
                    return Err(bad("b_exponents", "need positive exponents"));
                }
                if self.x_samples == 0 {
                    return Err(bad("x_samples", "must be positive"));
                }
                build_schedule(seq, self.a, self.s, self.epsilon, &self.b_exponents)
                    .map_err(|e| bad("b_exponents/s/epsilon", e))?;
            }
            Decompose => {
                if self.functions == 0 {
                    return Err(bad("functions", "must be positive"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(ConfigFile::parse("a = 2.0\nfoo = 1\n"), Err(LabError::Config(_))));
        assert!(ConfigFile::parse("a = 2.0\ngamma = 1.5\n").is_ok());
    }

    #[test]
    fn defaults_resolve_for_every_kind() {
        use ExperimentKind::*;
        for kind in [Propagate, Maximal, Scaling, Counterexample, Classify, Decompose] {
            let cfg = ExperimentConfig::resolve(kind, ConfigFile::default(), Some(3)).unwrap();
            assert_eq!(cfg.seed, 3);
        }
    }

    #[test]
    fn field_errors_name_the_field() {
        let file = ConfigFile {
            epsilon: Some(0.03),
            ..ConfigFile::default()
        };
        let err = ExperimentConfig::resolve(ExperimentKind::Counterexample, file, None).unwrap_err();
        assert!(err.to_string().contains("epsilon"), "{err}");
        let file = ConfigFile {
            gamma: Some(1.0),
            sequence_file: Some("x.txt".into()),
            ..ConfigFile::default()
        };
        assert!(ExperimentConfig::resolve(ExperimentKind::Classify, file, None).is_err());
    }
}
