//! Dispatch from a resolved configuration to the lab pipelines.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::counterexample::{
    a1_counterexample, build_schedule, make_bump, verify_lower_bound, DKParamsA1,
};
use crate::error::{LabError, Result};
use crate::experiment::config::{ExperimentConfig, ExperimentKind, SequenceSource};
use crate::experiment::report::{ExperimentReport, ScalarResult};
use crate::maximal::decompose::decompose_e123;
use crate::maximal::packet::{growth_exponent_fit, ProbeFamily};
use crate::maximal::profile::{maximal_profile, ratio_hs};
use crate::propagator::evolve;
use crate::sequences::{
    critical_exponent, doubling_bound, is_decreasing_convex, lorentz_quasinorm, SequenceKind,
    TimeSequence,
};
use crate::spectral::{build_grid, SpectralFunction};

/// Largest relative norm drift accepted by `propagate`.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;
/// Slack on the weak Lorentz bound of `n^{-γ}` at `r = 1/γ`.
pub const QUASINORM_TOLERANCE: f64 = 1e-9;
/// Slack on pointwise domination by `E_1 + E_2 + E_3`.
pub const DOMINATION_TOLERANCE: f64 = 1e-8;

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

fn random_function(cfg: &ExperimentConfig, stream: u64) -> Result<SpectralFunction> {
    let grid = build_grid(cfg.n_points, cfg.period)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(stream));
    Ok(SpectralFunction::random(grid, cfg.max_freq, cfg.decay, &mut rng))
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(v), h.max(v)));
    if lo > 0.0 {
        hi / lo
    } else if hi == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

fn context(stage: &str) -> impl Fn(LabError) -> LabError + '_ {
    move |e| LabError::Precondition(format!("{stage}: {e}"))
}

fn propagate(cfg: &ExperimentConfig, out: &mut Vec<ScalarResult>) -> Result<Table> {
    let f = random_function(cfg, 0)?;
    let u = evolve(&f, cfg.t, cfg.a)?;
    let drift = (u.l2_norm() / f.l2_norm() - 1.0).abs();
    out.push(ScalarResult::at_most("norm_drift", drift, UNITARITY_TOLERANCE));
    if cfg.t == 0.0 {
        let diff = f
            .coeffs()
            .iter()
            .zip(u.coeffs())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        out.push(ScalarResult::at_most("identity_deviation", diff, 0.0));
    }
    out.push(ScalarResult::info("l2_norm", f.l2_norm()));
    let mut table = Table::new(&["x", "re", "im", "modulus"]);
    for (j, v) in u.synthesize().iter().enumerate() {
        table.rows.push(vec![f.grid().x(j), v.re, v.im, v.norm()]);
    }
    Ok(table)
}

fn maximal(cfg: &ExperimentConfig, seq: &TimeSequence, out: &mut Vec<ScalarResult>) -> Result<Table> {
    let f = random_function(cfg, 0)?;
    let p = maximal_profile(&f, seq, cfg.a)?;
    out.push(ScalarResult::info("profile_l2", p.l2_norm()));
    out.push(ScalarResult::info("f_hs", f.sobolev_norm(cfg.s)));
    out.push(ScalarResult::info("ratio_hs", ratio_hs(&f, &p, cfg.s, None)?));
    out.push(ScalarResult::info("times_used", p.truncation as f64));
    out.push(ScalarResult::info("time_cutoff", p.cutoff.unwrap_or(0.0)));
    let mut table = Table::new(&["x", "profile", "argmax"]);
    for (j, (v, i)) in p.values.iter().zip(&p.argmax).enumerate() {
        table.rows.push(vec![p.grid.x(j), *v, *i as f64]);
    }
    Ok(table)
}

fn scaling(cfg: &ExperimentConfig, seq: &TimeSequence, out: &mut Vec<ScalarResult>) -> Result<Table> {
    let family = ProbeFamily::standard(cfg.r, cfg.seed);
    let fit = growth_exponent_fit(cfg.a, seq, &cfg.lambdas, &family)?;
    out.push(ScalarResult::info("target", fit.target));
    out.push(ScalarResult::at_most(
        "slope_error",
        (fit.slope - fit.target).abs(),
        cfg.slope_tolerance,
    ));
    out.push(ScalarResult::info("slope", fit.slope));
    out.push(ScalarResult::info("slope_low", fit.interval.0));
    out.push(ScalarResult::info("slope_high", fit.interval.1));
    out.push(ScalarResult::info("residual_rms", fit.fit.residual_rms));
    out.push(ScalarResult::info("low_confidence", f64::from(u8::from(fit.low_confidence))));
    let mut table = Table::new(&["lambda", "ratio", "log_lambda", "log_ratio", "fitted_slope"]);
    for p in &fit.points {
        table
            .rows
            .push(vec![p.lambda, p.ratio, p.lambda.ln(), p.ratio.ln(), fit.slope]);
    }
    Ok(table)
}

fn counterexample(
    cfg: &ExperimentConfig,
    seq: &TimeSequence,
    out: &mut Vec<ScalarResult>,
) -> Result<Table> {
    if (cfg.a - 1.0).abs() < 1e-12 {
        let g = make_bump();
        let mut table = Table::new(&[
            "lambda",
            "b",
            "min_near_diagonal",
            "min_sup",
            "translation_mismatch",
            "hs_scaled",
            "weak_constant",
        ]);
        for &lambda in &cfg.lambdas {
            let params = DKParamsA1::for_lambda(cfg.s, lambda)?;
            let rep = a1_counterexample(&params, seq, &g, cfg.x_samples)
                .map_err(context("wave counterexample"))?;
            table.rows.push(vec![
                lambda,
                params.b,
                rep.min_near_diagonal,
                rep.min_sup,
                rep.translation_mismatch,
                rep.hs_scaled,
                rep.weak_constant,
            ]);
        }
        let col = |j: usize| table.rows.iter().map(move |r| r[j]);
        let worst = col(2).fold(f64::INFINITY, f64::min);
        out.push(ScalarResult::at_least("min_near_diagonal", worst, cfg.min_sup));
        out.push(ScalarResult::at_most("hs_scaled_spread", spread(col(5)), cfg.spread_limit));
        return Ok(table);
    }

    let steps = build_schedule(seq, cfg.a, cfg.s, cfg.epsilon, &cfg.b_exponents)?;
    let mut table = Table::new(&[
        "step",
        "b",
        "r_count",
        "m",
        "lambda",
        "rho",
        "interval",
        "min_sup",
        "hs_norm_sq",
        "weak_constant",
        "max_index",
    ]);
    for (j, step) in steps.iter().enumerate() {
        let p = &step.params;
        let rep = verify_lower_bound(p, seq, cfg.x_samples).map_err(context("lower bound"))?;
        table.rows.push(vec![
            j as f64,
            p.b,
            step.r_count,
            p.m,
            p.lambda,
            p.rho,
            p.interval_length(),
            rep.min_sup,
            rep.hs_norm_sq,
            rep.weak_constant,
            rep.max_index as f64,
        ]);
    }
    let worst = table.rows.iter().map(|r| r[7]).fold(f64::INFINITY, f64::min);
    out.push(ScalarResult::at_least("min_sup", worst, cfg.min_sup));
    if table.rows.len() > 1 {
        let growth = table
            .rows
            .windows(2)
            .map(|w| w[1][9] / w[0][9])
            .fold(f64::INFINITY, f64::min);
        out.push(ScalarResult::at_least("weak_constant_growth", growth, cfg.growth_factor));
    }
    Ok(table)
}

fn classify(cfg: &ExperimentConfig, seq: &TimeSequence, out: &mut Vec<ScalarResult>) -> Result<Table> {
    let conv = is_decreasing_convex(seq);
    out.push(ScalarResult::info("terms", seq.len() as f64));
    out.push(ScalarResult::info("convex", f64::from(u8::from(conv.convex))));
    out.push(ScalarResult::info(
        "convexity_violation",
        conv.violation.map_or(-1.0, |v| v as f64),
    ));
    match critical_exponent(seq) {
        Ok(c) => {
            out.push(ScalarResult::info("critical_exponent", c.estimate));
            out.push(ScalarResult::info("critical_residual", c.residual_rms));
            out.push(ScalarResult::info("low_confidence", f64::from(u8::from(c.low_confidence))));
        }
        Err(_) => out.push(ScalarResult::info("critical_exponent", f64::NAN)),
    }
    let q = lorentz_quasinorm(seq, cfg.r);
    match (seq.kind(), &cfg.sequence) {
        (SequenceKind::Power { gamma }, SequenceSource::Power { .. })
            if (cfg.r - 1.0 / gamma).abs() < 1e-15 =>
        {
            out.push(ScalarResult::at_most("lorentz_quasinorm", q, 1.0 + QUASINORM_TOLERANCE))
        }
        _ => out.push(ScalarResult::info("lorentz_quasinorm", q)),
    }
    out.push(ScalarResult::info("doubling_bound", doubling_bound(seq, cfg.r)));
    out.push(ScalarResult::info("r", cfg.r));

    let mut table = Table::new(&["j", "b", "count_greater"]);
    let last = *seq.values().last().unwrap();
    let mut j = 0;
    loop {
        let b = (-(j as f64)).exp2();
        if b < last {
            break;
        }
        let c = seq.values().partition_point(|t| *t > b);
        table.rows.push(vec![j as f64, b, c as f64]);
        j += 1;
    }
    Ok(table)
}

fn decompose(cfg: &ExperimentConfig, seq: &TimeSequence, out: &mut Vec<ScalarResult>) -> Result<Table> {
    let mut table = Table::new(&[
        "function",
        "e1_norm",
        "e2_norm",
        "e3_norm",
        "e1_ratio",
        "e2_ratio",
        "e3_ratio",
        "profile_l2",
        "domination_excess",
    ]);
    for i in 0..cfg.functions {
        let f = random_function(cfg, i as u64)?;
        let p = maximal_profile(&f, seq, cfg.a)?;
        let d = decompose_e123(&f, seq, cfg.a, cfg.r)?;
        table.rows.push(vec![
            i as f64,
            d.norms[0],
            d.norms[1],
            d.norms[2],
            d.ratios[0],
            d.ratios[1],
            d.ratios[2],
            p.l2_norm(),
            d.domination_excess(&p.values),
        ]);
    }
    let excess = table.rows.iter().map(|r| r[8]).fold(f64::NEG_INFINITY, f64::max);
    out.push(ScalarResult::at_most("domination_excess", excess, DOMINATION_TOLERANCE));
    for (k, name) in ["e1_ratio_spread", "e2_ratio_spread", "e3_ratio_spread"].iter().enumerate() {
        let s = spread(table.rows.iter().map(|r| r[4 + k]));
        out.push(ScalarResult::at_most(name, s, cfg.spread_limit));
    }
    out.push(ScalarResult::info("s", crate::sequences::target_exponent(cfg.a, cfg.r)));
    Ok(table)
}

/// Runs one experiment. Deterministic in `(cfg, cfg.seed)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let seq = cfg.sequence.load()?;
    let loaded = start.elapsed().as_secs_f64();
    let mut scalars = Vec::new();
    let table = match cfg.kind {
        ExperimentKind::Propagate => propagate(cfg, &mut scalars)?,
        ExperimentKind::Maximal => maximal(cfg, &seq, &mut scalars)?,
        ExperimentKind::Scaling => scaling(cfg, &seq, &mut scalars)?,
        ExperimentKind::Counterexample => counterexample(cfg, &seq, &mut scalars)?,
        ExperimentKind::Classify => classify(cfg, &seq, &mut scalars)?,
        ExperimentKind::Decompose => decompose(cfg, &seq, &mut scalars)?,
    };
    let config = serde_json::to_value(cfg).map_err(|e| LabError::Io(e.to_string()))?;
    Ok(ExperimentReport {
        kind: cfg.kind.name().into(),
        seed: cfg.seed,
        config,
        scalars,
        columns: table.columns,
        rows: table.rows,
        timings: vec![
            ("load".into(), loaded),
            ("total".into(), start.elapsed().as_secs_f64()),
        ],
    })
}
