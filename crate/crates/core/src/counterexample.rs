//! Narrow-window counterexample families: parameter selection, phase
//! bounds, the index map `n(x)` and the lower bound on `|S^a f|`.
//!
//! Spectra are normalised so that `∫ f̂ dη/2π = 1`, hence `f(0) = 1` and
//! `|S^a f(x, t)| = |∫ e^{iΦ(ξ)} g(ξ) dξ|` in the rescaled variable.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, LabError, Result};
use crate::propagator::{evaluate_direct, stable_power_difference};
use crate::quadrature::{integrate_oscillatory, GaussLegendre, QuadratureSettings};
use crate::sequences::{is_decreasing_convex, r_of_s, TimeSequence};

fn raw_bump(xi: f64) -> f64 {
    let u = 2.0 * xi;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// Composite Gauss–Legendre on `[-1/2, 1/2]`, fine enough that smooth
/// bump integrals are exact to rounding.
fn bump_integral<F: Fn(f64) -> f64>(f: F) -> f64 {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    let rule = RULE.get_or_init(|| GaussLegendre::new(32));
    let panels = 64;
    let h = 1.0 / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = -0.5 + h * p as f64;
            rule.integrate(lo, lo + h, &f)
        })
        .sum()
}

/// `g(ξ) = c exp(-1/(1-(2ξ)²))` on `|ξ| < 1/2` with unit mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpG {
    scale: f64,
}

impl Default for BumpG {
    fn default() -> Self {
        Self::new()
    }
}

impl BumpG {
    pub fn new() -> Self {
        Self {
            scale: 1.0 / bump_integral(raw_bump),
        }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.scale * raw_bump(xi)
    }

    /// `∫ g`.
    pub fn mass(&self) -> f64 {
        bump_integral(|x| self.eval(x))
    }

    /// `∫ w(ξ) g(ξ)² dξ`.
    pub fn weighted_square<W: Fn(f64) -> f64>(&self, w: W) -> f64 {
        bump_integral(|x| w(x) * self.eval(x).powi(2))
    }
}

pub fn make_bump() -> BumpG {
    BumpG::new()
}

/// Whether the condition on `|I|` applies (`s < 1/4`) or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Local,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DKParams {
    pub a: f64,
    pub s: f64,
    pub epsilon: f64,
    pub b: f64,
    pub m: f64,
    pub lambda: f64,
    pub rho: f64,
    /// `I = [0, a λ^{a-1} b / 2]`.
    pub interval: (f64, f64),
    pub regime: Regime,
}

impl DKParams {
    pub fn interval_length(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    /// `a λ^{a-1}`, the speed at which the window travels.
    pub fn speed(&self) -> f64 {
        self.a * self.lambda.powf(self.a - 1.0)
    }
}

/// Largest admissible `ε`: `1/(10(a+2))`.
pub fn epsilon_bound(a: f64) -> f64 {
    0.1 / (a + 2.0)
}

/// Default `ε`, `0.8` of the bound.
pub fn default_epsilon(a: f64) -> f64 {
    0.8 * epsilon_bound(a)
}

/// `a M^{2(a-1)/a} b^{(1-4s)/(a-4s)}`; must not exceed one in the local
/// regime.
pub fn local_condition(a: f64, s: f64, b: f64, m: f64) -> f64 {
    a * m.powf(2.0 * (a - 1.0) / a) * b.powf((1.0 - 4.0 * s) / (a - 4.0 * s))
}

/// Largest `M` meeting [`local_condition`] (`None` when every `M` does).
pub fn max_local_m(a: f64, s: f64, b: f64) -> Option<f64> {
    if a <= 1.0 {
        return None;
    }
    let base = b.powf(-(1.0 - 4.0 * s) / (a - 4.0 * s)) / a;
    Some(base.powf(a / (2.0 * (a - 1.0))))
}

pub fn select_params(a: f64, s: f64, epsilon: f64, b: f64, m: f64) -> Result<DKParams> {
    if !(a.is_finite() && a > 0.0) || (a - 1.0).abs() < 1e-12 {
        return Err(domain("a", format!("a = {a} must be positive and differ from 1")));
    }
    if !(s > 0.0 && s < a / 4.0) {
        return Err(domain("s", format!("s = {s} must satisfy 0 < s < a/4")));
    }
    let bound = epsilon_bound(a);
    if !(epsilon > 0.0 && epsilon < bound) {
        return Err(domain(
            "epsilon",
            format!("epsilon = {epsilon} must lie in (0, {bound})"),
        ));
    }
    if !(b > 0.0 && b < 1.0) {
        return Err(domain("b", format!("b = {b} must lie in (0, 1)")));
    }
    if !(m.is_finite() && m >= 1.0) {
        return Err(domain("M", format!("M = {m} must be at least 1")));
    }
    let lambda = m.powf(2.0 / a) * b.powf(-1.0 / (a - 4.0 * s));
    let rho = epsilon * b.powf(-0.5) * lambda.powf(1.0 - a / 2.0);
    let regime = if s < 0.25 { Regime::Local } else { Regime::Global };
    if regime == Regime::Local {
        let c = local_condition(a, s, b, m);
        if c > 1.0 {
            return Err(domain(
                "M",
                format!("local regime needs a M^(2(a-1)/a) b^((1-4s)/(a-4s)) <= 1, got {c}"),
            ));
        }
    }
    if rho / lambda > epsilon * (1.0 + 1e-12) {
        return Err(LabError::Precondition(format!(
            "rho/lambda = {} exceeds epsilon",
            rho / lambda
        )));
    }
    let len = a * lambda.powf(a - 1.0) * b / 2.0;
    Ok(DKParams {
        a,
        s,
        epsilon,
        b,
        m,
        lambda,
        rho,
        interval: (0.0, len),
        regime,
    })
}

/// `f̂(η) = 2π ρ^{-1} g((η + λ)/ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DkSpectrum {
    pub lambda: f64,
    pub rho: f64,
    pub g: BumpG,
}

impl DkSpectrum {
    pub fn eval(&self, eta: f64) -> f64 {
        2.0 * PI / self.rho * self.g.eval((eta + self.lambda) / self.rho)
    }

    pub fn support(&self) -> (f64, f64) {
        (-self.lambda - 0.5 * self.rho, -self.lambda + 0.5 * self.rho)
    }

    /// `∫ f̂ dη/2π`.
    pub fn mass(&self) -> f64 {
        self.g.mass()
    }

    /// `‖f‖²_{H^s} = 2π ρ^{-1} ∫ (1 + (ρξ - λ)²)^s g(ξ)² dξ`.
    pub fn sobolev_norm_sq(&self, s: f64) -> f64 {
        let (l, r) = (self.lambda, self.rho);
        2.0 * PI / r * self.g.weighted_square(|x| (1.0 + (r * x - l).powi(2)).powf(s))
    }
}

pub fn dk_spectrum(params: &DKParams, g: &BumpG) -> Result<DkSpectrum> {
    if params.rho > params.epsilon * params.lambda * (1.0 + 1e-12) {
        return Err(LabError::Precondition("rho/lambda exceeds epsilon".into()));
    }
    Ok(DkSpectrum {
        lambda: params.lambda,
        rho: params.rho,
        g: *g,
    })
}

/// Terms of the rescaled phase after dropping `ξ`-independent parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseBreakdown {
    /// `x ρ ξ + t λ^a ((1 - ρξ/λ)^a - 1)`.
    pub exact: f64,
    /// `(x - a λ^{a-1} t) ρ ξ`.
    pub linear: f64,
    /// `a(a-1)/2 · ρ² λ^{a-2} t ξ²`.
    pub quadratic: f64,
    /// `t λ^a E_3(ρξ/λ)`.
    pub cubic_remainder: f64,
}

/// Integral-form third-order Taylor remainder of `(1 - u)^a` at zero:
/// `-a(a-1)(a-2)/2 · u³ ∫_0^1 (1 - σu)^{a-3} (1 - σ)² dσ`.
pub fn taylor_remainder3(u: f64, a: f64) -> f64 {
    let c = a * (a - 1.0) * (a - 2.0);
    if c == 0.0 {
        return 0.0;
    }
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    let rule = RULE.get_or_init(|| GaussLegendre::new(24));
    let integral = rule.integrate(0.0, 1.0, |s| (1.0 - s * u).powf(a - 3.0) * (1.0 - s).powi(2));
    -0.5 * c * u.powi(3) * integral
}

/// Rescaled phase `Φ(ξ)` with constants dropped.
pub fn dk_phase(a: f64, lambda: f64, rho: f64, xi: f64, x: f64, t: f64) -> f64 {
    x * rho * xi + t * lambda.powf(a) * stable_power_difference(rho * xi / lambda, a)
}

pub fn phase_breakdown(params: &DKParams, xi: f64, x: f64, t: f64) -> Result<PhaseBreakdown> {
    if xi.abs() > 0.5 {
        return Err(domain("xi", format!("|xi| = {} exceeds 1/2", xi.abs())));
    }
    let DKParams { a, lambda, rho, .. } = *params;
    let u = rho * xi / lambda;
    Ok(PhaseBreakdown {
        exact: dk_phase(a, lambda, rho, xi, x, t),
        linear: (x - a * lambda.powf(a - 1.0) * t) * rho * xi,
        quadratic: 0.5 * a * (a - 1.0) * rho * rho * lambda.powf(a - 2.0) * t * xi * xi,
        cubic_remainder: t * lambda.powf(a) * taylor_remainder3(u, a),
    })
}

/// Index `i` with `x ∈ (c t_{i+1}, c t_i]`, `c = a λ^{a-1}`.
pub fn index_for_position(x: f64, seq: &TimeSequence, a: f64, lambda: f64) -> Result<u64> {
    let c = a * lambda.powf(a - 1.0);
    let mut i = seq
        .last_at_least(x / c)
        .ok_or_else(|| LabError::OutOfRange(format!("x = {x} is not covered by the sequence")))?;
    let t = |i: u64| seq.term(i);
    // settle rounding in x/c against the products c·t
    while i > 0 && t(i).is_some_and(|v| c * v < x) {
        i -= 1;
    }
    while t(i + 1).is_some_and(|v| c * v >= x) {
        i += 1;
    }
    match (t(i), t(i + 1)) {
        (Some(hi), Some(lo)) if c * lo < x && x <= c * hi => Ok(i),
        _ => Err(LabError::OutOfRange(format!(
            "x = {x} is not covered by the sequence"
        ))),
    }
}

/// `n(x)` for `x ∈ I`.
pub fn assign_index(x: f64, seq: &TimeSequence, params: &DKParams) -> Result<u64> {
    let (lo, hi) = params.interval;
    if !(x > lo && x <= hi) {
        return Err(LabError::OutOfRange(format!("x = {x} outside ({lo}, {hi}]")));
    }
    index_for_position(x, seq, params.a, params.lambda)
}

/// `|S^a f(x, t)|` by quadrature in the rescaled variable.
pub fn dk_modulus(params: &DKParams, g: &BumpG, x: f64, t: f64) -> Result<f64> {
    let DKParams { a, lambda, rho, .. } = *params;
    let settings = QuadratureSettings {
        tolerance: 1e-12,
        ..QuadratureSettings::default()
    };
    let res = integrate_oscillatory(&[(-0.5, 0.5)], 64, &settings, |xi| {
        Complex64::from_polar(g.eval(xi), dk_phase(a, lambda, rho, xi, x, t))
    })?;
    Ok(res.value.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub min_sup: f64,
    pub measure_i: f64,
    pub hs_norm_sq: f64,
    /// `|I| (1/2)² / ‖f‖²_{H^s}`.
    pub weak_constant: f64,
    pub samples: usize,
    /// Largest index used (0-based).
    pub max_index: u64,
}

/// Counting precondition at scale `b`: `#{b < t_n <= 2b} >= M b^{-r(s)}`.
pub fn counting_certificate(seq: &TimeSequence, a: f64, s: f64, b: f64) -> Result<f64> {
    let r = r_of_s(s, a)?;
    Ok(seq.count_between(b, 2.0 * b) as f64 * b.powf(r))
}

pub fn verify_lower_bound(
    params: &DKParams,
    seq: &TimeSequence,
    x_samples: usize,
) -> Result<LowerBoundReport> {
    if x_samples == 0 {
        return Err(LabError::InvalidInput("x_samples must be positive".into()));
    }
    let conv = is_decreasing_convex(seq);
    if !conv.convex {
        return Err(LabError::Precondition(format!(
            "sequence is not convex (first violation at index {:?})",
            conv.violation
        )));
    }
    let DKParams { a, s, b, m, .. } = *params;
    if !seq.covers(0.5 * b) {
        return Err(LabError::Precondition(format!(
            "sequence has no times at or below b/2 = {}",
            0.5 * b
        )));
    }
    let cert = counting_certificate(seq, a, s, b)?;
    if cert < m {
        return Err(LabError::Precondition(format!(
            "#{{b < t_n <= 2b}} b^r = {cert} is below M = {m}"
        )));
    }
    let g = make_bump();
    let len = params.interval_length();
    let rows: Vec<Result<(f64, u64)>> = (0..x_samples)
        .into_par_iter()
        .map(|i| {
            let x = len * (i + 1) as f64 / x_samples as f64;
            let n = assign_index(x, seq, params)?;
            let t = seq.term(n).unwrap();
            Ok((dk_modulus(params, &g, x, t)?, n))
        })
        .collect();
    let mut min_sup = f64::INFINITY;
    let mut max_index = 0;
    for row in rows {
        let (v, n) = row?;
        min_sup = min_sup.min(v);
        max_index = max_index.max(n);
    }
    let spec = dk_spectrum(params, &g)?;
    let hs = spec.sobolev_norm_sq(s);
    Ok(LowerBoundReport {
        min_sup,
        measure_i: len,
        hs_norm_sq: hs,
        weak_constant: len * 0.25 / hs,
        samples: x_samples,
        max_index,
    })
}

/// One step of a schedule `j ↦ (b_j, M_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleStep {
    pub params: DKParams,
    /// `R_j = #{b < t_n <= 2b} b^{r(s)}`.
    pub r_count: f64,
}

/// Builds steps at `b_j = 2^{-e_j}` with `M_j = min(R_j, M_max)`, where
/// `M_max` is the largest `M` meeting the local condition.
pub fn build_schedule(
    seq: &TimeSequence,
    a: f64,
    s: f64,
    epsilon: f64,
    b_exponents: &[i32],
) -> Result<Vec<ScheduleStep>> {
    let mut out = Vec::with_capacity(b_exponents.len());
    for &e in b_exponents {
        let b = (-(e as f64)).exp2();
        let r_count = counting_certificate(seq, a, s, b)?;
        let mut m = r_count;
        if s < 0.25 {
            if let Some(cap) = max_local_m(a, s, b) {
                m = m.min(cap);
            }
        }
        if m < 1.0 {
            return Err(LabError::Precondition(format!(
                "at b = 2^-{e} the count gives M = {m} < 1"
            )));
        }
        let params = select_params(a, s, epsilon, b, m)?;
        out.push(ScheduleStep { params, r_count });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DKParamsA1 {
    pub s: f64,
    pub b: f64,
    pub m: f64,
    pub lambda: f64,
}

impl DKParamsA1 {
    /// `λ = M b^{-1/(1-2s)}`.
    pub fn new(s: f64, b: f64, m: f64) -> Result<Self> {
        if !(s > 0.0 && s < 0.5) {
            return Err(domain("s", format!("s = {s} must lie in (0, 1/2)")));
        }
        if !(b > 0.0 && b < 1.0) {
            return Err(domain("b", format!("b = {b} must lie in (0, 1)")));
        }
        if !(m.is_finite() && m >= 1.0) {
            return Err(domain("M", format!("M = {m} must be at least 1")));
        }
        Ok(Self {
            s,
            b,
            m,
            lambda: m * b.powf(-1.0 / (1.0 - 2.0 * s)),
        })
    }

    /// Parameters with `M = 1` and the `b` giving frequency `λ`.
    pub fn for_lambda(s: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) {
            return Err(domain("lambda", format!("lambda = {lambda} must exceed 1")));
        }
        Self::new(s, lambda.powf(-(1.0 - 2.0 * s)), 1.0)
    }
}

/// `f̂_λ(ξ) = 2π · 10 λ^{-1} g(10 λ^{-1} (ξ + λ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A1Spectrum {
    pub lambda: f64,
    pub g: BumpG,
}

impl A1Spectrum {
    pub fn eval(&self, xi: f64) -> f64 {
        let k = 10.0 / self.lambda;
        2.0 * PI * k * self.g.eval(k * (xi + self.lambda))
    }

    pub fn support(&self) -> (f64, f64) {
        (-1.05 * self.lambda, -0.95 * self.lambda)
    }

    pub fn sobolev_norm_sq(&self, s: f64) -> f64 {
        let l = self.lambda;
        2.0 * PI * 10.0 / l * self.g.weighted_square(|z| (1.0 + (l * z / 10.0 - l).powi(2)).powf(s))
    }

    /// `|f(y)| = |∫ e^{i y λ ζ/10} g(ζ) dζ|`.
    pub fn translate_modulus(&self, y: f64) -> Result<f64> {
        let w = y * self.lambda / 10.0;
        let settings = QuadratureSettings {
            tolerance: 1e-12,
            ..QuadratureSettings::default()
        };
        let res = integrate_oscillatory(&[(-0.5, 0.5)], 64, &settings, |z| {
            Complex64::from_polar(self.g.eval(z), w * z)
        })?;
        Ok(res.value.norm())
    }

    /// `|S^1 f(x, t)|` straight from `∫ e^{i(xξ + t|ξ|)} f̂(ξ) dξ/2π`.
    pub fn propagated_modulus(&self, x: f64, t: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        let v = evaluate_direct(|xi| Complex64::new(self.eval(xi), 0.0), &[(lo, hi)], x, t, 1.0, 64)?;
        Ok(v.value.norm())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct A1Report {
    pub lambda: f64,
    /// Smallest `|S^1 f(x, t)|` over sampled `|x - t| <= 1/λ`.
    pub min_near_diagonal: f64,
    /// Smallest sampled `sup_n |S^1 f(x, t_n)|` for `x ∈ (0, b/2]`.
    pub min_sup: f64,
    /// Largest `| |S^1 f(x,t)| - |f(x-t)| |` over the samples.
    pub translation_mismatch: f64,
    pub hs_norm: f64,
    /// `‖f‖_{H^s} λ^{1/2-s}`.
    pub hs_scaled: f64,
    /// `(b/2) / (4 ‖f‖²_{H^s})`.
    pub weak_constant: f64,
}

pub fn a1_counterexample(
    params: &DKParamsA1,
    seq: &TimeSequence,
    g: &BumpG,
    samples: usize,
) -> Result<A1Report> {
    let DKParamsA1 { s, b, m, lambda } = *params;
    if samples < 2 {
        return Err(LabError::InvalidInput("need at least two samples".into()));
    }
    if !seq.covers(0.5 * b / samples as f64) {
        return Err(LabError::Precondition("sequence does not reach below b/2".into()));
    }
    // gap bound below b
    let gap_bound = 2.0 / m * b.powf(1.0 / (1.0 - 2.0 * s));
    let start = seq.last_at_least(b).map(|i| i + 1).unwrap_or(0);
    let floor = 0.5 * b / samples as f64;
    let mut i = start;
    while let (Some(t0), Some(t1)) = (seq.term(i), seq.term(i + 1)) {
        if t0 - t1 > gap_bound * (1.0 + 1e-12) {
            return Err(LabError::Precondition(format!(
                "gap t_{i} - t_{} = {} exceeds 2 M^-1 b^(1/(1-2s)) = {gap_bound}",
                i + 1,
                t0 - t1
            )));
        }
        if t1 < floor {
            break;
        }
        i += 1;
    }
    let spec = A1Spectrum { lambda, g: *g };

    let near: Vec<Result<(f64, f64)>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let t = 0.5 * b * (k + 1) as f64 / samples as f64;
            let y = (2.0 * k as f64 / (samples - 1) as f64 - 1.0) / lambda;
            let x = t + y;
            let direct = spec.propagated_modulus(x, t)?;
            let shifted = spec.translate_modulus(y)?;
            Ok((direct, (direct - shifted).abs()))
        })
        .collect();
    let mut min_near = f64::INFINITY;
    let mut mismatch: f64 = 0.0;
    for r in near {
        let (v, d) = r?;
        min_near = min_near.min(v);
        mismatch = mismatch.max(d);
    }

    let sups: Vec<Result<f64>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let x = 0.5 * b * (k + 1) as f64 / samples as f64;
            // nearest sequence times on either side of x
            let i = seq
                .last_at_least(x)
                .ok_or_else(|| LabError::OutOfRange(format!("x = {x} above t_1")))?;
            let mut best: f64 = 0.0;
            for j in [i, i + 1] {
                if let Some(t) = seq.term(j) {
                    best = best.max(spec.translate_modulus(x - t)?);
                }
            }
            Ok(best)
        })
        .collect();
    let mut min_sup = f64::INFINITY;
    for r in sups {
        min_sup = min_sup.min(r?);
    }
    let hs_sq = spec.sobolev_norm_sq(s);
    Ok(A1Report {
        lambda,
        min_near_diagonal: min_near,
        min_sup,
        translation_mismatch: mismatch,
        hs_norm: hs_sq.sqrt(),
        hs_scaled: hs_sq.sqrt() * lambda.powf(0.5 - s),
        weak_constant: 0.5 * b / (4.0 * hs_sq),
    })
}

/// Which maximal statement a threshold refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    /// Almost-everywhere convergence / local maximal bound.
    Local,
    /// Global `L²(ℝ)` maximal bound.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    At,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub threshold: f64,
    pub side: Side,
    pub predicted_convergence: bool,
}

/// Threshold in `s` for `t_n = n^{-γ}`.
pub fn sharpness_threshold(gamma: f64, a: f64, statement: Statement) -> Result<f64> {
    if !(gamma > 0.0 && a > 0.0) {
        return Err(domain("gamma, a", format!("gamma = {gamma}, a = {a}")));
    }
    let wave = (a - 1.0).abs() < 1e-12;
    Ok(match (wave, statement) {
        (true, _) => 1.0 / (2.0 * gamma + 2.0),
        (false, Statement::Global) => a / (2.0 * gamma + 4.0),
        (false, Statement::Local) if a > 1.0 => (a / (2.0 * gamma + 4.0)).min(0.25),
        (false, Statement::Local) => a / (2.0 * gamma + 4.0),
    })
}

pub fn sharpness_verdict(gamma: f64, a: f64, s: f64, statement: Statement) -> Result<Verdict> {
    let threshold = sharpness_threshold(gamma, a, statement)?;
    let side = if (s - threshold).abs() <= 1e-12 * threshold.max(1.0) {
        Side::At
    } else if s < threshold {
        Side::Below
    } else {
        Side::Above
    };
    Ok(Verdict {
        threshold,
        side,
        predicted_convergence: side != Side::Below,
    })
}
