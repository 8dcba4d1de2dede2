//! Maximal functions of narrow-band packets along a time sequence,
//! computed in a frame moving with the group velocity.
//!
//! A probe has spectrum `F(ξ) = G((ξ - σμ)/ρ)` with `G` supported in
//! `[-1/2, 1/2]`. Writing `ξ = σμ + ρη`,
//!
//! ```text
//! |S^a f(x, t)| = (ρ/2π) |E(ρ(x + σ v t), t)|,   v = a μ^{a-1},
//! E(u, t) = ∫ e^{iuη + itψ(η)} G(η) dη,
//! ψ(η) = (μ + σρη)^a - μ^a - σ a μ^{a-1} ρη,
//! ```
//!
//! so every time needs one small FFT in `η`, evaluated on a fixed `u`-grid
//! that is shifted into a common global grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counterexample::BumpG;
use crate::error::{domain, LabError, Result};
use crate::propagator::{stable_power_difference, BandCutoff};
use crate::regression::{fit_line, LineFit};
use crate::sequences::{target_exponent, TimeSequence};
use crate::spectral::FftPair;

/// Spacing of the moving-frame grid in `u = ρ y`.
const U_STEP: f64 = 0.5;
/// Half-width in `u` reserved for the bump's tails.
const U_MARGIN: f64 = 200.0;
const MAX_LOCAL_POINTS: usize = 1 << 20;
const MAX_GLOBAL_POINTS: usize = 1 << 26;

/// One narrow-band probe at frequency scale `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketProbe {
    /// `+1` or `-1`: side of the spectrum.
    pub sign: f64,
    /// Centre frequency magnitude `μ`.
    pub mu: f64,
    /// Width `ρ`.
    pub rho: f64,
    /// Chirp `β` in `G(η) = g(η) e^{iβη²}`.
    pub chirp: f64,
}

impl PacketProbe {
    pub fn label(&self) -> String {
        format!(
            "sign={} mu={:.6e} rho={:.6e} chirp={:.4}",
            self.sign, self.mu, self.rho, self.chirp
        )
    }
}

/// Outcome for one probe.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketResult {
    /// `‖sup_n |S^a_λ f(·, t_n)|‖₂ / ‖f‖₂`.
    pub ratio: f64,
    pub local_points: usize,
    pub global_points: usize,
    pub times: usize,
}

fn psi(a: f64, mu: f64, sign: f64, rho: f64, eta: f64) -> f64 {
    let u = -sign * rho * eta / mu;
    mu.powf(a) * stable_power_difference(u, a) - sign * a * mu.powf(a - 1.0) * rho * eta
}

/// Ratio of the maximal function along `times` to `‖f‖₂` for one probe.
pub fn packet_ratio(
    a: f64,
    lambda: f64,
    probe: &PacketProbe,
    chi: &BandCutoff,
    g: &BumpG,
    times: &[f64],
) -> Result<PacketResult> {
    if !(a > 0.0 && lambda >= 1.0) {
        return Err(domain("a, lambda", format!("a = {a}, lambda = {lambda}")));
    }
    let PacketProbe {
        sign,
        mu,
        rho,
        chirp,
    } = *probe;
    if !(rho > 0.0 && rho < mu) {
        return Err(domain("rho", format!("rho = {rho} must lie in (0, mu = {mu})")));
    }
    if times.is_empty() {
        return Err(LabError::InvalidSequence("no times".into()));
    }
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    let slope = (0..=64)
        .map(|i| {
            let eta = -0.5 + i as f64 / 64.0;
            let d = sign * rho * a * ((mu + sign * rho * eta).powf(a - 1.0) - mu.powf(a - 1.0));
            d.abs()
        })
        .fold(0.0, f64::max);
    let period_u = 2.0 * (t_max * slope + U_MARGIN);
    let k = ((period_u / U_STEP).ceil() as usize).next_power_of_two().max(64);
    if k > MAX_LOCAL_POINTS {
        return Err(LabError::BudgetExceeded(format!(
            "probe needs {k} local points"
        )));
    }
    let period_u = k as f64 * U_STEP;
    let d_eta = 2.0 * PI / period_u;

    // G on the η-grid, FFT order
    let mut etas = Vec::new();
    let mut gs = Vec::new();
    let mut idx = Vec::new();
    for i in 0..k {
        let m = if i < k / 2 { i as i64 } else { i as i64 - k as i64 };
        let eta = m as f64 * d_eta;
        let w = g.eval(eta);
        if w == 0.0 {
            continue;
        }
        let xi = sign * mu + rho * eta;
        let c = chi.eval(xi / lambda);
        if c == 0.0 {
            continue;
        }
        etas.push(eta);
        gs.push(Complex64::from_polar(w * c, chirp * eta * eta));
        idx.push(i);
    }
    let mass: f64 = gs.iter().map(|v| v.norm_sqr()).sum::<f64>() * d_eta;
    if mass == 0.0 {
        return Err(LabError::Precondition("probe spectrum is empty".into()));
    }
    let psis: Vec<f64> = etas.iter().map(|&e| psi(a, mu, sign, rho, e)).collect();

    let v = a * mu.powf(a - 1.0);
    let shifts: Vec<f64> = times.iter().map(|t| sign * rho * v * t / U_STEP).collect();
    let fmin = shifts.iter().map(|s| s.floor()).fold(f64::INFINITY, f64::min) as i64;
    let fmax = shifts.iter().map(|s| s.floor()).fold(f64::NEG_INFINITY, f64::max) as i64;
    let global = k + (fmax - fmin) as usize;
    if global > MAX_GLOBAL_POINTS {
        return Err(LabError::BudgetExceeded(format!(
            "probe needs {global} global points"
        )));
    }
    let fft = FftPair::new(k);
    let mut profile = vec![0.0f64; global];
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    let mut scratch = Vec::new();
    for (&t, &s) in times.iter().zip(&shifts) {
        let fl = s.floor();
        let delta = s - fl;
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for (j, &i) in idx.iter().enumerate() {
            let phase = t * psis[j] + delta * U_STEP * etas[j];
            buf[i] = gs[j] * Complex64::from_polar(d_eta, phase);
        }
        fft.inverse_with_scratch(&mut buf, &mut scratch);
        // local index k' ∈ [-K/2, K/2) lands on global J = k' - floor(s)
        let base = (fmax - fl as i64) as usize;
        for (i, e) in buf.iter().enumerate() {
            let local = if i < k / 2 { i + k / 2 } else { i - k / 2 };
            let slot = &mut profile[base + local];
            let m = e.norm();
            if m > *slot {
                *slot = m;
            }
        }
    }
    let integral: f64 = profile.iter().map(|p| p * p).sum::<f64>() * U_STEP;
    Ok(PacketResult {
        ratio: (integral / (2.0 * PI) / mass).sqrt(),
        local_points: k,
        global_points: global,
        times: times.len(),
    })
}

/// Probe family used by [`growth_exponent_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeFamily {
    /// Lorentz index of the sequence, used to tune the packets.
    pub r: f64,
    /// Width multipliers `c` in `ρ = c ε b^{-1/2} μ^{1-a/2}`.
    pub multipliers: Vec<f64>,
    /// Extra seeded probes with random width, chirp and side.
    pub random_probes: usize,
    pub seed: u64,
}

impl ProbeFamily {
    pub fn standard(r: f64, seed: u64) -> Self {
        Self {
            r,
            multipliers: vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0],
            random_probes: 6,
            seed,
        }
    }
}

/// Time scale `b = μ^{-a/(1+2r)}` at which tuned packets are built.
pub fn tuned_scale(a: f64, r: f64, mu: f64) -> f64 {
    mu.powf(-a / (1.0 + 2.0 * r))
}

/// Default `ε = 0.8 / (10 (a + 2))`.
pub fn default_epsilon(a: f64) -> f64 {
    0.8 / (10.0 * (a + 2.0))
}

/// Probes for scale `λ`, centred at `0.75 λ`.
pub fn probes_for(a: f64, lambda: f64, family: &ProbeFamily) -> Vec<PacketProbe> {
    let mu = 0.75 * lambda;
    let b = tuned_scale(a, family.r, mu);
    let eps = default_epsilon(a);
    let base = eps * b.powf(-0.5) * mu.powf(1.0 - a / 2.0);
    let rho_cap = 0.4 * lambda;
    let mut out: Vec<PacketProbe> = family
        .multipliers
        .iter()
        .map(|c| PacketProbe {
            sign: -1.0,
            mu,
            rho: (c * base).min(rho_cap),
            chirp: 0.0,
        })
        .collect();
    let lo = (0.25 * base).min(rho_cap).ln();
    let hi = (2.0 * base * family.multipliers.iter().cloned().fold(1.0, f64::max))
        .min(rho_cap)
        .ln();
    // one stream per scale keeps the family independent of the sweep
    let mut rng = ChaCha8Rng::seed_from_u64(family.seed ^ lambda.to_bits());
    for _ in 0..family.random_probes {
        let rho = rng.random_range(lo..=hi).exp();
        let chirp = rng.random_range(-40.0..=40.0);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        out.push(PacketProbe {
            sign,
            mu,
            rho,
            chirp,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthPoint {
    pub lambda: f64,
    pub ratio: f64,
    pub best_probe: PacketProbe,
    pub times: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub points: Vec<GrowthPoint>,
    pub fit: LineFit,
    pub slope: f64,
    /// 95% interval for the slope.
    pub interval: (f64, f64),
    pub target: f64,
    pub low_confidence: bool,
}

/// Smallest accepted ratio between the largest and smallest scale.
pub const MIN_SCALE_SPAN: f64 = 64.0;

/// Residual threshold (natural-log units) above which a fit is flagged.
pub const GROWTH_FIT_RESIDUAL: f64 = 0.1;

/// Sequence times used at scale `λ`: those above `b/64`.
pub fn times_for(seq: &TimeSequence, a: f64, r: f64, lambda: f64) -> Vec<f64> {
    let b = tuned_scale(a, r, 0.75 * lambda);
    let floor = b / 64.0;
    let mut out = Vec::new();
    let mut i = 0u64;
    while let Some(t) = seq.term(i) {
        if t < floor {
            break;
        }
        out.push(t);
        i += 1;
        if !seq.is_generated() && i as usize >= seq.len() {
            break;
        }
    }
    out
}

/// Log-log slope of the best probe ratio against `λ`.
pub fn growth_exponent_fit(
    a: f64,
    seq: &TimeSequence,
    lambdas: &[f64],
    family: &ProbeFamily,
) -> Result<GrowthFit> {
    if lambdas.len() < 4 {
        return Err(LabError::InvalidInput("need at least 4 scales".into()));
    }
    let (lo, hi) = lambdas
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
    if hi / lo < MIN_SCALE_SPAN * (1.0 - 1e-12) {
        return Err(LabError::InvalidInput(format!(
            "scales must span a factor of at least {MIN_SCALE_SPAN}"
        )));
    }
    let chi = BandCutoff::standard();
    let g = BumpG::new();
    let jobs: Vec<(usize, PacketProbe, f64)> = lambdas
        .iter()
        .enumerate()
        .flat_map(|(i, &lam)| probes_for(a, lam, family).into_iter().map(move |p| (i, p, lam)))
        .collect();
    let time_sets: Vec<Vec<f64>> = lambdas
        .iter()
        .map(|&lam| times_for(seq, a, family.r, lam))
        .collect();
    let results: Vec<Result<PacketResult>> = jobs
        .par_iter()
        .map(|(i, p, lam)| packet_ratio(a, *lam, p, &chi, &g, &time_sets[*i]))
        .collect();
    let mut points: Vec<Option<GrowthPoint>> = vec![None; lambdas.len()];
    for ((i, p, lam), res) in jobs.iter().zip(results) {
        let res = res?;
        let better = points[*i].as_ref().is_none_or(|q| res.ratio > q.ratio);
        if better {
            points[*i] = Some(GrowthPoint {
                lambda: *lam,
                ratio: res.ratio,
                best_probe: *p,
                times: res.times,
            });
        }
    }
    let points: Vec<GrowthPoint> = points.into_iter().map(|p| p.unwrap()).collect();
    let xs: Vec<f64> = points.iter().map(|p| p.lambda.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.ratio.ln()).collect();
    let fit = fit_line(&xs, &ys)?;
    Ok(GrowthFit {
        slope: fit.slope,
        interval: fit.slope_interval(0.95),
        target: target_exponent(a, family.r),
        low_confidence: fit.residual_rms > GROWTH_FIT_RESIDUAL,
        points,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximal::profile::maximal_profile;
    use crate::spectral::{build_grid, SpectralFunction};
    use approx::assert_relative_eq;

    #[test]
    fn single_time_ratio_is_one() {
        let chi = BandCutoff::standard();
        let g = BumpG::new();
        let p = PacketProbe {
            sign: -1.0,
            mu: 48.0,
            rho: 2.0,
            chirp: 3.0,
        };
        let r = packet_ratio(2.0, 64.0, &p, &chi, &g, &[0.7]).unwrap();
        assert_relative_eq!(r.ratio, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn agrees_with_grid_profile() {
        // same packet on a global periodic grid
        let (a, lambda) = (2.0, 32.0);
        let p = PacketProbe {
            sign: -1.0,
            mu: 24.0,
            rho: 1.5,
            chirp: 0.0,
        };
        let times = [0.5, 0.3, 0.2, 0.1, 0.05];
        let chi = BandCutoff::standard();
        let g = BumpG::new();
        let engine = packet_ratio(a, lambda, &p, &chi, &g, &times).unwrap();

        let grid = build_grid(1 << 15, 2400.0).unwrap();
        let f = SpectralFunction::from_spectrum(grid, |xi| {
            let eta = (xi - p.sign * p.mu) / p.rho;
            Complex64::new(g.eval(eta) * chi.eval(xi / lambda), 0.0)
        })
        .unwrap();
        let seq = TimeSequence::new(times.to_vec()).unwrap();
        let prof = maximal_profile(&f, &seq, a).unwrap();
        let direct = prof.l2_norm() / f.l2_norm();
        assert_relative_eq!(engine.ratio, direct, max_relative = 2e-3);
    }

    #[test]
    fn probe_family_shape() {
        let fam = ProbeFamily::standard(1.0, 7);
        let probes = probes_for(2.0, 256.0, &fam);
        assert_eq!(probes.len(), 12);
        assert!(probes.iter().all(|p| p.rho <= 0.4 * 256.0 && p.mu == 192.0));
        assert_eq!(probes, probes_for(2.0, 256.0, &fam));
        assert_relative_eq!(target_exponent(2.0, 1.0), 1.0 / 3.0);
        assert_relative_eq!(target_exponent(0.5, 1.0), 1.0 / 12.0);
    }
}
