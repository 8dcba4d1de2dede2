//! Pointwise suprema of `|S^a f(x, t)|` over sequence times or a time
//! interval, and the level-set and norm functionals built on them.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, LabError, Result};
use crate::propagator::dispersion;
use crate::sequences::TimeSequence;
use crate::spectral::{FftPair, GridSpec, SpectralFunction};

/// Times below `freq_step * TIME_CUTOFF_FACTOR` are dropped from profiles.
pub const TIME_CUTOFF_FACTOR: f64 = 1e-3;

/// Work limit (time steps times grid points) for [`continuum_maximal`].
pub const CONTINUUM_WORK_BUDGET: u64 = 1 << 34;

/// Relative change below which a continuum profile counts as resolved.
pub const CONTINUUM_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalProfile {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    /// Attaining time index (sequence index, or the nearest sampled step of
    /// a continuum profile).
    pub argmax: Vec<usize>,
    pub a: f64,
    pub sequence_tag: String,
    /// Number of times entering the maximum.
    pub truncation: usize,
    /// Smallest time kept, when times were dropped.
    pub cutoff: Option<f64>,
}

impl MaximalProfile {
    /// `‖profile‖_{L²}` over the whole period.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v * v).sum();
        (s * self.grid.dx()).sqrt()
    }

    /// `‖profile‖_{L²(B)}` with `B = [lo, hi)` in torus coordinates.
    pub fn l2_norm_on(&self, lo: f64, hi: f64) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                let x = self.grid.x(*j);
                lo <= x && x < hi
            })
            .map(|(_, v)| v * v)
            .sum();
        (s * self.grid.dx()).sqrt()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

#[derive(Clone)]
struct Running {
    values: Vec<f64>,
    argmax: Vec<usize>,
}

impl Running {
    fn new(n: usize) -> Self {
        Self {
            values: vec![f64::NEG_INFINITY; n],
            argmax: vec![usize::MAX; n],
        }
    }

    fn offer(&mut self, idx: usize, moduli: &[f64]) {
        for ((v, a), m) in self.values.iter_mut().zip(&mut self.argmax).zip(moduli) {
            if *m > *v || (*m == *v && idx < *a) {
                *v = *m;
                *a = idx;
            }
        }
    }

    /// Lowest index wins ties, so the merge order does not matter.
    fn merge(mut self, other: Running) -> Running {
        for i in 0..self.values.len() {
            let (v, a) = (other.values[i], other.argmax[i]);
            if v > self.values[i] || (v == self.values[i] && a < self.argmax[i]) {
                self.values[i] = v;
                self.argmax[i] = a;
            }
        }
        self
    }
}

/// `|S^a f(x_j, t)|` on the grid, given the dispersion table.
pub(crate) fn moduli_at(
    f: &SpectralFunction,
    disp: &[f64],
    t: f64,
    fft: &FftPair,
    buf: &mut Vec<Complex64>,
    scratch: &mut Vec<Complex64>,
    out: &mut Vec<f64>,
) {
    buf.clear();
    buf.extend(f.coeffs().iter().zip(disp).map(|(c, w)| {
        if *c == Complex64::new(0.0, 0.0) {
            *c
        } else {
            c * Complex64::from_polar(1.0, t * w)
        }
    }));
    fft.inverse_with_scratch(buf, scratch);
    let scale = 1.0 / f.grid().period();
    out.clear();
    out.extend(buf.iter().map(|v| v.norm_sqr().sqrt() * scale));
}

/// Pointwise `max_n |S^a f(x_j, t_n)|` over the kept sequence times.
/// `evaluator` gives `|S^a f(·, t)|` on the grid for one time.
fn running_max<E>(n_points: usize, times: &[f64], evaluator: E) -> Running
where
    E: Fn(f64, &mut Vec<Complex64>, &mut Vec<Complex64>, &mut Vec<f64>) + Sync,
{
    times
        .par_iter()
        .enumerate()
        .fold(
            || (Running::new(n_points), Vec::new(), Vec::new(), Vec::new()),
            |(mut run, mut buf, mut scratch, mut out), (i, &t)| {
                evaluator(t, &mut buf, &mut scratch, &mut out);
                run.offer(i, &out);
                (run, buf, scratch, out)
            },
        )
        .map(|(run, ..)| run)
        .reduce(|| Running::new(n_points), Running::merge)
}

/// Sequence times kept for a grid, and the cutoff used.
pub fn kept_times(grid: &GridSpec, seq: &TimeSequence) -> (Vec<f64>, f64) {
    let cutoff = grid.freq_step() * TIME_CUTOFF_FACTOR;
    let kept = seq.values().iter().copied().take_while(|t| *t >= cutoff).collect();
    (kept, cutoff)
}

/// `max_n |S^a f(x_j, t_n)|` at every grid point.
pub fn maximal_profile(f: &SpectralFunction, seq: &TimeSequence, a: f64) -> Result<MaximalProfile> {
    if !(a.is_finite() && a > 0.0) {
        return Err(domain("a", format!("a = {a} must be positive")));
    }
    let grid = *f.grid();
    let (times, cutoff) = kept_times(&grid, seq);
    if times.is_empty() {
        return Err(LabError::InvalidSequence(format!(
            "every time lies below the resolution cutoff {cutoff:e}"
        )));
    }
    let disp = dispersion(f, a);
    let fft = FftPair::new(grid.n_points());
    let run = running_max(grid.n_points(), &times, |t, buf, scratch, out| {
        moduli_at(f, &disp, t, &fft, buf, scratch, out)
    });
    Ok(MaximalProfile {
        grid,
        values: run.values,
        argmax: run.argmax,
        a,
        sequence_tag: seq.tag(),
        truncation: times.len(),
        cutoff: (times.len() < seq.len()).then_some(cutoff),
    })
}

/// Brute-force oracle: one synthesis per time, then a per-point scan in
/// sequence order.
pub fn maximal_profile_reference(
    f: &SpectralFunction,
    seq: &TimeSequence,
    a: f64,
) -> Result<(Vec<f64>, Vec<usize>)> {
    let (times, _) = kept_times(f.grid(), seq);
    let disp = dispersion(f, a);
    let fft = FftPair::new(f.grid().n_points());
    let n = f.grid().n_points();
    let mut best = vec![f64::NEG_INFINITY; n];
    let mut arg = vec![usize::MAX; n];
    let (mut buf, mut scratch, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for (i, &t) in times.iter().enumerate() {
        moduli_at(f, &disp, t, &fft, &mut buf, &mut scratch, &mut out);
        for j in 0..n {
            if out[j] > best[j] {
                best[j] = out[j];
                arg[j] = i;
            }
        }
    }
    Ok((best, arg))
}

struct ContinuumPass {
    values: Vec<f64>,
    argmax: Vec<usize>,
    steps: usize,
}

/// Time-continuous maximal function over `J = [j.0, j.1]`.
///
/// The common phase `e^{itc}` does not change moduli, so times are
/// sampled with step `|J| / (oversample (1 + ω|J|))` where `ω` is the
/// spread of `|ξ|^a` over the support. Each sampled maximum is polished by
/// Newton steps on `|F(t)|²`, and the oversampling is doubled until the
/// profile changes by less than [`CONTINUUM_TOLERANCE`] relative to its
/// maximum.
pub fn continuum_maximal(
    f: &SpectralFunction,
    a: f64,
    j: (f64, f64),
    oversample: usize,
) -> Result<MaximalProfile> {
    continuum_maximal_with_budget(f, a, j, oversample, CONTINUUM_WORK_BUDGET)
}

pub fn continuum_maximal_with_budget(
    f: &SpectralFunction,
    a: f64,
    j: (f64, f64),
    oversample: usize,
    budget: u64,
) -> Result<MaximalProfile> {
    if !(a.is_finite() && a > 0.0) {
        return Err(domain("a", format!("a = {a} must be positive")));
    }
    let (t0, t1) = j;
    if !(0.0 <= t0 && t0 <= t1 && t1 <= 1.0) {
        return Err(domain("J", format!("[{t0}, {t1}] is not a subinterval of [0, 1]")));
    }
    if oversample < 4 {
        return Err(domain("oversample", format!("{oversample} < 4")));
    }
    let grid = *f.grid();
    let support: Vec<usize> = (0..grid.n_points())
        .filter(|&i| f.coeffs()[i].norm_sqr() > 0.0)
        .collect();
    let disp = dispersion(f, a);
    let (lo, hi) = support
        .iter()
        .map(|&i| disp[i])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), w| (l.min(w), h.max(w)));
    let centre = if support.is_empty() { 0.0 } else { 0.5 * (lo + hi) };
    let spread = if support.is_empty() { 0.0 } else { hi - lo };
    let shifted: Vec<f64> = disp.iter().map(|w| w - centre).collect();
    let tag = format!("continuum [{t0}, {t1}]");

    if t1 == t0 || support.is_empty() {
        let fft = FftPair::new(grid.n_points());
        let (mut buf, mut scratch, mut out) = (Vec::new(), Vec::new(), Vec::new());
        moduli_at(f, &shifted, t0, &fft, &mut buf, &mut scratch, &mut out);
        return Ok(MaximalProfile {
            grid,
            values: out,
            argmax: vec![0; grid.n_points()],
            a,
            sequence_tag: tag,
            truncation: 1,
            cutoff: None,
        });
    }

    let len = t1 - t0;
    let base_steps = (oversample as f64 * (1.0 + spread * len)).ceil() as usize;
    let pass = |steps: usize| -> Result<ContinuumPass> {
        let work = (steps as u64 + 1).saturating_mul(grid.n_points() as u64);
        if work > budget {
            return Err(LabError::BudgetExceeded(format!(
                "{steps} time steps on {} points exceed the work budget {budget}",
                grid.n_points()
            )));
        }
        let h = len / steps as f64;
        let times: Vec<f64> = (0..=steps).map(|k| t0 + h * k as f64).collect();
        let fft = FftPair::new(grid.n_points());
        let run = running_max(grid.n_points(), &times, |t, buf, scratch, out| {
            moduli_at(f, &shifted, t, &fft, buf, scratch, out)
        });
        let peak = run.values.iter().cloned().fold(0.0, f64::max);
        let values = refine(f, &support, &shifted, &run, &times, h, (t0, t1), peak);
        Ok(ContinuumPass {
            values,
            argmax: run.argmax,
            steps,
        })
    };

    let mut prev = pass(base_steps)?;
    loop {
        let next = pass(prev.steps * 2)?;
        let peak = next.values.iter().cloned().fold(0.0, f64::max);
        let change = prev
            .values
            .iter()
            .zip(&next.values)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        if change <= CONTINUUM_TOLERANCE * peak {
            return Ok(MaximalProfile {
                grid,
                values: next.values,
                argmax: next.argmax,
                a,
                sequence_tag: tag,
                truncation: next.steps + 1,
                cutoff: None,
            });
        }
        prev = next;
    }
}

/// Newton polish of the sampled maxima on `g(t) = |F(x_j, t)|²`.
#[allow(clippy::too_many_arguments)]
fn refine(
    f: &SpectralFunction,
    support: &[usize],
    shifted: &[f64],
    run: &Running,
    times: &[f64],
    h: f64,
    j: (f64, f64),
    peak: f64,
) -> Vec<f64> {
    let grid = *f.grid();
    let inv_l = 1.0 / grid.period();
    let freqs: Vec<f64> = support.iter().map(|&i| grid.frequency(i)).collect();
    let w: Vec<f64> = support.iter().map(|&i| shifted[i]).collect();
    let c: Vec<Complex64> = support.iter().map(|&i| f.coeffs()[i] * inv_l).collect();
    (0..grid.n_points())
        .into_par_iter()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); support.len()],
            |z, jx| {
                let coarse = run.values[jx];
                if coarse < 1e-3 * peak {
                    return coarse;
                }
                let x = grid.x(jx);
                for (k, zk) in z.iter_mut().enumerate() {
                    *zk = c[k] * Complex64::from_polar(1.0, x * freqs[k]);
                }
                let eval = |t: f64| {
                    let (mut v, mut d1, mut d2) = (Complex64::default(), Complex64::default(), Complex64::default());
                    for (zk, wk) in z.iter().zip(&w) {
                        let e = zk * Complex64::from_polar(1.0, t * wk);
                        v += e;
                        d1 += e * Complex64::new(0.0, *wk);
                        d2 -= e * (wk * wk);
                    }
                    (v, d1, d2)
                };
                let centre = times[run.argmax[jx]];
                let lo = (centre - h).max(j.0);
                let hi = (centre + h).min(j.1);
                let mut best = coarse;
                let mut t = centre;
                for _ in 0..8 {
                    let (v, d1, d2) = eval(t);
                    best = best.max(v.norm());
                    let g1 = 2.0 * (v.conj() * d1).re;
                    let g2 = 2.0 * (d1.norm_sqr() + (v.conj() * d2).re);
                    if g2 >= 0.0 {
                        break;
                    }
                    let next = (t - g1 / g2).clamp(lo, hi);
                    if (next - t).abs() <= 1e-14 * h.max(1e-300) {
                        break;
                    }
                    t = next;
                }
                best = best.max(eval(t).0.norm());
                best
            },
        )
        .collect()
}

/// Measure of `{x ∈ [lo, hi) : profile(x) > alpha}` as a grid-cell count.
pub fn weak_level_measure(profile: &MaximalProfile, alpha: f64, b: (f64, f64)) -> Result<f64> {
    let (lo, hi) = b;
    if !(lo <= hi && lo >= 0.0 && hi <= profile.grid.period()) {
        return Err(domain("B", format!("[{lo}, {hi}) is not inside the period")));
    }
    let count = profile
        .values
        .iter()
        .enumerate()
        .filter(|(j, v)| {
            let x = profile.grid.x(*j);
            lo <= x && x < hi && **v > alpha
        })
        .count();
    Ok(count as f64 * profile.grid.dx())
}

/// `‖profile‖_{L²(B)} / ‖f‖_{H^s}`; `b = None` means the whole period.
pub fn ratio_hs(
    f: &SpectralFunction,
    profile: &MaximalProfile,
    s: f64,
    b: Option<(f64, f64)>,
) -> Result<f64> {
    let denom = f.sobolev_norm(s);
    if denom == 0.0 {
        return Err(LabError::Precondition("‖f‖_{H^s} vanishes".into()));
    }
    let num = match b {
        Some((lo, hi)) => profile.l2_norm_on(lo, hi),
        None => profile.l2_norm(),
    };
    Ok(num / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::evolve;
    use crate::sequences::{generate_sequence, Generator};
    use crate::spectral::build_grid;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_f(seed: u64, n: usize, period: f64, band: f64) -> SpectralFunction {
        let g = build_grid(n, period).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectralFunction::random(g, band, 0.0, &mut rng)
    }

    #[test]
    fn single_time_profile() {
        let f = random_f(1, 256, 30.0, 20.0);
        let seq = TimeSequence::new(vec![0.3]).unwrap();
        let p = maximal_profile(&f, &seq, 2.0).unwrap();
        let direct = evolve(&f, 0.3, 2.0).unwrap().synthesize();
        for (v, d) in p.values.iter().zip(&direct) {
            assert!((v - d.norm()).abs() <= 1e-14 * d.norm().max(1.0));
        }
        assert!(p.argmax.iter().all(|&a| a == 0));
    }

    #[test]
    fn zero_function_profile() {
        let g = build_grid(64, 10.0).unwrap();
        let seq = generate_sequence(Generator::Power { gamma: 1.0 }, 8).unwrap();
        let p = maximal_profile(&SpectralFunction::zeros(g), &seq, 2.0).unwrap();
        assert!(p.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn profile_matches_brute_force_exactly() {
        let f = random_f(2, 1024, 40.0, 60.0);
        let seq = generate_sequence(Generator::Power { gamma: 1.0 }, 64).unwrap();
        let p = maximal_profile(&f, &seq, 2.0).unwrap();
        let (best, arg) = maximal_profile_reference(&f, &seq, 2.0).unwrap();
        assert_eq!(p.values, best);
        assert_eq!(p.argmax, arg);
        assert_eq!(p.truncation, 64);
        assert_eq!(p.cutoff, None);
    }

    #[test]
    fn tiny_times_are_cut() {
        let f = random_f(3, 64, 2.0 * std::f64::consts::PI, 10.0);
        let seq = TimeSequence::new(vec![0.5, 1e-2, 1e-4]).unwrap();
        let p = maximal_profile(&f, &seq, 2.0).unwrap();
        assert_eq!(p.truncation, 2);
        assert_relative_eq!(p.cutoff.unwrap(), 1e-3);
    }

    #[test]
    fn continuum_degenerate_interval() {
        let f = random_f(4, 256, 30.0, 20.0);
        let p = continuum_maximal(&f, 2.0, (0.4, 0.4), 4).unwrap();
        let direct = evolve(&f, 0.4, 2.0).unwrap().synthesize();
        for (v, d) in p.values.iter().zip(&direct) {
            assert!((v - d.norm()).abs() <= 1e-12 * d.norm().max(1e-3));
        }
        assert!(continuum_maximal(&f, 2.0, (0.0, 1.0), 2).is_err());
        assert!(continuum_maximal(&f, 2.0, (0.5, 0.2), 4).is_err());
    }

    #[test]
    fn continuum_dominates_samples_and_reports_budget() {
        let f = random_f(5, 256, 30.0, 6.0);
        let p = continuum_maximal(&f, 2.0, (0.0, 0.5), 4).unwrap();
        for t in [0.0, 0.1234, 0.25, 0.4999, 0.5] {
            let s = evolve(&f, t, 2.0).unwrap().synthesize();
            for (v, d) in p.values.iter().zip(&s) {
                assert!(*v >= d.norm() * (1.0 - 1e-4) - 1e-12);
            }
        }
        let err = continuum_maximal_with_budget(&f, 2.0, (0.0, 1.0), 4, 1000).unwrap_err();
        assert!(matches!(err, LabError::BudgetExceeded(_)));
    }

    #[test]
    fn weak_measure_examples() {
        let f = random_f(6, 512, 20.0, 15.0);
        let seq = generate_sequence(Generator::Power { gamma: 1.0 }, 16).unwrap();
        let p = maximal_profile(&f, &seq, 2.0).unwrap();
        let full = (0.0, 20.0);
        assert_eq!(weak_level_measure(&p, p.max_value() * 1.01, full).unwrap(), 0.0);
        assert_relative_eq!(weak_level_measure(&p, 0.0, full).unwrap(), 20.0, epsilon = 1e-12);
        let m1 = weak_level_measure(&p, 0.5, (0.0, 7.0)).unwrap();
        let m2 = weak_level_measure(&p, 0.5, (7.0, 20.0)).unwrap();
        assert_relative_eq!(m1 + m2, weak_level_measure(&p, 0.5, full).unwrap(), epsilon = 1e-12);
        for alpha in [0.1, 0.5, 1.0, 2.0] {
            let m = weak_level_measure(&p, alpha, full).unwrap();
            assert!(alpha * alpha * m <= p.l2_norm().powi(2) * (1.0 + 1e-12));
        }
        assert!(weak_level_measure(&p, 0.5, (0.0, 25.0)).is_err());
    }

    #[test]
    fn ratio_for_single_mode() {
        let g = build_grid(64, 8.0).unwrap();
        let f = SpectralFunction::single_mode(g, 3, Complex64::new(2.0, 0.0)).unwrap();
        let seq = TimeSequence::new(vec![0.7]).unwrap();
        let p = maximal_profile(&f, &seq, 2.0).unwrap();
        let xi = g.frequency(3);
        let s = 0.4;
        // |S f| = 2/L everywhere, ‖f‖_{H^s} = (1+ξ²)^{s/2}·‖f‖₂
        let expected = (1.0 + xi * xi).powf(-s / 2.0);
        assert_relative_eq!(ratio_hs(&f, &p, s, None).unwrap(), expected, max_relative = 1e-12);
        assert!(ratio_hs(&SpectralFunction::zeros(g), &p, s, None).is_err());
    }
}
