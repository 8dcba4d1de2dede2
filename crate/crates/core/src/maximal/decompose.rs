//! Envelopes `E_1, E_2, E_3` splitting `sup_n |S^a f(x, t_n)|` by the
//! position of the frequency band relative to the time bucket.
//!
//! For `a != 1` and `n` in bucket `l`:
//! `E_1` sums bands `k < l/(1+2r)`, `E_2` bands `l/(1+2r) <= k < l` and
//! `E_3` bands `k >= l`, each followed by `sup_l sup_n |·|`.
//! For `a = 1`, with `A_{l,k}(x) = sup_{n ∈ N(l)} |S^1 P_k f(x, t_n)|`,
//! `E_1 = Σ_{j>=0} (Σ_{l>=j} A_{l,l-j}²)^{1/2}`,
//! `E_2 = Σ_{m>=0} (Σ_l A_{l,l+m}²)^{1/2}` and `E_3 = 0`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{LabError, Result};
use crate::maximal::profile::{kept_times, moduli_at};
use crate::propagator::dispersion;
use crate::sequences::{dyadic_buckets, target_exponent, BucketRegime, TimeSequence};
use crate::spectral::{band_index, FftPair, GridSpec, SpectralFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub grid: GridSpec,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub e3: Vec<f64>,
    /// `‖E_1‖₂, ‖E_2‖₂, ‖E_3‖₂`.
    pub norms: [f64; 3],
    /// `‖E_i‖₂ / ‖f‖_{H^s}`.
    pub ratios: [f64; 3],
    pub a: f64,
    pub r: f64,
    pub s: f64,
    /// Number of sequence times used.
    pub truncation: usize,
}

impl DecompositionReport {
    /// `E_1 + E_2 + E_3` at every grid point.
    pub fn total(&self) -> Vec<f64> {
        self.e1
            .iter()
            .zip(&self.e2)
            .zip(&self.e3)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }

    /// Largest `profile - (E_1 + E_2 + E_3)`; at most zero when the
    /// envelopes dominate.
    pub fn domination_excess(&self, profile: &[f64]) -> f64 {
        self.total()
            .iter()
            .zip(profile)
            .map(|(e, p)| p - e)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn l2(grid: &GridSpec, v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() * grid.dx()).sqrt()
}

fn masked(coeffs: &[Complex64], bands: &[usize], keep: impl Fn(usize) -> bool) -> Vec<Complex64> {
    coeffs
        .iter()
        .zip(bands)
        .map(|(c, &k)| if keep(k) { *c } else { Complex64::new(0.0, 0.0) })
        .collect()
}

struct Envelope {
    values: [Vec<f64>; 3],
}

impl Envelope {
    fn new(n: usize) -> Self {
        Self {
            values: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    fn merge(mut self, other: Envelope) -> Envelope {
        for (mine, theirs) in self.values.iter_mut().zip(other.values) {
            for (m, t) in mine.iter_mut().zip(theirs) {
                *m = m.max(t);
            }
        }
        self
    }
}

pub fn decompose_e123(
    f: &SpectralFunction,
    seq: &TimeSequence,
    a: f64,
    r: f64,
) -> Result<DecompositionReport> {
    let family = dyadic_buckets(seq, a, r)?;
    let grid = *f.grid();
    let n = grid.n_points();
    let (times, _) = kept_times(&grid, seq);
    if times.is_empty() {
        return Err(LabError::InvalidSequence(
            "every time lies below the resolution cutoff".into(),
        ));
    }
    let bands: Vec<usize> = (0..n).map(|i| band_index(grid.frequency(i))).collect();
    let disp = dispersion(f, a);
    let fft = FftPair::new(n);
    // (level, sequence index) for every kept time
    let members: Vec<(u32, usize)> = family
        .buckets
        .iter()
        .flat_map(|(l, idx)| idx.iter().filter(|&&i| i < times.len()).map(move |&i| (*l, i)))
        .collect();

    let [e1, e2, e3] = match family.regime {
        BucketRegime::General => {
            let split = 1.0 + 2.0 * r;
            members
                .par_iter()
                .fold(
                    || (Envelope::new(n), Vec::new(), Vec::new(), Vec::new()),
                    |(mut env, mut buf, mut scratch, mut out), &(l, i)| {
                        let pieces: [Box<dyn Fn(usize) -> bool>; 3] = [
                            Box::new(move |k| (k as f64) * split < l as f64),
                            Box::new(move |k| (k as f64) * split >= l as f64 && k < l as usize),
                            Box::new(move |k| k >= l as usize),
                        ];
                        for (slot, keep) in env.values.iter_mut().zip(pieces) {
                            let piece = f.with_coeffs(masked(f.coeffs(), &bands, keep));
                            moduli_at(&piece, &disp, times[i], &fft, &mut buf, &mut scratch, &mut out);
                            for (e, m) in slot.iter_mut().zip(&out) {
                                *e = e.max(*m);
                            }
                        }
                        (env, buf, scratch, out)
                    },
                )
                .map(|(env, ..)| env)
                .reduce(|| Envelope::new(n), Envelope::merge)
                .values
        }
        BucketRegime::Wave => {
            let top_band = bands.iter().copied().max().unwrap_or(0);
            let live: Vec<bool> = (0..=top_band)
                .map(|k| {
                    f.coeffs()
                        .iter()
                        .zip(&bands)
                        .any(|(c, &b)| b == k && c.norm_sqr() > 0.0)
                })
                .collect();
            let levels: Vec<(u32, Vec<usize>)> = family
                .buckets
                .iter()
                .map(|(l, idx)| (*l, idx.iter().copied().filter(|&i| i < times.len()).collect()))
                .filter(|(_, idx): &(u32, Vec<usize>)| !idx.is_empty())
                .collect();
            let max_level = levels.last().map(|(l, _)| *l as usize).unwrap_or(0);

            // A_{l,k} for a single pair
            let sup_over = |idx: &[usize], k: usize| -> Vec<f64> {
                let piece = f.with_coeffs(masked(f.coeffs(), &bands, |b| b == k));
                let (mut buf, mut scratch, mut out) = (Vec::new(), Vec::new(), Vec::new());
                let mut best = vec![0.0f64; n];
                for &i in idx {
                    moduli_at(&piece, &disp, times[i], &fft, &mut buf, &mut scratch, &mut out);
                    for (b, m) in best.iter_mut().zip(&out) {
                        *b = b.max(*m);
                    }
                }
                best
            };
            // one diagonal: Σ over levels of A_{l,k(l)}², then the square root
            let diagonal = |band_of: &(dyn Fn(usize) -> Option<usize> + Sync)| -> Vec<f64> {
                let mut acc = vec![0.0f64; n];
                for (l, idx) in &levels {
                    let Some(k) = band_of(*l as usize) else { continue };
                    if k > top_band || !live[k] {
                        continue;
                    }
                    for (s, v) in acc.iter_mut().zip(sup_over(idx, k)) {
                        *s += v * v;
                    }
                }
                acc.into_iter().map(f64::sqrt).collect()
            };
            let lower: Vec<Vec<f64>> = (0..=max_level)
                .into_par_iter()
                .map(|j| diagonal(&move |l: usize| l.checked_sub(j)))
                .collect();
            let upper: Vec<Vec<f64>> = (0..=top_band)
                .into_par_iter()
                .map(|m| diagonal(&move |l: usize| Some(l + m)))
                .collect();
            let sum = |parts: Vec<Vec<f64>>| {
                parts.into_iter().fold(vec![0.0; n], |mut acc, p| {
                    for (a, v) in acc.iter_mut().zip(p) {
                        *a += v;
                    }
                    acc
                })
            };
            [sum(lower), sum(upper), vec![0.0; n]]
        }
    };

    let s = target_exponent(a, r);
    let hs = f.sobolev_norm(s);
    let norms = [l2(&grid, &e1), l2(&grid, &e2), l2(&grid, &e3)];
    let ratios = norms.map(|v| if hs > 0.0 { v / hs } else { 0.0 });
    Ok(DecompositionReport {
        grid,
        e1,
        e2,
        e3,
        norms,
        ratios,
        a,
        r,
        s,
        truncation: times.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximal::profile::maximal_profile;
    use crate::sequences::{generate_sequence, Generator};
    use crate::spectral::build_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_f(seed: u64) -> SpectralFunction {
        let g = build_grid(512, 8.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SpectralFunction::random(g, 60.0, 0.75, &mut rng)
    }

    #[test]
    fn envelopes_dominate_profile() {
        let seq = generate_sequence(Generator::Power { gamma: 1.0 }, 300).unwrap();
        for a in [2.0, 0.5, 1.0] {
            let f = random_f(3);
            let p = maximal_profile(&f, &seq, a).unwrap();
            let d = decompose_e123(&f, &seq, a, 1.0).unwrap();
            assert!(d.domination_excess(&p.values) <= 1e-8, "a = {a}");
        }
    }

    #[test]
    fn high_band_lives_in_e3() {
        let seq = generate_sequence(Generator::Power { gamma: 1.0 }, 50).unwrap();
        let family = dyadic_buckets(&seq, 2.0, 1.0).unwrap();
        let top = family.max_level().unwrap() as usize;
        let g = build_grid(1 << (top + 4), 2.0 * PI).unwrap();
        // one mode in band top+1
        let m = 3i64 << top;
        assert_eq!(band_index(m as f64), top + 2);
        let f = SpectralFunction::single_mode(g, m, Complex64::new(1.0, 0.0)).unwrap();
        let d = decompose_e123(&f, &seq, 2.0, 1.0).unwrap();
        assert!(d.e1.iter().all(|v| *v == 0.0));
        assert!(d.e2.iter().all(|v| *v == 0.0));
        assert!(d.norms[2] > 0.0);
    }

    #[test]
    fn wave_case_has_no_third_piece() {
        let seq = generate_sequence(Generator::Power { gamma: 1.0 }, 100).unwrap();
        let d = decompose_e123(&random_f(5), &seq, 1.0, 1.0).unwrap();
        assert_eq!(d.norms[2], 0.0);
        assert!((d.s - 0.25).abs() < 1e-15);
    }
}
