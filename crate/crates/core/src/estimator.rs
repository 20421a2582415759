//! Monte Carlo estimates of coverable-stopping-set counts with a corrected
//! one-sided upper confidence limit.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{EnsembleSpec, LinearCode};
use crate::columns::ColumnSet;
use crate::combin::{binomial, decimal};
use crate::error::{invalid, Result};
use crate::gf2::BinaryMatrix;
use crate::rng::{floyd_mask, floyd_subset, stream_rng, CHUNK};
use crate::stopping::{is_coverable, is_stopping_set, Checker, StoppingSpectrum};

const CODE_STREAM: u64 = 0x4553_5443;
const ENSEMBLE_STREAM: u64 = 0x4553_5445;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `Phi^{-1}(q)`: Acklam's rational approximation followed by one Newton
/// step on `Phi`.
pub fn inverse_normal_cdf(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(invalid(format!("quantile {q} outside (0, 1)")));
    }
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    let low = 0.02425;
    let tail = |p: f64| {
        let s = (-2.0 * p.ln()).sqrt();
        (((((C[0] * s + C[1]) * s + C[2]) * s + C[3]) * s + C[4]) * s + C[5])
            / ((((D[0] * s + D[1]) * s + D[2]) * s + D[3]) * s + 1.0)
    };
    let mut x = if q < low {
        tail(q)
    } else if q > 1.0 - low {
        -tail(1.0 - q)
    } else {
        let s = q - 0.5;
        let r = s * s;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * s
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if density > 0.0 {
        x -= (normal_cdf(x) - q) / density;
    }
    Ok(x)
}

/// Upper confidence limit for a frequency `x_bar` from `samples` trials at
/// level `1 - epsilon`, as a fraction in `[0, 1]`.
pub fn upper_confidence_fraction(x_bar: f64, samples: u64, epsilon: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x_bar) {
        return Err(invalid(format!("frequency {x_bar} outside [0, 1]")));
    }
    if samples == 0 {
        return Err(invalid("at least one sample is needed"));
    }
    let kappa = inverse_normal_cdf(1.0 - epsilon)?;
    let n = samples as f64;
    let k2 = kappa * kappa;
    let eta = k2 / 3.0 + 1.0 / 6.0;
    let x_tilde = (n * x_bar + eta) / (n + 2.0 * eta);
    let gamma1 = -13.0 * k2 / 18.0 - 17.0 / 18.0;
    let gamma2 = k2 / 18.0 + 7.0 / 36.0;
    let v = x_bar * (1.0 - x_bar);
    let spread = (v / n + (gamma1 * v + gamma2) / (n * n)).max(0.0).sqrt();
    Ok((x_tilde + kappa * spread).clamp(0.0, 1.0))
}

/// `floor(total * fraction)` with the fraction from
/// [`upper_confidence_fraction`], capped at `total`.
pub fn upper_confidence_count(x_bar: f64, samples: u64, epsilon: f64, total: &BigUint) -> Result<BigUint> {
    let frac = upper_confidence_fraction(x_bar, samples, epsilon)?;
    let count = match total.to_u64().filter(|&t| t < 1 << 53) {
        Some(t) => BigUint::from((t as f64 * frac).floor() as u64),
        None => {
            // fraction as a 53-bit dyadic rational
            let scaled = BigUint::from((frac * (1u64 << 53) as f64).floor() as u64);
            (total * scaled) >> 53
        }
    };
    Ok(count.min(total.clone()))
}

/// Per-size error probability giving overall confidence `c` over `ell`
/// independent sizes: `1 - c^(1/ell)`.
pub fn epsilon_for_confidence(confidence: f64, ell: usize) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) || ell == 0 {
        return Err(invalid("confidence must lie in (0, 1) and ell must be positive"));
    }
    Ok(1.0 - confidence.powf(1.0 / ell as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeEstimate {
    pub i: usize,
    pub samples: u64,
    pub successes: u64,
    pub x_bar: f64,
    pub epsilon: f64,
    pub kappa: f64,
    #[serde(with = "decimal")]
    pub total: BigUint,
    #[serde(with = "decimal")]
    pub u_hat: BigUint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationResult {
    pub n: usize,
    pub seed: u64,
    /// Probability that every per-size limit holds, `prod (1 - epsilon_i)`.
    pub confidence: f64,
    pub sizes: Vec<SizeEstimate>,
}

impl EstimationResult {
    /// Builds the per-size limits from observed success counts.
    pub fn from_counts(n: usize, seed: u64, samples: &[u64], successes: &[u64], epsilon: &[f64]) -> Result<Self> {
        if samples.len() != successes.len() || samples.len() != epsilon.len() {
            return Err(invalid("samples, successes and epsilon need one entry per size"));
        }
        let mut sizes = Vec::with_capacity(samples.len());
        for (k, ((&s, &x), &e)) in samples.iter().zip(successes).zip(epsilon).enumerate() {
            let i = k + 1;
            let total = binomial(n, i);
            let x_bar = x as f64 / s as f64;
            sizes.push(SizeEstimate {
                i,
                samples: s,
                successes: x,
                x_bar,
                epsilon: e,
                kappa: inverse_normal_cdf(1.0 - e)?,
                u_hat: upper_confidence_count(x_bar, s, e, &total)?,
                total,
            });
        }
        let confidence = epsilon.iter().map(|e| 1.0 - e).product();
        Ok(Self {
            n,
            seed,
            confidence,
            sizes,
        })
    }

    /// The upper limits as an inexact spectrum.
    pub fn to_spectrum(&self) -> StoppingSpectrum {
        StoppingSpectrum::new(self.n, self.sizes.iter().map(|s| s.u_hat.clone()).collect(), true, false)
    }

    /// The upper limits as floats.
    pub fn u_hat_f64(&self) -> Vec<f64> {
        self.sizes.iter().map(|s| s.u_hat.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    /// CSV with columns `i,count,total,exact,samples,successes,x_bar,epsilon`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "count", "total", "exact", "samples", "successes", "x_bar", "epsilon"])?;
        for s in &self.sizes {
            w.write_record([
                s.i.to_string(),
                s.u_hat.to_string(),
                s.total.to_string(),
                "false".to_string(),
                s.samples.to_string(),
                s.successes.to_string(),
                s.x_bar.to_string(),
                s.epsilon.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn validate(n: usize, ell: usize, samples: &[u64], epsilon: &[f64]) -> Result<()> {
    if ell == 0 || ell > n {
        return Err(invalid(format!("ell = {ell} outside 1..={n}")));
    }
    if samples.len() != ell || epsilon.len() != ell {
        return Err(invalid("samples and epsilon need one entry per size"));
    }
    if samples.contains(&0) {
        return Err(invalid("sample sizes must be positive"));
    }
    if epsilon.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(invalid("epsilon values must lie in (0, 1)"));
    }
    Ok(())
}

/// Runs `trials` seeded trials in fixed chunks and sums the successes.
fn run_chunks(seed: u64, tag: &[u64], trials: u64, trial: impl Fn(&mut crate::rng::StreamRng) -> bool + Sync) -> u64 {
    (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut path = tag.to_vec();
            path.push(chunk);
            let mut rng = stream_rng(seed, &path);
            (0..CHUNK.min(trials - chunk * CHUNK))
                .filter(|_| trial(&mut rng))
                .count() as u64
        })
        .sum()
}

/// Estimates the number of coverable stopping sets of each size `1..=ell` of
/// the code's parity-check matrix from uniform random subsets.
pub fn estimate_spectrum(
    code: &LinearCode,
    ell: usize,
    samples: &[u64],
    epsilon: &[f64],
    seed: u64,
) -> Result<EstimationResult> {
    let n = code.n();
    validate(n, ell, samples, epsilon)?;
    let checker = Checker::new(code.parity_check());
    let successes: Vec<u64> = (1..=ell)
        .map(|i| {
            run_chunks(seed, &[CODE_STREAM, i as u64], samples[i - 1], |rng| {
                if checker.has_masks() {
                    let s = floyd_mask(rng, n, i);
                    checker.is_stopping_mask(s) && checker.is_coverable_mask(s)
                } else {
                    let set = floyd_subset(rng, n, i);
                    let words = set.as_vector().words();
                    checker.is_stopping_words(words) && checker.is_coverable_words(words)
                }
            })
        })
        .collect();
    EstimationResult::from_counts(n, seed, samples, &successes, epsilon)
}

/// Whether `set` is a coverable stopping set of `h`, reading only the
/// columns in `set`.
fn coverable_stopping(h: &BinaryMatrix, set: &ColumnSet) -> bool {
    if let (Some(s), true) = (set.as_mask(), h.rows() <= 64) {
        let mut cols = [0u64; 64];
        let idx: Vec<usize> = set.iter().collect();
        for r in 0..h.rows() {
            let x = h.row_words(r)[0] & s;
            if x != 0 && x & (x - 1) == 0 {
                return false;
            }
            for (k, &c) in idx.iter().enumerate() {
                cols[k] |= ((x >> c) & 1) << r;
            }
        }
        return crate::gf2::rank_of_words(&mut cols[..idx.len()]) == idx.len();
    }
    is_stopping_set(h, set) && is_coverable(h, set)
}

/// Ensemble version: every trial draws a fresh matrix and, independently, a
/// uniform subset. The limits bound the ensemble-average counts.
pub fn estimate_ensemble_spectrum(
    spec: &EnsembleSpec,
    ell: usize,
    samples: &[u64],
    epsilon: &[f64],
    seed: u64,
) -> Result<EstimationResult> {
    spec.validate()?;
    let n = spec.n();
    validate(n, ell, samples, epsilon)?;
    let successes: Vec<u64> = (1..=ell)
        .map(|i| {
            run_chunks(seed, &[ENSEMBLE_STREAM, i as u64], samples[i - 1], |rng| {
                let h = spec.sample_matrix(rng);
                let set = floyd_subset(rng, n, i);
                !set.is_empty() && coverable_stopping(&h, &set)
            })
        })
        .collect();
    EstimationResult::from_counts(n, seed, samples, &successes, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::golay_extended;

    #[test]
    fn quantiles() {
        assert!(inverse_normal_cdf(0.5).unwrap().abs() < 1e-15);
        assert!((inverse_normal_cdf(0.999).unwrap() - 3.090232306167813).abs() < 1e-9);
        for q in [1e-9, 0.001, 0.02, 0.3, 0.77, 0.98, 0.999999] {
            let x = inverse_normal_cdf(q).unwrap();
            assert!((normal_cdf(x) - q).abs() < 1e-10 * q.max(1e-3), "{q}");
        }
        assert!(inverse_normal_cdf(0.0).is_err());
        assert!(inverse_normal_cdf(1.0).is_err());
    }

    #[test]
    fn table_cells() {
        let c = |x: f64, n: u64, total: u64| {
            upper_confidence_count(x, n, 0.001, &BigUint::from(total)).unwrap().to_u64().unwrap()
        };
        assert_eq!(c(0.01, 1000, 10626), 247);
        assert_eq!(c(0.0, 1000, 276), 1);
        assert_eq!(c(0.0, 1000, 2024), 12);
        assert_eq!(c(0.0, 1000, 24), 0);
        assert_eq!(c(0.010314, 1_000_000, 10626), 112);
    }

    #[test]
    fn big_totals_use_exact_scaling() {
        let total = binomial(200, 100);
        let u = upper_confidence_count(0.25, 1000, 0.01, &total).unwrap();
        let ratio = crate::combin::ratio_f64(&u, &total);
        let frac = upper_confidence_fraction(0.25, 1000, 0.01).unwrap();
        assert!((ratio - frac).abs() < 1e-12);
    }

    #[test]
    fn golay_small_sizes_never_succeed() {
        let g = golay_extended();
        let r = estimate_spectrum(&g, 3, &[2000; 3], &[0.001; 3], 5).unwrap();
        assert!(r.sizes.iter().all(|s| s.successes == 0));
        let again = estimate_spectrum(&g, 3, &[2000; 3], &[0.001; 3], 5).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn ensemble_size_one_never_succeeds() {
        let spec = EnsembleSpec::Sre { n: 6, m: 3 };
        let r = estimate_ensemble_spectrum(&spec, 1, &[5000], &[0.01], 3).unwrap();
        assert_eq!(r.sizes[0].successes, 0);
    }

    #[test]
    fn epsilon_split() {
        let e = epsilon_for_confidence(0.95, 10).unwrap();
        assert!(((1.0 - e).powi(10) - 0.95).abs() < 1e-12);
    }
}
