//! Upper bounds on the stopping redundancy and its hierarchy.

mod counting;
mod hierarchy;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::combin::{binomial, decimal};
use crate::error::{invalid, Result};
use crate::stopping::StoppingSpectrum;

pub use counting::{count_fullrank, count_fullrank_no_weight1, sre_mean_spectrum, stirling2, MeanSpectrum};
pub use hierarchy::{
    ensemble_bound, hierarchy_bound_xi1, ln_pi_product, xi2_bound, xi2_objective, RankParam, SearchOptions,
};

/// `pi(r, i, j) = 1 - i 2^(r-i) / (2^r - j)`, evaluated as
/// `1 - (i / 2^i) / (1 - j 2^-r)` so that it stays finite for large `r`.
pub fn pi(r: usize, i: usize, j: u64) -> Result<f64> {
    if r < 64 && j >= 1u64 << r {
        return Err(invalid(format!("pi needs j < 2^r, got j = {j}, r = {r}")));
    }
    Ok(pi_unchecked(r, i, j))
}

#[inline]
pub(crate) fn pi_unchecked(r: usize, i: usize, j: u64) -> f64 {
    let c = i as f64 * (-(i as f64)).exp2();
    let x = j as f64 * (-(r as f64)).exp2();
    1.0 - c / (1.0 - x)
}

/// `pi` clamped at zero: once a factor reaches zero the product it belongs
/// to is zero for good.
#[inline]
pub(crate) fn pi_clamped(r: usize, i: usize, j: u64) -> f64 {
    pi_unchecked(r, i, j).max(0.0)
}

/// A bound value: an exact integer or a real number. Serialized as a decimal
/// string.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Exact(BigUint),
    Real(f64),
}

impl BoundValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            BoundValue::Real(x) => *x,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            BoundValue::Exact(v) => v.to_u64(),
            BoundValue::Real(_) => None,
        }
    }
}

impl From<u64> for BoundValue {
    fn from(v: u64) -> Self {
        BoundValue::Exact(BigUint::from(v))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self, f.precision()) {
            (BoundValue::Exact(v), _) => v.to_string(),
            (BoundValue::Real(x), Some(p)) => format!("{x:.p$}"),
            (BoundValue::Real(x), None) => x.to_string(),
        };
        match f.width() {
            Some(w) => write!(f, "{s:>w$}"),
            None => f.write_str(&s),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BoundValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text.bytes().all(|b| b.is_ascii_digit()) && !text.is_empty() {
            BigUint::from_str(&text)
                .map(BoundValue::Exact)
                .map_err(serde::de::Error::custom)
        } else {
            f64::from_str(&text).map(BoundValue::Real).map_err(serde::de::Error::custom)
        }
    }
}

/// Parameters of the optimum found by a hierarchy bound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub tau: usize,
    pub t_star: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_at_t_star: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
}

/// Inputs echoed into a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// The rank-like parameter the bound was evaluated with (`r` or `m`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_param: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tau: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: BoundValue,
    /// Unrounded objective for bounds reported as integers after rounding.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub params: BoundParams,
    /// `false` when the optimum over `t` came from the large-`t` search
    /// rather than an exhaustive scan.
    pub exhaustive_t_search: bool,
}

/// `sum_{i=1}^{d-2} C(r, i)`, or `r` when `d <= 3` since any full-rank
/// parity-check matrix then has no small stopping sets.
pub fn sv_bound(r: usize, d: usize) -> BigUint {
    if d <= 3 {
        return BigUint::from(r);
    }
    (1..d - 1).map(|i| binomial(r, i)).sum()
}

pub fn sv_report(r: usize, d: usize) -> BoundReport {
    BoundReport {
        name: "sv".into(),
        value: BoundValue::Exact(sv_bound(r, d)),
        real_value: None,
        witness: None,
        params: BoundParams {
            d: Some(d),
            rank_param: Some(r),
            ..Default::default()
        },
        exhaustive_t_search: true,
    }
}

fn hs_excess(n: usize, d: usize, t: u64) -> f64 {
    (1..d)
        .map(|i| {
            let q = (-(i as f64) * (-(i as f64)).exp2()).ln_1p();
            (crate::combin::ln_binomial(n, i) + t as f64 * q).exp()
        })
        .sum()
}

/// `min { t : sum_{i=1}^{d-1} C(n,i) (1 - i/2^i)^t < 1 } + r - d + 1`, with the
/// minimum located by doubling and bisection. Returns the report with `t` as
/// witness.
pub fn hs_bound(n: usize, d: usize, r: usize) -> Result<BoundReport> {
    if d < 2 || r + 1 < d || d > n {
        return Err(invalid(format!("hs bound needs 2 <= d <= n and r >= d - 1 (n={n}, d={d}, r={r})")));
    }
    if d <= 3 {
        return Ok(BoundReport {
            name: "hs".into(),
            value: (r as u64).into(),
            real_value: None,
            witness: None,
            params: BoundParams {
                n: Some(n),
                d: Some(d),
                rank_param: Some(r),
                ..Default::default()
            },
            exhaustive_t_search: true,
        });
    }
    let mut hi: u64 = 1;
    while hs_excess(n, d, hi) >= 1.0 {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // invariant: excess(lo) >= 1 > excess(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if hs_excess(n, d, mid) < 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let value = hi + (r + 1 - d) as u64;
    Ok(BoundReport {
        name: "hs".into(),
        value: value.into(),
        real_value: None,
        witness: Some(Witness {
            tau: 0,
            t_star: hi,
            ..Default::default()
        }),
        params: BoundParams {
            n: Some(n),
            d: Some(d),
            rank_param: Some(r),
            ..Default::default()
        },
        exhaustive_t_search: true,
    })
}

fn spectrum_from_signed(n: usize, values: Vec<BigInt>) -> StoppingSpectrum {
    let counts = values
        .into_iter()
        .map(|v| v.to_biguint().expect("count is non-negative"))
        .collect();
    StoppingSpectrum::new(n, counts, false, true)
}

/// Size-`i` subsets not covered by a single row of weight `w`:
/// `u_i = C(n,i) - w C(n-w, i-1)` for `i = 1..=ell`.
pub fn u_single_row(n: usize, w: usize, ell: usize) -> Result<StoppingSpectrum> {
    if w == 0 || w > n {
        return Err(invalid(format!("row weight {w} outside 1..={n}")));
    }
    let values = (1..=ell)
        .map(|i| BigInt::from(binomial(n, i)) - BigInt::from(w) * BigInt::from(binomial(n - w, i - 1)))
        .collect();
    Ok(spectrum_from_signed(n, values))
}

/// Size-`i` subsets covered by neither of two weight-`w` rows whose supports
/// share `delta` positions.
pub fn u_two_rows(n: usize, w: usize, delta: usize, ell: usize) -> Result<StoppingSpectrum> {
    if w == 0 || delta > w || 2 * w - delta > n {
        return Err(invalid(format!(
            "inconsistent two-row parameters n={n}, w={w}, delta={delta}"
        )));
    }
    let rest = n - 2 * w + delta;
    let big = |v: BigUint| BigInt::from(v);
    let values = (1..=ell)
        .map(|i| {
            let mut u = big(binomial(n, i)) - BigInt::from(2 * w) * big(binomial(n - w, i - 1))
                + BigInt::from(delta) * big(binomial(rest, i - 1));
            if i >= 2 {
                u += BigInt::from((w - delta) * (w - delta)) * big(binomial(rest, i - 2));
            }
            u
        })
        .collect();
    Ok(spectrum_from_signed(n, values))
}

/// The two candidate maximizers of `F(w) = w sum_{i=0}^{ell-1} C(n-w, i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCandidates {
    pub low: usize,
    pub high: usize,
    #[serde(with = "decimal")]
    pub f_low: BigUint,
    #[serde(with = "decimal")]
    pub f_high: BigUint,
}

impl WeightCandidates {
    /// The better of the two candidates (the smaller weight on ties).
    pub fn best(&self) -> usize {
        if self.f_high > self.f_low {
            self.high
        } else {
            self.low
        }
    }
}

/// `F(w) = w sum_{i=0}^{ell-1} C(n-w, i)`.
pub fn first_row_objective(n: usize, ell: usize, w: usize) -> BigUint {
    let s: BigUint = (0..ell).map(|i| binomial(n - w, i)).sum();
    s * w
}

/// `floor((n+1)/ell)` and `ceil(n/ell)` with their `F` values.
pub fn w_opt_candidates(n: usize, ell: usize) -> Result<WeightCandidates> {
    if ell < 2 || ell > n {
        return Err(invalid(format!("need 2 <= ell <= n, got ell={ell}, n={n}")));
    }
    let low = (n + 1) / ell;
    let high = n.div_ceil(ell);
    Ok(WeightCandidates {
        low,
        high,
        f_low: first_row_objective(n, ell, low),
        f_high: first_row_objective(n, ell, high),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn pi_examples() {
        assert_eq!(pi(1, 1, 1).unwrap(), 0.0);
        assert!((pi(12, 1, 1).unwrap() - 2047.0 / 4095.0).abs() < 1e-15);
        assert!(pi(3, 1, 8).is_err());
        assert!(pi(2000, 5, 1 << 40).unwrap() > 0.0);
    }

    #[test]
    fn sv_values() {
        assert_eq!(sv_bound(12, 8), BigUint::from(2509u32));
        assert_eq!(sv_bound(24, 12), BigUint::from(4_540_385u32));
        assert_eq!(sv_bound(12, 2), BigUint::from(12u32));
        assert_eq!(sv_bound(12, 3), BigUint::from(12u32));
        assert_eq!(hs_bound(20, 3, 12).unwrap().value.to_string(), "12");
        let tanner = sv_bound(91, 20).to_f64().unwrap();
        assert!((tanner / 1e18 - 6.2).abs() < 0.05, "{tanner}");
    }

    #[test]
    fn hs_values() {
        assert_eq!(hs_bound(24, 8, 12).unwrap().value.as_u64(), Some(232));
        assert_eq!(hs_bound(48, 12, 24).unwrap().value.as_u64(), Some(4440));
        assert_eq!(hs_bound(155, 20, 91).unwrap().value.as_u64(), Some(1_526_972));
    }

    #[test]
    fn single_row_examples() {
        let u = u_single_row(24, 8, 7).unwrap();
        assert_eq!(u.u(1), &BigUint::from(16u32));
        let all = u_single_row(9, 9, 3).unwrap();
        assert!(all.u(1).is_zero());
    }

    #[test]
    fn two_row_examples() {
        let u = u_two_rows(6, 2, 0, 2).unwrap();
        assert_eq!(u.as_f64(), vec![2.0, 3.0]);
        assert_eq!(u_two_rows(10, 3, 3, 5).unwrap(), u_single_row(10, 3, 5).unwrap());
        assert!(u_two_rows(4, 3, 1, 2).is_err());
    }

    #[test]
    fn weight_candidates() {
        let c = w_opt_candidates(24, 7).unwrap();
        assert_eq!((c.low, c.high), (3, 4));
        let c = w_opt_candidates(12, 12).unwrap();
        assert_eq!((c.low, c.high), (1, 1));
    }

    #[test]
    fn bound_value_serde() {
        let v = BoundValue::from(2509);
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"2509\"");
        let r: BoundValue = serde_json::from_str("\"34.75\"").unwrap();
        assert_eq!(r, BoundValue::Real(34.75));
    }
}
