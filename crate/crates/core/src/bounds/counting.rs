//! Exact counts of binary matrices and the mean spectrum of the standard
//! random ensemble.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, ratio_f64};
use crate::error::{invalid, Result};

/// Stirling numbers of the second kind `S(x, y)`, by the recurrence
/// `S(x, y) = y S(x-1, y) + S(x-1, y-1)`.
pub fn stirling2(x: usize, y: usize) -> BigUint {
    if y > x {
        return BigUint::zero();
    }
    stirling_table(x).swap_remove(x).swap_remove(y)
}

/// `table[a][b] = S(a, b)` for `0 <= b <= a <= max`.
fn stirling_table(max: usize) -> Vec<Vec<BigUint>> {
    let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(max + 1);
    table.push(vec![BigUint::one()]);
    for a in 1..=max {
        let prev = &table[a - 1];
        let mut row = vec![BigUint::zero(); a + 1];
        for b in 1..=a {
            let mut v = if b < a { &prev[b] * b } else { BigUint::zero() };
            v += &prev[b - 1];
            row[b] = v;
        }
        table.push(row);
    }
    table
}

/// `M(m, i)`: full-rank `m x i` binary matrices, `prod_{t<i} (2^m - 2^t)`.
pub fn count_fullrank(m: usize, i: usize) -> Result<BigUint> {
    if m < i {
        return Err(invalid(format!("need m >= i, got m={m}, i={i}")));
    }
    let two_m = BigUint::one() << m;
    Ok((0..i).map(|t| &two_m - (BigUint::one() << t)).product())
}

/// `N(m, i)`: full-rank `m x i` binary matrices without rows of weight one,
/// `sum_k C(i,k) k! sum_p (-1)^(m-p) C(m,p) 2^(kp) S(m-p,k) prod_{t<i-k} (2^p - 2^t)`.
pub fn count_fullrank_no_weight1(m: usize, i: usize) -> Result<BigUint> {
    if m < i {
        return Err(invalid(format!("need m >= i, got m={m}, i={i}")));
    }
    let stirling = stirling_table(m);
    let mut total = BigInt::zero();
    let mut k_factorial = BigUint::one();
    for k in 0..=i {
        if k > 0 {
            k_factorial *= k;
        }
        let outer = BigInt::from(binomial(i, k) * &k_factorial);
        let mut inner = BigInt::zero();
        for p in 0..=m {
            if k > m - p {
                continue;
            }
            let s = &stirling[m - p][k];
            if s.is_zero() {
                continue;
            }
            // prod_{t < i-k} (2^p - 2^t) vanishes as soon as t reaches p
            if i - k > p {
                continue;
            }
            let prod: BigUint = (0..i - k).map(|t| (BigUint::one() << p) - (BigUint::one() << t)).product();
            let term = BigInt::from(binomial(m, p) * s * prod) << (k * p);
            if (m - p).is_multiple_of(2) {
                inner += term;
            } else {
                inner -= term;
            }
        }
        total += outer * inner;
    }
    Ok(total.to_biguint().expect("count is non-negative"))
}

/// Mean coverable-stopping-set counts over the standard random ensemble of
/// `m x n` matrices: `values[i-1] = C(n,i) N(m,i) / 2^(mi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanSpectrum {
    pub n: usize,
    pub m: usize,
    pub values: Vec<f64>,
}

pub fn sre_mean_spectrum(n: usize, m: usize, ell: usize) -> Result<MeanSpectrum> {
    if ell > m {
        return Err(invalid(format!("ell = {ell} exceeds m = {m}")));
    }
    let values = (1..=ell)
        .map(|i| {
            let num = binomial(n, i) * count_fullrank_no_weight1(m, i)?;
            Ok(ratio_f64(&num, &(BigUint::one() << (m * i))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeanSpectrum { n, m, values })
}
