//! Binomial coefficients in exact and floating arithmetic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// `C(n, k)` exactly; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// `C(n, k)` when it fits in 128 bits.
pub fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) is divisible by (j + 1); split to delay overflow
        let num = (n - j) as u128;
        let den = (j + 1) as u128;
        let g = gcd(acc, den);
        acc = (acc / g).checked_mul(num / (den / g))?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `sum_{k in sizes} C(n, k)` saturating at `u128::MAX`.
pub fn subsets_up_to(n: usize, sizes: impl IntoIterator<Item = usize>) -> u128 {
    sizes.into_iter().fold(0u128, |acc, k| {
        acc.saturating_add(binomial_u128(n, k).unwrap_or(u128::MAX))
    })
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// `C(n, k)` as a float (may be `inf` for huge arguments).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    match binomial_u128(n, k) {
        Some(v) => v as f64,
        None => binomial(n, k).to_f64().unwrap_or(f64::INFINITY),
    }
}

/// Ratio `a / b` of big integers as a float, exact to double rounding for
/// arbitrarily large operands.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(1000);
    let a = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
    let b = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
    a / b
}

/// Serde helpers writing big integers as decimal strings.
pub(crate) mod decimal {
    use std::str::FromStr;

    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::from_str(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| BigUint::from_str(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
