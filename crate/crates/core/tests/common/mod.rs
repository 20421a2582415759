//! Independent oracles shared by the integration tests and the acceptance
//! harness. Nothing here calls into the library's counting code.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use stopred::gf2::BinaryMatrix;

/// `C(x, t)` for a possibly large non-negative `x`, by the falling factorial.
pub fn binom_big(x: &BigInt, t: u64) -> BigInt {
    if x.sign() == num_bigint::Sign::Minus {
        panic!("negative upper argument");
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..t {
        num *= x - BigInt::from(k);
        den *= BigInt::from(k + 1);
    }
    num / den
}

/// Both sides of `C(2^r - tau - 1 - a, t) / C(2^r - tau - 1, t) =
/// prod_{j=tau+1}^{tau+t} (1 - a / (2^r - j))` with `a = i 2^(r-i)`, as exact
/// rationals. Requires `tau + t < 2^r` and `2^r - tau - 1 >= a`.
pub fn ratio_product_sides(r: u32, i: u32, tau: u64, t: u64) -> (BigRational, BigRational) {
    let two_r = BigInt::one() << r;
    let a = BigInt::from(i) << (r - i);
    let y = &two_r - BigInt::from(tau) - 1;
    let lhs = BigRational::new(binom_big(&(&y - &a), t), binom_big(&y, t));
    let mut rhs = BigRational::one();
    for j in tau + 1..=tau + t {
        let den = &two_r - BigInt::from(j);
        rhs *= BigRational::new(&den - &a, den);
    }
    (lhs, rhs)
}

/// Rank of a set of bit rows.
pub fn rank_u64(rows: &[u64]) -> usize {
    let mut v = rows.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        let Some(p) = (rank..v.len()).find(|&k| v[k] >> bit & 1 == 1) else {
            continue;
        };
        v.swap(rank, p);
        for k in 0..v.len() {
            if k != rank && v[k] >> bit & 1 == 1 {
                v[k] ^= v[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// `(M(m, i), N(m, i))` by visiting all `2^(mi)` matrices: full-rank `m x i`
/// matrices, and those among them without a row of weight one.
pub fn brute_fullrank_counts(m: usize, i: usize) -> (BigUint, BigUint) {
    let mut full = 0u64;
    let mut no_unit = 0u64;
    let row_mask = (1u64 << i) - 1;
    for bits in 0u64..(1u64 << (m * i)) {
        let rows: Vec<u64> = (0..m).map(|k| (bits >> (k * i)) & row_mask).collect();
        if rank_u64(&rows) != i {
            continue;
        }
        full += 1;
        if rows.iter().all(|r| r.count_ones() != 1) {
            no_unit += 1;
        }
    }
    (BigUint::from(full), BigUint::from(no_unit))
}

/// Whether no row of `h` meets `s` in exactly one position (`s` nonempty).
pub fn stopping_by_rows(h: &BinaryMatrix, s: u64) -> bool {
    s != 0
        && (0..h.rows()).all(|r| (h.row_words(r).first().copied().unwrap_or(0) & s).count_ones() != 1)
}

/// Union of every stopping set contained in `e`, by scanning all subsets.
pub fn union_of_stopping_subsets(h: &BinaryMatrix, e: u64) -> u64 {
    let mut union = 0u64;
    let mut s = e;
    while s != 0 {
        if stopping_by_rows(h, s) {
            union |= s;
        }
        s = (s - 1) & e;
    }
    union
}

/// Whether the columns of `h` selected by `s` are linearly independent.
pub fn columns_independent(h: &BinaryMatrix, s: u64) -> bool {
    let cols: Vec<u64> = (0..h.cols())
        .filter(|&c| s >> c & 1 == 1)
        .map(|c| (0..h.rows()).fold(0u64, |acc, r| acc | (u64::from(h.get(r, c)) << r)))
        .collect();
    rank_u64(&cols) == cols.len()
}

/// Whether each `|E|`-tuple appears `2^(r - |E|)` times among the dual
/// codewords restricted to `E`.
pub fn is_orthogonal_array(h: &BinaryMatrix, e: &[usize]) -> bool {
    let r = h.rank();
    if e.len() > r {
        return false;
    }
    let mut hist = vec![0u64; 1 << e.len()];
    for v in h.row_space_iter(20).expect("small rank") {
        let key = e.iter().enumerate().fold(0usize, |acc, (k, &c)| acc | (usize::from(v.get(c)) << k));
        hist[key] += 1;
    }
    let want = 1u64 << (r - e.len());
    hist.iter().all(|&c| c == want)
}

/// Random `m x n` matrix strategy with `n <= 64`.
pub fn matrix_strategy(m: std::ops::RangeInclusive<usize>, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = BinaryMatrix> {
    (m, n).prop_flat_map(|(m, n)| {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        proptest::collection::vec(any::<u64>(), m).prop_map(move |rows| {
            let rows: Vec<u64> = rows.into_iter().map(|r| r & mask).collect();
            BinaryMatrix::from_row_masks(n, &rows)
        })
    })
}

/// Matrix together with a random column subset mask.
pub fn matrix_and_subset(m: std::ops::RangeInclusive<usize>, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (BinaryMatrix, u64)> {
    matrix_strategy(m, n).prop_flat_map(|h| {
        let n = h.cols();
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        (Just(h), any::<u64>().prop_map(move |s| s & mask))
    })
}
