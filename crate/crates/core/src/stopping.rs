//! Stopping sets, coverability, exhaustive spectra and undecodable-pattern
//! profiles.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::columns::ColumnSet;
use crate::combin::{binomial, decimal, ln_binomial, ratio_f64, subsets_up_to};
use crate::decoder::Decoder;
use crate::error::{invalid, Error, Result};
use crate::gf2::{eliminate_rows, iter_ones, rank_of_words, words_for, BinaryMatrix};
use crate::rng::{floyd_mask, floyd_subset, stream_rng, CHUNK};

/// Default cap on the number of subsets an exhaustive routine may visit.
pub const DEFAULT_SUBSET_BUDGET: u128 = 4_000_000_000;

const PROFILE_STREAM: u64 = 0x5052_4f46;

/// Precomputed row and column words of a parity-check matrix.
///
/// Rows are kept as given (stopping and peeling tests depend on them); the
/// columns are taken from a row-reduced basis, which has the same column
/// dependencies and at most `n` rows.
#[derive(Clone, Debug)]
pub struct Checker {
    n: usize,
    m: usize,
    row_stride: usize,
    rows: Vec<u64>,
    col_stride: usize,
    cols: Vec<u64>,
}

impl Checker {
    pub fn new(h: &BinaryMatrix) -> Self {
        let n = h.cols();
        let m = h.rows();
        let row_stride = words_for(n);
        let mut rows = Vec::with_capacity(m * row_stride);
        for r in 0..m {
            rows.extend_from_slice(h.row_words(r));
        }
        let basis = h.row_basis();
        let col_stride = words_for(basis.rows()).max(1);
        let mut cols = vec![0u64; n * col_stride];
        for b in 0..basis.rows() {
            for c in iter_ones(basis.row_words(b)) {
                cols[c * col_stride + b / 64] |= 1 << (b % 64);
            }
        }
        Self {
            n,
            m,
            row_stride,
            rows,
            col_stride,
            cols,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rows of the underlying matrix.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Rank of the underlying matrix.
    pub fn rank(&self) -> usize {
        let mut data = self.cols.clone();
        eliminate_rows(&mut data, self.n, self.col_stride)
    }

    /// Whether the single-word fast path applies (`n <= 64`).
    pub fn has_masks(&self) -> bool {
        self.n <= 64
    }

    /// Stopping test on a nonempty mask (fast path).
    #[inline]
    pub fn is_stopping_mask(&self, s: u64) -> bool {
        debug_assert!(self.has_masks());
        s != 0
            && self.rows.iter().all(|&r| {
                let x = r & s;
                x & x.wrapping_sub(1) != 0 || x == 0
            })
    }

    /// Column-independence test on a mask (fast path).
    #[inline]
    pub fn is_coverable_mask(&self, s: u64) -> bool {
        let k = s.count_ones() as usize;
        if self.col_stride != 1 {
            return self.is_coverable_words(&[s]);
        }
        if k > 64 {
            return false;
        }
        let mut buf = [0u64; 64];
        let mut bits = s;
        let mut j = 0;
        while bits != 0 {
            buf[j] = self.cols[bits.trailing_zeros() as usize];
            bits &= bits - 1;
            j += 1;
        }
        rank_of_words(&mut buf[..k]) == k
    }

    /// Residual of peeling the erasure mask `e` (fast path).
    #[inline]
    pub fn peel_mask(&self, mut e: u64) -> u64 {
        loop {
            let before = e;
            for &r in &self.rows {
                let x = r & e;
                if x != 0 && x & (x - 1) == 0 {
                    e ^= x;
                    if e == 0 {
                        return 0;
                    }
                }
            }
            if e == before {
                return e;
            }
        }
    }

    /// Stopping test on packed set words.
    pub fn is_stopping_words(&self, s: &[u64]) -> bool {
        if s.iter().all(|&w| w == 0) {
            return false;
        }
        self.rows.chunks_exact(self.row_stride.max(1)).all(|row| {
            let mut weight = 0u32;
            for (a, b) in row.iter().zip(s) {
                weight += (a & b).count_ones();
                if weight > 1 {
                    return true;
                }
            }
            weight != 1
        })
    }

    /// Column-independence test on packed set words.
    pub fn is_coverable_words(&self, s: &[u64]) -> bool {
        let idx: Vec<usize> = iter_ones(s).filter(|&c| c < self.n).collect();
        let k = idx.len();
        if k > self.n || k > self.col_stride * 64 {
            return false;
        }
        let mut data = Vec::with_capacity(k * self.col_stride);
        for &c in &idx {
            data.extend_from_slice(&self.cols[c * self.col_stride..(c + 1) * self.col_stride]);
        }
        eliminate_rows(&mut data, k, self.col_stride) == k
    }

    /// Residual of peeling the erasure set given as packed words.
    pub fn peel_words(&self, e: &mut [u64]) {
        let stride = self.row_stride.max(1);
        loop {
            let mut changed = false;
            for row in self.rows.chunks_exact(stride) {
                let mut hit = None;
                let mut weight = 0u32;
                for (w, (a, b)) in row.iter().zip(e.iter()).enumerate() {
                    let x = a & b;
                    if x != 0 {
                        weight += x.count_ones();
                        hit = Some((w, x));
                        if weight > 1 {
                            break;
                        }
                    }
                }
                if weight == 1 {
                    let (w, x) = hit.expect("weight one");
                    e[w] ^= x;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn fails(&self, decoder: Decoder, s: u64) -> bool {
        match decoder {
            Decoder::Iterative => self.peel_mask(s) != 0,
            Decoder::Ml => !self.is_coverable_mask(s),
        }
    }

    fn fails_words(&self, decoder: Decoder, s: &mut [u64]) -> bool {
        match decoder {
            Decoder::Iterative => {
                self.peel_words(s);
                s.iter().any(|&w| w != 0)
            }
            Decoder::Ml => !self.is_coverable_words(s),
        }
    }
}

/// Whether `set` is a stopping set of `h`: no row of `h` restricted to `set`
/// has weight one. The empty set is not counted as a stopping set.
pub fn is_stopping_set(h: &BinaryMatrix, set: &ColumnSet) -> bool {
    debug_assert_eq!(h.cols(), set.n());
    if set.is_empty() {
        return false;
    }
    let s = set.as_vector().words();
    h.row_iter().all(|row| {
        let w: usize = row.words().iter().zip(s).map(|(a, b)| (a & b).count_ones() as usize).sum();
        w != 1
    })
}

/// Whether the columns of `h` indexed by `set` are linearly independent.
pub fn is_coverable(h: &BinaryMatrix, set: &ColumnSet) -> bool {
    if set.len() > h.rows() {
        return false;
    }
    h.column_submatrix(set).map(|s| s.rank() == set.len()).unwrap_or(false)
}

/// Calls `f` for every `k`-subset of `0..=top` containing `top`, as a mask.
/// Subsets are produced in colexicographic order; requires `top < 64`.
pub(crate) fn for_each_mask_with_top(k: usize, top: usize, mut f: impl FnMut(u64)) {
    if k == 0 || k > top + 1 {
        return;
    }
    let hi = 1u64 << top;
    if k == 1 {
        f(hi);
        return;
    }
    let mut x: u64 = (1u64 << (k - 1)) - 1;
    loop {
        f(x | hi);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
        if x >= hi {
            break;
        }
    }
}

/// Calls `f` for every `k`-subset of `0..=top` containing `top`, as ascending
/// indices (general path).
pub(crate) fn for_each_combination_with_top(k: usize, top: usize, mut f: impl FnMut(&[usize])) {
    if k == 0 || k > top + 1 {
        return;
    }
    let low = k - 1;
    let mut idx: Vec<usize> = (0..low).chain([top]).collect();
    loop {
        f(&idx);
        // next (k-1)-combination of 0..top in lexicographic order
        let mut i = low;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < top - (low - i) {
                idx[i] += 1;
                for j in i + 1..low {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `(size, top)` work items covering all subsets of the given sizes.
pub(crate) fn subset_tasks(n: usize, sizes: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
    sizes
        .into_iter()
        .filter(|&k| k >= 1 && k <= n)
        .flat_map(|k| (k - 1..n).map(move |top| (k, top)))
        .collect()
}

/// Counts, for each size in `sizes`, the subsets satisfying `pred`.
/// Parallel over disjoint ranges; the result does not depend on the thread count.
pub(crate) fn count_subsets(
    checker: &Checker,
    sizes: std::ops::RangeInclusive<usize>,
    pred: impl Fn(&Checker, &mut [u64]) -> bool + Sync,
    mask_pred: impl Fn(&Checker, u64) -> bool + Sync,
) -> Vec<u64> {
    let n = checker.n();
    let lo = *sizes.start();
    let hi = *sizes.end();
    let tasks = subset_tasks(n, sizes);
    let stride = words_for(n).max(1);
    let partial: Vec<(usize, u64)> = tasks
        .par_iter()
        .map(|&(k, top)| {
            let mut count = 0u64;
            if checker.has_masks() {
                for_each_mask_with_top(k, top, |s| count += mask_pred(checker, s) as u64);
            } else {
                let mut words = vec![0u64; stride];
                for_each_combination_with_top(k, top, |idx| {
                    words.iter_mut().for_each(|w| *w = 0);
                    for &c in idx {
                        words[c / 64] |= 1 << (c % 64);
                    }
                    count += pred(checker, &mut words) as u64;
                });
            }
            (k, count)
        })
        .collect();
    let mut out = vec![0u64; hi.saturating_sub(lo) + 1];
    for (k, c) in partial {
        out[k - lo] += c;
    }
    out
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        Err(Error::BudgetExceeded { required, budget })
    } else {
        Ok(())
    }
}

/// Counts `u_1..u_ell` of stopping sets (optionally only coverable ones).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingSpectrum {
    pub n: usize,
    pub ell: usize,
    /// `counts[i - 1] = u_i`.
    #[serde(with = "decimal::vec")]
    pub counts: Vec<BigUint>,
    pub coverable_only: bool,
    /// `true` for exhaustive counts, `false` for estimated upper limits.
    pub exact: bool,
}

impl StoppingSpectrum {
    pub fn new(n: usize, counts: Vec<BigUint>, coverable_only: bool, exact: bool) -> Self {
        Self {
            n,
            ell: counts.len(),
            counts,
            coverable_only,
            exact,
        }
    }

    pub fn from_u64(n: usize, counts: &[u64], coverable_only: bool, exact: bool) -> Self {
        Self::new(n, counts.iter().map(|&c| BigUint::from(c)).collect(), coverable_only, exact)
    }

    /// `u_i` for `1 <= i <= ell`.
    pub fn u(&self, i: usize) -> &BigUint {
        &self.counts[i - 1]
    }

    /// Counts as floats, `values[i - 1] = u_i`.
    pub fn as_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    /// First `ell` entries.
    pub fn truncated(&self, ell: usize) -> Self {
        Self::new(self.n, self.counts[..ell.min(self.ell)].to_vec(), self.coverable_only, self.exact)
    }

    /// CSV with columns `i,count,total,exact`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "count", "total", "exact"])?;
        for (k, c) in self.counts.iter().enumerate() {
            let i = k + 1;
            w.write_record([
                i.to_string(),
                c.to_string(),
                binomial(self.n, i).to_string(),
                self.exact.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exhaustive spectrum: `u_i` is the number of size-`i` stopping sets of `h`,
/// restricted to sets with independent columns when `coverable_only`.
/// Fails when more than `budget` subsets would be visited.
pub fn spectrum_exhaustive(
    h: &BinaryMatrix,
    ell: usize,
    coverable_only: bool,
    budget: u128,
) -> Result<StoppingSpectrum> {
    if ell == 0 {
        return Err(invalid("ell must be at least 1"));
    }
    let n = h.cols();
    check_budget(subsets_up_to(n, 1..=ell.min(n)), budget)?;
    let checker = Checker::new(h);
    let mut counts = if ell.min(n) >= 1 {
        count_subsets(
            &checker,
            1..=ell.min(n),
            |c, s| c.is_stopping_words(s) && (!coverable_only || c.is_coverable_words(s)),
            |c, s| c.is_stopping_mask(s) && (!coverable_only || c.is_coverable_mask(s)),
        )
    } else {
        Vec::new()
    };
    counts.resize(ell, 0);
    Ok(StoppingSpectrum::from_u64(n, &counts, coverable_only, true))
}

/// Which weights are enumerated and which are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileMode {
    /// Weights up to this value are enumerated exhaustively.
    pub exhaustive_to: usize,
    /// Patterns drawn per weight above `exhaustive_to`.
    pub trials: u64,
    pub seed: u64,
}

impl ProfileMode {
    pub fn exhaustive() -> Self {
        Self {
            exhaustive_to: usize::MAX,
            trials: 0,
            seed: 0,
        }
    }

    pub fn sampled(trials: u64, seed: u64) -> Self {
        Self {
            exhaustive_to: 0,
            trials,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleInfo {
    pub failures: u64,
    pub trials: u64,
    pub seed: u64,
}

/// `Psi(w)` for one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub w: usize,
    /// Exact count, or `floor(total * failures / trials)` when sampled.
    #[serde(with = "decimal")]
    pub count: BigUint,
    #[serde(with = "decimal")]
    pub total: BigUint,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleInfo>,
}

impl ProfileEntry {
    /// Failure fraction `Psi(w) / C(n, w)`.
    pub fn fraction(&self) -> f64 {
        match self.sample {
            Some(s) if s.trials > 0 => s.failures as f64 / s.trials as f64,
            _ if self.total.is_zero() => 0.0,
            _ => ratio_f64(&self.count, &self.total),
        }
    }
}

/// Number of undecodable erasure patterns per weight for one decoder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternProfile {
    pub decoder: Decoder,
    pub n: usize,
    pub rank: usize,
    pub entries: Vec<ProfileEntry>,
}

impl PatternProfile {
    pub fn entry(&self, w: usize) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.w == w)
    }

    /// Exact `Psi(w)` if that weight was enumerated.
    pub fn exact_count(&self, w: usize) -> Option<&BigUint> {
        self.entry(w).filter(|e| e.exact).map(|e| &e.count)
    }

    /// CSV with columns `w,count,total,exact,failures,trials,seed`; the last
    /// three are empty for exact entries.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["w", "count", "total", "exact", "failures", "trials", "seed"])?;
        for e in &self.entries {
            let (f, t, s) = match e.sample {
                Some(s) => (s.failures.to_string(), s.trials.to_string(), s.seed.to_string()),
                None => Default::default(),
            };
            w.write_record([
                e.w.to_string(),
                e.count.to_string(),
                e.total.to_string(),
                e.exact.to_string(),
                f,
                t,
                s,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Counts decoding failures over erasure patterns of weight `0..=w_max`.
///
/// Weights above the rank fail for both decoders and are filled in
/// analytically as `C(n, w)`. Other weights are enumerated up to
/// `mode.exhaustive_to` and sampled above it.
pub fn undecodable_profile(
    h: &BinaryMatrix,
    decoder: Decoder,
    w_max: usize,
    mode: ProfileMode,
    budget: u128,
) -> Result<PatternProfile> {
    let n = h.cols();
    let w_max = w_max.min(n);
    let checker = Checker::new(h);
    let rank = checker.rank();
    let enumerated_top = w_max.min(rank).min(mode.exhaustive_to);
    check_budget(subsets_up_to(n, 1..=enumerated_top), budget)?;
    if enumerated_top < w_max.min(rank) && mode.trials == 0 {
        return Err(invalid("sampled weights need a positive trial count"));
    }

    let exhaustive = if enumerated_top >= 1 {
        count_subsets(
            &checker,
            1..=enumerated_top,
            |c, s| c.fails_words(decoder, s),
            |c, s| c.fails(decoder, s),
        )
    } else {
        Vec::new()
    };

    let mut entries = Vec::with_capacity(w_max + 1);
    for w in 0..=w_max {
        let total = binomial(n, w);
        let entry = if w > rank {
            ProfileEntry {
                w,
                count: total.clone(),
                total,
                exact: true,
                sample: None,
            }
        } else if w == 0 {
            ProfileEntry {
                w,
                count: BigUint::zero(),
                total,
                exact: true,
                sample: None,
            }
        } else if w <= enumerated_top {
            ProfileEntry {
                w,
                count: BigUint::from(exhaustive[w - 1]),
                total,
                exact: true,
                sample: None,
            }
        } else {
            let failures = sample_failures(&checker, decoder, w, mode.trials, mode.seed);
            ProfileEntry {
                w,
                count: &total * failures / mode.trials,
                total,
                exact: false,
                sample: Some(SampleInfo {
                    failures,
                    trials: mode.trials,
                    seed: mode.seed,
                }),
            }
        };
        entries.push(entry);
    }
    Ok(PatternProfile {
        decoder,
        n,
        rank,
        entries,
    })
}

fn sample_failures(checker: &Checker, decoder: Decoder, w: usize, trials: u64, seed: u64) -> u64 {
    let n = checker.n();
    let chunks = trials.div_ceil(CHUNK);
    let tag = decoder as u64;
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, &[PROFILE_STREAM, tag, w as u64, chunk]);
            let count = CHUNK.min(trials - chunk * CHUNK);
            let mut fails = 0u64;
            for _ in 0..count {
                if checker.has_masks() {
                    fails += checker.fails(decoder, floyd_mask(&mut rng, n, w)) as u64;
                } else {
                    let set = floyd_subset(&mut rng, n, w);
                    let mut words = set.as_vector().words().to_vec();
                    fails += checker.fails_words(decoder, &mut words) as u64;
                }
            }
            fails
        })
        .sum()
}

/// Frame error rate on a BEC with erasure probability `p`:
/// `sum_w Psi(w) p^w (1 - p)^(n - w)`. The profile must cover every weight.
pub fn fer(profile: &PatternProfile, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("erasure probability {p} outside [0, 1]")));
    }
    let n = profile.n;
    let mut total = 0.0;
    for w in 0..=n {
        let e = profile
            .entry(w)
            .ok_or_else(|| invalid(format!("profile has no entry for weight {w}")))?;
        let frac = e.fraction();
        if frac == 0.0 {
            continue;
        }
        let term = if p == 0.0 {
            if w == 0 {
                frac
            } else {
                0.0
            }
        } else if p == 1.0 {
            if w == n {
                frac
            } else {
                0.0
            }
        } else {
            (frac.ln() + ln_binomial(n, w) + w as f64 * p.ln() + (n - w) as f64 * (-p).ln_1p()).exp()
        };
        total += term;
    }
    Ok(total.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::golay_extended;

    fn golay() -> BinaryMatrix {
        golay_extended().parity_check().clone()
    }

    #[test]
    fn golay_singletons_and_triples_are_not_stopping() {
        let h = golay();
        assert!(!is_stopping_set(&h, &ColumnSet::from_indices(24, [0]).unwrap()));
        let c = Checker::new(&h);
        for top in 2..24 {
            for_each_mask_with_top(3, top, |s| assert!(!c.is_stopping_mask(s)));
        }
    }

    #[test]
    fn zero_column_is_a_stopping_set() {
        let h = BinaryMatrix::from_row_strings(&["101", "110"]).unwrap();
        let h = {
            let mut h = h;
            h.set(0, 2, false);
            h
        };
        assert!(is_stopping_set(&h, &ColumnSet::from_indices(3, [2]).unwrap()));
        assert!(!is_stopping_set(&h, &ColumnSet::empty(3)));
    }

    #[test]
    fn gosper_enumerates_all_subsets() {
        for n in 1..=10 {
            for k in 1..=n {
                let mut seen = Vec::new();
                for top in k - 1..n {
                    for_each_mask_with_top(k, top, |s| seen.push(s));
                }
                assert_eq!(seen.len() as u128, binomial_u128(n, k));
                assert!(seen.iter().all(|s| s.count_ones() as usize == k && s >> n == 0));
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len() as u128, binomial_u128(n, k));
            }
        }
    }

    fn binomial_u128(n: usize, k: usize) -> u128 {
        crate::combin::binomial_u128(n, k).unwrap()
    }

    #[test]
    fn combinations_match_masks() {
        for k in 1..=5 {
            for top in k - 1..9 {
                let mut a = Vec::new();
                for_each_mask_with_top(k, top, |s| a.push(s));
                let mut b = Vec::new();
                for_each_combination_with_top(k, top, |idx| b.push(idx.iter().fold(0u64, |m, &i| m | 1 << i)));
                a.sort_unstable();
                b.sort_unstable();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn identity_has_no_stopping_sets() {
        let s = spectrum_exhaustive(&BinaryMatrix::identity(2), 2, false, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(s.as_f64(), vec![0.0, 0.0]);
    }

    #[test]
    fn golay_small_spectrum() {
        let s = spectrum_exhaustive(&golay(), 5, true, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(s.as_f64(), vec![0.0, 0.0, 0.0, 110.0, 1837.0]);
        let s3 = spectrum_exhaustive(&golay(), 3, false, DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(s3.counts.iter().all(Zero::is_zero));
    }

    #[test]
    fn budget_is_enforced() {
        let err = spectrum_exhaustive(&golay(), 12, true, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn wide_path_agrees_with_masks() {
        // pad the Golay matrix with zero columns so the general path is taken
        let g = golay();
        let mut wide = BinaryMatrix::zeros(12, 70);
        for r in 0..12 {
            for c in 0..24 {
                wide.set(r, c, g.get(r, c));
            }
        }
        let c = Checker::new(&wide);
        assert!(!c.has_masks());
        let narrow = Checker::new(&g);
        for top in 3..24 {
            for_each_mask_with_top(4, top, |s| {
                let mut words = vec![s, 0];
                assert_eq!(c.is_stopping_words(&words), narrow.is_stopping_mask(s));
                assert_eq!(c.is_coverable_words(&words), narrow.is_coverable_mask(s));
                c.peel_words(&mut words);
                assert_eq!(words[0], narrow.peel_mask(s));
            });
        }
    }

    #[test]
    fn fer_edge_cases() {
        let h = BinaryMatrix::identity(4);
        let p = undecodable_profile(&h, Decoder::Ml, 4, ProfileMode::exhaustive(), DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(p.entries.iter().all(|e| e.count.is_zero()));
        assert_eq!(fer(&p, 0.3).unwrap(), 0.0);

        // a zero-rank matrix fails on every nonempty pattern
        let z = BinaryMatrix::zeros(1, 5);
        let p = undecodable_profile(&z, Decoder::Iterative, 5, ProfileMode::exhaustive(), DEFAULT_SUBSET_BUDGET).unwrap();
        for q in [0.0, 0.1, 0.5, 1.0] {
            let expected = 1.0 - (1.0f64 - q).powi(5);
            assert!((fer(&p, q).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_has_documented_columns() {
        let s = StoppingSpectrum::from_u64(4, &[0, 1], false, true);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "i,count,total,exact\n1,0,4,true\n2,1,6,true\n");
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains(r#""counts":["0","1"]"#));
    }
}
