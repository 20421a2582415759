//! Peeling and maximum-likelihood erasure decoders.

use std::collections::VecDeque;
use std::io::Write;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::columns::ColumnSet;
use crate::combin::{binomial, decimal};
use crate::error::{invalid, Result};
use crate::gf2::{iter_ones, solve_erasure_system, words_for, BinaryMatrix, ErasureSolution, ReceivedWord};
use crate::rng::{floyd_mask, floyd_subset, stream_rng, CHUNK};
use crate::stopping::{for_each_combination_with_top, for_each_mask_with_top, subset_tasks, Checker};

const COMPARE_STREAM: u64 = 0x434d_5052;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Decoder {
    #[value(alias = "it")]
    Iterative,
    Ml,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub success: bool,
    /// Positions left unrecovered; empty on success.
    pub residual: ColumnSet,
    pub method: Decoder,
}

/// Peeling decoder: repeatedly resolves a check with exactly one erased
/// position. The residual is the largest stopping set of `h` inside `erased`.
pub fn peel(h: &BinaryMatrix, erased: &ColumnSet) -> DecodeOutcome {
    let n = h.cols();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; h.rows()];
    let e = erased.as_vector().words();
    for r in 0..h.rows() {
        let row = h.row_words(r);
        for c in iter_ones(row) {
            adjacency[c].push(r);
        }
        counts[r] = row.iter().zip(e).map(|(a, b)| (a & b).count_ones() as usize).sum();
    }
    let mut residual = erased.clone();
    let mut queue: VecDeque<usize> = (0..h.rows()).filter(|&r| counts[r] == 1).collect();
    while let Some(r) = queue.pop_front() {
        if counts[r] != 1 {
            continue;
        }
        let row = h.row_words(r);
        let j = iter_ones(row)
            .find(|&c| residual.contains(c))
            .expect("row with one erased position");
        residual.remove(j);
        for &r2 in &adjacency[j] {
            counts[r2] -= 1;
            if counts[r2] == 1 {
                queue.push_back(r2);
            }
        }
    }
    DecodeOutcome {
        success: residual.is_empty(),
        residual,
        method: Decoder::Iterative,
    }
}

/// ML decoder (rank test only): succeeds iff the erased columns of `h` are
/// linearly independent. On failure the residual is the whole erasure set.
pub fn ml_decode(h: &BinaryMatrix, erased: &ColumnSet) -> DecodeOutcome {
    let success = crate::stopping::is_coverable(h, erased);
    DecodeOutcome {
        success,
        residual: if success { ColumnSet::empty(h.cols()) } else { erased.clone() },
        method: Decoder::Ml,
    }
}

/// ML decoder that also recovers the erased values. Returns `None` when the
/// erasures cannot be resolved uniquely.
pub fn ml_decode_values(h: &BinaryMatrix, received: &ReceivedWord) -> Result<Option<crate::gf2::BinaryVector>> {
    match solve_erasure_system(h, received)? {
        ErasureSolution::Unique(word) => Ok(Some(word)),
        ErasureSolution::Multiple => Ok(None),
    }
}

/// Failure counts of both decoders at one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub w: usize,
    #[serde(with = "decimal")]
    pub total: BigUint,
    /// Patterns examined (equal to `total` when exhaustive).
    pub tested: u64,
    pub exhaustive: bool,
    pub iterative_fail: u64,
    pub ml_fail: u64,
    /// Patterns on which exactly one decoder fails.
    pub disagreements: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub rows: usize,
    pub rank: usize,
    pub seed: u64,
    pub weights: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn total_disagreements(&self) -> u64 {
        self.weights.iter().map(|r| r.disagreements).sum()
    }

    /// CSV with columns `w,total,iterative_fail,ml_fail,disagreements,tested,exhaustive`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["w", "total", "iterative_fail", "ml_fail", "disagreements", "tested", "exhaustive"])?;
        for r in &self.weights {
            w.write_record([
                r.w.to_string(),
                r.total.to_string(),
                r.iterative_fail.to_string(),
                r.ml_fail.to_string(),
                r.disagreements.to_string(),
                r.tested.to_string(),
                r.exhaustive.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    tested: u64,
    iterative: u64,
    ml: u64,
    differ: u64,
}

impl Tally {
    fn add(mut self, o: Tally) -> Tally {
        self.tested += o.tested;
        self.iterative += o.iterative;
        self.ml += o.ml;
        self.differ += o.differ;
        self
    }

    #[inline]
    fn record(&mut self, it_fail: bool, ml_fail: bool) {
        self.tested += 1;
        self.iterative += it_fail as u64;
        self.ml += ml_fail as u64;
        self.differ += (it_fail != ml_fail) as u64;
    }
}

#[inline]
fn judge_mask(c: &Checker, s: u64) -> (bool, bool) {
    let ml_fail = !c.is_coverable_mask(s);
    // peeling never beats ML, so an ML failure settles both
    let it_fail = ml_fail || c.peel_mask(s) != 0;
    (it_fail, ml_fail)
}

fn judge_words(c: &Checker, s: &mut [u64]) -> (bool, bool) {
    let ml_fail = !c.is_coverable_words(s);
    let it_fail = ml_fail || {
        c.peel_words(s);
        s.iter().any(|&w| w != 0)
    };
    (it_fail, ml_fail)
}

/// Compares peeling on `h` against ML decoding over the given weights:
/// exhaustive for weights up to `exhaustive_to`, `samples` seeded random
/// patterns per weight above it. Weights above the rank fail for both.
pub fn compare_decoders(
    h: &BinaryMatrix,
    weights: std::ops::RangeInclusive<usize>,
    exhaustive_to: usize,
    samples: u64,
    seed: u64,
) -> Result<ComparisonReport> {
    let n = h.cols();
    if *weights.end() > n {
        return Err(invalid(format!("weight {} exceeds the length {n}", weights.end())));
    }
    let checker = Checker::new(h);
    let rank = checker.rank();
    let stride = words_for(n).max(1);
    let mut out = Vec::new();
    for w in weights {
        let total = binomial(n, w);
        let tally = if w > rank || w == 0 {
            // both fail above the rank, both succeed on the empty pattern
            let all = u64::try_from(&total).unwrap_or(u64::MAX);
            let fail = if w == 0 { 0 } else { all };
            Tally {
                tested: all,
                iterative: fail,
                ml: fail,
                differ: 0,
            }
        } else if w <= exhaustive_to {
            subset_tasks(n, [w])
                .par_iter()
                .map(|&(k, top)| {
                    let mut t = Tally::default();
                    if checker.has_masks() {
                        for_each_mask_with_top(k, top, |s| {
                            let (a, b) = judge_mask(&checker, s);
                            t.record(a, b);
                        });
                    } else {
                        let mut words = vec![0u64; stride];
                        for_each_combination_with_top(k, top, |idx| {
                            words.iter_mut().for_each(|x| *x = 0);
                            for &c in idx {
                                words[c / 64] |= 1 << (c % 64);
                            }
                            let (a, b) = judge_words(&checker, &mut words);
                            t.record(a, b);
                        });
                    }
                    t
                })
                .reduce(Tally::default, Tally::add)
        } else {
            (0..samples.div_ceil(CHUNK))
                .into_par_iter()
                .map(|chunk| {
                    let mut rng = stream_rng(seed, &[COMPARE_STREAM, w as u64, chunk]);
                    let mut t = Tally::default();
                    for _ in 0..CHUNK.min(samples - chunk * CHUNK) {
                        let (a, b) = if checker.has_masks() {
                            judge_mask(&checker, floyd_mask(&mut rng, n, w))
                        } else {
                            let set = floyd_subset(&mut rng, n, w);
                            judge_words(&checker, &mut set.as_vector().words().to_vec())
                        };
                        t.record(a, b);
                    }
                    t
                })
                .reduce(Tally::default, Tally::add)
        };
        out.push(ComparisonRow {
            w,
            total,
            tested: tally.tested,
            exhaustive: w > rank || w == 0 || w <= exhaustive_to,
            iterative_fail: tally.iterative,
            ml_fail: tally.ml,
            disagreements: tally.differ,
        });
    }
    Ok(ComparisonReport {
        n,
        rows: h.rows(),
        rank,
        seed,
        weights: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::golay_extended;
    use crate::gf2::BinaryVector;

    #[test]
    fn empty_erasure_succeeds() {
        let h = golay_extended().parity_check().clone();
        let e = ColumnSet::empty(24);
        assert!(peel(&h, &e).success);
        assert!(ml_decode(&h, &e).success);
    }

    #[test]
    fn golay_single_erasures_peel() {
        let h = golay_extended().parity_check().clone();
        for j in 0..24 {
            let out = peel(&h, &ColumnSet::from_indices(24, [j]).unwrap());
            assert!(out.success, "column {j}");
        }
    }

    #[test]
    fn ml_fails_above_rank() {
        let h = golay_extended().parity_check().clone();
        let e = ColumnSet::from_indices(24, 0..13).unwrap();
        assert!(!ml_decode(&h, &e).success);
    }

    #[test]
    fn value_recovery() {
        let h = BinaryMatrix::from_row_strings(&["1100", "0110", "0011"]).unwrap();
        // repetition code: 1111 with two erasures
        let received = ReceivedWord {
            values: BinaryVector::from_bools(&[true, false, false, true]),
            erased: ColumnSet::from_indices(4, [1, 2]).unwrap(),
        };
        let word = ml_decode_values(&h, &received).unwrap().unwrap();
        assert_eq!(word.to_string(), "1111");
    }

    #[test]
    fn compare_on_golay_weight_four() {
        let h = golay_extended().parity_check().clone();
        let report = compare_decoders(&h, 0..=5, 5, 0, 0).unwrap();
        let row = &report.weights[4];
        assert_eq!((row.iterative_fail, row.ml_fail, row.disagreements), (110, 0, 110));
        assert_eq!(report.weights[3].disagreements, 0);
        let high = compare_decoders(&h, 13..=14, 0, 10, 1).unwrap();
        assert_eq!(high.total_disagreements(), 0);
    }
}
