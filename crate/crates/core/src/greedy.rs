//! Randomized greedy construction of redundant parity-check matrices that
//! cover every coverable stopping set up to a given size.
//!
//! Dual codewords are indexed by their coefficient vector `alpha` over a
//! row-reduced basis of `H`, so the candidate pool is `1..2^r`. Column `j`
//! becomes the `r`-bit word `beta_j`, and `h_alpha` meets `S` in position `j`
//! iff `<alpha, beta_j> = 1`. For an independent set `S` the codewords
//! covering `S` through `j` form the affine space `gamma_j + K`, where
//! `<gamma_j, beta_j'> = [j = j']` and `K` is the common kernel; scores are
//! maintained by walking these spaces in Gray-code order.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::columns::ColumnSet;
use crate::combin::subsets_up_to;
use crate::error::{invalid, Error, Result};
use crate::gf2::{iter_ones, words_for, BinaryMatrix, BinaryVector, DEFAULT_ROW_SPACE_LIMIT};
use crate::rng::stream_rng;
use crate::stopping::{for_each_combination_with_top, for_each_mask_with_top, subset_tasks, Checker};

const GREEDY_STREAM: u64 = 0x4752_4459;

/// Flat storage of column sets, `stride` words each.
#[derive(Clone, Debug)]
struct SetList {
    stride: usize,
    words: Vec<u64>,
}

impl SetList {
    fn len(&self) -> usize {
        self.words.len() / self.stride
    }

    fn get(&self, q: usize) -> &[u64] {
        &self.words[q * self.stride..(q + 1) * self.stride]
    }
}

fn coverable_sets(code: &LinearCode, ell: usize, budget: u128) -> Result<SetList> {
    let n = code.n();
    let ell = ell.min(code.r()).min(n);
    let required = subsets_up_to(n, 1..=ell);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let checker = Checker::new(code.parity_check());
    let stride = words_for(n).max(1);
    let chunks: Vec<Vec<u64>> = subset_tasks(n, 1..=ell)
        .par_iter()
        .map(|&(k, top)| {
            let mut out = Vec::new();
            if checker.has_masks() {
                for_each_mask_with_top(k, top, |s| {
                    if checker.is_coverable_mask(s) {
                        out.push(s);
                    }
                });
            } else {
                let mut words = vec![0u64; stride];
                for_each_combination_with_top(k, top, |idx| {
                    words.iter_mut().for_each(|w| *w = 0);
                    for &c in idx {
                        words[c / 64] |= 1 << (c % 64);
                    }
                    if checker.is_coverable_words(&words) {
                        out.extend_from_slice(&words);
                    }
                });
            }
            out
        })
        .collect();
    Ok(SetList {
        stride,
        words: chunks.concat(),
    })
}

/// Every nonempty `S` with `|S| <= ell` whose columns in `H` are independent.
/// Sizes above the rank contribute nothing.
pub fn coverable_list(code: &LinearCode, ell: usize, budget: u128) -> Result<Vec<ColumnSet>> {
    let list = coverable_sets(code, ell, budget)?;
    let n = code.n();
    (0..list.len())
        .map(|q| ColumnSet::from_indices(n, iter_ones(list.get(q))))
        .collect()
}

/// Walks the dual codewords covering the set whose column words are `betas`,
/// calling `f(alpha)` for each. Returns `false` (without calling `f`) when the
/// columns are dependent.
fn for_each_cover(betas: &[u64], r: usize, mut f: impl FnMut(u64)) -> bool {
    let k = betas.len();
    if k > r {
        return false;
    }
    let mut rows = [0u64; 64];
    let mut tr = [0u64; 64];
    let mut pivot = [0usize; 64];
    rows[..k].copy_from_slice(betas);
    for (a, t) in tr.iter_mut().enumerate().take(k) {
        *t = 1 << a;
    }
    let mut rank = 0;
    let mut pivot_mask = 0u64;
    for col in 0..r {
        let bit = 1u64 << col;
        let Some(p) = (rank..k).find(|&q| rows[q] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        tr.swap(rank, p);
        for q in 0..k {
            if q != rank && rows[q] & bit != 0 {
                rows[q] ^= rows[rank];
                tr[q] ^= tr[rank];
            }
        }
        pivot[rank] = col;
        pivot_mask |= bit;
        rank += 1;
        if rank == k {
            break;
        }
    }
    if rank < k {
        return false;
    }
    let mut kernel = [0u64; 64];
    let mut dim = 0;
    for free in 0..r {
        if pivot_mask >> free & 1 == 1 {
            continue;
        }
        let mut v = 1u64 << free;
        for b in 0..k {
            if rows[b] >> free & 1 == 1 {
                v |= 1 << pivot[b];
            }
        }
        kernel[dim] = v;
        dim += 1;
    }
    for a in 0..k {
        let mut cur = 0u64;
        for b in 0..k {
            if tr[b] >> a & 1 == 1 {
                cur |= 1 << pivot[b];
            }
        }
        f(cur);
        for s in 1u64..(1u64 << dim) {
            cur ^= kernel[s.trailing_zeros() as usize];
            f(cur);
        }
    }
    true
}

/// Tuning knobs for [`greedy_extend`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyOptions {
    pub restarts: usize,
    /// Largest rank whose dual code may be enumerated.
    pub row_space_limit: usize,
    /// Largest number of subsets the coverable list may be built from.
    pub subset_budget: u128,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self {
            restarts: 10,
            row_space_limit: DEFAULT_ROW_SPACE_LIMIT,
            subset_budget: crate::stopping::DEFAULT_SUBSET_BUDGET,
        }
    }
}

/// Trace of one randomized run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLog {
    pub restart: usize,
    pub rows: usize,
    /// Score of each row picked while the list was nonempty.
    pub score_trace: Vec<i64>,
    /// Sets left in the list after each pick.
    pub remaining_trace: Vec<usize>,
    /// Rows appended afterwards to reach full rank.
    pub completion_rows: usize,
    pub final_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub matrix: BinaryMatrix,
    pub ell: usize,
    pub list_size: usize,
    pub best_restart: usize,
    pub runs: Vec<RunLog>,
}

impl GreedyResult {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }
}

struct Prepared {
    r: usize,
    basis: BinaryMatrix,
    /// `betas[q * ell_max ..]` unused; per-column words instead.
    column_words: Vec<u64>,
    list: SetList,
    sizes: Vec<u8>,
    initial_scores: Vec<i64>,
}

fn set_betas(list: &SetList, q: usize, column_words: &[u64], out: &mut Vec<u64>) {
    out.clear();
    out.extend(iter_ones(list.get(q)).map(|c| column_words[c]));
}

fn prepare(code: &LinearCode, ell: usize, opts: &GreedyOptions) -> Result<Prepared> {
    let basis = code.parity_check().row_basis();
    let r = basis.rows();
    if r > opts.row_space_limit || r > 63 {
        return Err(Error::RowSpaceTooLarge {
            rank: r,
            limit: opts.row_space_limit.min(63),
        });
    }
    let mut column_words = vec![0u64; code.n()];
    for b in 0..r {
        for c in iter_ones(basis.row_words(b)) {
            column_words[c] |= 1 << b;
        }
    }
    let list = coverable_sets(code, ell, opts.subset_budget)?;
    let sizes: Vec<u8> = (0..list.len())
        .map(|q| list.get(q).iter().map(|w| w.count_ones()).sum::<u32>() as u8)
        .collect();

    // scores summed over disjoint slices of the list
    let slices = 64.max(rayon::current_num_threads() * 4);
    let per = list.len().div_ceil(slices).max(1);
    let initial_scores = (0..list.len().div_ceil(per))
        .into_par_iter()
        .map(|s| {
            let mut scores = vec![0i64; 1 << r];
            let mut betas = Vec::with_capacity(64);
            for q in s * per..((s + 1) * per).min(list.len()) {
                set_betas(&list, q, &column_words, &mut betas);
                let w = sizes[q] as i64;
                for_each_cover(&betas, r, |a| scores[a as usize] += w);
            }
            scores
        })
        .reduce(
            || vec![0i64; 1 << r],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(Prepared {
        r,
        basis,
        column_words,
        list,
        sizes,
        initial_scores,
    })
}

fn codeword(basis: &BinaryMatrix, alpha: u64) -> BinaryVector {
    let mut v = BinaryVector::zeros(basis.cols());
    let mut a = alpha;
    while a != 0 {
        let b = a.trailing_zeros() as usize;
        v.xor_assign(&basis.row(b));
        a &= a - 1;
    }
    v
}

/// Inserts `alpha` into an echelon set of coefficient words; returns whether
/// the rank grew.
fn insert_independent(echelon: &mut Vec<u64>, alpha: u64) -> bool {
    let mut x = alpha;
    for &e in echelon.iter() {
        let top = 63 - e.leading_zeros();
        if x >> top & 1 == 1 {
            x ^= e;
        }
    }
    if x == 0 {
        return false;
    }
    echelon.push(x);
    echelon.sort_unstable_by(|a, b| b.cmp(a));
    true
}

fn run_once(prep: &Prepared, restart: usize, seed: u64) -> (Vec<u64>, RunLog) {
    let mut rng = stream_rng(seed, &[GREEDY_STREAM, restart as u64]);
    let r = prep.r;
    let stride = prep.list.stride;
    let mut scores = prep.initial_scores.clone();
    let mut alive: Vec<u32> = (0..prep.list.len() as u32).collect();
    let mut chosen: Vec<u64> = Vec::new();
    let mut score_trace = Vec::new();
    let mut remaining_trace = Vec::new();
    let mut betas = Vec::with_capacity(64);

    while !alive.is_empty() {
        let best = scores[1..].iter().copied().max().unwrap_or(0);
        debug_assert!(best > 0, "alive sets always have a covering codeword");
        let ties = scores[1..].iter().filter(|&&s| s == best).count();
        let pick = rng.random_range(0..ties);
        let alpha = 1 + scores[1..]
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == best)
            .nth(pick)
            .map(|(a, _)| a)
            .expect("tie index in range") as u64;
        chosen.push(alpha);
        score_trace.push(best);

        let h = codeword(&prep.basis, alpha);
        let hw = h.words();
        let mut kept = Vec::with_capacity(alive.len());
        for &q in &alive {
            let set = prep.list.get(q as usize);
            let covered = if stride == 1 {
                let x = hw[0] & set[0];
                x != 0 && x & (x - 1) == 0
            } else {
                set.iter().zip(hw).map(|(a, b)| (a & b).count_ones()).sum::<u32>() == 1
            };
            if covered {
                set_betas(&prep.list, q as usize, &prep.column_words, &mut betas);
                let w = prep.sizes[q as usize] as i64;
                for_each_cover(&betas, r, |a| scores[a as usize] -= w);
            } else {
                kept.push(q);
            }
        }
        alive = kept;
        remaining_trace.push(alive.len());
    }

    // complete to full rank with basis rows
    let mut echelon = Vec::new();
    for &a in &chosen {
        insert_independent(&mut echelon, a);
    }
    let mut completion_rows = 0;
    for b in 0..r {
        if echelon.len() == r {
            break;
        }
        if insert_independent(&mut echelon, 1 << b) {
            chosen.push(1 << b);
            completion_rows += 1;
        }
    }
    let log = RunLog {
        restart,
        rows: chosen.len(),
        score_trace,
        remaining_trace,
        completion_rows,
        final_rank: echelon.len(),
    };
    (chosen, log)
}

/// Builds a parity-check matrix of dual codewords covering every coverable
/// stopping set of size at most `ell`, keeping the smallest of
/// `opts.restarts` seeded runs. The result always has the full rank of the
/// code.
pub fn greedy_extend(code: &LinearCode, ell: usize, seed: u64, opts: &GreedyOptions) -> Result<GreedyResult> {
    if ell == 0 {
        return Err(invalid("ell must be at least 1"));
    }
    if opts.restarts == 0 {
        return Err(invalid("at least one restart is needed"));
    }
    let prep = prepare(code, ell, opts)?;
    let outcomes: Vec<(Vec<u64>, RunLog)> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| run_once(&prep, k, seed))
        .collect();
    let best = (0..outcomes.len())
        .min_by_key(|&k| (outcomes[k].0.len(), k))
        .expect("at least one run");
    let mut matrix = BinaryMatrix::zeros(0, code.n());
    for &alpha in &outcomes[best].0 {
        matrix.push_row(&codeword(&prep.basis, alpha))?;
    }
    Ok(GreedyResult {
        matrix,
        ell,
        list_size: prep.list.len(),
        best_restart: best,
        runs: outcomes.into_iter().map(|(_, log)| log).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::golay_extended;
    use crate::stopping::DEFAULT_SUBSET_BUDGET;

    #[test]
    fn cover_enumeration_matches_brute_force() {
        let betas = [0b0110u64, 0b1011];
        let r = 4;
        let mut got = Vec::new();
        assert!(for_each_cover(&betas, r, |a| got.push(a)));
        got.sort_unstable();
        let parity = |x: u64| x.count_ones() & 1;
        let mut want: Vec<u64> = (1..16u64)
            .filter(|&a| betas.iter().map(|&b| parity(a & b)).sum::<u32>() == 1)
            .collect();
        want.sort_unstable();
        assert_eq!(got, want);
        assert!(!for_each_cover(&[0b11, 0b11], 2, |_| {}));
    }

    #[test]
    fn golay_list_small_sizes() {
        let g = golay_extended();
        assert_eq!(coverable_list(&g, 3, DEFAULT_SUBSET_BUDGET).unwrap().len(), 2324);
    }

    #[test]
    fn golay_ell_four_gives_twelve_rows() {
        let g = golay_extended();
        let opts = GreedyOptions {
            restarts: 2,
            ..Default::default()
        };
        let res = greedy_extend(&g, 4, 11, &opts).unwrap();
        assert_eq!(res.rows(), 12);
        assert_eq!(res.matrix.rank(), 12);
        for row in res.matrix.row_iter() {
            assert!(g.is_dual_codeword(&row));
        }
    }
}
