//! Code containers, the built-in extended Golay code and the two random
//! parity-check ensembles.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gf2::{BinaryMatrix, BinaryVector};
use crate::rng::stream_rng;

/// A binary linear code given by a (possibly redundant) parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    h: BinaryMatrix,
    rank: usize,
    min_distance: Option<usize>,
}

impl LinearCode {
    /// Wraps `h`; the rank is computed, the minimum distance is left unknown.
    pub fn from_parity_check(h: BinaryMatrix) -> Self {
        let rank = h.rank();
        Self {
            h,
            rank,
            min_distance: None,
        }
    }

    /// Records a known minimum distance. Not verified here; see
    /// [`LinearCode::min_distance_brute_force`].
    pub fn with_min_distance(mut self, d: usize) -> Self {
        self.min_distance = Some(d);
        self
    }

    pub fn parity_check(&self) -> &BinaryMatrix {
        &self.h
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of rows of the parity-check matrix.
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    /// Rank of the parity-check matrix (dimension of the dual code).
    pub fn r(&self) -> usize {
        self.rank
    }

    /// Dimension.
    pub fn k(&self) -> usize {
        self.n() - self.rank
    }

    pub fn d(&self) -> Option<usize> {
        self.min_distance
    }

    /// Minimum nonzero codeword weight by enumerating all `2^k` codewords.
    /// Returns `None` for the zero code. Refuses when `k > max_dimension`.
    pub fn min_distance_brute_force(&self, max_dimension: usize) -> Result<Option<usize>> {
        let basis = self.h.null_space_basis();
        if basis.len() > max_dimension {
            return Err(Error::BudgetExceeded {
                required: 1u128 << basis.len().min(127),
                budget: 1u128 << max_dimension.min(127),
            });
        }
        let generator = BinaryMatrix::from_rows(self.n(), &basis)?;
        let best = generator
            .row_space_iter(max_dimension)?
            .map(|c| c.weight())
            .filter(|&w| w > 0)
            .min();
        Ok(best)
    }

    /// Whether `v` is a dual codeword, i.e. lies in the row space of `H`.
    pub fn is_dual_codeword(&self, v: &BinaryVector) -> bool {
        self.h.row_space_contains(v)
    }
}

const GOLAY_ROWS: [&str; 12] = [
    "110000000000011011100010",
    "101000000000001101110001",
    "100100000000010110111000",
    "100010000000001011011100",
    "100001000000000101101110",
    "100000100000000010110111",
    "100000010000010001011011",
    "100000001000011000101101",
    "100000000100011100010110",
    "100000000010001110001011",
    "100000000001010111000101",
    "000000000000111111111111",
];

/// The `[24, 12, 8]` extended Golay code with its systematic double-circulant
/// parity-check matrix (12 x 24, full rank, stopping distance 4).
pub fn golay_extended() -> LinearCode {
    let h = BinaryMatrix::from_row_strings(&GOLAY_ROWS).expect("static matrix is well formed");
    LinearCode::from_parity_check(h).with_min_distance(8)
}

/// A random parity-check ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EnsembleSpec {
    /// `m x n` matrices with independent fair-coin entries.
    Sre { n: usize, m: usize },
    /// Gallager `(J, K)`-regular ensemble: `J` strips of `n / K` rows each.
    Gallager { n: usize, j: usize, k: usize },
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EnsembleSpec::Sre { n, m } => {
                if n == 0 || m == 0 {
                    return Err(invalid("SRE needs n >= 1 and m >= 1"));
                }
            }
            EnsembleSpec::Gallager { n, j, k } => {
                if j == 0 || k == 0 || n == 0 {
                    return Err(invalid("Gallager ensemble needs n, J, K >= 1"));
                }
                if n % k != 0 {
                    return Err(invalid(format!("K = {k} does not divide n = {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match *self {
            EnsembleSpec::Sre { n, .. } | EnsembleSpec::Gallager { n, .. } => n,
        }
    }

    /// Rows of every matrix in the ensemble.
    pub fn rows(&self) -> usize {
        match *self {
            EnsembleSpec::Sre { m, .. } => m,
            EnsembleSpec::Gallager { n, j, k } => n * j / k,
        }
    }

    /// Strip height `M = n / K` (Gallager only).
    pub fn strip_height(&self) -> Option<usize> {
        match *self {
            EnsembleSpec::Gallager { n, k, .. } => Some(n / k),
            EnsembleSpec::Sre { .. } => None,
        }
    }

    /// Largest possible rank: `m` for SRE, `nJ/K - (J - 1)` for Gallager.
    pub fn r_max(&self) -> usize {
        match *self {
            EnsembleSpec::Sre { n, m } => m.min(n),
            EnsembleSpec::Gallager { n, j, k } => n * j / k - (j - 1),
        }
    }

    /// Draws one matrix from the ensemble with the caller's generator.
    pub fn sample_matrix<R: Rng + ?Sized>(&self, rng: &mut R) -> BinaryMatrix {
        match *self {
            EnsembleSpec::Sre { n, m } => sre_matrix(rng, n, m),
            EnsembleSpec::Gallager { n, j, k } => gallager_matrix(rng, n, j, k),
        }
    }
}

const SRE_STREAM: u64 = 0x53_5245;
const GALLAGER_STREAM: u64 = 0x47_414c;

pub(crate) fn sre_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> BinaryMatrix {
    let mut h = BinaryMatrix::zeros(0, n);
    let words = n.div_ceil(64);
    for _ in 0..m {
        let bits: Vec<u64> = (0..words).map(|_| rng.random()).collect();
        let row = BinaryVector::from_words(n, bits);
        h.push_row(&row).expect("row length");
    }
    h
}

pub(crate) fn gallager_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, j: usize, k: usize) -> BinaryMatrix {
    let strip = n / k;
    let mut h = BinaryMatrix::zeros(strip * j, n);
    let mut perm: Vec<usize> = (0..n).collect();
    for s in 0..j {
        if s > 0 {
            perm.shuffle(rng);
        }
        // row `q` of the strip collects the columns that land in block `q`
        for (q, block) in perm.chunks(k).enumerate() {
            for &c in block {
                h.set(s * strip + q, c, true);
            }
        }
    }
    h
}

/// Samples the standard random ensemble; deterministic in `seed`.
pub fn sample_sre(n: usize, m: usize, seed: u64) -> Result<LinearCode> {
    EnsembleSpec::Sre { n, m }.validate()?;
    let mut rng = stream_rng(seed, &[SRE_STREAM]);
    Ok(LinearCode::from_parity_check(sre_matrix(&mut rng, n, m)))
}

/// Samples the Gallager `(J, K)` ensemble; strip 1 is the fixed block
/// diagonal, strips 2..J are independent uniform column permutations of it.
pub fn sample_gallager(n: usize, j: usize, k: usize, seed: u64) -> Result<LinearCode> {
    EnsembleSpec::Gallager { n, j, k }.validate()?;
    let mut rng = stream_rng(seed, &[GALLAGER_STREAM]);
    Ok(LinearCode::from_parity_check(gallager_matrix(&mut rng, n, j, k)))
}
