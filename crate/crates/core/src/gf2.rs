//! Bit-packed linear algebra over GF(2).
//!
//! Rows are stored row-major with one `u64` per 64 columns. Padding bits past
//! the last column are always zero, so word-level popcounts and comparisons
//! can be used directly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::columns::ColumnSet;
use crate::error::{Error, Result};

/// Default cap on the rank of a row space that [`BinaryMatrix::row_space_iter`]
/// agrees to enumerate.
pub const DEFAULT_ROW_SPACE_LIMIT: usize = 30;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A packed binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    len: usize,
    words: Vec<u64>,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from the positions of its ones.
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v = Self::zeros(len);
        for i in support {
            if i >= len {
                return Err(Error::IndexOutOfRange { index: i, len });
            }
            v.set(i, true);
        }
        Ok(v)
    }

    /// Single-word constructor; bits at or above `len` are discarded.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "from_mask needs len <= 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask & tail_mask(len);
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Weight of the bitwise AND with `other`.
    pub fn and_weight(&self, other: &BinaryVector) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn xor_assign(&mut self, other: &BinaryVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BinaryVector) -> bool {
        self.and_weight(other) % 2 == 1
    }

    /// Indices of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        iter_ones(&self.words).collect()
    }

    /// The single-word representation when `len <= 64`.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

impl Serialize for BinaryVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BinaryVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bits: std::result::Result<Vec<bool>, _> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(serde::de::Error::custom(format!("non-binary symbol {other:?}"))),
            })
            .collect();
        Ok(BinaryVector::from_bools(&bits?))
    }
}

/// Iterates the set bit positions of a packed word slice.
pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            }
        })
    })
}

/// Rank of a list of single-word vectors; the slice is used as scratch.
#[inline]
pub fn rank_of_words(vectors: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..vectors.len() {
        let pivot = vectors[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for v in &mut vectors[i + 1..] {
            // branch-free conditional XOR
            *v ^= pivot & 0u64.wrapping_sub(((*v & low) != 0) as u64);
        }
    }
    rank
}

/// Dense binary matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BinaryVector]) -> Result<Self> {
        let mut m = Self::zeros(0, cols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    /// Parses rows written as strings of `0`/`1` (other characters rejected).
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut m = Self::zeros(0, cols);
        for (line, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Parse {
                    line: line + 1,
                    message: format!("expected {cols} symbols, found {}", r.len()),
                });
            }
            let mut v = BinaryVector::zeros(cols);
            for (j, c) in r.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => v.set(j, true),
                    other => {
                        return Err(Error::Parse {
                            line: line + 1,
                            message: format!("non-binary symbol {other:?}"),
                        })
                    }
                }
            }
            m.push_row(&v)?;
        }
        Ok(m)
    }

    /// Builds an `rows x cols` matrix from single-word row masks (`cols <= 64`).
    pub fn from_row_masks(cols: usize, masks: &[u64]) -> Self {
        assert!(cols <= 64);
        let mut m = Self::zeros(0, cols);
        for &mask in masks {
            m.push_row(&BinaryVector::from_mask(cols, mask))
                .expect("length matches");
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        let bit = 1u64 << (c % 64);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    /// Packed words of row `r`.
    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BinaryVector {
        BinaryVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_iter(&self) -> impl Iterator<Item = BinaryVector> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    pub fn push_row(&mut self, row: &BinaryVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} pushed onto a matrix with {} columns",
                row.len(),
                self.cols
            )));
        }
        self.data.extend_from_slice(row.words());
        self.rows += 1;
        Ok(())
    }

    /// Row masks when the matrix fits in one word per row.
    pub fn row_masks(&self) -> Option<Vec<u64>> {
        (self.cols <= 64).then(|| {
            (0..self.rows)
                .map(|r| if self.stride == 0 { 0 } else { self.data[r * self.stride] })
                .collect()
        })
    }

    pub fn column(&self, c: usize) -> BinaryVector {
        let mut v = BinaryVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Column weights.
    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in 0..self.rows {
            for c in iter_ones(self.row_words(r)) {
                w[c] += 1;
            }
        }
        w
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in iter_ones(self.row_words(r)) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Dimension of the row space. Works on a copy.
    pub fn rank(&self) -> usize {
        if self.stride == 0 {
            return 0;
        }
        if self.stride == 1 {
            let mut words = self.data.clone();
            return rank_of_words(&mut words);
        }
        let mut data = self.data.clone();
        eliminate_rows(&mut data, self.rows, self.stride)
    }

    /// Submatrix formed by the columns in `set`, in ascending index order.
    pub fn column_submatrix(&self, set: &ColumnSet) -> Result<BinaryMatrix> {
        if set.n() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "column set over {} positions used with a matrix of {} columns",
                set.n(),
                self.cols
            )));
        }
        let idx: Vec<usize> = set.iter().collect();
        let mut out = BinaryMatrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            let row = self.row_words(r);
            for (k, &c) in idx.iter().enumerate() {
                if (row[c / 64] >> (c % 64)) & 1 == 1 {
                    out.set(r, k, true);
                }
            }
        }
        Ok(out)
    }

    /// Row-reduced basis of the row space (reduced echelon form, zero rows dropped).
    pub fn row_basis(&self) -> BinaryMatrix {
        let mut data = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let (w, b) = (c / 64, c % 64);
            let Some(p) = (next..self.rows).find(|&r| (data[r * self.stride + w] >> b) & 1 == 1) else {
                continue;
            };
            swap_rows(&mut data, self.stride, p, next);
            for r in 0..self.rows {
                if r != next && (data[r * self.stride + w] >> b) & 1 == 1 {
                    xor_rows(&mut data, self.stride, r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        data.truncate(next * self.stride);
        BinaryMatrix {
            rows: next,
            cols: self.cols,
            stride: self.stride,
            data,
        }
    }

    /// Enumerates every vector of the row space exactly once.
    ///
    /// Order: Gray code over the reduced row basis `b_0..b_{k-1}`; the `s`-th
    /// vector is the previous one XOR `b_{tz(s)}` where `tz` counts trailing
    /// zeros, starting from the zero vector. Fails when the rank exceeds `limit`.
    pub fn row_space_iter(&self, limit: usize) -> Result<RowSpaceIter> {
        let basis = self.row_basis();
        if basis.rows() > limit {
            return Err(Error::RowSpaceTooLarge {
                rank: basis.rows(),
                limit,
            });
        }
        Ok(RowSpaceIter {
            current: BinaryVector::zeros(self.cols),
            basis,
            step: 0,
        })
    }

    /// `H * x^T` (the syndrome of `x`).
    pub fn mul_vec(&self, x: &BinaryVector) -> Result<BinaryVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BinaryVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            if parity % 2 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BinaryVector) -> bool {
        if v.len() != self.cols {
            return false;
        }
        let mut extended = self.clone();
        extended.push_row(v).expect("length checked");
        extended.rank() == self.rank()
    }

    pub fn vstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BinaryMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// A basis of the right null space `{x : H x^T = 0}`, i.e. of the code.
    pub fn null_space_basis(&self) -> Vec<BinaryVector> {
        let basis = self.row_basis();
        let pivots: Vec<usize> = (0..basis.rows())
            .map(|r| {
                iter_ones(basis.row_words(r))
                    .next()
                    .expect("basis rows are nonzero")
            })
            .collect();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = BinaryVector::zeros(self.cols);
                x.set(free, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if basis.get(r, free) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

/// Serialized as `{"cols": n, "rows": ["0110..", ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    cols: usize,
    rows: Vec<String>,
}

impl Serialize for BinaryMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            cols: self.cols,
            rows: self.row_iter().map(|r| r.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BinaryMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let mut m = if repr.rows.is_empty() {
            BinaryMatrix::zeros(0, repr.cols)
        } else {
            BinaryMatrix::from_row_strings(&repr.rows).map_err(serde::de::Error::custom)?
        };
        if m.cols != repr.cols {
            return Err(serde::de::Error::custom(format!(
                "rows have {} columns, header says {}",
                m.cols, repr.cols
            )));
        }
        m.stride = words_for(m.cols);
        Ok(m)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix({}x{})\n{self}", self.rows, self.cols)
    }
}

#[inline]
fn swap_rows(data: &mut [u64], stride: usize, a: usize, b: usize) {
    if a != b {
        for w in 0..stride {
            data.swap(a * stride + w, b * stride + w);
        }
    }
}

#[inline]
fn xor_rows(data: &mut [u64], stride: usize, dst: usize, src: usize) {
    for w in 0..stride {
        data[dst * stride + w] ^= data[src * stride + w];
    }
}

/// Forward elimination driven by each row's lowest set bit; returns the rank.
pub(crate) fn eliminate_rows(data: &mut [u64], rows: usize, stride: usize) -> usize {
    let mut rank = 0;
    for i in 0..rows {
        let row = &data[i * stride..(i + 1) * stride];
        let Some(w) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        rank += 1;
        let low = row[w] & row[w].wrapping_neg();
        let (head, tail) = data.split_at_mut((i + 1) * stride);
        let pivot = &head[i * stride..];
        for other in tail.chunks_exact_mut(stride) {
            if other[w] & low != 0 {
                for k in w..stride {
                    other[k] ^= pivot[k];
                }
            }
        }
    }
    rank
}

/// Gray-code walk over a row space; see [`BinaryMatrix::row_space_iter`].
pub struct RowSpaceIter {
    basis: BinaryMatrix,
    current: BinaryVector,
    step: u64,
}

impl RowSpaceIter {
    pub fn basis(&self) -> &BinaryMatrix {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.rows()
    }
}

impl Iterator for RowSpaceIter {
    type Item = BinaryVector;

    fn next(&mut self) -> Option<BinaryVector> {
        let k = self.basis.rows();
        if self.step >= 1u64 << k {
            return None;
        }
        if self.step > 0 {
            let flip = self.step.trailing_zeros() as usize;
            for (a, b) in self.current.words.iter_mut().zip(self.basis.row_words(flip)) {
                *a ^= b;
            }
        }
        self.step += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let total = 1u64 << self.basis.rows();
        let left = (total - self.step) as usize;
        (left, Some(left))
    }
}

/// Received word on an erasure channel: known values outside `erased`.
#[derive(Clone, Debug)]
pub struct ReceivedWord {
    pub values: BinaryVector,
    pub erased: ColumnSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErasureSolution {
    Unique(BinaryVector),
    Multiple,
}

/// Solves `H_E c_E = H_{not E} c_{not E}` for the erased coordinates.
///
/// Returns the filled-in word iff the columns of `H_E` are independent.
pub fn solve_erasure_system(h: &BinaryMatrix, received: &ReceivedWord) -> Result<ErasureSolution> {
    let n = h.cols();
    if received.values.len() != n || received.erased.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "received word of length {} for a code of length {n}",
            received.values.len()
        )));
    }
    let erased: Vec<usize> = received.erased.iter().collect();
    let mut known = received.values.clone();
    for &e in &erased {
        known.set(e, false);
    }
    let rhs = h.mul_vec(&known)?;

    // augmented system [H_E | rhs], one row per check
    let e = erased.len();
    let mut aug = BinaryMatrix::zeros(h.rows(), e + 1);
    let sub = h.column_submatrix(&received.erased)?;
    for r in 0..h.rows() {
        for c in 0..e {
            if sub.get(r, c) {
                aug.set(r, c, true);
            }
        }
        if rhs.get(r) {
            aug.set(r, e, true);
        }
    }
    let reduced = aug.row_basis();
    let mut pivot_of_col = vec![None; e];
    for r in 0..reduced.rows() {
        let lead = iter_ones(reduced.row_words(r)).next().expect("nonzero");
        if lead == e {
            return Err(Error::InconsistentSystem);
        }
        pivot_of_col[lead] = Some(r);
    }
    if pivot_of_col.iter().any(Option::is_none) {
        return Ok(ErasureSolution::Multiple);
    }
    let mut word = known;
    for (k, &col) in erased.iter().enumerate() {
        let r = pivot_of_col[k].expect("checked above");
        word.set(col, reduced.get(r, e));
    }
    Ok(ErasureSolution::Unique(word))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(BinaryMatrix::identity(3).rank(), 3);
        assert_eq!(BinaryMatrix::identity(130).rank(), 130);
    }

    #[test]
    fn zero_matrix_rank_zero() {
        assert_eq!(BinaryMatrix::zeros(4, 7).rank(), 0);
        assert_eq!(BinaryMatrix::zeros(0, 7).rank(), 0);
    }

    #[test]
    fn column_submatrix_of_identity() {
        let id = BinaryMatrix::identity(3);
        let empty = id.column_submatrix(&ColumnSet::empty(3)).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (3, 0));
        // columns 1 and 3 in 1-based terms
        let s = ColumnSet::from_indices(3, [0, 2]).unwrap();
        let sub = id.column_submatrix(&s).unwrap();
        assert_eq!(sub.cols(), 2);
        assert_eq!(sub.rank(), 2);
        assert!(sub.get(0, 0) && sub.get(2, 1) && !sub.get(1, 0));
    }

    #[test]
    fn row_space_of_zero_row() {
        let m = BinaryMatrix::zeros(1, 5);
        let all: Vec<_> = m.row_space_iter(DEFAULT_ROW_SPACE_LIMIT).unwrap().collect();
        assert_eq!(all, vec![BinaryVector::zeros(5)]);
    }

    #[test]
    fn row_space_of_rank_two() {
        let m = BinaryMatrix::from_row_strings(&["1100", "0110"]).unwrap();
        let all: Vec<_> = m.row_space_iter(30).unwrap().collect();
        assert_eq!(all.len(), 4);
        let mut strs: Vec<String> = all.iter().map(|v| v.to_string()).collect();
        strs.sort();
        assert_eq!(strs, ["0000", "0110", "1010", "1100"]);
    }

    #[test]
    fn row_space_limit_refuses() {
        let m = BinaryMatrix::identity(8);
        assert!(matches!(
            m.row_space_iter(7),
            Err(Error::RowSpaceTooLarge { rank: 8, limit: 7 })
        ));
    }

    #[test]
    fn erasure_system_empty_set_returns_received() {
        let h = BinaryMatrix::from_row_strings(&["1110", "0111"]).unwrap();
        let c = BinaryVector::from_bools(&[true, false, true, true]);
        assert!(h.mul_vec(&c).unwrap().is_zero());
        let rx = ReceivedWord {
            values: c.clone(),
            erased: ColumnSet::empty(4),
        };
        assert_eq!(solve_erasure_system(&h, &rx).unwrap(), ErasureSolution::Unique(c));
    }

    #[test]
    fn erasure_system_recovers_and_detects_inconsistency() {
        let h = BinaryMatrix::from_row_strings(&["1110", "0111"]).unwrap();
        let c = BinaryVector::from_bools(&[true, false, true, true]);
        let rx = ReceivedWord {
            values: BinaryVector::from_bools(&[false, false, true, true]),
            erased: ColumnSet::from_indices(4, [0, 1]).unwrap(),
        };
        assert_eq!(solve_erasure_system(&h, &rx).unwrap(), ErasureSolution::Unique(c));

        // not a codeword outside the erasure, and the erased column cannot fix row 2
        let bad = ReceivedWord {
            values: BinaryVector::from_bools(&[false, true, false, false]),
            erased: ColumnSet::from_indices(4, [0]).unwrap(),
        };
        assert!(matches!(solve_erasure_system(&h, &bad), Err(Error::InconsistentSystem)));
    }

    #[test]
    fn null_space_is_orthogonal() {
        let h = BinaryMatrix::from_row_strings(&["110100", "011010", "101001"]).unwrap();
        let basis = h.null_space_basis();
        assert_eq!(basis.len(), 6 - h.rank());
        for x in &basis {
            assert!(h.mul_vec(x).unwrap().is_zero());
        }
    }

    #[test]
    fn vector_serde_round_trip() {
        let v = BinaryVector::from_bools(&[true, false, true]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "\"101\"");
        let back: BinaryVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
