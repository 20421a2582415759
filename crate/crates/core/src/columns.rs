use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{iter_ones, BinaryVector};

/// A subset of the column indices `0..n` (an erasure pattern or a candidate
/// stopping set). Indices are zero-based; text formats print them one-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColumnSet {
    bits: BinaryVector,
}

impl ColumnSet {
    pub fn empty(n: usize) -> Self {
        Self {
            bits: BinaryVector::zeros(n),
        }
    }

    pub fn full(n: usize) -> Self {
        Self::from_indices(n, 0..n).expect("in range")
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        Ok(Self {
            bits: BinaryVector::from_support(n, indices)?,
        })
    }

    /// Fast-path constructor for `n <= 64`. Bits at or above `n` are rejected.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidParameter(format!("mask column sets need n <= 64, got {n}")));
        }
        if n < 64 && mask >> n != 0 {
            return Err(Error::IndexOutOfRange {
                index: 63 - mask.leading_zeros() as usize,
                len: n,
            });
        }
        Ok(Self {
            bits: BinaryVector::from_mask(n, mask),
        })
    }

    /// Length of the ambient index range.
    pub fn n(&self) -> usize {
        self.bits.len()
    }

    /// Number of indices in the set.
    pub fn len(&self) -> usize {
        self.bits.weight()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n() && self.bits.get(i)
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, len: self.n() });
        }
        self.bits.set(i, true);
        Ok(())
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.n() {
            self.bits.set(i, false);
        }
    }

    /// Ascending indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        iter_ones(self.bits.words())
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Single-word mask when `n <= 64`.
    pub fn as_mask(&self) -> Option<u64> {
        self.bits.as_mask()
    }

    pub fn as_vector(&self) -> &BinaryVector {
        &self.bits
    }

    pub fn is_subset_of(&self, other: &ColumnSet) -> bool {
        self.n() == other.n()
            && self
                .bits
                .words()
                .iter()
                .zip(other.bits.words())
                .all(|(a, b)| a & !b == 0)
    }
}

/// Whether `h` covers `set`: its support meets the set in exactly one position.
pub fn covers(h: &BinaryVector, set: &ColumnSet) -> bool {
    h.and_weight(set.as_vector()) == 1
}

impl fmt::Debug for ColumnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ColumnSetRepr {
    n: usize,
    indices: Vec<usize>,
}

impl Serialize for ColumnSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ColumnSetRepr {
            n: self.n(),
            indices: self.to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColumnSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ColumnSetRepr::deserialize(d)?;
        ColumnSet::from_indices(repr.n, repr.indices).map_err(serde::de::Error::custom)
    }
}
