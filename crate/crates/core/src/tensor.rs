//! Dense real tensors of order `m ≥ 2` and dimension `n ≥ 1`.
//!
//! Entries are stored row-major by multi-index with `i_1` varying slowest, so
//! the "row" `i` (all entries whose first index is `i`) is the contiguous block
//! `[(i-1)·n^{m-1}, i·n^{m-1})`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::TensorDocument;

/// Upper bound on `n^m`; larger tensors are rejected instead of allocated.
pub const MAX_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("tensor order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("tensor dimension must be at least 1, got {0}")]
    InvalidDim(usize),
    #[error("order {order} dimension {dim} needs more than {max} entries", max = MAX_ENTRIES)]
    TooLarge { order: usize, dim: usize },
    #[error("expected {expected} entries for order {order} dimension {dim}, got {got}")]
    EntryCount {
        order: usize,
        dim: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry {index} is not finite ({value})")]
    NonFinite { index: MultiIndex, value: f64 },
    #[error("multi-index {index} (entry #{position}) has {got} components, expected {expected}")]
    Arity {
        index: MultiIndex,
        position: usize,
        got: usize,
        expected: usize,
    },
    #[error("multi-index {index} (entry #{position}) is out of range: index {component} not in 1..={dim}")]
    OutOfRange {
        index: MultiIndex,
        position: usize,
        component: usize,
        dim: usize,
    },
    #[error("multi-index {index} is listed twice, at entries #{first} and #{second}")]
    Duplicate {
        index: MultiIndex,
        first: usize,
        second: usize,
    },
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("shape mismatch: order {left_order} dimension {left_dim} vs order {right_order} dimension {right_dim}")]
    ShapeMismatch {
        left_order: usize,
        left_dim: usize,
        right_order: usize,
        right_dim: usize,
    },
    #[error("index subset is empty")]
    EmptySubset,
    #[error("index subset member {member} not in 1..={dim}")]
    SubsetOutOfRange { member: usize, dim: usize },
    #[error("index subset lists {0} more than once")]
    SubsetDuplicate(usize),
    #[error("row {row} not in 1..={dim}")]
    RowOutOfRange { row: usize, dim: usize },
}

/// A 1-based multi-index `(i_1, …, i_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        MultiIndex(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff all indices are equal (`δ_{i_1⋯i_m} = 1`).
    pub fn is_diagonal(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[usize]> for MultiIndex {
    fn from(v: &[usize]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl<const K: usize> From<[usize; K]> for MultiIndex {
    fn from(v: [usize; K]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// A nonempty set of 1-based indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSubset(BTreeSet<usize>);

impl IndexSubset {
    /// Builds a subset of `{1, …, dim}`. Rejects empty input, duplicates and
    /// out-of-range members.
    pub fn new(members: impl IntoIterator<Item = usize>, dim: usize) -> Result<Self, TensorError> {
        let set = Self::collect(members)?;
        if let Some(&m) = set.iter().find(|&&m| m == 0 || m > dim) {
            return Err(TensorError::SubsetOutOfRange { member: m, dim });
        }
        Ok(IndexSubset(set))
    }

    /// `{1, …, dim}`.
    pub fn full(dim: usize) -> Self {
        IndexSubset((1..=dim).collect())
    }

    fn collect(members: impl IntoIterator<Item = usize>) -> Result<BTreeSet<usize>, TensorError> {
        let mut set = BTreeSet::new();
        for m in members {
            if !set.insert(m) {
                return Err(TensorError::SubsetDuplicate(m));
            }
        }
        if set.is_empty() {
            return Err(TensorError::EmptySubset);
        }
        Ok(set)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> usize {
        *self.0.iter().next_back().expect("subset is nonempty")
    }

    /// True iff `self ⊊ other`.
    pub fn is_proper_subset(&self, other: &IndexSubset) -> bool {
        self.0.len() < other.0.len() && self.0.is_subset(&other.0)
    }
}

impl TryFrom<Vec<usize>> for IndexSubset {
    type Error = TensorError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        let set = Self::collect(v)?;
        if set.contains(&0) {
            return Err(TensorError::SubsetOutOfRange { member: 0, dim: 0 });
        }
        Ok(IndexSubset(set))
    }
}

impl From<IndexSubset> for Vec<usize> {
    fn from(s: IndexSubset) -> Self {
        s.0.into_iter().collect()
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Dense real tensor. Immutable once built; all entries are finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "TensorDocument", try_from = "TensorDocument")]
pub struct Tensor {
    order: usize,
    dim: usize,
    entries: Vec<f64>,
}

fn checked_len(order: usize, dim: usize) -> Result<usize, TensorError> {
    if order < 2 {
        return Err(TensorError::InvalidOrder(order));
    }
    if dim < 1 {
        return Err(TensorError::InvalidDim(dim));
    }
    let exp = u32::try_from(order).map_err(|_| TensorError::TooLarge { order, dim })?;
    match dim.checked_pow(exp) {
        Some(len) if len <= MAX_ENTRIES => Ok(len),
        _ => Err(TensorError::TooLarge { order, dim }),
    }
}

impl Tensor {
    /// Builds a tensor from its dense row-major entries.
    pub fn new(order: usize, dim: usize, entries: Vec<f64>) -> Result<Self, TensorError> {
        let expected = checked_len(order, dim)?;
        if entries.len() != expected {
            return Err(TensorError::EntryCount {
                order,
                dim,
                expected,
                got: entries.len(),
            });
        }
        let t = Tensor {
            order,
            dim,
            entries,
        };
        if let Some(off) = t.entries.iter().position(|v| !v.is_finite()) {
            return Err(TensorError::NonFinite {
                index: t.multi_index(off),
                value: t.entries[off],
            });
        }
        Ok(t)
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self, TensorError> {
        let len = checked_len(order, dim)?;
        Ok(Tensor {
            order,
            dim,
            entries: vec![0.0; len],
        })
    }

    /// Sets the listed entries and leaves every other entry zero.
    pub fn from_sparse(
        order: usize,
        dim: usize,
        entries: &[(MultiIndex, f64)],
    ) -> Result<Self, TensorError> {
        let mut t = Tensor::zeros(order, dim)?;
        let mut seen: Vec<Option<usize>> = vec![None; t.entries.len()];
        for (position, (index, value)) in entries.iter().enumerate() {
            if index.len() != order {
                return Err(TensorError::Arity {
                    index: index.clone(),
                    position,
                    got: index.len(),
                    expected: order,
                });
            }
            if let Some(&component) = index.as_slice().iter().find(|&&c| c == 0 || c > dim) {
                return Err(TensorError::OutOfRange {
                    index: index.clone(),
                    position,
                    component,
                    dim,
                });
            }
            if !value.is_finite() {
                return Err(TensorError::NonFinite {
                    index: index.clone(),
                    value: *value,
                });
            }
            let off = t.offset(index.as_slice());
            if let Some(first) = seen[off] {
                return Err(TensorError::Duplicate {
                    index: index.clone(),
                    first,
                    second: position,
                });
            }
            seen[off] = Some(position);
            t.entries[off] = *value;
        }
        Ok(t)
    }

    /// The unit tensor `I` with `δ_{i_1⋯i_m}` entries.
    pub fn unit(order: usize, dim: usize) -> Result<Self, TensorError> {
        let mut t = Tensor::zeros(order, dim)?;
        for i in 0..dim {
            let off = t.diagonal_offset(i);
            t.entries[off] = 1.0;
        }
        Ok(t)
    }

    /// The partially all one tensor `ε^J`: entry 1 when every index lies in
    /// `J`, 0 otherwise.
    pub fn partially_all_one(order: usize, dim: usize, subset: &IndexSubset) -> Result<Self, TensorError> {
        let mut t = Tensor::zeros(order, dim)?;
        if subset.max() > dim {
            return Err(TensorError::SubsetOutOfRange {
                member: subset.max(),
                dim,
            });
        }
        let inside: Vec<bool> = (1..=dim).map(|i| subset.contains(i)).collect();
        let mut digits = vec![0; order];
        for off in 0..t.entries.len() {
            t.digits(off, &mut digits);
            if digits.iter().all(|&d| inside[d]) {
                t.entries[off] = 1.0;
            }
        }
        Ok(t)
    }

    /// The all one tensor `ε`.
    pub fn all_one(order: usize, dim: usize) -> Result<Self, TensorError> {
        let len = checked_len(order, dim)?;
        Ok(Tensor {
            order,
            dim,
            entries: vec![1.0; len],
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_even_order(&self) -> bool {
        self.order.is_multiple_of(2)
    }

    /// Number of entries in one row, `n^{m-1}`.
    pub fn row_len(&self) -> usize {
        self.entries.len() / self.dim
    }

    /// `1 + n + ⋯ + n^{m-2}`: the position of `(i,…,i)` inside row `i` is
    /// `(i-1)` times this stride.
    pub(crate) fn diagonal_stride(&self) -> usize {
        let mut stride = 0;
        let mut p = 1;
        for _ in 0..self.order - 1 {
            stride += p;
            p *= self.dim;
        }
        stride
    }

    pub(crate) fn diagonal_offset(&self, i0: usize) -> usize {
        i0 * self.row_len() + i0 * self.diagonal_stride()
    }

    /// Entry at a 1-based multi-index. Panics when the index is malformed.
    pub fn get(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.order, "multi-index arity");
        assert!(
            index.iter().all(|&c| c >= 1 && c <= self.dim),
            "multi-index {index:?} out of range for dimension {}",
            self.dim
        );
        self.entries[self.offset(index)]
    }

    /// The diagonal entry `a_{i⋯i}` for 1-based `i`.
    pub fn diagonal(&self, i: usize) -> f64 {
        assert!(i >= 1 && i <= self.dim, "row {i} out of range");
        self.entries[self.diagonal_offset(i - 1)]
    }

    /// The entry `a_{j i⋯i}` (first index `j`, the other `m-1` indices `i`),
    /// 1-based.
    pub fn tail_entry(&self, j: usize, i: usize) -> f64 {
        assert!(j >= 1 && j <= self.dim && i >= 1 && i <= self.dim);
        self.entries[(j - 1) * self.row_len() + (i - 1) * self.diagonal_stride()]
    }

    /// Row `i` (1-based): the `n^{m-1}` entries with first index `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        assert!(i >= 1 && i <= self.dim, "row {i} out of range");
        self.row0(i - 1)
    }

    pub(crate) fn row0(&self, i0: usize) -> &[f64] {
        let len = self.row_len();
        &self.entries[i0 * len..(i0 + 1) * len]
    }

    fn offset(&self, index: &[usize]) -> usize {
        index.iter().fold(0, |acc, &c| acc * self.dim + (c - 1))
    }

    /// 0-based digits of a linear offset, slowest first.
    pub(crate) fn digits(&self, mut off: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = off % self.dim;
            off /= self.dim;
        }
    }

    /// The 1-based multi-index of a linear offset.
    pub fn multi_index(&self, off: usize) -> MultiIndex {
        let mut d = vec![0; self.order];
        self.digits(off, &mut d);
        MultiIndex(d.into_iter().map(|x| x + 1).collect())
    }

    /// Iterates `(multi-index, value)` over every entry in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(|(off, &v)| (self.multi_index(off), v))
    }

    /// Offset of the sorted permutation of the multi-index at `off`.
    pub(crate) fn canonical_offset(&self, off: usize, scratch: &mut [usize]) -> usize {
        self.digits(off, scratch);
        scratch.sort_unstable();
        scratch.iter().fold(0, |acc, &d| acc * self.dim + d)
    }

    /// First pair of permuted multi-indices whose entries differ, if any.
    pub fn symmetry_violation(&self) -> Option<(MultiIndex, MultiIndex)> {
        let mut scratch = vec![0; self.order];
        for off in 0..self.entries.len() {
            let canon = self.canonical_offset(off, &mut scratch);
            if self.entries[off] != self.entries[canon] {
                return Some((self.multi_index(canon), self.multi_index(off)));
            }
        }
        None
    }

    /// Exact symmetry under every permutation of the `m` indices.
    pub fn is_symmetric(&self) -> bool {
        self.symmetry_violation().is_none()
    }

    /// Average over all index permutations. The result is exactly symmetric.
    pub fn symmetrize(&self) -> Tensor {
        let mut scratch = vec![0; self.order];
        let canon: Vec<usize> = (0..self.entries.len())
            .map(|off| self.canonical_offset(off, &mut scratch))
            .collect();
        let mut sum = vec![0.0; self.entries.len()];
        let mut count = vec![0u32; self.entries.len()];
        for (off, &c) in canon.iter().enumerate() {
            sum[c] += self.entries[off];
            count[c] += 1;
        }
        let entries = canon
            .iter()
            .map(|&c| sum[c] / f64::from(count[c]))
            .collect();
        Tensor {
            order: self.order,
            dim: self.dim,
            entries,
        }
    }

    fn check_vector(&self, x: &[f64]) -> Result<(), TensorError> {
        if x.len() != self.dim {
            return Err(TensorError::LengthMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Products `x_{i_2}⋯x_{i_m}` over all tails, in row storage order.
    fn tail_products(&self, x: &[f64]) -> Vec<f64> {
        let mut prods = Vec::with_capacity(self.row_len());
        prods.push(1.0);
        for _ in 1..self.order {
            let prev = std::mem::take(&mut prods);
            prods.reserve(prev.len() * self.dim);
            for p in prev {
                prods.extend(x.iter().map(|&xi| p * xi));
            }
        }
        prods
    }

    /// `A x^{m-1}`: component `i` is `Σ a_{i i_2⋯i_m} x_{i_2}⋯x_{i_m}`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, TensorError> {
        self.check_vector(x)?;
        let tails = self.tail_products(x);
        Ok((0..self.dim)
            .map(|i0| {
                self.row0(i0)
                    .iter()
                    .zip(&tails)
                    .map(|(a, p)| a * p)
                    .sum()
            })
            .collect())
    }

    /// `A x^m = Σ a_{i_1⋯i_m} x_{i_1}⋯x_{i_m}`.
    pub fn form_value(&self, x: &[f64]) -> Result<f64, TensorError> {
        self.check_vector(x)?;
        let tails = self.tail_products(x);
        let row_len = tails.len();
        Ok(self
            .entries
            .iter()
            .enumerate()
            .map(|(off, a)| a * (x[off / row_len] * tails[off % row_len]))
            .sum())
    }

    fn check_shape(&self, other: &Tensor) -> Result<(), TensorError> {
        if self.order != other.order || self.dim != other.dim {
            return Err(TensorError::ShapeMismatch {
                left_order: self.order,
                left_dim: self.dim,
                right_order: other.order,
                right_dim: other.dim,
            });
        }
        Ok(())
    }

    /// Entrywise `self + c·other`.
    pub fn linear_combine(&self, other: &Tensor, c: f64) -> Result<Tensor, TensorError> {
        self.check_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + c * b)
            .collect();
        Tensor::new(self.order, self.dim, entries)
    }

    pub fn scale(&self, c: f64) -> Result<Tensor, TensorError> {
        Tensor::new(
            self.order,
            self.dim,
            self.entries.iter().map(|a| c * a).collect(),
        )
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64, TensorError> {
        self.check_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Entries whose bit pattern is not `+0.0`, in storage order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| v.to_bits() != 0)
            .map(|(off, &v)| (self.multi_index(off), v))
    }
}
