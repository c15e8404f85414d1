//! Fully symmetric tensors stored by canonical (sorted) multi-index.
//!
//! A rank-`n` symmetric tensor over dimension `d` has `C(n+d-1, d-1)`
//! independent components. Components are laid out in lexicographic order of
//! their canonical index, so a rank-6 tensor in six dimensions occupies 462
//! slots instead of 46656.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;

use crate::error::{Error, Result};

/// Ring operations needed by the symmetric tensor algebra.
///
/// Implemented for `f64` and for the integer polynomials of [`crate::poly`],
/// so the same recursion can evaluate numerically or produce coefficient tables.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;

    fn from_int(value: i64) -> Self;

    /// Divides by a positive integer. Exact rings panic when the division
    /// leaves a remainder.
    fn div_int(self, divisor: i64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn from_int(value: i64) -> Self {
        value as f64
    }

    fn div_int(self, divisor: i64) -> Self {
        self / divisor as f64
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    match dim {
        3 | 6 => Ok(()),
        other => Err(Error::UnsupportedDim(other)),
    }
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of independent components of a rank-`rank` symmetric tensor.
pub fn component_count(dim: usize, rank: usize) -> usize {
    binomial(rank + dim - 1, dim - 1) as usize
}

/// Sorted index tuple addressing one independent component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    dim: usize,
    entries: Vec<usize>,
}

impl MultiIndex {
    /// Sorts `indices` into canonical order after validating every label.
    pub fn canonicalize(dim: usize, indices: &[usize]) -> Result<Self> {
        check_dim(dim)?;
        if let Some(&label) = indices.iter().find(|&&l| l >= dim) {
            return Err(Error::LabelOutOfRange { label, dim });
        }
        let mut entries = indices.to_vec();
        entries.sort_unstable();
        Ok(Self { dim, entries })
    }

    /// Builds the canonical index holding `counts[l]` copies of label `l`.
    pub fn from_counts(counts: &[usize]) -> Self {
        let entries = counts
            .iter()
            .enumerate()
            .flat_map(|(label, &c)| std::iter::repeat_n(label, c))
            .collect();
        Self {
            dim: counts.len(),
            entries,
        }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Occurrence count of every label.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim];
        for &e in &self.entries {
            counts[e] += 1;
        }
        counts
    }

    /// Number of distinct permutations of the index tuple.
    pub fn multiplicity(&self) -> u64 {
        self.counts()
            .iter()
            .fold(factorial(self.rank()), |acc, &c| acc / factorial(c))
    }

    /// Offset of this component in the lexicographic canonical layout.
    pub fn position(&self) -> usize {
        position_of(self.dim, &self.entries)
    }
}

/// Canonical form of an index tuple.
pub fn canonicalize(dim: usize, indices: &[usize]) -> Result<MultiIndex> {
    MultiIndex::canonicalize(dim, indices)
}

/// `rank! / prod(count!)` for a canonical index.
pub fn multiplicity(index: &MultiIndex) -> u64 {
    index.multiplicity()
}

// Number of non-decreasing sequences of length `len` drawn from labels `from..dim`.
fn tail_count(dim: usize, len: usize, from: usize) -> usize {
    binomial(len + (dim - from) - 1, len) as usize
}

fn position_of(dim: usize, sorted: &[usize]) -> usize {
    let n = sorted.len();
    let mut pos = 0;
    let mut prev = 0;
    for (k, &label) in sorted.iter().enumerate() {
        for v in prev..label {
            pos += tail_count(dim, n - k - 1, v);
        }
        prev = label;
    }
    pos
}

/// Iterator over canonical indices of a given rank in layout order.
#[derive(Debug, Clone)]
pub struct CanonicalIndices {
    dim: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for CanonicalIndices {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        if let Some(k) = current.iter().rposition(|&e| e + 1 < self.dim) {
            let mut succ = current.clone();
            let v = succ[k] + 1;
            succ[k..].iter_mut().for_each(|e| *e = v);
            self.next = Some(succ);
        }
        Some(MultiIndex {
            dim: self.dim,
            entries: current,
        })
    }
}

pub fn canonical_indices(dim: usize, rank: usize) -> CanonicalIndices {
    CanonicalIndices {
        dim,
        next: Some(vec![0; rank]),
    }
}

/// Fully symmetric tensor in compressed canonical storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor<S = f64> {
    dim: usize,
    rank: usize,
    data: Vec<S>,
}

impl<S: Scalar> SymTensor<S> {
    pub fn zeros(dim: usize, rank: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            rank,
            data: vec![S::zero(); component_count(dim, rank)],
        })
    }

    /// Rank-0 tensor.
    pub fn scalar(dim: usize, value: S) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            rank: 0,
            data: vec![value],
        })
    }

    /// Rank-1 tensor; the dimension is the vector length.
    pub fn from_vector(values: Vec<S>) -> Result<Self> {
        check_dim(values.len())?;
        Ok(Self {
            dim: values.len(),
            rank: 1,
            data: values,
        })
    }

    /// The rank-2 unit tensor.
    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, 2, |m| {
            let e = m.entries();
            S::from_int(i64::from(e[0] == e[1]))
        })
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&MultiIndex) -> S) -> Result<Self> {
        check_dim(dim)?;
        let data = canonical_indices(dim, rank).map(|m| f(&m)).collect();
        Ok(Self { dim, rank, data })
    }

    /// Components in canonical layout order.
    pub fn from_data(dim: usize, rank: usize, data: Vec<S>) -> Result<Self> {
        check_dim(dim)?;
        let expected = component_count(dim, rank);
        if data.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "expected {expected} components, got {}",
                data.len()
            )));
        }
        Ok(Self { dim, rank, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    /// Reads the component at any ordering of `indices`.
    pub fn get(&self, indices: &[usize]) -> Result<&S> {
        if indices.len() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: indices.len(),
            });
        }
        let m = MultiIndex::canonicalize(self.dim, indices)?;
        Ok(&self.data[m.position()])
    }

    pub fn get_canonical(&self, index: &MultiIndex) -> &S {
        debug_assert_eq!(index.dim(), self.dim);
        debug_assert_eq!(index.rank(), self.rank);
        &self.data[index.position()]
    }

    pub fn set(&mut self, indices: &[usize], value: S) -> Result<()> {
        if indices.len() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: indices.len(),
            });
        }
        let pos = MultiIndex::canonicalize(self.dim, indices)?.position();
        self.data[pos] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &S)> + '_ {
        canonical_indices(self.dim, self.rank).zip(self.data.iter())
    }

    pub fn map<T: Scalar>(&self, f: impl FnMut(&S) -> T) -> SymTensor<T> {
        SymTensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, factor: S) -> Self {
        self.map(|v| v.clone() * factor.clone())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self {
            dim: self.dim,
            rank: self.rank,
            data,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Self {
            dim: self.dim,
            rank: self.rank,
            data,
        })
    }
}

impl SymTensor<f64> {
    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Expands into a row-major array of all `dim^rank` entries.
    pub fn to_dense(&self) -> Vec<f64> {
        let total = self.dim.pow(self.rank as u32);
        let mut dense = Vec::with_capacity(total);
        let mut tuple = vec![0usize; self.rank];
        for flat in 0..total {
            let mut rem = flat;
            for slot in tuple.iter_mut().rev() {
                *slot = rem % self.dim;
                rem /= self.dim;
            }
            tuple.sort_unstable();
            dense.push(self.data[position_of(self.dim, &tuple)]);
        }
        dense
    }

    /// Compresses a dense row-major array, reading each canonical entry.
    /// The array is assumed symmetric; no symmetrization is performed.
    pub fn from_dense(dim: usize, rank: usize, dense: &[f64]) -> Result<Self> {
        check_dim(dim)?;
        let total = dim.pow(rank as u32);
        if dense.len() != total {
            return Err(Error::InvalidParameter(format!(
                "dense array of length {} does not match {dim}^{rank}",
                dense.len()
            )));
        }
        Self::from_fn(dim, rank, |m| {
            let flat = m.entries().iter().fold(0, |acc, &e| acc * dim + e);
            dense[flat]
        })
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

// Calls `visit` with every count vector `s` such that `s[l] <= counts[l]` and
// `sum(s) == total`.
fn for_each_split(counts: &[usize], total: usize, visit: &mut impl FnMut(&[usize])) {
    fn walk(
        counts: &[usize],
        label: usize,
        remaining: usize,
        current: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if label == counts.len() {
            if remaining == 0 {
                visit(current);
            }
            return;
        }
        let cap: usize = counts[label..].iter().sum();
        if remaining > cap {
            return;
        }
        for take in 0..=counts[label].min(remaining) {
            current.push(take);
            walk(counts, label + 1, remaining - take, current, visit);
            current.pop();
        }
    }
    let mut current = Vec::with_capacity(counts.len());
    walk(counts, 0, total, &mut current, visit);
}

// Sum over index splits weighted by prod C(c_l, s_l); equals S[A (x) B] / (p! q!).
pub(crate) fn split_sum<S: Scalar>(a: &SymTensor<S>, b: &SymTensor<S>) -> Result<SymTensor<S>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let dim = a.dim;
    let p = a.rank;
    SymTensor::from_fn(dim, a.rank + b.rank, |m| {
        let counts = m.counts();
        let mut acc = S::zero();
        for_each_split(&counts, p, &mut |s| {
            let weight: u64 = counts
                .iter()
                .zip(s)
                .map(|(&c, &k)| binomial(c, k))
                .product();
            let rest: Vec<usize> = counts.iter().zip(s).map(|(&c, &k)| c - k).collect();
            let av = a.data[MultiIndex::from_counts(s).position()].clone();
            let bv = b.data[MultiIndex::from_counts(&rest).position()].clone();
            acc = acc.clone() + S::from_int(weight as i64) * av * bv;
        });
        acc
    })
}

/// The permutation operator applied to the outer product `A (x) B`: each
/// component is the sum over all `(p+q)!` orderings of its indices.
pub fn sym_raw<S: Scalar>(a: &SymTensor<S>, b: &SymTensor<S>) -> Result<SymTensor<S>> {
    let partial = split_sum(a, b)?;
    let factor = S::from_int((factorial(a.rank) * factorial(b.rank)) as i64);
    Ok(partial.scale(factor))
}

/// Symmetric part of `A (x) B`, i.e. [`sym_raw`] divided by `(p+q)!`.
pub fn sym_product<S: Scalar>(a: &SymTensor<S>, b: &SymTensor<S>) -> Result<SymTensor<S>> {
    let partial = split_sum(a, b)?;
    let divisor = binomial(a.rank + b.rank, a.rank) as i64;
    Ok(partial.map(|v| v.clone().div_int(divisor)))
}

/// Symmetrized Kronecker delta of two index tuples: the permanent of the
/// 0/1 label-match matrix, by enumeration of all bijections.
pub fn perm_delta(i: &MultiIndex, j: &MultiIndex) -> Result<u64> {
    if i.dim() != j.dim() {
        return Err(Error::DimensionMismatch {
            left: i.dim(),
            right: j.dim(),
        });
    }
    if i.rank() != j.rank() {
        return Err(Error::RankMismatch {
            left: i.rank(),
            right: j.rank(),
        });
    }
    let (a, b) = (i.entries(), j.entries());
    let n = a.len();
    let count = (0..n)
        .permutations(n)
        .filter(|sigma| sigma.iter().enumerate().all(|(k, &s)| a[k] == b[s]))
        .count();
    Ok(count as u64)
}

/// Full contraction over all index tuples, computed on canonical storage.
pub fn inner<S: Scalar>(a: &SymTensor<S>, b: &SymTensor<S>) -> Result<S> {
    a.check_same_shape(b)?;
    let mut acc = S::zero();
    for ((m, av), bv) in a.iter().zip(&b.data) {
        acc = acc + S::from_int(m.multiplicity() as i64) * av.clone() * bv.clone();
    }
    Ok(acc)
}

/// `v (x) v (x) ... (x) v` with `k` factors; `k = 0` gives the scalar 1.
pub fn outer_power(v: &[f64], k: usize) -> Result<SymTensor> {
    SymTensor::from_fn(v.len(), k, |m| m.entries().iter().map(|&e| v[e]).product())
}
