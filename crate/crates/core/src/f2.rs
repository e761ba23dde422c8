//! Dense linear algebra over the two-element field.
//!
//! Rows are packed into `u64` words. Matrices that model an involution on
//! `H^1(M; Z/2)` act on *row vectors*: row `i` of a matrix holds the image of
//! the `i`-th basis vector. With this convention a change of basis whose rows
//! are the new basis vectors conjugates `s` to `C * s * C^-1`.
//!
//! The general-purpose routines (`kernel_basis`, `image_basis`, `solve`) use
//! the usual column action `x -> M x`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix of size {0} has odd dimension; an involution on H^1 needs size 2g")]
    OddSize(usize),
    #[error("matrix does not square to the identity")]
    NotInvolution,
    #[error("matrix is singular")]
    Singular,
    #[error("normal form requires s <= g (got g = {g}, s = {s})")]
    BlockCountTooLarge { g: usize, s: usize },
    #[error("invalid matrix JSON: {0}")]
    Parse(String),
}

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b & 1 == 1);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn add_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Dot product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            & 1
            == 1
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl std::ops::Add for &BitVector {
    type Output = BitVector;

    fn add(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_bitstring())
    }
}

/// Dense GF(2) matrix, rows packed into machine words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Row-reduced echelon form together with its pivot columns.
struct Echelon {
    reduced: BitMatrix,
    pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let stride = words_for(n_cols);
        BitMatrix {
            n_rows,
            n_cols,
            stride,
            data: vec![0; stride * n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, F2Error> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), n_cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(F2Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_row_vectors(n_cols: usize, rows: &[BitVector]) -> Result<Self, F2Error> {
        let mut m = Self::zeros(rows.len(), n_cols);
        for (i, v) in rows.iter().enumerate() {
            if v.len() != n_cols {
                return Err(F2Error::DimensionMismatch {
                    expected: n_cols,
                    found: v.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(&v.words);
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n_rows && j < self.n_cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.n_rows && j < self.n_cols);
        let idx = i * self.stride + j / WORD;
        let mask = 1u64 << (j % WORD);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        let v = self.get(i, j);
        self.set(i, j, !v);
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            len: self.n_cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.n_rows).map(|i| self.row(i))
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.n_rows);
        for i in 0..self.n_rows {
            v.set(i, self.get(i, j));
        }
        v
    }

    /// XOR row `src` into row `dst`.
    fn add_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (lo, hi) = self.data.split_at_mut(dst.max(src) * s);
        let (d, r) = if dst < src {
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (a, b) in d.iter_mut().zip(r) {
            *a ^= b;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix, F2Error> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(F2Error::DimensionMismatch {
                expected: self.n_rows * self.n_cols,
                found: other.n_rows * other.n_cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// `self + Id`.
    pub fn plus_identity(&self) -> Result<BitMatrix, F2Error> {
        self.require_square()?;
        let mut out = self.clone();
        for i in 0..self.n_rows {
            out.flip(i, i);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, F2Error> {
        if self.n_cols != other.n_rows {
            return Err(F2Error::DimensionMismatch {
                expected: self.n_cols,
                found: other.n_rows,
            });
        }
        let mut out = BitMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                if self.get(i, k) {
                    let (o, src) = (i * out.stride, k * other.stride);
                    for w in 0..out.stride {
                        out.data[o + w] ^= other.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Column action `M x`.
    pub fn mul_vector(&self, x: &BitVector) -> Result<BitVector, F2Error> {
        if x.len() != self.n_cols {
            return Err(F2Error::DimensionMismatch {
                expected: self.n_cols,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.n_rows);
        for i in 0..self.n_rows {
            let bit = self
                .row_words(i)
                .iter()
                .zip(&x.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            out.set(i, bit == 1);
        }
        Ok(out)
    }

    /// Row action `x M`.
    pub fn apply_row(&self, x: &BitVector) -> Result<BitVector, F2Error> {
        if x.len() != self.n_rows {
            return Err(F2Error::DimensionMismatch {
                expected: self.n_rows,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.n_cols);
        for i in x.ones() {
            for (a, b) in out.words.iter_mut().zip(self.row_words(i)) {
                *a ^= b;
            }
        }
        Ok(out)
    }

    fn require_square(&self) -> Result<(), F2Error> {
        if self.is_square() {
            Ok(())
        } else {
            Err(F2Error::NotSquare {
                rows: self.n_rows,
                cols: self.n_cols,
            })
        }
    }

    /// Reduced row echelon form. Pivots are taken leftmost column first,
    /// topmost candidate row first.
    fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.n_cols {
            if next == m.n_rows {
                break;
            }
            let Some(p) = (next..m.n_rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(next, p);
            for r in 0..m.n_rows {
                if r != next && m.get(r, col) {
                    m.add_row(r, next);
                }
            }
            pivots.push(col);
            next += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // forward elimination only; cheaper than the full reduced form
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.n_cols {
            if rank == m.n_rows {
                break;
            }
            let Some(p) = (rank..m.n_rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in rank + 1..m.n_rows {
                if m.get(r, col) {
                    m.add_row(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of `{x : M x = 0}`, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let Echelon { reduced, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.n_cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVector::unit(self.n_cols, f);
                for (r, &p) in pivots.iter().enumerate() {
                    if reduced.get(r, f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Columns at the pivot positions; a basis of the column space.
    pub fn image_basis(&self) -> Vec<BitVector> {
        self.pivot_columns()
            .into_iter()
            .map(|c| self.column(c))
            .collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon().pivots
    }

    /// Some `x` with `M x = v`, or `None` when `v` is outside the image.
    pub fn solve(&self, v: &BitVector) -> Result<Option<BitVector>, F2Error> {
        if v.len() != self.n_rows {
            return Err(F2Error::DimensionMismatch {
                expected: self.n_rows,
                found: v.len(),
            });
        }
        let mut aug = BitMatrix::zeros(self.n_rows, self.n_cols + 1);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.n_cols, v.get(i));
        }
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.last() == Some(&self.n_cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.n_cols);
        for (r, &p) in pivots.iter().enumerate() {
            x.set(p, reduced.get(r, self.n_cols));
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<BitMatrix, F2Error> {
        self.require_square()?;
        let n = self.n_rows;
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, true);
        }
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(F2Error::Singular);
        }
        let mut inv = BitMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, reduced.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.n_rows
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == BitMatrix::identity(self.n_rows)
    }

    /// `true` iff `M * M = Id`.
    pub fn is_involution(&self) -> Result<bool, F2Error> {
        self.require_square()?;
        Ok(self.mul(self)?.is_identity())
    }

    /// A uniformly random invertible matrix, by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
        loop {
            let mut m = BitMatrix::zeros(n, n);
            for w in m.data.iter_mut() {
                *w = rng.gen();
            }
            m.clear_padding();
            if m.is_invertible() {
                return m;
            }
        }
    }

    fn clear_padding(&mut self) {
        let tail = self.n_cols % WORD;
        if tail == 0 {
            return;
        }
        let mask = (1u64 << tail) - 1;
        for i in 0..self.n_rows {
            self.data[i * self.stride + self.stride - 1] &= mask;
        }
    }

    /// Block diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.n_rows + other.n_rows, self.n_cols + other.n_cols);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.n_rows {
            for j in 0..other.n_cols {
                out.set(self.n_rows + i, self.n_cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            size: self.n_rows,
            rows: self.rows().map(|r| r.to_bitstring()).collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<BitMatrix, F2Error> {
        if json.rows.len() != json.size {
            return Err(F2Error::Parse(format!(
                "expected {} rows, found {}",
                json.size,
                json.rows.len()
            )));
        }
        let mut m = BitMatrix::zeros(json.size, json.size);
        for (i, row) in json.rows.iter().enumerate() {
            if row.chars().count() != json.size {
                return Err(F2Error::Parse(format!(
                    "row {i} has length {}, expected {}",
                    row.chars().count(),
                    json.size
                )));
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => {
                        return Err(F2Error::Parse(format!(
                            "row {i} contains {other:?}; only '0' and '1' are allowed"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn from_json_str(text: &str) -> Result<BitMatrix, F2Error> {
        let json: MatrixJson =
            serde_json::from_str(text).map_err(|e| F2Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for r in self.rows() {
            writeln!(f, "  {}", r.to_bitstring())?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", r.to_bitstring())?;
        }
        Ok(())
    }
}

/// On-disk matrix format: `{"size": 2g, "rows": ["0101...", ...]}`, column 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub size: usize,
    pub rows: Vec<String>,
}

/// Incrementally maintained echelon basis, used to test independence.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    len: usize,
    // (pivot, reduced vector); pivot = lowest set bit
    basis: Vec<(usize, BitVector)>,
}

impl SpanBuilder {
    pub fn new(len: usize) -> Self {
        SpanBuilder {
            len,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (p, b) in &self.basis {
            if v.get(*p) {
                v.add_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current span. Returns whether it was added.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.len);
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                for (_, b) in self.basis.iter_mut() {
                    if b.get(p) {
                        b.add_assign(&r);
                    }
                }
                self.basis.push((p, r));
                true
            }
        }
    }
}

/// An involution on a `2g`-dimensional GF(2) space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionMatrix(BitMatrix);

impl InvolutionMatrix {
    pub fn new(m: BitMatrix) -> Result<Self, F2Error> {
        m.require_square()?;
        if !m.n_rows().is_multiple_of(2) {
            return Err(F2Error::OddSize(m.n_rows()));
        }
        if !m.is_involution()? {
            return Err(F2Error::NotInvolution);
        }
        Ok(InvolutionMatrix(m))
    }

    pub fn genus(&self) -> usize {
        self.0.n_rows() / 2
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> BitMatrix {
        self.0
    }

    /// Conjugate `p * self * p^-1`.
    pub fn conjugate_by(&self, p: &BitMatrix) -> Result<InvolutionMatrix, F2Error> {
        let inv = p.inverse()?;
        let m = p.mul(&self.0)?.mul(&inv)?;
        Ok(InvolutionMatrix(m))
    }
}

/// `Id_{2g-2s} ⊕ K ⊕ ... ⊕ K` with `s` copies of `K = [[1,1],[0,1]]`.
pub fn normal_form_matrix(g: usize, s: usize) -> Result<InvolutionMatrix, F2Error> {
    if s > g {
        return Err(F2Error::BlockCountTooLarge { g, s });
    }
    let mut m = BitMatrix::identity(2 * g);
    let offset = 2 * (g - s);
    for b in 0..s {
        let i = offset + 2 * b;
        m.set(i, i + 1, true);
    }
    Ok(InvolutionMatrix(m))
}

/// Rank of `s + Id`.
pub fn dickson_invariant(s: &InvolutionMatrix) -> usize {
    s.0.plus_identity()
        .expect("involution matrices are square")
        .rank()
}

/// Validating wrapper around [`dickson_invariant`] for raw matrices.
pub fn dickson_of_matrix(m: &BitMatrix) -> Result<usize, F2Error> {
    Ok(dickson_invariant(&InvolutionMatrix::new(m.clone())?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleKind {
    Beta,
    Gamma,
    #[serde(rename = "A")]
    BigA,
    Alpha,
}

impl fmt::Display for RoleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoleKind::Beta => "beta",
            RoleKind::Gamma => "gamma",
            RoleKind::BigA => "A",
            RoleKind::Alpha => "alpha",
        })
    }
}

/// Role of one adapted basis vector, with a 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRole {
    pub kind: RoleKind,
    pub index: usize,
}

/// Ordered basis `(beta_i, gamma_i)_{i <= g-D}, (A_i, alpha_i)_{i <= D}` in
/// which the involution takes its block normal form.
///
/// `alpha_i` span the image of `s + Id`, `A_i (s + Id) = alpha_i`, and the
/// beta/gamma vectors complete the alphas to a basis of the kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedBasis {
    pub g: usize,
    pub dickson: usize,
    /// Number of beta (equivalently gamma) vectors, `g - D`.
    pub fixed_pairs: usize,
    /// Rows are the basis vectors, in role order.
    pub change_of_basis: BitMatrix,
    pub roles: Vec<BasisRole>,
}

impl AdaptedBasis {
    pub fn vectors_with_role(&self, kind: RoleKind) -> Vec<BitVector> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| r.kind == kind)
            .map(|(i, _)| self.change_of_basis.row(i))
            .collect()
    }

    /// `C * s * C^-1` for the change of basis `C`.
    pub fn conjugate(&self, s: &InvolutionMatrix) -> Result<BitMatrix, F2Error> {
        Ok(s.conjugate_by(&self.change_of_basis)?.into_matrix())
    }

    /// True when conjugation reproduces the normal form exactly.
    pub fn verify(&self, s: &InvolutionMatrix) -> Result<bool, F2Error> {
        let expected = normal_form_matrix(self.g, self.dickson)?;
        Ok(self.conjugate(s)? == *expected.matrix())
    }
}

pub fn adapted_basis(s: &InvolutionMatrix) -> Result<AdaptedBasis, F2Error> {
    let size = s.matrix().n_rows();
    let g = s.genus();
    // Row convention: v -> v s, i.e. column action of the transpose.
    let op = s.matrix().transpose().plus_identity()?;

    let pivots = op.pivot_columns();
    let dickson = pivots.len();
    let lifts: Vec<BitVector> = pivots.iter().map(|&p| BitVector::unit(size, p)).collect();
    let images: Vec<BitVector> = pivots.iter().map(|&p| op.column(p)).collect();

    let mut span = SpanBuilder::new(size);
    for a in &images {
        let added = span.insert(a);
        debug_assert!(added);
    }
    let mut completion = Vec::with_capacity(size - 2 * dickson);
    for k in op.kernel_basis() {
        if span.insert(&k) {
            completion.push(k);
        }
    }
    if completion.len() != size - 2 * dickson {
        // Image not contained in kernel: cannot happen for a true involution.
        return Err(F2Error::NotInvolution);
    }

    let mut rows = Vec::with_capacity(size);
    let mut roles = Vec::with_capacity(size);
    for (i, pair) in completion.chunks(2).enumerate() {
        rows.push(pair[0].clone());
        roles.push(BasisRole {
            kind: RoleKind::Beta,
            index: i + 1,
        });
        rows.push(pair[1].clone());
        roles.push(BasisRole {
            kind: RoleKind::Gamma,
            index: i + 1,
        });
    }
    for (i, (lift, image)) in lifts.into_iter().zip(images).enumerate() {
        rows.push(lift);
        roles.push(BasisRole {
            kind: RoleKind::BigA,
            index: i + 1,
        });
        rows.push(image);
        roles.push(BasisRole {
            kind: RoleKind::Alpha,
            index: i + 1,
        });
    }
    let change_of_basis = BitMatrix::from_row_vectors(size, &rows)?;
    Ok(AdaptedBasis {
        g,
        dickson,
        fixed_pairs: g - dickson,
        change_of_basis,
        roles,
    })
}
