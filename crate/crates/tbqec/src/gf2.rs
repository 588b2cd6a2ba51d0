//! Dense bit-packed linear algebra over GF(2).
//!
//! Matrices and vectors store 64 columns per machine word. Rank, kernels,
//! row-space membership and solving all reduce to word-wide XOR and
//! popcount, which keeps the distance enumeration and decoding loops cheap.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bad matrix text: {0}")]
    Parse(String),
}

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A bit vector over GF(2). Bits beyond `len` are kept zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
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

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
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
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let w = i / WORD_BITS;
        let b = i % WORD_BITS;
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bitwise overlap with `other`.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Index of the lowest set bit, if any.
    pub fn first_set(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                out.push(wi * WORD_BITS + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A dense bit-packed matrix over GF(2), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        Self {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BinaryVector]) -> Self {
        let cols = rows.first().map_or(0, BinaryVector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
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
        debug_assert!(r < self.rows && c < self.cols);
        self.words[r * self.words_per_row + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.words_per_row + c / WORD_BITS;
        let b = c % WORD_BITS;
        if value {
            self.words[idx] |= 1 << b;
        } else {
            self.words[idx] &= !(1 << b);
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn row(&self, r: usize) -> BinaryVector {
        BinaryVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BinaryVector) {
        assert_eq!(v.len(), self.cols);
        self.row_words_mut(r).copy_from_slice(v.words());
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (src_off, dst_off) = (src * self.words_per_row, dst * self.words_per_row);
        for k in 0..self.words_per_row {
            let w = self.words[src_off + k];
            self.words[dst_off + k] ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.words.swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let words = self.row_words(r);
            for (wi, &w) in words.iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let c = wi * WORD_BITS + bits.trailing_zeros() as usize;
                    t.set(c, r, true);
                    bits &= bits - 1;
                }
            }
        }
        t
    }

    /// Standard product; panics on shape mismatch.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let c = wi * WORD_BITS + bits.trailing_zeros() as usize;
                    out.xor_foreign_row(rhs, c, r);
                    bits &= bits - 1;
                }
            }
        }
        out
    }

    fn xor_foreign_row(&mut self, other: &Self, other_row: usize, dst: usize) {
        let dst_off = dst * self.words_per_row;
        for (k, w) in other.row_words(other_row).iter().enumerate() {
            self.words[dst_off + k] ^= w;
        }
    }

    /// `self * other^T`, computed row-dot-row.
    pub fn mul_transpose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "shape mismatch in mul_transpose");
        let mut out = Self::zeros(self.rows, other.rows);
        for r in 0..self.rows {
            let a = self.row_words(r);
            for s in 0..other.rows {
                let b = other.row_words(s);
                let mut acc = 0u64;
                for (x, y) in a.iter().zip(b) {
                    acc ^= x & y;
                }
                if acc.count_ones() % 2 == 1 {
                    out.set(r, s, true);
                }
            }
        }
        out
    }

    pub fn mul_vector(&self, v: &BinaryVector) -> BinaryVector {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let mut out = BinaryVector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(v.words()) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn hconcat(&self, right: &Self) -> Self {
        assert_eq!(self.rows, right.rows, "row mismatch in hconcat");
        let mut out = Self::zeros(self.rows, self.cols + right.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..right.cols {
                if right.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        out
    }

    pub fn vconcat(&self, bottom: &Self) -> Self {
        assert_eq!(self.cols, bottom.cols, "column mismatch in vconcat");
        let mut out = Self::zeros(self.rows + bottom.rows, self.cols);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.words[self.words.len()..].copy_from_slice(&bottom.words);
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(ri, ci, true);
                }
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, piv);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right null space, one basis vector per row.
    /// Row count is `cols - rank`; returns a 0 x cols matrix for full column rank.
    pub fn kernel_basis(&self) -> Self {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let is_pivot = {
            let mut mask = vec![false; self.cols];
            for &p in &pivots {
                mask[p] = true;
            }
            mask
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (bi, &f) in free.iter().enumerate() {
            basis.set(bi, f, true);
            for (ri, &p) in pivots.iter().enumerate() {
                if r.get(ri, f) {
                    basis.set(bi, p, true);
                }
            }
        }
        basis
    }

    /// Plain-text dump: first line "rows cols", then one 0/1 string per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, Gf2Error> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Gf2Error::Parse("empty input".into()))?;
        let mut it = header.split_whitespace();
        let parse = |s: Option<&str>| {
            s.and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| Gf2Error::Parse(format!("bad header {header:?}")))
        };
        let rows = parse(it.next())?;
        let cols = parse(it.next())?;
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Gf2Error::Parse(format!("missing row {r}")))?;
            let line = line.trim();
            if line.len() != cols {
                return Err(Gf2Error::Parse(format!(
                    "row {r} has {} columns, expected {cols}",
                    line.len()
                )));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    other => {
                        return Err(Gf2Error::Parse(format!("bad character {other:?} in row {r}")))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Some `e` with `self * e = s`, or `None` when inconsistent.
    /// Free variables are set to zero, so the result is deterministic.
    pub fn solve(&self, s: &BinaryVector) -> Option<BinaryVector> {
        assert_eq!(s.len(), self.rows, "rhs length must equal row count");
        // Eliminate on the augmented matrix [self | s].
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            if s.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| aug.get(r, c)) else {
                continue;
            };
            aug.swap_rows(rank, piv);
            for r in 0..self.rows {
                if r != rank && aug.get(r, c) {
                    aug.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        // Inconsistent iff some zero row has a set rhs bit.
        for r in rank..self.rows {
            if aug.get(r, self.cols) {
                return None;
            }
        }
        let mut e = BinaryVector::zeros(self.cols);
        for (ri, &p) in pivots.iter().enumerate() {
            if aug.get(ri, self.cols) {
                e.set(p, true);
            }
        }
        Some(e)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Cached echelon form for repeated span queries.
///
/// Distance enumeration performs ~10^5 membership tests against the same
/// row space; reducing an incoming vector against the stored echelon rows is
/// O(rows * words) with no re-elimination.
#[derive(Clone)]
pub struct Echelon {
    cols: usize,
    // Rows in echelon form, sorted by ascending pivot column.
    rows: Vec<BinaryVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_matrix(m: &BinaryMatrix) -> Self {
        let mut e = Self::new(m.cols());
        for r in 0..m.rows() {
            e.insert(m.row(r));
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, v: &mut BinaryVector) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
    }

    /// Adds `v` to the span. Returns true when `v` was independent.
    pub fn insert(&mut self, mut v: BinaryVector) -> bool {
        assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(p) = v.first_set() else {
            return false;
        };
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &BinaryVector) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }
}

/// True iff `v` lies in the row space of `m`.
pub fn row_space_contains(m: &BinaryMatrix, v: &BinaryVector) -> Result<bool, Gf2Error> {
    if v.len() != m.cols() {
        return Err(Gf2Error::DimensionMismatch {
            expected: m.cols(),
            got: v.len(),
        });
    }
    Ok(Echelon::from_matrix(m).contains(v))
}

/// Basis of ker(a) ∩ ker(b), via the kernel of the stacked matrix.
pub fn intersect_kernels(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<BinaryMatrix, Gf2Error> {
    if a.cols() != b.cols() {
        return Err(Gf2Error::DimensionMismatch {
            expected: a.cols(),
            got: b.cols(),
        });
    }
    Ok(a.vconcat(b).kernel_basis())
}
