//! Bit-packed linear algebra over the field of two elements.
//!
//! Vectors and matrix rows are packed into single `u64` words (all objects in
//! this crate have at most 8 columns), so row operations are word-parallel:
//! adding one row to another is one XOR.

use crate::error::{Error, Result};

/// A vector over `F_2` of length at most 64, packed into one word.
///
/// Entry `i` (zero-based) is bit `i` of `bits`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    bits: u64,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        assert!(
            (1..=64).contains(&len),
            "BitVec length must be in 1..=64, got {len}"
        );
        BitVec { len, bits: 0 }
    }

    /// Builds a vector from the low `len` bits of `bits`; higher bits are dropped.
    pub fn from_word(len: usize, bits: u64) -> Self {
        let mut v = Self::zeros(len);
        v.bits = bits & mask(len);
        v
    }

    pub fn from_coords(coords: &[u8]) -> Self {
        let mut v = Self::zeros(coords.len());
        for (i, &c) in coords.iter().enumerate() {
            v.set(i, c % 2 == 1);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    pub fn word(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.bits >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    /// Inner product over `F_2`.
    pub fn dot(&self, other: &BitVec) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::Dimension(format!(
                "dot of lengths {} and {}",
                self.len, other.len
            )));
        }
        Ok(parity(self.bits & other.bits))
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn parity(word: u64) -> bool {
    word.count_ones() % 2 == 1
}

#[inline]
pub(crate) fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A matrix over `F_2`, one packed word per row (at most 64 columns).
///
/// Column `j` of row `i` is bit `j` of `rows[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        assert!(nrows >= 1 && (1..=64).contains(&ncols));
        F2Matrix {
            nrows,
            ncols,
            rows: vec![0; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                if f(i, j) {
                    m.rows[i] |= 1 << j;
                }
            }
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<u64>) -> Self {
        assert!(!rows.is_empty());
        let m = mask(ncols);
        F2Matrix {
            nrows: rows.len(),
            ncols,
            rows: rows.into_iter().map(|r| r & m).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row_word(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.nrows && j < self.ncols);
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.nrows && j < self.ncols);
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::Dimension("matrix addition shapes differ".into()));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(F2Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        })
    }

    /// Matrix product. Row `i` of the result is the XOR of the rows of
    /// `other` selected by the set bits of row `i` of `self`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.ncols != other.nrows {
            return Err(Error::Dimension(format!(
                "product of {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut rows = vec![0u64; self.nrows];
        for i in 0..self.nrows {
            let mut sel = self.rows[i];
            let mut acc = 0u64;
            while sel != 0 {
                let k = sel.trailing_zeros() as usize;
                acc ^= other.rows[k];
                sel &= sel - 1;
            }
            rows[i] = acc;
        }
        Ok(F2Matrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        })
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if self.ncols != v.len() {
            return Err(Error::Dimension(format!(
                "product of {}x{} by vector of length {}",
                self.nrows,
                self.ncols,
                v.len()
            )));
        }
        let mut out = BitVec::zeros(self.nrows);
        for i in 0..self.nrows {
            if parity(self.rows[i] & v.word()) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            let mut r = self.rows[i];
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                t.rows[j] |= 1 << i;
                r &= r - 1;
            }
        }
        t
    }

    /// Gauss-Jordan inverse on packed rows. Singular input is an error.
    pub fn inverse(&self) -> Result<F2Matrix> {
        if self.nrows != self.ncols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.nrows;
        let mut a = self.rows.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| (a[r] >> col) & 1 == 1);
            let pivot = match pivot {
                Some(p) => p,
                None => return Err(Error::Singular),
            };
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && (a[r] >> col) & 1 == 1 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Ok(F2Matrix {
            nrows: n,
            ncols: n,
            rows: inv,
        })
    }

    pub fn rank(&self) -> usize {
        let mut a = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.ncols {
            if let Some(p) = (rank..self.nrows).find(|&r| (a[r] >> col) & 1 == 1) {
                a.swap(rank, p);
                for r in 0..self.nrows {
                    if r != rank && (a[r] >> col) & 1 == 1 {
                        a[r] ^= a[rank];
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols && *self == self.transpose()
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> F2Matrix {
        assert!(r0 + h <= self.nrows && c0 + w <= self.ncols);
        let rows = (0..h)
            .map(|i| (self.rows[r0 + i] >> c0) & mask(w))
            .collect();
        F2Matrix {
            nrows: h,
            ncols: w,
            rows,
        }
    }

    /// Assembles `[A B; C D]` from four `g x g` blocks.
    pub fn from_blocks(a: &F2Matrix, b: &F2Matrix, c: &F2Matrix, d: &F2Matrix) -> F2Matrix {
        let g = a.nrows;
        assert!(
            [a, b, c, d]
                .iter()
                .all(|m| m.nrows == g && m.ncols == g)
        );
        let mut rows = Vec::with_capacity(2 * g);
        for i in 0..g {
            rows.push(a.rows[i] | (b.rows[i] << g));
        }
        for i in 0..g {
            rows.push(c.rows[i] | (d.rows[i] << g));
        }
        F2Matrix {
            nrows: 2 * g,
            ncols: 2 * g,
            rows,
        }
    }

    /// The diagonal of `self * other'` as a vector: entry `i` is the parity
    /// of `row_i(self) & row_i(other)`.
    pub fn diag_of_mul_transpose(&self, other: &F2Matrix) -> Result<BitVec> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::Dimension("diagonal of product shapes differ".into()));
        }
        let mut v = BitVec::zeros(self.nrows);
        for i in 0..self.nrows {
            if parity(self.rows[i] & other.rows[i]) {
                v.set(i, true);
            }
        }
        Ok(v)
    }

    /// Parity of the trace (square matrices only).
    pub fn trace_parity(&self) -> bool {
        assert_eq!(self.nrows, self.ncols);
        let mut t = false;
        for i in 0..self.nrows {
            t ^= (self.rows[i] >> i) & 1 == 1;
        }
        t
    }

    /// Quadratic form `v' M v` over `F_2`.
    pub fn quadratic_form(&self, v: &BitVec) -> Result<bool> {
        let mv = self.mul_vec(v)?;
        v.dot(&mv)
    }
}

impl std::fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            if i + 1 < self.nrows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}
