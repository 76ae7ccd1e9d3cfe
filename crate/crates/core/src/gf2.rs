//! Dense linear algebra over the two-element field.
//!
//! Bits are packed into `u64` words, little-endian within a word: bit `i`
//! lives in word `i / 64` at position `i % 64`. Unused high bits of the final
//! word are always zero, which lets word-level popcount and equality work
//! without masking.
//!
//! Elimination always pivots on the first row with a nonzero entry in the
//! current column, so every result here is a deterministic function of its
//! input.

use std::fmt;

use crate::error::{Error, Result};

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over F₂ of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector {
            words: vec![u64::MAX; words_for(len)],
            len,
        };
        v.clear_tail();
        v
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
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

    /// Builds a vector from packed words; bits past `len` are discarded.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVector { words, len };
        v.clear_tail();
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse01(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Format(format!(
                        "bit string has '{other}' at position {i}; only 0 and 1 are allowed"
                    )))
                }
            }
        }
        Ok(Self::from_bools(&bits))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// Inner product over F₂.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn weight(&self) -> usize {
        hamming_weight(self)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    /// Copy of this vector with `extra` zero bits appended.
    pub fn extended(&self, extra: usize) -> BitVector {
        BitVector::from_words(self.words.clone(), self.len + extra)
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Number of one entries.
pub fn hamming_weight(v: &BitVector) -> usize {
    v.words.iter().map(|w| w.count_ones() as usize).sum()
}

/// A dense `rows × cols` matrix over F₂, stored row by row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVector::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(k: usize) -> Self {
        BitMatrix {
            rows: (0..k).map(|i| BitVector::unit(k, i)).collect(),
            cols: k,
        }
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::input(format!(
                "row {i} has length {} but the matrix has {cols} columns",
                r.len()
            )));
        }
        Ok(BitMatrix { rows, cols })
    }

    pub fn from_bool_rows(rows: &[Vec<bool>], cols: usize) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| BitVector::from_bools(r)).collect(), cols)
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Column `c` as a vector of length `rows`.
    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "vector length does not match column count");
        let bits: Vec<bool> = self.rows.iter().map(|r| r.dot(x)).collect();
        BitVector::from_bools(&bits)
    }

    /// Row-vector product `yᵀ · self`, i.e. the XOR of the rows selected by `y`.
    pub fn combine_rows(&self, y: &BitVector) -> BitVector {
        assert_eq!(y.len(), self.rows.len(), "selector length does not match row count");
        let mut acc = BitVector::zeros(self.cols);
        for i in y.iter_ones() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    /// Reduced row echelon form together with the pivot column of each
    /// nonzero row. Zero rows are dropped.
    pub fn row_echelon(&self) -> (Vec<BitVector>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let pivots = reduce_rows(&mut rows, self.cols);
        rows.truncate(pivots.len());
        (rows, pivots)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Gauss-Jordan elimination restricted to the first `ncols` columns.
/// Rows are permuted so the first `rank` rows carry the pivots; the returned
/// vector lists the pivot column of each of those rows.
fn reduce_rows(rows: &mut [BitVector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let (head, tail) = rows.split_at_mut(next);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row exists");
        for r in head.iter_mut().chain(below.iter_mut()) {
            if r.get(col) {
                r.xor_assign(pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

pub fn rank(m: &BitMatrix) -> usize {
    let mut rows = m.rows.clone();
    reduce_rows(&mut rows, m.cols).len()
}

/// A basis of `{x : m·x = 0}`; its size is `cols − rank(m)`.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let mut rows = m.rows.clone();
    let pivots = reduce_rows(&mut rows, m.cols);
    kernel_from_reduced(&rows, &pivots, m.cols)
}

fn kernel_from_reduced(rows: &[BitVector], pivots: &[usize], ncols: usize) -> Vec<BitVector> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVector::zeros(ncols);
            v.set(free, true);
            for (r, &p) in pivots.iter().enumerate() {
                if rows[r].get(free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

/// A form `c·u ⊕ c₀` over some fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineForm {
    pub coefficients: BitVector,
    pub constant: bool,
}

impl AffineForm {
    pub fn zero(vars: usize) -> Self {
        AffineForm {
            coefficients: BitVector::zeros(vars),
            constant: false,
        }
    }

    pub fn variable(vars: usize, index: usize) -> Self {
        AffineForm {
            coefficients: BitVector::unit(vars, index),
            constant: false,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.coefficients.len()
    }

    /// True if no variable occurs (the form is the constant `constant`).
    pub fn is_constant(&self) -> bool {
        self.coefficients.is_zero()
    }

    pub fn xor_assign(&mut self, other: &AffineForm) {
        self.coefficients.xor_assign(&other.coefficients);
        self.constant ^= other.constant;
    }

    pub fn eval(&self, assignment: &BitVector) -> bool {
        self.coefficients.dot(assignment) ^ self.constant
    }
}

/// Solution set `{particular ⊕ span(kernel_basis)}` of an affine system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub feasible: bool,
    pub particular: BitVector,
    pub kernel_basis: Vec<BitVector>,
}

impl AffineSolution {
    /// Number of free parameters, `log₂` of the solution count.
    pub fn dimension(&self) -> usize {
        self.kernel_basis.len()
    }
}

/// Solves `m·x = rhs`.
pub fn solve_affine(m: &BitMatrix, rhs: &BitVector) -> Result<AffineSolution> {
    if rhs.len() != m.num_rows() {
        return Err(Error::input(format!(
            "right-hand side has length {} but the system has {} equations",
            rhs.len(),
            m.num_rows()
        )));
    }
    let ncols = m.num_cols();
    let mut rows: Vec<BitVector> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut aug = r.extended(1);
            aug.set(ncols, rhs.get(i));
            aug
        })
        .collect();
    let pivots = reduce_rows(&mut rows, ncols);
    if rows[pivots.len()..].iter().any(|r| r.get(ncols)) {
        return Ok(AffineSolution {
            feasible: false,
            particular: BitVector::zeros(0),
            kernel_basis: Vec::new(),
        });
    }
    let mut particular = BitVector::zeros(ncols);
    for (r, &p) in pivots.iter().enumerate() {
        if rows[r].get(ncols) {
            particular.set(p, true);
        }
    }
    let kernel = kernel_from_reduced(&rows, &pivots, ncols)
        .into_iter()
        .map(|v| BitVector::from_words(v.words, ncols))
        .collect();
    Ok(AffineSolution {
        feasible: true,
        particular,
        kernel_basis: kernel,
    })
}
