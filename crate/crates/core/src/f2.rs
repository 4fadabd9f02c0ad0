//! Dense bit-packed linear algebra over the field with two elements.
//!
//! Everything downstream (resolutions, Ext tables, chain-map lifts) reduces
//! to Gaussian elimination over F2, one matrix per trigraded slice, so the
//! operations here are kept simple, word-packed, and strictly deterministic:
//! identical inputs produce bit-identical outputs regardless of thread
//! schedule.
//!
//! Conventions fixed project-wide:
//!  - vectors are rows; `solve` finds `x` with `x * m = target`;
//!  - `kernel_basis` is the column kernel `{v : m * v = 0}`;
//!  - column order is always the caller's canonical basis order, and no
//!    pivoting heuristic ever reorders columns.

use std::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector over F2 with packed 0/1 coordinates. Addition is XOR.
///
/// Coordinates at index `>= len` are zero and stay zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVector::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, most significant coordinate first.
    pub fn from_bits(bits: &str) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => panic!("invalid bit character {c:?}"),
            }
        }
        v
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

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor_assign length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the first nonzero coordinate, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                let i = wi * WORD_BITS + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Iterator over indices of nonzero coordinates, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    return None;
                }
                let bit = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    /// Dot product over F2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Copies into a vector of a larger length, padding with zeros.
    pub fn grown(&self, len: usize) -> BitVector {
        assert!(len >= self.len);
        let mut v = BitVector::zeros(len);
        v.words[..self.words.len()].copy_from_slice(&self.words);
        v
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A matrix over F2 stored as a list of equal-length rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(ncols: usize) -> Self {
        BitMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols, "row length mismatch");
        }
        BitMatrix { ncols, rows }
    }

    /// Parses rows of `0`/`1` strings; all rows must have equal length.
    pub fn parse(rows: &[&str]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        BitMatrix {
            ncols,
            rows: rows.iter().map(|r| BitVector::from_bits(r)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            let mut row = BitVector::zeros(n);
            row.set(i, true);
            m.push_row(row);
        }
        m
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows.push(row);
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Matrix acting on a column vector: `(m * v)[i] = <row_i, v>`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.ncols, "mul_vec dimension mismatch");
        let mut out = BitVector::zeros(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// Row vector acting on the matrix: `x * m = sum of rows selected by x`.
    pub fn vec_mul(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.rows.len(), "vec_mul dimension mismatch");
        let mut out = BitVector::zeros(self.ncols);
        for i in x.ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut rows = vec![BitVector::zeros(self.rows.len()); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                rows[j].set(i, true);
            }
        }
        BitMatrix {
            ncols: self.rows.len(),
            rows,
        }
    }
}

/// A row-reduced echelon basis of a subspace of F2^n.
///
/// Rows are fully reduced: pivots strictly increasing, and each pivot column
/// has exactly one 1 across the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonSpace {
    ncols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl EchelonSpace {
    pub fn new(ncols: usize) -> Self {
        EchelonSpace {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Fully reduces `v` against the basis.
    pub fn reduce(&self, mut v: BitVector) -> BitVector {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Reduces `v` and inserts the remainder if nonzero, keeping the basis
    /// fully reduced. Returns the new pivot column, or `None` if `v` was
    /// already in the span.
    pub fn insert(&mut self, v: BitVector) -> Option<usize> {
        assert_eq!(v.len(), self.ncols, "insert length mismatch");
        let v = self.reduce(v);
        let pivot = v.first_one()?;
        // Back-clean the pivot column of existing rows.
        for row in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(pos, pivot);
        self.rows.insert(pos, v);
        Some(pivot)
    }
}

/// Reduced row echelon form of the row space of `m`. Deterministic for a
/// fixed input.
pub fn row_reduce(m: &BitMatrix) -> EchelonSpace {
    let mut e = EchelonSpace::new(m.ncols());
    for row in m.rows() {
        e.insert(row.clone());
    }
    e
}

/// An independent spanning set of the column kernel `{v : m * v = 0}`.
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let e = row_reduce(m);
    let mut is_pivot = vec![false; m.ncols()];
    for &p in e.pivots() {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for j in 0..m.ncols() {
        if is_pivot[j] {
            continue;
        }
        let mut v = BitVector::zeros(m.ncols());
        v.set(j, true);
        for (row, &p) in e.basis().iter().zip(e.pivots()) {
            if row.get(j) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

/// Solves `x * m = target` by echelon back-substitution. Returns the
/// deterministic canonical solution, or `None` if the system is
/// inconsistent.
///
/// `target.len()` must equal `m.ncols()`; the solution has length
/// `m.nrows()`.
pub fn solve(m: &BitMatrix, target: &BitVector) -> Option<BitVector> {
    assert_eq!(
        target.len(),
        m.ncols(),
        "solve: target length must match column count"
    );
    let mut solver = Solver::new(m.ncols(), m.nrows());
    for row in m.rows() {
        solver.insert(row.clone());
    }
    solver.solve(target)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubspaceError {
    #[error("subspace is not contained in the ambient space")]
    NotContained,
}

/// Vectors extending `sub`'s basis to a basis of `ambient`, chosen
/// deterministically from `ambient`'s basis rows in order.
pub fn complement_basis(
    sub: &EchelonSpace,
    ambient: &EchelonSpace,
) -> Result<Vec<BitVector>, SubspaceError> {
    for row in sub.basis() {
        if !ambient.contains(row) {
            return Err(SubspaceError::NotContained);
        }
    }
    let mut work = sub.clone();
    let mut out = Vec::new();
    for row in ambient.basis() {
        if work.insert(row.clone()).is_some() {
            out.push(row.clone());
        }
    }
    Ok(out)
}

/// Outcome of inserting a row into a [`Solver`].
pub enum Inserted {
    /// The row extended the span; its reduced form got this pivot.
    Pivot(usize),
    /// The row was dependent: the combination of previously inserted rows
    /// (by insertion index) equal to it.
    Dependent(BitVector),
}

/// Incremental echelon with combination tracking over the inserted rows.
///
/// Supports streaming rows in (the resolution engine feeds them in weight
/// order), reporting discovered row-space relations, and solving
/// `x * M = target` against everything inserted so far.
pub struct Solver {
    ncols: usize,
    capacity: usize,
    inserted: usize,
    rows: Vec<BitVector>,
    combos: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Solver {
    /// `capacity` is the maximum number of rows that will ever be inserted
    /// (combination vectors are allocated at that width).
    pub fn new(ncols: usize, capacity: usize) -> Self {
        Solver {
            ncols,
            capacity,
            inserted: 0,
            rows: Vec::new(),
            combos: Vec::new(),
            pivots: Vec::new(),
        }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn insert(&mut self, row: BitVector) -> Inserted {
        assert_eq!(row.len(), self.ncols, "insert length mismatch");
        assert!(self.inserted < self.capacity, "solver capacity exceeded");
        let mut v = row;
        let mut combo = BitVector::zeros(self.capacity);
        combo.set(self.inserted, true);
        self.inserted += 1;
        self.reduce_tracked(&mut v, &mut combo);
        match v.first_one() {
            None => Inserted::Dependent(combo),
            Some(pivot) => {
                for (r, c) in self.rows.iter_mut().zip(self.combos.iter_mut()) {
                    if r.get(pivot) {
                        r.xor_assign(&v);
                        c.xor_assign(&combo);
                    }
                }
                let pos = self.pivots.partition_point(|&p| p < pivot);
                self.pivots.insert(pos, pivot);
                self.rows.insert(pos, v);
                self.combos.insert(pos, combo);
                Inserted::Pivot(pivot)
            }
        }
    }

    fn reduce_tracked(&self, v: &mut BitVector, combo: &mut BitVector) {
        for ((row, &p), c) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if v.get(p) {
                v.xor_assign(row);
                combo.xor_assign(c);
            }
        }
    }

    /// Canonical solution of `x * M = target` over the rows inserted so far,
    /// as a combination vector indexed by insertion order.
    pub fn solve(&self, target: &BitVector) -> Option<BitVector> {
        let mut v = target.clone();
        let mut combo = BitVector::zeros(self.capacity);
        self.reduce_tracked(&mut v, &mut combo);
        v.is_zero().then_some(combo)
    }

    /// Reduces `target` against the row space without tracking, returning
    /// the remainder.
    pub fn reduce(&self, target: BitVector) -> BitVector {
        let mut v = target;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }
}
