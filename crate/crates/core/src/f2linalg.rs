//! Bit-packed linear algebra over GF(2).
//!
//! Vectors and matrix rows are packed 64 bits to a word; all eliminations
//! pick the first nonzero entry as pivot, so results are reproducible for a
//! fixed input ordering.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)),
        )
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
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        BitVec::from_indices(
            self.len + other.len,
            self.ones().chain(other.ones().map(|i| i + self.len)),
        )
    }

    /// Bits `range` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        BitVec::from_indices(
            end - start,
            self.ones().filter(|&i| i >= start && i < end).map(|i| i - start),
        )
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense GF(2) matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for r in col.ones() {
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(BitVec::from_bools(
            &self.data.iter().map(|row| row.dot(x)).collect::<Vec<_>>(),
        ))
    }
}

/// Solution set `particular + span(kernel_basis)` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutionSpace {
    pub particular: Option<BitVec>,
    pub kernel_basis: Vec<BitVec>,
}

impl AffineSolutionSpace {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.kernel_basis.len())
    }
}

/// Solves `A x = b`, returning every solution.
pub fn solve(a: &F2Matrix, b: &BitVec) -> Result<AffineSolutionSpace> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let mut rows: Vec<BitVec> = a.data.clone();
    let mut rhs: Vec<bool> = (0..a.rows).map(|r| b.get(r)).collect();
    let mut pivot_cols = Vec::new();
    let mut next = 0;
    for c in 0..a.cols {
        let Some(p) = (next..a.rows).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(next, p);
        rhs.swap(next, p);
        let pivot_row = rows[next].clone();
        let pivot_rhs = rhs[next];
        for r in 0..a.rows {
            if r != next && rows[r].get(c) {
                rows[r].xor_assign(&pivot_row);
                rhs[r] ^= pivot_rhs;
            }
        }
        pivot_cols.push(c);
        next += 1;
        if next == a.rows {
            break;
        }
    }
    let consistent = rhs[next..].iter().all(|&bit| !bit);

    let mut is_pivot = vec![false; a.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let kernel_basis = (0..a.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::zeros(a.cols);
            v.set(f, true);
            for (r, &c) in pivot_cols.iter().enumerate() {
                if rows[r].get(f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect();
    let particular = consistent.then(|| {
        let mut x = BitVec::zeros(a.cols);
        for (r, &c) in pivot_cols.iter().enumerate() {
            x.set(c, rhs[r]);
        }
        x
    });
    Ok(AffineSolutionSpace {
        particular,
        kernel_basis,
    })
}

/// Row-echelon basis whose pivots are each row's first set bit; rows record
/// which inserted vectors they combine.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    inserted: usize,
    rows: Vec<(BitVec, Vec<usize>)>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            inserted: 0,
            rows: Vec::new(),
            pivot_row: vec![None; len],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` as input number `self.inserted`; returns whether it was
    /// independent of the earlier inputs.
    pub fn insert(&mut self, v: &BitVec) -> Result<bool> {
        self.check(v)?;
        let label = self.inserted;
        self.inserted += 1;
        let (v, mut combo) = self.reduce_tracked(v);
        match v.first_one() {
            None => Ok(false),
            Some(p) => {
                combo.push(label);
                self.pivot_row[p] = Some(self.rows.len());
                self.rows.push((v, combo));
                Ok(true)
            }
        }
    }

    /// Reduces `v` until its first set bit is not a pivot. The first set bit
    /// of the result is the latest position any `v + span` element can reach.
    pub fn reduce(&self, v: &BitVec) -> Result<BitVec> {
        self.check(v)?;
        Ok(self.reduce_tracked(v).0)
    }

    /// As [`reduce`](Self::reduce), also returning the (sorted) labels of
    /// inserted vectors whose sum was added.
    pub fn reduce_with_combination(&self, v: &BitVec) -> Result<(BitVec, Vec<usize>)> {
        self.check(v)?;
        Ok(self.reduce_tracked(v))
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        Ok(self.fully_reduce(v)?.is_zero())
    }

    /// Eliminates every pivot position from `v`, not just the leading one.
    pub fn fully_reduce(&self, v: &BitVec) -> Result<BitVec> {
        self.check(v)?;
        let mut v = v.clone();
        for (row, _) in &self.rows {
            let p = row.first_one().expect("rows are nonzero");
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        Ok(v)
    }

    fn reduce_tracked(&self, v: &BitVec) -> (BitVec, Vec<usize>) {
        let mut v = v.clone();
        let mut labels: Vec<bool> = vec![false; self.inserted];
        while let Some(p) = v.first_one() {
            match self.pivot_row[p] {
                Some(r) => {
                    let (row, combo) = &self.rows[r];
                    v.xor_assign(row);
                    for &l in combo {
                        labels[l] ^= true;
                    }
                }
                None => break,
            }
        }
        let combo = labels
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        (v, combo)
    }

    fn check(&self, v: &BitVec) -> Result<()> {
        if v.len() != self.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// Whether `target` lies in the GF(2) span of `vectors`.
pub fn in_span(vectors: &[BitVec], target: &BitVec) -> Result<bool> {
    let mut basis = EchelonBasis::new(target.len());
    for v in vectors {
        basis.insert(v)?;
    }
    basis.contains(target)
}

/// An affine functional `x -> normal . x`, required to equal `value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: BitVec,
    pub value: bool,
}

/// True iff every point of `space` satisfies every constraint. An empty space
/// satisfies everything.
pub fn subspace_saturates(space: &AffineSolutionSpace, constraints: &[Constraint]) -> Result<bool> {
    let Some(particular) = &space.particular else {
        return Ok(true);
    };
    for c in constraints {
        if c.normal.len() != particular.len() {
            return Err(Error::DimensionMismatch {
                expected: particular.len(),
                found: c.normal.len(),
            });
        }
        if c.normal.dot(particular) != c.value
            || space.kernel_basis.iter().any(|k| c.normal.dot(k))
        {
            return Ok(false);
        }
    }
    Ok(true)
}
