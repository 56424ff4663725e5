//! Exact linear algebra over GF(2).
//!
//! Dense bit-packed vectors and matrices with word-parallel XOR, Gaussian
//! elimination with deterministic pivoting (first nonzero column, lowest row),
//! and the Zassenhaus row-space intersection. Scales to a few hundred columns,
//! which is all the code analyses need.

use crate::pauli::PauliOperator;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bit `i` of word `i / 64` holds coordinate `i`. Equality and ordering are
/// total and deterministic, so `BitVec` can key sorted sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
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
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, rhs: &BitVec) {
        assert_eq!(self.len, rhs.len, "xor of bit vectors of unequal length");
        for (w, r) in self.words.iter_mut().zip(&rhs.words) {
            *w ^= r;
        }
    }

    pub fn xor(&self, rhs: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }

    /// Parity of the AND, i.e. the GF(2) inner product.
    pub fn dot(&self, rhs: &BitVec) -> bool {
        assert_eq!(self.len, rhs.len, "dot of bit vectors of unequal length");
        self.words
            .iter()
            .zip(&rhs.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn and_weight(&self, rhs: &BitVec) -> usize {
        assert_eq!(self.len, rhs.len);
        self.words
            .iter()
            .zip(&rhs.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Concatenation `self ++ rhs`, used by the Zassenhaus construction.
    pub fn concat(&self, rhs: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + rhs.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in rhs.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len);
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
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

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length differs from column count");
        }
        BinaryMatrix { rows, cols }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length differs from columns");
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Row echelon form in place; returns the pivot column of each nonzero row.
    ///
    /// Pivoting is deterministic: columns left to right, and within a column
    /// the lowest remaining row.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| self.rows[i].get(c)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// Some solution of `M s = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, F2Error> {
        if b.len() != self.rows.len() {
            return Err(F2Error::DimensionMismatch(format!(
                "rhs has length {}, matrix has {} rows",
                b.len(),
                self.rows.len()
            )));
        }
        // Reduce the augmented matrix [M | b].
        let mut aug = BinaryMatrix::from_rows(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.concat(&BitVec::from_bools(&[b.get(i)])))
                .collect(),
            self.cols + 1,
        );
        let pivots = aug.echelonize();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut s = BitVec::zeros(self.cols);
        for (row, &c) in pivots.iter().enumerate() {
            if aug.rows[row].get(self.cols) {
                s.set(c, true);
            }
        }
        Ok(Some(s))
    }

    /// A basis of `{v : M v = 0}`; its size is `cols - rank`.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let pivots = m.echelonize();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (row, &c) in pivots.iter().enumerate() {
                if m.rows[row].get(free) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// True iff `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut m = self.clone();
        m.echelonize();
        let mut v = v.clone();
        for row in &m.rows {
            if let Some(p) = row.first_one() {
                if v.get(p) {
                    v.xor_assign(row);
                }
            }
        }
        v.is_zero()
    }

    /// Expresses `v` as a combination of the rows, if possible. The result has
    /// one coordinate per row.
    pub fn express_in_rows(&self, v: &BitVec) -> Option<BitVec> {
        self.transpose()
            .solve(v)
            .expect("transpose dimensions always agree")
    }
}

/// Basis of `rowspace(A) ∩ rowspace(B)` via the Zassenhaus construction.
///
/// Rows of A enter as `[a | a]`, rows of B as `[b | 0]`; after elimination the
/// right halves of the rows with vanishing left half span the intersection.
pub fn row_space_intersection(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<Vec<BitVec>, F2Error> {
    if a.num_cols() != b.num_cols() {
        return Err(F2Error::DimensionMismatch(format!(
            "column counts differ: {} vs {}",
            a.num_cols(),
            b.num_cols()
        )));
    }
    let c = a.num_cols();
    let mut rows = Vec::with_capacity(a.num_rows() + b.num_rows());
    for r in a.rows() {
        rows.push(r.concat(r));
    }
    for r in b.rows() {
        rows.push(r.concat(&BitVec::zeros(c)));
    }
    let mut m = BinaryMatrix::from_rows(rows, 2 * c);
    m.echelonize();
    let mut basis = Vec::new();
    for row in m.rows() {
        if row.is_zero() {
            continue;
        }
        let left = row.slice(0, c);
        if left.is_zero() {
            basis.push(row.slice(c, c));
        }
    }
    Ok(basis)
}

/// Gram matrix of the symplectic form: entry (i, j) is 1 iff the operators
/// anticommute. Symmetric with zero diagonal; its rank is always even.
pub fn symplectic_gram(ops: &[PauliOperator]) -> BinaryMatrix {
    let m = ops.len();
    let mut gram = BinaryMatrix::zeros(m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            if !ops[i].commutes(&ops[j]) {
                gram.set(i, j, true);
                gram.set(j, i, true);
            }
        }
    }
    gram
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliOperator;
    use proptest::prelude::*;

    fn pauli(s: &str, n: usize) -> PauliOperator {
        PauliOperator::parse(s, n).unwrap()
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(BinaryMatrix::zeros(3, 4).rank(), 0);
        for k in 1..6 {
            assert_eq!(BinaryMatrix::identity(k).rank(), k);
        }
    }

    #[test]
    fn solve_identity_and_underdetermined() {
        let id = BinaryMatrix::identity(4);
        let b = BitVec::from_indices(4, &[1, 3]);
        assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));

        // [1 1] s = [1] over two variables: either unit vector works.
        let m = BinaryMatrix::from_rows(vec![BitVec::from_indices(2, &[0, 1])], 2);
        let s = m
            .solve(&BitVec::from_indices(1, &[0]))
            .unwrap()
            .expect("consistent");
        assert_eq!(s.count_ones() % 2, 1);
    }

    #[test]
    fn solve_reports_inconsistency() {
        // x = 0 and x = 1.
        let m = BinaryMatrix::from_rows(
            vec![BitVec::from_indices(1, &[0]), BitVec::from_indices(1, &[0])],
            1,
        );
        let b = BitVec::from_indices(2, &[1]);
        assert_eq!(m.solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = BinaryMatrix::identity(3);
        assert!(m.solve(&BitVec::zeros(2)).is_err());
    }

    #[test]
    fn nullspace_of_identity_and_zero() {
        assert!(BinaryMatrix::identity(5).nullspace().is_empty());
        assert_eq!(BinaryMatrix::zeros(3, 3).nullspace().len(), 3);
    }

    #[test]
    fn intersection_trivial_cases() {
        let a = BinaryMatrix::from_rows(
            vec![BitVec::from_indices(3, &[0]), BitVec::from_indices(3, &[1])],
            3,
        );
        let same = row_space_intersection(&a, &a).unwrap();
        assert_eq!(same.len(), 2);
        for v in &same {
            assert!(a.row_space_contains(v));
        }

        let e1 = BinaryMatrix::from_rows(vec![BitVec::from_indices(2, &[0])], 2);
        let e2 = BinaryMatrix::from_rows(vec![BitVec::from_indices(2, &[1])], 2);
        assert!(row_space_intersection(&e1, &e2).unwrap().is_empty());
    }

    #[test]
    fn gram_of_commuting_and_anticommuting_sets() {
        let zs = vec![pauli("Z0", 2), pauli("Z1", 2)];
        assert_eq!(symplectic_gram(&zs), BinaryMatrix::zeros(2, 2));

        let xz = vec![pauli("X0", 1), pauli("Z0", 1)];
        let gram = symplectic_gram(&xz);
        assert!(gram.get(0, 1) && gram.get(1, 0));
        assert!(!gram.get(0, 0) && !gram.get(1, 1));
        assert_eq!(gram.rank(), 2);
    }

    fn arb_matrix() -> impl Strategy<Value = BinaryMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r)
                .prop_map(move |rows| {
                    BinaryMatrix::from_rows(
                        rows.iter().map(|b| BitVec::from_bools(b)).collect(),
                        c,
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn nullspace_vectors_are_independent_solutions(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(ns.len(), m.num_cols() - m.rank());
            for v in &ns {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            if !ns.is_empty() {
                let basis = BinaryMatrix::from_rows(ns.clone(), m.num_cols());
                prop_assert_eq!(basis.rank(), ns.len());
            }
        }

        #[test]
        fn solve_solution_satisfies_system(m in arb_matrix(), bits in proptest::collection::vec(any::<bool>(), 0..7)) {
            let b = BitVec::from_bools(&bits[..bits.len().min(m.num_rows())]);
            if b.len() == m.num_rows() {
                if let Some(s) = m.solve(&b).unwrap() {
                    prop_assert_eq!(m.mul_vec(&s), b);
                }
            }
        }

        #[test]
        fn zassenhaus_dimension_formula(a in arb_matrix(), b in arb_matrix()) {
            // Pad to common width.
            let c = a.num_cols().max(b.num_cols());
            let widen = |m: &BinaryMatrix| {
                BinaryMatrix::from_rows(
                    m.rows().iter().map(|r| r.concat(&BitVec::zeros(c - r.len()))).collect(),
                    c,
                )
            };
            let a = widen(&a);
            let b = widen(&b);
            let inter = row_space_intersection(&a, &b).unwrap();
            let mut sum = a.clone();
            for r in b.rows() {
                sum.push_row(r.clone());
            }
            prop_assert_eq!(inter.len(), a.rank() + b.rank() - sum.rank());
            for v in &inter {
                prop_assert!(a.row_space_contains(v));
                prop_assert!(b.row_space_contains(v));
            }
        }
    }
}
