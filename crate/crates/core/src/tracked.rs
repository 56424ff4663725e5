//! Phase-tracked reduced form of an abelian signed Pauli group.
//!
//! Used wherever a sign must be read off a GF(2) combination: stabilizer
//! intersections, sign-difference functionals, and stabilizer-state outcome
//! supports.

use crate::f2::{BinaryMatrix, BitVec};
use crate::pauli::{GroupElement, PauliOperator, Sign};

/// An abelian, -I-free signed Pauli group in reduced echelon form; each pivot
/// row carries the group element realizing it.
pub(crate) struct SignedAbelianGroup {
    n: usize,
    rows: Vec<(BitVec, GroupElement)>,
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum SignedGroupError {
    NotAbelian(String, String),
    ContainsMinusIdentity(String),
}

impl SignedAbelianGroup {
    pub fn new(gens: &[PauliOperator]) -> Result<Self, SignedGroupError> {
        let n = gens.first().map_or(0, |g| g.qubits());
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if !a.commutes(b) {
                    return Err(SignedGroupError::NotAbelian(a.to_string(), b.to_string()));
                }
            }
        }
        let mut group = SignedAbelianGroup { n, rows: Vec::new() };
        for g in gens {
            let (residual, element) = group.reduce(&g.symplectic_vector(), g.group_element());
            if residual.is_zero() {
                let residue = element.to_pauli().expect("abelian products are real");
                if residue.is_minus_identity() {
                    return Err(SignedGroupError::ContainsMinusIdentity(g.to_string()));
                }
                continue;
            }
            group.rows.push((residual, element));
            group.rows.sort_by_key(|(v, _)| v.first_one());
        }
        Ok(group)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(
            self.rows.iter().map(|(v, _)| v.clone()).collect(),
            2 * self.n,
        )
    }

    /// Eliminates `vector` against the pivot rows, multiplying `element` by
    /// each row's group element as it is used. Returns the residual vector
    /// and accumulated element.
    pub fn reduce(&self, vector: &BitVec, element: GroupElement) -> (BitVec, GroupElement) {
        let mut residual = vector.clone();
        let mut element = element;
        for (pivot_vec, pivot_elem) in &self.rows {
            let pivot = pivot_vec.first_one().expect("pivot rows are nonzero");
            if residual.get(pivot) {
                residual.xor_assign(pivot_vec);
                element = element.mul(pivot_elem);
            }
        }
        (residual, element)
    }

    /// The sign the group assigns to the element with this symplectic
    /// vector, or None when the vector is outside the span.
    pub fn sign_of(&self, vector: &BitVec) -> Option<Sign> {
        let (residual, element) = self.reduce(vector, GroupElement::identity(self.n));
        if !residual.is_zero() {
            return None;
        }
        Some(element.to_pauli().expect("abelian products are real").sign())
    }
}
