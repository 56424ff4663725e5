//! Pure stabilizer states and their exact measurement statistics.
//!
//! A state is held as n independent, pairwise-commuting signed generators.
//! Measuring a commuting context yields a uniform distribution over an
//! affine set of outcome tuples: the linear constraints come from the
//! generator combinations that map into the stabilizer span, with right-hand
//! sides read off by phase-tracked multiplication. Everything is exact; the
//! probabilities are dyadic rationals.

use crate::f2::{BinaryMatrix, BitVec};
use crate::pauli::{GroupElement, PauliOperator};
use crate::tracked::SignedAbelianGroup;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use std::collections::BTreeMap;

use super::ScenarioError;

/// A pure n-qubit stabilizer state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerState {
    n: usize,
    generators: Vec<PauliOperator>,
}

impl StabilizerState {
    /// |0...0>, stabilized by Z on every qubit.
    pub fn zero_state(n: usize) -> Self {
        StabilizerState {
            n,
            generators: (0..n).map(|q| PauliOperator::z_on(n, q)).collect(),
        }
    }

    /// Validates that the generators are n pairwise-commuting independent
    /// signed Paulis whose group excludes -I.
    pub fn from_generators(generators: Vec<PauliOperator>) -> Result<Self, ScenarioError> {
        let n = generators
            .first()
            .ok_or(ScenarioError::EmptyObservables)?
            .qubits();
        if generators.iter().any(|g| g.qubits() != n) {
            return Err(ScenarioError::MismatchedQubits);
        }
        if generators.len() != n {
            return Err(ScenarioError::BadStabilizerState(format!(
                "{} generators for {} qubits",
                generators.len(),
                n
            )));
        }
        let group = SignedAbelianGroup::new(&generators)
            .map_err(|e| ScenarioError::BadStabilizerState(format!("{e:?}")))?;
        if group.rank() != n {
            return Err(ScenarioError::BadStabilizerState(
                "generators are dependent".into(),
            ));
        }
        Ok(StabilizerState { n, generators })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn apply_h(&mut self, qubit: usize) {
        for g in &mut self.generators {
            g.conjugate_h(qubit);
        }
    }

    pub fn apply_s(&mut self, qubit: usize) {
        for g in &mut self.generators {
            g.conjugate_s(qubit);
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        for g in &mut self.generators {
            g.conjugate_cnot(control, target);
        }
    }

    /// A random stabilizer state: a seeded H/S/CNOT word of the given length
    /// applied to |0...0>.
    pub fn random(n: usize, circuit_length: usize, rng: &mut impl Rng) -> Self {
        let mut state = StabilizerState::zero_state(n);
        for _ in 0..circuit_length {
            match rng.gen_range(0..3) {
                0 => state.apply_h(rng.gen_range(0..n)),
                1 => state.apply_s(rng.gen_range(0..n)),
                _ => {
                    if n >= 2 {
                        let control = rng.gen_range(0..n);
                        let target = (control + rng.gen_range(1..n)) % n;
                        state.apply_cnot(control, target);
                    } else {
                        state.apply_h(0);
                    }
                }
            }
        }
        state
    }

    /// Dense statevector of the state, as the normalized image of the first
    /// computational basis state with nonzero overlap under the stabilizer
    /// projector.
    pub fn statevector(&self) -> Result<Vec<Complex64>, ScenarioError> {
        if self.n > crate::pauli::DEFAULT_DENSE_CAP {
            return Err(ScenarioError::DenseCapExceeded(self.n));
        }
        let dim = 1usize << self.n;
        for start in 0..dim {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[start] = Complex64::new(1.0, 0.0);
            for g in &self.generators {
                let gv = g.apply_to_statevector(&v);
                for (a, b) in v.iter_mut().zip(gv) {
                    *a = (*a + b) / 2.0;
                }
            }
            let norm_sqr: f64 = v.iter().map(|a| a.norm_sqr()).sum();
            if norm_sqr > 1e-9 {
                let norm = norm_sqr.sqrt();
                for a in &mut v {
                    *a /= norm;
                }
                return Ok(v);
            }
        }
        unreachable!("a stabilizer projector has trace 1")
    }

    /// Exact joint outcome distribution of a pairwise-commuting context.
    ///
    /// Keys encode the outcome tuple with bit i the outcome of `ops[i]`;
    /// every entry of the support has the same dyadic probability.
    pub fn context_distribution(
        &self,
        ops: &[PauliOperator],
    ) -> Result<BTreeMap<u64, BigRational>, ScenarioError> {
        let k = ops.len();
        if k > 64 {
            return Err(ScenarioError::ContextTooLarge(k));
        }
        for op in ops {
            if op.qubits() != self.n {
                return Err(ScenarioError::MismatchedQubits);
            }
        }
        let group = SignedAbelianGroup::new(&self.generators).expect("validated state");

        // Residuals of the context vectors modulo the stabilizer span; the
        // kernel of a ↦ Σ aᵢ residualᵢ is the constraint space A.
        let residual_columns: Vec<BitVec> = ops
            .iter()
            .map(|op| {
                group
                    .reduce(&op.symplectic_vector(), GroupElement::identity(self.n))
                    .0
            })
            .collect();
        let residual_matrix = BinaryMatrix::from_rows(residual_columns, 2 * self.n).transpose();
        let constraint_basis = residual_matrix.nullspace();

        // For each constraint a: (-1)^(a·s) Π opsᵢ^{aᵢ} must equal the
        // stabilizer element with the same vector, fixing a·s.
        let mut rows = Vec::with_capacity(constraint_basis.len());
        let mut rhs_bits = Vec::with_capacity(constraint_basis.len());
        for a in &constraint_basis {
            let mut product = GroupElement::identity(self.n);
            for i in a.iter_ones() {
                product = product.mul(&ops[i].group_element());
            }
            let vector = product.x_bits().concat(product.z_bits());
            let (residual, element) = group.reduce(&vector, product);
            debug_assert!(residual.is_zero());
            let value = element.to_pauli().expect("matched vectors give real phase");
            rows.push(a.clone());
            rhs_bits.push(value.is_minus_identity());
        }
        let constraints = BinaryMatrix::from_rows(rows, k);
        let rhs = BitVec::from_bools(&rhs_bits);

        let particular = constraints
            .solve(&rhs)
            .expect("dimensions agree")
            .expect("stabilizer outcome constraints are consistent");
        let free = constraints.nullspace();
        if free.len() > 20 {
            return Err(ScenarioError::SupportTooLarge(free.len()));
        }

        let probability = BigRational::new(BigInt::from(1), BigInt::from(1u64 << free.len()));
        let encode = |s: &BitVec| -> u64 {
            s.iter_ones().fold(0u64, |acc, i| acc | 1 << i)
        };
        let mut table = BTreeMap::new();
        for mask in 0u64..(1 << free.len()) {
            let mut outcome = particular.clone();
            for (i, basis_vec) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    outcome.xor_assign(basis_vec);
                }
            }
            table.insert(encode(&outcome), probability.clone());
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(s: &str, n: usize) -> PauliOperator {
        PauliOperator::parse(s, n).unwrap()
    }

    fn half() -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(2))
    }

    #[test]
    fn zero_state_measures_z_deterministically() {
        let state = StabilizerState::zero_state(2);
        let table = state.context_distribution(&[p("Z0", 2)]).unwrap();
        assert_eq!(table.len(), 1);
        assert!(table[&0].is_one());
    }

    #[test]
    fn bell_state_correlations() {
        // Φ+ = CNOT · H|00>: stabilized by XX and ZZ.
        let mut state = StabilizerState::zero_state(2);
        state.apply_h(0);
        state.apply_cnot(0, 1);
        assert_eq!(
            state.generators().iter().cloned().collect::<Vec<_>>(),
            vec![p("XX", 2), p("ZZ", 2)]
        );

        let xx = state.context_distribution(&[p("X0", 2), p("X1", 2)]).unwrap();
        assert_eq!(xx.len(), 2);
        assert_eq!(xx[&0b00], half());
        assert_eq!(xx[&0b11], half());

        // Anticorrelated on (X1, Z1)? No: uniform, since X1 alone is random.
        let mixed = state.context_distribution(&[p("X0", 2)]).unwrap();
        assert_eq!(mixed.len(), 2);
    }

    #[test]
    fn forced_outcomes_for_identity_observables() {
        let state = StabilizerState::zero_state(1);
        let table = state
            .context_distribution(&[
                PauliOperator::identity(1),
                PauliOperator::minus_identity(1),
                p("Z0", 1),
            ])
            .unwrap();
        // +I is forced to 0, -I to 1, Z0 to 0: single tuple 0b010.
        assert_eq!(table.len(), 1);
        assert!(table[&0b010].is_one());
    }

    #[test]
    fn minus_one_eigenstate() {
        // X|-> = -|->: prepare via H then S² (Z) ... simply use generators.
        let state = StabilizerState::from_generators(vec![p("-X0", 1)]).unwrap();
        let table = state.context_distribution(&[p("X0", 1)]).unwrap();
        assert_eq!(table.len(), 1);
        assert!(table[&0b1].is_one());
    }

    #[test]
    fn rejects_bad_generator_sets() {
        assert!(StabilizerState::from_generators(vec![p("X0", 1), p("Z0", 1)]).is_err());
        assert!(StabilizerState::from_generators(vec![p("ZI", 2), p("ZI", 2)]).is_err());
    }

    #[test]
    fn statevector_matches_zero_state() {
        let v = StabilizerState::zero_state(2).statevector().unwrap();
        assert!((v[0].norm() - 1.0).abs() < 1e-12);
        for amp in &v[1..] {
            assert!(amp.norm() < 1e-12);
        }
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = rand::rngs::mock::StepRng::new(7, 11);
        for n in 1..=4 {
            let state = StabilizerState::random(n, 40, &mut rng);
            assert!(StabilizerState::from_generators(state.generators().to_vec()).is_ok());
        }
    }
}
