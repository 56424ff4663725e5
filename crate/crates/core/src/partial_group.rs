//! The partial-group structure on real-phase Paulis.
//!
//! Products are defined only for commuting operators. The partial closure of
//! a set adds commuting products until nothing new appears, recording one
//! derivation tree per element. On the closure, the GF(2) linear theory of
//! the maximal contexts decides Kochen-Specker contextuality and the
//! state-independent all-versus-nothing property, and an inconsistency
//! certificate converts into a determining tree for -I with empty
//! determining set.

use crate::compat_graph::build_graph;
use crate::f2::{BinaryMatrix, BitVec};
use crate::pauli::{GroupElement, PauliOperator};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("closure would exceed the cap of {0} elements")]
    CapExceeded(usize),
    #[error("empty generating set")]
    EmptySet,
    #[error("generators act on different qubit counts")]
    MismatchedQubits,
}

/// Default closure cap: |𝒫ₙ| = 2·4ⁿ, the hard upper bound on any closure.
pub fn default_closure_cap(n: usize) -> usize {
    4usize
        .checked_pow(n as u32)
        .and_then(|p| p.checked_mul(2))
        .unwrap_or(usize::MAX)
}

/// A rooted derivation: each parent is the product of its pairwise-commuting
/// children, and leaves come from a declared base set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminingTree {
    pub node: PauliOperator,
    pub children: Vec<DeterminingTree>,
}

impl DeterminingTree {
    pub fn leaf(op: PauliOperator) -> Self {
        DeterminingTree {
            node: op,
            children: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Multiplicity of each operator among the leaves.
    pub fn leaf_multiplicities(&self) -> BTreeMap<PauliOperator, usize> {
        let mut counts = BTreeMap::new();
        self.collect_leaves(&mut counts);
        counts
    }

    fn collect_leaves(&self, counts: &mut BTreeMap<PauliOperator, usize>) {
        if self.is_leaf() {
            *counts.entry(self.node.clone()).or_insert(0) += 1;
        } else {
            for child in &self.children {
                child.collect_leaves(counts);
            }
        }
    }

    /// The determining set: one copy of each operator appearing as a leaf
    /// with odd multiplicity.
    pub fn determining_set(&self) -> BTreeSet<PauliOperator> {
        self.leaf_multiplicities()
            .into_iter()
            .filter(|(_, count)| count % 2 == 1)
            .map(|(op, _)| op)
            .collect()
    }

    /// Checks the three defining conditions against a base set: children of
    /// every parent pairwise commute, every parent is the product of its
    /// children, and every leaf belongs to the base.
    pub fn validate(&self, base: &BTreeSet<PauliOperator>) -> Result<(), String> {
        if self.is_leaf() {
            if !base.contains(&self.node) {
                return Err(format!("leaf {} is not in the base set", self.node));
            }
            return Ok(());
        }
        for (i, a) in self.children.iter().enumerate() {
            for b in &self.children[i + 1..] {
                if !a.node.commutes(&b.node) {
                    return Err(format!("children {} and {} anticommute", a.node, b.node));
                }
            }
        }
        let mut product = GroupElement::identity(self.node.qubits());
        for child in &self.children {
            product = product.mul(&child.node.group_element());
        }
        match product.to_pauli() {
            Ok(p) if p == self.node => {}
            _ => return Err(format!("node {} is not the product of its children", self.node)),
        }
        for child in &self.children {
            child.validate(base)?;
        }
        Ok(())
    }

    /// DOT rendering, one graph node per tree vertex.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph determining_tree {\n");
        let mut counter = 0usize;
        self.dot_node(&mut out, &mut counter);
        out.push_str("}\n");
        out
    }

    fn dot_node(&self, out: &mut String, counter: &mut usize) -> usize {
        let id = *counter;
        *counter += 1;
        out.push_str(&format!("  n{} [label=\"{}\"];\n", id, self.node));
        for child in &self.children {
            let child_id = child.dot_node(out, counter);
            out.push_str(&format!("  n{id} -> n{child_id};\n"));
        }
        id
    }
}

/// The partial closure of a Pauli set, with one derivation tree per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSet {
    base: Vec<PauliOperator>,
    elements: Vec<PauliOperator>,
    provenance: Vec<DeterminingTree>,
}

impl ClosureSet {
    pub fn base(&self) -> &[PauliOperator] {
        &self.base
    }

    pub fn elements(&self) -> &[PauliOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn qubits(&self) -> usize {
        self.base[0].qubits()
    }

    pub fn contains(&self, op: &PauliOperator) -> bool {
        self.elements.binary_search(op).is_ok()
    }

    pub fn index_of(&self, op: &PauliOperator) -> Option<usize> {
        self.elements.binary_search(op).ok()
    }

    /// Derivation of `elements()[index]` over the base set.
    pub fn provenance(&self, index: usize) -> &DeterminingTree {
        &self.provenance[index]
    }

    pub fn contains_minus_identity(&self) -> bool {
        self.contains(&PauliOperator::minus_identity(self.qubits()))
    }
}

/// Fixpoint of adding commuting pairwise products, starting from `set`.
///
/// Elements are kept in the canonical operator order, so the result and all
/// recorded derivations are reproducible. Each new element records the first
/// derivation discovered in that order. Errors out once the closure would
/// exceed `cap`.
pub fn partial_closure(set: &[PauliOperator], cap: usize) -> Result<ClosureSet, ClosureError> {
    if set.is_empty() {
        return Err(ClosureError::EmptySet);
    }
    let n = set[0].qubits();
    if set.iter().any(|p| p.qubits() != n) {
        return Err(ClosureError::MismatchedQubits);
    }

    let base: Vec<PauliOperator> = {
        let mut b: Vec<_> = set.to_vec();
        b.sort();
        b.dedup();
        b
    };
    if base.len() > cap {
        return Err(ClosureError::CapExceeded(cap));
    }

    let mut trees: BTreeMap<PauliOperator, DeterminingTree> = base
        .iter()
        .map(|op| (op.clone(), DeterminingTree::leaf(op.clone())))
        .collect();

    loop {
        let elements: Vec<PauliOperator> = trees.keys().cloned().collect();
        let mut pending: BTreeMap<PauliOperator, DeterminingTree> = BTreeMap::new();
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i..] {
                if !a.commutes(b) {
                    continue;
                }
                let product = a
                    .commuting_product(b)
                    .expect("commuting product of closure elements");
                if trees.contains_key(&product) || pending.contains_key(&product) {
                    continue;
                }
                if trees.len() + pending.len() >= cap {
                    return Err(ClosureError::CapExceeded(cap));
                }
                pending.insert(
                    product.clone(),
                    DeterminingTree {
                        node: product,
                        children: vec![trees[a].clone(), trees[b].clone()],
                    },
                );
            }
        }
        if pending.is_empty() {
            break;
        }
        trees.append(&mut pending);
    }

    let elements: Vec<PauliOperator> = trees.keys().cloned().collect();
    let provenance: Vec<DeterminingTree> = elements.iter().map(|op| trees[op].clone()).collect();
    Ok(ClosureSet {
        base,
        elements,
        provenance,
    })
}

/// True iff the set contains the identity and is closed under commuting
/// products. Inversion closure is automatic for self-inverse operators.
pub fn is_partial_subgroup(set: &[PauliOperator]) -> bool {
    if set.is_empty() {
        return false;
    }
    let n = set[0].qubits();
    let members: BTreeSet<&PauliOperator> = set.iter().collect();
    if !members.contains(&PauliOperator::identity(n)) {
        return false;
    }
    for (i, a) in set.iter().enumerate() {
        for b in &set[i..] {
            if a.commutes(b) {
                let product = a.commuting_product(b).expect("commuting product");
                if !members.contains(&product) {
                    return false;
                }
            }
        }
    }
    true
}

/// One Z₂-linear equation `⟨C, a, b⟩`: the product of the closure elements
/// selected by `coeffs` (all inside context `context`) equals `(-1)^rhs · I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub context: usize,
    pub coeffs: BitVec,
    pub rhs: bool,
}

/// The Z₂-linear theory of a closure: variables are the closure elements,
/// equations collect the multiplicative identities of every maximal context.
#[derive(Debug, Clone)]
pub struct LinearTheory {
    pub num_vars: usize,
    pub contexts: Vec<Vec<usize>>,
    pub equations: Vec<Equation>,
}

impl LinearTheory {
    /// The system `A s = b` over GF(2).
    pub fn system(&self) -> (BinaryMatrix, BitVec) {
        let rows: Vec<BitVec> = self.equations.iter().map(|e| e.coeffs.clone()).collect();
        let rhs = BitVec::from_bools(&self.equations.iter().map(|e| e.rhs).collect::<Vec<_>>());
        (BinaryMatrix::from_rows(rows, self.num_vars), rhs)
    }
}

// Dependency spaces are enumerated in full only while that stays cheap; a
// basis has the same solution set because the right-hand side is linear in
// the dependency.
const FULL_CONTEXT_LIMIT: usize = 24;
const FULL_DEPENDENCY_DIM_LIMIT: usize = 16;

/// All multiplicative relations of the closure's maximal contexts, as a
/// GF(2) system over the closure elements.
pub fn linear_theory(closure: &ClosureSet) -> LinearTheory {
    let contexts = build_graph(closure.elements()).maximal_cliques();
    let num_vars = closure.len();
    let mut equations = Vec::new();

    for (context_id, context) in contexts.iter().enumerate() {
        let ops: Vec<&PauliOperator> = context.iter().map(|&i| &closure.elements()[i]).collect();
        // Dependencies a with Σ aᵢ vᵢ = 0 over the symplectic vectors.
        let sympl = BinaryMatrix::from_rows(
            ops.iter().map(|op| op.symplectic_vector()).collect(),
            2 * closure.qubits(),
        );
        let dependency_basis = sympl.transpose().nullspace();
        let basis_rhs: Vec<bool> = dependency_basis
            .iter()
            .map(|a| context_product_rhs(&ops, a))
            .collect();

        let full = context.len() <= FULL_CONTEXT_LIMIT
            && dependency_basis.len() <= FULL_DEPENDENCY_DIM_LIMIT;
        let combos: Vec<(BitVec, bool)> = if full {
            (1usize..1 << dependency_basis.len())
                .map(|mask| {
                    let mut a = BitVec::zeros(context.len());
                    let mut rhs = false;
                    for (k, basis_vec) in dependency_basis.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            a.xor_assign(basis_vec);
                            rhs ^= basis_rhs[k];
                        }
                    }
                    (a, rhs)
                })
                .collect()
        } else {
            dependency_basis
                .iter()
                .cloned()
                .zip(basis_rhs.iter().copied())
                .collect()
        };

        for (a, rhs) in combos {
            if a.is_zero() {
                continue;
            }
            let mut coeffs = BitVec::zeros(num_vars);
            for k in a.iter_ones() {
                coeffs.set(context[k], true);
            }
            equations.push(Equation {
                context: context_id,
                coeffs,
                rhs,
            });
        }
    }

    LinearTheory {
        num_vars,
        contexts,
        equations,
    }
}

/// Sign exponent of the product Π opsᵢ^{aᵢ}; the product has zero symplectic
/// vector by construction and is real because the factors commute pairwise.
fn context_product_rhs(ops: &[&PauliOperator], a: &BitVec) -> bool {
    let n = ops[0].qubits();
    let mut product = GroupElement::identity(n);
    for k in a.iter_ones() {
        product = product.mul(&ops[k].group_element());
    }
    debug_assert!(product.is_vector_zero());
    let p = product.to_pauli().expect("commuting product is real");
    p.is_minus_identity()
}

/// A Kochen-Specker value assignment: a ±1 valuation of the closure,
/// multiplicative on commuting pairs, with λ(-I) = -1 whenever -I is present.
///
/// Found by solving the linear theory over GF(2); absent exactly when the
/// closure has Kochen-Specker type contextuality.
pub fn ks_value_assignment(closure: &ClosureSet) -> Option<BTreeMap<PauliOperator, i8>> {
    let (matrix, rhs) = linear_theory(closure).system();
    let solution = matrix.solve(&rhs).expect("dimensions agree")?;
    Some(
        closure
            .elements()
            .iter()
            .enumerate()
            .map(|(i, op)| (op.clone(), if solution.get(i) { -1 } else { 1 }))
            .collect(),
    )
}

/// State-independent all-versus-nothing verdict.
///
/// True iff the linear theory `A s = b` is inconsistent; the certificate `y`
/// then satisfies `yᵀA = 0` and `y·b = 1`.
pub fn si_avn(closure: &ClosureSet) -> (bool, Option<BitVec>) {
    let theory = linear_theory(closure);
    let (matrix, rhs) = theory.system();
    if matrix.solve(&rhs).expect("dimensions agree").is_some() {
        return (false, None);
    }
    let certificate = matrix
        .transpose()
        .nullspace()
        .into_iter()
        .find(|y| y.dot(&rhs))
        .expect("inconsistent system has an odd certificate");
    (true, Some(certificate))
}

/// Constructs a determining tree for -I over the base with empty determining
/// set, whenever the closure is state-independently AvN.
///
/// The certificate rows build a depth-2 tree over the closure elements in
/// which every element occurs an even number of times; grafting each leaf's
/// derivation tree then yields a tree over the base with even leaf
/// multiplicities throughout.
pub fn determining_tree_witness(closure: &ClosureSet) -> Option<DeterminingTree> {
    let theory = linear_theory(closure);
    let (matrix, rhs) = theory.system();
    if matrix.solve(&rhs).expect("dimensions agree").is_some() {
        return None;
    }
    let certificate = matrix
        .transpose()
        .nullspace()
        .into_iter()
        .find(|y| y.dot(&rhs))
        .expect("inconsistent system has an odd certificate");

    let n = closure.qubits();
    let children: Vec<DeterminingTree> = certificate
        .iter_ones()
        .map(|row| {
            let equation = &theory.equations[row];
            let node = if equation.rhs {
                PauliOperator::minus_identity(n)
            } else {
                PauliOperator::identity(n)
            };
            let grafted: Vec<DeterminingTree> = equation
                .coeffs
                .iter_ones()
                .map(|var| closure.provenance(var).clone())
                .collect();
            DeterminingTree {
                node,
                children: grafted,
            }
        })
        .collect();

    let tree = DeterminingTree {
        node: PauliOperator::minus_identity(n),
        children,
    };
    debug_assert!(tree.determining_set().is_empty());
    debug_assert!(tree
        .validate(&closure.base().iter().cloned().collect())
        .is_ok());
    Some(tree)
}
