//! Measurement scenarios and empirical models in the sheaf-theoretic sense.
//!
//! A scenario is a finite set of Pauli observables with the maximal commuting
//! subsets as contexts and outcomes in Z₂, outcome b meaning eigenvalue
//! (-1)^b. Probabilistic models carry an exact rational distribution per
//! context; possibilistic models carry the supports. The deciders:
//!
//! - strong contextuality: no global section of the supports;
//! - probabilistic contextuality: exact rational LP feasibility of a global
//!   distribution with the prescribed marginals;
//! - state-dependent AvN: joint inconsistency of the per-context affine
//!   hulls over GF(2);
//! - the constructive gluing of any model on a non-Kirby-Love scenario into
//!   a global distribution with exact marginals.
//!
//! The equivalence battery drives all of them, together with the
//! closure-level deciders, across random stabilizer states.

pub mod lp;
pub mod stabilizer;

pub use stabilizer::StabilizerState;

use crate::compat_graph::build_graph;
use crate::f2::{BinaryMatrix, BitVec};
use crate::partial_group::{
    determining_tree_witness, ks_value_assignment, partial_closure, si_avn, ClosureError,
};
use crate::pauli::{PauliOperator, PauliParseError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub const DEFAULT_LP_CAP: usize = 12;
pub const STATEVECTOR_DENOMINATOR_CAP: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("no observables given")]
    EmptyObservables,
    #[error("observables act on different qubit counts")]
    MismatchedQubits,
    #[error("more than 64 observables are not supported, got {0}")]
    TooManyObservables(usize),
    #[error("context of size {0} exceeds the 64-outcome-bit limit")]
    ContextTooLarge(usize),
    #[error("outcome support dimension {0} exceeds the enumeration limit")]
    SupportTooLarge(usize),
    #[error("statevector is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("dense statevector path capped at {cap} qubits, got {0}", cap = crate::pauli::DEFAULT_DENSE_CAP)]
    DenseCapExceeded(usize),
    #[error("observable count {got} exceeds the LP cap {cap}")]
    LpCapExceeded { got: usize, cap: usize },
    #[error("the compatibility graph has the Kirby-Love property; gluing is undefined")]
    KlGraph,
    #[error("invalid stabilizer state: {0}")]
    BadStabilizerState(String),
    #[error("context {0} has empty support")]
    EmptySupport(usize),
    #[error("distribution for context {0} does not sum to 1")]
    NotADistribution(usize),
    #[error("negative probability in context {0}")]
    NegativeProbability(usize),
    #[error("outcome key {key:?} does not match context size {size}")]
    BadOutcomeKey { key: String, size: usize },
    #[error("model tables do not match the scenario contexts: {0}")]
    ContextMismatch(String),
    #[error("invalid rational {0:?}")]
    BadRational(String),
    #[error("invalid Pauli string {text:?}: {source}")]
    BadPauli {
        text: String,
        source: PauliParseError,
    },
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

/// A quantum measurement scenario: observables plus their maximal commuting
/// contexts. Outcomes are fixed to Z₂.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementScenario {
    observables: Vec<PauliOperator>,
    contexts: Vec<Vec<usize>>,
}

/// Builds the scenario of an ordered observable set; duplicates keep their
/// first occurrence.
pub fn scenario_from_observables(
    observables: &[PauliOperator],
) -> Result<MeasurementScenario, ScenarioError> {
    if observables.is_empty() {
        return Err(ScenarioError::EmptyObservables);
    }
    let n = observables[0].qubits();
    if observables.iter().any(|p| p.qubits() != n) {
        return Err(ScenarioError::MismatchedQubits);
    }
    let mut seen = BTreeSet::new();
    let deduped: Vec<PauliOperator> = observables
        .iter()
        .filter(|p| seen.insert((*p).clone()))
        .cloned()
        .collect();
    if deduped.len() > 64 {
        return Err(ScenarioError::TooManyObservables(deduped.len()));
    }
    let contexts = build_graph(&deduped).maximal_cliques();
    Ok(MeasurementScenario {
        observables: deduped,
        contexts,
    })
}

impl MeasurementScenario {
    pub fn observables(&self) -> &[PauliOperator] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn qubits(&self) -> usize {
        self.observables[0].qubits()
    }

    pub fn context_operators(&self, context: usize) -> Vec<PauliOperator> {
        self.contexts[context]
            .iter()
            .map(|&i| self.observables[i].clone())
            .collect()
    }
}

/// Per-context exact rational outcome distributions. Keys encode outcome
/// tuples with bit i the outcome of the context's i-th observable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilisticModel {
    scenario: MeasurementScenario,
    tables: Vec<BTreeMap<u64, BigRational>>,
}

/// Per-context outcome supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibilisticModel {
    scenario: MeasurementScenario,
    supports: Vec<BTreeSet<u64>>,
}

impl ProbabilisticModel {
    /// Wraps explicit tables, checking nonnegativity and normalization per
    /// context. No-signaling is a separate check.
    pub fn from_tables(
        scenario: MeasurementScenario,
        tables: Vec<BTreeMap<u64, BigRational>>,
    ) -> Result<Self, ScenarioError> {
        if tables.len() != scenario.contexts.len() {
            return Err(ScenarioError::ContextMismatch(format!(
                "{} tables for {} contexts",
                tables.len(),
                scenario.contexts.len()
            )));
        }
        for (c, table) in tables.iter().enumerate() {
            let size = scenario.contexts[c].len();
            let mut total = BigRational::zero();
            for (&key, probability) in table {
                if size < 64 && key >= 1 << size {
                    return Err(ScenarioError::BadOutcomeKey {
                        key: format!("{key:b}"),
                        size,
                    });
                }
                if probability.is_negative() {
                    return Err(ScenarioError::NegativeProbability(c));
                }
                total += probability;
            }
            if !total.is_one() {
                return Err(ScenarioError::NotADistribution(c));
            }
        }
        Ok(ProbabilisticModel { scenario, tables })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn table(&self, context: usize) -> &BTreeMap<u64, BigRational> {
        &self.tables[context]
    }

    pub fn probability(&self, context: usize, outcome: u64) -> BigRational {
        self.tables[context]
            .get(&outcome)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Marginal of a context's distribution onto the given positions within
    /// that context.
    pub fn marginal(&self, context: usize, positions: &[usize]) -> BTreeMap<u64, BigRational> {
        let mut out: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (&outcome, probability) in &self.tables[context] {
            let mut key = 0u64;
            for (bit, &pos) in positions.iter().enumerate() {
                if outcome >> pos & 1 == 1 {
                    key |= 1 << bit;
                }
            }
            *out.entry(key).or_insert_with(BigRational::zero) += probability;
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

impl PossibilisticModel {
    /// Wraps explicit supports, checking only nonemptiness (E1). Overlap
    /// consistency of supports is checked by [`PossibilisticModel::supports_consistent`].
    pub fn from_supports(
        scenario: MeasurementScenario,
        supports: Vec<BTreeSet<u64>>,
    ) -> Result<Self, ScenarioError> {
        if supports.len() != scenario.contexts.len() {
            return Err(ScenarioError::ContextMismatch(format!(
                "{} supports for {} contexts",
                supports.len(),
                scenario.contexts.len()
            )));
        }
        for (c, support) in supports.iter().enumerate() {
            if support.is_empty() {
                return Err(ScenarioError::EmptySupport(c));
            }
            let size = scenario.contexts[c].len();
            for &key in support {
                if size < 64 && key >= 1 << size {
                    return Err(ScenarioError::BadOutcomeKey {
                        key: format!("{key:b}"),
                        size,
                    });
                }
            }
        }
        Ok(PossibilisticModel { scenario, supports })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn support(&self, context: usize) -> &BTreeSet<u64> {
        &self.supports[context]
    }

    /// Projection of a context's support onto positions within the context.
    fn projected_support(&self, context: usize, positions: &[usize]) -> BTreeSet<u64> {
        self.supports[context]
            .iter()
            .map(|&outcome| {
                positions
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (bit, &pos)| acc | (outcome >> pos & 1) << bit)
            })
            .collect()
    }

    /// Pairwise overlap consistency of the supports: the possibilistic
    /// no-signaling condition.
    pub fn supports_consistent(&self) -> bool {
        let contexts = &self.scenario.contexts;
        for a in 0..contexts.len() {
            for b in (a + 1)..contexts.len() {
                let shared: Vec<usize> = contexts[a]
                    .iter()
                    .filter(|i| contexts[b].contains(i))
                    .cloned()
                    .collect();
                if shared.is_empty() {
                    continue;
                }
                let pos = |context: &[usize]| -> Vec<usize> {
                    shared
                        .iter()
                        .map(|i| context.iter().position(|j| j == i).unwrap())
                        .collect()
                };
                if self.projected_support(a, &pos(&contexts[a]))
                    != self.projected_support(b, &pos(&contexts[b]))
                {
                    return false;
                }
            }
        }
        true
    }
}

/// The possibilistic model associated to a probabilistic one: its supports.
pub fn possibilistic_of(model: &ProbabilisticModel) -> PossibilisticModel {
    let supports = model
        .tables
        .iter()
        .map(|table| {
            table
                .iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(&k, _)| k)
                .collect()
        })
        .collect();
    PossibilisticModel {
        scenario: model.scenario.clone(),
        supports,
    }
}

/// The empirical model a stabilizer state defines on a scenario: exact
/// dyadic probabilities per context.
pub fn model_from_stabilizer_state(
    scenario: &MeasurementScenario,
    state: &StabilizerState,
) -> Result<ProbabilisticModel, ScenarioError> {
    if state.qubits() != scenario.qubits() {
        return Err(ScenarioError::MismatchedQubits);
    }
    let tables = (0..scenario.contexts.len())
        .map(|c| state.context_distribution(&scenario.context_operators(c)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProbabilisticModel {
        scenario: scenario.clone(),
        tables,
    })
}

/// The empirical model of an arbitrary pure state, by sequential projection
/// onto joint eigenspaces. Probabilities below `tol` are snapped to zero,
/// the rest to rationals with denominator at most 2^16, then renormalized.
pub fn model_from_statevector(
    scenario: &MeasurementScenario,
    statevector: &[Complex64],
    tol: f64,
) -> Result<ProbabilisticModel, ScenarioError> {
    let n = scenario.qubits();
    if n > crate::pauli::DEFAULT_DENSE_CAP {
        return Err(ScenarioError::DenseCapExceeded(n));
    }
    if statevector.len() != 1 << n {
        return Err(ScenarioError::MismatchedQubits);
    }
    let norm_sqr: f64 = statevector.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > tol {
        return Err(ScenarioError::NotNormalized(norm_sqr));
    }

    let mut tables = Vec::with_capacity(scenario.contexts.len());
    for c in 0..scenario.contexts.len() {
        let ops = scenario.context_operators(c);
        let mut table: BTreeMap<u64, f64> = BTreeMap::new();
        // Depth-first branching over the projector chain.
        let mut stack: Vec<(usize, u64, Vec<Complex64>)> =
            vec![(0, 0, statevector.to_vec())];
        while let Some((depth, outcome, vector)) = stack.pop() {
            if depth == ops.len() {
                let p: f64 = vector.iter().map(|a| a.norm_sqr()).sum();
                if p > tol {
                    *table.entry(outcome).or_insert(0.0) += p;
                }
                continue;
            }
            let image = ops[depth].apply_to_statevector(&vector);
            let mut plus = vector.clone();
            let mut minus = vector;
            for ((a, b), img) in plus.iter_mut().zip(minus.iter_mut()).zip(image) {
                let original = *a;
                *a = (original + img) / 2.0;
                *b = (original - img) / 2.0;
            }
            let weight = |v: &[Complex64]| -> f64 { v.iter().map(|a| a.norm_sqr()).sum() };
            if weight(&plus) > tol {
                stack.push((depth + 1, outcome, plus));
            }
            if weight(&minus) > tol {
                stack.push((depth + 1, outcome | 1 << depth, minus));
            }
        }

        let mut rational: BTreeMap<u64, BigRational> = table
            .into_iter()
            .map(|(k, p)| (k, rationalize(p, STATEVECTOR_DENOMINATOR_CAP)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        let total: BigRational = rational.values().cloned().sum();
        if total.is_zero() {
            return Err(ScenarioError::EmptySupport(c));
        }
        for p in rational.values_mut() {
            *p /= &total;
        }
        tables.push(rational);
    }
    Ok(ProbabilisticModel {
        scenario: scenario.clone(),
        tables,
    })
}

/// Nearest rational with denominator at most `max_denominator`, by continued
/// fractions with a final semiconvergent refinement.
pub fn rationalize(x: f64, max_denominator: u64) -> BigRational {
    assert!(x.is_finite() && x >= 0.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut value = x;
    loop {
        let a = value.floor() as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 as u128 > max_denominator as u128 {
            // Best semiconvergent under the bound.
            let k = (max_denominator as i128 - q0) / q1.max(1);
            let (sp, sq) = (k * p1 + p0, k * q1 + q0);
            let best = BigRational::new(BigInt::from(p1), BigInt::from(q1.max(1)));
            if sq == 0 {
                return best;
            }
            let semi = BigRational::new(BigInt::from(sp), BigInt::from(sq));
            let target = rational_from_f64(x);
            return if (semi.clone() - &target).abs() < (best.clone() - &target).abs() {
                semi
            } else {
                best
            };
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let fractional = value - value.floor();
        if fractional < 1e-15 {
            return BigRational::new(BigInt::from(p1), BigInt::from(q1));
        }
        value = 1.0 / fractional;
    }
}

fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Exact no-signaling check: equal marginals on every context overlap.
pub fn check_no_signaling(model: &ProbabilisticModel) -> bool {
    let contexts = model.scenario.contexts();
    for a in 0..contexts.len() {
        for b in (a + 1)..contexts.len() {
            let shared: Vec<usize> = contexts[a]
                .iter()
                .filter(|i| contexts[b].contains(i))
                .cloned()
                .collect();
            if shared.is_empty() {
                continue;
            }
            let positions = |context: &[usize]| -> Vec<usize> {
                shared
                    .iter()
                    .map(|i| context.iter().position(|j| j == i).unwrap())
                    .collect()
            };
            if model.marginal(a, &positions(&contexts[a]))
                != model.marginal(b, &positions(&contexts[b]))
            {
                return false;
            }
        }
    }
    true
}

/// Backtracking search for a global section: an outcome per observable whose
/// restriction lies in every context's support. `None` means the model is
/// strongly contextual.
pub fn global_section_search(model: &PossibilisticModel) -> Option<Vec<bool>> {
    let mut sections = enumerate_global_sections(model, 1);
    sections.pop().map(|s| decode_assignment(s, model.scenario.observables.len()))
}

fn decode_assignment(bits: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| bits >> i & 1 == 1).collect()
}

/// All global sections (up to `limit`; pass usize::MAX for all), encoded as
/// bitmasks over the observable list.
pub fn enumerate_global_sections(model: &PossibilisticModel, limit: usize) -> Vec<u64> {
    let scenario = &model.scenario;
    let m = scenario.observables.len();
    // Per context, the supports as (context indices, tuples).
    let contexts: Vec<(&Vec<usize>, Vec<u64>)> = scenario
        .contexts
        .iter()
        .zip(&model.supports)
        .map(|(c, s)| (c, s.iter().cloned().collect()))
        .collect();

    let mut sections = Vec::new();
    let mut assignment = 0u64;
    search(
        0,
        m,
        &mut assignment,
        &contexts,
        &mut sections,
        limit,
    );
    return sections;

    fn search(
        next: usize,
        m: usize,
        assignment: &mut u64,
        contexts: &[(&Vec<usize>, Vec<u64>)],
        sections: &mut Vec<u64>,
        limit: usize,
    ) {
        if sections.len() >= limit {
            return;
        }
        if next == m {
            sections.push(*assignment);
            return;
        }
        'outcome: for bit in [0u64, 1] {
            *assignment = (*assignment & !(1 << next)) | bit << next;
            // Every context must retain a compatible support tuple on the
            // assigned prefix.
            for (vertices, tuples) in contexts {
                if !vertices.iter().any(|&v| v <= next) {
                    continue;
                }
                let compatible = tuples.iter().any(|&t| {
                    vertices.iter().enumerate().all(|(pos, &v)| {
                        v > next || (t >> pos & 1) == (*assignment >> v & 1)
                    })
                });
                if !compatible {
                    continue 'outcome;
                }
            }
            search(next + 1, m, assignment, contexts, sections, limit);
            if sections.len() >= limit {
                return;
            }
        }
        *assignment &= !(1 << next);
    }
}

/// A global outcome distribution over the full observable set, sparse over
/// assignments encoded as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalDistribution {
    num_observables: usize,
    entries: BTreeMap<u64, BigRational>,
}

impl GlobalDistribution {
    pub fn entries(&self) -> &BTreeMap<u64, BigRational> {
        &self.entries
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().cloned().sum()
    }

    /// Marginal onto a set of observable indices, keyed by position in the
    /// given list.
    pub fn marginal(&self, indices: &[usize]) -> BTreeMap<u64, BigRational> {
        let mut out: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (&assignment, probability) in &self.entries {
            let key = indices
                .iter()
                .enumerate()
                .fold(0u64, |acc, (bit, &i)| acc | (assignment >> i & 1) << bit);
            *out.entry(key).or_insert_with(BigRational::zero) += probability;
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Exact equality of every context marginal with the model's tables.
    pub fn reproduces_marginals(&self, model: &ProbabilisticModel) -> bool {
        model
            .scenario
            .contexts()
            .iter()
            .enumerate()
            .all(|(c, context)| {
                let mut table = model.tables[c].clone();
                table.retain(|_, p| !p.is_zero());
                self.marginal(context) == table
            })
    }
}

/// Outcome of the exact LP feasibility test for a global distribution with
/// the prescribed marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpVerdict {
    Feasible(GlobalDistribution),
    Infeasible,
}

impl LpVerdict {
    pub fn is_contextual(&self) -> bool {
        matches!(self, LpVerdict::Infeasible)
    }
}

/// Decides probabilistic contextuality exactly.
///
/// Any global distribution is supported on global sections of the
/// possibilistic model, so the LP runs over those sections with one equality
/// per context outcome in the support.
pub fn lp_noncontextuality(
    model: &ProbabilisticModel,
    cap: usize,
) -> Result<LpVerdict, ScenarioError> {
    let m = model.scenario.observables.len();
    if m > cap {
        return Err(ScenarioError::LpCapExceeded { got: m, cap });
    }
    let possibilistic = possibilistic_of(model);
    let sections = enumerate_global_sections(&possibilistic, 1 << 20);
    if sections.is_empty() {
        return Ok(LpVerdict::Infeasible);
    }

    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    for (c, context) in model.scenario.contexts().iter().enumerate() {
        for (&outcome, probability) in &model.tables[c] {
            if probability.is_zero() {
                continue;
            }
            let row: Vec<BigRational> = sections
                .iter()
                .map(|&s| {
                    let restriction = context
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (pos, &v)| acc | (s >> v & 1) << pos);
                    if restriction == outcome {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            rows.push(row);
            rhs.push(probability.clone());
        }
    }

    match lp::solve_equality_feasibility(&rows, &rhs) {
        None => Ok(LpVerdict::Infeasible),
        Some(weights) => {
            let entries: BTreeMap<u64, BigRational> = sections
                .iter()
                .zip(weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|(&s, w)| (s, w))
                .collect();
            let distribution = GlobalDistribution {
                num_observables: m,
                entries,
            };
            debug_assert!(distribution.reproduces_marginals(model));
            Ok(LpVerdict::Feasible(distribution))
        }
    }
}

/// The explicit gluing of a model on a scenario whose compatibility graph
/// lacks the Kirby-Love property:
/// `d(x, {y_C}) = d_x^{-(|M|-1)} Π_C e_C(x, y_C)` with x ranging over the
/// universal-vertex outcomes and d_x their common marginal.
pub fn glue_noncontextual(
    model: &ProbabilisticModel,
) -> Result<GlobalDistribution, ScenarioError> {
    let scenario = &model.scenario;
    let graph = build_graph(&scenario.observables);
    if graph.has_kirby_love().0 {
        return Err(ScenarioError::KlGraph);
    }
    let universal = graph.universal_vertices();
    let contexts = scenario.contexts();
    let num_contexts = contexts.len();

    // Positions of U inside each context, and the complementary positions.
    let u_positions: Vec<Vec<usize>> = contexts
        .iter()
        .map(|c| {
            universal
                .iter()
                .map(|u| c.iter().position(|v| v == u).expect("U lies in every maximal clique"))
                .collect()
        })
        .collect();
    let rest_positions: Vec<Vec<usize>> = contexts
        .iter()
        .map(|c| {
            (0..c.len())
                .filter(|pos| !universal.contains(&c[*pos]))
                .collect()
        })
        .collect();

    let d_x = model.marginal(0, &u_positions[0]);

    let mut entries: BTreeMap<u64, BigRational> = BTreeMap::new();
    for (&x, mass) in &d_x {
        if mass.is_zero() {
            continue;
        }
        // Per context, the support slice over x with probabilities.
        let slices: Vec<Vec<(u64, BigRational)>> = (0..num_contexts)
            .map(|c| {
                model.tables[c]
                    .iter()
                    .filter(|(&outcome, p)| {
                        !p.is_zero()
                            && u_positions[c]
                                .iter()
                                .enumerate()
                                .all(|(bit, &pos)| (outcome >> pos & 1) == (x >> bit & 1))
                    })
                    .map(|(&outcome, p)| (outcome, p.clone()))
                    .collect()
            })
            .collect();

        let scale = {
            let mut s = BigRational::one();
            for _ in 1..num_contexts {
                s /= mass;
            }
            s
        };

        // Cartesian product over the slices.
        let mut partial: Vec<(u64, BigRational)> = vec![(0u64, scale)];
        for (c, slice) in slices.iter().enumerate() {
            let mut next = Vec::with_capacity(partial.len() * slice.len());
            for (assignment, weight) in &partial {
                for (outcome, probability) in slice {
                    let mut extended = *assignment;
                    for (pos, &v) in contexts[c].iter().enumerate() {
                        if rest_positions[c].contains(&pos) {
                            extended |= (outcome >> pos & 1) << v;
                        }
                    }
                    next.push((extended, weight * probability));
                }
            }
            partial = next;
            if partial.len() > 1 << 22 {
                return Err(ScenarioError::SupportTooLarge(partial.len()));
            }
        }
        // Fill in the universal bits.
        for (assignment, weight) in partial {
            let mut full = assignment;
            for (bit, &u) in universal.iter().enumerate() {
                full |= (x >> bit & 1) << u;
            }
            *entries.entry(full).or_insert_with(BigRational::zero) += weight;
        }
    }

    entries.retain(|_, p| !p.is_zero());
    Ok(GlobalDistribution {
        num_observables: scenario.observables.len(),
        entries,
    })
}

/// State-dependent all-versus-nothing: the per-context affine hulls of the
/// supports, read as Z₂-linear equations over all observables, are jointly
/// unsatisfiable.
pub fn state_dependent_avn(model: &PossibilisticModel) -> bool {
    let m = model.scenario.observables.len();
    let mut rows: Vec<BitVec> = Vec::new();
    let mut rhs_bits: Vec<bool> = Vec::new();

    for (c, context) in model.scenario.contexts().iter().enumerate() {
        let support: Vec<u64> = model.supports[c].iter().cloned().collect();
        let k = context.len();
        let base = support[0];
        let differences: Vec<BitVec> = support[1..]
            .iter()
            .map(|&s| {
                BitVec::from_bools(&(0..k).map(|i| (s ^ base) >> i & 1 == 1).collect::<Vec<_>>())
            })
            .collect();
        // Equations a·s = a·base for a orthogonal to all differences.
        let difference_matrix = BinaryMatrix::from_rows(differences, k);
        for a in difference_matrix.nullspace() {
            let mut row = BitVec::zeros(m);
            let mut constant = false;
            for pos in a.iter_ones() {
                row.set(context[pos], true);
                if base >> pos & 1 == 1 {
                    constant = !constant;
                }
            }
            if row.is_zero() {
                continue;
            }
            rows.push(row);
            rhs_bits.push(constant);
        }
    }

    if rows.is_empty() {
        return false;
    }
    let matrix = BinaryMatrix::from_rows(rows, m);
    let rhs = BitVec::from_bools(&rhs_bits);
    matrix.solve(&rhs).expect("dimensions agree").is_none()
}

/// Configuration for the equivalence battery.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub trials: usize,
    pub closure_cap: usize,
    pub lp_cap: usize,
    pub circuit_length: usize,
    pub seed: u64,
}

impl BatteryConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        BatteryConfig {
            trials,
            closure_cap: 1 << 10,
            lp_cap: 64,
            circuit_length: 48,
            seed,
        }
    }
}

/// Per-state outcomes of the battery.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TrialOutcome {
    pub state_generators: Vec<String>,
    pub avn: bool,
    pub strongly_contextual: bool,
    pub lp_contextual: bool,
}

/// Results of the closure-level equivalence battery: the graph, algebraic
/// and model-level contextuality verdicts that must all coincide.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatteryReport {
    pub observables: Vec<String>,
    pub closure_size: usize,
    pub kl_of_base: bool,
    pub kl_of_closure: bool,
    pub si_avn: bool,
    pub ks_assignment_absent: bool,
    pub witness_tree_found: bool,
    pub trials: Vec<TrialOutcome>,
    pub agreement: bool,
    pub counterexample: Option<String>,
}

/// Runs every decider on the partial closure of `observables` and on the
/// models of random stabilizer states, reporting whether all verdicts agree.
pub fn equivalence_battery(
    observables: &[PauliOperator],
    config: &BatteryConfig,
) -> Result<BatteryReport, ScenarioError> {
    let closure = partial_closure(observables, config.closure_cap)?;
    let kl_of_base = build_graph(closure.base()).has_kirby_love().0;
    let kl_of_closure = build_graph(closure.elements()).has_kirby_love().0;
    let (avn_verdict, _) = si_avn(&closure);
    let ks_absent = ks_value_assignment(&closure).is_none();
    let witness = determining_tree_witness(&closure).is_some();

    let scenario = scenario_from_observables(closure.elements())?;
    let n = scenario.qubits();
    let mut trials = Vec::with_capacity(config.trials);
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(trial as u64));
        let state = StabilizerState::random(n, config.circuit_length, &mut rng);
        let model = model_from_stabilizer_state(&scenario, &state)?;
        let possibilistic = possibilistic_of(&model);
        trials.push(TrialOutcome {
            state_generators: state.generators().iter().map(|g| g.to_string()).collect(),
            avn: state_dependent_avn(&possibilistic),
            strongly_contextual: global_section_search(&possibilistic).is_none(),
            lp_contextual: lp_noncontextuality(&model, config.lp_cap)?.is_contextual(),
        });
    }

    let mut verdicts = vec![
        kl_of_base,
        kl_of_closure,
        avn_verdict,
        ks_absent,
        witness,
    ];
    for trial in &trials {
        verdicts.extend([trial.avn, trial.strongly_contextual, trial.lp_contextual]);
    }
    let agreement = verdicts.windows(2).all(|w| w[0] == w[1]);
    let counterexample = if agreement {
        None
    } else {
        Some(format!(
            "set {:?}: kl_base={kl_of_base} kl_closure={kl_of_closure} si_avn={avn_verdict} \
             ks_absent={ks_absent} witness={witness} trials={trials:?}",
            observables.iter().map(|p| p.to_string()).collect::<Vec<_>>()
        ))
    };

    Ok(BatteryReport {
        observables: observables.iter().map(|p| p.to_string()).collect(),
        closure_size: closure.len(),
        kl_of_base,
        kl_of_closure,
        si_avn: avn_verdict,
        ks_assignment_absent: ks_absent,
        witness_tree_found: witness,
        trials,
        agreement,
        counterexample,
    })
}

/// On-disk empirical model: observables in the Pauli grammar, optional
/// explicit contexts (index sets into the observable list), and per-context
/// distributions (outcome bitstring to rational string) or supports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub n: usize,
    pub observables: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contexts: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distributions: Option<Vec<BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supports: Option<Vec<Vec<String>>>,
}

impl ModelFile {
    pub fn parse_observables(&self) -> Result<Vec<PauliOperator>, ScenarioError> {
        self.observables
            .iter()
            .map(|text| {
                PauliOperator::parse(text, self.n).map_err(|source| ScenarioError::BadPauli {
                    text: text.clone(),
                    source,
                })
            })
            .collect()
    }

    pub fn to_scenario(&self) -> Result<MeasurementScenario, ScenarioError> {
        scenario_from_observables(&self.parse_observables()?)
    }

    /// Maps each file context (arbitrary order) to the canonical computed
    /// context, with the bit permutation taking file positions to canonical
    /// positions.
    fn context_alignment(
        &self,
        scenario: &MeasurementScenario,
    ) -> Result<Vec<(usize, Vec<usize>)>, ScenarioError> {
        let file_contexts = match &self.contexts {
            Some(cs) => cs.clone(),
            None => scenario.contexts().to_vec(),
        };
        if file_contexts.len() != scenario.contexts().len() {
            return Err(ScenarioError::ContextMismatch(format!(
                "file lists {} contexts, scenario has {}",
                file_contexts.len(),
                scenario.contexts().len()
            )));
        }
        file_contexts
            .iter()
            .map(|listed| {
                let mut sorted = listed.clone();
                sorted.sort_unstable();
                let canonical = scenario
                    .contexts()
                    .iter()
                    .position(|c| *c == sorted)
                    .ok_or_else(|| {
                        ScenarioError::ContextMismatch(format!(
                            "{listed:?} is not a maximal commuting subset"
                        ))
                    })?;
                let positions: Vec<usize> = listed
                    .iter()
                    .map(|i| scenario.contexts()[canonical].iter().position(|j| j == i).unwrap())
                    .collect();
                Ok((canonical, positions))
            })
            .collect()
    }

    fn parse_outcome(key: &str, size: usize) -> Result<u64, ScenarioError> {
        if key.len() != size || !key.chars().all(|c| c == '0' || c == '1') {
            return Err(ScenarioError::BadOutcomeKey {
                key: key.to_string(),
                size,
            });
        }
        Ok(key
            .chars()
            .enumerate()
            .fold(0u64, |acc, (i, c)| acc | u64::from(c == '1') << i))
    }

    pub fn to_probabilistic(&self) -> Result<ProbabilisticModel, ScenarioError> {
        let scenario = self.to_scenario()?;
        let tables_in = self
            .distributions
            .as_ref()
            .ok_or_else(|| ScenarioError::ContextMismatch("no distributions in file".into()))?;
        let alignment = self.context_alignment(&scenario)?;
        if tables_in.len() != alignment.len() {
            return Err(ScenarioError::ContextMismatch(
                "one distribution per context required".into(),
            ));
        }
        let mut tables: Vec<BTreeMap<u64, BigRational>> =
            vec![BTreeMap::new(); scenario.contexts().len()];
        for (table, (canonical, positions)) in tables_in.iter().zip(&alignment) {
            let size = positions.len();
            for (key, value) in table {
                let listed = Self::parse_outcome(key, size)?;
                let mut outcome = 0u64;
                for (file_pos, &canon_pos) in positions.iter().enumerate() {
                    outcome |= (listed >> file_pos & 1) << canon_pos;
                }
                let probability: BigRational = value
                    .parse()
                    .map_err(|_| ScenarioError::BadRational(value.clone()))?;
                tables[*canonical].insert(outcome, probability);
            }
        }
        ProbabilisticModel::from_tables(scenario, tables)
    }

    pub fn to_possibilistic(&self) -> Result<PossibilisticModel, ScenarioError> {
        if self.supports.is_none() && self.distributions.is_some() {
            return Ok(possibilistic_of(&self.to_probabilistic()?));
        }
        let scenario = self.to_scenario()?;
        let supports_in = self
            .supports
            .as_ref()
            .ok_or_else(|| ScenarioError::ContextMismatch("no supports in file".into()))?;
        let alignment = self.context_alignment(&scenario)?;
        if supports_in.len() != alignment.len() {
            return Err(ScenarioError::ContextMismatch(
                "one support per context required".into(),
            ));
        }
        let mut supports: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); scenario.contexts().len()];
        for (listed_support, (canonical, positions)) in supports_in.iter().zip(&alignment) {
            for key in listed_support {
                let listed = Self::parse_outcome(key, positions.len())?;
                let mut outcome = 0u64;
                for (file_pos, &canon_pos) in positions.iter().enumerate() {
                    outcome |= (listed >> file_pos & 1) << canon_pos;
                }
                supports[*canonical].insert(outcome);
            }
        }
        PossibilisticModel::from_supports(scenario, supports)
    }

    pub fn from_probabilistic(model: &ProbabilisticModel) -> ModelFile {
        let scenario = model.scenario();
        let distributions = scenario
            .contexts()
            .iter()
            .enumerate()
            .map(|(c, context)| {
                model.tables[c]
                    .iter()
                    .map(|(&outcome, p)| {
                        let key: String = (0..context.len())
                            .map(|i| if outcome >> i & 1 == 1 { '1' } else { '0' })
                            .collect();
                        (key, p.to_string())
                    })
                    .collect()
            })
            .collect();
        ModelFile {
            n: scenario.qubits(),
            observables: scenario.observables().iter().map(|p| p.to_string()).collect(),
            contexts: Some(scenario.contexts().to_vec()),
            distributions: Some(distributions),
            supports: None,
        }
    }
}
