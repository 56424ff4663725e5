//! Contextuality analysis of quantum error-correcting codes.
//!
//! The crate decides, with exact arithmetic throughout, whether Pauli
//! measurement sets and stabilizer/subsystem codes are contextual:
//!
//! - [`pauli`]: real-phase Pauli observables with sign and phase tracking;
//! - [`f2`]: GF(2) linear algebra (rank, solve, nullspace, Zassenhaus);
//! - [`partial_group`]: partial closures, Kochen-Specker value assignments,
//!   state-independent all-versus-nothing arguments, determining trees;
//! - [`compat_graph`]: compatibility graphs, the Kirby-Love property, and
//!   maximal-clique (context) enumeration;
//! - [`scenario`]: sheaf-theoretic empirical models over measurement
//!   scenarios and their contextuality deciders, including an exact rational
//!   feasibility LP and the constructive gluing of non-Kirby-Love models;
//! - [`codes`]: subsystem stabilizer codes, gauge-qubit counting, the code
//!   library, and generic CSS subsystem constructions;
//! - [`switching`]: code-switching protocols, triorthogonality and
//!   transversality audits, and gauge-qubit lower-bound certificates.

pub mod codes;
pub mod compat_graph;
pub mod f2;
pub mod partial_group;
pub mod pauli;
pub mod scenario;
pub mod switching;
mod tracked;

pub use codes::{code_from_gauge_generators, Classification, SubsystemCode, Verdict};
pub use compat_graph::{build_graph, CompatibilityGraph, KlWitness};
pub use f2::{BinaryMatrix, BitVec};
pub use partial_group::{partial_closure, ClosureSet, DeterminingTree};
pub use pauli::{FormatStyle, GroupElement, PauliOperator, Sign};
pub use scenario::{MeasurementScenario, PossibilisticModel, ProbabilisticModel, StabilizerState};
pub use switching::{protocol_from_codes, CodeSwitchProtocol};
