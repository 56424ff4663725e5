//! Code-switching protocols and their audits.
//!
//! Two subsystem codes on the same qubits define a protocol through the
//! parent code whose gauge group is generated by both codes' gauge groups and
//! whose stabilizer is the signed intersection of the two stabilizer groups.
//! The parent's gauge-qubit count decides contextuality of the protocol.
//!
//! The audits implement the transversality hypotheses: triorthogonality with
//! the mod-8 weight conditions of CSS-T codes, invariance of a stabilizer
//! span under the transversal-Hadamard swap of symplectic halves, and the
//! gauge-qubit lower bound ⌈dim V / 2⌉ extracted from the excess of pure
//! Z-type over pure X-type stabilizers.

use crate::codes::{code_from_gauge_generators, CodeError, SubsystemCode, Verdict};
use crate::f2::{row_space_intersection, BinaryMatrix, BitVec};
use crate::pauli::{PauliOperator, Sign};
use crate::tracked::{SignedAbelianGroup, SignedGroupError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SwitchError {
    #[error("codes act on different qubit counts")]
    MismatchedQubits,
    #[error("generators do not form an abelian group: {0} and {1} anticommute")]
    NotAbelian(String, String),
    #[error("signed group contains -I: {0}")]
    ContainsMinusIdentity(String),
    #[error("codes are not gauge-fixings of a common parent: {0}")]
    Inconsistent(String),
    #[error("symplectic rows need an even column count, got {0}")]
    OddColumns(usize),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Number of gauge qubits from the minimal generator counts of the gauge and
/// stabilizer groups: g = (gauge_rank - stabilizer_rank) / 2.
///
/// ```
/// use qcx_core::switching::gauge_qubits_from_ranks;
/// // A 12-generator gauge group over a rank-6 stabilizer leaves 3 gauge qubits.
/// assert_eq!(gauge_qubits_from_ranks(12, 6), 3);
/// // The Steane-to-Reed-Muller parent: 17 gauge generators, 11 stabilizers.
/// assert_eq!(gauge_qubits_from_ranks(17, 11), 3);
/// ```
pub fn gauge_qubits_from_ranks(gauge_rank: usize, stabilizer_rank: usize) -> usize {
    assert!(gauge_rank >= stabilizer_rank);
    assert_eq!((gauge_rank - stabilizer_rank) % 2, 0);
    (gauge_rank - stabilizer_rank) / 2
}

impl From<SignedGroupError> for SwitchError {
    fn from(e: SignedGroupError) -> SwitchError {
        match e {
            SignedGroupError::NotAbelian(a, b) => SwitchError::NotAbelian(a, b),
            SignedGroupError::ContainsMinusIdentity(g) => SwitchError::ContainsMinusIdentity(g),
        }
    }
}

/// Basis of the signed intersection of two abelian -I-free groups.
///
/// The symplectic spans are intersected first; on that subspace the two sign
/// functions differ by a GF(2)-linear functional, and the result is the
/// kernel of that functional with the common signs attached.
pub fn signed_intersection(
    s1: &[PauliOperator],
    s2: &[PauliOperator],
) -> Result<Vec<PauliOperator>, SwitchError> {
    let group1 = SignedAbelianGroup::new(s1)?;
    let group2 = SignedAbelianGroup::new(s2)?;
    let intersection = row_space_intersection(&group1.matrix(), &group2.matrix())
        .map_err(|_| SwitchError::MismatchedQubits)?;

    let disagreement: Vec<bool> = intersection
        .iter()
        .map(|v| {
            group1.sign_of(v).expect("vector is in the intersection")
                != group2.sign_of(v).expect("vector is in the intersection")
        })
        .collect();

    let kernel: Vec<BitVec> = match disagreement.iter().position(|&d| d) {
        None => intersection,
        Some(j) => intersection
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(i, v)| {
                if disagreement[i] {
                    v.xor(&intersection[j])
                } else {
                    v.clone()
                }
            })
            .collect(),
    };

    let n = group1.qubits();
    Ok(kernel
        .into_iter()
        .map(|v| {
            let sign = group1.sign_of(&v).expect("kernel vector is in both groups");
            PauliOperator::new(n, sign, v.slice(0, n), v.slice(n, n))
        })
        .collect())
}

/// A code-switching protocol: two codes, their common parent, and the signed
/// intersection of the stabilizer groups.
#[derive(Debug, Clone)]
pub struct CodeSwitchProtocol {
    pub code1: SubsystemCode,
    pub code2: SubsystemCode,
    pub parent: SubsystemCode,
    pub parent_stabilizer: Vec<PauliOperator>,
}

/// Builds the protocol's parent code from the union of the gauge generators
/// and cross-checks it against the signed stabilizer intersection.
///
/// The parent stabilizer span must equal the radical of the combined gauge
/// span, and the two codes' sign conventions must agree there; anything else
/// means the codes are not gauge-fixings of one parent and is flagged.
pub fn protocol_from_codes(
    code1: &SubsystemCode,
    code2: &SubsystemCode,
) -> Result<CodeSwitchProtocol, SwitchError> {
    if code1.qubits() != code2.qubits() {
        return Err(SwitchError::MismatchedQubits);
    }
    let n = code1.qubits();
    let union: Vec<PauliOperator> = code1
        .gauge_generators()
        .iter()
        .chain(code2.gauge_generators())
        .cloned()
        .collect();
    let parent = code_from_gauge_generators(n, &union)?;
    let parent_stabilizer = signed_intersection(code1.stabilizer_basis(), code2.stabilizer_basis())?;

    if parent_stabilizer.len() != parent.s() {
        return Err(SwitchError::Inconsistent(format!(
            "signed intersection has rank {}, parent center has rank {}",
            parent_stabilizer.len(),
            parent.s()
        )));
    }
    let parent_matrix = parent.stabilizer_matrix();
    let intersection_group = SignedAbelianGroup::new(&parent_stabilizer)?;
    for op in &parent_stabilizer {
        if !parent_matrix.row_space_contains(&op.symplectic_vector()) {
            return Err(SwitchError::Inconsistent(format!(
                "intersection element {op} lies outside the parent center"
            )));
        }
    }
    for op in parent.stabilizer_basis() {
        match intersection_group.sign_of(&op.symplectic_vector()) {
            Some(sign) if sign == op.sign() => {}
            Some(_) => {
                return Err(SwitchError::Inconsistent(format!(
                    "sign of {op} disagrees between the parent and the intersection"
                )))
            }
            None => {
                return Err(SwitchError::Inconsistent(format!(
                    "parent stabilizer {op} is not in the intersection span"
                )))
            }
        }
    }

    Ok(CodeSwitchProtocol {
        code1: code1.clone(),
        code2: code2.clone(),
        parent,
        parent_stabilizer,
    })
}

/// Contextuality verdict of the protocol, i.e. of its parent code.
pub fn protocol_verdict(protocol: &CodeSwitchProtocol) -> Verdict {
    protocol.parent.contextuality_verdict()
}

/// Result of the triorthogonality and mod-8 weight audit of a generator
/// matrix G_{C1} whose trailing block generates C2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsstAudit {
    pub triorthogonal: bool,
    pub pair_violations: Vec<(usize, usize)>,
    pub triple_violations: Vec<(usize, usize, usize)>,
    /// Every codeword of C2 has weight 0 mod 8; None when the enumeration cap
    /// was exceeded and the condition was left unchecked.
    pub weights_mod8_ok: Option<bool>,
    /// Every codeword a of C2 has wt(a + 1) = 1 mod 8. Reported as computed:
    /// codes whose logical T is realized by transversal T-dagger fail this
    /// strict phase condition while still being triorthogonal.
    pub complement_weights_mod8_ok: Option<bool>,
    /// dim C1-perp minus dim C2.
    pub dim_gap: i64,
}

pub const DEFAULT_WEIGHT_ENUMERATION_DIM: usize = 20;

/// Audits pairwise/triple support parities of `g1` and the mod-8 weight
/// conditions over the row space of its last `c2_rows` rows.
pub fn triorthogonality_audit(g1: &BinaryMatrix, c2_rows: usize) -> CsstAudit {
    triorthogonality_audit_capped(g1, c2_rows, DEFAULT_WEIGHT_ENUMERATION_DIM)
}

pub fn triorthogonality_audit_capped(
    g1: &BinaryMatrix,
    c2_rows: usize,
    enumeration_dim_cap: usize,
) -> CsstAudit {
    assert!(c2_rows <= g1.num_rows(), "C2 block larger than the matrix");
    let n = g1.num_cols();
    let m = g1.num_rows();

    let mut pair_violations = Vec::new();
    let mut triple_violations = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            if g1.row(i).and_weight(g1.row(j)) % 2 != 0 {
                pair_violations.push((i, j));
            }
            for k in (j + 1)..m {
                let mut triple = 0usize;
                for bit in g1.row(i).iter_ones() {
                    if g1.row(j).get(bit) && g1.row(k).get(bit) {
                        triple += 1;
                    }
                }
                if triple % 2 != 0 {
                    triple_violations.push((i, j, k));
                }
            }
        }
    }

    let c2 = BinaryMatrix::from_rows(g1.rows()[m - c2_rows..].to_vec(), n);
    let c2_rank = c2.rank();
    let (weights_ok, complement_ok) = if c2_rank <= enumeration_dim_cap {
        let basis: Vec<BitVec> = {
            let mut reduced = c2.clone();
            reduced.echelonize();
            reduced.rows().iter().filter(|r| !r.is_zero()).cloned().collect()
        };
        let all_ones = BitVec::from_bools(&vec![true; n]);
        let mut weights_ok = true;
        let mut complement_ok = true;
        for mask in 0u64..(1 << basis.len()) {
            let mut word = BitVec::zeros(n);
            for (i, row) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    word.xor_assign(row);
                }
            }
            if word.count_ones() % 8 != 0 {
                weights_ok = false;
            }
            if word.xor(&all_ones).count_ones() % 8 != 1 {
                complement_ok = false;
            }
        }
        (Some(weights_ok), Some(complement_ok))
    } else {
        (None, None)
    };

    CsstAudit {
        triorthogonal: pair_violations.is_empty() && triple_violations.is_empty(),
        pair_violations,
        triple_violations,
        weights_mod8_ok: weights_ok,
        complement_weights_mod8_ok: complement_ok,
        dim_gap: (n as i64 - g1.rank() as i64) - c2_rank as i64,
    }
}

/// True iff swapping the X and Z halves of every row stays inside the row
/// space, i.e. the span is invariant under the transversal Hadamard.
pub fn eta_invariance(stabilizer_rows: &BinaryMatrix) -> Result<bool, SwitchError> {
    let cols = stabilizer_rows.num_cols();
    if cols % 2 != 0 {
        return Err(SwitchError::OddColumns(cols));
    }
    let n = cols / 2;
    for row in stabilizer_rows.rows() {
        let swapped = row.slice(n, n).concat(&row.slice(0, n));
        if !stabilizer_rows.row_space_contains(&swapped) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hypotheses the bound certificate rests on, reported field by field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateHypotheses {
    /// code1's stabilizer splits into all-plus pure X- and Z-type parts.
    pub code1_css: bool,
    /// C2 (X supports) sits inside C1-perp (Z supports).
    pub c2_inside_c1_perp: bool,
    /// code2's stabilizer span is invariant under the symplectic half-swap.
    pub code2_eta_invariant: bool,
    /// The transversal logical-representative assumption is not verifiable
    /// from generator presentations and is recorded as unchecked.
    pub logical_representatives_checked: bool,
}

impl CertificateHypotheses {
    pub fn all_hold(&self) -> bool {
        self.code1_css && self.c2_inside_c1_perp && self.code2_eta_invariant
    }
}

/// The gauge-qubit lower-bound certificate: g >= ⌈dim V / 2⌉ with
/// V = {(0|z) : z in C3} and C1-perp = C2 ⊕ C3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub hypotheses: CertificateHypotheses,
    pub dim_v: usize,
    pub dim_v_cap_w2: usize,
    pub bound: usize,
    pub actual_g: usize,
    pub bound_satisfied: bool,
}

/// Pure X-type support vectors in a symplectic row space.
fn pure_x_supports(span: &BinaryMatrix, n: usize) -> Vec<BitVec> {
    let x_plane = BinaryMatrix::from_rows(
        (0..n)
            .map(|i| BitVec::from_indices(n, &[i]).concat(&BitVec::zeros(n)))
            .collect(),
        2 * n,
    );
    row_space_intersection(span, &x_plane)
        .expect("equal widths")
        .into_iter()
        .map(|v| v.slice(0, n))
        .collect()
}

/// Pure Z-type support vectors in a symplectic row space.
fn pure_z_supports(span: &BinaryMatrix, n: usize) -> Vec<BitVec> {
    let z_plane = BinaryMatrix::from_rows(
        (0..n)
            .map(|i| BitVec::zeros(n).concat(&BitVec::from_indices(n, &[i])))
            .collect(),
        2 * n,
    );
    row_space_intersection(span, &z_plane)
        .expect("equal widths")
        .into_iter()
        .map(|v| v.slice(n, n))
        .collect()
}

/// Computes the gauge-qubit lower-bound certificate for a protocol whose first
/// code is the CSS-T candidate and whose second is the Hadamard-invariant
/// one. Hypothesis failures leave the dimensions at zero and are reported in
/// the `hypotheses` field.
pub fn csst_bound_certificate(protocol: &CodeSwitchProtocol) -> Result<BoundCertificate, SwitchError> {
    let n = protocol.code1.qubits();
    let w1 = protocol.code1.stabilizer_matrix();
    let w2 = protocol.code2.stabilizer_matrix();

    let c2 = pure_x_supports(&w1, n);
    let c1_perp = pure_z_supports(&w1, n);
    let structurally_css = c2.len() + c1_perp.len() == w1.rank();
    let signs_all_plus = protocol
        .code1
        .stabilizer_basis()
        .iter()
        .all(|op| op.sign() == Sign::Plus);
    let code1_css = structurally_css && signs_all_plus;

    let c1_perp_matrix = BinaryMatrix::from_rows(c1_perp.clone(), n);
    let c2_inside = c2.iter().all(|v| c1_perp_matrix.row_space_contains(v));
    let code2_eta_invariant = eta_invariance(&w2)?;

    let hypotheses = CertificateHypotheses {
        code1_css,
        c2_inside_c1_perp: c2_inside,
        code2_eta_invariant,
        logical_representatives_checked: false,
    };

    let actual_g = protocol.parent.g();
    if !hypotheses.all_hold() {
        return Ok(BoundCertificate {
            hypotheses,
            dim_v: 0,
            dim_v_cap_w2: 0,
            bound: 0,
            actual_g,
            bound_satisfied: true,
        });
    }

    // Deterministic complement C3: extend the echelonized C2 basis by
    // C1-perp basis vectors, greedily in canonical order.
    let mut extended = BinaryMatrix::from_rows(c2.clone(), n);
    let mut c3: Vec<BitVec> = Vec::new();
    for candidate in &c1_perp {
        if !extended.row_space_contains(candidate) {
            extended.push_row(candidate.clone());
            c3.push(candidate.clone());
        }
    }

    let v_matrix = BinaryMatrix::from_rows(
        c3.iter().map(|z| BitVec::zeros(n).concat(z)).collect(),
        2 * n,
    );
    let dim_v = v_matrix.num_rows();
    let dim_v_cap_w2 = row_space_intersection(&v_matrix, &w2)
        .expect("equal widths")
        .len();
    let bound = dim_v.div_ceil(2);

    Ok(BoundCertificate {
        hypotheses,
        dim_v,
        dim_v_cap_w2,
        bound,
        actual_g,
        bound_satisfied: bound <= actual_g,
    })
}

/// The CSS-T generator matrix of a CSS code with transversal all-ones logical
/// X: the all-ones row stacked over a basis of the X-stabilizer supports.
/// Returns the matrix and the number of C2 rows.
pub fn csst_matrix_for_code(code: &SubsystemCode) -> Result<(BinaryMatrix, usize), SwitchError> {
    let n = code.qubits();
    let c2 = pure_x_supports(&code.stabilizer_matrix(), n);
    let mut rows = vec![BitVec::from_bools(&vec![true; n])];
    rows.extend(c2.iter().cloned());
    let c2_rows = c2.len();
    Ok((BinaryMatrix::from_rows(rows, n), c2_rows))
}
