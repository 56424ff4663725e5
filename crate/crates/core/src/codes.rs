//! Subsystem qubit stabilizer codes.
//!
//! A code is presented by gauge generators; everything else is derived. The
//! symplectic span of the generators splits into g hyperbolic pairs plus the
//! radical, whose signed preimages form the stabilizer basis. Parameters obey
//! s = rank - 2g and k = n - s - g, so verdicts do not depend on the
//! particular generating set presented.
//!
//! Also here: the built-in code library (Steane, the 15-qubit Reed-Muller
//! code, the extended Steane code on the partitioned tetrahedron, Bacon-Shor
//! 3x3, a six-qubit one-gauge-qubit code), the generic CSS(W_T, W_C)
//! subsystem construction, and the closed-form gauge counts of the three
//! doubled color code families.


use crate::f2::{BinaryMatrix, BitVec};
use crate::pauli::{GroupElement, PauliOperator, PauliParseError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("no gauge generators given")]
    EmptyGenerators,
    #[error("gauge generators act on different qubit counts")]
    MismatchedQubits,
    #[error("sign inconsistency: {0}")]
    SignInconsistency(String),
    #[error("CSS subspace chain violated: {0}")]
    ChainViolation(String),
    #[error("CSS subspace rows must have even weight (row {0})")]
    ParityViolation(usize),
    #[error("CSS construction requires odd n, got {0}")]
    EvenQubitCount(usize),
    #[error("doubled color code member index must be at least 1")]
    BadFamilyIndex,
    #[error("invalid Pauli string {text:?}: {source}")]
    BadPauli {
        text: String,
        source: PauliParseError,
    },
}

/// A subsystem stabilizer code with all derived data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemCode {
    n: usize,
    gauge_generators: Vec<PauliOperator>,
    stabilizer_basis: Vec<PauliOperator>,
    canonical_pairs: Vec<(PauliOperator, PauliOperator)>,
}

/// Contextuality classification of a code, decided by its gauge-qubit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Noncontextual,
    StronglyContextualInPartialClosure,
}

/// Verdict for a code: strongly contextual in a partial closure iff g >= 2,
/// in which case four check measurements witness the Kirby-Love property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub classification: Classification,
    pub gauge_qubits: usize,
    pub kl_witness: Option<[PauliOperator; 4]>,
}

/// Row of a tracked elimination: a symplectic vector plus the combination of
/// input generators that produced it.
#[derive(Clone)]
struct TrackedRow {
    vector: BitVec,
    combo: BitVec,
}

fn symplectic_form(a: &BitVec, b: &BitVec) -> bool {
    let n = a.len() / 2;
    let (ax, az) = (a.slice(0, n), a.slice(n, n));
    let (bx, bz) = (b.slice(0, n), b.slice(n, n));
    ax.dot(&bz) ^ az.dot(&bx)
}

/// Ordered product of the selected generators, multiplied in increasing
/// index order with full phase tracking.
fn combo_product(gens: &[PauliOperator], combo: &BitVec) -> GroupElement {
    let n = gens[0].qubits();
    let mut product = GroupElement::identity(n);
    for i in combo.iter_ones() {
        product = product.mul(&gens[i].group_element());
    }
    product
}

/// Derives a subsystem code from any generating set of its gauge group.
///
/// The stabilizer basis consists of the radical of the symplectic form on the
/// generator span; each basis element's sign is the phase of the tracked
/// product of the generator combination expressing it. A dependency among
/// pairwise-commuting generators whose product is -I, or a radical element
/// whose tracked product has imaginary phase, is a sign inconsistency.
pub fn code_from_gauge_generators(
    n: usize,
    gens: &[PauliOperator],
) -> Result<SubsystemCode, CodeError> {
    if gens.is_empty() {
        return Err(CodeError::EmptyGenerators);
    }
    if gens.iter().any(|g| g.qubits() != n) {
        return Err(CodeError::MismatchedQubits);
    }

    let m = gens.len();
    let mut rows: Vec<TrackedRow> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| TrackedRow {
            vector: g.symplectic_vector(),
            combo: BitVec::from_indices(m, &[i]),
        })
        .collect();

    // Tracked echelon form over the 2n symplectic columns.
    let mut rank = 0;
    for c in 0..2 * n {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i].vector.get(c)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.vector.get(c) {
                row.vector.xor_assign(&pivot_row.vector);
                row.combo.xor_assign(&pivot_row.combo);
            }
        }
        rank += 1;
    }

    // Dependencies among the inputs: where the combination commutes pairwise
    // its product is order-independent, and a -I value means the presented
    // signs contradict each other.
    for row in &rows[rank..] {
        let support: Vec<usize> = row.combo.iter_ones().collect();
        let pairwise_commuting = support
            .iter()
            .enumerate()
            .all(|(i, &a)| support[i + 1..].iter().all(|&b| gens[a].commutes(&gens[b])));
        if pairwise_commuting {
            let product = combo_product(gens, &row.combo);
            let p = product
                .to_pauli()
                .expect("product of commuting observables is real");
            if p.is_minus_identity() {
                let names: Vec<String> = support.iter().map(|&i| gens[i].to_string()).collect();
                return Err(CodeError::SignInconsistency(format!(
                    "generators {} multiply to -I",
                    names.join(" * ")
                )));
            }
        }
    }
    rows.truncate(rank);

    // Symplectic Gram-Schmidt: peel off hyperbolic pairs until the leftover
    // rows are the radical.
    let mut pairs: Vec<(TrackedRow, TrackedRow)> = Vec::new();
    let mut remaining = rows;
    loop {
        let mut found = None;
        'search: for i in 0..remaining.len() {
            for j in (i + 1)..remaining.len() {
                if symplectic_form(&remaining[i].vector, &remaining[j].vector) {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = found else { break };
        let v = remaining.remove(j);
        let u = remaining.remove(i);
        for w in &mut remaining {
            if symplectic_form(&w.vector, &v.vector) {
                w.vector.xor_assign(&u.vector);
                w.combo.xor_assign(&u.combo);
            }
            if symplectic_form(&w.vector, &u.vector) {
                w.vector.xor_assign(&v.vector);
                w.combo.xor_assign(&v.combo);
            }
        }
        pairs.push((u, v));
    }

    let stabilizer_basis: Vec<PauliOperator> = remaining
        .iter()
        .map(|row| {
            let product = combo_product(gens, &row.combo);
            product.to_pauli().map_err(|_| {
                CodeError::SignInconsistency(format!(
                    "stabilizer element {:?} has imaginary tracked phase",
                    row.vector
                ))
            })
        })
        .collect::<Result<_, _>>()?;

    // Hyperbolic pair representatives only matter projectively; an imaginary
    // tracked phase is normalized to a real one deterministically.
    let realize = |row: &TrackedRow| -> PauliOperator {
        let product = combo_product(gens, &row.combo);
        match product.to_pauli() {
            Ok(p) => p,
            Err(_) => {
                let x_bits = product.x_bits().clone();
                let z_bits = product.z_bits().clone();
                let phase = (product.phase_exp() + 3) % 4;
                let sign = if phase == 0 {
                    crate::pauli::Sign::Plus
                } else {
                    crate::pauli::Sign::Minus
                };
                PauliOperator::new(n, sign, x_bits, z_bits)
            }
        }
    };
    let canonical_pairs: Vec<(PauliOperator, PauliOperator)> = pairs
        .iter()
        .map(|(u, v)| (realize(u), realize(v)))
        .collect();

    let code = SubsystemCode {
        n,
        gauge_generators: gens.to_vec(),
        stabilizer_basis,
        canonical_pairs,
    };
    debug_assert!(
        code.check_invariants().is_ok(),
        "{:?}",
        code.check_invariants()
    );
    Ok(code)
}

impl SubsystemCode {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn gauge_generators(&self) -> &[PauliOperator] {
        &self.gauge_generators
    }

    pub fn stabilizer_basis(&self) -> &[PauliOperator] {
        &self.stabilizer_basis
    }

    pub fn canonical_pairs(&self) -> &[(PauliOperator, PauliOperator)] {
        &self.canonical_pairs
    }

    /// Rank of the stabilizer group.
    pub fn s(&self) -> usize {
        self.stabilizer_basis.len()
    }

    /// Number of gauge qubits.
    pub fn g(&self) -> usize {
        self.canonical_pairs.len()
    }

    /// Number of logical qubits, n - s - g.
    pub fn k(&self) -> usize {
        self.n - self.s() - self.g()
    }

    /// Symplectic rank of the gauge group, s + 2g.
    pub fn gauge_rank(&self) -> usize {
        self.s() + 2 * self.g()
    }

    /// Matrix of the stabilizer basis symplectic vectors.
    pub fn stabilizer_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(
            self.stabilizer_basis
                .iter()
                .map(|p| p.symplectic_vector())
                .collect(),
            2 * self.n,
        )
    }

    /// Matrix of the gauge generators' symplectic vectors.
    pub fn gauge_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_rows(
            self.gauge_generators
                .iter()
                .map(|p| p.symplectic_vector())
                .collect(),
            2 * self.n,
        )
    }

    /// The canonical check measurements: the stabilizer basis followed by the
    /// g hyperbolic pairs, s + 2g operators in total.
    pub fn check_measurements(&self) -> Vec<PauliOperator> {
        let mut checks = self.stabilizer_basis.clone();
        for (x, z) in &self.canonical_pairs {
            checks.push(x.clone());
            checks.push(z.clone());
        }
        checks
    }

    /// Classification by gauge-qubit count, with a Kirby-Love witness among
    /// the check measurements when g >= 2.
    pub fn contextuality_verdict(&self) -> Verdict {
        let g = self.g();
        if g >= 2 {
            let (x1, z1) = &self.canonical_pairs[0];
            let (x2, z2) = &self.canonical_pairs[1];
            Verdict {
                classification: Classification::StronglyContextualInPartialClosure,
                gauge_qubits: g,
                kl_witness: Some([x1.clone(), x2.clone(), z2.clone(), z1.clone()]),
            }
        } else {
            Verdict {
                classification: Classification::Noncontextual,
                gauge_qubits: g,
                kl_witness: None,
            }
        }
    }

    fn check_invariants(&self) -> Result<(), String> {
        for (i, s) in self.stabilizer_basis.iter().enumerate() {
            for g in &self.gauge_generators {
                if !s.commutes(g) {
                    return Err(format!(
                        "stabilizer {i} anticommutes with a gauge generator"
                    ));
                }
            }
        }
        for (i, (x, z)) in self.canonical_pairs.iter().enumerate() {
            if x.commutes(z) {
                return Err(format!("pair {i} commutes internally"));
            }
            for (j, (x2, z2)) in self.canonical_pairs.iter().enumerate() {
                if i != j
                    && (!x.commutes(x2) || !x.commutes(z2) || !z.commutes(x2) || !z.commutes(z2))
                {
                    return Err(format!("pairs {i} and {j} fail to commute"));
                }
            }
            for s in &self.stabilizer_basis {
                if !x.commutes(s) || !z.commutes(s) {
                    return Err(format!("pair {i} anticommutes with the stabilizer"));
                }
            }
        }
        if self.stabilizer_matrix().rank() != self.s() {
            return Err("stabilizer basis is dependent".into());
        }
        Ok(())
    }
}

/// The even-weight vectors orthogonal to the row space of `w`.
pub fn even_orthogonal_complement(w: &BinaryMatrix) -> Vec<BitVec> {
    let n = w.num_cols();
    let mut stacked = w.clone();
    stacked.push_row(BitVec::from_bools(&vec![true; n]));
    stacked.nullspace()
}

/// Result of the generic CSS(W_T, W_C) construction: the code-switching base
/// code together with the T-code and C-code it switches between.
#[derive(Debug, Clone)]
pub struct CssSubsystemFamily {
    pub base: SubsystemCode,
    pub t_code: SubsystemCode,
    pub c_code: SubsystemCode,
    pub dim_wt: usize,
    pub dim_wc: usize,
}

/// Builds the base, T- and C-codes from nested even-weight subspaces
/// `W_T ⊆ W_C` on an odd number of qubits, verifying the full inclusion chain
/// `W_T ⊆ W_C ⊆ Ẇ_C ⊆ Ẇ_T` after computing the dotted complements.
///
/// The base code's gauge group is CSS(Ẇ_C, Ẇ_T) and its stabilizer works out
/// to CSS(W_T, W_C), giving g = (n-1) - dim W_C - dim W_T.
pub fn css_subsystem_from_subspaces(
    wt: &BinaryMatrix,
    wc: &BinaryMatrix,
) -> Result<CssSubsystemFamily, CodeError> {
    let n = wt.num_cols();
    if wc.num_cols() != n {
        return Err(CodeError::MismatchedQubits);
    }
    if n % 2 == 0 {
        return Err(CodeError::EvenQubitCount(n));
    }
    for (i, row) in wt.rows().iter().chain(wc.rows()).enumerate() {
        if row.count_ones() % 2 != 0 {
            return Err(CodeError::ParityViolation(i));
        }
    }
    for row in wt.rows() {
        if !wc.row_space_contains(row) {
            return Err(CodeError::ChainViolation("W_T ⊄ W_C".into()));
        }
    }

    let dot_wc = even_orthogonal_complement(wc);
    let dot_wt = even_orthogonal_complement(wt);
    let dot_wc_matrix = BinaryMatrix::from_rows(dot_wc.clone(), n);
    let dot_wt_matrix = BinaryMatrix::from_rows(dot_wt.clone(), n);
    for row in wc.rows() {
        if !dot_wc_matrix.row_space_contains(row) {
            return Err(CodeError::ChainViolation("W_C ⊄ Ẇ_C".into()));
        }
    }
    for row in dot_wc_matrix.rows() {
        if !dot_wt_matrix.row_space_contains(row) {
            return Err(CodeError::ChainViolation("Ẇ_C ⊄ Ẇ_T".into()));
        }
    }

    let css_gens = |x_rows: &[BitVec], z_rows: &[BitVec]| -> Vec<PauliOperator> {
        x_rows
            .iter()
            .map(PauliOperator::x_type)
            .chain(z_rows.iter().map(PauliOperator::z_type))
            .collect()
    };

    let wt_rows: Vec<BitVec> = wt.rows().to_vec();
    let base = code_from_gauge_generators(n, &css_gens(&dot_wc, &dot_wt))?;
    let t_code = code_from_gauge_generators(n, &css_gens(&wt_rows, &dot_wt))?;
    let c_code = code_from_gauge_generators(n, &css_gens(&dot_wc, &dot_wc))?;

    let dim_wt = wt.rank();
    let dim_wc = wc.rank();
    debug_assert_eq!(base.g(), (n - 1) - dim_wc - dim_wt);
    debug_assert_eq!(t_code.g(), 0);

    Ok(CssSubsystemFamily {
        base,
        t_code,
        c_code,
        dim_wt,
        dim_wc,
    })
}

/// The three doubled color code families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoubledFamily {
    Basic,
    Intermediate,
    Final,
}

/// Closed-form (n_t, g_t) of the t-th member of a doubled color code family.
pub fn doubled_color_code_gauge_count(
    family: DoubledFamily,
    t: u64,
) -> Result<(u64, u64), CodeError> {
    if t == 0 {
        return Err(CodeError::BadFamilyIndex);
    }
    let (t3, t2) = (t * t * t, t * t);
    Ok(match family {
        DoubledFamily::Basic => (2 * t3 + 6 * t2 + 6 * t + 1, (t3 + 3 * t2 + 2 * t) / 2),
        DoubledFamily::Intermediate => {
            (2 * t3 + 7 * t2 + 7 * t - 1, (t3 + 5 * t2 + 4 * t - 4) / 2)
        }
        DoubledFamily::Final => (2 * t3 + 8 * t2 + 6 * t - 1, (t3 + 7 * t2 + 2 * t - 4) / 2),
    })
}

/// Geometry of the 15-qubit partitioned tetrahedron used by the
/// Steane-to-Reed-Muller switching protocol.
///
/// Qubits 0-6 form the Steane surface; qubits 7-14 are the bulk (the yellow
/// cell). Each cell is a hexahedron with eight qubits; interior faces are the
/// pairwise cell intersections.
pub mod tetrahedron {
    use crate::f2::BitVec;
    use crate::pauli::PauliOperator;

    pub const N: usize = 15;

    pub const RED_CELL: [usize; 8] = [0, 1, 2, 3, 7, 12, 13, 14];
    pub const GREEN_CELL: [usize; 8] = [1, 2, 4, 5, 8, 11, 13, 14];
    pub const BLUE_CELL: [usize; 8] = [2, 3, 5, 6, 9, 11, 12, 13];
    pub const YELLOW_CELL: [usize; 8] = [7, 8, 9, 10, 11, 12, 13, 14];

    pub const CELLS: [[usize; 8]; 4] = [RED_CELL, GREEN_CELL, BLUE_CELL, YELLOW_CELL];

    /// Interior faces, each the intersection of the two named cells.
    pub const INTERIOR_FACES: [(&str, [usize; 4]); 6] = [
        ("RG", [1, 2, 13, 14]),
        ("RB", [2, 3, 12, 13]),
        ("RY", [7, 12, 13, 14]),
        ("GB", [2, 5, 11, 13]),
        ("GY", [8, 11, 13, 14]),
        ("BY", [9, 11, 12, 13]),
    ];

    /// Faces of the yellow cell meeting the tetrahedron surface; the i-th one
    /// opposes the i-th of RY, GY, BY.
    pub const YELLOW_SURFACE_FACES: [[usize; 4]; 3] =
        [[8, 9, 10, 11], [7, 9, 10, 12], [7, 8, 10, 14]];

    /// Weight-4 faces of the Steane surface (red, green, blue).
    pub const STEANE_FACES: [[usize; 4]; 3] = [[0, 1, 2, 3], [1, 2, 4, 5], [2, 3, 5, 6]];

    /// All 18 faces of the cell complex: 12 on the surface, 6 interior.
    pub const ALL_FACES: [[usize; 4]; 18] = [
        // red surface
        [0, 1, 2, 3],
        [0, 1, 7, 14],
        [0, 3, 7, 12],
        // green surface
        [1, 2, 4, 5],
        [4, 5, 8, 11],
        [1, 4, 8, 14],
        // blue surface
        [2, 3, 5, 6],
        [5, 6, 9, 11],
        [3, 6, 9, 12],
        // yellow surface
        [8, 9, 10, 11],
        [7, 9, 10, 12],
        [7, 8, 10, 14],
        // interior
        [1, 2, 13, 14],
        [2, 3, 12, 13],
        [7, 12, 13, 14],
        [2, 5, 11, 13],
        [8, 11, 13, 14],
        [9, 11, 12, 13],
    ];

    pub fn support(qubits: &[usize]) -> BitVec {
        BitVec::from_indices(N, qubits)
    }

    pub fn x_on(qubits: &[usize]) -> PauliOperator {
        PauliOperator::x_type(&support(qubits))
    }

    pub fn z_on(qubits: &[usize]) -> PauliOperator {
        PauliOperator::z_type(&support(qubits))
    }

    pub fn interior_face(name: &str) -> [usize; 4] {
        INTERIOR_FACES
            .iter()
            .find(|(face, _)| *face == name)
            .map(|(_, qubits)| *qubits)
            .unwrap_or_else(|| panic!("unknown interior face {name}"))
    }
}

/// The [[7,1,3]] Steane color code, presented by its six stabilizer
/// generators on the three faces.
pub fn steane7() -> SubsystemCode {
    let mut gens = Vec::new();
    for face in tetrahedron::STEANE_FACES {
        let support = BitVec::from_indices(7, &face);
        gens.push(PauliOperator::x_type(&support));
        gens.push(PauliOperator::z_type(&support));
    }
    code_from_gauge_generators(7, &gens).expect("library code is consistent")
}

/// The [[15,1,3]] quantum Reed-Muller color code on the tetrahedron: X on
/// each cell, Z on every face of every cell.
pub fn rm15() -> SubsystemCode {
    let mut gens = Vec::new();
    for cell in tetrahedron::CELLS {
        gens.push(tetrahedron::x_on(&cell));
        gens.push(tetrahedron::z_on(&cell));
    }
    for face in tetrahedron::ALL_FACES {
        gens.push(tetrahedron::z_on(&face));
    }
    code_from_gauge_generators(tetrahedron::N, &gens).expect("library code is consistent")
}

/// The Steane code extended to 15 qubits: the bulk qubits 7-14 carry the
/// stabilizers of the yellow cell's faces (X and Z), and the Steane surface
/// keeps its face stabilizers.
pub fn extended_steane15() -> SubsystemCode {
    let mut gens = Vec::new();
    for face in tetrahedron::INTERIOR_FACES
        .iter()
        .filter(|(name, _)| name.ends_with('Y'))
        .map(|(_, qubits)| *qubits)
        .chain(tetrahedron::YELLOW_SURFACE_FACES)
    {
        gens.push(tetrahedron::x_on(&face));
        gens.push(tetrahedron::z_on(&face));
    }
    for face in tetrahedron::STEANE_FACES {
        gens.push(tetrahedron::x_on(&face));
        gens.push(tetrahedron::z_on(&face));
    }
    code_from_gauge_generators(tetrahedron::N, &gens).expect("library code is consistent")
}

/// The [[9,1,4,3]] Bacon-Shor code on a 3x3 grid: XX on horizontal neighbors,
/// ZZ on vertical neighbors. Qubit (r, c) has index 3r + c.
pub fn bacon_shor_3x3() -> SubsystemCode {
    let idx = |r: usize, c: usize| 3 * r + c;
    let mut gens = Vec::new();
    for r in 0..3 {
        for c in 0..2 {
            gens.push(PauliOperator::x_type(&BitVec::from_indices(
                9,
                &[idx(r, c), idx(r, c + 1)],
            )));
        }
    }
    for r in 0..2 {
        for c in 0..3 {
            gens.push(PauliOperator::z_type(&BitVec::from_indices(
                9,
                &[idx(r, c), idx(r + 1, c)],
            )));
        }
    }
    code_from_gauge_generators(9, &gens).expect("library code is consistent")
}

/// A [[6,1,1,3]] subsystem code: the five-qubit code on qubits 0-4 with the
/// sixth qubit held by the gauge pair (X5, Z5).
pub fn six_qubit_6113() -> SubsystemCode {
    let mut gens: Vec<PauliOperator> = ["XZZXII", "IXZZXI", "XIXZZI", "ZXIXZI"]
        .iter()
        .map(|s| PauliOperator::parse(s, 6).unwrap())
        .collect();
    gens.push(PauliOperator::x_on(6, 5));
    gens.push(PauliOperator::z_on(6, 5));
    code_from_gauge_generators(6, &gens).expect("library code is consistent")
}

/// Names, constructors, and documented distances of the built-in codes.
pub fn library() -> Vec<(&'static str, fn() -> SubsystemCode, usize)> {
    vec![
        ("steane-7", steane7 as fn() -> SubsystemCode, 3),
        ("rm-15", rm15, 3),
        ("extended-steane-15", extended_steane15, 3),
        ("bacon-shor-9", bacon_shor_3x3, 3),
        ("six-qubit-6113", six_qubit_6113, 3),
    ]
}

pub fn library_code(name: &str) -> Option<SubsystemCode> {
    library()
        .into_iter()
        .find(|(entry, _, _)| *entry == name)
        .map(|(_, build, _)| build())
}

/// On-disk code description: a name, the qubit count, and gauge generators
/// in the Pauli text grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeFile {
    pub name: String,
    pub n: usize,
    pub gauge_generators: Vec<String>,
}

impl CodeFile {
    pub fn parse_generators(&self) -> Result<Vec<PauliOperator>, CodeError> {
        self.gauge_generators
            .iter()
            .map(|text| {
                PauliOperator::parse(text, self.n).map_err(|source| CodeError::BadPauli {
                    text: text.clone(),
                    source,
                })
            })
            .collect()
    }

    pub fn to_code(&self) -> Result<SubsystemCode, CodeError> {
        code_from_gauge_generators(self.n, &self.parse_generators()?)
    }

    pub fn from_code(name: &str, code: &SubsystemCode) -> CodeFile {
        CodeFile {
            name: name.to_string(),
            n: code.qubits(),
            gauge_generators: code
                .gauge_generators()
                .iter()
                .map(|p| p.to_string())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat_graph::build_graph;
    use crate::f2::symplectic_gram;
    use crate::pauli::Sign;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p(s: &str, n: usize) -> PauliOperator {
        PauliOperator::parse(s, n).unwrap()
    }

    #[test]
    fn steane_parameters() {
        let code = steane7();
        assert_eq!((code.k(), code.s(), code.g()), (1, 6, 0));
        assert_eq!(
            code.contextuality_verdict().classification,
            Classification::Noncontextual
        );
        assert_eq!(code.check_measurements().len(), 6);
    }

    #[test]
    fn rm15_parameters() {
        let code = rm15();
        assert_eq!(
            (code.qubits(), code.k(), code.s(), code.g()),
            (15, 1, 14, 0)
        );
        assert_eq!(
            code.contextuality_verdict().classification,
            Classification::Noncontextual
        );
    }

    #[test]
    fn extended_steane_parameters_and_geometry() {
        let code = extended_steane15();
        assert_eq!(
            (code.qubits(), code.k(), code.s(), code.g()),
            (15, 1, 14, 0)
        );

        // Opposing yellow-cell faces are disjoint and multiply to the
        // weight-8 operator on the whole cell.
        let cell = tetrahedron::z_on(&tetrahedron::YELLOW_CELL);
        for (i, name) in ["RY", "GY", "BY"].iter().enumerate() {
            let inner = tetrahedron::z_on(&tetrahedron::interior_face(name));
            let outer = tetrahedron::z_on(&tetrahedron::YELLOW_SURFACE_FACES[i]);
            assert_eq!(inner.z_bits().and_weight(outer.z_bits()), 0);
            assert_eq!(inner.commuting_product(&outer).unwrap(), cell);
        }
    }

    #[test]
    fn bacon_shor_parameters_and_witness() {
        let code = bacon_shor_3x3();
        assert_eq!((code.qubits(), code.k(), code.s(), code.g()), (9, 1, 4, 4));
        assert_eq!(code.check_measurements().len(), 12);

        let verdict = code.contextuality_verdict();
        assert_eq!(
            verdict.classification,
            Classification::StronglyContextualInPartialClosure
        );
        let [a, b, c, d] = verdict.kl_witness.unwrap();
        assert!(a.commutes(&b) && a.commutes(&c));
        assert!(!a.commutes(&d) && !b.commutes(&c));
    }

    #[test]
    fn six_qubit_subsystem_code_parameters() {
        let code = six_qubit_6113();
        assert_eq!((code.qubits(), code.k(), code.s(), code.g()), (6, 1, 4, 1));
        assert_eq!(
            code.contextuality_verdict().classification,
            Classification::Noncontextual
        );
    }

    #[test]
    fn verdict_is_presentation_independent() {
        // Present Bacon-Shor by pairwise products of its generators plus the
        // originals reversed; parameters must not move.
        let base = bacon_shor_3x3();
        let mut gens = base.gauge_generators().to_vec();
        let extra: Vec<PauliOperator> = gens
            .windows(2)
            .filter(|w| w[0].commutes(&w[1]))
            .map(|w| w[0].commuting_product(&w[1]).unwrap())
            .collect();
        gens.extend(extra);
        gens.reverse();
        let code = code_from_gauge_generators(9, &gens).unwrap();
        assert_eq!(
            (code.k(), code.s(), code.g()),
            (base.k(), base.s(), base.g())
        );
    }

    #[test]
    fn sign_inconsistency_is_detected() {
        let err = code_from_gauge_generators(1, &[p("Z0", 1), p("-Z0", 1)]);
        assert!(matches!(err, Err(CodeError::SignInconsistency(_))));

        let err = code_from_gauge_generators(3, &[p("ZZI", 3), p("IZZ", 3), p("-Z0*Z2", 3)]);
        assert!(matches!(err, Err(CodeError::SignInconsistency(_))));
    }

    #[test]
    fn stabilizer_signs_follow_generator_signs() {
        // Flipping one generator's sign flips the derived stabilizer's sign.
        let code = code_from_gauge_generators(2, &[p("-ZI", 2), p("IZ", 2)]).unwrap();
        let stab: Vec<&PauliOperator> = code.stabilizer_basis().iter().collect();
        assert_eq!(stab.len(), 2);
        assert!(stab
            .iter()
            .any(|s| s.z_bits().get(0) && s.sign() == Sign::Minus));
    }

    #[test]
    fn gram_rank_is_even_for_random_codes() {
        let mut rng = StdRng::seed_from_u64(5);
        let all = crate::pauli::enumerate_paulis(3);
        for _ in 0..50 {
            let size = rng.gen_range(1..=6);
            let gens: Vec<PauliOperator> = (0..size)
                .map(|_| all[rng.gen_range(0..all.len())].clone())
                .collect();
            let gram = symplectic_gram(&gens);
            assert_eq!(gram.rank() % 2, 0);
            if let Ok(code) = code_from_gauge_generators(3, &gens) {
                assert_eq!(
                    2 * code.g(),
                    symplectic_gram(code.gauge_generators()).rank()
                );
                assert_eq!(code.k(), 3 - code.s() - code.g());
            }
        }
    }

    /// Random full symplectic basis via a random Clifford word applied to the
    /// standard pairs (X_i, Z_i).
    fn random_symplectic_pairs(rng: &mut StdRng, n: usize) -> Vec<(PauliOperator, PauliOperator)> {
        let mut pairs: Vec<(PauliOperator, PauliOperator)> = (0..n)
            .map(|q| (PauliOperator::x_on(n, q), PauliOperator::z_on(n, q)))
            .collect();
        for _ in 0..30 {
            match rng.gen_range(0..3) {
                0 => {
                    let q = rng.gen_range(0..n);
                    for (x, z) in &mut pairs {
                        x.conjugate_h(q);
                        z.conjugate_h(q);
                    }
                }
                1 => {
                    let q = rng.gen_range(0..n);
                    for (x, z) in &mut pairs {
                        x.conjugate_s(q);
                        z.conjugate_s(q);
                    }
                }
                _ => {
                    let control = rng.gen_range(0..n);
                    let target = (control + rng.gen_range(1..n)) % n;
                    for (x, z) in &mut pairs {
                        x.conjugate_cnot(control, target);
                        z.conjugate_cnot(control, target);
                    }
                }
            }
        }
        pairs
    }

    #[test]
    fn check_set_is_kirby_love_iff_two_gauge_qubits() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..60 {
            let n = rng.gen_range(2..=4);
            let pairs = random_symplectic_pairs(&mut rng, n);
            let s = rng.gen_range(0..=n);
            let g = rng.gen_range(0..=(n - s));
            let mut checks: Vec<PauliOperator> =
                pairs[..s].iter().map(|(_, z)| z.clone()).collect();
            for (x, z) in &pairs[s..s + g] {
                checks.push(x.clone());
                checks.push(z.clone());
            }
            if checks.is_empty() {
                continue;
            }
            let kl = build_graph(&checks).has_kirby_love().0;
            assert_eq!(kl, g >= 2, "n={n} s={s} g={g}");

            let code = code_from_gauge_generators(n, &checks).unwrap();
            assert_eq!((code.s(), code.g()), (s, g));
        }
    }

    #[test]
    fn even_complement_dimension() {
        // dim Ẇ = (n-1) - dim W for even-weight W on odd n.
        let wt = BinaryMatrix::from_rows(vec![BitVec::from_indices(7, &[0, 1, 2, 3])], 7);
        let dot = even_orthogonal_complement(&wt);
        assert_eq!(dot.len(), 7 - 1 - 1);
        for v in &dot {
            assert_eq!(v.count_ones() % 2, 0);
            assert!(!v.dot(wt.row(0)));
        }
    }

    fn random_css_chain(rng: &mut StdRng, n: usize) -> (BinaryMatrix, BinaryMatrix) {
        // Random even self-orthogonal W_C, then W_T as a random subspace.
        let mut wc_rows: Vec<BitVec> = Vec::new();
        for _ in 0..20 {
            let mut candidate = BitVec::zeros(n);
            for j in 0..n {
                if rng.gen_bool(0.5) {
                    candidate.set(j, true);
                }
            }
            if candidate.count_ones() % 2 != 0 {
                continue;
            }
            if wc_rows.iter().any(|r| r.dot(&candidate)) {
                continue;
            }
            let matrix = BinaryMatrix::from_rows(wc_rows.clone(), n);
            if matrix.row_space_contains(&candidate) {
                continue;
            }
            wc_rows.push(candidate);
        }
        let wc = BinaryMatrix::from_rows(wc_rows.clone(), n);
        let wt_rows: Vec<BitVec> = wc_rows
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        (BinaryMatrix::from_rows(wt_rows, n), wc)
    }

    #[test]
    fn css_base_gauge_count_matches_dimension_formula() {
        let mut rng = StdRng::seed_from_u64(87);
        let mut built = 0;
        while built < 50 {
            let n = [7, 9, 11, 13][rng.gen_range(0..4)];
            let (wt, wc) = random_css_chain(&mut rng, n);
            if wc.num_rows() == 0 {
                continue;
            }
            let family = css_subsystem_from_subspaces(&wt, &wc).unwrap();
            // Gram-rank route vs dimension arithmetic.
            assert_eq!(
                family.base.g(),
                (n - 1) - family.dim_wc - family.dim_wt,
                "n={n} dims=({}, {})",
                family.dim_wt,
                family.dim_wc
            );
            assert_eq!(
                symplectic_gram(family.base.gauge_generators()).rank(),
                2 * family.base.g()
            );
            assert_eq!(family.t_code.g(), 0);
            // Base stabilizer is CSS(W_T, W_C).
            assert_eq!(family.base.s(), family.dim_wt + family.dim_wc);
            built += 1;
        }
    }

    #[test]
    fn css_degenerate_empty_subspaces() {
        let wt = BinaryMatrix::zeros(0, 7);
        let wc = BinaryMatrix::zeros(0, 7);
        let family = css_subsystem_from_subspaces(&wt, &wc).unwrap();
        assert_eq!(family.base.g(), 6);
        assert_eq!(family.base.s(), 0);
    }

    #[test]
    fn css_rejects_bad_input() {
        let odd_row = BinaryMatrix::from_rows(vec![BitVec::from_indices(7, &[0, 1, 2])], 7);
        assert!(matches!(
            css_subsystem_from_subspaces(&odd_row, &odd_row),
            Err(CodeError::ParityViolation(_))
        ));
        let even_n = BinaryMatrix::zeros(0, 8);
        assert!(matches!(
            css_subsystem_from_subspaces(&even_n, &even_n),
            Err(CodeError::EvenQubitCount(8))
        ));
        // W_T outside W_C.
        let wt = BinaryMatrix::from_rows(vec![BitVec::from_indices(7, &[0, 1])], 7);
        let wc = BinaryMatrix::from_rows(vec![BitVec::from_indices(7, &[2, 3])], 7);
        assert!(matches!(
            css_subsystem_from_subspaces(&wt, &wc),
            Err(CodeError::ChainViolation(_))
        ));
    }

    #[test]
    fn doubled_color_code_closed_forms() {
        assert_eq!(
            doubled_color_code_gauge_count(DoubledFamily::Basic, 1).unwrap(),
            (15, 3)
        );
        assert_eq!(
            doubled_color_code_gauge_count(DoubledFamily::Intermediate, 1).unwrap(),
            (15, 3)
        );
        assert_eq!(
            doubled_color_code_gauge_count(DoubledFamily::Final, 2).unwrap(),
            (59, 18)
        );
        assert!(doubled_color_code_gauge_count(DoubledFamily::Basic, 0).is_err());
    }

    #[test]
    fn doubled_color_code_matches_dimension_sums() {
        // Independent route: n_t = 1 + 2 Σ m_j (+ family ancillas) and
        // g_t = (n_t - 1) - dim C_t - dim T_t with the lattice dimensions.
        for t in 1..=5u64 {
            let m = |j: u64| 3 * j * j + 3 * j + 1;
            let dim_s = |j: u64| (m(j) - 1) / 2;
            let sum_dim: u64 = (1..=t).map(dim_s).sum();
            let n_basic = 1 + 2 * (1..=t).map(m).sum::<u64>();
            let dim_t = t + sum_dim;
            let dim_c = t + 2 * sum_dim;
            let g_basic = (n_basic - 1) - dim_c - dim_t;
            assert_eq!(
                doubled_color_code_gauge_count(DoubledFamily::Basic, t).unwrap(),
                (n_basic, g_basic)
            );

            let extra_intermediate = t * t + t - 2;
            assert_eq!(
                doubled_color_code_gauge_count(DoubledFamily::Intermediate, t).unwrap(),
                (n_basic + extra_intermediate, g_basic + extra_intermediate)
            );
            let extra_final = extra_intermediate + t * t - t;
            assert_eq!(
                doubled_color_code_gauge_count(DoubledFamily::Final, t).unwrap(),
                (n_basic + extra_final, g_basic + extra_final)
            );

            // All three families stay at g >= 3.
            for family in [
                DoubledFamily::Basic,
                DoubledFamily::Intermediate,
                DoubledFamily::Final,
            ] {
                assert!(doubled_color_code_gauge_count(family, t).unwrap().1 >= 3);
            }
        }
    }

    #[test]
    fn code_file_round_trip() {
        let code = bacon_shor_3x3();
        let file = CodeFile::from_code("bacon-shor-9", &code);
        let json = serde_json::to_string(&file).unwrap();
        let parsed: CodeFile = serde_json::from_str(&json).unwrap();
        let rebuilt = parsed.to_code().unwrap();
        assert_eq!((rebuilt.k(), rebuilt.s(), rebuilt.g()), (1, 4, 4));
    }

    #[test]
    fn library_has_expected_entries() {
        let lib = library();
        assert!(lib.len() >= 5);
        for (name, build, _) in lib {
            let code = build();
            assert!(code.k() >= 1, "{name} should encode at least one qubit");
        }
    }
}
