//! n-qubit Pauli observables with exact sign and phase tracking.
//!
//! [`PauliOperator`] is a real-phase Pauli: `(-1)^s · P_1 ⊗ … ⊗ P_n` in the
//! symplectic (x|z) encoding, where qubit j carries I, X, Y or Z according to
//! the bit pair (x_j, z_j): (0,0)→I, (1,0)→X, (1,1)→Y, (0,1)→Z. These are
//! exactly the self-inverse Pauli observables.
//!
//! [`GroupElement`] is a full Pauli-group element `i^φ · X^x Z^z` (X factors
//! before Z factors) with φ mod 4; it exists so that products of observables
//! can be tracked through intermediate imaginary phases and converted back to
//! an observable exactly when the phase is real.

use crate::f2::BitVec;
use num_complex::Complex64;
use thiserror::Error;

pub const DEFAULT_DENSE_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliError {
    #[error("operators act on different qubit counts ({0} vs {1})")]
    MismatchedQubits(usize, usize),
    #[error("factors anticommute; the product is not an observable")]
    AnticommutingFactors,
    #[error("phase exponent {0} is imaginary; not a real-phase Pauli")]
    ImaginaryPhase(u8),
    #[error("dense matrix cap exceeded: n = {n} > {cap}")]
    DenseCapExceeded { n: usize, cap: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliParseError {
    #[error("empty Pauli text")]
    Empty,
    #[error("invalid Pauli letter {0:?}")]
    BadLetter(char),
    #[error("dense form has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("qubit index {0} repeated")]
    RepeatedIndex(usize),
    #[error("malformed sparse token {0:?}")]
    BadToken(String),
}

/// Global sign of a real-phase Pauli. `Plus` orders before `Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A real-phase n-qubit Pauli observable.
///
/// Ordering is lexicographic on (sign, x, z), giving every set of operators a
/// reproducible iteration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliOperator {
    n: usize,
    sign: Sign,
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn new(n: usize, sign: Sign, x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), n, "x part must have exactly n bits");
        assert_eq!(z.len(), n, "z part must have exactly n bits");
        PauliOperator { n, sign, x, z }
    }

    pub fn identity(n: usize) -> Self {
        PauliOperator::new(n, Sign::Plus, BitVec::zeros(n), BitVec::zeros(n))
    }

    pub fn minus_identity(n: usize) -> Self {
        PauliOperator::new(n, Sign::Minus, BitVec::zeros(n), BitVec::zeros(n))
    }

    pub fn x_on(n: usize, qubit: usize) -> Self {
        PauliOperator::new(n, Sign::Plus, BitVec::from_indices(n, &[qubit]), BitVec::zeros(n))
    }

    pub fn z_on(n: usize, qubit: usize) -> Self {
        PauliOperator::new(n, Sign::Plus, BitVec::zeros(n), BitVec::from_indices(n, &[qubit]))
    }

    pub fn y_on(n: usize, qubit: usize) -> Self {
        let bits = BitVec::from_indices(n, &[qubit]);
        PauliOperator::new(n, Sign::Plus, bits.clone(), bits)
    }

    /// Pure X-type operator `X(f)` supported on the ones of `f`.
    pub fn x_type(f: &BitVec) -> Self {
        PauliOperator::new(f.len(), Sign::Plus, f.clone(), BitVec::zeros(f.len()))
    }

    /// Pure Z-type operator `Z(f)` supported on the ones of `f`.
    pub fn z_type(f: &BitVec) -> Self {
        PauliOperator::new(f.len(), Sign::Plus, BitVec::zeros(f.len()), f.clone())
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        let mut p = self.clone();
        p.sign = sign;
        p
    }

    pub fn negated(&self) -> Self {
        self.with_sign(self.sign.flip())
    }

    pub fn is_identity(&self) -> bool {
        self.sign == Sign::Plus && self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_minus_identity(&self) -> bool {
        self.sign == Sign::Minus && self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits carrying a non-identity factor.
    pub fn weight(&self) -> usize {
        (0..self.n).filter(|&j| self.x.get(j) || self.z.get(j)).count()
    }

    /// The symplectic vector (x|z) of length 2n, phase dropped.
    pub fn symplectic_vector(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Symplectic commutation criterion: true iff the operators commute as
    /// matrices, i.e. `x_p·z_q + z_p·x_q = 0` over GF(2).
    ///
    /// Panics if the qubit counts differ.
    pub fn commutes(&self, other: &PauliOperator) -> bool {
        assert_eq!(
            self.n, other.n,
            "commutation of operators on different qubit counts"
        );
        !(self.x.dot(&other.z) ^ self.z.dot(&other.x))
    }

    /// Product of two commuting observables, which is again an observable.
    pub fn commuting_product(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        if self.n != other.n {
            return Err(PauliError::MismatchedQubits(self.n, other.n));
        }
        if !self.commutes(other) {
            return Err(PauliError::AnticommutingFactors);
        }
        let product = self.group_element().mul(&other.group_element());
        product
            .to_pauli()
            .map_err(|_| PauliError::AnticommutingFactors)
    }

    /// The same operator as a phase-tracked group element:
    /// `(-1)^s ⊗P_j = i^(2s + |Y positions|) X^x Z^z`.
    pub fn group_element(&self) -> GroupElement {
        let y_count = self.x.and_weight(&self.z) as u8;
        let s = match self.sign {
            Sign::Plus => 0u8,
            Sign::Minus => 2,
        };
        GroupElement {
            n: self.n,
            phase_exp: (s + y_count) % 4,
            x: self.x.clone(),
            z: self.z.clone(),
        }
    }

    /// Parses dense (`-XIZZY`) or sparse (`+Z1*Z2*Z13*Z14`, 0-based indices)
    /// Pauli text. A missing sign means `+`; an empty sparse body denotes the
    /// identity.
    pub fn parse(text: &str, n: usize) -> Result<PauliOperator, PauliParseError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(PauliParseError::Empty);
        }
        let (sign, body) = match text.as_bytes()[0] {
            b'+' => (Sign::Plus, &text[1..]),
            b'-' => (Sign::Minus, &text[1..]),
            _ => (Sign::Plus, text),
        };
        let body = body.trim();
        if body.chars().any(|c| c.is_ascii_digit()) || body.is_empty() {
            Self::parse_sparse(sign, body, n)
        } else {
            Self::parse_dense(sign, body, n)
        }
    }

    fn parse_dense(sign: Sign, body: &str, n: usize) -> Result<PauliOperator, PauliParseError> {
        if body.chars().count() != n {
            return Err(PauliParseError::BadLength {
                got: body.chars().count(),
                expected: n,
            });
        }
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        for (j, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x.set(j, true),
                'Y' => {
                    x.set(j, true);
                    z.set(j, true);
                }
                'Z' => z.set(j, true),
                other => return Err(PauliParseError::BadLetter(other)),
            }
        }
        Ok(PauliOperator::new(n, sign, x, z))
    }

    fn parse_sparse(sign: Sign, body: &str, n: usize) -> Result<PauliOperator, PauliParseError> {
        let mut x = BitVec::zeros(n);
        let mut z = BitVec::zeros(n);
        let mut seen = vec![false; n];
        for token in body
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let mut chars = token.chars();
            let letter = chars.next().ok_or_else(|| PauliParseError::BadToken(token.into()))?;
            let index: usize = chars
                .as_str()
                .parse()
                .map_err(|_| PauliParseError::BadToken(token.into()))?;
            if index >= n {
                return Err(PauliParseError::IndexOutOfRange { index, n });
            }
            if seen[index] {
                return Err(PauliParseError::RepeatedIndex(index));
            }
            seen[index] = true;
            match letter {
                'I' => {}
                'X' => x.set(index, true),
                'Y' => {
                    x.set(index, true);
                    z.set(index, true);
                }
                'Z' => z.set(index, true),
                other => return Err(PauliParseError::BadLetter(other)),
            }
        }
        Ok(PauliOperator::new(n, sign, x, z))
    }

    pub fn format(&self, style: FormatStyle) -> String {
        match style {
            FormatStyle::Dense => self.to_string(),
            FormatStyle::Sparse => {
                let mut out = String::from(if self.sign == Sign::Plus { "+" } else { "-" });
                let mut first = true;
                for j in 0..self.n {
                    let letter = match (self.x.get(j), self.z.get(j)) {
                        (false, false) => continue,
                        (true, false) => 'X',
                        (true, true) => 'Y',
                        (false, true) => 'Z',
                    };
                    if !first {
                        out.push('*');
                    }
                    out.push(letter);
                    out.push_str(&j.to_string());
                    first = false;
                }
                out
            }
        }
    }

    /// The literal `2^n x 2^n` tensor-product matrix, sign included.
    pub fn dense_matrix(&self) -> Result<DenseMatrix, PauliError> {
        self.dense_matrix_capped(DEFAULT_DENSE_CAP)
    }

    pub fn dense_matrix_capped(&self, cap: usize) -> Result<DenseMatrix, PauliError> {
        if self.n > cap {
            return Err(PauliError::DenseCapExceeded { n: self.n, cap });
        }
        let dim = 1usize << self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let (row, amp) = self.basis_action(col);
            data[row * dim + col] = amp;
        }
        Ok(DenseMatrix { dim, data })
    }

    /// Action on a computational basis state: `P |b> = amp |b ⊕ x>` where the
    /// amplitude collects the sign, Z-part parity and Y factors.
    fn basis_action(&self, basis: usize) -> (usize, Complex64) {
        let mut out = basis;
        for j in self.x.iter_ones() {
            out ^= 1 << j;
        }
        // i^φ (-1)^(z·b) with φ from the group-element normal form.
        let g = self.group_element();
        let mut phase = g.phase_exp;
        for j in self.z.iter_ones() {
            if basis >> j & 1 == 1 {
                phase = (phase + 2) % 4;
            }
        }
        let amp = match phase {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            3 => Complex64::new(0.0, -1.0),
            _ => unreachable!(),
        };
        (out, amp)
    }

    /// Applies the operator to a dense statevector of length `2^n`.
    pub fn apply_to_statevector(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), 1 << self.n, "statevector dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (col, &a) in v.iter().enumerate() {
            if a != Complex64::new(0.0, 0.0) {
                let (row, amp) = self.basis_action(col);
                out[row] = amp * a;
            }
        }
        out
    }

    /// Conjugation by a Hadamard on `qubit`: X ↔ Z, Y ↦ -Y.
    pub fn conjugate_h(&mut self, qubit: usize) {
        let xb = self.x.get(qubit);
        let zb = self.z.get(qubit);
        if xb && zb {
            self.sign = self.sign.flip();
        }
        self.x.set(qubit, zb);
        self.z.set(qubit, xb);
    }

    /// Conjugation by the phase gate S on `qubit`: X ↦ Y, Y ↦ -X, Z ↦ Z.
    pub fn conjugate_s(&mut self, qubit: usize) {
        if self.x.get(qubit) {
            if self.z.get(qubit) {
                self.sign = self.sign.flip();
            }
            self.z.flip(qubit);
        }
    }

    /// Conjugation by CNOT with the given control and target.
    pub fn conjugate_cnot(&mut self, control: usize, target: usize) {
        let xc = self.x.get(control);
        let zc = self.z.get(control);
        let xt = self.x.get(target);
        let zt = self.z.get(target);
        if xc && zt && xt == zc {
            self.sign = self.sign.flip();
        }
        self.x.set(target, xt ^ xc);
        self.z.set(control, zc ^ zt);
    }
}

impl std::fmt::Display for PauliOperator {
    /// Dense form; the sign is always printed.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if self.sign == Sign::Plus { '+' } else { '-' })?;
        for j in 0..self.n {
            let letter = match (self.x.get(j), self.z.get(j)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatStyle {
    Dense,
    Sparse,
}

/// A Pauli-group element `i^φ X^x Z^z` with φ ∈ Z₄ and X factors ordered
/// before Z factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    n: usize,
    phase_exp: u8,
    x: BitVec,
    z: BitVec,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            n,
            phase_exp: 0,
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase_exp
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn is_vector_zero(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Group product. Moving the right factor's X part across the left
    /// factor's Z part contributes `(-1)^(z_p·x_q)`:
    /// `φ_out = φ_p + φ_q + 2 (z_p·x_q) mod 4`.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.n, other.n, "product of elements on different qubit counts");
        let cross = u8::from(self.z.dot(&other.x));
        GroupElement {
            n: self.n,
            phase_exp: (self.phase_exp + other.phase_exp + 2 * cross) % 4,
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }

    /// True iff the element lies in the real-phase set 𝒫ₙ, i.e.
    /// `φ ≡ popcount(x ∧ z) mod 2`.
    pub fn is_real_pauli(&self) -> bool {
        self.phase_exp % 2 == (self.x.and_weight(&self.z) % 2) as u8
    }

    /// Conversion back to an observable; defined exactly when the phase is
    /// real, with `sign = (-1)^((φ - popcount(x ∧ z))/2 mod 2)`.
    pub fn to_pauli(&self) -> Result<PauliOperator, PauliError> {
        if !self.is_real_pauli() {
            return Err(PauliError::ImaginaryPhase(self.phase_exp));
        }
        let y_count = (self.x.and_weight(&self.z) % 4) as u8;
        let s = (self.phase_exp + 4 - y_count % 4) % 4 / 2;
        let sign = if s % 2 == 0 { Sign::Plus } else { Sign::Minus };
        Ok(PauliOperator::new(self.n, sign, self.x.clone(), self.z.clone()))
    }
}

/// Every real-phase Pauli on `n` qubits, in canonical order: all 2·4ⁿ of
/// them. Intended for exhaustive small-n checks.
pub fn enumerate_paulis(n: usize) -> Vec<PauliOperator> {
    assert!(n <= 12, "enumeration of 𝒫ₙ is exponential; n = {n} is too large");
    let mut out = Vec::with_capacity(2 << (2 * n));
    for sign in [Sign::Plus, Sign::Minus] {
        for xw in 0..(1usize << n) {
            for zw in 0..(1usize << n) {
                let x = BitVec::from_bools(&(0..n).map(|j| xw >> j & 1 == 1).collect::<Vec<_>>());
                let z = BitVec::from_bools(&(0..n).map(|j| zw >> j & 1 == 1).collect::<Vec<_>>());
                out.push(PauliOperator::new(n, sign, x, z));
            }
        }
    }
    out
}

/// Dense complex matrix used as the brute-force oracle for operator algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Plain matrix product, walking only nonzero entries of the left factor.
    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.data[k * d + j];
                    if b != Complex64::new(0.0, 0.0) {
                        out[i * d + j] += a * b;
                    }
                }
            }
        }
        DenseMatrix { dim: d, data: out }
    }

    pub fn approx_eq(&self, rhs: &DenseMatrix, tol: f64) -> bool {
        self.dim == rhs.dim
            && self
                .data
                .iter()
                .zip(&rhs.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}
