//! n-qubit Pauli operators in symplectic form.
//!
//! An operator is stored as `i^phase · σ(x_0,z_0) ⊗ … ⊗ σ(x_{n-1},z_{n-1})`
//! where `σ(0,0)=I`, `σ(1,0)=X`, `σ(0,1)=Z` and `σ(1,1)=Y` (the Hermitian `Y`,
//! not `XZ`). With this convention every phase-0 operator is Hermitian, which
//! is exactly the error basis the weight enumerators sum over.
//!
//! Qubit `q` lives at bit `q` of `x_bits`/`z_bits`. When acting on state
//! vectors, qubit 0 is the most significant bit of the basis index, so the
//! dense matrix of `A⊗B` is the Kronecker product `A ⊗ B` in reading order.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 24;
/// Largest qubit count for which [`PauliOperator::dense_matrix`] is allowed.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Single-qubit Pauli letter. Ordered `I < X < Y < Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const NON_IDENTITY: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn matrix(self) -> DMatrix<Complex64> {
        let (o, l, i) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        let entries = match self {
            Letter::I => [l, o, o, l],
            Letter::X => [o, l, l, o],
            Letter::Y => [o, -i, i, o],
            Letter::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    n: usize,
    x_bits: u32,
    z_bits: u32,
    phase: u8,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_QUBITS}")));
    }
    Ok(())
}

fn mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `i^k` as a complex number.
pub(crate) fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliOperator {
    pub fn identity(n: usize) -> Result<Self> {
        Self::from_bits(n, 0, 0, 0)
    }

    pub fn from_bits(n: usize, x_bits: u32, z_bits: u32, phase: u8) -> Result<Self> {
        check_qubits(n)?;
        if (x_bits | z_bits) & !mask(n) != 0 {
            return Err(Error::InvalidCode(format!("Pauli bits set beyond qubit {n}")));
        }
        Ok(Self {
            n,
            x_bits,
            z_bits,
            phase: phase & 3,
        })
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        check_qubits(letters.len())?;
        let (mut x, mut z) = (0u32, 0u32);
        for (q, l) in letters.iter().enumerate() {
            let (bx, bz) = l.bits();
            x |= (bx as u32) << q;
            z |= (bz as u32) << q;
        }
        Self::from_bits(letters.len(), x, z, 0)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u32 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u32 {
        self.z_bits
    }

    /// Exponent of `i` in the overall phase.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x_bits >> q & 1 == 1, self.z_bits >> q & 1 == 1)
    }

    /// Number of qubits carrying a non-identity factor.
    pub fn weight(&self) -> usize {
        (self.x_bits | self.z_bits).count_ones() as usize
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Phases 0 and 2 give Hermitian operators under the `σ(1,1)=Y` convention.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            phase: (4 - self.phase) & 3,
            ..*self
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Operator product `self · other` with exact phase.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let (ax, az, bx, bz) = (self.x_bits, self.z_bits, other.x_bits, other.z_bits);
        let (a_x, a_y, a_z) = (ax & !az, ax & az, !ax & az);
        let (b_x, b_y, b_z) = (bx & !bz, bx & bz, !bx & bz);
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders pick up -i
        let plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
        let minus = (a_x & b_z) | (a_y & b_x) | (a_z & b_y);
        let phase = (self.phase as u32 + other.phase as u32 + plus.count_ones() + 3 * minus.count_ones()) & 3;
        Ok(Self {
            n: self.n,
            x_bits: ax ^ bx,
            z_bits: az ^ bz,
            phase: phase as u8,
        })
    }

    /// Symplectic inner product, 0 when the operators commute.
    pub fn symplectic_product(&self, other: &Self) -> Result<u32> {
        self.check_same(other)?;
        Ok(((self.x_bits & other.z_bits) ^ (self.z_bits & other.x_bits)).count_ones() & 1)
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    /// Bit masks over basis-state indices (qubit 0 is the most significant bit).
    fn state_masks(&self) -> (usize, usize) {
        let rev = |b: u32| (b.reverse_bits() >> (32 - self.n)) as usize;
        (rev(self.x_bits), rev(self.z_bits))
    }

    /// `self |ψ⟩` written into `out`. Both slices must have length `2^n`.
    pub fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let dim = 1usize << self.n;
        debug_assert!(psi.len() == dim && out.len() == dim);
        let (xs, zs) = self.state_masks();
        // σ(1,1) = i·XZ, so each Y contributes one factor of i
        let base = (self.phase as u32 + (self.x_bits & self.z_bits).count_ones()) as u8;
        let coeff = [i_pow(base), -i_pow(base)];
        for (j, amp) in psi.iter().enumerate() {
            let sign = (zs & j).count_ones() as usize & 1;
            out[j ^ xs] = coeff[sign] * amp;
        }
    }

    /// `⟨φ| self |ψ⟩` without allocating.
    pub fn matrix_element(&self, phi: &[Complex64], psi: &[Complex64]) -> Complex64 {
        let (xs, zs) = self.state_masks();
        let base = (self.phase as u32 + (self.x_bits & self.z_bits).count_ones()) as u8;
        let mut even = Complex64::new(0.0, 0.0);
        let mut odd = Complex64::new(0.0, 0.0);
        for (j, amp) in psi.iter().enumerate() {
            let term = phi[j ^ xs].conj() * amp;
            if (zs & j).count_ones() & 1 == 0 {
                even += term;
            } else {
                odd += term;
            }
        }
        i_pow(base) * (even - odd)
    }

    /// Explicit `2^n × 2^n` matrix built from Kronecker products of the
    /// single-qubit matrices. Intended as a test oracle.
    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::out_of_range("n", self.n, format!("1..={MAX_DENSE_QUBITS} for dense matrices")));
        }
        let mut m = DMatrix::from_element(1, 1, i_pow(self.phase));
        for q in 0..self.n {
            m = m.kronecker(&self.letter(q).matrix());
        }
        Ok(m)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "+i", "-", "-i"][self.phase as usize];
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses `[+|-|+i|-i]` followed by letters from `IXYZ`, e.g. `-iXIZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s)
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                other => Err(Error::Parse {
                    what: "Pauli string",
                    detail: format!("unexpected character `{other}` in `{s}`"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::Parse {
                what: "Pauli string",
                detail: format!("`{s}` has no qubits"),
            });
        }
        Ok(Self::from_letters(&letters)?.with_phase(phase))
    }
}

/// All phase-0 Pauli strings of weight exactly `d` on `n` qubits.
///
/// Supports are visited in lexicographic order and, within a support, letters
/// count up in `X < Y < Z` order with the last support position fastest. The
/// stream has `3^d · C(n,d)` elements.
pub fn enumerate_distance_set(n: usize, d: usize) -> Result<impl Iterator<Item = PauliOperator> + Clone> {
    check_qubits(n)?;
    if d > n {
        return Err(Error::out_of_range("d", d, format!("0..={n}")));
    }
    let patterns = 3u32.pow(d as u32);
    Ok((0..n).combinations(d).flat_map(move |support| {
        (0..patterns).map(move |mut code| {
            let (mut x, mut z) = (0u32, 0u32);
            for &q in support.iter().rev() {
                let (bx, bz) = Letter::NON_IDENTITY[(code % 3) as usize].bits();
                code /= 3;
                x |= (bx as u32) << q;
                z |= (bz as u32) << q;
            }
            PauliOperator {
                n,
                x_bits: x,
                z_bits: z,
                phase: 0,
            }
        })
    }))
}

/// Every phase-0 Pauli string on `n` qubits, `4^n` in total.
pub fn enumerate_all(n: usize) -> Result<impl Iterator<Item = PauliOperator>> {
    check_qubits(n)?;
    let m = 1u32 << n;
    Ok((0..m).flat_map(move |x| {
        (0..m).map(move |z| PauliOperator {
            n,
            x_bits: x,
            z_bits: z,
            phase: 0,
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> bool {
        (a - b).iter().all(|z| z.norm() < 1e-12)
    }

    #[test]
    fn weights() {
        assert_eq!(p("III").weight(), 0);
        assert_eq!(p("XIZ").weight(), 2);
        assert_eq!(p("YYYYY").weight(), 5);
    }

    #[test]
    fn single_qubit_products() {
        // XZ = -iY
        let xz = p("X").product(&p("Z")).unwrap();
        assert_eq!(xz, p("-iY"));
        assert_eq!(p("Z").product(&p("X")).unwrap(), p("+iY"));
        assert_eq!(p("X").product(&p("Y")).unwrap(), p("+iZ"));
        assert_eq!(p("Y").product(&p("X")).unwrap(), p("-iZ"));
    }

    #[test]
    fn two_qubit_product_against_matrices() {
        let (a, b) = (p("XZ"), p("ZX"));
        let ab = a.product(&b).unwrap();
        assert_eq!(ab.letter(0), Letter::Y);
        assert_eq!(ab.letter(1), Letter::Y);
        let oracle = a.dense_matrix().unwrap() * b.dense_matrix().unwrap();
        assert!(close(&ab.dense_matrix().unwrap(), &oracle));
        // (-iY)(iY) = Y·Y
        assert_eq!(ab.phase(), 0);
    }

    #[test]
    fn commutation_examples() {
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XZ").commutes(&p("ZX")).unwrap());
        let (a, b) = (p("XZ").dense_matrix().unwrap(), p("ZX").dense_matrix().unwrap());
        assert!(close(&(&a * &b), &(&b * &a)));
    }

    #[test]
    fn dimension_mismatch_is_error() {
        assert!(matches!(p("X").product(&p("XX")), Err(Error::DimensionMismatch { .. })));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn dense_small_matrices() {
        let id = PauliOperator::identity(1).unwrap().dense_matrix().unwrap();
        assert_eq!(id, DMatrix::identity(2, 2));
        let x = p("X").dense_matrix().unwrap();
        assert_eq!(x, Letter::X.matrix());
        assert!(PauliOperator::identity(11).unwrap().dense_matrix().is_err());
    }

    #[test]
    fn distance_set_sizes() {
        assert_eq!(enumerate_distance_set(2, 1).unwrap().count(), 6);
        assert_eq!(enumerate_distance_set(5, 3).unwrap().count(), 270);
        let id: Vec<_> = enumerate_distance_set(3, 0).unwrap().collect();
        assert_eq!(id, vec![PauliOperator::identity(3).unwrap()]);
        assert!(enumerate_distance_set(3, 4).is_err());
    }

    #[test]
    fn distance_set_counts_distinct() {
        for n in 1..=8 {
            for d in 0..=n {
                let ops: Vec<_> = enumerate_distance_set(n, d).unwrap().collect();
                let expected = 3usize.pow(d as u32) * crate::rational::binomial(n, d).to_string().parse::<usize>().unwrap();
                assert_eq!(ops.len(), expected, "n={n} d={d}");
                assert!(ops.iter().all(|o| o.weight() == d && o.phase() == 0));
                let distinct: std::collections::HashSet<_> = ops.iter().collect();
                assert_eq!(distinct.len(), expected);
            }
        }
    }

    #[test]
    fn distance_set_order_is_x_y_z() {
        let ops: Vec<String> = enumerate_distance_set(1, 1).unwrap().map(|o| o.to_string()).collect();
        assert_eq!(ops, ["X", "Y", "Z"]);
    }

    #[test]
    fn sparse_action_matches_dense() {
        let psi: Vec<Complex64> = (0..8).map(|j| Complex64::new(j as f64 + 1.0, 0.5 * j as f64)).collect();
        for op in enumerate_all(3).unwrap() {
            let op = op.with_phase(1);
            let mut out = vec![Complex64::new(0.0, 0.0); 8];
            op.apply(&psi, &mut out);
            let dense = op.dense_matrix().unwrap() * nalgebra::DVector::from_vec(psi.clone());
            for j in 0..8 {
                assert!((out[j] - dense[j]).norm() < 1e-12);
            }
            let elem = op.matrix_element(&psi, &psi);
            let oracle: Complex64 = psi.iter().zip(dense.iter()).map(|(a, b)| a.conj() * b).sum();
            assert!((elem - oracle).norm() < 1e-9);
        }
    }

    /// `tr(A B A B)` is `±2^n`, positive exactly when `A` and `B` commute.
    #[test]
    fn hadamard_sign_property_exhaustive() {
        for n in 1..=3 {
            let ops: Vec<_> = enumerate_all(n).unwrap().collect();
            let mats: Vec<_> = ops.iter().map(|o| o.dense_matrix().unwrap()).collect();
            let dim = (1u32 << n) as f64;
            for (a, ma) in ops.iter().zip(&mats) {
                for (b, mb) in ops.iter().zip(&mats) {
                    let tr = (ma * mb * ma * mb).trace();
                    let sign = if a.commutes(b).unwrap() { 1.0 } else { -1.0 };
                    assert!((tr - Complex64::new(sign * dim, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn trace_orthogonality() {
        for n in 1..=3 {
            let ops: Vec<_> = enumerate_all(n).unwrap().collect();
            let dim = (1u32 << n) as f64;
            for a in &ops {
                for b in &ops {
                    let tr = (a.dense_matrix().unwrap() * b.dense_matrix().unwrap().adjoint()).trace();
                    let expect = if a == b { dim } else { 0.0 };
                    assert!((tr - Complex64::new(expect, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["-iXIZ", "+iY", "-ZZ", "XYZI"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("+XX").to_string(), "XX");
        assert!("XQ".parse::<PauliOperator>().is_err());
        assert!("-".parse::<PauliOperator>().is_err());
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        let m = (1u32 << n) - 1;
        (0..=m, 0..=m, 0u8..4).prop_map(move |(x, z, ph)| PauliOperator::from_bits(n, x, z, ph).unwrap())
    }

    fn arb_pair() -> impl Strategy<Value = (PauliOperator, PauliOperator)> {
        (1usize..=4).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn product_matches_dense((a, b) in arb_pair()) {
            let lhs = a.product(&b).unwrap().dense_matrix().unwrap();
            let rhs = a.dense_matrix().unwrap() * b.dense_matrix().unwrap();
            prop_assert!(close(&lhs, &rhs));
        }

        #[test]
        fn reversed_product_differs_by_commutation_sign((a, b) in arb_pair()) {
            let ab = a.product(&b).unwrap();
            let ba = b.product(&a).unwrap();
            prop_assert_eq!((ab.x_bits(), ab.z_bits()), (ba.x_bits(), ba.z_bits()));
            let shift = 2 * a.symplectic_product(&b).unwrap() as u8;
            prop_assert_eq!(ab.phase(), (ba.phase() + shift) % 4);
        }

        #[test]
        fn times_adjoint_is_identity(a in (1usize..=24).prop_flat_map(|n| {
            let m = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
            (Just(n), 0..=m, 0..=m, 0u8..4)
        }).prop_map(|(n, x, z, ph)| PauliOperator::from_bits(n, x, z, ph).unwrap())) {
            let id = a.product(&a.adjoint()).unwrap();
            prop_assert!(id.is_identity_up_to_phase());
            prop_assert_eq!(id.phase(), 0);
            if a.phase() == 0 {
                prop_assert_eq!(a.product(&a).unwrap(), PauliOperator::identity(a.num_qubits()).unwrap());
            }
        }

        #[test]
        fn parse_print_inverse(a in (1usize..=10).prop_flat_map(arb_pauli)) {
            prop_assert_eq!(a.to_string().parse::<PauliOperator>().unwrap(), a);
        }
    }
}
