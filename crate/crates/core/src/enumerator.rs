//! Weight distributions `A_d`, `B_d` of a code and error-correction checks.
//!
//! For a code space spanned by orthonormal `|c_i⟩`, `i < 2^k`:
//!
//! ```text
//! A_d = 2^(-2k) Σ_{E ∈ E_d} |Σ_i ⟨c_i|E|c_i⟩|²
//! B_d = 2^(-k)  Σ_{E ∈ E_d} Σ_{i,j} |⟨c_i|E|c_j⟩|²
//! ```
//!
//! For a stabilizer code these count stabilizer and normalizer elements of
//! weight `d`. Both routes are implemented and are used to check each other.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{DenseCode, QuantumCode, StabilizerCode};
use crate::error::{Error, Result};
use crate::pauli::{enumerate_distance_set, PauliOperator, MAX_DENSE_QUBITS};
use crate::rational;

/// Stabilizer path limits: `2^(n-k)` group elements and `2^(n+k)` normalizer elements.
pub const MAX_STABILIZER_RANK: usize = 20;
pub const MAX_NORMALIZER_RANK: usize = 22;
pub const KL_TOLERANCE: f64 = 1e-9;
const SNAP_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnumeratorKind {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator {
    pub n: usize,
    pub k: usize,
    pub kind: EnumeratorKind,
    #[serde(with = "rational::serde_vec")]
    pub coeffs: Vec<BigRational>,
}

impl WeightEnumerator {
    pub fn new(n: usize, k: usize, kind: EnumeratorKind, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), n + 1);
        Self { n, k, kind, coeffs }
    }

    pub fn from_counts(n: usize, k: usize, kind: EnumeratorKind, counts: &[u64]) -> Self {
        let coeffs = counts.iter().map(|&c| rational::int(c as i64)).collect();
        Self::new(n, k, kind, coeffs)
    }

    pub fn total(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("enumerator serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let e: Self = serde_json::from_str(s).map_err(|err| Error::Parse {
            what: "enumerator JSON",
            detail: err.to_string(),
        })?;
        if e.coeffs.len() != e.n + 1 {
            return Err(Error::LengthMismatch {
                expected: e.n + 1,
                found: e.coeffs.len(),
            });
        }
        Ok(e)
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}=({})", self.kind, rational::format_list(&self.coeffs))
    }
}

/// Enumerators of a stabilizer code by enumerating the stabilizer group (for
/// `A`) and the normalizer (for `B`).
pub fn enumerate_stabilizer(code: &StabilizerCode) -> Result<(WeightEnumerator, WeightEnumerator)> {
    let (n, k) = (code.n(), code.k());
    if n - k > MAX_STABILIZER_RANK {
        return Err(Error::out_of_range("n-k", n - k, format!("0..={MAX_STABILIZER_RANK}")));
    }
    if n + k > MAX_NORMALIZER_RANK {
        return Err(Error::out_of_range("n+k", n + k, format!("0..={MAX_NORMALIZER_RANK}")));
    }
    let a = weight_counts(&code.symplectic_rows(), n);
    let b = weight_counts(&code.normalizer_basis(), n);
    Ok((
        WeightEnumerator::from_counts(n, k, EnumeratorKind::A, &a),
        WeightEnumerator::from_counts(n, k, EnumeratorKind::B, &b),
    ))
}

/// Weight histogram of the span of `basis` (vectors packed `x | z << n`),
/// visiting elements in Gray-code order.
fn weight_counts(basis: &[u64], n: usize) -> Vec<u64> {
    let support = |v: u64| ((v | v >> n) & ((1u64 << n) - 1)).count_ones() as usize;
    let mut counts = vec![0u64; n + 1];
    let mut cur = 0u64;
    counts[0] = 1;
    for i in 1u64..(1u64 << basis.len()) {
        cur ^= basis[i.trailing_zeros() as usize];
        counts[support(cur)] += 1;
    }
    counts
}

/// Floating sums from the brute-force path, plus the exact enumerators when
/// every coefficient snaps to a multiple of `2^(-2k)`.
#[derive(Clone, Debug)]
pub struct DenseEnumeration {
    pub raw_a: Vec<f64>,
    pub raw_b: Vec<f64>,
    pub exact: Option<(WeightEnumerator, WeightEnumerator)>,
}

/// Brute force over all `4^n` Pauli strings.
pub fn enumerate_dense(code: &DenseCode) -> Result<DenseEnumeration> {
    let (n, k) = (code.n(), code.k());
    if n > MAX_DENSE_QUBITS {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_DENSE_QUBITS}")));
    }
    let dim = 1usize << n;
    let basis = code.basis();
    // one partial histogram per X pattern, summed in index order
    let partials: Vec<(Vec<f64>, Vec<f64>)> = (0..dim as u32)
        .into_par_iter()
        .map(|x| {
            let mut a = vec![0.0; n + 1];
            let mut b = vec![0.0; n + 1];
            let mut applied = vec![vec![Complex64::new(0.0, 0.0); dim]; basis.len()];
            for z in 0..dim as u32 {
                let e = PauliOperator::from_bits(n, x, z, 0).expect("bits within n");
                for (out, c) in applied.iter_mut().zip(basis) {
                    e.apply(c, out);
                }
                let mut diag = Complex64::new(0.0, 0.0);
                let mut all = 0.0;
                for (i, ci) in basis.iter().enumerate() {
                    for (j, ej) in applied.iter().enumerate() {
                        let m: Complex64 = ci.iter().zip(ej).map(|(u, v)| u.conj() * v).sum();
                        all += m.norm_sqr();
                        if i == j {
                            diag += m;
                        }
                    }
                }
                let w = e.weight();
                a[w] += diag.norm_sqr();
                b[w] += all;
            }
            (a, b)
        })
        .collect();
    let mut raw_a = vec![0.0; n + 1];
    let mut raw_b = vec![0.0; n + 1];
    for (a, b) in &partials {
        for d in 0..=n {
            raw_a[d] += a[d];
            raw_b[d] += b[d];
        }
    }
    let size = (1u64 << k) as f64;
    raw_a.iter_mut().for_each(|v| *v /= size * size);
    raw_b.iter_mut().for_each(|v| *v /= size);
    let exact = snap(&raw_a, k).zip(snap(&raw_b, k)).map(|(a, b)| {
        (
            WeightEnumerator::new(n, k, EnumeratorKind::A, a),
            WeightEnumerator::new(n, k, EnumeratorKind::B, b),
        )
    });
    Ok(DenseEnumeration { raw_a, raw_b, exact })
}

fn snap(values: &[f64], k: usize) -> Option<Vec<BigRational>> {
    let scale = (1u64 << (2 * k)) as f64;
    values
        .iter()
        .map(|&v| {
            let scaled = v * scale;
            let nearest = scaled.round();
            ((scaled - nearest).abs() < SNAP_TOLERANCE)
                .then(|| BigRational::new((nearest as i64).into(), (1i64 << (2 * k)).into()))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KlCondition {
    /// `⟨c_a|E|c_a⟩ ≠ ⟨c_b|E|c_b⟩` for some pair of basis states.
    DiagonalEqual,
    /// `⟨c_a|E|c_b⟩ ≠ 0` for some `a ≠ b`.
    OffDiagonalZero,
    /// `E` is a nontrivial logical operator of a stabilizer code, which breaks
    /// one of the two conditions in every basis.
    LogicalOperator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlReport {
    pub corrects: bool,
    pub degenerate: bool,
    pub first_violation: Option<(PauliOperator, KlCondition)>,
}

fn check_t(n: usize, t: usize) -> Result<()> {
    if 2 * t > n {
        return Err(Error::out_of_range("t", t, format!("0..={} (2t <= n)", n / 2)));
    }
    Ok(())
}

/// Knill-Laflamme conditions for every error of weight `1..=2t`.
///
/// Codes with at most [`MAX_DENSE_QUBITS`] qubits are checked on explicit
/// basis states; larger stabilizer codes use the symplectic criterion.
pub fn verify_kl(code: &QuantumCode, t: usize) -> Result<KlReport> {
    check_t(code.n(), t)?;
    if code.n() <= MAX_DENSE_QUBITS {
        return verify_kl_dense(&code.to_dense()?, t);
    }
    match code.as_stabilizer() {
        Some(s) => verify_kl_stabilizer(s, t),
        None => Err(Error::out_of_range("n", code.n(), format!("1..={MAX_DENSE_QUBITS}"))),
    }
}

pub fn verify_kl_dense(code: &DenseCode, t: usize) -> Result<KlReport> {
    let n = code.n();
    check_t(n, t)?;
    let dim = 1usize << n;
    let basis = code.basis();
    let mut applied = vec![Complex64::new(0.0, 0.0); dim];
    let mut degenerate = false;
    for d in 1..=2 * t {
        for e in enumerate_distance_set(n, d)? {
            let mut reference = None;
            for (b, cb) in basis.iter().enumerate() {
                e.apply(cb, &mut applied);
                for (a, ca) in basis.iter().enumerate() {
                    let m: Complex64 = ca.iter().zip(&applied).map(|(u, v)| u.conj() * v).sum();
                    if a != b {
                        if m.norm() > KL_TOLERANCE {
                            return Ok(violation(e, KlCondition::OffDiagonalZero));
                        }
                        continue;
                    }
                    match reference {
                        None => reference = Some(m),
                        Some(r) if (m - r).norm() > KL_TOLERANCE => {
                            return Ok(violation(e, KlCondition::DiagonalEqual));
                        }
                        Some(_) => {}
                    }
                }
            }
            if reference.is_some_and(|r| r.norm() > KL_TOLERANCE) {
                degenerate = true;
            }
        }
    }
    Ok(KlReport {
        corrects: true,
        degenerate,
        first_violation: None,
    })
}

/// Symplectic form of the conditions: an error is harmless when it
/// anticommutes with a generator or lies in the stabilizer (the latter
/// making the code degenerate); any other normalizer element is logical.
pub fn verify_kl_stabilizer(code: &StabilizerCode, t: usize) -> Result<KlReport> {
    check_t(code.n(), t)?;
    let mut degenerate = false;
    for d in 1..=2 * t {
        for e in enumerate_distance_set(code.n(), d)? {
            if !code.commutes_with_all(&e)? {
                continue;
            }
            if code.contains_up_to_sign(&e) {
                degenerate = true;
            } else {
                return Ok(violation(e, KlCondition::LogicalOperator));
            }
        }
    }
    Ok(KlReport {
        corrects: true,
        degenerate,
        first_violation: None,
    })
}

fn violation(e: PauliOperator, which: KlCondition) -> KlReport {
    KlReport {
        corrects: false,
        degenerate: false,
        first_violation: Some((e, which)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub consistent_with_correction: bool,
    pub degenerate: bool,
}

/// Correction radius `t` forces `A_d = B_d` for `1 <= d <= 2t`; the code is
/// degenerate when some of those are nonzero.
pub fn degeneracy_from_enumerators(a: &WeightEnumerator, b: &WeightEnumerator, t: usize) -> Result<DegeneracyReport> {
    if a.kind != EnumeratorKind::A || b.kind != EnumeratorKind::B {
        return Err(Error::InvalidCode("expected an A enumerator and a B enumerator".into()));
    }
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    check_t(a.n, t)?;
    let range = 1..=2 * t;
    let consistent = range.clone().all(|d| a.coeffs[d] == b.coeffs[d]);
    let degenerate = consistent && range.into_iter().any(|d| !a.coeffs[d].is_zero());
    Ok(DegeneracyReport {
        consistent_with_correction: consistent,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin;
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn stab(name: &str) -> StabilizerCode {
        builtin(name).unwrap().as_stabilizer().unwrap().clone()
    }

    #[test]
    fn five_qubit_stabilizer_path() {
        let (a, b) = enumerate_stabilizer(&stab("five_qubit")).unwrap();
        assert_eq!(a.coeffs, ints(&[1, 0, 0, 0, 15, 0]));
        assert_eq!(b.coeffs, ints(&[1, 0, 0, 30, 15, 18]));
    }

    #[test]
    fn five_qubit_dense_path() {
        let dense = builtin("five_qubit").unwrap().to_dense().unwrap();
        let (a, b) = enumerate_dense(&dense).unwrap().exact.unwrap();
        assert_eq!(a.coeffs, ints(&[1, 0, 0, 0, 15, 0]));
        assert_eq!(b.coeffs, ints(&[1, 0, 0, 30, 15, 18]));
    }

    #[test]
    fn shor_has_weight_two_stabilizers() {
        let (a, b) = enumerate_stabilizer(&stab("shor_9")).unwrap();
        assert!(a.coeffs[2] > BigRational::zero());
        assert_eq!(a.total(), int(256));
        assert_eq!(b.total(), int(1024));
    }

    #[test]
    fn trivial_two_qubits() {
        let (a, b) = enumerate_stabilizer(&stab("trivial_2")).unwrap();
        assert_eq!(a.coeffs, ints(&[1, 0, 0]));
        assert_eq!(b.coeffs, ints(&[1, 6, 9]));
    }

    #[test]
    fn full_space_one_qubit_dense() {
        let dense = builtin("trivial_1").unwrap().to_dense().unwrap();
        let (a, b) = enumerate_dense(&dense).unwrap().exact.unwrap();
        assert_eq!(a.coeffs, ints(&[1, 0]));
        assert_eq!(b.coeffs, ints(&[1, 3]));
    }

    #[test]
    fn bell_enumerators_coincide() {
        let dense = builtin("bell").unwrap().to_dense().unwrap();
        let (a, b) = enumerate_dense(&dense).unwrap().exact.unwrap();
        assert_eq!(a.coeffs, ints(&[1, 0, 3]));
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn non_snapping_dense_code_reports_floats() {
        // cos θ |00⟩ + sin θ |11⟩ has A_1 = 2 cos²(2θ)
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let zero = Complex64::new(0.0, 0.0);
        let state = vec![Complex64::new(c, 0.0), zero, zero, Complex64::new(s, 0.0)];
        let code = DenseCode::new(2, vec![state]).unwrap();
        let result = enumerate_dense(&code).unwrap();
        assert!(result.exact.is_none());
        assert!((result.raw_a[1] - 2.0 * 0.6f64.cos().powi(2)).abs() < 1e-12);
        // a pure state has A = B and total 2^n
        let total: f64 = result.raw_a.iter().sum();
        assert!((total - 4.0).abs() < 1e-12);
        for (x, y) in result.raw_a.iter().zip(&result.raw_b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn kl_examples() {
        let five = verify_kl(&builtin("five_qubit").unwrap(), 1).unwrap();
        assert!(five.corrects && !five.degenerate);
        let shor = verify_kl(&builtin("shor_9").unwrap(), 1).unwrap();
        assert!(shor.corrects && shor.degenerate);
        for t in 0..=1 {
            assert!(verify_kl(&builtin("bell").unwrap(), t).unwrap().corrects);
        }
        let five2 = verify_kl(&builtin("five_qubit").unwrap(), 2).unwrap();
        assert!(!five2.corrects);
        let (op, _) = five2.first_violation.unwrap();
        assert!(op.weight() <= 4);
        assert!(verify_kl(&builtin("five_qubit").unwrap(), 3).is_err());
    }

    #[test]
    fn kl_paths_agree() {
        for name in ["five_qubit", "steane_7", "shor_9", "bell", "trivial_2"] {
            let code = builtin(name).unwrap();
            for t in 0..=(code.n() / 2).min(2) {
                let dense = verify_kl(&code, t).unwrap();
                let symp = verify_kl_stabilizer(code.as_stabilizer().unwrap(), t).unwrap();
                assert_eq!((dense.corrects, dense.degenerate), (symp.corrects, symp.degenerate), "{name} t={t}");
            }
        }
    }

    #[test]
    fn logical_operator_is_a_violation() {
        let trivial = verify_kl_stabilizer(&stab("trivial_2"), 1).unwrap();
        assert_eq!(trivial.first_violation.unwrap().1, KlCondition::LogicalOperator);
        let dense = verify_kl(&builtin("trivial_2").unwrap(), 1).unwrap();
        assert!(!dense.corrects);
    }

    #[test]
    fn degeneracy_examples() {
        let (a, b) = enumerate_stabilizer(&stab("five_qubit")).unwrap();
        let r = degeneracy_from_enumerators(&a, &b, 1).unwrap();
        assert!(r.consistent_with_correction && !r.degenerate);
        let (a, b) = enumerate_stabilizer(&stab("shor_9")).unwrap();
        let r = degeneracy_from_enumerators(&a, &b, 1).unwrap();
        assert!(r.consistent_with_correction && r.degenerate);
        let (a, b) = enumerate_stabilizer(&stab("trivial_1")).unwrap();
        assert!(degeneracy_from_enumerators(&a, &b, 0).unwrap().consistent_with_correction);
        let (a9, _) = enumerate_stabilizer(&stab("shor_9")).unwrap();
        let (_, b5) = enumerate_stabilizer(&stab("five_qubit")).unwrap();
        assert!(degeneracy_from_enumerators(&a9, &b5, 1).is_err());
        assert!(degeneracy_from_enumerators(&b5, &b5, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let (a, _) = enumerate_stabilizer(&stab("five_qubit")).unwrap();
        let json = a.to_json();
        assert_eq!(json, r#"{"n":5,"k":1,"kind":"A","coeffs":["1","0","0","0","15","0"]}"#);
        assert_eq!(WeightEnumerator::from_json(&json).unwrap(), a);
        let frac = WeightEnumerator::new(1, 0, EnumeratorKind::B, vec![BigRational::new(1.into(), 3.into()), int(2)]);
        assert_eq!(WeightEnumerator::from_json(&frac.to_json()).unwrap(), frac);
        assert!(WeightEnumerator::from_json(r#"{"n":2,"k":0,"kind":"A","coeffs":["1"]}"#).is_err());
    }
}
