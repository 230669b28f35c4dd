//! The quantum MacWilliams transform.
//!
//! For a code with projector `P` on `n` qubits and `tr P = 2^k`,
//!
//! ```text
//! B_d = 2^(k-n) · Σ_{d'} K(d, d') · A_{d'}
//! K(d, d') = Σ_s (-1)^s 3^(d-s) C(d', s) C(n-d', d-s)
//! ```
//!
//! where `K` is the quaternary Krawtchouk polynomial. The table stores
//! `alpha[d][d'] = 2^n · K(d, d')`, which is also `Σ_{E ∈ E_d} tr(E D E D)`
//! for any Hermitian Pauli `D` of weight `d'` (see [`alpha_bruteforce`]).
//! Since `K · K = 4^n · I`, the inverse map is `A = 2^(-n-k) · K · B`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::enumerator::{EnumeratorKind, WeightEnumerator};
use crate::error::{Error, Result};
use crate::pauli::{enumerate_distance_set, Letter, PauliOperator};
use crate::rational::{binomial, pow2};

pub const MAX_TABLE_N: usize = 64;
pub const MAX_BRUTEFORCE_N: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukTable {
    n: usize,
    alpha: Vec<Vec<BigInt>>,
}

impl KrawtchoukTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `alpha[d][d'] = 2^n · K(d, d')`.
    pub fn alpha(&self, d: usize, d_prime: usize) -> &BigInt {
        &self.alpha[d][d_prime]
    }

    /// The Krawtchouk value `K(d, d') = alpha[d][d'] / 2^n`.
    pub fn krawtchouk(&self, d: usize, d_prime: usize) -> BigInt {
        &self.alpha[d][d_prime] >> self.n
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.alpha
    }
}

fn krawtchouk_value(n: usize, d: usize, d_prime: usize) -> BigInt {
    let three = BigInt::from(3);
    (0..=d).fold(BigInt::zero(), |acc, s| {
        let term = num_traits::pow(three.clone(), d - s) * binomial(d_prime, s) * binomial(n - d_prime, d - s);
        if s % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

pub fn krawtchouk_table(n: usize) -> Result<KrawtchoukTable> {
    if n > MAX_TABLE_N {
        return Err(Error::out_of_range("n", n, format!("0..={MAX_TABLE_N}")));
    }
    let alpha = (0..=n)
        .map(|d| (0..=n).map(|dp| krawtchouk_value(n, d, dp) << n).collect())
        .collect();
    Ok(KrawtchoukTable { n, alpha })
}

/// `out_d = scale · Σ_{d'} K(d, d') · v_{d'}`.
fn apply_krawtchouk(table: &KrawtchoukTable, v: &[BigRational], scale: &BigRational) -> Vec<BigRational> {
    (0..=table.n)
        .map(|d| {
            let sum = v.iter().enumerate().fold(BigRational::zero(), |acc, (dp, a)| {
                acc + BigRational::from_integer(table.krawtchouk(d, dp)) * a
            });
            sum * scale
        })
        .collect()
}

fn check_len(coeffs: &[BigRational], n: usize) -> Result<()> {
    if coeffs.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            found: coeffs.len(),
        });
    }
    Ok(())
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k > n {
        return Err(Error::out_of_range("k", k, format!("0..={n}")));
    }
    Ok(())
}

/// `B` coefficients from `A` coefficients for an `(n, k)` code.
pub fn transform_coeffs(a: &[BigRational], n: usize, k: usize) -> Result<Vec<BigRational>> {
    check_len(a, n)?;
    check_k(n, k)?;
    let table = krawtchouk_table(n)?;
    Ok(apply_krawtchouk(&table, a, &pow2(k as i64 - n as i64)))
}

/// `A` coefficients from `B` coefficients for an `(n, k)` code.
pub fn inverse_coeffs(b: &[BigRational], n: usize, k: usize) -> Result<Vec<BigRational>> {
    check_len(b, n)?;
    check_k(n, k)?;
    let table = krawtchouk_table(n)?;
    Ok(apply_krawtchouk(&table, b, &pow2(-(n as i64) - k as i64)))
}

pub fn macwilliams_transform(a: &WeightEnumerator) -> Result<WeightEnumerator> {
    if a.kind != EnumeratorKind::A {
        return Err(Error::InvalidCode("MacWilliams transform expects an A enumerator".into()));
    }
    let coeffs = transform_coeffs(&a.coeffs, a.n, a.k)?;
    Ok(WeightEnumerator::new(a.n, a.k, EnumeratorKind::B, coeffs))
}

pub fn inverse_transform(b: &WeightEnumerator) -> Result<WeightEnumerator> {
    if b.kind != EnumeratorKind::B {
        return Err(Error::InvalidCode("inverse transform expects a B enumerator".into()));
    }
    let coeffs = inverse_coeffs(&b.coeffs, b.n, b.k)?;
    Ok(WeightEnumerator::new(b.n, b.k, EnumeratorKind::A, coeffs))
}

/// `Σ_{E ∈ E_d} tr(E D E† D)` with `D = X^{⊗d'} ⊗ I`, evaluated with dense
/// matrices. Any weight-`d'` representative gives the same value because the
/// sum is invariant under qubit permutations and local Pauli relabelling.
pub fn alpha_bruteforce(n: usize, d: usize, d_prime: usize) -> Result<BigInt> {
    if n == 0 || n > MAX_BRUTEFORCE_N {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_BRUTEFORCE_N}")));
    }
    if d > n || d_prime > n {
        return Err(Error::out_of_range("d", d.max(d_prime), format!("0..={n}")));
    }
    let letters: Vec<Letter> = (0..n).map(|q| if q < d_prime { Letter::X } else { Letter::I }).collect();
    let rep = PauliOperator::from_letters(&letters)?.dense_matrix()?;
    let mut total = Complex64::new(0.0, 0.0);
    for e in enumerate_distance_set(n, d)? {
        let em = e.dense_matrix()?;
        total += (&em * &rep * em.adjoint() * &rep).trace();
    }
    if total.im.abs() > 1e-6 || (total.re - total.re.round()).abs() > 1e-6 {
        return Err(Error::Internal(format!("non-integer trace sum {total}")));
    }
    Ok(BigInt::from(total.re.round() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use num_traits::One;
    use proptest::prelude::*;

    /// `(1 + 3z)^n · A((1 - z)/(1 + 3z))` expanded as a polynomial, times `scale`.
    fn transform_by_substitution(a: &[BigRational], n: usize, scale: &BigRational) -> Vec<BigRational> {
        // Σ_j A_j (1 - z)^j (1 + 3z)^(n - j)
        let mul = |p: &[BigRational], q: &[BigRational]| -> Vec<BigRational> {
            let mut out = vec![BigRational::zero(); p.len() + q.len() - 1];
            for (i, x) in p.iter().enumerate() {
                for (j, y) in q.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let one = BigRational::one();
        let minus = [one.clone(), -one.clone()];
        let plus3 = [one.clone(), BigRational::from_integer(3.into())];
        let mut total = vec![BigRational::zero(); n + 1];
        for (j, aj) in a.iter().enumerate() {
            let mut poly = vec![one.clone()];
            for _ in 0..j {
                poly = mul(&poly, &minus);
            }
            for _ in j..n {
                poly = mul(&poly, &plus3);
            }
            for (t, c) in total.iter_mut().zip(poly) {
                *t += c * aj;
            }
        }
        total.into_iter().map(|c| c * scale).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn krawtchouk_row(t: &KrawtchoukTable, d: usize) -> Vec<i64> {
        (0..=t.n()).map(|dp| t.krawtchouk(d, dp).try_into().unwrap()).collect()
    }

    /// Frozen from the closed form and confirmed against `alpha_bruteforce`
    /// and the two-qubit relations `B = (A0+A1+A2, 6A0+2A1-2A2, 9A0-3A1+A2)/2^(2-k)`.
    #[test]
    fn two_qubit_table() {
        let t = krawtchouk_table(2).unwrap();
        assert_eq!(krawtchouk_row(&t, 0), [1, 1, 1]);
        assert_eq!(krawtchouk_row(&t, 1), [6, 2, -2]);
        assert_eq!(krawtchouk_row(&t, 2), [9, -3, 1]);
        assert_eq!(t.alpha(1, 0), &BigInt::from(24));
    }

    #[test]
    fn five_qubit_rows() {
        let t = krawtchouk_table(5).unwrap();
        assert_eq!(krawtchouk_row(&t, 1), [15, 11, 7, 3, -1, -5]);
        assert_eq!(krawtchouk_row(&t, 5), [243, -81, 27, -9, 3, -1]);
    }

    #[test]
    fn table_edges() {
        for n in [0, 1, 7, 30] {
            let t = krawtchouk_table(n).unwrap();
            for dp in 0..=n {
                assert_eq!(t.alpha(0, dp), &(BigInt::one() << n));
            }
            for d in 0..=n {
                let expect = (num_traits::pow(BigInt::from(3), d) * binomial(n, d)) << n;
                assert_eq!(t.alpha(d, 0), &expect);
            }
        }
        assert!(krawtchouk_table(65).is_err());
    }

    #[test]
    fn table_squares_to_4n() {
        for n in 0..=9 {
            let t = krawtchouk_table(n).unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    let s: BigInt = (0..=n).map(|m| t.krawtchouk(i, m) * t.krawtchouk(m, j)).sum();
                    let expect = if i == j { BigInt::one() << (2 * n) } else { BigInt::zero() };
                    assert_eq!(s, expect);
                }
            }
        }
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(alpha_bruteforce(3, 2, 1).unwrap(), BigInt::from(24));
        for n in 1..=4 {
            for dp in 0..=n {
                assert_eq!(alpha_bruteforce(n, 0, dp).unwrap(), BigInt::one() << n);
            }
        }
        assert!(alpha_bruteforce(7, 0, 0).is_err());
        assert!(alpha_bruteforce(3, 4, 0).is_err());
    }

    #[test]
    fn bruteforce_matches_table() {
        for n in 1..=4 {
            let t = krawtchouk_table(n).unwrap();
            for d in 0..=n {
                for dp in 0..=n {
                    assert_eq!(&alpha_bruteforce(n, d, dp).unwrap(), t.alpha(d, dp), "n={n} d={d} d'={dp}");
                }
            }
        }
    }

    #[test]
    fn five_qubit_pair() {
        let b = transform_coeffs(&ints(&[1, 0, 0, 0, 15, 0]), 5, 1).unwrap();
        assert_eq!(b, ints(&[1, 0, 0, 30, 15, 18]));
        let a = inverse_coeffs(&b, 5, 1).unwrap();
        assert_eq!(a, ints(&[1, 0, 0, 0, 15, 0]));
    }

    #[test]
    fn full_space_and_bell() {
        assert_eq!(transform_coeffs(&ints(&[1, 0]), 1, 1).unwrap(), ints(&[1, 3]));
        assert_eq!(inverse_coeffs(&ints(&[1, 3]), 1, 1).unwrap(), ints(&[1, 0]));
        assert_eq!(transform_coeffs(&ints(&[1, 0, 3]), 2, 0).unwrap(), ints(&[1, 0, 3]));
    }

    #[test]
    fn identity_only_stabilizer_gives_counts() {
        for n in 1..=8 {
            let mut a = ints(&vec![0; n + 1]);
            a[0] = int(1);
            let b = transform_coeffs(&a, n, n).unwrap();
            for (d, bd) in b.iter().enumerate() {
                let expect = num_traits::pow(BigInt::from(3), d) * binomial(n, d);
                assert_eq!(bd, &BigRational::from_integer(expect));
            }
            let total: BigRational = b.iter().sum();
            assert_eq!(total, pow2(2 * n as i64));
        }
    }

    #[test]
    fn length_and_kind_errors() {
        assert!(matches!(transform_coeffs(&ints(&[1, 0]), 2, 0), Err(Error::LengthMismatch { .. })));
        assert!(transform_coeffs(&ints(&[1, 0]), 1, 2).is_err());
        let b = WeightEnumerator::new(1, 1, EnumeratorKind::B, ints(&[1, 3]));
        assert!(macwilliams_transform(&b).is_err());
        assert_eq!(inverse_transform(&b).unwrap().coeffs, ints(&[1, 0]));
    }

    fn arb_vector() -> impl Strategy<Value = (usize, usize, Vec<BigRational>)> {
        (1usize..=8).prop_flat_map(|n| {
            (
                Just(n),
                0..=n,
                proptest::collection::vec((-1000i64..1000, 1i64..50), n + 1)
                    .prop_map(|v| v.into_iter().map(|(p, q)| BigRational::new(p.into(), q.into())).collect()),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn round_trip_is_identity((n, k, a) in arb_vector()) {
            let b = transform_coeffs(&a, n, k).unwrap();
            prop_assert_eq!(inverse_coeffs(&b, n, k).unwrap(), a);
        }

        #[test]
        fn matrix_form_matches_substitution((n, k, a) in arb_vector()) {
            let scale = pow2(k as i64 - n as i64);
            prop_assert_eq!(transform_coeffs(&a, n, k).unwrap(), transform_by_substitution(&a, n, &scale));
        }
    }
}
