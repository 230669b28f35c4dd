//! Code fidelities under the depolarizing channel.
//!
//! Each qubit is left alone with probability `p` and hit by `X`, `Y` or `Z`
//! with probability `(1-p)/3` each, so a Pauli string of weight `d` occurs
//! with probability `p^(n-d) ((1-p)/3)^d`.
//!
//! The entanglement fidelity is `Σ_d A_d p^(n-d) ((1-p)/3)^d`. The average
//! fidelity polynomial [`average_fidelity_poly`] is `Σ_d B_d p^(n-d) ((1-p)/3)^d`
//! with `B_0 = 1`; it equals the probability that the maximally mixed code
//! state `P/2^k` is still in the code space after the channel, and is 1 at
//! `p = 1`. [`average_fidelity_poly_per_dimension`] divides that by `2^k`.
//!
//! The simulations are independent of the enumerators: they push the code
//! states through every Kraus branch explicitly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{DenseCode, QuantumCode};
use crate::enumerator::{EnumeratorKind, WeightEnumerator};
use crate::error::{Error, Result};
use crate::pauli::{enumerate_all, PauliOperator, MAX_DENSE_QUBITS};
use crate::rational::{self, pow, pow2};

/// Qubit limit for the full density-matrix simulation.
pub const MAX_DENSITY_QUBITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepolarizingChannel {
    n: usize,
    p: f64,
}

impl DepolarizingChannel {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parse {
                what: "p",
                detail: format!("{p} is not a probability in [0, 1]"),
            });
        }
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::out_of_range("n", n, format!("1..={MAX_DENSE_QUBITS}")));
        }
        Ok(Self { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Probability of one Pauli string of each weight `0..=n`.
    pub fn weight_probabilities(&self) -> Vec<f64> {
        let q = (1.0 - self.p) / 3.0;
        (0..=self.n)
            .map(|d| self.p.powi((self.n - d) as i32) * q.powi(d as i32))
            .collect()
    }

    pub fn operator_probability(&self, e: &PauliOperator) -> f64 {
        self.weight_probabilities()[e.weight()]
    }

    /// `Σ_E prob(E) (I ⊗ E) ρ (I ⊗ E)†` where `E` acts on the last `n` qubits
    /// of a `2^(ancillas + n)`-dimensional Hermitian `ρ`.
    pub fn apply_to_density(&self, rho: &DMatrix<Complex64>, ancillas: usize) -> Result<DMatrix<Complex64>> {
        let total = ancillas + self.n;
        if self.n > MAX_DENSITY_QUBITS || total > MAX_DENSE_QUBITS {
            return Err(Error::out_of_range(
                "n",
                self.n,
                format!("1..={MAX_DENSITY_QUBITS} with at most {MAX_DENSE_QUBITS} qubits including ancillas"),
            ));
        }
        let dim = 1usize << total;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: rho.nrows(),
                right: dim,
            });
        }
        let probs = self.weight_probabilities();
        let ops: Vec<PauliOperator> = enumerate_all(self.n)?.collect();
        let conj = |e: &PauliOperator, m: &DMatrix<Complex64>| -> DMatrix<Complex64> {
            let wide = PauliOperator::from_bits(total, e.x_bits() << ancillas, e.z_bits() << ancillas, 0)
                .expect("bits within total");
            let mut out = DMatrix::zeros(dim, dim);
            let mut col = vec![Complex64::zero(); dim];
            for j in 0..dim {
                let src: Vec<Complex64> = m.column(j).iter().copied().collect();
                wide.apply(&src, &mut col);
                out.column_mut(j).copy_from_slice(&col);
            }
            out
        };
        let terms: Vec<DMatrix<Complex64>> = ops
            .par_iter()
            .map(|e| {
                // E ρ E† = E (E ρ)† for Hermitian ρ
                let left = conj(e, rho);
                conj(e, &left.adjoint()) * Complex64::from(probs[e.weight()])
            })
            .collect();
        Ok(terms.into_iter().fold(DMatrix::zeros(dim, dim), |acc, t| acc + t))
    }
}

/// Exact per-operator probabilities `p^(n-d) ((1-p)/3)^d` for `d = 0..=n`.
pub fn exact_weight_probabilities(n: usize, p: &BigRational) -> Result<Vec<BigRational>> {
    check_probability(p)?;
    let q = (BigRational::one() - p) / rational::int(3);
    Ok((0..=n).map(|d| pow(p, n - d) * pow(&q, d)).collect())
}

fn check_probability(p: &BigRational) -> Result<()> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(Error::Parse {
            what: "p",
            detail: format!("{} is not a probability in [0, 1]", rational::format(p)),
        });
    }
    Ok(())
}

fn evaluate(e: &WeightEnumerator, p: &BigRational) -> Result<BigRational> {
    let w = exact_weight_probabilities(e.n, p)?;
    Ok(e.coeffs.iter().zip(&w).map(|(c, w)| c * w).sum())
}

/// `Σ_d A_d p^(n-d) ((1-p)/3)^d`.
pub fn entanglement_fidelity_poly(a: &WeightEnumerator, p: &BigRational) -> Result<BigRational> {
    if a.kind != EnumeratorKind::A {
        return Err(Error::InvalidCode("entanglement fidelity expects an A enumerator".into()));
    }
    evaluate(a, p)
}

/// `Σ_d B_d p^(n-d) ((1-p)/3)^d`, the code-space survival probability of `P/2^k`.
pub fn average_fidelity_poly(b: &WeightEnumerator, k: usize, p: &BigRational) -> Result<BigRational> {
    if b.kind != EnumeratorKind::B {
        return Err(Error::InvalidCode("average fidelity expects a B enumerator".into()));
    }
    if b.k != k {
        return Err(Error::out_of_range("k", k, format!("{} for this enumerator", b.k)));
    }
    evaluate(b, p)
}

/// [`average_fidelity_poly`] divided by the code dimension `2^k`.
pub fn average_fidelity_poly_per_dimension(b: &WeightEnumerator, k: usize, p: &BigRational) -> Result<BigRational> {
    Ok(average_fidelity_poly(b, k, p)? * pow2(-(k as i64)))
}

/// Results of one pass over all Kraus branches.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelitySimulation {
    /// `⟨Φ|ρ_f|Φ⟩` for `|Φ⟩ = 2^(-k/2) Σ_i |i⟩ ⊗ |c_i⟩`.
    pub entanglement: f64,
    /// `tr(P ρ_f)` for `ρ_i = P / 2^k`.
    pub average: f64,
    /// `2^(-k) Σ_i ⟨c_i|ρ_f(|c_i⟩⟨c_i|)|c_i⟩`.
    pub basis_average: f64,
    /// `tr ρ_f` for `ρ_i = P / 2^k`.
    pub trace: f64,
}

/// Sum over all `4^n` Kraus branches, applying each Pauli to the code states.
pub fn simulate(code: &QuantumCode, p: f64) -> Result<FidelitySimulation> {
    let channel = DepolarizingChannel::new(code.n(), p)?;
    let dense = code.to_dense()?;
    Ok(simulate_dense(&dense, &channel))
}

fn simulate_dense(code: &DenseCode, channel: &DepolarizingChannel) -> FidelitySimulation {
    let n = code.n();
    let k = code.k();
    let dim = 1usize << n;
    let basis = code.basis();
    let probs = channel.weight_probabilities();
    let size = basis.len() as f64;
    // |Φ⟩ stored as 2^k blocks of 2^n amplitudes, reference index major
    let phi: Vec<Complex64> = basis
        .iter()
        .flat_map(|c| c.iter().map(|v| v / size.sqrt()))
        .collect();
    let wide_n = n + k;
    let partials: Vec<[f64; 4]> = (0..dim as u32)
        .into_par_iter()
        .map(|x| {
            let mut acc = [0.0; 4];
            let mut moved = vec![Complex64::zero(); dim];
            let mut moved_phi = vec![Complex64::zero(); phi.len()];
            for z in 0..dim as u32 {
                let e = PauliOperator::from_bits(n, x, z, 0).expect("bits within n");
                let prob = probs[e.weight()];
                if prob == 0.0 {
                    continue;
                }
                let wide = PauliOperator::from_bits(wide_n, x << k, z << k, 0).expect("bits within n+k");
                wide.apply(&phi, &mut moved_phi);
                let overlap: Complex64 = phi.iter().zip(&moved_phi).map(|(a, b)| a.conj() * b).sum();
                acc[0] += prob * overlap.norm_sqr();
                for (i, ci) in basis.iter().enumerate() {
                    e.apply(ci, &mut moved);
                    let mut kept = 0.0;
                    for (j, cj) in basis.iter().enumerate() {
                        let m: Complex64 = cj.iter().zip(&moved).map(|(a, b)| a.conj() * b).sum();
                        kept += m.norm_sqr();
                        if i == j {
                            acc[2] += prob * m.norm_sqr() / size;
                        }
                    }
                    acc[1] += prob * kept / size;
                    acc[3] += prob * moved.iter().map(|v| v.norm_sqr()).sum::<f64>() / size;
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; 4];
    for part in &partials {
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    FidelitySimulation {
        entanglement: total[0],
        average: total[1],
        basis_average: total[2],
        trace: total[3],
    }
}

pub fn simulate_entanglement_fidelity(code: &QuantumCode, p: f64) -> Result<f64> {
    Ok(simulate(code, p)?.entanglement)
}

pub fn simulate_average_fidelity(code: &QuantumCode, p: f64) -> Result<f64> {
    Ok(simulate(code, p)?.average)
}

/// The same quantities from explicit density matrices (`n <= 6`).
pub fn simulate_density(code: &QuantumCode, p: f64) -> Result<FidelitySimulation> {
    let (n, k) = (code.n(), code.k());
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_DENSITY_QUBITS}")));
    }
    let channel = DepolarizingChannel::new(n, p)?;
    let dense = code.to_dense()?;
    let basis = dense.basis();
    let size = basis.len() as f64;
    let dim = 1usize << n;

    let phi = DVector::from_iterator(dim << k, basis.iter().flat_map(|c| c.iter().map(|v| v / size.sqrt())));
    let rho_f = channel.apply_to_density(&(&phi * phi.adjoint()), k)?;
    let entanglement = (phi.adjoint() * &rho_f * &phi)[(0, 0)].re;

    let projector = dense.projector();
    let rho_f = channel.apply_to_density(&(&projector / Complex64::from(size)), 0)?;
    let average = (&projector * &rho_f).trace().re;
    let trace = rho_f.trace().re;

    let mut basis_average = 0.0;
    for c in basis {
        let v = DVector::from_column_slice(c);
        let out = channel.apply_to_density(&(&v * v.adjoint()), 0)?;
        basis_average += (v.adjoint() * out * &v)[(0, 0)].re / size;
    }
    Ok(FidelitySimulation {
        entanglement,
        average,
        basis_average,
        trace,
    })
}
