//! Linear-programming test for the existence of `(n, k)` codes correcting `t` errors.
//!
//! The unknowns are `A_1..A_n` (with `A_0 = 1`); each `B_d` is the fixed
//! linear image of `A` given by the MacWilliams transform. A real code must
//! satisfy `B_0 = 1`, nonnegativity of both enumerators, `B_d = A_d` for
//! `1 <= d <= 2t`, and `B_d >= A_d` beyond that. LP rows carry the factor
//! `2^(n-k)`, which makes every coefficient an integer.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerator::{EnumeratorKind, WeightEnumerator};
use crate::error::{Error, Result};
use crate::lp::{self, Extent, FarkasCertificate, LpStatus, RationalLp, Relation, VarRange};
use crate::rational::{self, pow2};
use crate::transform::krawtchouk_table;

pub const MAX_SCAN_N: usize = 30;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExistenceMode {
    #[default]
    General,
    Degenerate,
    Nondegenerate,
}

impl fmt::Display for ExistenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExistenceMode::General => "general",
            ExistenceMode::Degenerate => "degenerate",
            ExistenceMode::Nondegenerate => "nondegenerate",
        })
    }
}

impl FromStr for ExistenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "general" => Ok(ExistenceMode::General),
            "degenerate" => Ok(ExistenceMode::Degenerate),
            "nondegenerate" | "non-degenerate" => Ok(ExistenceMode::Nondegenerate),
            other => Err(Error::Parse {
                what: "mode",
                detail: format!("`{other}` is not one of general, degenerate, nondegenerate"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExistenceQuery {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub mode: ExistenceMode,
}

impl ExistenceQuery {
    pub fn new(n: usize, k: usize, t: usize, mode: ExistenceMode) -> Result<Self> {
        let q = Self { n, k, t, mode };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > lp_size_limit() {
            return Err(Error::out_of_range("n", self.n, format!("1..={}", lp_size_limit())));
        }
        if self.k > self.n {
            return Err(Error::out_of_range("k", self.k, format!("0..={}", self.n)));
        }
        if 2 * self.t > self.n {
            return Err(Error::out_of_range("t", self.t, format!("0..={}", self.n / 2)));
        }
        Ok(())
    }

    fn with_mode(mut self, mode: ExistenceMode) -> Self {
        self.mode = mode;
        self
    }
}

const fn lp_size_limit() -> usize {
    64
}

/// The constraint system for a query.
#[derive(Clone, Debug)]
pub struct ExistenceSystem {
    pub query: ExistenceQuery,
    pub lp: RationalLp,
    /// `b_lines[d][d']`: coefficient of `A_{d'}` in `B_d`, for `d, d'` in `0..=n`.
    pub b_lines: Vec<Vec<BigRational>>,
}

impl ExistenceSystem {
    /// `A` with `A_0 = 1` prepended to the LP point.
    pub fn full_a(&self, x: &[BigRational]) -> WeightEnumerator {
        let mut coeffs = Vec::with_capacity(x.len() + 1);
        coeffs.push(BigRational::one());
        coeffs.extend_from_slice(x);
        WeightEnumerator::new(self.query.n, self.query.k, EnumeratorKind::A, coeffs)
    }

    pub fn b_of(&self, a: &WeightEnumerator) -> WeightEnumerator {
        let coeffs = self
            .b_lines
            .iter()
            .map(|line| line.iter().zip(&a.coeffs).map(|(c, v)| c * v).sum())
            .collect();
        WeightEnumerator::new(self.query.n, self.query.k, EnumeratorKind::B, coeffs)
    }

    /// LP point for a full `A` enumerator (drops `A_0`).
    pub fn point_of(&self, a: &WeightEnumerator) -> Result<Vec<BigRational>> {
        if a.n != self.query.n || a.k != self.query.k {
            return Err(Error::DimensionMismatch {
                left: a.n,
                right: self.query.n,
            });
        }
        if !a.coeffs[0].is_one() {
            return Err(Error::InvalidCode("A_0 must equal 1".into()));
        }
        Ok(a.coeffs[1..].to_vec())
    }

    /// Whether an `A` enumerator satisfies every constraint exactly.
    pub fn admits(&self, a: &WeightEnumerator) -> Result<bool> {
        Ok(self.lp.is_feasible_point(&self.point_of(a)?))
    }

    /// `Σ_{d=1}^{2t} A_d` as an LP functional.
    fn low_weight_sum(&self) -> Vec<BigRational> {
        (1..=self.query.n)
            .map(|d| if d <= 2 * self.query.t { BigRational::one() } else { BigRational::zero() })
            .collect()
    }
}

pub fn build_system(q: &ExistenceQuery) -> Result<ExistenceSystem> {
    q.validate()?;
    let (n, k, t) = (q.n, q.k, q.t);
    let table = krawtchouk_table(n)?;
    let prefactor = pow2(k as i64 - n as i64);
    let b_lines: Vec<Vec<BigRational>> = table
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|alpha| BigRational::from_integer(alpha.clone() >> n) * &prefactor)
                .collect()
        })
        .collect();
    let scale = pow2(n as i64 - k as i64);
    let mut lp = RationalLp::new(n);

    // scaled B_d(A) - [d == a_index] A_d, split into x-coefficients and constant
    let line = |d: usize, minus_a: Option<usize>| -> (Vec<BigRational>, BigRational) {
        let mut coeffs: Vec<BigRational> = b_lines[d][1..].iter().map(|c| c * &scale).collect();
        if let Some(j) = minus_a {
            coeffs[j - 1] -= &scale;
        }
        (coeffs, &b_lines[d][0] * &scale)
    };

    let (coeffs, c0) = line(0, None);
    lp.add_row(coeffs, Relation::Eq, &scale - c0, "B0=1");
    for d in 1..=n {
        let (coeffs, c0) = line(d, None);
        lp.add_row(coeffs, Relation::Ge, -c0, format!("B{d}>=0"));
    }
    for d in 1..=n {
        let (coeffs, c0) = line(d, Some(d));
        let rel = if d <= 2 * t { Relation::Eq } else { Relation::Ge };
        let label = if d <= 2 * t { format!("B{d}=A{d}") } else { format!("B{d}>=A{d}") };
        lp.add_row(coeffs, rel, -c0, label);
    }
    let mut system = ExistenceSystem {
        query: *q,
        lp,
        b_lines,
    };
    match q.mode {
        ExistenceMode::General => {}
        ExistenceMode::Nondegenerate => {
            for d in 1..=2 * t {
                let mut e = vec![BigRational::zero(); n];
                e[d - 1] = BigRational::one();
                system.lp.add_row(e, Relation::Eq, BigRational::zero(), format!("A{d}=0"));
            }
        }
        ExistenceMode::Degenerate => {
            let sum = system.low_weight_sum();
            system.lp.add_row(sum, Relation::Ge, BigRational::one(), "degenerate");
        }
    }
    Ok(system)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictStatus {
    Feasible,
    Infeasible,
    UniqueFeasible,
}

impl VerdictStatus {
    pub fn is_feasible(self) -> bool {
        self != VerdictStatus::Infeasible
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::Feasible => "FEASIBLE",
            VerdictStatus::Infeasible => "INFEASIBLE",
            VerdictStatus::UniqueFeasible => "UNIQUE-FEASIBLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub query: ExistenceQuery,
    pub status: VerdictStatus,
    pub witness_a: Option<WeightEnumerator>,
    pub witness_b: Option<WeightEnumerator>,
    pub certificate: Option<FarkasCertificate>,
    /// Range of each `A_d`, `d = 1..=n`, when feasible.
    pub ranges: Option<Vec<VarRange>>,
    /// Supremum of `Σ_{d=1}^{2t} A_d` without the degeneracy row (degenerate mode only).
    pub low_weight_sup: Option<Extent>,
}

/// Solves the system; feasible points are checked for uniqueness coordinate by coordinate.
pub fn decide(q: &ExistenceQuery) -> Result<ExistenceVerdict> {
    let system = build_system(q)?;
    decide_system(&system, true)
}

/// With `with_ranges` false the uniqueness test stops at the first movable
/// coordinate and no ranges are reported.
fn decide_system(system: &ExistenceSystem, with_ranges: bool) -> Result<ExistenceVerdict> {
    let q = system.query;
    let outcome = lp::solve(&system.lp)?;
    let low_weight_sup = if q.mode == ExistenceMode::Degenerate {
        let general = build_system(&q.with_mode(ExistenceMode::General))?;
        match lp::variable_ranges_of(&general.lp, &[general.low_weight_sum()]) {
            Ok(mut r) => Some(r.remove(0).max),
            Err(Error::Infeasible) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    match outcome.status {
        LpStatus::Infeasible => {
            let cert = outcome
                .farkas
                .ok_or_else(|| Error::Internal("infeasible outcome without certificate".into()))?;
            if !cert.verify(&system.lp) {
                return Err(Error::Internal("certificate does not re-verify".into()));
            }
            Ok(ExistenceVerdict {
                query: q,
                status: VerdictStatus::Infeasible,
                witness_a: None,
                witness_b: None,
                certificate: Some(cert),
                ranges: None,
                low_weight_sup,
            })
        }
        LpStatus::Feasible | LpStatus::Unbounded => {
            let x = outcome
                .witness
                .ok_or_else(|| Error::Internal("feasible outcome without witness".into()))?;
            if !system.lp.is_feasible_point(&x) {
                return Err(Error::Internal("witness violates the system".into()));
            }
            let (ranges, unique) = if with_ranges {
                let r = lp::all_variable_ranges(&system.lp)?;
                let unique = r.iter().all(VarRange::is_point);
                (Some(r), unique)
            } else {
                (None, lp::is_single_point(&system.lp, &x)?)
            };
            let a = system.full_a(&x);
            let b = system.b_of(&a);
            Ok(ExistenceVerdict {
                query: q,
                status: if unique { VerdictStatus::UniqueFeasible } else { VerdictStatus::Feasible },
                witness_a: Some(a),
                witness_b: Some(b),
                certificate: None,
                ranges,
                low_weight_sup,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub general: VerdictStatus,
    pub nondegenerate: VerdictStatus,
}

/// Verdicts in general and nondegenerate mode for every admissible `n <= n_max`.
pub fn scan(n_max: usize, k: usize, t: usize) -> Result<Vec<ScanRow>> {
    if n_max > MAX_SCAN_N {
        return Err(Error::out_of_range("n_max", n_max, format!("1..={MAX_SCAN_N}")));
    }
    let start = (2 * t).max(k).max(1);
    (start..=n_max)
        .into_par_iter()
        .map(|n| {
            let status = |mode| -> Result<VerdictStatus> {
                let system = build_system(&ExistenceQuery::new(n, k, t, mode)?)?;
                Ok(decide_system(&system, false)?.status)
            };
            Ok(ScanRow {
                n,
                general: status(ExistenceMode::General)?,
                nondegenerate: status(ExistenceMode::Nondegenerate)?,
            })
        })
        .collect()
}

impl fmt::Display for ExistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.query;
        writeln!(f, "(n={}, k={}, t={}, mode={}): {}", q.n, q.k, q.t, q.mode, self.status)?;
        if let (Some(a), Some(b)) = (&self.witness_a, &self.witness_b) {
            writeln!(f, "{a}")?;
            writeln!(f, "{b}")?;
        }
        if let Some(ranges) = &self.ranges {
            for (d, r) in ranges.iter().enumerate() {
                writeln!(f, "A{} in [{}, {}]", d + 1, r.min, r.max)?;
            }
        }
        if let Some(cert) = &self.certificate {
            let used = cert.row_multipliers.iter().filter(|m| !m.is_zero()).count();
            writeln!(f, "certificate: {used} rows combined")?;
            writeln!(f, "multipliers: ({})", rational::format_list(&cert.row_multipliers))?;
        }
        if let Some(sup) = &self.low_weight_sup {
            writeln!(f, "sup of A1+..+A{} without the degeneracy row: {sup}", 2 * q.t)?;
        }
        Ok(())
    }
}
