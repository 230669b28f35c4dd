//! Exact linear programming over the rationals.
//!
//! Dense two-phase tableau simplex with Bland's rule. Every variable has a
//! finite lower bound (default 0) and an optional upper bound. When the
//! problem is infeasible the phase-one duals are returned as a
//! [`FarkasCertificate`], which [`FarkasCertificate::verify`] re-checks
//! against the original rows without trusting the solver.

use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Ge,
    Le,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Le => "<=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
    pub label: String,
}

impl Row {
    pub fn lhs(&self, x: &[BigRational]) -> BigRational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn is_satisfied(&self, x: &[BigRational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Le => lhs <= self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarBound {
    pub lower: BigRational,
    pub upper: Option<BigRational>,
}

impl Default for VarBound {
    fn default() -> Self {
        Self {
            lower: BigRational::zero(),
            upper: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLp {
    pub num_vars: usize,
    pub rows: Vec<Row>,
    pub objective: Option<Objective>,
    pub bounds: Vec<VarBound>,
}

impl RationalLp {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
            objective: None,
            bounds: vec![VarBound::default(); num_vars],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational, label: impl Into<String>) {
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
            label: label.into(),
        });
    }

    pub fn with_objective(mut self, sense: Sense, coeffs: Vec<BigRational>) -> Self {
        self.objective = Some(Objective { sense, coeffs });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::MalformedLp("at least one variable is required".into()));
        }
        if self.bounds.len() != self.num_vars {
            return Err(Error::MalformedLp(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                self.num_vars
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(Error::MalformedLp(format!(
                    "row {i} has {} coefficients, expected {}",
                    row.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        if let Some(obj) = &self.objective {
            if obj.coeffs.len() != self.num_vars {
                return Err(Error::MalformedLp("objective length differs from num_vars".into()));
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if b.upper.as_ref().is_some_and(|u| u < &b.lower) {
                return Err(Error::MalformedLp(format!("variable {j} has upper bound below lower bound")));
            }
        }
        Ok(())
    }

    /// Whether `x` satisfies every row and bound exactly.
    pub fn is_feasible_point(&self, x: &[BigRational]) -> bool {
        x.len() == self.num_vars
            && self.rows.iter().all(|r| r.is_satisfied(x))
            && x.iter().zip(&self.bounds).all(|(v, b)| v >= &b.lower && b.upper.as_ref().is_none_or(|u| v <= u))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let terms: Vec<String> = row
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| format!("{}*x{}", rational::format(c), j))
                .collect();
            let lhs = if terms.is_empty() { "0".to_owned() } else { terms.join(" + ") };
            let _ = writeln!(out, "{:<12} {lhs} {} {}", row.label, row.relation, rational::format(&row.rhs));
        }
        for (j, b) in self.bounds.iter().enumerate() {
            let upper = b.upper.as_ref().map(rational::format).unwrap_or_else(|| "inf".into());
            let _ = writeln!(out, "bound        {} <= x{j} <= {upper}", rational::format(&b.lower));
        }
        out
    }
}

/// Row multipliers proving infeasibility.
///
/// With `μ` signed per relation (`>=` rows nonnegative, `<=` rows and upper
/// bounds nonpositive, `=` rows free), every feasible `x` would satisfy
/// `c·x >= μ·b` for `c = Σ μ_i a_i`. The certificate has `c <= 0` and
/// `μ·b > c·l`, while `x >= l` forces `c·x <= c·l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    #[serde(with = "rational::serde_vec")]
    pub row_multipliers: Vec<BigRational>,
    #[serde(with = "rational::serde_vec")]
    pub upper_multipliers: Vec<BigRational>,
}

impl FarkasCertificate {
    /// Combined coefficients `c` and the gap `μ·b - c·l`, or `None` when the
    /// multiplier signs or lengths are inconsistent with the problem.
    pub fn combination(&self, lp: &RationalLp) -> Option<(Vec<BigRational>, BigRational)> {
        if self.row_multipliers.len() != lp.rows.len() || self.upper_multipliers.len() != lp.num_vars {
            return None;
        }
        let mut combined = vec![BigRational::zero(); lp.num_vars];
        let mut bound = BigRational::zero();
        for (mu, row) in self.row_multipliers.iter().zip(&lp.rows) {
            let sign_ok = match row.relation {
                Relation::Eq => true,
                Relation::Ge => !mu.is_negative(),
                Relation::Le => !mu.is_positive(),
            };
            if !sign_ok {
                return None;
            }
            for (c, a) in combined.iter_mut().zip(&row.coeffs) {
                *c += mu * a;
            }
            bound += mu * &row.rhs;
        }
        for (j, mu) in self.upper_multipliers.iter().enumerate() {
            if mu.is_zero() {
                continue;
            }
            let upper = lp.bounds[j].upper.as_ref()?;
            if mu.is_positive() {
                return None;
            }
            combined[j] += mu;
            bound += mu * upper;
        }
        let at_lower: BigRational = combined.iter().zip(&lp.bounds).map(|(c, b)| c * &b.lower).sum();
        Some((combined, bound - at_lower))
    }

    /// Exact re-verification against the original problem.
    pub fn verify(&self, lp: &RationalLp) -> bool {
        match self.combination(lp) {
            Some((combined, gap)) => combined.iter().all(|c| !c.is_positive()) && gap.is_positive(),
            None => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PivotStep {
    pub phase: u8,
    pub row: usize,
    pub entering: usize,
    pub leaving: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// A feasible point (also given when the objective is unbounded).
    pub witness: Option<Vec<BigRational>>,
    pub farkas: Option<FarkasCertificate>,
    pub optimum: Option<BigRational>,
    pub pivots: Vec<PivotStep>,
}

impl LpOutcome {
    pub fn pivot_log(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.pivots.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i:>4} phase {} row {:>3}: col {:>3} enters, col {:>3} leaves",
                p.phase, p.row, p.entering, p.leaving
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extent {
    Finite(BigRational),
    Unbounded,
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(v) => f.write_str(&rational::format(v)),
            Extent::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Extent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Extent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "unbounded" {
            return Ok(Extent::Unbounded);
        }
        rational::parse(&text).map(Extent::Finite).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarRange {
    pub min: Extent,
    pub max: Extent,
}

impl VarRange {
    pub fn is_point(&self) -> bool {
        matches!((&self.min, &self.max), (Extent::Finite(a), Extent::Finite(b)) if a == b)
    }
}

/// Column layout: shifted structural variables, then one slack per
/// inequality, then artificials for rows whose slack cannot start basic.
#[derive(Clone)]
struct Tableau {
    a: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    num_struct: usize,
    art_start: usize,
    num_cols: usize,
    /// Column that formed the initial identity for each row.
    initial_col: Vec<usize>,
    /// +1 or -1: the internal row is `sign ·` the original constraint.
    sign: Vec<BigRational>,
    /// Original constraint index (user rows, then upper bounds) per row.
    origin: Vec<usize>,
    pivots: Vec<PivotStep>,
}

enum Optimize {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &RationalLp) -> Self {
        let nv = lp.num_vars;
        // constraints on the shifted variables y = x - l
        let mut cons: Vec<(Vec<BigRational>, Relation, BigRational)> = lp
            .rows
            .iter()
            .map(|r| {
                let shift: BigRational = r.coeffs.iter().zip(&lp.bounds).map(|(a, b)| a * &b.lower).sum();
                (r.coeffs.clone(), r.relation, &r.rhs - shift)
            })
            .collect();
        for (j, b) in lp.bounds.iter().enumerate() {
            if let Some(u) = &b.upper {
                let mut e = vec![BigRational::zero(); nv];
                e[j] = BigRational::one();
                cons.push((e, Relation::Le, u - &b.lower));
            }
        }
        let upper_vars: Vec<usize> = (0..nv).filter(|&j| lp.bounds[j].upper.is_some()).collect();
        let m = cons.len();
        let num_slack = cons.iter().filter(|c| c.1 != Relation::Eq).count();
        let art_start = nv + num_slack;
        let mut a = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        let mut needs_art = Vec::with_capacity(m);
        let mut slack_col = nv;
        for (coeffs, rel, b) in &cons {
            let flip = b.is_negative();
            let s = if flip { -BigRational::one() } else { BigRational::one() };
            let mut row: Vec<BigRational> = coeffs.iter().map(|c| c * &s).collect();
            row.resize(art_start, BigRational::zero());
            let mut start_col = None;
            if *rel != Relation::Eq {
                let sc = if *rel == Relation::Ge { -&s } else { s.clone() };
                if sc.is_positive() {
                    start_col = Some(slack_col);
                }
                row[slack_col] = sc;
                slack_col += 1;
            }
            needs_art.push(start_col.is_none());
            basis.push(start_col.unwrap_or(usize::MAX));
            a.push(row);
            rhs.push(b * &s);
            sign.push(s);
        }
        let num_art = needs_art.iter().filter(|&&x| x).count();
        let num_cols = art_start + num_art;
        let mut art_col = art_start;
        for (r, row) in a.iter_mut().enumerate() {
            row.resize(num_cols, BigRational::zero());
            if needs_art[r] {
                row[art_col] = BigRational::one();
                basis[r] = art_col;
                art_col += 1;
            }
        }
        let origin = (0..lp.rows.len()).chain(upper_vars.iter().map(|j| lp.rows.len() + j)).collect();
        let initial_col = basis.clone();
        Tableau {
            a,
            rhs,
            basis,
            num_struct: nv,
            art_start,
            num_cols,
            initial_col,
            sign,
            origin,
            pivots: Vec::new(),
        }
    }

    fn pivot(&mut self, r: usize, c: usize, phase: u8) {
        self.pivots.push(PivotStep {
            phase,
            row: r,
            entering: c,
            leaving: self.basis[r],
        });
        let inv = BigRational::one() / &self.a[r][c];
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..self.num_cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let factor = self.a[i][c].clone();
            for &j in &nz {
                let delta = &factor * &pivot_row[j];
                self.a[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost · columns` over the allowed columns with Bland's rule.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize, phase: u8) -> Optimize {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let reduced = (0..self.a.len()).fold(cost[j].clone(), |acc, r| {
                    let cb = &cost[self.basis[r]];
                    if cb.is_zero() || self.a[r][j].is_zero() {
                        acc
                    } else {
                        acc - cb * &self.a[r][j]
                    }
                });
                if reduced.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Optimize::Optimal;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.a.len() {
                if !self.a[r][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.a[r][c];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c, phase),
                None => return Optimize::Unbounded,
            }
        }
    }

    fn objective_value(&self, cost: &[BigRational]) -> BigRational {
        self.basis.iter().zip(&self.rhs).map(|(&b, v)| &cost[b] * v).sum()
    }

    fn point(&self, lp: &RationalLp) -> Vec<BigRational> {
        let mut x: Vec<BigRational> = lp.bounds.iter().map(|b| b.lower.clone()).collect();
        for (&b, v) in self.basis.iter().zip(&self.rhs) {
            if b < self.num_struct {
                x[b] += v;
            }
        }
        x
    }

    fn farkas(&self, lp: &RationalLp, cost: &[BigRational]) -> FarkasCertificate {
        let mut row_multipliers = vec![BigRational::zero(); lp.rows.len()];
        let mut upper_multipliers = vec![BigRational::zero(); lp.num_vars];
        for (i, &col) in self.initial_col.iter().enumerate() {
            // i-th component of c_B^T B^{-1}
            let y: BigRational = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| !cost[b].is_zero())
                .map(|(r, &b)| &cost[b] * &self.a[r][col])
                .sum();
            let mu = y * &self.sign[i];
            let o = self.origin[i];
            if o < lp.rows.len() {
                row_multipliers[o] = mu;
            } else {
                upper_multipliers[o - lp.rows.len()] = mu;
            }
        }
        FarkasCertificate {
            row_multipliers,
            upper_multipliers,
        }
    }

    /// Removes artificial columns from the basis after a successful phase one,
    /// dropping rows that turn out to be redundant.
    fn expel_artificials(&mut self) {
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= self.art_start {
                match (0..self.art_start).find(|&j| !self.a[r][j].is_zero()) {
                    Some(c) => self.pivot(r, c, 1),
                    None => {
                        self.a.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }
}

/// Result of phase one: either a feasible basis ready for phase two, or a certificate.
enum PhaseOne {
    Feasible(Tableau),
    Infeasible(FarkasCertificate, Vec<PivotStep>),
}

fn phase_one(lp: &RationalLp) -> Result<PhaseOne> {
    lp.validate()?;
    let mut t = Tableau::build(lp);
    let cost: Vec<BigRational> = (0..t.num_cols)
        .map(|j| if j >= t.art_start { BigRational::one() } else { BigRational::zero() })
        .collect();
    match t.optimize(&cost, t.num_cols, 1) {
        Optimize::Optimal => {}
        Optimize::Unbounded => return Err(Error::Internal("phase one cannot be unbounded".into())),
    }
    if t.objective_value(&cost).is_positive() {
        let cert = t.farkas(lp, &cost);
        if !cert.verify(lp) {
            return Err(Error::Internal("Farkas certificate failed re-verification".into()));
        }
        return Ok(PhaseOne::Infeasible(cert, t.pivots));
    }
    t.expel_artificials();
    Ok(PhaseOne::Feasible(t))
}

/// Phase two on a copy of a feasible tableau; returns the optimum in the
/// original (unshifted) variables, or `None` when unbounded.
fn phase_two(
    start: &Tableau,
    lp: &RationalLp,
    sense: Sense,
    coeffs: &[BigRational],
) -> (Option<BigRational>, Vec<BigRational>, Vec<PivotStep>) {
    let mut t = start.clone();
    let flip = sense == Sense::Maximize;
    let cost: Vec<BigRational> = (0..t.num_cols)
        .map(|j| match coeffs.get(j) {
            Some(c) if j < t.num_struct => {
                if flip {
                    -c
                } else {
                    c.clone()
                }
            }
            _ => BigRational::zero(),
        })
        .collect();
    let outcome = t.optimize(&cost, t.art_start, 2);
    let x = t.point(lp);
    let value = match outcome {
        Optimize::Optimal => {
            let v: BigRational = coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
            Some(v)
        }
        Optimize::Unbounded => None,
    };
    (value, x, t.pivots)
}

pub fn solve(lp: &RationalLp) -> Result<LpOutcome> {
    let start = match phase_one(lp)? {
        PhaseOne::Infeasible(cert, pivots) => {
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                witness: None,
                farkas: Some(cert),
                optimum: None,
                pivots,
            })
        }
        PhaseOne::Feasible(t) => t,
    };
    let Some(obj) = &lp.objective else {
        let witness = start.point(lp);
        return Ok(LpOutcome {
            status: LpStatus::Feasible,
            witness: Some(witness),
            farkas: None,
            optimum: None,
            pivots: start.pivots,
        });
    };
    let (value, x, pivots) = phase_two(&start, lp, obj.sense, &obj.coeffs);
    let status = if value.is_some() { LpStatus::Feasible } else { LpStatus::Unbounded };
    let witness = if value.is_some() { x } else { start.point(lp) };
    Ok(LpOutcome {
        status,
        witness: Some(witness),
        farkas: None,
        optimum: value,
        pivots,
    })
}

fn unit(n: usize, j: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[j] = BigRational::one();
    v
}

/// Exact minimum and maximum of one variable over the feasible region.
pub fn variable_range(lp: &RationalLp, var: usize) -> Result<VarRange> {
    if var >= lp.num_vars {
        return Err(Error::out_of_range("var_index", var, format!("0..{}", lp.num_vars)));
    }
    Ok(variable_ranges_of(lp, &[unit(lp.num_vars, var)])?.remove(0))
}

/// Ranges of arbitrary linear functionals, sharing one phase-one solve.
pub fn variable_ranges_of(lp: &RationalLp, functionals: &[Vec<BigRational>]) -> Result<Vec<VarRange>> {
    let start = match phase_one(lp)? {
        PhaseOne::Infeasible(..) => return Err(Error::Infeasible),
        PhaseOne::Feasible(t) => t,
    };
    functionals
        .iter()
        .map(|f| {
            if f.len() != lp.num_vars {
                return Err(Error::MalformedLp("functional length differs from num_vars".into()));
            }
            let extent = |sense| match phase_two(&start, lp, sense, f).0 {
                Some(v) => Extent::Finite(v),
                None => Extent::Unbounded,
            };
            Ok(VarRange {
                min: extent(Sense::Minimize),
                max: extent(Sense::Maximize),
            })
        })
        .collect()
}

/// Whether the feasible region is the single point `witness`. Returns at the
/// first coordinate that can move.
pub fn is_single_point(lp: &RationalLp, witness: &[BigRational]) -> Result<bool> {
    if witness.len() != lp.num_vars {
        return Err(Error::MalformedLp("witness length differs from num_vars".into()));
    }
    let start = match phase_one(lp)? {
        PhaseOne::Infeasible(..) => return Err(Error::Infeasible),
        PhaseOne::Feasible(t) => t,
    };
    for (j, w) in witness.iter().enumerate() {
        let e = unit(lp.num_vars, j);
        for sense in [Sense::Maximize, Sense::Minimize] {
            if phase_two(&start, lp, sense, &e).0.as_ref() != Some(w) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Ranges of every variable.
pub fn all_variable_ranges(lp: &RationalLp) -> Result<Vec<VarRange>> {
    let units: Vec<_> = (0..lp.num_vars).map(|j| unit(lp.num_vars, j)).collect();
    variable_ranges_of(lp, &units)
}

/// Problem, outcome and pivot log as text.
pub fn debug_dump(lp: &RationalLp) -> Result<String> {
    let outcome = solve(lp)?;
    let mut out = String::from("problem:\n");
    out.push_str(&lp.to_text());
    let _ = writeln!(out, "status: {:?}", outcome.status);
    if let Some(w) = &outcome.witness {
        let _ = writeln!(out, "witness: ({})", rational::format_list(w));
    }
    if let Some(v) = &outcome.optimum {
        let _ = writeln!(out, "optimum: {}", rational::format(v));
    }
    if let Some(f) = &outcome.farkas {
        let _ = writeln!(out, "farkas rows: ({})", rational::format_list(&f.row_multipliers));
    }
    out.push_str("pivots:\n");
    out.push_str(&outcome.pivot_log());
    Ok(out)
}
