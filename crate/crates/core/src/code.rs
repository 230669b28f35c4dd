//! Quantum codes as stabilizer generator lists or as explicit orthonormal bases.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! stabilizer n=5
//! XZZXI
//! IXZZX
//! ```
//!
//! or
//!
//! ```text
//! dense n=2 k=0
//! 0.7071067811865476 0 0 0.7071067811865476
//! ```
//!
//! Dense lines hold `2^n` amplitudes each, written as reals, exact rationals
//! `p/q`, or complex numbers `a+bi`. Basis index bit `n-1-q` belongs to qubit `q`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2;
use crate::pauli::{PauliOperator, MAX_DENSE_QUBITS};

const ORTHONORMAL_TOL: f64 = 1e-10;

pub const BUILTIN_NAMES: [&str; 5] = ["five_qubit", "steane_7", "shor_9", "bell", "trivial_<n>"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    n: usize,
    generators: Vec<PauliOperator>,
    k: usize,
}

impl StabilizerCode {
    /// Validates that the generators are Hermitian, pairwise commuting and
    /// independent. `k` is derived as `n` minus the symplectic rank.
    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self> {
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::out_of_range("n", n, format!("1..={}", crate::pauli::MAX_QUBITS)));
        }
        for g in &generators {
            if g.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: g.num_qubits(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidCode(format!("generator {g} is not Hermitian")));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::InvalidCode(format!("generators {a} and {b} anticommute")));
                }
            }
        }
        let rows: Vec<u64> = generators.iter().map(symplectic).collect();
        let rank = gf2::rank(&rows, 2 * n);
        // Independence also rules out -I: only the empty product has identity bits.
        if rank != generators.len() {
            return Err(Error::InvalidCode(format!(
                "generators are dependent (rank {rank} < {})",
                generators.len()
            )));
        }
        Ok(Self {
            n,
            k: n - rank,
            generators,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub(crate) fn symplectic_rows(&self) -> Vec<u64> {
        self.generators.iter().map(symplectic).collect()
    }

    pub fn commutes_with_all(&self, e: &PauliOperator) -> Result<bool> {
        for g in &self.generators {
            if !g.commutes(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `±e` belongs to the stabilizer group.
    pub fn contains_up_to_sign(&self, e: &PauliOperator) -> bool {
        gf2::in_span(&self.symplectic_rows(), 2 * self.n, symplectic(e))
    }

    /// Basis of the normalizer (symplectic complement of the generators),
    /// packed as `x | z << n`. Has `n + k` elements.
    pub(crate) fn normalizer_basis(&self) -> Vec<u64> {
        let n = self.n;
        let dual: Vec<u64> = self
            .generators
            .iter()
            .map(|g| g.z_bits() as u64 | (g.x_bits() as u64) << n)
            .collect();
        gf2::nullspace(&dual, 2 * n)
    }

    /// Column `j` of the projector `Π_g (I+g)/2`.
    fn projector_column(&self, j: usize, scratch: &mut Vec<Complex64>) -> Vec<Complex64> {
        let dim = 1usize << self.n;
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[j] = Complex64::new(1.0, 0.0);
        scratch.resize(dim, Complex64::new(0.0, 0.0));
        for g in &self.generators {
            g.apply(&v, scratch);
            for (a, b) in v.iter_mut().zip(scratch.iter()) {
                *a = (*a + b) * 0.5;
            }
        }
        v
    }

    pub fn projector(&self) -> Result<DMatrix<Complex64>> {
        check_dense_size(self.n)?;
        let dim = 1usize << self.n;
        let mut scratch = Vec::new();
        let cols: Vec<_> = (0..dim).map(|j| self.projector_column(j, &mut scratch)).collect();
        Ok(DMatrix::from_fn(dim, dim, |r, c| cols[c][r]))
    }

    /// An orthonormal basis of the code space, found by Gram-Schmidt on the
    /// projector columns. Each vector's first nonzero amplitude is real positive.
    pub fn basis_states(&self) -> Result<DenseCode> {
        check_dense_size(self.n)?;
        let dim = 1usize << self.n;
        let want = 1usize << self.k;
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(want);
        let mut scratch = Vec::new();
        for j in 0..dim {
            if basis.len() == want {
                break;
            }
            let mut v = self.projector_column(j, &mut scratch);
            for _ in 0..2 {
                for b in &basis {
                    let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= overlap * bi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            let lead = v.iter().find(|z| z.norm() > 1e-9).copied().unwrap_or(Complex64::new(1.0, 0.0));
            let unit_phase = lead.conj() / lead.norm();
            for vi in v.iter_mut() {
                *vi *= unit_phase / norm;
            }
            basis.push(v);
        }
        if basis.len() != want {
            return Err(Error::Internal(format!(
                "projector rank {} does not match 2^k = {want}",
                basis.len()
            )));
        }
        DenseCode::new(self.n, basis)
    }
}

fn symplectic(p: &PauliOperator) -> u64 {
    p.x_bits() as u64 | (p.z_bits() as u64) << p.num_qubits()
}

fn check_dense_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::out_of_range("n", n, format!("1..={MAX_DENSE_QUBITS} for dense state vectors")));
    }
    Ok(())
}

/// A code space given by `2^k` orthonormal vectors of dimension `2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseCode {
    n: usize,
    k: usize,
    basis: Vec<Vec<Complex64>>,
}

impl DenseCode {
    pub fn new(n: usize, basis: Vec<Vec<Complex64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::out_of_range("n", n, format!("1..={MAX_DENSE_QUBITS}")));
        }
        check_dense_size(n)?;
        let dim = 1usize << n;
        let count = basis.len();
        if count == 0 || !count.is_power_of_two() || count > dim {
            return Err(Error::InvalidCode(format!(
                "dense code needs 2^k basis vectors with 2^k <= {dim}, got {count}"
            )));
        }
        if let Some(bad) = basis.iter().find(|v| v.len() != dim) {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().skip(i) {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - expect).norm() > ORTHONORMAL_TOL {
                    return Err(Error::InvalidCode(format!(
                        "basis vectors {i} and {j} are not orthonormal (inner product {ip})"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            k: count.trailing_zeros() as usize,
            basis,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    pub fn projector(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        DMatrix::from_fn(dim, dim, |r, c| self.basis.iter().map(|v| v[r] * v[c].conj()).sum())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CodeRepr {
    Stabilizer(StabilizerCode),
    Dense(DenseCode),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCode {
    pub name: Option<String>,
    pub repr: CodeRepr,
}

impl QuantumCode {
    pub fn stabilizer(name: Option<&str>, code: StabilizerCode) -> Self {
        Self {
            name: name.map(str::to_owned),
            repr: CodeRepr::Stabilizer(code),
        }
    }

    pub fn dense(name: Option<&str>, code: DenseCode) -> Self {
        Self {
            name: name.map(str::to_owned),
            repr: CodeRepr::Dense(code),
        }
    }

    pub fn n(&self) -> usize {
        match &self.repr {
            CodeRepr::Stabilizer(s) => s.n(),
            CodeRepr::Dense(d) => d.n(),
        }
    }

    pub fn k(&self) -> usize {
        match &self.repr {
            CodeRepr::Stabilizer(s) => s.k(),
            CodeRepr::Dense(d) => d.k(),
        }
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("[[{}, {}]]", self.n(), self.k()))
    }

    pub fn as_stabilizer(&self) -> Option<&StabilizerCode> {
        match &self.repr {
            CodeRepr::Stabilizer(s) => Some(s),
            CodeRepr::Dense(_) => None,
        }
    }

    pub fn projector(&self) -> Result<DMatrix<Complex64>> {
        match &self.repr {
            CodeRepr::Stabilizer(s) => s.projector(),
            CodeRepr::Dense(d) => Ok(d.projector()),
        }
    }

    /// The code space as explicit basis vectors.
    pub fn to_dense(&self) -> Result<DenseCode> {
        match &self.repr {
            CodeRepr::Stabilizer(s) => s.basis_states(),
            CodeRepr::Dense(d) => Ok(d.clone()),
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| parse_err("empty code file"))?;
        let mut words = header.split_whitespace();
        let kind = words.next().unwrap_or_default();
        let mut n = None;
        let mut k = None;
        for w in words {
            match w.split_once('=') {
                Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|_| parse_err(format!("bad n in `{header}`")))?),
                Some(("k", v)) => k = Some(v.parse::<usize>().map_err(|_| parse_err(format!("bad k in `{header}`")))?),
                _ => return Err(parse_err(format!("unexpected header field `{w}`"))),
            }
        }
        let n = n.ok_or_else(|| parse_err("header is missing n=<n>"))?;
        match kind {
            "stabilizer" => {
                if k.is_some() {
                    return Err(parse_err("k is derived for stabilizer codes and must not be given"));
                }
                let generators = lines.map(str::parse).collect::<Result<Vec<PauliOperator>>>()?;
                Ok(Self::stabilizer(None, StabilizerCode::new(n, generators)?))
            }
            "dense" => {
                let k = k.ok_or_else(|| parse_err("dense header is missing k=<k>"))?;
                check_dense_size(n)?;
                let basis = lines
                    .map(|l| l.split_whitespace().map(parse_complex).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if basis.len() != 1 << k {
                    return Err(parse_err(format!("expected 2^{k} basis lines, found {}", basis.len())));
                }
                Ok(Self::dense(None, DenseCode::new(n, basis)?))
            }
            other => Err(parse_err(format!("unknown code kind `{other}`"))),
        }
    }

    /// Canonical text form; `parse_text(to_text())` reproduces the code.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.repr {
            CodeRepr::Stabilizer(s) => {
                let _ = writeln!(out, "stabilizer n={}", s.n());
                for g in s.generators() {
                    let _ = writeln!(out, "{g}");
                }
            }
            CodeRepr::Dense(d) => {
                let _ = writeln!(out, "dense n={} k={}", d.n(), d.k());
                for v in d.basis() {
                    let line: Vec<String> = v.iter().map(format_complex).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            }
        }
        out
    }

    /// A builtin name or a path to a code file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        match builtin(name_or_path) {
            Ok(c) => Ok(c),
            Err(err @ Error::UnknownCode { .. }) => {
                let path = Path::new(name_or_path);
                if path.exists() {
                    let mut code = Self::parse_text(&std::fs::read_to_string(path)?)?;
                    code.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
                    Ok(code)
                } else {
                    Err(err)
                }
            }
            Err(other) => Err(other),
        }
    }
}

fn parse_err(detail: impl Into<String>) -> Error {
    Error::Parse {
        what: "code file",
        detail: detail.into(),
    }
}

fn parse_real(s: &str) -> Result<f64> {
    if s.contains('/') {
        return Ok(crate::rational::to_f64(&crate::rational::parse(s)?));
    }
    s.parse::<f64>().map_err(|_| Error::Parse {
        what: "amplitude",
        detail: format!("`{s}`"),
    })
}

fn parse_unit_or_real(s: &str) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`; each part may be a decimal or `p/q`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    match split {
        Some(p) => Ok(Complex64::new(parse_real(&body[..p])?, parse_unit_or_real(&body[p..])?)),
        None => Ok(Complex64::new(0.0, parse_unit_or_real(body)?)),
    }
}

pub fn format_complex(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn from_strings(name: &str, n: usize, gens: &[&str]) -> QuantumCode {
    let generators = gens
        .iter()
        .map(|s| s.parse().expect("builtin generator parses"))
        .collect();
    QuantumCode::stabilizer(Some(name), StabilizerCode::new(n, generators).expect("builtin code is valid"))
}

/// Reference codes: `five_qubit`, `steane_7`, `shor_9`, `bell`, and
/// `trivial_<n>` (no generators, the whole `2^n` space).
pub fn builtin(name: &str) -> Result<QuantumCode> {
    let code = match name {
        "five_qubit" => from_strings(name, 5, &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]),
        "steane_7" => from_strings(
            name,
            7,
            &["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
        ),
        "shor_9" => from_strings(
            name,
            9,
            &[
                "ZZIIIIIII",
                "IZZIIIIII",
                "IIIZZIIII",
                "IIIIZZIII",
                "IIIIIIZZI",
                "IIIIIIIZZ",
                "XXXXXXIII",
                "IIIXXXXXX",
            ],
        ),
        "bell" => from_strings(name, 2, &["ZZ", "XX"]),
        _ => {
            let n = name
                .strip_prefix("trivial_")
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownCode {
                    name: name.to_owned(),
                    available: BUILTIN_NAMES.join(", "),
                })?;
            QuantumCode::stabilizer(Some(name), StabilizerCode::new(n, Vec::new())?)
        }
    };
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn builtin_parameters() {
        let five = builtin("five_qubit").unwrap();
        assert_eq!((five.n(), five.k()), (5, 1));
        assert_eq!(five.as_stabilizer().unwrap().generators().len(), 4);
        let shor = builtin("shor_9").unwrap();
        assert_eq!((shor.n(), shor.k()), (9, 1));
        let s = shor.as_stabilizer().unwrap();
        assert_eq!(s.generators().len(), 8);
        assert!(s.generators().contains(&"ZZIIIIIII".parse().unwrap()));
        assert_eq!((builtin("bell").unwrap().n(), builtin("bell").unwrap().k()), (2, 0));
        assert_eq!(builtin("steane_7").unwrap().k(), 1);
        assert_eq!(builtin("trivial_3").unwrap().k(), 3);
    }

    #[test]
    fn unknown_builtin_lists_names() {
        let err = builtin("golay").unwrap_err();
        assert!(err.to_string().contains("five_qubit"));
        assert!(matches!(err, Error::UnknownCode { .. }));
    }

    #[test]
    fn invalid_stabilizers_rejected() {
        let p = |s: &str| s.parse::<PauliOperator>().unwrap();
        assert!(StabilizerCode::new(1, vec![p("X"), p("Z")]).is_err());
        assert!(StabilizerCode::new(2, vec![p("ZZ"), p("ZZ")]).is_err());
        assert!(StabilizerCode::new(2, vec![p("ZZ"), p("-ZZ")]).is_err());
        assert!(StabilizerCode::new(1, vec![p("-I")]).is_err());
        assert!(StabilizerCode::new(1, vec![p("+iZ")]).is_err());
        assert!(StabilizerCode::new(2, vec![p("Z")]).is_err());
    }

    #[test]
    fn small_projectors() {
        let trivial = builtin("trivial_1").unwrap().projector().unwrap();
        assert_eq!(trivial, DMatrix::identity(2, 2));
        let z = StabilizerCode::new(1, vec!["Z".parse().unwrap()]).unwrap();
        assert_eq!(z.k(), 0);
        let pz = z.projector().unwrap();
        assert_eq!(pz, DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
    }

    #[test]
    fn builtin_projectors_are_idempotent_with_trace_2k() {
        for name in ["five_qubit", "steane_7", "shor_9", "bell", "trivial_2"] {
            let code = builtin(name).unwrap();
            let p = code.projector().unwrap();
            let tr = p.trace();
            assert!((tr - c((1u64 << code.k()) as f64, 0.0)).norm() < 1e-12, "{name}");
            assert!(max_dev(&(&p * &p), &p) < 1e-12, "{name}");
            assert!(max_dev(&p.adjoint(), &p) < 1e-12, "{name}");
        }
    }

    #[test]
    fn basis_states_reconstruct_projector() {
        for name in ["five_qubit", "steane_7", "shor_9", "bell", "trivial_1"] {
            let code = builtin(name).unwrap();
            let dense = code.to_dense().unwrap();
            assert_eq!(dense.basis().len(), 1 << code.k());
            assert!(max_dev(&dense.projector(), &code.projector().unwrap()) < 1e-10, "{name}");
            let p = code.projector().unwrap();
            for v in dense.basis() {
                let pv = &p * nalgebra::DVector::from_vec(v.clone());
                let dev = pv.iter().zip(v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                assert!(dev <= 1e-10);
            }
        }
    }

    #[test]
    fn bell_basis_is_bell_state() {
        let dense = builtin("bell").unwrap().to_dense().unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = &dense.basis()[0];
        let expect = [h, 0.0, 0.0, h];
        for (a, b) in v.iter().zip(expect) {
            assert!((a - c(b, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn trivial_basis_is_standard() {
        let dense = builtin("trivial_1").unwrap().to_dense().unwrap();
        assert_eq!(dense.basis(), &[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
    }

    #[test]
    fn complex_amplitudes_parse() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), c(0.5, 0.25));
        assert_eq!(parse_complex("-0.5-2i").unwrap(), c(-0.5, -2.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1/2+1/2i").unwrap(), c(0.5, 0.5));
        assert_eq!(parse_complex("1e-3+2E-2i").unwrap(), c(1e-3, 2e-2));
        assert_eq!(parse_complex("3/4").unwrap(), c(0.75, 0.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn stabilizer_file_round_trip() {
        let text = "# the perfect code\nstabilizer   n=5\nXZZXI\n  IXZZX # second\nXIXZZ\n\nZXIXZ\n";
        let code = QuantumCode::parse_text(text).unwrap();
        assert_eq!(code.repr, builtin("five_qubit").unwrap().repr);
        let printed = code.to_text();
        assert_eq!(printed, "stabilizer n=5\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n");
        assert_eq!(QuantumCode::parse_text(&printed).unwrap().to_text(), printed);
    }

    #[test]
    fn dense_file_round_trip() {
        let text = "dense n=1 k=1\n1 0\n0 1\n";
        let code = QuantumCode::parse_text(text).unwrap();
        assert_eq!(code.k(), 1);
        assert_eq!(code.to_text(), text);
        let bell = builtin("bell").unwrap().to_dense().unwrap();
        let printed = QuantumCode::dense(None, bell.clone()).to_text();
        let back = QuantumCode::parse_text(&printed).unwrap();
        assert_eq!(back.repr, CodeRepr::Dense(bell));
        assert_eq!(back.to_text(), printed);
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(QuantumCode::parse_text("").is_err());
        assert!(QuantumCode::parse_text("stabilizer\nX").is_err());
        assert!(QuantumCode::parse_text("stabilizer n=2 k=1\nZZ").is_err());
        assert!(QuantumCode::parse_text("dense n=1 k=1\n1 0\n").is_err());
        assert!(QuantumCode::parse_text("dense n=1 k=0\n1 1\n").is_err());
        assert!(QuantumCode::parse_text("weird n=1\n").is_err());
        assert!(QuantumCode::parse_text("stabilizer n=2\nZZZ\n").is_err());
    }
}
