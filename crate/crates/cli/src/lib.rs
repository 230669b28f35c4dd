//! Command-line front end for `quantum-macwilliams`.
//!
//! Exit codes: 0 success or feasible, 2 usage error, 3 infeasible, 4 when a
//! code fails the Knill-Laflamme check.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use quantum_macwilliams::existence::{self, ExistenceMode, ExistenceQuery};
use quantum_macwilliams::fidelity;
use quantum_macwilliams::rational::{self, format as fmt_q};
use quantum_macwilliams::{
    degeneracy_from_enumerators, enumerate_dense, enumerate_stabilizer, krawtchouk_table, lp, transform, verify_kl,
    EnumeratorKind, Error, QuantumCode, WeightEnumerator,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_KL_FAILED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qmw", version, about = "Quantum weight enumerators, MacWilliams identities and LP bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnumerationPath {
    /// Group enumeration for stabilizer codes, brute force otherwise
    Auto,
    Stabilizer,
    Dense,
    /// Both paths, checked against each other
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    General,
    Degenerate,
    Nondegenerate,
}

impl From<ModeArg> for ExistenceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::General => ExistenceMode::General,
            ModeArg::Degenerate => ExistenceMode::Degenerate,
            ModeArg::Nondegenerate => ExistenceMode::Nondegenerate,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weight enumerators A and B of a code
    Enumerate {
        /// Builtin name or path to a code file
        code: String,
        #[arg(long, value_enum, default_value_t = EnumerationPath::Auto)]
        path: EnumerationPath,
        #[arg(long)]
        json: bool,
    },
    /// Apply the MacWilliams transform to a coefficient list
    Transform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated A_0..A_n (B_0..B_n with --inverse)
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether an (n, k) code correcting t errors can exist
    Exists {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::General)]
        mode: ModeArg,
        /// Print the constraint system and pivot log
        #[arg(long)]
        dump_lp: bool,
        #[arg(long)]
        json: bool,
    },
    /// Existence verdicts for every n up to a bound
    Scan {
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        json: bool,
    },
    /// Fidelities under the depolarizing channel
    Fidelity {
        code: String,
        /// Probability that a qubit is left alone (rational or decimal)
        #[arg(long)]
        p: String,
        #[arg(long)]
        simulate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the Knill-Laflamme conditions for errors of weight up to 2t
    VerifyKl {
        code: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        json: bool,
    },
    /// Krawtchouk coefficients K(d, d') for n qubits
    Krawtchouk {
        #[arg(long)]
        n: usize,
        /// Print 2^n K(d, d') instead
        #[arg(long)]
        alpha: bool,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32, Error> {
    match cmd {
        Command::Enumerate { code, path, json } => enumerate(code, *path, *json, out),
        Command::Transform { n, k, a, inverse, json } => transform_cmd(*n, *k, a, *inverse, *json, out),
        Command::Exists {
            n,
            k,
            t,
            mode,
            dump_lp,
            json,
        } => exists(ExistenceQuery::new(*n, *k, *t, (*mode).into())?, *dump_lp, *json, out),
        Command::Scan { max_n, k, t, json } => scan(*max_n, *k, *t, *json, out),
        Command::Fidelity {
            code,
            p,
            simulate,
            json,
        } => fidelity_cmd(code, p, *simulate, *json, out),
        Command::VerifyKl { code, t, json } => verify_kl_cmd(code, *t, *json, out),
        Command::Krawtchouk { n, alpha, json } => krawtchouk(*n, *alpha, *json, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<(), Error> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json values serialize"))?;
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

type EnumeratorPair = (WeightEnumerator, WeightEnumerator);

/// Twelve significant digits.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..12).contains(&magnitude) {
        let decimals = (11 - magnitude).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

fn enumerate(name_or_path: &str, path: EnumerationPath, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let code = QuantumCode::resolve(name_or_path)?;
    let stabilizer = || -> Result<EnumeratorPair, Error> {
        let s = code
            .as_stabilizer()
            .ok_or_else(|| Error::InvalidCode("the stabilizer path needs a stabilizer code".into()))?;
        enumerate_stabilizer(s)
    };
    let dense = || enumerate_dense(&code.to_dense()?);
    let mut results: Vec<(&str, Value, Option<EnumeratorPair>)> = Vec::new();
    let use_stabilizer = match path {
        EnumerationPath::Auto => code.as_stabilizer().is_some(),
        EnumerationPath::Stabilizer | EnumerationPath::Both => true,
        EnumerationPath::Dense => false,
    };
    if use_stabilizer {
        let pair = stabilizer()?;
        results.push(("stabilizer", Value::Null, Some(pair)));
    }
    if !use_stabilizer || path == EnumerationPath::Both {
        let d = dense()?;
        let raw = json!({ "A": d.raw_a, "B": d.raw_b });
        results.push(("dense", raw, d.exact));
    }
    let agree = match results.as_slice() {
        [(_, _, Some(x)), (_, _, Some(y))] => Some(x == y),
        [_, _] => Some(false),
        _ => None,
    };
    if json {
        let paths: Vec<Value> = results
            .iter()
            .map(|(name, raw, exact)| {
                let mut v = json!({ "path": name });
                if let Some((a, b)) = exact {
                    v["A"] = to_value(a);
                    v["B"] = to_value(b);
                }
                if !raw.is_null() {
                    v["raw"] = raw.clone();
                }
                v
            })
            .collect();
        emit_json(
            out,
            &json!({ "code": code.label(), "n": code.n(), "k": code.k(), "paths": paths, "paths_agree": agree }),
        )?;
    } else {
        let mut text = format!("{} (n={}, k={})\n", code.label(), code.n(), code.k());
        for (name, raw, exact) in &results {
            text.push_str(&format!("[{name}]\n"));
            match exact {
                Some((a, b)) => text.push_str(&format!("{a}\n{b}\n")),
                None => {
                    let list = |v: &Value| -> String {
                        v.as_array()
                            .map(|xs| xs.iter().filter_map(Value::as_f64).map(format_float).collect::<Vec<_>>().join(","))
                            .unwrap_or_default()
                    };
                    text.push_str(&format!("A=({})\nB=({})\n", list(&raw["A"]), list(&raw["B"])));
                }
            }
        }
        if let Some(ok) = agree {
            text.push_str(if ok { "paths agree\n" } else { "paths DISAGREE\n" });
        }
        emit(out, &text)?;
    }
    if agree == Some(false) {
        return Err(Error::Internal("the enumeration paths disagree".into()));
    }
    Ok(EXIT_OK)
}

fn transform_cmd(n: usize, k: usize, list: &str, inverse: bool, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let coeffs = rational::parse_list(list)?;
    let (input_kind, output) = if inverse {
        (EnumeratorKind::B, transform::inverse_coeffs(&coeffs, n, k)?)
    } else {
        (EnumeratorKind::A, transform::transform_coeffs(&coeffs, n, k)?)
    };
    let output_kind = match input_kind {
        EnumeratorKind::A => EnumeratorKind::B,
        EnumeratorKind::B => EnumeratorKind::A,
    };
    let input = WeightEnumerator::new(n, k, input_kind, coeffs);
    let output = WeightEnumerator::new(n, k, output_kind, output);
    if json {
        emit_json(out, &json!({ "input": to_value(&input), "output": to_value(&output) }))?;
    } else {
        emit(out, &format!("{input}\n{output}\n"))?;
    }
    Ok(EXIT_OK)
}

fn exists(query: ExistenceQuery, dump_lp: bool, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let verdict = existence::decide(&query)?;
    let code = if verdict.status.is_feasible() { EXIT_OK } else { EXIT_INFEASIBLE };
    if json {
        let mut v = to_value(&verdict);
        if dump_lp {
            let system = existence::build_system(&query)?;
            v["lp"] = Value::from(lp::debug_dump(&system.lp)?);
        }
        emit_json(out, &v)?;
    } else {
        let mut text = verdict.to_string();
        if dump_lp {
            let system = existence::build_system(&query)?;
            text.push_str(&lp::debug_dump(&system.lp)?);
        }
        emit(out, &text)?;
    }
    Ok(code)
}

fn scan(max_n: usize, k: usize, t: usize, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let rows = existence::scan(max_n, k, t)?;
    if json {
        emit_json(out, &json!({ "k": k, "t": t, "rows": to_value(&rows) }))?;
    } else {
        let mut text = format!("k={k} t={t}\n{:>4}  {:<16} {:<16}\n", "n", "general", "nondegenerate");
        for r in &rows {
            text.push_str(&format!("{:>4}  {:<16} {:<16}\n", r.n, r.general.to_string(), r.nondegenerate.to_string()));
        }
        emit(out, &text)?;
    }
    Ok(EXIT_OK)
}

fn fidelity_cmd(name_or_path: &str, p_text: &str, simulate: bool, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let code = QuantumCode::resolve(name_or_path)?;
    let p = rational::parse(p_text)?;
    let (a, b) = match code.as_stabilizer() {
        Some(s) => enumerate_stabilizer(s)?,
        None => enumerate_dense(&code.to_dense()?)?.exact.ok_or_else(|| {
            Error::InvalidCode("enumerators of this code are not exact rationals; use a stabilizer code".into())
        })?,
    };
    let ent = fidelity::entanglement_fidelity_poly(&a, &p)?;
    let avg = fidelity::average_fidelity_poly(&b, code.k(), &p)?;
    let avg_per_dim = fidelity::average_fidelity_poly_per_dimension(&b, code.k(), &p)?;
    let sim = if simulate {
        Some(fidelity::simulate(&code, rational::to_f64(&p))?)
    } else {
        None
    };
    let ent_f = rational::to_f64(&ent);
    let avg_f = rational::to_f64(&avg);
    if json {
        let mut v = json!({
            "code": code.label(),
            "p": fmt_q(&p),
            "entanglement_poly": fmt_q(&ent),
            "average_poly": fmt_q(&avg),
            "average_poly_per_dimension": fmt_q(&avg_per_dim),
            "average_normalization": "sum_d B_d p^(n-d) ((1-p)/3)^d with B_0 = 1",
        });
        if let Some(s) = &sim {
            v["simulated"] = to_value(s);
            v["entanglement_difference"] = json!(ent_f - s.entanglement);
            v["average_difference"] = json!(avg_f - s.average);
        }
        emit_json(out, &v)?;
    } else {
        let mut text = format!("{} (n={}, k={}) p={}\n", code.label(), code.n(), code.k(), fmt_q(&p));
        text.push_str(&format!("entanglement fidelity  {}  ({})\n", fmt_q(&ent), format_float(ent_f)));
        text.push_str(&format!("average fidelity       {}  ({})\n", fmt_q(&avg), format_float(avg_f)));
        text.push_str(&format!(
            "  per code dimension   {}  ({})\n",
            fmt_q(&avg_per_dim),
            format_float(rational::to_f64(&avg_per_dim))
        ));
        if let Some(s) = &sim {
            text.push_str(&format!(
                "simulated entanglement {}  difference {}\n",
                format_float(s.entanglement),
                format_float(ent_f - s.entanglement)
            ));
            text.push_str(&format!(
                "simulated average      {}  difference {}\n",
                format_float(s.average),
                format_float(avg_f - s.average)
            ));
            text.push_str(&format!("basis-state average    {}\n", format_float(s.basis_average)));
        }
        emit(out, &text)?;
    }
    Ok(EXIT_OK)
}

fn verify_kl_cmd(name_or_path: &str, t: usize, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let code = QuantumCode::resolve(name_or_path)?;
    let report = verify_kl(&code, t)?;
    let from_enums = match code.as_stabilizer() {
        Some(s) => {
            let (a, b) = enumerate_stabilizer(s)?;
            Some(degeneracy_from_enumerators(&a, &b, t)?)
        }
        None => None,
    };
    let violation = report.first_violation.map(|(e, cond)| (e.to_string(), cond));
    if json {
        emit_json(
            out,
            &json!({
                "code": code.label(),
                "t": t,
                "corrects": report.corrects,
                "degenerate": report.degenerate,
                "first_violation": violation.as_ref().map(|(e, c)| json!({ "error": e, "condition": to_value(c) })),
                "enumerator_check": from_enums.as_ref().map(to_value),
            }),
        )?;
    } else {
        let mut text = format!("{} (n={}, k={}) t={t}\n", code.label(), code.n(), code.k());
        if report.corrects {
            let kind = if report.degenerate { "degenerate" } else { "non-degenerate" };
            text.push_str(&format!("corrects all errors of weight <= {t} ({kind})\n"));
        } else {
            text.push_str(&format!("does NOT correct all errors of weight <= {t}\n"));
        }
        if let Some((e, cond)) = &violation {
            text.push_str(&format!("first violation: {e} ({cond:?})\n"));
        }
        if let Some(d) = &from_enums {
            text.push_str(&format!(
                "enumerators: A_d = B_d for d <= 2t: {}; degenerate: {}\n",
                d.consistent_with_correction, d.degenerate
            ));
        }
        emit(out, &text)?;
    }
    Ok(if report.corrects { EXIT_OK } else { EXIT_KL_FAILED })
}

fn krawtchouk(n: usize, alpha: bool, json: bool, out: &mut dyn Write) -> Result<i32, Error> {
    let table = krawtchouk_table(n)?;
    let rows: Vec<Vec<String>> = (0..=n)
        .map(|d| {
            (0..=n)
                .map(|dp| if alpha { table.alpha(d, dp).to_string() } else { table.krawtchouk(d, dp).to_string() })
                .collect()
        })
        .collect();
    if json {
        emit_json(out, &json!({ "n": n, "scaled_by_2_pow_n": alpha, "rows": rows }))?;
    } else {
        let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
        let mut text = String::new();
        for row in &rows {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            text.push_str(&cells.join(" "));
            text.push('\n');
        }
        emit(out, &text)?;
    }
    Ok(EXIT_OK)
}
