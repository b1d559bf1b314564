//! Pipeline stages behind the `jacgb` command line.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{MonomialOrder, Polynomial};
use crate::error::{check_m, Error, Result};
use crate::groebner::{
    buchberger_check, is_reduced, lambda_closed_form_check, reduce_basis, BuchbergerReport,
    GroebnerResult, LambdaReport, LambdaTable,
};
use crate::roots::DEFAULT_SEED;
use crate::solve::{analyze, Analysis, Outcome};
use crate::system::{build_system, SystemInstance};
use crate::verify::{default_y_samples, evaluate_branch, verify, VerificationReport, DEFAULT_TOL};

pub const TABLE_DEFAULT_M: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    System,
    Groebner,
    CheckGb,
    Solve,
    Verify,
    Table,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::System => "system",
            Command::Groebner => "groebner",
            Command::CheckGb => "check-gb",
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Table => "table",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub m: Option<u32>,
    /// Empty means the stage default (`y = 1` for `solve`, three samples for `verify`).
    pub y_samples: Vec<Complex64>,
    pub tol: f64,
    /// `None` picks text for `table` and JSON otherwise.
    pub format: Option<Format>,
    pub output_path: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: u64,
    /// `check-gb`: reduce every S-pair instead of skipping coprime leading terms.
    pub full: bool,
}

impl RunConfig {
    pub fn new(command: Command, m: Option<u32>) -> Self {
        RunConfig {
            command,
            m,
            y_samples: Vec::new(),
            tol: DEFAULT_TOL,
            format: None,
            output_path: None,
            threads: None,
            seed: DEFAULT_SEED,
            full: false,
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Table => Format::Text,
            _ => Format::Json,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub exit_code: i32,
    /// The emitted document (empty when written to `output_path` or on error).
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckGbDocument {
    pub m: u32,
    pub full: bool,
    /// Buchberger's criterion on `E_1, …, E_{m-1}`.
    pub system: BuchbergerReport,
    /// Buchberger's criterion on `~E_1, …, ~E_{m-1}`.
    pub reduced: BuchbergerReport,
    pub is_reduced: bool,
    pub lambda: LambdaReport,
}

impl CheckGbDocument {
    pub fn passed(&self) -> bool {
        self.system.is_basis && self.reduced.is_basis && self.is_reduced && self.lambda.all_pass()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchValues {
    pub index: usize,
    /// `C_1, …, C_{m+1}`; absent for degenerate branches.
    pub values: Option<Vec<Complex64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveDocument {
    pub m: u32,
    pub y_sample: Complex64,
    pub tol: f64,
    pub seed: u64,
    pub analysis: Analysis,
    pub values: Vec<BranchValues>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub k: u32,
    pub text: String,
    pub polynomial: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub m: u32,
    pub entries: Vec<TableEntry>,
}

/// Runs one stage. Exit code 2 is a usage error (including invalid `m`),
/// 1 a failed check or computation.
pub fn run(config: &RunConfig) -> RunOutput {
    let result = validate(config).and_then(|()| {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(n) = config.threads {
            pool = pool.num_threads(n);
        }
        let pool = pool
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
        pool.install(|| execute(config))
    });
    match result {
        Ok((passed, document)) => {
            let exit_code = if passed { 0 } else { 1 };
            match &config.output_path {
                Some(path) => match std::fs::write(path, &document) {
                    Ok(()) => RunOutput {
                        exit_code,
                        stdout: String::new(),
                        stderr: String::new(),
                    },
                    Err(e) => RunOutput {
                        exit_code: 1,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => RunOutput {
                    exit_code,
                    stdout: document,
                    stderr: String::new(),
                },
            }
        }
        Err(e) => RunOutput {
            exit_code: match e {
                Error::Domain(_) => 2,
                _ => 1,
            },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn validate(config: &RunConfig) -> Result<()> {
    match (config.command, config.m) {
        (Command::Table, None) => {}
        (_, None) => {
            return Err(Error::Domain(format!(
                "`{}` requires --m (3∤m>3)",
                config.command.name()
            )))
        }
        (_, Some(m)) => check_m(m)?,
    }
    if !(config.tol > 0.0 && config.tol.is_finite()) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            config.tol
        )));
    }
    if config
        .y_samples
        .iter()
        .any(|y| y.norm() == 0.0 || !y.is_finite())
    {
        return Err(Error::Domain("y samples must be finite and nonzero".into()));
    }
    if config.threads == Some(0) {
        return Err(Error::Domain("--threads must be at least 1".into()));
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvariantViolation(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn execute(config: &RunConfig) -> Result<(bool, String)> {
    let m = config.m.unwrap_or(TABLE_DEFAULT_M);
    let format = config.format();
    let sys = build_system(m)?;
    match config.command {
        Command::System => Ok((
            true,
            match format {
                Format::Json => to_json(&sys)?,
                Format::Text => system_text(&sys)?,
            },
        )),
        Command::Groebner => {
            let gr = reduce_basis(&sys)?;
            Ok((
                true,
                match format {
                    Format::Json => to_json(&gr)?,
                    Format::Text => groebner_text(&gr),
                },
            ))
        }
        Command::CheckGb => {
            let doc = check_gb(&sys, config.full)?;
            let passed = doc.passed();
            Ok((
                passed,
                match format {
                    Format::Json => to_json(&doc)?,
                    Format::Text => check_gb_text(&doc),
                },
            ))
        }
        Command::Solve => {
            let gr = reduce_basis(&sys)?;
            let y = config
                .y_samples
                .first()
                .copied()
                .unwrap_or(Complex64::new(1.0, 0.0));
            let analysis = analyze(&gr, config.tol, config.seed)?;
            let values = analysis
                .branches
                .iter()
                .map(|b| {
                    Ok(BranchValues {
                        index: b.index,
                        values: match &b.degenerate {
                            Some(_) => None,
                            None => Some(evaluate_branch(b, &gr, y)?),
                        },
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let doc = SolveDocument {
                m,
                y_sample: y,
                tol: config.tol,
                seed: config.seed,
                analysis,
                values,
            };
            Ok((
                true,
                match format {
                    Format::Json => to_json(&doc)?,
                    Format::Text => solve_text(&doc),
                },
            ))
        }
        Command::Verify => {
            let gr = reduce_basis(&sys)?;
            let analysis = analyze(&gr, config.tol, config.seed)?;
            let ys = if config.y_samples.is_empty() {
                default_y_samples()
            } else {
                config.y_samples.clone()
            };
            let report = verify(&sys, &gr, &analysis, &ys, config.tol)?;
            Ok((
                report.bounds_ok,
                match format {
                    Format::Json => to_json(&report)?,
                    Format::Text => verify_text(&report),
                },
            ))
        }
        Command::Table => {
            let doc = table(&sys)?;
            Ok((
                true,
                match format {
                    Format::Json => to_json(&doc)?,
                    Format::Text => doc
                        .entries
                        .iter()
                        .map(|e| format!("~E_{} = {}\n", e.k, e.text))
                        .collect(),
                },
            ))
        }
    }
}

pub fn check_gb(sys: &SystemInstance, full: bool) -> Result<CheckGbDocument> {
    let m = sys.m;
    let mo = MonomialOrder::weighted_revlex(m);
    let gr = reduce_basis(sys)?;
    let gens = &sys.equations[..m as usize - 1];
    Ok(CheckGbDocument {
        m,
        full,
        system: buchberger_check(gens, &mo, !full)?,
        reduced: buchberger_check(gr.partial_basis(), &mo, !full)?,
        is_reduced: is_reduced(gr.partial_basis(), &mo)?,
        lambda: lambda_closed_form_check(&gr),
    })
}

/// `~E_1, …, ~E_5` (fewer when `m - 1 < 5`).
pub fn table(sys: &SystemInstance) -> Result<TableDocument> {
    let gr = reduce_basis(sys)?;
    let entries = (1..=5.min(sys.m - 1))
        .map(|k| {
            let p = gr.tilde(k).clone();
            TableEntry {
                k,
                text: p.to_string(),
                polynomial: p,
            }
        })
        .collect();
    Ok(TableDocument { m: sys.m, entries })
}

fn complex_text(z: Complex64) -> String {
    format!("{:.12}{:+.12}i", z.re + 0.0, z.im + 0.0)
}

fn system_text(sys: &SystemInstance) -> Result<String> {
    let mut out = format!("m = {}\n", sys.m);
    for (i, e) in sys.equations.iter().enumerate() {
        let _ = writeln!(out, "E_{} = {e}    [weight {}]", i + 1, sys.weights[i]);
    }
    Ok(out)
}

fn lambda_text(out: &mut String, name: &str, table: &LambdaTable) {
    let _ = write!(out, "{name}:");
    for ((i, j), c) in &table.0 {
        let _ = write!(out, " ({i},{j})={}", crate::algebra::rational::to_text(c));
    }
    out.push('\n');
}

fn groebner_text(gr: &GroebnerResult) -> String {
    let mut out = format!("m = {}\n", gr.m);
    for (i, e) in gr.tilde_e.iter().enumerate() {
        let _ = writeln!(out, "~E_{} = {e}", i + 1);
    }
    let _ = writeln!(out, "R_{} = {}", gr.m, gr.remainder(gr.m));
    let _ = writeln!(out, "R_{} = {}", gr.m + 1, gr.remainder(gr.m + 1));
    lambda_text(&mut out, "lambda_m", &gr.lambda_m);
    lambda_text(&mut out, "lambda_m+1", &gr.lambda_m1);
    out
}

fn buchberger_text(out: &mut String, name: &str, r: &BuchbergerReport) {
    let _ = writeln!(
        out,
        "{name}: {} ({} pairs, {} skipped{})",
        if r.is_basis {
            "Groebner basis"
        } else {
            "NOT a Groebner basis"
        },
        r.pairs_total,
        r.pairs_skipped,
        r.failing_pair
            .map(|(i, j)| format!(", S({}, {}) does not reduce to 0", i + 1, j + 1))
            .unwrap_or_default()
    );
}

fn check_gb_text(doc: &CheckGbDocument) -> String {
    let mut out = format!("m = {}\n", doc.m);
    buchberger_text(&mut out, "E_1..E_{m-1}", &doc.system);
    buchberger_text(&mut out, "~E_1..~E_{m-1}", &doc.reduced);
    let _ = writeln!(out, "reduced: {}", doc.is_reduced);
    for c in &doc.lambda.checks {
        let _ = writeln!(
            out,
            "lambda {} ({},{}): extracted {} expected {} {}",
            c.case,
            c.i,
            c.j,
            crate::algebra::rational::to_text(&c.extracted),
            crate::algebra::rational::to_text(&c.expected),
            if c.pass { "ok" } else { "MISMATCH" }
        );
    }
    let _ = writeln!(out, "{}", if doc.passed() { "PASS" } else { "FAIL" });
    out
}

fn solve_text(doc: &SolveDocument) -> String {
    let a = &doc.analysis;
    let mut out = format!("m = {}, y = {}\n", doc.m, complex_text(doc.y_sample));
    let cases: Vec<String> = a.cases.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "cases: {}", cases.join(", "));
    let _ = writeln!(out, "f(t) = {}", a.case_polynomials.f);
    let _ = writeln!(out, "g(t) = {}", a.case_polynomials.g);
    match (&a.outcome, a.s) {
        (Outcome::Continuum, _) => {
            let _ = writeln!(out, "f vanishes identically: continuum of solutions in t");
        }
        (Outcome::Finite, s) => {
            let _ = writeln!(out, "distinct roots of f: {}", s.unwrap_or(0));
        }
    }
    for r in &a.roots {
        let _ = writeln!(
            out,
            "t_{} = {}  (root of {}, multiplicity {})",
            r.index,
            complex_text(r.approximation),
            r.defining_polynomial,
            r.multiplicity
        );
    }
    for b in &a.bounds {
        let _ = writeln!(
            out,
            "{}: {} candidates, {} {}",
            b.case_tag,
            b.candidates,
            if b.exact { "expected" } else { "bound" },
            b.bound
        );
    }
    for (b, v) in a.branches.iter().zip(&doc.values) {
        let _ = writeln!(out, "branch {} [{}] {}", b.index, b.case_tag, b.closed_form);
        match (&v.values, &b.degenerate) {
            (Some(values), _) => {
                for (k, z) in values.iter().enumerate() {
                    let _ = writeln!(out, "  C_{{-{}}} = {}", k + 1, complex_text(*z));
                }
            }
            (None, Some(reason)) => {
                let _ = writeln!(out, "  {reason}");
            }
            (None, None) => {}
        }
    }
    out
}

fn verify_text(r: &VerificationReport) -> String {
    let ys: Vec<String> = r.y_samples.iter().map(|y| complex_text(*y)).collect();
    let mut out = format!("m = {}, tol = {:e}, y = {}\n", r.m, r.tol, ys.join(", "));
    for b in &r.branches {
        let _ = write!(
            out,
            "branch {} [{}] {:?}: max residual {:.3e}",
            b.index, b.case_tag, b.verdict, b.max_residual
        );
        if let Some(k) = b.worst_equation {
            let _ = write!(out, " (E_{k})");
        }
        if let Some(d) = b.duplicate_of {
            let _ = write!(out, ", same as branch {d}");
        }
        if let Some(n) = &b.note {
            let _ = write!(out, ", {n}");
        }
        out.push('\n');
    }
    for s in &r.summary {
        let _ = writeln!(
            out,
            "{}: {} candidates, {} verified, {} distinct, {} {} -> {}",
            s.case_tag,
            s.candidates,
            s.verified,
            s.distinct_verified,
            if s.exact { "expected" } else { "bound" },
            s.bound,
            if s.within_bound { "ok" } else { "VIOLATED" }
        );
    }
    let _ = writeln!(out, "{}", if r.bounds_ok { "PASS" } else { "FAIL" });
    out
}
