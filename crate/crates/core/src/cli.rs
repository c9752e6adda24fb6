//! Batch command-line driver.

use crate::complex::{
    self, key1_check, key2_check, perturb_out_of_kernel, random_frobenius_image, trunc0_report, Certificate, DRWSymbol,
    DrwKind, DrwTerm, JFactor, Key1Outcome,
};
use crate::derham::DiffForm;
use crate::field::{subsets_ordered, FieldElem, FieldSpec};
use crate::forms::{self, diag_class, quad_class_reduce, trace_symmetric, witt_relation_check, QuadOutcome, SymMatrix};
use crate::random::{self, ElemParams};
use crate::tensor::{bredon_homology, format_subset, TensorElem};
use crate::trr::{self, FormalExpr, GenSymbol, TRRElem};
use crate::witt::{self, component};
use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub e: u32,
    pub d: usize,
    #[serde(default)]
    pub names: Option<Vec<String>>,
    #[serde(default)]
    pub modulus: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_bound")]
    pub degree_bound: u32,
    #[serde(default = "default_one")]
    pub n_max: u32,
    #[serde(default = "default_one")]
    pub q_max: u32,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_trials() -> u64 {
    100
}

fn default_bound() -> u32 {
    2
}

fn default_one() -> u32 {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: FieldConfig { e: 1, d: 1, names: None, modulus: None },
            seed: 0,
            trials: default_trials(),
            degree_bound: default_bound(),
            n_max: 1,
            q_max: 1,
            format: Format::Text,
            out_dir: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("config: {0}")]
    Config(String),
    #[error("cap violated: {0}")]
    Cap(String),
    #[error("input: {0}")]
    Input(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self, UsageError> {
        serde_json::from_str(s).map_err(|e| UsageError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<Arc<FieldSpec>, UsageError> {
        let f = &self.field;
        let spec = FieldSpec::new(f.e, f.d, f.names.clone(), f.modulus).map_err(|e| UsageError::Config(e.to_string()))?;
        if self.n_max > 3 {
            return Err(UsageError::Cap(format!("n_max = {} exceeds 3", self.n_max)));
        }
        if self.q_max as usize > f.d {
            return Err(UsageError::Cap(format!("q_max = {} exceeds d = {}", self.q_max, f.d)));
        }
        Ok(spec)
    }
}

#[derive(Parser, Debug)]
#[command(name = "drw2", version, about = "Exact verification suites for characteristic-2 Witt complexes")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured output format.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Field parameters, basis and printing conventions.
    FieldInfo,
    /// Bredon homology dimensions of the tensor square.
    Bredon {
        #[arg(long)]
        n: Option<u32>,
    },
    /// Witt sum and product polynomials modulo 2.
    WittTable {
        #[arg(long)]
        n: Option<u32>,
    },
    /// Randomized Witt complex axiom suite.
    Axioms,
    /// Truncation isomorphism and injectivity probes.
    DrwIso,
    /// Symmetric Witt group classes and relations.
    WittGroup {
        /// Diagonal entries to evaluate, e.g. --elem t --elem "t+1".
        #[arg(long)]
        elem: Vec<String>,
    },
    /// Trace of symmetric matrices.
    Trace {
        /// JSON file with an array of rows of field-element strings.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Kernel and cokernel of π − φ.
    Tcr {
        /// Tensor given as an elementary product "a,b" for the cokernel reduction.
        #[arg(long)]
        tensor: Option<String>,
    },
    /// Generators, operators and restriction of the TRR model.
    Trr,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FieldInfo => "field-info",
            Command::Bredon { .. } => "bredon",
            Command::WittTable { .. } => "witt-table",
            Command::Axioms => "axioms",
            Command::DrwIso => "drw-iso",
            Command::WittGroup { .. } => "witt-group",
            Command::Trace { .. } => "trace",
            Command::Tcr { .. } => "tcr",
            Command::Trr => "trr",
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unresolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub suite: String,
    pub id: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub seed: u64,
}

/// Everything a command produced.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub command: String,
    pub seed: u64,
    pub rows: Vec<Row>,
    pub data: Value,
    pub warnings: Vec<String>,
    pub text: String,
}

impl RunOutput {
    fn new(command: &str, seed: u64) -> Self {
        RunOutput { command: command.into(), seed, rows: Vec::new(), data: Value::Null, warnings: Vec::new(), text: String::new() }
    }

    fn check(&mut self, id: impl Into<String>, ok: bool, lhs: impl ToString, rhs: impl ToString, seed: u64) {
        self.rows.push(Row {
            suite: self.command.clone(),
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            seed,
        });
    }

    fn unresolved(&mut self, id: impl Into<String>, lhs: impl ToString, note: impl ToString, seed: u64) {
        let id = id.into();
        self.warnings.push(format!("{id}: {}", note.to_string()));
        self.rows.push(Row {
            suite: self.command.clone(),
            id,
            status: Status::Unresolved,
            lhs: lhs.to_string(),
            rhs: note.to_string(),
            seed,
        });
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.status == Status::Fail)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "seed": self.seed,
                    "data": self.data,
                    "checks": self.rows,
                    "failed": self.failed(),
                });
                serde_json::to_string_pretty(&v).expect("serializable") + "\n"
            }
            Format::Csv => {
                let mut s = String::from("suite,id,status,lhs,rhs,seed\n");
                for r in &self.rows {
                    let status = serde_json::to_value(&r.status).unwrap();
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        csv_field(&r.suite),
                        csv_field(&r.id),
                        status.as_str().unwrap(),
                        csv_field(&r.lhs),
                        csv_field(&r.rhs),
                        r.seed
                    );
                }
                s
            }
            Format::Text => {
                let mut s = self.text.clone();
                let pass = self.rows.iter().filter(|r| r.status == Status::Pass).count();
                let fail = self.rows.iter().filter(|r| r.status == Status::Fail).count();
                let unres = self.rows.len() - pass - fail;
                let _ = writeln!(s, "seed {}: {} checks, {} passed, {} failed, {} unresolved", self.seed, self.rows.len(), pass, fail, unres);
                for r in self.rows.iter().filter(|r| r.status == Status::Fail) {
                    let _ = writeln!(s, "FAIL {} (seed {}): {} != {}", r.id, r.seed, r.lhs, r.rhs);
                }
                s
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Executes one command. Usage problems are errors; failed checks are data.
pub fn run(command: &Command, cfg: &RunConfig) -> Result<RunOutput, UsageError> {
    let spec = cfg.validate()?;
    let mut out = RunOutput::new(command.name(), cfg.seed);
    match command {
        Command::FieldInfo => field_info(&spec, cfg, &mut out),
        Command::Bredon { n } => bredon(&spec, n.unwrap_or(cfg.n_max), &mut out),
        Command::WittTable { n } => witt_table(n.unwrap_or(cfg.n_max), &mut out)?,
        Command::Axioms => axioms(&spec, cfg, &mut out),
        Command::DrwIso => drw_iso(&spec, cfg, &mut out),
        Command::WittGroup { elem } => witt_group(&spec, cfg, elem, &mut out)?,
        Command::Trace { matrix } => trace(&spec, cfg, matrix.as_ref(), &mut out)?,
        Command::Tcr { tensor } => tcr(&spec, cfg, tensor.as_deref(), &mut out)?,
        Command::Trr => trr_cmd(&spec, cfg, &mut out),
    }
    Ok(out)
}

fn field_info(spec: &Arc<FieldSpec>, cfg: &RunConfig, out: &mut RunOutput) {
    let basis: Vec<String> = subsets_ordered(spec.d()).into_iter().map(|xi| format_subset(spec, xi)).collect();
    let g = FieldElem::parse("g", spec).map(|x| x.to_string()).unwrap_or_default();
    out.data = json!({
        "e": spec.e(),
        "d": spec.d(),
        "names": spec.names(),
        "basis_over_squares": basis,
        "generator": g,
    });
    let _ = writeln!(out.text, "k = GF(2^{})({}), [k : k^2] = {}", spec.e(), spec.names().join(", "), spec.basis_size());
    let _ = writeln!(out.text, "2-basis monomials: {}", basis.join(" "));
    let mut r = random::rng(cfg.seed);
    let p = ElemParams { max_terms: 3, max_degree: 3, fraction_rate: 0.3 };
    for i in 0..cfg.trials.min(50) {
        let x = random::elem(spec, p, &mut r);
        let back = FieldElem::parse(&x.to_string(), spec);
        out.check(format!("print_parse_{i}"), back.as_ref() == Ok(&x), &x, back.map(|b| b.to_string()).unwrap_or_default(), cfg.seed);
        let rec = x.square_decomp().recompose();
        out.check(format!("square_decomp_{i}"), rec == x, &x, rec, cfg.seed);
    }
}

fn bredon(spec: &Arc<FieldSpec>, n: u32, out: &mut RunOutput) {
    let rep = bredon_homology(spec.d(), n);
    let dims: Vec<String> =
        rep.homology.iter().enumerate().filter(|(_, &h)| h > 0).map(|(i, h)| format!("H{i}: {h}")).collect();
    let _ = writeln!(out.text, "d = {}, n = {}: {}", rep.d, n, dims.join(", "));
    let _ = writeln!(out.text, "fixed {}, Im(1+w) {}, quotient {}", rep.fixed_dim, rep.image_dim, rep.quotient_dim);
    out.check("fixed_eq_image_plus_quotient", rep.fixed_dim == rep.image_dim + rep.quotient_dim, rep.fixed_dim, rep.image_dim + rep.quotient_dim, 0);
    out.check("cells_eq_rank_plus_fixed", rep.cells == rep.rank_1pw + rep.fixed_dim, rep.cells, rep.rank_1pw + rep.fixed_dim, 0);
    let outside_zero = rep.homology.iter().enumerate().all(|(i, &h)| (n as usize..=2 * n as usize).contains(&i) || h == 0);
    out.check("vanishes_outside_range", outside_zero, format!("{:?}", rep.homology), "", 0);
    out.data = serde_json::to_value(&rep).unwrap();
}

fn witt_table(n: u32, out: &mut RunOutput) -> Result<(), UsageError> {
    if n > 3 {
        return Err(UsageError::Cap(format!("witt-table n = {n} exceeds 3")));
    }
    let mut rows = Vec::new();
    for m in 0..=n as usize {
        let c = component(m).map_err(|e| UsageError::Cap(e.to_string()))?;
        let _ = writeln!(out.text, "S{m} = {}", c.sum2);
        let _ = writeln!(out.text, "P{m} = {}", c.prod2);
        rows.push(json!({"m": m, "sum": c.sum2.to_string(), "prod": c.prod2.to_string()}));
        let ok = witt::ghost_identities_hold(m).unwrap_or(false);
        out.check(format!("ghost_{m}"), ok, "ghost(S), ghost(P)", "ghost(a)+ghost(b), ghost(a)ghost(b)", 0);
    }
    let nf = witt::verify_mod2_normal_form(n as usize);
    out.check("mod2_normal_form", nf.is_ok(), "2W-coset representative", nf.err().unwrap_or_default(), 0);
    out.data = json!({ "components": rows });
    Ok(())
}

fn axioms(spec: &Arc<FieldSpec>, cfg: &RunConfig, out: &mut RunOutput) {
    let rep = complex::axiom_suite(spec, cfg.n_max, cfg.q_max, cfg.trials, cfg.seed);
    for (name, c) in &rep.axioms {
        out.check(name.clone(), c.passed == c.checked, c.passed, c.checked, cfg.seed);
        let _ = writeln!(out.text, "{name}: {}/{}", c.passed, c.checked);
    }
    for f in &rep.failures {
        out.check(format!("{}#{}", f.axiom, f.trial), false, &f.lhs, &f.rhs, f.seed);
    }
    // every emitted certificate must survive a JSON round trip
    for (name, c) in &rep.certificates {
        let back = Certificate::from_json(&c.to_json(), spec);
        let ok = back.as_ref().is_ok_and(|b| b.validate(&c.eval()).is_ok());
        out.check(format!("{name}_roundtrip"), ok, "certificate", "reloaded", cfg.seed);
    }
    out.data = rep.to_json();
}

fn drw_iso(spec: &Arc<FieldSpec>, cfg: &RunConfig, out: &mut RunOutput) {
    let d = spec.d() as u32;
    let mut reports = Vec::new();
    for q in 0..=d {
        let r = trunc0_report(spec, q);
        let ok = r.dimension == r.expected && r.independent && r.u_matches_basis;
        out.check(format!("trunc0_q{q}"), ok, r.dimension, r.expected, 0);
        let _ = writeln!(out.text, "q = {q}: dim J^q/J^(q+1) = {} (expected {})", r.dimension, r.expected);
        reports.push(serde_json::to_value(&r).unwrap());
    }
    let mut r = random::rng(cfg.seed);
    let params = ElemParams { max_terms: 2, max_degree: 2, fraction_rate: 0.0 };
    let (mut kernel_ok, mut non_ok, mut pattern_ok) = (0u64, 0u64, 0u64);
    let trials = cfg.trials;
    for i in 0..trials {
        let s = random::trial_seed(cfg.seed, i);
        let mut rr = random::rng(s);
        let p = rr.gen_range(0..d);
        let q = p + 1;
        let mu = random_frobenius_image(spec, p, &mut rr);
        match key1_check(spec, &mu, q) {
            Ok(Key1Outcome::Divisible(_)) => kernel_ok += 1,
            Ok(other) => out.check(format!("key1_kernel_{i}"), false, format!("{mu:?}"), format!("{other:?}"), s),
            Err(e) => out.check(format!("key1_kernel_{i}"), false, format!("{mu:?}"), e, s),
        }
        let mut bad = mu.clone();
        if perturb_out_of_kernel(spec, p, &mut bad, &mut rr) {
            match key1_check(spec, &bad, q) {
                Ok(Key1Outcome::NotApplicable { .. }) => non_ok += 1,
                other => out.check(format!("key1_non_instance_{i}"), false, format!("{bad:?}"), format!("{other:?}"), s),
            }
        } else {
            non_ok += 1;
        }
        // u(V^n η + dV^n η') against the closed pattern
        let n = 1 + rr.gen_range(0..cfg.n_max.max(1));
        let qq = rr.gen_range(0..d);
        let eta = random_form(spec, qq + 1, &mut r, params);
        let eta2 = random_form(spec, qq, &mut r, params);
        let sym = DRWSymbol::new(
            n,
            vec![
                DrwTerm { kind: DrwKind::V, a: n, eta: eta.clone() },
                DrwTerm { kind: DrwKind::DV, a: n, eta: eta2.clone() },
            ],
        );
        match sym.and_then(|s| complex::u_eval(&s)) {
            Ok(c) if c.rep.pair() == &complex::drw_pattern(&eta, &eta2) => pattern_ok += 1,
            other => out.check(format!("u_pattern_{i}"), false, format!("{eta} ; {eta2}"), format!("{other:?}"), s),
        }
    }
    out.check("key1_kernel_instances", kernel_ok == trials, kernel_ok, trials, cfg.seed);
    out.check("key1_non_instances", non_ok == trials, non_ok, trials, cfg.seed);
    out.check("u_pattern", pattern_ok == trials, pattern_ok, trials, cfg.seed);
    let k2 = key2_probe(spec, cfg.seed, trials.min(100));
    out.check("key2_instances", k2 == trials.min(100), k2, trials.min(100), cfg.seed);
    let _ = writeln!(out.text, "key1: {kernel_ok}/{trials} kernel, {non_ok}/{trials} non-kernel; key2: {k2}");
    out.data = json!({"trunc0": reports, "key1_kernel": kernel_ok, "key1_non_instances": non_ok, "key2": k2, "u_pattern": pattern_ok});
}

/// (z, 0) built from a V-type family-3 generator times fixed generators; returns the count with z ∈ J^{q+2}.
pub fn key2_probe(spec: &Arc<FieldSpec>, seed: u64, trials: u64) -> u64 {
    let mut ok = 0;
    for i in 0..trials {
        let mut r = random::rng(random::trial_seed(seed, i));
        let n = r.gen_range(1..=3u32);
        let q = r.gen_range(0..=spec.d() as u32);
        let one = FieldElem::one(spec);
        let a = random::term_elem(spec, 2, &mut r);
        let b = random::term_elem(spec, 2, &mut r);
        let idx = r.gen_range(0..n);
        let fam3 = FormalExpr::gen(GenSymbol::vtau(n, idx, &a, &b))
            .add(&FormalExpr::gen(GenSymbol::vtau(n, idx, &(&a * &b), &one)))
            .unwrap();
        let mut factors = vec![JFactor::General(fam3)];
        for _ in 0..q {
            let c = random::term_elem(spec, 2, &mut r);
            factors.push(JFactor::fixed(n, r.gen_range(0..=n), &c, &one));
        }
        let cert = Certificate::single(FormalExpr::one(spec, n), factors);
        let z = cert.eval().x;
        if key2_check(&z, n, q, Some(&cert)) == Ok(true) {
            ok += 1;
        }
    }
    ok
}

fn random_form(spec: &Arc<FieldSpec>, q: u32, r: &mut random::Rng8, p: ElemParams) -> DiffForm {
    let mut f = DiffForm::zero(spec, q).unwrap();
    if let Some(xi) = random::subset_of_size(spec, q, r) {
        f = f.add(&DiffForm::term(&random::elem(spec, p, r), xi)).unwrap();
    }
    f
}

fn witt_group(spec: &Arc<FieldSpec>, cfg: &RunConfig, elems: &[String], out: &mut RunOutput) -> Result<(), UsageError> {
    let mut classes = Vec::new();
    for s in elems {
        let a = FieldElem::parse(s, spec).map_err(|e| UsageError::Input(e.to_string()))?;
        let c = diag_class(&a).map_err(|e| UsageError::Input(e.to_string()))?;
        let _ = writeln!(out.text, "<{a}> -> {}", c.rep);
        out.check(format!("kernel_{s}"), c.in_kernel(), &c.rep, "ker(pi - phi)", 0);
        classes.push(json!({"symbol": a.to_string(), "class": c.rep.to_json()}));
    }
    let mut r = random::rng(cfg.seed);
    let p = ElemParams { max_terms: 2, max_degree: 3, fraction_rate: 0.2 };
    let mut total = forms::WittClassS::zero(spec);
    for i in 0..cfg.trials {
        let a = random::nonzero_elem(spec, p, &mut r);
        let c = diag_class(&a).expect("nonzero");
        out.check(format!("diag_kernel_{i}"), c.in_kernel(), &a, "in kernel", cfg.seed);
        total = total.add(&c);
        let b = random::nonzero_elem(spec, p, &mut r);
        match witt_relation_check(&a, &b) {
            Ok(ok) => out.check(format!("relation_{i}"), ok, format!("<{a}>+<{b}>"), "<a+b>+<ab(a+b)>", cfg.seed),
            Err(_) => continue,
        }
    }
    let rank = forms::fundamental_ideal_rank(&total).unwrap();
    let _ = writeln!(out.text, "sum of {} symbols has rank {rank} mod 2", cfg.trials);
    out.check("rank_parity", rank as u64 == cfg.trials % 2, rank, cfg.trials % 2, cfg.seed);
    out.data = json!({"classes": classes, "rank_of_sum": rank});
    Ok(())
}

/// A random invertible symmetric matrix of the given size.
pub fn random_sym_matrix(spec: &Arc<FieldSpec>, n: usize, r: &mut random::Rng8) -> SymMatrix {
    let p = ElemParams { max_terms: 2, max_degree: 2, fraction_rate: 0.0 };
    loop {
        let mut rows = vec![vec![FieldElem::zero(spec); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let x = random::elem(spec, p, r);
                rows[i][j] = x.clone();
                rows[j][i] = x;
            }
        }
        let m = SymMatrix::new(rows).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random invertible matrix.
pub fn random_gl(spec: &Arc<FieldSpec>, n: usize, r: &mut random::Rng8) -> Vec<Vec<FieldElem>> {
    let p = ElemParams { max_terms: 2, max_degree: 1, fraction_rate: 0.0 };
    loop {
        let g: Vec<Vec<FieldElem>> = (0..n).map(|_| (0..n).map(|_| random::elem(spec, p, r)).collect()).collect();
        if crate::linalg::rank_k(&g) == n {
            return g;
        }
    }
}

fn trace(spec: &Arc<FieldSpec>, cfg: &RunConfig, matrix: Option<&PathBuf>, out: &mut RunOutput) -> Result<(), UsageError> {
    if let Some(path) = matrix {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| UsageError::Input(e.to_string()))?;
        let m = SymMatrix::from_json(&v, spec).map_err(|e| UsageError::Input(e.to_string()))?;
        let tr = trace_symmetric(&m).map_err(|e| UsageError::Input(e.to_string()))?;
        let _ = writeln!(out.text, "tr = {tr}");
        out.check("input_kernel", tr.tcr_kernel_test().unwrap_or(false), &tr, "ker(pi - phi)", 0);
        out.data = json!({"trace": tr.to_json(), "display": tr.to_string()});
        return Ok(());
    }
    let mut r = random::rng(cfg.seed);
    for i in 0..cfg.trials {
        let n = r.gen_range(1..=4);
        let m = random_sym_matrix(spec, n, &mut r);
        let tr = trace_symmetric(&m).unwrap();
        out.check(format!("kernel_{i}"), tr.tcr_kernel_test().unwrap_or(false), &tr, "ker(pi - phi)", cfg.seed);
        let g = random_gl(spec, n, &mut r);
        let tr2 = trace_symmetric(&m.congruent(&g)).unwrap();
        out.check(format!("congruence_{i}"), tr2 == tr, &tr2, &tr, cfg.seed);
        let m2 = random_sym_matrix(spec, r.gen_range(1..=2), &mut r);
        let sum = trace_symmetric(&m.block_sum(&m2)).unwrap();
        let parts = &tr + &trace_symmetric(&m2).unwrap();
        out.check(format!("block_sum_{i}"), sum == parts, &sum, &parts, cfg.seed);
        let c = random::elem(spec, ElemParams::default(), &mut r);
        let h = SymMatrix::hyperbolic(&c);
        let g2 = random_gl(spec, 2, &mut r);
        let ginv = crate::linalg::inverse_k(&g2, spec).unwrap();
        let hv = forms::hyperbolic_vanishing(&h.congruent(&ginv), &g2);
        out.check(format!("hyperbolic_{i}"), hv == Ok(true), format!("{hv:?}"), "Ok(true)", cfg.seed);
    }
    Ok(())
}

fn tcr(spec: &Arc<FieldSpec>, cfg: &RunConfig, tensor: Option<&str>, out: &mut RunOutput) -> Result<(), UsageError> {
    let descs: Vec<_> = (0..=cfg.n_max).map(trr::tcr_groups_desc).collect();
    for d in &descs {
        let _ = writeln!(out.text, "pi_{}: {}", d.even_degree, d.even_group);
        if let (Some(deg), Some(g)) = (d.odd_degree, &d.odd_group) {
            let _ = writeln!(out.text, "pi_{deg}: {g}");
        }
    }
    let mut r = random::rng(cfg.seed);
    let p = ElemParams { max_terms: 2, max_degree: 3, fraction_rate: 0.2 };
    for i in 0..cfg.trials {
        let a = random::nonzero_elem(spec, p, &mut r);
        let x = TensorElem::elementary(&a.inv().unwrap(), &a);
        out.check(format!("kernel_{i}"), x.tcr_kernel_test() == Ok(true), &x, "ker(pi - phi)", cfg.seed);
    }
    let x = match tensor {
        Some(s) => {
            let (a, b) = s.split_once(',').ok_or_else(|| UsageError::Input("expected \"a,b\"".into()))?;
            let pa = FieldElem::parse(a.trim(), spec).map_err(|e| UsageError::Input(e.to_string()))?;
            let pb = FieldElem::parse(b.trim(), spec).map_err(|e| UsageError::Input(e.to_string()))?;
            TensorElem::elementary(&pa, &pb)
        }
        None => {
            let t = FieldElem::var(spec, 0);
            TensorElem::elementary(&t, &t)
        }
    };
    let reduction = match quad_class_reduce(&x, cfg.degree_bound) {
        QuadOutcome::InImage { preimage } => {
            let _ = writeln!(out.text, "class of {x} vanishes: preimage {preimage}");
            out.check("cokernel_reduction", true, &x, &preimage, cfg.seed);
            json!({"outcome": "in_image", "preimage": preimage.to_json()})
        }
        QuadOutcome::Unresolved { bound, normal } => {
            let _ = writeln!(out.text, "class of {x} reduced to {} (unresolved at bound {bound})", normal.representative());
            out.unresolved("cokernel_reduction", &x, format!("unresolved at bound {bound}"), cfg.seed);
            json!({"outcome": "unresolved", "bound": bound, "normal": normal.representative().to_json()})
        }
    };
    out.data = json!({"groups": descs, "cokernel": reduction});
    Ok(())
}

fn trr_cmd(spec: &Arc<FieldSpec>, cfg: &RunConfig, out: &mut RunOutput) {
    let one = FieldElem::one(spec);
    let mut r = random::rng(cfg.seed);
    let mut emitted = Vec::new();
    for n in 0..=cfg.n_max {
        let a = random::term_elem(spec, 2, &mut r);
        let b = random::term_elem(spec, 2, &mut r);
        let mut gens = vec![GenSymbol::tau(n, &a, &b)];
        for i in 0..n {
            gens.push(GenSymbol::vtau(n, i, &a, &b));
            gens.push(GenSymbol::svtau(n, i, &a, &b));
        }
        for g in gens {
            let e = TRRElem::generator(g.clone());
            match e {
                Ok(e) => {
                    let res = e.res_to_witt().map(|w| w.to_string()).unwrap_or_else(|err| err.to_string());
                    let _ = writeln!(out.text, "{g}: res = {res}");
                    out.check(format!("invariants_{g}"), e.check().is_ok(), &g, "pullback", cfg.seed);
                    emitted.push(e.to_json());
                }
                Err(err) => out.check(format!("invariants_{g}"), false, &g, err, cfg.seed),
            }
        }
        let params = vec![(a.clone(), b.clone()), (a.clone(), one.clone())];
        match trr::j_generator_enum(n, &params) {
            Ok(js) => out.check(format!("j_generators_level_{n}"), js.iter().all(|j| j.elem.res_to_witt().is_ok_and(|w| w.is_zero())), js.len(), "res = 0", cfg.seed),
            Err(e) => out.check(format!("j_generators_level_{n}"), false, "", e, cfg.seed),
        }
        if n >= 1 {
            let x = TensorElem::elementary(&a, &b);
            let nx = trr::norm_n(n, &x).unwrap();
            let tau = TRRElem::generator(GenSymbol::tau(n, &(&a * &b), &one)).unwrap();
            out.check(format!("norm_level_{n}"), nx == tau, nx.pair().x.to_string(), tau.pair().x.to_string(), cfg.seed);
        }
    }
    out.data = json!({"generators": emitted});
}

/// Parses arguments, runs, writes artifacts; returns the process exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, UsageError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_json_str(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let out = run(&cli.command, &cfg)?;
    let body = out.render(cfg.format);
    print!("{body}");
    let dir = std::env::var_os("DRW2_OUT_DIR").map(PathBuf::from).or_else(|| cfg.out_dir.clone());
    if let Some(dir) = dir {
        std::fs::create_dir_all(&dir)?;
        let ext = match cfg.format {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        };
        std::fs::write(dir.join(format!("{}.{ext}", out.command)), &body)?;
        if !out.warnings.is_empty() {
            std::fs::write(dir.join(format!("{}.warnings.txt", out.command)), out.warnings.join("\n") + "\n")?;
        }
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    Ok(if out.failed() { 1 } else { 0 })
}
