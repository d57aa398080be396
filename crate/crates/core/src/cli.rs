//! Batch front end behind the `desitter-dirac` binary.
//!
//! Every command produces a [`Report`]: an echo of the command and its
//! parameters, a list of tagged result rows and a list of pass/fail checks.
//! Reports serialize deterministically (fixed key order, 17 significant
//! digits), so two runs with the same configuration and seed are
//! byte-identical. Wall time goes to stderr only.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
//! configuration or parameter errors.

use crate::error::{Error, Result};
use crate::geometry::{spin_connection_at, spin_connection_closed_form, GammaSet};
use crate::pseudo_susy::{self as ps, CotThetaVariant, DiracGrid, DiracParams, ResidualSetup};
use crate::romanovski::{self as ro, TauMap};
use crate::separation::{first_order_residual, GaugeChoice, SeparatedFields};
use crate::spectral_numeric::{eigen_smallest, richardson};
use crate::susy_angular::{self as sa, Convention};
use crate::{quadrature, Complex64};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

pub const SEED_ENV: &str = "DESITTER_DIRAC_SEED";
pub const DEFAULT_SEED: u64 = 20_171_031;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

// ---------------------------------------------------------------------------
// report values

/// Ordered JSON-like value; object keys keep insertion order.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}
impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}
impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}
impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}
impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}
impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}
impl From<Vec<f64>> for Value {
    fn from(v: Vec<f64>) -> Self {
        Value::List(v.into_iter().map(Value::Num).collect())
    }
}
impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map(Into::into).unwrap_or(Value::Null)
    }
}

/// Fixed-width scientific notation with 17 significant digits; non-finite
/// values become `null`.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

impl Value {
    fn write_json(&self, out: &mut String, indent: usize) {
        let pad = |n: usize| "  ".repeat(n);
        match self {
            Value::Null => out.push_str("null"),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Int(i) => out.push_str(&i.to_string()),
            Value::Num(x) => out.push_str(&format_number(*x)),
            Value::Str(s) => out.push_str(&quote(s)),
            Value::List(items) if items.iter().all(|v| matches!(v, Value::Num(_) | Value::Int(_))) => {
                out.push('[');
                for (k, v) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    v.write_json(out, indent);
                }
                out.push(']');
            }
            Value::List(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push_str("[\n");
                for (k, v) in items.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    v.write_json(out, indent + 1);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
            Value::Map(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push_str("{\n");
                for (k, (key, v)) in fields.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    out.push_str(&quote(key));
                    out.push_str(": ");
                    v.write_json(out, indent + 1);
                    out.push_str(if k + 1 < fields.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push('}');
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        self.write_json(&mut s, 0);
        s.push('\n');
        s
    }

    fn csv_cell(&self) -> String {
        match self {
            Value::Null => String::new(),
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Num(x) => format_number(*x),
            Value::Str(s) => s.clone(),
            Value::List(items) => items.iter().map(Value::csv_cell).collect::<Vec<_>>().join(";"),
            Value::Map(_) => self.to_json().trim_end().to_string(),
        }
    }
}

/// A result row; `tag` names the relation the row verifies.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub tag: String,
    pub fields: Vec<(String, Value)>,
}

impl Row {
    pub fn new(tag: &str) -> Self {
        Self {
            tag: tag.to_string(),
            fields: Vec::new(),
        }
    }

    pub fn set(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), v.into()));
        self
    }

    fn to_value(&self) -> Value {
        let mut f = vec![("tag".to_string(), Value::Str(self.tag.clone()))];
        f.extend(self.fields.iter().cloned());
        Value::Map(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// value < limit
    Below(f64),
    /// value > limit
    Above(f64),
    /// |value − target| ≤ tol
    Within { target: f64, tol: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub tag: String,
    pub value: f64,
    pub bound: Bound,
    pub location: Option<String>,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, tag: &str, value: f64, bound: Bound) -> Self {
        let passed = match bound {
            Bound::Below(l) => value < l,
            Bound::Above(l) => value > l,
            Bound::Within { target, tol } => (value - target).abs() <= tol,
        };
        Self {
            name: name.to_string(),
            tag: tag.to_string(),
            value,
            bound,
            location: None,
            passed,
        }
    }

    pub fn below(name: &str, tag: &str, value: f64, limit: f64) -> Self {
        Self::new(name, tag, value, Bound::Below(limit))
    }

    pub fn flag(name: &str, tag: &str, ok: bool) -> Self {
        Self::new(
            name,
            tag,
            if ok { 1.0 } else { 0.0 },
            Bound::Within { target: 1.0, tol: 0.0 },
        )
    }

    pub fn at(mut self, location: impl Into<String>) -> Self {
        self.location = Some(location.into());
        self
    }

    fn to_value(&self) -> Value {
        let (kind, limit, target) = match self.bound {
            Bound::Below(l) => ("below", l, None),
            Bound::Above(l) => ("above", l, None),
            Bound::Within { target, tol } => ("within", tol, Some(target)),
        };
        Value::Map(vec![
            ("name".into(), self.name.as_str().into()),
            ("tag".into(), self.tag.as_str().into()),
            ("value".into(), self.value.into()),
            ("bound".into(), kind.into()),
            ("limit".into(), limit.into()),
            ("target".into(), target.into()),
            ("location".into(), self.location.clone().into()),
            ("passed".into(), self.passed.into()),
        ])
    }
}

fn max_with_location<T: std::fmt::Display>(items: impl IntoIterator<Item = (T, f64)>) -> (f64, String) {
    let mut best = (f64::NEG_INFINITY, String::new());
    for (loc, v) in items {
        // NaN poisons the maximum on purpose
        if v.is_nan() || best.0.is_nan() {
            best = (f64::NAN, loc.to_string());
            continue;
        }
        if v > best.0 {
            best = (v, loc.to_string());
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub params: Vec<(String, Value)>,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn summary(&self) -> Value {
        let failed: Vec<Value> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| Value::Str(c.name.clone()))
            .collect();
        Value::Map(vec![
            ("checks".into(), self.checks.len().into()),
            ("failed".into(), Value::List(failed)),
            ("passed".into(), self.passed().into()),
        ])
    }

    pub fn to_value(&self) -> Value {
        Value::Map(vec![
            ("command".into(), self.command.as_str().into()),
            ("params".into(), Value::Map(self.params.clone())),
            (
                "rows".into(),
                Value::List(self.rows.iter().map(Row::to_value).collect()),
            ),
            (
                "checks".into(),
                Value::List(self.checks.iter().map(Check::to_value).collect()),
            ),
            ("summary".into(), self.summary()),
        ])
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_json()
    }

    /// One record per row and per check, with a leading `record` column.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<String> = vec!["record".into(), "tag".into()];
        let mut add = |k: &str| {
            if !columns.iter().any(|c| c == k) {
                columns.push(k.to_string());
            }
        };
        for r in &self.rows {
            for (k, _) in &r.fields {
                add(k);
            }
        }
        let check_cols = ["name", "value", "bound", "limit", "target", "location", "passed"];
        for k in check_cols {
            add(k);
        }
        let escape = |s: &str| {
            if s.contains([',', '"', '\n', '\r']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = columns.iter().map(|c| escape(c)).collect::<Vec<_>>().join(",");
        out.push_str("\r\n");
        let mut emit = |record: &str, fields: &[(String, Value)]| {
            let line: Vec<String> = columns
                .iter()
                .map(|c| match c.as_str() {
                    "record" => record.to_string(),
                    _ => fields
                        .iter()
                        .find(|(k, _)| k == c)
                        .map(|(_, v)| escape(&v.csv_cell()))
                        .unwrap_or_default(),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push_str("\r\n");
        };
        for r in &self.rows {
            if let Value::Map(f) = r.to_value() {
                emit("row", &f);
            }
        }
        for c in &self.checks {
            if let Value::Map(f) = c.to_value() {
                emit("check", &f);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// configuration

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Geometry,
    Susy,
    Romanovski,
    Pseudo,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Susy => "susy",
            Suite::Romanovski => "romanovski",
            Suite::Pseudo => "pseudo",
            Suite::All => "all",
        }
    }
}

/// Every tunable parameter, with defaults; a config file and then flags
/// override them.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
    pub seed: u64,
    pub m: f64,
    pub n_max: usize,
    pub grid: usize,
    pub nubar_max: usize,
    pub a: f64,
    pub b: f64,
    pub ell_m: f64,
    pub eps: f64,
    pub nubar: usize,
    pub map: TauMap,
    pub z_min: f64,
    pub z_max: f64,
    pub points: usize,
    pub ell: f64,
    pub tau: f64,
    pub theta: f64,
    pub phi: f64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            format: Format::Json,
            out: None,
            tol: None,
            jobs: None,
            seed: DEFAULT_SEED,
            m: 1.0,
            n_max: 4,
            grid: 4000,
            nubar_max: 4,
            a: -2.0,
            b: -4.0,
            ell_m: 1.0,
            eps: 1.0,
            nubar: 2,
            map: TauMap::Cot,
            z_min: -10.0,
            z_max: 10.0,
            points: 201,
            ell: 1.0,
            tau: 1.0,
            theta: 1.1,
            phi: 0.7,
            samples: 100,
        }
    }
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn toml_f64(key: &str, v: &toml::Value) -> Result<f64> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(config_err(key, "expected a number")),
    }
}

fn toml_usize(key: &str, v: &toml::Value) -> Result<usize> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(config_err(key, "expected a nonnegative integer")),
    }
}

fn toml_str<'a>(key: &str, v: &'a toml::Value) -> Result<&'a str> {
    v.as_str().ok_or_else(|| config_err(key, "expected a string"))
}

impl RunConfig {
    /// Applies `key = value` pairs from a TOML document.
    pub fn apply_toml(&mut self, text: &str) -> Result<()> {
        let table: toml::Table = text.parse().map_err(|e| config_err("config", format!("{e}")))?;
        for (key, v) in &table {
            let k = key.as_str();
            match k {
                "format" => {
                    self.format = Format::from_str(toml_str(k, v)?, true).map_err(|e| config_err(k, e))?;
                }
                "out" => self.out = Some(PathBuf::from(toml_str(k, v)?)),
                "tol" => self.tol = Some(toml_f64(k, v)?),
                "jobs" => self.jobs = Some(toml_usize(k, v)?),
                "seed" => self.seed = toml_usize(k, v)? as u64,
                "m" => self.m = toml_f64(k, v)?,
                "n_max" => self.n_max = toml_usize(k, v)?,
                "grid" => self.grid = toml_usize(k, v)?,
                "nubar_max" => self.nubar_max = toml_usize(k, v)?,
                "a" => self.a = toml_f64(k, v)?,
                "b" => self.b = toml_f64(k, v)?,
                "ell_m" => self.ell_m = toml_f64(k, v)?,
                "eps" => self.eps = toml_f64(k, v)?,
                "nubar" => self.nubar = toml_usize(k, v)?,
                "map" => {
                    self.map = toml_str(k, v)?
                        .parse()
                        .map_err(|e: Error| config_err(k, e.to_string()))?
                }
                "z_min" => self.z_min = toml_f64(k, v)?,
                "z_max" => self.z_max = toml_f64(k, v)?,
                "points" => self.points = toml_usize(k, v)?,
                "ell" => self.ell = toml_f64(k, v)?,
                "tau" => self.tau = toml_f64(k, v)?,
                "theta" => self.theta = toml_f64(k, v)?,
                "phi" => self.phi = toml_f64(k, v)?,
                "samples" => self.samples = toml_usize(k, v)?,
                other => return Err(config_err(other, "unknown key")),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(config_err("tol", "must be positive"));
            }
        }
        if self.jobs == Some(0) {
            return Err(config_err("jobs", "must be at least 1"));
        }
        if self.grid < 16 {
            return Err(config_err("grid", "grid sizes must be at least 16"));
        }
        if !(self.ell > 0.0) || !self.ell.is_finite() {
            return Err(config_err("ell", "must be positive"));
        }
        for (name, v) in [
            ("m", self.m),
            ("a", self.a),
            ("b", self.b),
            ("ell_m", self.ell_m),
            ("z_min", self.z_min),
            ("z_max", self.z_max),
            ("tau", self.tau),
            ("theta", self.theta),
            ("phi", self.phi),
        ] {
            if !v.is_finite() {
                return Err(config_err(name, "must be finite"));
            }
        }
        if self.eps != 1.0 && self.eps != -1.0 {
            return Err(config_err("eps", "must be 1 or -1"));
        }
        if !(self.z_max > self.z_min) {
            return Err(config_err("z_max", "must exceed z_min"));
        }
        if self.points < 2 {
            return Err(config_err("points", "need at least 2 points"));
        }
        if self.samples < 2 {
            return Err(config_err("samples", "need at least 2 samples"));
        }
        Ok(())
    }
}

/// Parses the seed variable; unset or empty means [`DEFAULT_SEED`].
pub fn parse_seed(raw: Option<&str>) -> Result<u64> {
    match raw.filter(|s| !s.trim().is_empty()) {
        None => Ok(DEFAULT_SEED),
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| config_err(SEED_ENV, format!("expected an unsigned integer, got `{s}`"))),
    }
}

// ---------------------------------------------------------------------------
// command line

#[derive(Debug, Parser)]
#[command(
    name = "desitter-dirac",
    version,
    about = "Verification runs for the Dirac equation on a (2+1)D de Sitter-like background"
)]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format (default json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Tolerance for the single-threshold commands (verify keeps its pinned tolerances).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for independent sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML file of `key = value` parameters; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form angular spectrum against the finite-difference oracle.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        /// Angular quantum number m (default 1)
        #[arg(long)]
        m: Option<f64>,
        /// Highest radial level n (default 4)
        #[arg(long)]
        n_max: Option<usize>,
        /// Finite-difference interior points (default 4000)
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Romanovski coefficients, ODE residuals and pairwise orthogonality.
    #[command(allow_negative_numbers = true)]
    RomanovskiTable {
        /// Highest polynomial degree (default 4)
        #[arg(long)]
        nubar_max: Option<usize>,
        /// First weight parameter (default -2)
        #[arg(long)]
        a: Option<f64>,
        /// Second weight parameter (default -4)
        #[arg(long)]
        b: Option<f64>,
    },
    /// Time-part solution on a z grid with its transformed-equation residual.
    #[command(allow_negative_numbers = true)]
    TimePart {
        /// Dimensionless mass ℓM (default 1)
        #[arg(long)]
        ell_m: Option<f64>,
        /// Temporal sign, +1 or -1 (default 1)
        #[arg(long)]
        eps: Option<f64>,
        /// Polynomial degree (default 2)
        #[arg(long)]
        nubar: Option<usize>,
        /// Coordinate map, `cot` or `coth` (default cot)
        #[arg(long)]
        map: Option<String>,
        /// Left end of the z grid (default -10)
        #[arg(long)]
        z_min: Option<f64>,
        /// Right end of the z grid (default 10)
        #[arg(long)]
        z_max: Option<f64>,
        /// Number of z samples (default 201)
        #[arg(long)]
        points: Option<usize>,
    },
    /// Partner 4D metric and its η-factor proportionality.
    #[command(allow_negative_numbers = true)]
    PartnerMetric {
        /// de Sitter radius ℓ (default 1)
        #[arg(long)]
        ell: Option<f64>,
        /// Time coordinate τ of the reported point (default 1)
        #[arg(long)]
        tau: Option<f64>,
        /// Polar angle of the reported point (default 1.1)
        #[arg(long)]
        theta: Option<f64>,
        /// Azimuth of the reported point (default 0.7)
        #[arg(long)]
        phi: Option<f64>,
        /// Random points for the ratio check (default 100)
        #[arg(long)]
        samples: Option<usize>,
    },
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Cli {
    /// Layers the flags over `cfg`.
    pub fn apply_flags(&self, cfg: &mut RunConfig) -> Result<()> {
        set(&mut cfg.format, self.format);
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if self.tol.is_some() {
            cfg.tol = self.tol;
        }
        if self.jobs.is_some() {
            cfg.jobs = self.jobs;
        }
        match &self.command {
            Command::Spectrum { m, n_max, grid } => {
                set(&mut cfg.m, *m);
                set(&mut cfg.n_max, *n_max);
                set(&mut cfg.grid, *grid);
            }
            Command::Verify { .. } => {}
            Command::RomanovskiTable { nubar_max, a, b } => {
                set(&mut cfg.nubar_max, *nubar_max);
                set(&mut cfg.a, *a);
                set(&mut cfg.b, *b);
            }
            Command::TimePart {
                ell_m,
                eps,
                nubar,
                map,
                z_min,
                z_max,
                points,
            } => {
                set(&mut cfg.ell_m, *ell_m);
                set(&mut cfg.eps, *eps);
                set(&mut cfg.nubar, *nubar);
                if let Some(m) = map {
                    cfg.map = m.parse().map_err(|e: Error| config_err("map", e.to_string()))?;
                }
                set(&mut cfg.z_min, *z_min);
                set(&mut cfg.z_max, *z_max);
                set(&mut cfg.points, *points);
            }
            Command::PartnerMetric {
                ell,
                tau,
                theta,
                phi,
                samples,
            } => {
                set(&mut cfg.ell, *ell);
                set(&mut cfg.tau, *tau);
                set(&mut cfg.theta, *theta);
                set(&mut cfg.phi, *phi);
                set(&mut cfg.samples, *samples);
            }
        }
        Ok(())
    }
}

/// Runs the parsed command against a validated configuration.
pub fn execute(command: &Command, cfg: &RunConfig) -> Result<Report> {
    let run = || match command {
        Command::Spectrum { .. } => cmd_spectrum(cfg),
        Command::Verify { suite } => cmd_verify(*suite, cfg),
        Command::RomanovskiTable { .. } => cmd_romanovski_table(cfg),
        Command::TimePart { .. } => cmd_time_part(cfg),
        Command::PartnerMetric { .. } => cmd_partner_metric(cfg),
    };
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| config_err("jobs", e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Full entry point: parse, configure, run, write. Returns the exit code.
pub fn main_with_args<I, T>(args: I, seed_var: Option<String>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let prepared = (|| -> Result<RunConfig> {
        let mut cfg = RunConfig {
            seed: parse_seed(seed_var.as_deref())?,
            ..RunConfig::default()
        };
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_err("config", format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_toml(&text)?;
        }
        cli.apply_flags(&mut cfg)?;
        cfg.validate()?;
        Ok(cfg)
    })();
    let cfg = match prepared {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let report = match execute(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", command_name(&cli.command));
            return EXIT_USAGE;
        }
    };
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    eprintln!(
        "{}: {} checks, {} failed, {:.3} s",
        command_name(&cli.command),
        report.checks.len(),
        failed.len(),
        started.elapsed().as_secs_f64()
    );
    for name in &failed {
        eprintln!("  FAILED {name}");
    }
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectrum { .. } => "spectrum",
        Command::Verify { .. } => "verify",
        Command::RomanovskiTable { .. } => "romanovski-table",
        Command::TimePart { .. } => "time-part",
        Command::PartnerMetric { .. } => "partner-metric",
    }
}

// ---------------------------------------------------------------------------
// commands

fn params(pairs: Vec<(&str, Value)>) -> Vec<(String, Value)> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(5e-4);
    let s = sa::susy_factorization(cfg.m);
    let (plus, _) = s.discretize_pair(cfg.grid, Convention::Factorized)?;
    let oracle = eigen_smallest(&plus, cfg.n_max + 1, false)?.eigenvalues;
    let mut rows = Vec::new();
    let mut gap_errors = Vec::new();
    for n in 0..=cfg.n_max {
        let analytic = sa::analytic_spectrum(cfg.m, n, Convention::Factorized);
        let (gap_a, gap_o, gap_e) = if n == 0 {
            (None, None, None)
        } else {
            let ga = sa::spectral_gap(cfg.m, n - 1);
            let go = oracle[n] - oracle[n - 1];
            gap_errors.push((format!("n={n}"), (go - ga).abs()));
            (Some(ga), Some(go), Some((go - ga).abs()))
        };
        rows.push(
            Row::new("angular.spectrum")
                .set("n", n)
                .set("omega2_factorized", analytic)
                .set(
                    "omega2_separated",
                    sa::analytic_spectrum(cfg.m, n, Convention::Separated),
                )
                .set("oracle", oracle[n])
                .set("oracle_error", (oracle[n] - analytic).abs())
                .set("gap_analytic", gap_a)
                .set("gap_oracle", gap_o)
                .set("gap_error", gap_e),
        );
    }
    let mut checks = vec![Check::below(
        "ground_state_zero",
        "angular.spectrum",
        oracle[0].abs(),
        tol,
    )];
    if !gap_errors.is_empty() {
        let (worst, loc) = max_with_location(gap_errors);
        checks.push(Check::below("gap_law", "angular.spectrum", worst, tol).at(loc));
    }
    Ok(Report {
        command: "spectrum".into(),
        params: params(vec![
            ("m", cfg.m.into()),
            ("n_max", cfg.n_max.into()),
            ("grid", cfg.grid.into()),
            ("tol", tol.into()),
            ("convention", "factorized".into()),
        ]),
        rows,
        checks,
    })
}

pub fn cmd_romanovski_table(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-8);
    let (a, b) = (cfg.a, cfg.b);
    let exact_a = BigRational::from_float(a).ok_or_else(|| config_err("a", "not representable"))?;
    let exact_b = BigRational::from_float(b).ok_or_else(|| config_err("b", "not representable"))?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for nubar in 0..=cfg.nubar_max {
        let p = ro::romanovski_poly(nubar, a, b)?;
        let exact = ro::romanovski_poly_exact(nubar, &exact_a, &exact_b)?;
        let exact_zero = exact.ode_residual().iter().all(Zero::is_zero);
        let float_residual = p.ode_residual_coeffs().iter().map(|v| v.abs()).fold(0.0, f64::max);
        rows.push(
            Row::new("romanovski.polynomial")
                .set("nubar", nubar)
                .set("coeffs", p.coeffs.clone())
                .set("ode_residual", float_residual)
                .set("exact_residual_zero", exact_zero),
        );
        checks.push(Check::flag(
            &format!("exact_ode_residual_nubar_{nubar}"),
            "romanovski.ode",
            exact_zero,
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..=cfg.nubar_max)
        .flat_map(|i| (i..=cfg.nubar_max).map(move |j| (i, j)))
        .collect();
    let integrals: Vec<Result<Option<f64>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            if ro::orthogonality_converges(i, j, b) {
                ro::orthogonality_integral(i, j, a, b).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect();
    let mut cross = Vec::new();
    for (&(i, j), v) in pairs.iter().zip(integrals) {
        let v = v?;
        rows.push(
            Row::new("romanovski.orthogonality")
                .set("nu1", i)
                .set("nu2", j)
                .set("status", if v.is_some() { "convergent" } else { "divergent" })
                .set("integral", v),
        );
        if let (Some(x), true) = (v, i != j) {
            cross.push((format!("({i},{j})"), x.abs()));
        }
    }
    if !cross.is_empty() {
        let (worst, loc) = max_with_location(cross);
        checks.push(Check::below("finite_orthogonality", "romanovski.orthogonality", worst, tol).at(loc));
    }
    Ok(Report {
        command: "romanovski-table".into(),
        params: params(vec![
            ("nubar_max", cfg.nubar_max.into()),
            ("a", a.into()),
            ("b", b.into()),
            ("tol", tol.into()),
        ]),
        rows,
        checks,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn cmd_time_part(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-8);
    let c = ro::model_constants(cfg.ell_m, cfg.eps)?;
    let sol = ro::time_solution(c.component(), cfg.nubar, &c, cfg.map)?;
    let (a, b) = c.romanovski_params();
    let mut rows = Vec::new();
    let mut residuals = Vec::new();
    let mut sup = 0.0f64;
    for z in linspace(cfg.z_min, cfg.z_max, cfg.points) {
        let y = sol.y_tilde(z)?;
        let r = sol.transformed_residual(z)?.norm();
        sup = sup.max(y.norm());
        residuals.push((format!("z={z}"), r));
        rows.push(
            Row::new("time.transformed")
                .set("z", z)
                .set("y_tilde_re", y.re)
                .set("y_tilde_im", y.im)
                .set("residual", r),
        );
    }
    let tau_hi = match cfg.map {
        TauMap::Cot => PI,
        TauMap::Coth => 5.0,
    };
    for tau in crate::calculus::interior_points(0.0, tau_hi, 16) {
        let t = sol.t_of_tau(tau)?;
        rows.push(
            Row::new("time.t_of_tau")
                .set("tau", tau)
                .set("t_re", t.re)
                .set("t_im", t.im),
        );
    }
    // ỹ carries an arbitrary scale and grows like (1+z²)^{|A|/2} when A < 0,
    // so the pass criterion is the residual relative to sup|ỹ|
    let (worst, loc) = max_with_location(residuals);
    rows.push(
        Row::new("time.transformed_summary")
            .set("max_abs_residual", worst)
            .set("sup_abs_y_tilde", sup),
    );
    let cond = ro::eigencondition(c.a_big, sol.omega2);
    let root_hit = cond
        .roots
        .iter()
        .zip(&cond.quantizable)
        .any(|(r, &q)| q && (r - cfg.nubar as f64).abs() < 1e-9);
    Ok(Report {
        command: "time-part".into(),
        params: params(vec![
            ("ell_m", cfg.ell_m.into()),
            ("eps", cfg.eps.into()),
            ("component", (c.component().index() as usize).into()),
            ("nubar", cfg.nubar.into()),
            ("map", cfg.map.name().into()),
            ("map_caveat", cfg.map.is_caveat().into()),
            ("A", c.a_big.into()),
            ("B", c.b_big.into()),
            ("a1", c.a1.into()),
            ("romanovski_a", a.into()),
            ("romanovski_b", b.into()),
            ("omega2", sol.omega2.into()),
            ("tol", tol.into()),
        ]),
        rows,
        checks: vec![
            Check::below("transformed_equation", "time.transformed", worst / sup, tol).at(loc),
            Check::flag("eigencondition_root", "time.eigencondition", root_hit),
        ],
    })
}

fn random_interior(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    (
        rng.random_range(0.1..3.0),
        rng.random_range(0.05..PI - 0.05),
        rng.random_range(0.05..PI - 0.05),
    )
}

/// Largest relative deviation of the ratios from the first one.
fn constancy(ratios: &[Complex64]) -> f64 {
    ratios
        .iter()
        .map(|r| (r - ratios[0]).norm() / ratios[0].norm())
        .fold(0.0, f64::max)
}

pub fn cmd_partner_metric(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tol.unwrap_or(1e-10);
    let g = ps::partner_metric(cfg.ell, cfg.tau, cfg.theta, cfg.phi)?;
    let closed = cfg.ell.powi(8) * cfg.tau.sinh().powi(6) * cfg.theta.sin().powi(2) * cfg.phi.sin().powi(2);
    let mut rows: Vec<Row> = g
        .line_element()
        .iter()
        .enumerate()
        .map(|(k, &v)| Row::new("partner.metric").set("index", k).set("value", v))
        .collect();
    rows.push(
        Row::new("partner.determinant")
            .set("value", g.determinant())
            .set("closed_form", -closed),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut partner = Vec::with_capacity(cfg.samples);
    let mut background = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let (tau, theta, phi) = random_interior(&mut rng);
        partner.push(ps::partner_eta_ratio(cfg.ell, tau, theta, phi)?);
        background.push(ps::background_eta_ratio(cfg.ell, tau, theta)?);
    }
    let p_partner = ps::ell_power(
        |l| ps::partner_eta_ratio(l, cfg.tau, cfg.theta, cfg.phi),
        cfg.ell,
        2.0 * cfg.ell,
    )?;
    let p_background = ps::ell_power(
        |l| ps::background_eta_ratio(l, cfg.tau, cfg.theta),
        cfg.ell,
        2.0 * cfg.ell,
    )?;
    rows.push(
        Row::new("partner.eta_ratio")
            .set("operator", "eta1")
            .set("ratio_re", partner[0].re)
            .set("ratio_im", partner[0].im)
            .set("ell_power", p_partner),
    );
    rows.push(
        Row::new("partner.eta_ratio")
            .set("operator", "eta2")
            .set("ratio_re", background[0].re)
            .set("ratio_im", background[0].im)
            .set("ell_power", p_background),
    );
    Ok(Report {
        command: "partner-metric".into(),
        params: params(vec![
            ("ell", cfg.ell.into()),
            ("tau", cfg.tau.into()),
            ("theta", cfg.theta.into()),
            ("phi", cfg.phi.into()),
            ("samples", cfg.samples.into()),
            ("seed", (cfg.seed as i64).into()),
            ("tol", tol.into()),
        ]),
        rows,
        checks: vec![
            Check::flag("signature", "partner.metric", g.signature() == [-1, 1, 1, 1]),
            Check::below(
                "determinant",
                "partner.determinant",
                (-g.determinant() - closed).abs() / closed,
                1e-12,
            ),
            Check::below("eta1_ratio_constant", "partner.eta_ratio", constancy(&partner), tol),
            Check::below("eta2_ratio_constant", "partner.eta_ratio", constancy(&background), tol),
        ],
    })
}

// ---------------------------------------------------------------------------
// verification suites

type SuiteOutput = (Vec<Row>, Vec<Check>);

fn suite_geometry(seed: u64) -> Result<SuiteOutput> {
    let gammas = GammaSet::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diffs = Vec::new();
    let mut gamma0 = 0.0f64;
    let mut trace = 0.0f64;
    for k in 0..100 {
        let ell = rng.random_range(0.5..3.0);
        let tau = rng.random_range(0.1..3.0);
        let theta = rng.random_range(0.05..PI - 0.05);
        let general = spin_connection_at(ell, tau, theta, &gammas)?;
        let closed = spin_connection_closed_form(tau, theta, &gammas)?;
        diffs.push((
            format!("sample {k}: (ℓ, τ, θ) = ({ell:.6}, {tau:.6}, {theta:.6})"),
            general.max_abs_diff(&closed),
        ));
        gamma0 = gamma0.max(general.components[0].norm());
        for c in &general.components {
            trace = trace.max(c.trace().norm());
        }
    }
    let (worst, loc) = max_with_location(diffs);
    Ok((
        vec![Row::new("geometry.spin_connection")
            .set("samples", 100usize)
            .set("max_abs_diff", worst)],
        vec![
            Check::flag("clifford_exact", "geometry.gamma", GammaSet::clifford_holds_exactly()),
            Check::below("spin_connection_closed_form", "geometry.spin_connection", worst, 1e-10).at(loc),
            Check::below(
                "spin_connection_time_component_zero",
                "geometry.spin_connection",
                gamma0,
                1e-12,
            ),
            Check::below("spin_connection_traceless", "geometry.spin_connection", trace, 1e-12),
        ],
    ))
}

fn suite_susy() -> Result<SuiteOutput> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for m in [1.0, 2.0] {
        let s = sa::susy_factorization(m);
        let (plus, _) = s.discretize_pair(4000, Convention::Factorized)?;
        let e = eigen_smallest(&plus, 6, false)?.eigenvalues;
        let gaps: Vec<(String, f64)> = (0..=4)
            .map(|n| {
                (
                    format!("m={m}, n={n}"),
                    (e[n + 1] - e[n] - sa::spectral_gap(m, n)).abs(),
                )
            })
            .collect();
        let (worst, loc) = max_with_location(gaps);
        rows.push(
            Row::new("angular.spectrum")
                .set("m", m)
                .set("oracle", e.clone())
                .set("max_gap_error", worst),
        );
        checks.push(Check::below(&format!("gap_law_m{m}"), "angular.spectrum", worst, 5e-4).at(loc));
        checks.push(Check::below(
            &format!("ground_state_zero_m{m}"),
            "angular.spectrum",
            e[0].abs(),
            5e-4,
        ));
    }

    // eigen-residual with Richardson-extrapolated oracle eigenvalues
    let s = sa::susy_factorization(1.0);
    let (coarse, _) = s.discretize_pair(1000, Convention::Factorized)?;
    let (fine, _) = s.discretize_pair(2001, Convention::Factorized)?;
    let ec = eigen_smallest(&coarse, 5, false)?.eigenvalues;
    let ef = eigen_smallest(&fine, 5, false)?.eigenvalues;
    let modes: Vec<sa::JacobiMode> = (0..=4)
        .map(|n| sa::jacobi_eigenfunction(1.0, n))
        .collect::<Result<_>>()?;
    let pts = crate::calculus::interior_points(0.2, PI - 0.2, 400);
    let mut residuals = Vec::new();
    for (n, mode) in modes.iter().enumerate() {
        let lambda = richardson(ec[n], ef[n], 2.0, 2);
        let sup = pts.iter().map(|&t| mode.eval(t).abs()).fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for &t in &pts {
            let d2 = crate::calculus::d2(|x| mode.eval(x), t, 1e-3);
            let r = -d2 + s.v_plus(t, Convention::Factorized)? * mode.eval(t) - lambda * mode.eval(t);
            worst = worst.max(r.abs());
        }
        rows.push(
            Row::new("angular.jacobi_mode")
                .set("n", n)
                .set("oracle_lambda", lambda)
                .set("closed_form", mode.omega2)
                .set("relative_residual", worst / sup)
                .set("interior_zeros", mode.interior_zeros(4000)),
        );
        residuals.push((format!("n={n}"), worst / sup));
        checks.push(Check::flag(
            &format!("node_count_n{n}"),
            "angular.jacobi_mode",
            mode.interior_zeros(4000) == n,
        ));
    }
    let (worst, loc) = max_with_location(residuals);
    checks.push(Check::below("jacobi_eigen_residual", "angular.jacobi_mode", worst, 1e-6).at(loc));

    let mut overlaps = Vec::new();
    for i in 0..modes.len() {
        for j in (i + 1)..modes.len() {
            let v = quadrature::integrate(|t| modes[i].eval(t) * modes[j].eval(t), 0.0, PI, 1e-12, 0.0, 5000)?;
            overlaps.push((format!("({i},{j})"), v.value.abs()));
        }
    }
    let (worst, loc) = max_with_location(overlaps);
    checks.push(Check::below("jacobi_orthogonality", "angular.jacobi_mode", worst, 1e-8).at(loc));

    let zero = sa::zero_mode_residual(1.0, 2000)?;
    checks.push(Check::below("zero_mode_annihilated", "angular.ladder", zero, 1e-6));
    let mut ladder = Vec::new();
    for n in 1..=3 {
        let r = sa::intertwine_check(1.0, n, 2000)?;
        rows.push(
            Row::new("angular.ladder")
                .set("n", n)
                .set("residual", r.residual)
                .set("factor", r.factor)
                .set("expected_factor", r.expected_factor),
        );
        ladder.push((
            format!("n={n}"),
            r.residual.max((r.factor.abs() - r.expected_factor).abs()),
        ));
    }
    let (worst, loc) = max_with_location(ladder);
    checks.push(Check::below("ladder_relation", "angular.ladder", worst, 1e-6).at(loc));

    // the separated first-order angular system with the Jacobi pair
    let gauge = GaugeChoice::new(1.0)?;
    let pair = sa::dirac_angular_pair(1.0, 1)?;
    let th1 = |t: f64| Complex64::new(pair.theta1(t), 0.0);
    let th2 = |t: f64| Complex64::new(pair.theta2(t), 0.0);
    let unit = |_: f64| Complex64::new(1.0, 0.0);
    let fields = SeparatedFields {
        t1: &unit,
        t2: &unit,
        theta1: &th1,
        theta2: &th2,
    };
    let grid = crate::calculus::interior_points(0.01, PI - 0.01, 2000);
    let r = first_order_residual(&fields, 1.0, pair.omega, 1.0, &gauge, &[], &grid)?;
    checks.push(Check::below(
        "separated_angular_system",
        "separation.first_order",
        r.angular_1.max(r.angular_2),
        1e-7,
    ));
    Ok((rows, checks))
}

fn suite_romanovski(seed: u64) -> Result<SuiteOutput> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let families = [
        (q(-2, 1), q(-17, 4), 8usize),
        (q(3, 5), q(7, 3), 8),
        (q(-2, 1), q(-4, 1), 4),
    ];
    let mut all_zero = true;
    for (a, b, top) in &families {
        for nubar in 0..=*top {
            let p = ro::romanovski_poly_exact(nubar, a, b)?;
            all_zero &= p.ode_residual().iter().all(Zero::is_zero);
        }
        rows.push(
            Row::new("romanovski.ode")
                .set("a", a.to_string())
                .set("b", b.to_string())
                .set("nubar_max", *top),
        );
    }
    checks.push(Check::flag("exact_ode_residual", "romanovski.ode", all_zero));

    let mut cross = Vec::new();
    for i in 0..=4 {
        for j in (i + 1)..=4 {
            if ro::orthogonality_converges(i, j, -4.0) {
                let v = ro::orthogonality_integral(i, j, -2.0, -4.0)?;
                rows.push(
                    Row::new("romanovski.orthogonality")
                        .set("nu1", i)
                        .set("nu2", j)
                        .set("integral", v),
                );
                cross.push((format!("({i},{j})"), v.abs()));
            }
        }
    }
    let (worst, loc) = max_with_location(cross);
    checks.push(Check::below("finite_orthogonality", "romanovski.orthogonality", worst, 1e-8).at(loc));

    let mut chain = Vec::new();
    for eps in [-1.0, 1.0] {
        let c = ro::model_constants(1.0, eps)?;
        for nubar in 0..=3 {
            let sol = ro::time_solution(c.component(), nubar, &c, TauMap::Cot)?;
            for z in linspace(-10.0, 10.0, 401) {
                chain.push((
                    format!("eps={eps}, nubar={nubar}, z={z}"),
                    sol.transformed_residual(z)?.norm(),
                ));
            }
        }
    }
    let (worst, loc) = max_with_location(chain);
    checks.push(Check::below("transformation_chain", "time.transformed", worst, 1e-8).at(loc));

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut invariant_ok = true;
    let mut trip = Vec::new();
    for k in 0..1000 {
        let x: f64 = rng.random_range(0.01..10.0);
        let eps = if k % 2 == 0 { 1.0 } else { -1.0 };
        let c = ro::model_constants(x, eps)?;
        invariant_ok &= c.a1 >= 1.0 + 4.0 * x * x && c.b_big.is_finite() && c.b_big >= 0.0;
        let nu = ro::nu_of_ell_m(x, eps);
        let back = ro::nu_of_ell_m(ro::ell_m_of_nu(nu, eps)?, eps);
        trip.push((format!("ℓM={x:.6}, ε={eps}"), (back - nu).abs() / nu.abs()));
    }
    let (worst, loc) = max_with_location(trip);
    checks.push(Check::flag("a1_bound_and_real_b", "romanovski.constants", invariant_ok));
    checks.push(Check::below("nu_roundtrip", "romanovski.consistency", worst, 1e-10).at(loc));
    Ok((rows, checks))
}

fn suite_pseudo(seed: u64) -> Result<SuiteOutput> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let p = DiracParams::new(1.0, 1.0, 1.0, GaugeChoice::new(1.0)?)?;
    let reports: Vec<(usize, ps::IntertwiningReport)> = [32usize, 64, 128]
        .par_iter()
        .map(|&n| {
            let setup = ResidualSetup {
                params: p,
                grid: DiracGrid::square(n)?,
                variant: CotThetaVariant::Half,
                exponents: [1.5, 1.0, 1.0],
                dtau: 1e-4,
                window: ps::DEFAULT_WINDOW,
            };
            Ok((n, ps::intertwining_residuals(&setup)?))
        })
        .collect::<Result<_>>()?;
    for (n, r) in &reports {
        rows.push(
            Row::new("pseudo.intertwining")
                .set("n", *n)
                .set("h", r.h_theta)
                .set("r72", r.r72)
                .set("r72_fd", r.r72_fd)
                .set("r72_ablation", r.r72_ablation)
                .set("r72_displayed", r.r72_displayed)
                .set("r71", r.r71)
                .set("r74", r.r74)
                .set("adjoint_mismatch", r.adjoint_mismatch),
        );
    }
    let slope = ps::convergence_slope(&reports.iter().map(|(_, r)| (r.h_theta, r.r72)).collect::<Vec<_>>());
    let r71_slope = ps::convergence_slope(&reports.iter().map(|(_, r)| (r.h_theta, r.r71)).collect::<Vec<_>>());
    let finest = &reports[2].1;
    rows.push(
        Row::new("pseudo.convergence")
            .set("r72_slope", slope)
            .set("r71_slope", r71_slope),
    );
    checks.push(Check::new(
        "r72_second_order",
        "pseudo.intertwining",
        slope,
        Bound::Within { target: 2.0, tol: 0.2 },
    ));
    checks.push(Check::new(
        "r72_ablation_inflation",
        "pseudo.intertwining",
        finest.r72_ablation / finest.r72,
        Bound::Above(1e3),
    ));
    let shift = reports.iter().map(|(_, r)| r.derivative_shift).fold(0.0, f64::max);
    checks.push(Check::below(
        "eta_derivative_consistency",
        "pseudo.intertwining",
        shift,
        1e-8,
    ));

    let literal = ps::intertwining_residuals(&ResidualSetup {
        params: p,
        grid: DiracGrid::square(64)?,
        variant: CotThetaVariant::Literal,
        exponents: [1.5, 1.0, 1.0],
        dtau: 1e-4,
        window: ps::DEFAULT_WINDOW,
    })?;
    rows.push(
        Row::new("pseudo.cot_variant")
            .set("variant", "literal")
            .set("r72", literal.r72)
            .set("r71", literal.r71),
    );

    let grid = DiracGrid::square(16)?;
    for op in [
        ps::build_h_minus(&p, &grid, CotThetaVariant::Literal),
        ps::build_h_minus_dagger(&p, &grid),
        ps::build_h_plus(&p, &grid, ps::UnknownTerms::Solved(ps::solve_fgu(1.5, 1.0, 1.0))),
    ] {
        let pat = op.block_pattern();
        checks.push(Check::below(
            &format!("block_pattern_{:?}", op.kind).to_lowercase(),
            "pseudo.operator",
            if pat.stray_blocks == 0 {
                pat.max()
            } else {
                f64::INFINITY
            },
            1e-14,
        ));
    }

    let e2 = ps::eta2(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut log_err = 0.0f64;
    let mut partner = Vec::new();
    let mut background = Vec::new();
    for _ in 0..100 {
        let (tau, theta, phi) = random_interior(&mut rng);
        log_err = log_err.max((e2.log_tau_derivative(tau) - tau.cosh() / tau.sinh()).abs());
        partner.push(ps::partner_eta_ratio(1.3, tau, theta, phi)?);
        background.push(ps::background_eta_ratio(1.3, tau, theta)?);
    }
    checks.push(Check::below("eta2_log_derivative", "pseudo.eta", log_err, 1e-12));
    checks.push(Check::below(
        "eta1_ratio_constant",
        "pseudo.eta",
        constancy(&partner),
        1e-10,
    ));
    checks.push(Check::below(
        "eta2_ratio_constant",
        "pseudo.eta",
        constancy(&background),
        1e-10,
    ));
    rows.push(
        Row::new("pseudo.eta_ratio")
            .set(
                "eta1_ell_power",
                ps::ell_power(|l| ps::partner_eta_ratio(l, 0.7, 1.1, 0.6), 1.0, 2.0)?,
            )
            .set(
                "eta2_ell_power",
                ps::ell_power(|l| ps::background_eta_ratio(l, 0.7, 1.1), 1.0, 2.0)?,
            ),
    );

    let eta_grid = ps::eta1(1.0, 1.5, 1.0, 1.0).diagonal(&grid, 1.0)?;
    let toy = ps::pseudo_hermitian_toy(&eta_grid.iter().map(|v| v.re).collect::<Vec<_>>())?;
    checks.push(Check::below(
        "pseudo_hermitian_toy",
        "pseudo.definition",
        toy.residual,
        1e-12,
    ));
    let q = ps::supercharge(&eta_grid);
    checks.push(Check::new(
        "supercharge_nilpotent",
        "pseudo.supercharge",
        ps::nilpotency_defect(&q) as f64,
        Bound::Within { target: 0.0, tol: 0.0 },
    ));
    Ok((rows, checks))
}

fn run_suite(suite: Suite, seed: u64) -> Result<SuiteOutput> {
    match suite {
        Suite::Geometry => suite_geometry(seed),
        Suite::Susy => suite_susy(),
        Suite::Romanovski => suite_romanovski(seed),
        Suite::Pseudo => suite_pseudo(seed),
        Suite::All => unreachable!("expanded by the caller"),
    }
}

pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    let suites: Vec<Suite> = match suite {
        Suite::All => vec![Suite::Geometry, Suite::Susy, Suite::Romanovski, Suite::Pseudo],
        s => vec![s],
    };
    let outputs: Vec<Result<SuiteOutput>> = suites.par_iter().map(|&s| run_suite(s, cfg.seed)).collect();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (s, out) in suites.iter().zip(outputs) {
        let (r, c) = out?;
        rows.extend(r.into_iter().map(|row| {
            let mut fields = vec![("suite".to_string(), Value::from(s.name()))];
            fields.extend(row.fields);
            Row { tag: row.tag, fields }
        }));
        checks.extend(c.into_iter().map(|mut ch| {
            ch.name = format!("{}/{}", s.name(), ch.name);
            ch
        }));
    }
    Ok(Report {
        command: "verify".into(),
        params: params(vec![
            ("suite", suite.name().into()),
            ("seed", (cfg.seed as i64).into()),
            ("tol", cfg.tol.into()),
        ]),
        rows,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        assert_eq!(format_number(-0.1), "-1.0000000000000001e-1");
        assert_eq!(format_number(f64::NAN), "null");
        let back: f64 = format_number(0.1 + 0.2).parse().unwrap();
        assert_eq!(back, 0.1 + 0.2);
    }

    #[test]
    fn json_is_valid_and_ordered() {
        let r = Report {
            command: "x".into(),
            params: params(vec![("b", 2.0.into()), ("a", "s\"q".into())]),
            rows: vec![Row::new("t").set("v", vec![1.0, 2.0]).set("none", Option::<f64>::None)],
            checks: vec![Check::below("c", "t", 0.5, 1.0)],
        };
        let text = r.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["rows"][0]["tag"], "t");
        assert_eq!(parsed["checks"][0]["passed"], true);
        assert!(text.find("\"b\"").unwrap() < text.find("\"a\"").unwrap());
    }

    #[test]
    fn csv_quotes_fields() {
        let r = Report {
            command: "x".into(),
            params: vec![],
            rows: vec![Row::new("t").set("s", "a,b").set("q", "say \"hi\"")],
            checks: vec![],
        };
        let csv = r.to_csv();
        assert!(csv.contains("\"a,b\""));
        assert!(csv.contains("\"say \"\"hi\"\"\""));
        assert!(csv.starts_with("record,tag,s,q,"));
    }

    #[test]
    fn nan_fails_checks() {
        assert!(!Check::below("c", "t", f64::NAN, 1.0).passed);
        assert!(!Check::new("c", "t", f64::NAN, Bound::Above(0.0)).passed);
    }

    #[test]
    fn config_layers_and_errors() {
        let mut cfg = RunConfig::default();
        cfg.apply_toml("m = 2\ngrid = 500\nmap = \"coth\"\n").unwrap();
        assert_eq!((cfg.m, cfg.grid, cfg.map), (2.0, 500, TauMap::Coth));
        let err = cfg.apply_toml("bogus = 1").unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "bogus"));
        let small = RunConfig {
            grid: 8,
            ..RunConfig::default()
        };
        assert!(matches!(small.validate(), Err(Error::Config { ref field, .. }) if field == "grid"));
        let cli = Cli::try_parse_from(["desitter-dirac", "spectrum", "--m", "3", "--grid", "64"]).unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_toml("m = 2").unwrap();
        cli.apply_flags(&mut cfg).unwrap();
        assert_eq!((cfg.m, cfg.grid), (3.0, 64));
    }

    #[test]
    fn seed_parsing() {
        assert_eq!(parse_seed(None).unwrap(), DEFAULT_SEED);
        assert_eq!(parse_seed(Some("17")).unwrap(), 17);
        assert_eq!(parse_seed(Some("")).unwrap(), DEFAULT_SEED);
        assert!(parse_seed(Some("x")).is_err());
    }

    #[test]
    fn negative_numbers_parse() {
        let cli = Cli::try_parse_from(["desitter-dirac", "romanovski-table", "--a", "-2", "--b", "-4"]).unwrap();
        let mut cfg = RunConfig::default();
        cli.apply_flags(&mut cfg).unwrap();
        assert_eq!((cfg.a, cfg.b), (-2.0, -4.0));
    }

    #[test]
    fn spectrum_single_row() {
        let cfg = RunConfig {
            n_max: 0,
            grid: 400,
            ..RunConfig::default()
        };
        let r = cmd_spectrum(&cfg).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.checks.len(), 1);
        assert!(r.rows[0]
            .fields
            .iter()
            .any(|(k, v)| k == "gap_error" && *v == Value::Null));
    }

    #[test]
    fn romanovski_table_flags_divergent_pairs() {
        let cfg = RunConfig {
            nubar_max: 2,
            ..RunConfig::default()
        };
        let r = cmd_romanovski_table(&cfg).unwrap();
        assert!(r.passed());
        let zero = RunConfig {
            nubar_max: 0,
            b: 0.5,
            ..RunConfig::default()
        };
        let r = cmd_romanovski_table(&zero).unwrap();
        let pair = r.rows.iter().find(|row| row.tag == "romanovski.orthogonality").unwrap();
        assert!(pair.fields.contains(&("status".to_string(), Value::from("divergent"))));
        assert!(pair.fields.contains(&("integral".to_string(), Value::Null)));
    }

    #[test]
    fn degenerate_table_is_an_error() {
        let cfg = RunConfig {
            nubar_max: 6,
            ..RunConfig::default()
        };
        assert!(matches!(cmd_romanovski_table(&cfg), Err(Error::Degenerate { .. })));
    }
}
