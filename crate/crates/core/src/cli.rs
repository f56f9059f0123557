//! Tabular output and the commands behind the `ncic` binary.
//!
//! Every command builds a [`Table`] with a fixed column order. CSV output has
//! a header row, floats with six decimals and LF line endings; JSON output is
//! an array of objects keyed by the same columns. Both are byte-identical
//! for identical flags and seed.
//!
//! Exit codes: 0 on success, 1 when `validate` finds a failing check, 2 on
//! bad flags or parameters.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::channel::config_from_db;
use crate::error::{Error, Result};
use crate::finite_snr::{rate_tdm, rate_training_rs, DEFAULT_SAMPLES};
use crate::schemes::{self, prelog_expected, prelog_numeric, SchemeId, TermId};
use crate::validate::{self, Level};

/// Environment variable that overrides the default Monte-Carlo seed.
pub const SEED_ENV: &str = "NCIC_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Float(f64),
    Int(i64),
    Bool(bool),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Text(s) => f.write_str(s),
            Cell::Float(x) => write!(f, "{x:.6}"),
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i64::from(i))
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl Cell {
    fn to_json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // round through the CSV text so both formats carry the same digits
            Cell::Float(x) => format!("{x:.6}")
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// Rows of cells under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("cells are UTF-8")
    }

    /// Reads CSV back; every cell becomes [`Cell::Text`], so re-emitting a
    /// parsed table reproduces the input bytes.
    pub fn read_csv<R: Read>(input: R) -> Result<Table> {
        let mut r = csv::ReaderBuilder::new().from_reader(input);
        let bad = |e: csv::Error| Error::Malformed(format!("csv: {e}"));
        let columns: Vec<String> = r.headers().map_err(bad)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(bad)?.iter().map(Cell::from).collect());
        }
        Ok(Table { columns, rows })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let objects = self
            .rows
            .iter()
            .map(|row| {
                let map = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                serde_json::Value::Object(map)
            })
            .collect();
        serde_json::Value::Array(objects)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values");
                s.push('\n');
                s
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Inequality rows, vertices and symmetric gDoF of one scheme's region.
///
/// `kind` is `row` (`a·d1 + b·d2 ≤ c`), `vertex` (`a = d1`, `b = d2`),
/// `sym_gdof` (value in `c`) or `empty` (flag in `c`).
pub fn gdof_table(scheme: SchemeId, alpha: f64, coherence: u32) -> Result<Table> {
    let region = schemes::region(scheme, alpha, coherence)?;
    let sym = region.symmetric_max()?;
    let mut t = Table::new(&["scheme", "alpha", "coherence", "kind", "index", "a", "b", "c"]);
    let head = || -> Vec<Cell> { vec![scheme.name().into(), alpha.into(), coherence.into()] };
    let blank = || Cell::from("");
    for (i, h) in region.rows.iter().enumerate() {
        let mut r = head();
        r.extend(["row".into(), i.into(), h.a.into(), h.b.into(), h.c.into()]);
        t.push(r);
    }
    for (i, v) in region.vertices()?.iter().enumerate() {
        let mut r = head();
        r.extend(["vertex".into(), i.into(), v.0.into(), v.1.into(), blank()]);
        t.push(r);
    }
    let mut r = head();
    r.extend(["sym_gdof".into(), 0usize.into(), blank(), blank(), sym.value.into()]);
    t.push(r);
    let mut r = head();
    r.extend(["empty".into(), 0usize.into(), blank(), blank(), sym.empty.into()]);
    t.push(r);
    Ok(t)
}

/// Evenly spaced alphas including both ends.
pub fn alpha_steps(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::invalid("steps", format!("need at least 2, got {steps}")));
    }
    if !(min.is_finite() && max.is_finite() && min >= 0.0) {
        return Err(Error::invalid("alpha-min", "need finite 0 <= alpha-min"));
    }
    if max < min {
        return Err(Error::invalid("alpha-max", format!("{max} is below alpha-min {min}")));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k == steps - 1 { max } else { min + (max - min) * k as f64 / n })
        .collect())
}

pub fn sweep_table(
    schemes: &[SchemeId],
    coherence: u32,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
) -> Result<Table> {
    if schemes.is_empty() {
        return Err(Error::invalid("schemes", "need at least one scheme"));
    }
    let mut t = Table::new(&["alpha", "scheme", "sym_gdof"]);
    for a in alpha_steps(alpha_min, alpha_max, steps)? {
        for &s in schemes {
            t.push(vec![a.into(), s.name().into(), schemes::sym_gdof(s, a, coherence)?.into()]);
        }
    }
    Ok(t)
}

/// Schemes with a finite-SNR rate pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateScheme {
    Tdm,
    Train,
}

impl RateScheme {
    fn name(self) -> &'static str {
        match self {
            RateScheme::Tdm => "tdm",
            RateScheme::Train => "train",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatesParams {
    pub snr_db: Vec<f64>,
    pub alpha: f64,
    pub coherence: u32,
    pub link_gain: f64,
    pub samples: usize,
    pub seed: u64,
    pub schemes: Vec<RateScheme>,
}

pub fn rates_table(p: &RatesParams) -> Result<Table> {
    if p.snr_db.is_empty() {
        return Err(Error::invalid("snr-db-list", "need at least one value"));
    }
    if p.link_gain <= 0.0 || !p.link_gain.is_finite() {
        return Err(Error::invalid("link-gain", format!("must be positive, got {}", p.link_gain)));
    }
    let mut t = Table::new(&["snr_db", "scheme", "rate", "stderr"]);
    for &db in &p.snr_db {
        let c = config_from_db(db, p.alpha, p.coherence, p.link_gain)?;
        for &s in &p.schemes {
            let est = match s {
                RateScheme::Tdm => rate_tdm(&c, p.samples, p.seed)?,
                RateScheme::Train => rate_training_rs(&c, p.samples, p.seed)?,
            };
            t.push(vec![db.into(), s.name().into(), est.value.into(), est.stderr.into()]);
        }
    }
    Ok(t)
}

pub fn slope_table(term: TermId, alpha: f64, coherence: u32, exponents: &[f64]) -> Result<Table> {
    let numeric = prelog_numeric(term, alpha, coherence, exponents)?;
    let expected = prelog_expected(term, alpha, coherence)?;
    let mut t = Table::new(&["term", "alpha", "coherence", "numeric", "expected", "abs_diff"]);
    t.push(vec![
        term.name().into(),
        alpha.into(),
        coherence.into(),
        numeric.into(),
        expected.into(),
        (numeric - expected).abs().into(),
    ]);
    Ok(t)
}

#[derive(Debug, Parser)]
#[command(name = "ncic", version, about = "gDoF regions and finite-SNR rates of the noncoherent interference channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inequalities, vertices and symmetric gDoF of one scheme.
    Gdof {
        #[arg(long, value_parser = parse_scheme)]
        scheme: SchemeId,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        coherence: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Symmetric gDoF over an alpha grid.
    Sweep {
        #[arg(long, value_delimiter = ',', value_parser = parse_scheme, default_value = "rs,rs-fb,tin,tdm,train,train-fb")]
        schemes: Vec<SchemeId>,
        #[arg(long)]
        coherence: u32,
        #[arg(long, default_value_t = 0.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 2.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Finite-SNR rates of TDM and the training scheme.
    Rates {
        #[arg(long, value_delimiter = ',', required = true)]
        snr_db_list: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 5)]
        coherence: u32,
        #[arg(long, default_value_t = 1.0)]
        link_gain: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Defaults to $NCIC_SEED, then 1.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',', value_enum, default_value = "tdm,train")]
        schemes: Vec<RateScheme>,
        #[command(flatten)]
        output: Output,
    },
    /// Numeric prelog of a term bound against the closed-form prelog.
    Slope {
        #[arg(long, value_parser = parse_term)]
        term: TermId,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        coherence: u32,
        #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
        exponents: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the self-check suite.
    Validate {
        /// Skip the million-sample Monte-Carlo checks (default).
        #[arg(long, conflicts_with = "full")]
        fast: bool,
        #[arg(long)]
        full: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_scheme(s: &str) -> std::result::Result<SchemeId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_term(s: &str) -> std::result::Result<TermId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn resolve_seed(flag: Option<u64>) -> std::result::Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn usage_error(e: &Error) -> String {
    match e {
        Error::InvalidParameter { name, reason } => format!("invalid value for --{name}: {reason}"),
        other => other.to_string(),
    }
}

fn emit(table: &Table, output: &Output, stdout: &mut dyn Write) -> io::Result<()> {
    let text = table.render(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> std::result::Result<i32, String> {
    let io_err = |e: io::Error| format!("write failed: {e}");
    let (result, output) = match cmd {
        Command::Gdof {
            scheme,
            alpha,
            coherence,
            output,
        } => (gdof_table(scheme, alpha, coherence), output),
        Command::Sweep {
            schemes,
            coherence,
            alpha_min,
            alpha_max,
            steps,
            output,
        } => (sweep_table(&schemes, coherence, alpha_min, alpha_max, steps), output),
        Command::Rates {
            snr_db_list,
            alpha,
            coherence,
            link_gain,
            samples,
            seed,
            schemes,
            output,
        } => {
            let p = RatesParams {
                snr_db: snr_db_list,
                alpha,
                coherence,
                link_gain,
                samples,
                seed: resolve_seed(seed)?,
                schemes,
            };
            (rates_table(&p), output)
        }
        Command::Slope {
            term,
            alpha,
            coherence,
            exponents,
            output,
        } => (slope_table(term, alpha, coherence, &exponents), output),
        Command::Validate { full, seed, .. } => {
            let level = if full { Level::Full } else { Level::Fast };
            let checks = validate::run(level, resolve_seed(seed)?);
            let mut failed = 0;
            for c in &checks {
                writeln!(stdout, "{c}").map_err(io_err)?;
                failed += usize::from(!c.passed);
            }
            writeln!(stdout, "{} checks, {failed} failed", checks.len()).map_err(io_err)?;
            return Ok(i32::from(failed > 0));
        }
    };
    let t = result.map_err(|e| usage_error(&e))?;
    emit(&t, &output, stdout).map_err(io_err)?;
    Ok(0)
}
