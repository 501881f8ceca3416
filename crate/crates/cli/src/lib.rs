//! Command-line front end for the `riordan` library.
//!
//! [`parse_args`] turns an argument list into a [`Request`], [`execute`]
//! runs it and [`render`] formats the resulting [`Output`].

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use riordan::characterization::{a_sequence, solve_f_from_amatrix, AMatrixSpec, ProductionMatrix};
use riordan::paths::{count_paths, find_potential, left_factors, StepSpec};
use riordan::rat::format_rat;
use riordan::reproduce;
use riordan::riordan::SumKind;
use riordan::series::Definitions;
use riordan::transforms::{cf_eval, hankel, invert_transform, jfraction_extract, somos4_check, CfSpec};
use riordan::{AlmostRiordan, IntMatrix, Rat, RiordanArray, Series};

/// Exit status for a computational error or a failed `check`.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for a usage error.
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(name = "riordan", version, about = "Exact Riordan arrays, power series and lattice paths")]
pub struct Request {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct Options {
    /// Truncation order of every series; defaults to max(2*size, 16).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub order: Option<u64>,
    /// Rows of matrices, or terms of sequences.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub size: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Named series `name=expr`; later definitions may use earlier ones.
    #[arg(long = "def", global = true, value_name = "NAME=EXPR")]
    pub defs: Vec<String>,
    /// Fixed-point series `name=expr`, where `expr` may use `name`.
    #[arg(long = "fix", global = true, value_name = "NAME=EXPR")]
    pub fixes: Vec<String>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

impl Options {
    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn order(&self) -> usize {
        self.order.map_or_else(|| (2 * self.size()).max(16), |o| o as usize)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Coefficients of a series expression.
    Series { expr: String },
    /// The Riordan array (g, f) or a matrix derived from it.
    Riordan {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        #[arg(long, value_enum, default_value_t = View::Matrix)]
        view: View,
    },
    /// The almost-Riordan array (a; g, f).
    Almost {
        #[arg(long)]
        a: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// Weighted lattice-path counts for a JSON step specification.
    Paths {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = PathView::Matrix)]
        view: PathView,
    },
    /// Production matrix of a Riordan array or of a JSON matrix file.
    Production {
        #[arg(long, requires = "f", conflicts_with = "matrix")]
        g: Option<String>,
        #[arg(long, requires = "g")]
        f: Option<String>,
        #[arg(long, required_unless_present = "g")]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ProductionView::Matrix)]
        view: ProductionView,
    },
    /// The Riordan array (f/x, f) defined by a JSON A-matrix specification.
    Amatrix {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = AmatrixView::Matrix)]
        view: AmatrixView,
    },
    /// Sequence transforms and continued fractions.
    Transform {
        #[command(subcommand)]
        kind: Transform,
    },
    /// Run the built-in reproduction suite.
    Check,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Matrix,
    Inverse,
    Rectify,
    Reversal,
    Triangulate,
    Stretch,
    Symmetrize,
    RowSums,
    DiagonalSums,
    ASequence,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathView {
    Matrix,
    LeftFactors,
    Potential,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductionView {
    Matrix,
    Z,
    A,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmatrixView {
    Matrix,
    F,
    Verify,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Transform {
    /// Hankel determinants of a comma-separated integer sequence.
    Hankel {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        seq: Vec<BigInt>,
    },
    /// INVERT transform of a series expression.
    Invert { expr: String },
    /// Expansion of a JSON continued-fraction specification.
    Cf {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Jacobi continued-fraction coefficients of a series expression.
    Jfraction {
        expr: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Test a sequence against a(n) a(n-4) = A a(n-1) a(n-3) + B a(n-2)^2.
    Somos {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        seq: Vec<BigInt>,
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        b: BigInt,
    },
}

/// Result of a command, before formatting.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Matrix(Vec<Vec<String>>),
    Sequence(Vec<String>),
    Lines(Vec<String>),
}

impl Output {
    fn matrix(m: &IntMatrix) -> Self {
        Output::Matrix(m.to_rows().iter().map(|r| r.iter().map(BigInt::to_string).collect()).collect())
    }

    fn integers(v: &[BigInt]) -> Self {
        Output::Sequence(v.iter().map(BigInt::to_string).collect())
    }

    fn rationals(v: &[Rat]) -> Self {
        Output::Sequence(v.iter().map(format_rat).collect())
    }
}

/// Outcome of [`execute`]: the output and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub output: Output,
    pub status: i32,
}

/// Command failure: a usage error (status 2) or a computational one (status 1).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<riordan::Error> for CliError {
    fn from(e: riordan::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

/// Parse arguments, not including the program name.
pub fn parse_args<I, S>(argv: I) -> Result<Request, clap::Error>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    Request::try_parse_from(std::iter::once("riordan".into()).chain(argv.into_iter().map(Into::into)))
}

fn definitions(opts: &Options) -> Result<Definitions, CliError> {
    let mut d = Definitions::new();
    for text in &opts.defs {
        d.define_str(text).map_err(|e| CliError::Usage(format!("--def {text}: {e}")))?;
    }
    for text in &opts.fixes {
        d.define_fixpoint_str(text).map_err(|e| CliError::Usage(format!("--fix {text}: {e}")))?;
    }
    Ok(d)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Run a request.
pub fn execute(req: &Request) -> Result<Report, CliError> {
    let opts = &req.options;
    let (size, order) = (opts.size(), opts.order());
    let defs = definitions(opts)?;
    let series = |text: &str| defs.parse_series(text, order);
    let done = |output| Ok(Report { output, status: 0 });
    match &req.command {
        Command::Series { expr } => {
            let s = series(expr)?;
            let n = size.min(s.order());
            done(Output::rationals(&s.coeffs()[..n]))
        }
        Command::Riordan { g, f, view } => {
            let r = RiordanArray::new(series(g)?, series(f)?)?;
            done(riordan_view(&r, *view, size)?)
        }
        Command::Almost { a, g, f } => {
            let r = AlmostRiordan::new(series(a)?, series(g)?, series(f)?)?;
            done(Output::matrix(&r.matrix(size)?))
        }
        Command::Paths { spec, view } => {
            let spec = StepSpec::from_json(&read(spec)?)?;
            match view {
                PathView::Matrix => done(Output::matrix(&count_paths(&spec, size)?)),
                PathView::LeftFactors => done(Output::integers(&left_factors(&spec, size)?)),
                PathView::Potential => {
                    let p = find_potential(&spec)?;
                    done(Output::Sequence(vec![p.alpha.to_string(), p.beta.to_string()]))
                }
            }
        }
        Command::Production { g, f, matrix, view } => {
            let m = match (g, f, matrix) {
                (Some(g), Some(f), _) => RiordanArray::new(series(g)?, series(f)?)?.matrix(size + 1)?,
                (_, _, Some(path)) => IntMatrix::from_json(&read(path)?)?,
                _ => return Err(CliError::Usage("production needs --g and --f, or --matrix".into())),
            };
            let p = ProductionMatrix::new(&m, size.min(m.rows().saturating_sub(1)))?;
            match view {
                ProductionView::Matrix => {
                    done(Output::Matrix(p.rows().iter().map(|r| r.iter().map(format_rat).collect()).collect()))
                }
                ProductionView::Z => done(Output::rationals(&p.z())),
                ProductionView::A => done(Output::rationals(&p.a())),
            }
        }
        Command::Amatrix { spec, view } => {
            let spec = AMatrixSpec::from_json(&read(spec)?)?;
            let f = solve_f_from_amatrix(&spec, order)?;
            match view {
                AmatrixView::F => done(Output::rationals(&f.coeffs()[..size.min(f.order())])),
                AmatrixView::Matrix | AmatrixView::Verify => {
                    let m = RiordanArray::new(f.shift_down(1)?, f)?.matrix(size)?;
                    if *view == AmatrixView::Matrix {
                        return done(Output::matrix(&m));
                    }
                    let ok = spec.verify(&m);
                    Ok(Report { output: Output::Lines(vec![verdict(ok).into()]), status: status(ok) })
                }
            }
        }
        Command::Transform { kind } => transform(kind, &series, size, order),
        Command::Check => {
            let mut lines = Vec::new();
            let mut all = true;
            for c in reproduce::run_all() {
                all &= c.passed();
                lines.push(format!("{} criterion {}: {} ({} checks)", verdict(c.passed()), c.id, c.title, c.total));
                lines.extend(c.failures.iter().map(|f| format!("  failed: {f}")));
            }
            Ok(Report { output: Output::Lines(lines), status: status(all) })
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn status(ok: bool) -> i32 {
    if ok {
        0
    } else {
        EXIT_FAILURE
    }
}

fn riordan_view(r: &RiordanArray, view: View, size: usize) -> Result<Output, CliError> {
    Ok(match view {
        View::Matrix => Output::matrix(&r.matrix(size)?),
        View::Inverse => Output::matrix(&r.inverse()?.matrix(size)?),
        View::Rectify => Output::matrix(&r.rectify(size)?),
        View::Reversal => Output::matrix(&r.reversal(size)?),
        View::Triangulate => Output::matrix(&r.triangulate()?.matrix(size)?),
        View::Stretch => Output::matrix(&r.stretch().matrix(size)?),
        View::Symmetrize => Output::matrix(&r.reverse_symmetrize(size)?),
        View::RowSums => Output::integers(&r.sums(SumKind::Row, size)?),
        View::DiagonalSums => Output::integers(&r.sums(SumKind::Diagonal, size)?),
        View::ASequence => Output::rationals(&a_sequence(r, size)?),
    })
}

fn transform(
    kind: &Transform,
    series: &dyn Fn(&str) -> riordan::Result<Series>,
    size: usize,
    order: usize,
) -> Result<Report, CliError> {
    let output = match kind {
        Transform::Hankel { seq } => {
            let m = seq.len().div_ceil(2).min(size);
            Output::integers(&hankel(seq, m)?)
        }
        Transform::Invert { expr } => {
            let s = invert_transform(&series(expr)?)?;
            Output::rationals(&s.coeffs()[..size.min(s.order())])
        }
        Transform::Cf { spec } => {
            let s = cf_eval(&CfSpec::from_json(&read(spec)?)?, size)?;
            Output::rationals(s.coeffs())
        }
        Transform::Jfraction { expr, depth } => {
            let spec = jfraction_extract(&series(expr)?.truncate(order), *depth)?;
            Output::Lines(vec![spec.to_json()])
        }
        Transform::Somos { seq, a, b } => {
            let ok = somos4_check(seq, a, b)?;
            return Ok(Report { output: Output::Lines(vec![verdict(ok).into()]), status: status(ok) });
        }
    };
    Ok(Report { output, status: 0 })
}

/// Format an output: right-aligned columns, CSV rows, or JSON arrays of
/// decimal strings.
pub fn render(output: &Output, format: Format) -> String {
    match output {
        Output::Lines(lines) => lines.iter().map(|l| format!("{l}\n")).collect(),
        Output::Sequence(v) => match format {
            Format::Text => format!("{}\n", v.join(", ")),
            Format::Csv => csv_rows(std::slice::from_ref(v)),
            Format::Json => format!("{}\n", serde_json::to_string(v).expect("strings serialize")),
        },
        Output::Matrix(rows) => match format {
            Format::Text => aligned(rows),
            Format::Csv => csv_rows(rows),
            Format::Json => format!("{}\n", serde_json::to_string(rows).expect("strings serialize")),
        },
    }
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|k| rows.iter().filter_map(|r| r.get(k)).map(String::len).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

fn csv_rows(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv of utf-8 input")
}
