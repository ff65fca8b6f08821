use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use strongnil::fixtures::{self, Fixture, Subject};
use strongnil::input::{LoadedMatrix, MapInput, MatrixInput};
use strongnil::limits;
use strongnil::random::Generator;
use strongnil::{report, Error, FreePolyMatrix, PolyMap};

const EXIT_INPUT: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_TERM_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "strongnil", version, about = "Regular and strong nilpotency of polynomial matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regular and strong nilpotency indices of a matrix (a map's Jacobian for map fixtures).
    AnalyzeMatrix(Opts),
    /// Jacobian indices, rank, det J(x+H) and quasi-translation test of a map.
    AnalyzeMap(Opts),
    /// Triangularization certificate, or the reason none exists.
    Triangularize(Opts),
    /// Quasi-translation checks: index-two conditions, rank-one statements.
    CheckQt(Opts),
    /// The four equivalent statements on the strong index of a Jacobian.
    Cor22(Opts),
    /// Recompute every built-in fixture verdict.
    Fixtures(FixtureOpts),
    /// Noncommutative checks: the non-homogeneous counterexample or the
    /// homogeneous index theorem on a free matrix.
    NcCheck(Opts),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// JSON input file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in fixture: H4, H6, H5, NC3, DUAL, QT3, QT4, R1, R1L
    #[arg(long)]
    fixture: Option<String>,
    /// Tuple count for tuple-product and equivalence checks
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    r: Option<u64>,
    /// Single statement of the equivalence suite
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    statement: Option<u8>,
    /// Degree parameter of H5
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    d: Option<u32>,
    /// Size of the DUAL matrix
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    m: Option<u64>,
    /// Analyze a seeded random instance instead of a file or fixture
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Index search bound over the dual numbers
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_r: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct FixtureOpts {
    /// Run a single fixture
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    m: Option<u64>,
    /// Replace H4 with a copy whose last term has the wrong sign
    #[arg(long)]
    corrupt_h4: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

enum Source {
    File(String),
    Fixture(Fixture),
    Seed(u64),
}

impl Opts {
    fn source(&self) -> Result<Source, Error> {
        let given = [self.input.is_some(), self.fixture.is_some(), self.seed.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Input("give exactly one of --input, --fixture, --seed".into()));
        }
        if let Some(path) = &self.input {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
            return Ok(Source::File(text));
        }
        if let Some(name) = &self.fixture {
            return Ok(Source::Fixture(fixtures::fixture(name, self.d, self.m.map(|m| m as usize))?));
        }
        Ok(Source::Seed(self.seed.expect("one source")))
    }

    fn r(&self) -> Option<usize> {
        self.r.map(|r| r as usize)
    }

    fn max_r(&self) -> Option<usize> {
        self.max_r.map(|r| r as usize)
    }
}

fn load_matrix(opts: &Opts) -> Result<LoadedMatrix, Error> {
    match opts.source()? {
        Source::File(text) => MatrixInput::from_json(&text)?.load(),
        Source::Fixture(f) => match f.subject {
            Subject::Dual(m) => Ok(LoadedMatrix::Dual(m)),
            other => Ok(LoadedMatrix::Rational(other.rational_matrix().expect("rational subject"))),
        },
        Source::Seed(seed) => Ok(LoadedMatrix::Rational(Generator::new(seed).strongly_nilpotent_matrix(5).0)),
    }
}

fn load_map(opts: &Opts) -> Result<PolyMap, Error> {
    match opts.source()? {
        Source::File(text) => MapInput::from_json(&text)?.load(),
        Source::Fixture(f) => match f.subject {
            Subject::Map(h) => Ok(h),
            _ => Err(Error::Input(format!("fixture {} is a matrix, not a map", f.name))),
        },
        Source::Seed(seed) => Ok(Generator::new(seed).qt2_map(5)),
    }
}

fn load_free(opts: &Opts) -> Result<Option<FreePolyMatrix>, Error> {
    if opts.input.is_none() && opts.fixture.is_none() && opts.seed.is_none() {
        return Ok(None);
    }
    match opts.source()? {
        Source::File(text) => Ok(Some(MatrixInput::from_json(&text)?.load_free()?)),
        Source::Fixture(f) => match f.subject {
            // the only free fixture is the counterexample, which has its own report
            Subject::Free(_) => Ok(None),
            _ => Err(Error::Input(format!("fixture {} is not a free matrix", f.name))),
        },
        Source::Seed(seed) => Ok(Some(Generator::new(seed).homogeneous_free_matrix(4, 2))),
    }
}

struct Output {
    value: Value,
    text: String,
    exit: u8,
}

impl Output {
    fn plain(value: Value) -> Self {
        let text = report::render_text(&value);
        Output { value, text, exit: 0 }
    }
}

fn run(cmd: &Command) -> Result<(Output, Format), Error> {
    let out = match cmd {
        Command::AnalyzeMatrix(o) => {
            let value = match load_matrix(o)? {
                LoadedMatrix::Rational(m) => report::matrix_report(&m, o.r())?,
                LoadedMatrix::Dual(m) => report::dual_matrix_report(&m, o.max_r())?,
            };
            (Output::plain(value), o.format)
        }
        Command::AnalyzeMap(o) => (Output::plain(report::map_report(&load_map(o)?)?), o.format),
        Command::Triangularize(o) => {
            let m = match load_matrix(o)? {
                LoadedMatrix::Rational(m) => m,
                LoadedMatrix::Dual(_) => return Err(Error::Input("triangularization needs a matrix over Q".into())),
            };
            let value = report::triangularize_report(&m)?;
            let text = report::triangularize_text(&value);
            (Output { value, text, exit: 0 }, o.format)
        }
        Command::CheckQt(o) => (Output::plain(report::qt_report(&load_map(o)?)?), o.format),
        Command::Cor22(o) => (Output::plain(report::cor22_report(&load_map(o)?, o.r(), o.statement)?), o.format),
        Command::NcCheck(o) => {
            let value = match load_free(o)? {
                None => report::nc_counterexample(),
                Some(m) => report::nc_report(&m)?,
            };
            (Output::plain(value), o.format)
        }
        Command::Fixtures(o) => {
            let mut corpus = match &o.fixture {
                Some(name) => vec![fixtures::fixture(name, o.d, o.m.map(|m| m as usize))?],
                None => fixtures::default_corpus(),
            };
            if o.corrupt_h4 {
                for f in corpus.iter_mut().filter(|f| f.name == "H4") {
                    *f = fixtures::corrupted_h4();
                }
            }
            let rep = fixtures::run_suite(&corpus)?;
            let value = serde_json::to_value(&rep).expect("suite report serializes");
            let mut text = String::new();
            for r in &rep.fixtures {
                text.push_str(&format!("{:<10} {}\n", r.name, if r.pass { "ok" } else { "MISMATCH" }));
            }
            text.push_str(&format!("{} passed, {} failed\n", rep.passed, rep.failed));
            let exit = if rep.all_pass { 0 } else { EXIT_MISMATCH };
            (Output { value, text, exit }, o.format)
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    limits::install_quiet_hook();
    match limits::guard(|| run(&cli.command)) {
        Err(cap) => {
            let err = json!({ "error": "term_limit", "limit": cap.limit, "reached": cap.reached });
            eprintln!("{err}");
            ExitCode::from(EXIT_TERM_CAP)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
        Ok(Ok((out, format))) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.value).expect("json") + "\n",
                Format::Text => out.text,
            };
            // a closed pipe downstream is not an error of ours
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(body.as_bytes()).and_then(|()| stdout.flush());
            ExitCode::from(out.exit)
        }
    }
}
