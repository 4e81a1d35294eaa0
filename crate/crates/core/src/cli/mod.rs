//! Command-line front end.
//!
//! Exit codes: 0 success, 2 validation failure (or an empty eigenspace for
//! `hw-dump`), 3 malformed input or unusable prime, 4 resource cap hit,
//! 1 anything else.

mod caps;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::cover_data::{
    enumerate_data, DatumFile, EnumerationFilters, GroupElement, PrymDatum, SubgroupChoice,
};
use crate::error::Error;
use crate::hasse_witt::{check_prime, choose_prime, dump_entry, hw_matrix};
use crate::report::{ClassificationReport, SearchSummary, VerificationReport, CSV_HEADER};

pub use caps::Caps;

/// Environment variable holding cap overrides, e.g.
/// `max_count=5000,max_points=100000`.
pub const CAPS_ENV: &str = "PRYM_ATLAS_CAPS";

const SEARCH_CHUNK: usize = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "prym-atlas",
    version,
    about = "Invariants and speciality tests for abelian covers of the line"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full report for one datum file.
    Analyze(AnalyzeArgs),
    /// Enumerate and classify data over ranges of N, m, s.
    Search(SearchArgs),
    /// Ordinary-point search and polynomial identity checks.
    Verify(VerifyArgs),
    /// Dump the Hasse-Witt block of one character.
    HwDump(HwDumpArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum HChoice {
    #[default]
    Full,
    All,
    IndexTwo,
}

impl From<HChoice> for SubgroupChoice {
    fn from(h: HChoice) -> SubgroupChoice {
        match h {
            HChoice::Full => SubgroupChoice::FullGroup,
            HChoice::All => SubgroupChoice::AllSubgroups,
            HChoice::IndexTwo => SubgroupChoice::IndexTwo,
        }
    }
}

/// `auto` or an explicit prime.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrimeChoice {
    #[default]
    Auto,
    Fixed(u64),
}

impl FromStr for PrimeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<PrimeChoice, String> {
        if s == "auto" {
            return Ok(PrimeChoice::Auto);
        }
        s.parse()
            .map(PrimeChoice::Fixed)
            .map_err(|_| format!("expected 'auto' or a positive integer, got '{s}'"))
    }
}

/// Inclusive range written `a..b` or a single value `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub start: u64,
    pub end: u64,
}

impl IntRange {
    pub fn to_range<T: TryFrom<u64>>(self) -> RangeInclusive<T>
    where
        T::Error: std::fmt::Debug,
    {
        T::try_from(self.start).expect("range bound fits")
            ..=T::try_from(self.end).expect("range bound fits")
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<IntRange, String> {
        let parse = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map(u64::from)
                .map_err(|_| format!("bad range bound '{x}'"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        Ok(IntRange { start, end })
    }
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "allow-trivial-H")]
    pub allow_trivial_h: bool,
    #[arg(long)]
    pub max_count: Option<u64>,
    #[arg(long)]
    pub max_group_size: Option<u64>,
    #[arg(long)]
    pub max_points: Option<u64>,
    #[arg(long)]
    pub max_poly_terms: Option<u64>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Adds an ordinary-point search at this prime.
    #[arg(long)]
    pub prime: Option<PrimeChoice>,
    #[arg(long, default_value_t = 2)]
    pub ext_cap: u32,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long = "N")]
    pub modulus: IntRange,
    #[arg(long, default_value = "1")]
    pub m: IntRange,
    #[arg(long)]
    pub s: IntRange,
    #[arg(long, value_enum, default_value_t = HChoice::Full)]
    pub h_choice: HChoice,
    #[arg(long)]
    pub dedupe_permutations: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "auto")]
    pub prime: PrimeChoice,
    #[arg(long, default_value_t = 2)]
    pub ext_cap: u32,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct HwDumpArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Character coordinates, comma separated.
    #[arg(long = "char", value_delimiter = ',')]
    pub character: Vec<i64>,
    #[arg(long, default_value = "auto")]
    pub prime: PrimeChoice,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::new(exit_code(&e), e.to_string())
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Shape(_)
        | Error::InvalidMatrix(_)
        | Error::NotInGroup(_)
        | Error::TrivialSubgroup
        | Error::Reducible(_)
        | Error::Precondition(_)
        | Error::Domain(_)
        | Error::NotComparable { .. } => 2,
        Error::Parse(_) | Error::PrimeNotCongruent { .. } => 3,
        Error::ResourceCap { .. } => 4,
        Error::Consistency(_) => 1,
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// `env_caps` is the value of [`CAPS_ENV`], if set.
pub fn run<I, T>(
    args: I,
    env_caps: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return e.exit_code();
        }
    };
    match execute(cli, env_caps, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(
    cli: Cli,
    env_caps: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CmdResult {
    let env = Caps::from_env(env_caps).map_err(|m| Failure::new(2, m))?;
    match cli.command {
        Command::Analyze(a) => {
            let caps = env.with_flags(&a.common);
            let text = analyze(&a, &caps, stderr)?;
            emit(&a.common, &text, stdout)?;
            Ok(0)
        }
        Command::Search(a) => {
            let caps = env.with_flags(&a.common);
            let (text, code) = search(&a, &caps, stderr)?;
            emit(&a.common, &text, stdout)?;
            Ok(code)
        }
        Command::Verify(a) => {
            let caps = env.with_flags(&a.common);
            let text = verify(&a, &caps, stderr)?;
            emit(&a.common, &text, stdout)?;
            Ok(0)
        }
        Command::HwDump(a) => {
            let caps = env.with_flags(&a.common);
            let text = hw_dump(&a, &caps, stderr)?;
            emit(&a.common, &text, stdout)?;
            Ok(0)
        }
    }
}

fn emit(common: &CommonArgs, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(1, format!("cannot write output: {e}"))),
    }
}

/// Reads, validates and closes a datum file.
pub fn load_datum(
    path: &PathBuf,
    caps: &Caps,
    allow_trivial: bool,
    stderr: &mut dyn Write,
) -> Result<PrymDatum, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(3, format!("cannot read {}: {e}", path.display())))?;
    let file = DatumFile::parse(&text)?;
    let loaded = file.load()?;
    for w in &loaded.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let report = loaded.matrix.validate();
    if !report.ok {
        for v in &report.violations {
            let _ = writeln!(stderr, "violation {}: {}", v.rule, v.detail);
        }
        return Err(Failure::new(2, "datum fails validation"));
    }
    let group = loaded.matrix.group_elements_capped(caps.max_group_size)?;
    Ok(PrymDatum::with_group(
        loaded.matrix,
        group,
        loaded.generators,
        allow_trivial,
    )?)
}

fn resolve_prime(choice: PrimeChoice, modulus: u32) -> Result<u64, Failure> {
    match choice {
        PrimeChoice::Auto => Ok(choose_prime(modulus, modulus as u64 + 1)?),
        PrimeChoice::Fixed(p) => {
            check_prime(p, modulus).map_err(|e| Failure::new(3, e.to_string()))?;
            Ok(p)
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn analyze(args: &AnalyzeArgs, caps: &Caps, stderr: &mut dyn Write) -> Result<String, Failure> {
    let datum = load_datum(&args.input, caps, args.common.allow_trivial_h, stderr)?;
    let mut report = ClassificationReport::compute(&datum)?;
    if let Some(choice) = args.prime {
        let p = resolve_prime(choice, datum.matrix().modulus())?;
        report = report.with_char_p(&datum, p, args.ext_cap, caps.max_points)?;
    }
    for w in &report.classification.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    Ok(match args.common.format {
        Format::Json => to_json(&report),
        Format::Csv => format!("{CSV_HEADER}\n{}\n", report.csv_row()),
    })
}

fn search(
    args: &SearchArgs,
    caps: &Caps,
    stderr: &mut dyn Write,
) -> Result<(String, i32), Failure> {
    let filters = EnumerationFilters {
        irreducible: true,
        subgroups: args.h_choice.into(),
        dedupe_permutations: args.dedupe_permutations,
        allow_trivial_subgroup: args.common.allow_trivial_h,
        max_count: caps.max_count,
        max_group_size: caps.max_group_size,
    };
    let mut stream = enumerate_data(
        args.modulus.to_range(),
        args.m.to_range(),
        args.s.to_range(),
        filters,
    );
    let format = args.common.format;
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    let mut summary = SearchSummary::new();
    let mut stopped: Option<Error> = None;
    loop {
        let mut chunk = Vec::with_capacity(SEARCH_CHUNK);
        while chunk.len() < SEARCH_CHUNK {
            match stream.next() {
                Some(Ok(d)) => chunk.push(d),
                Some(Err(e)) => {
                    stopped = Some(e);
                    break;
                }
                None => break,
            }
        }
        if chunk.is_empty() {
            break;
        }
        let reports: Vec<_> = chunk
            .par_iter()
            .map(ClassificationReport::compute)
            .collect();
        for r in reports {
            let r = r?;
            summary.record(r.verdict());
            match format {
                Format::Csv => out.push_str(&r.csv_row()),
                Format::Json => {
                    out.push_str(&serde_json::to_string(&r).expect("report serializes"))
                }
            }
            out.push('\n');
        }
        if stopped.is_some() {
            break;
        }
    }
    if summary.total > 0 || format == Format::Json {
        match format {
            Format::Csv => {
                for line in summary.footer_lines() {
                    out.push_str(&line);
                    out.push('\n');
                }
            }
            Format::Json => {
                out.push_str(&summary.to_json().to_string());
                out.push('\n');
            }
        }
    }
    let code = match stopped {
        None => 0,
        Some(e) => {
            let code = exit_code(&e);
            let _ = writeln!(
                stderr,
                "warning: search stopped early, output is partial: {e}"
            );
            code
        }
    };
    Ok((out, code))
}

fn verify(args: &VerifyArgs, caps: &Caps, stderr: &mut dyn Write) -> Result<String, Failure> {
    let datum = load_datum(&args.input, caps, args.common.allow_trivial_h, stderr)?;
    let p = resolve_prime(args.prime, datum.matrix().modulus())?;
    let report = VerificationReport::compute(&datum, p, args.ext_cap, caps.max_points)?;
    for note in &report.notes {
        let _ = writeln!(stderr, "note: {note}");
    }
    Ok(to_json(&report))
}

fn hw_dump(args: &HwDumpArgs, caps: &Caps, stderr: &mut dyn Write) -> Result<String, Failure> {
    let datum = load_datum(&args.input, caps, true, stderr)?;
    let matrix = datum.matrix();
    if args.character.len() != matrix.num_rows() {
        return Err(Failure::new(
            2,
            format!(
                "character has {} coordinates, matrix has {} rows",
                args.character.len(),
                matrix.num_rows()
            ),
        ));
    }
    let n = GroupElement::from_signed(&args.character, matrix.modulus());
    let p = resolve_prime(args.prime, matrix.modulus())?;
    let block = hw_matrix(matrix, &n, p)?;
    let terms: u64 = block.entries.iter().flatten().map(|e| e.len() as u64).sum();
    if terms > caps.max_poly_terms {
        return Err(Error::ResourceCap {
            what: "polynomial terms",
            limit: caps.max_poly_terms,
        }
        .into());
    }
    let mut out = String::new();
    for i in 1..=block.d {
        for j in 1..=block.d {
            out.push_str(&dump_entry(block.entry(i, j), &n, i, j));
        }
    }
    Ok(out)
}
