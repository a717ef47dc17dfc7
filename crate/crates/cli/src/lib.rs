//! Command-line front end: `chanda [OPTIONS] [INPUT]...`.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use chanda_core::meterdb::DATABASE_ENV;
use chanda_core::pipeline::export::to_json;
use chanda_core::pipeline::{collect_stats, export, DetailedReport, Format};
use chanda_core::{analyze, MetricalDatabase, Mode, Report, Scheme, DEFAULT_K};
use clap::error::ErrorKind;
use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "chanda", version, about = "Identify the meter of Sanskrit verse")]
pub struct Cli {
    /// Identify each line on its own, or whole verses.
    #[arg(long, default_value_t = Mode::Verse)]
    pub mode: Mode,

    /// Input scheme: auto, devanagari, iast, hk or slp1.
    #[arg(long, default_value = "auto", value_parser = parse_scheme)]
    pub scheme: SchemeChoice,

    /// Number of fuzzy candidates per line.
    #[arg(short, long, default_value_t = DEFAULT_K, value_parser = parse_k)]
    pub k: usize,

    /// Output format: compact or detailed (JSON).
    #[arg(long, default_value = "compact")]
    pub format: Format,

    /// Meter definition file to use instead of the built-in one.
    #[arg(long, env = DATABASE_ENV)]
    pub db: Option<PathBuf>,

    /// Append line statistics to compact output.
    #[arg(long)]
    pub stats: bool,

    /// Write output here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Files or inline text; `-` reads standard input. Standard input is
    /// read when none are given.
    pub inputs: Vec<String>,
}

/// `None` means detect from the text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeChoice(pub Option<Scheme>);

fn parse_scheme(s: &str) -> Result<SchemeChoice, String> {
    if s.eq_ignore_ascii_case("auto") {
        Ok(SchemeChoice(None))
    } else {
        s.parse()
            .map(|s| SchemeChoice(Some(s)))
            .map_err(|e: chanda_core::Error| e.to_string())
    }
}

fn parse_k(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("k must be at least 1".into()),
        Ok(k) => Ok(k),
        Err(e) => Err(e.to_string()),
    }
}

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATABASE: i32 = 2;

pub fn load_database(path: Option<&Path>) -> anyhow::Result<MetricalDatabase> {
    let Some(path) = path else {
        return Ok(MetricalDatabase::starter());
    };
    let source = fs::read_to_string(path).with_context(|| format!("cannot read meter database {}", path.display()))?;
    MetricalDatabase::load(&source).with_context(|| format!("invalid meter database {}", path.display()))
}

/// An argument that is not an existing file but clearly meant to be one.
fn looks_like_path(arg: &str) -> bool {
    !arg.chars().any(char::is_whitespace)
        && (arg.contains('/') || arg.contains('\\') || Path::new(arg).extension().is_some_and(|e| e.is_ascii()))
}

fn read_inputs(inputs: &[String], stdin: &mut dyn Read) -> anyhow::Result<Vec<String>> {
    if inputs.is_empty() {
        let mut text = String::new();
        stdin.read_to_string(&mut text).context("cannot read standard input")?;
        return Ok(vec![text]);
    }
    let mut texts = Vec::with_capacity(inputs.len());
    for input in inputs {
        let text = if input == "-" {
            let mut text = String::new();
            stdin.read_to_string(&mut text).context("cannot read standard input")?;
            text
        } else if Path::new(input).is_file() {
            fs::read_to_string(input).with_context(|| format!("cannot read {input}"))?
        } else if looks_like_path(input) {
            bail!("no such file: {input}");
        } else {
            input.clone()
        };
        texts.push(text);
    }
    Ok(texts)
}

fn render(reports: &[Report], cli: &Cli) -> String {
    match (cli.format, reports) {
        (Format::Detailed, [single]) => export(single, Format::Detailed),
        (Format::Detailed, _) => {
            let mut merged = DetailedReport::from_report(&reports[0]);
            for r in &reports[1..] {
                merged.verses.extend(DetailedReport::from_report(r).verses);
            }
            let verses: Vec<_> = reports.iter().flat_map(|r| r.verses.iter().cloned()).collect();
            merged.stats = collect_stats(&verses);
            to_json(&merged)
        }
        (Format::Compact, _) => {
            let mut out = reports
                .iter()
                .map(|r| export(r, Format::Compact))
                .collect::<Vec<_>>()
                .join("\n");
            if cli.stats {
                let verses: Vec<_> = reports.iter().flat_map(|r| r.verses.iter().cloned()).collect();
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&collect_stats(&verses).to_compact());
            }
            out
        }
    }
}

fn warn(reports: &[Report], stderr: &mut dyn Write) {
    let mut n = 0;
    for report in reports {
        for verse in &report.verses {
            for (i, line) in verse.lines.iter().enumerate() {
                n += 1;
                for w in &line.warnings {
                    let _ = writeln!(stderr, "warning: line {n}: unknown character {:?}", w.character);
                }
                if verse.effective_match(i).is_none() {
                    let _ = writeln!(stderr, "warning: line {n}: no meter identified");
                }
            }
        }
    }
}

fn execute(
    cli: &Cli,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), (i32, anyhow::Error)> {
    let db = load_database(cli.db.as_deref()).map_err(|e| (EXIT_DATABASE, e))?;
    let texts = read_inputs(&cli.inputs, stdin).map_err(|e| (EXIT_USAGE, e))?;

    let mut reports = Vec::with_capacity(texts.len());
    for text in texts.iter().filter(|t| !t.trim().is_empty()) {
        let report = analyze(text, cli.scheme.0, cli.mode, &db, cli.k).map_err(|e| (EXIT_USAGE, e.into()))?;
        reports.push(report);
    }
    if reports.is_empty() {
        return Err((EXIT_USAGE, anyhow::anyhow!("input is empty")));
    }
    warn(&reports, stderr);

    let out = render(&reports, cli);
    match &cli.output {
        Some(path) => fs::write(path, out).with_context(|| format!("cannot write {}", path.display())),
        None => stdout.write_all(out.as_bytes()).context("cannot write output"),
    }
    .map_err(|e| (EXIT_USAGE, e))
}

/// Parse `args` (including the program name) and run. Returns the exit
/// status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err((code, e)) => {
            let _ = writeln!(stderr, "error: {e:#}");
            code
        }
    }
}
