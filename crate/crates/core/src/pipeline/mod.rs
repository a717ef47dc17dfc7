//! Document-level processing: splitting into verses and lines, line-mode
//! and verse-mode identification, statistics and export.

pub mod document;
pub mod export;
pub mod identify;
pub mod stats;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::meterdb::MetricalDatabase;
use crate::translit::{self, NormalizedText, Scheme};

pub use document::{split_document, split_text, Document, LineRecord, Verse};
pub use export::{export, DetailedLine, DetailedMatch, DetailedReport, DetailedVerse, Format};
pub use identify::{identify_line, identify_verse, LineResult, VerseResult};
pub use stats::{collect_stats, MeterCount, Stats};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Line,
    #[default]
    Verse,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Line => "line",
            Mode::Verse => "verse",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "line" => Ok(Mode::Line),
            "verse" => Ok(Mode::Verse),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Full result of analysing a text.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub mode: Mode,
    pub text: NormalizedText,
    pub verses: Vec<VerseResult>,
    pub stats: Stats,
}

impl Report {
    pub fn scheme(&self) -> Scheme {
        self.text.source_scheme
    }

    /// Line text in the input's scheme.
    pub fn source_text(&self, line: &LineResult) -> String {
        translit::from_devanagari(&line.record.text, self.scheme())
    }
}

/// Normalize, split and identify `text`. `scheme` of `None` means detect.
pub fn analyze(text: &str, scheme: Option<Scheme>, mode: Mode, db: &MetricalDatabase, k: usize) -> Result<Report> {
    let normalized = translit::normalize(text, scheme)?;
    let doc = split_document(&normalized);
    let verses: Vec<VerseResult> = doc
        .verses
        .iter()
        .map(|verse| {
            let lines = verse.lines.iter().map(|l| identify_line(l, db, k)).collect();
            match mode {
                Mode::Verse => identify::verse_from_lines(lines, db),
                Mode::Line => VerseResult {
                    lines,
                    verse_meter: None,
                    verse_cost: None,
                    verse_matches: Vec::new(),
                },
            }
        })
        .collect();
    let stats = collect_stats(&verses);
    Ok(Report {
        mode,
        text: normalized,
        verses,
        stats,
    })
}
