use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::matcher::{Match, MatchKind};
use crate::pipeline::stats::Stats;
use crate::pipeline::{Mode, Report};
use crate::translit::Scheme;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Compact,
    Detailed,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "compact" => Ok(Format::Compact),
            "detailed" | "json" => Ok(Format::Detailed),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetailedMatch {
    pub name: String,
    pub kind: MatchKind,
    pub cost: usize,
    pub similarity: f64,
    pub suggestion_cells: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetailedLine {
    pub text: String,
    pub lg: String,
    pub gana: String,
    pub syllable_count: usize,
    pub matra_count: usize,
    pub syllables: Vec<String>,
    pub matches: Vec<DetailedMatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetailedVerse {
    pub lines: Vec<DetailedLine>,
    pub verse_meter: Option<String>,
    pub verse_cost: Option<usize>,
}

/// Machine-readable form of a [`Report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetailedReport {
    pub mode: Mode,
    pub scheme: Scheme,
    pub verses: Vec<DetailedVerse>,
    pub stats: Stats,
}

fn detailed_match(m: &Match) -> DetailedMatch {
    DetailedMatch {
        name: m.display_name(),
        kind: m.kind,
        cost: m.cost,
        similarity: m.similarity,
        suggestion_cells: m.suggestion.as_ref().map(|s| s.grouped()),
    }
}

impl DetailedReport {
    pub fn from_report(report: &Report) -> Self {
        let verses = report
            .verses
            .iter()
            .map(|verse| DetailedVerse {
                lines: verse
                    .lines
                    .iter()
                    .enumerate()
                    .map(|(i, line)| DetailedLine {
                        text: report.source_text(line),
                        lg: line.signature.to_string(),
                        gana: line.gana.to_string(),
                        syllable_count: line.syllable_count,
                        matra_count: line.matra_count,
                        syllables: line.syllables.iter().map(|s| s.display.clone()).collect(),
                        matches: verse.ranked_matches(i).into_iter().map(detailed_match).collect(),
                    })
                    .collect(),
                verse_meter: verse.verse_meter.clone(),
                verse_cost: verse.verse_cost,
            })
            .collect();
        DetailedReport {
            mode: report.mode,
            scheme: report.scheme(),
            verses,
            stats: report.stats.clone(),
        }
    }
}

fn meter_column(m: Option<&Match>) -> String {
    match m {
        None => "-".to_string(),
        Some(m) if m.kind == MatchKind::Fuzzy => {
            let unit = if m.cost == 1 { "edit" } else { "edits" };
            format!("{} ({} {unit})", m.display_name_devanagari(), m.cost)
        }
        Some(m) => m.display_name_devanagari(),
    }
}

/// One row per line: `text | lg | gaṇa | meter`, verses separated by a
/// blank line.
pub fn compact(report: &Report) -> String {
    let mut out = String::new();
    for (vi, verse) in report.verses.iter().enumerate() {
        if vi > 0 {
            out.push('\n');
        }
        for (i, line) in verse.lines.iter().enumerate() {
            let _ = writeln!(
                out,
                "{} | {} | {} | {}",
                report.source_text(line),
                line.signature,
                line.gana,
                meter_column(verse.effective_match(i)),
            );
        }
    }
    out
}

/// Serialize a report.
pub fn export(report: &Report, format: Format) -> String {
    match format {
        Format::Compact => compact(report),
        Format::Detailed => to_json(&DetailedReport::from_report(report)),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json(report: &DetailedReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Parse the detailed format back.
pub fn parse_detailed(text: &str) -> serde_json::Result<DetailedReport> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meterdb::MetricalDatabase;
    use crate::pipeline::analyze;

    #[test]
    fn compact_exact_row_has_no_cost() {
        let db = MetricalDatabase::starter();
        let r = analyze("नमस्ते सदा वत्सले मातृभूमे", None, Mode::Line, &db, 10).unwrap();
        assert_eq!(
            export(&r, Format::Compact),
            "नमस्ते सदा वत्सले मातृभूमे | LGGLGGLGGLGG | यययय | भुजङ्गप्रयात\n"
        );
    }

    #[test]
    fn compact_fuzzy_row_reports_edits() {
        let db = MetricalDatabase::starter();
        let r = analyze("नमस्ते सदा वत्सले मातृभुमे", None, Mode::Line, &db, 10).unwrap();
        let out = export(&r, Format::Compact);
        assert!(out.trim_end().ends_with("भुजङ्गप्रयात (1 edit)"), "{out}");
    }

    #[test]
    fn compact_uses_input_scheme() {
        let db = MetricalDatabase::starter();
        let r = analyze("namaste sadā vatsale mātṛbhūme", None, Mode::Line, &db, 10).unwrap();
        assert!(export(&r, Format::Compact).starts_with("namaste sadā vatsale mātṛbhūme | "));
    }

    #[test]
    fn detailed_round_trip() {
        let db = MetricalDatabase::starter();
        let r = analyze(
            "माता रामो मम पिता रामचन्द्रः।\nभ्राता रामो मत्सखा राघवेशः।",
            None,
            Mode::Verse,
            &db,
            3,
        )
        .unwrap();
        let text = export(&r, Format::Detailed);
        let parsed = parse_detailed(&text).unwrap();
        assert_eq!(parsed, DetailedReport::from_report(&r));
        assert_eq!(parsed.mode, Mode::Verse);
        assert_eq!(parsed.scheme, Scheme::Devanagari);
        assert_eq!(parsed.verses[0].verse_meter, r.verses[0].verse_meter);
        assert_eq!(parsed.verses[0].verse_cost, r.verses[0].verse_cost);
        let line = &parsed.verses[0].lines[1];
        assert_eq!(line.lg, r.verses[0].lines[1].signature.to_string());
        assert_eq!(line.syllable_count, 11);
        assert_eq!(parsed.stats, r.stats);
    }

    #[test]
    fn detailed_field_names() {
        let db = MetricalDatabase::starter();
        let r = analyze("नमस्ते सदा वत्सले मातृभुमे", None, Mode::Line, &db, 2).unwrap();
        let v: serde_json::Value = serde_json::from_str(&export(&r, Format::Detailed)).unwrap();
        for key in ["mode", "scheme", "verses", "stats"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let line = &v["verses"][0]["lines"][0];
        for key in ["text", "lg", "gana", "syllable_count", "matra_count", "matches"] {
            assert!(line.get(key).is_some(), "{key}");
        }
        let m = &line["matches"][0];
        for key in ["name", "kind", "cost", "similarity", "suggestion_cells"] {
            assert!(m.get(key).is_some(), "{key}");
        }
        assert_eq!(m["kind"], "fuzzy");
        assert_eq!(m["suggestion_cells"][3][2], "r(भु)[G]{भू}");
        assert!(v["verses"][0]["verse_meter"].is_null());
    }
}
