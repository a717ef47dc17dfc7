use std::collections::BTreeSet;

use crate::matcher::{find_direct_match, find_fuzzy_match, find_pattern_match, fuzzy_candidate, Match, MatchKind};
use crate::meterdb::{MeterDef, MetricalDatabase};
use crate::pipeline::document::LineRecord;
use crate::prosody::{matra_count, syllabify, to_gana, weigh, GanaSignature, LgSignature, Syllable, UnknownCharacter};

#[derive(Debug, Clone, PartialEq)]
pub struct LineResult {
    pub record: LineRecord,
    pub syllables: Vec<Syllable>,
    pub signature: LgSignature,
    pub gana: GanaSignature,
    pub syllable_count: usize,
    pub matra_count: usize,
    /// Exact and merged-pāda hits, then positional-pattern hits.
    pub direct: Vec<Match>,
    /// Only computed when `direct` is empty.
    pub fuzzy: Vec<Match>,
    pub chosen: Option<Match>,
    pub warnings: Vec<UnknownCharacter>,
}

impl LineResult {
    /// Every match in report order.
    pub fn matches(&self) -> impl Iterator<Item = &Match> {
        self.direct.iter().chain(self.fuzzy.iter())
    }

    /// Number of pādas this line stands for.
    fn span(&self) -> usize {
        self.chosen
            .as_ref()
            .filter(|m| m.kind != MatchKind::Fuzzy)
            .map_or(1, |m| m.span)
    }
}

/// Scan and identify one line.
pub fn identify_line(record: &LineRecord, db: &MetricalDatabase, k: usize) -> LineResult {
    let seg = syllabify(&record.text);
    let syllables = seg.units;
    let signature = weigh(&syllables);

    let mut direct = Vec::new();
    let mut fuzzy = Vec::new();
    if !syllables.is_empty() {
        direct = find_direct_match(&signature, db);
        direct.extend(find_pattern_match(&signature, db));
        if direct.is_empty() {
            fuzzy = find_fuzzy_match(&signature, &syllables, db, k);
        }
    }
    let chosen = direct.iter().min_by_key(|m| m.kind).or_else(|| fuzzy.first()).cloned();

    LineResult {
        record: record.clone(),
        gana: to_gana(&signature),
        syllable_count: syllables.len(),
        matra_count: matra_count(&signature),
        syllables,
        signature,
        direct,
        fuzzy,
        chosen,
        warnings: seg.warnings,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerseResult {
    pub lines: Vec<LineResult>,
    /// IAST name of the meter with the least cumulative cost.
    pub verse_meter: Option<String>,
    pub verse_cost: Option<usize>,
    /// Per line: the verse meter's match, listed first when reporting.
    /// `None` for lines without syllables.
    pub verse_matches: Vec<Option<Match>>,
}

impl VerseResult {
    /// Per-line costs under the verse meter.
    pub fn pada_costs(&self) -> Vec<usize> {
        self.verse_matches
            .iter()
            .map(|m| m.as_ref().map_or(0, |m| m.cost))
            .collect()
    }

    /// Matches for line `i` with the verse meter first.
    pub fn ranked_matches(&self, i: usize) -> Vec<&Match> {
        let line = &self.lines[i];
        match self.verse_matches.get(i).and_then(Option::as_ref) {
            Some(top) => std::iter::once(top)
                .chain(line.matches().filter(|m| m.meter != top.meter))
                .collect(),
            None => line.matches().collect(),
        }
    }

    /// The match that decides line `i`'s meter.
    pub fn effective_match(&self, i: usize) -> Option<&Match> {
        if self.verse_meter.is_some() {
            self.verse_matches.get(i).and_then(Option::as_ref)
        } else {
            self.lines[i].chosen.as_ref()
        }
    }
}

/// Score every line against `meter`, pāda by pāda.
fn score_verse(lines: &[LineResult], meter: &MeterDef, db: &MetricalDatabase) -> Vec<Option<Match>> {
    let mut index = 0;
    lines
        .iter()
        .map(|line| {
            if line.syllables.is_empty() {
                return None;
            }
            let span = line.span();
            let (target, label) = if span == 2 {
                (meter.pair_pattern_for(index), meter.pair_label_for(index))
            } else {
                (meter.pattern_for(index).clone(), meter.label_for(index))
            };
            index += span;
            let mut m = fuzzy_candidate(
                &line.signature,
                &line.syllables,
                db,
                &meter.name_latin,
                label,
                span,
                &target,
            );
            if m.cost == 0 {
                m.kind = line.direct.iter().find(|d| d.meter == meter.name_latin).map_or(
                    if target.is_fixed() {
                        MatchKind::Exact
                    } else {
                        MatchKind::Pattern
                    },
                    |d| d.kind,
                );
                m.suggestion = None;
            }
            Some(m)
        })
        .collect()
}

/// Identify a verse: each line on its own, then the meter minimizing the
/// summed cost over all lines.
pub fn identify_verse(lines: &[LineRecord], db: &MetricalDatabase, k: usize) -> VerseResult {
    let lines: Vec<LineResult> = lines.iter().map(|l| identify_line(l, db, k)).collect();
    verse_from_lines(lines, db)
}

pub(crate) fn verse_from_lines(lines: Vec<LineResult>, db: &MetricalDatabase) -> VerseResult {
    let pool: BTreeSet<&str> = lines
        .iter()
        .flat_map(|l| l.matches())
        .map(|m| m.meter.as_str())
        .collect();

    let best = pool
        .into_iter()
        .filter_map(|name| db.meter(name))
        .map(|meter| {
            let matches = score_verse(&lines, meter, db);
            let total: usize = matches.iter().flatten().map(|m| m.cost).sum();
            (total, meter.name_latin.clone(), matches)
        })
        .min_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    match best {
        Some((cost, name, matches)) => VerseResult {
            lines,
            verse_meter: Some(name),
            verse_cost: Some(cost),
            verse_matches: matches,
        },
        None => VerseResult {
            lines,
            verse_meter: None,
            verse_cost: None,
            verse_matches: Vec::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::document::split_text;

    fn record(text: &str) -> LineRecord {
        LineRecord {
            text: text.to_string(),
            span: 0..text.len(),
        }
    }

    #[test]
    fn exact_line_skips_fuzzy() {
        let db = MetricalDatabase::starter();
        let r = identify_line(&record("नमस्ते सदा वत्सले मातृभूमे"), &db, 10);
        assert_eq!(r.signature.to_string(), "LGGLGGLGGLGG");
        let chosen = r.chosen.unwrap();
        assert_eq!(
            (chosen.meter.as_str(), chosen.kind),
            ("Bhujāṅgaprayāta", MatchKind::Exact)
        );
        assert!(r.fuzzy.is_empty());
        assert_eq!(r.gana.to_string(), "यययय");
        assert_eq!((r.syllable_count, r.matra_count), (12, 20));
    }

    #[test]
    fn erroneous_line_gets_fuzzy() {
        let db = MetricalDatabase::starter();
        let r = identify_line(&record("नमस्ते सदा वत्सले मातृभुमे"), &db, 10);
        assert!(r.direct.is_empty());
        assert_eq!(r.fuzzy.len(), 10);
        let chosen = r.chosen.unwrap();
        assert_eq!((chosen.meter.as_str(), chosen.cost), ("Bhujāṅgaprayāta", 1));
    }

    #[test]
    fn digits_only_line_is_unidentified() {
        let db = MetricalDatabase::starter();
        let r = identify_line(&record("१२३"), &db, 10);
        assert!(r.chosen.is_none());
        assert!(r.direct.is_empty() && r.fuzzy.is_empty());
        assert_eq!(r.syllable_count, 0);
    }

    #[test]
    fn merged_padas_use_multiple_index() {
        let db = MetricalDatabase::starter();
        let r = identify_line(&record("नमस्ते सदा वत्सले मातृभूमे त्वया हिन्दुभूमे सुखं वर्धितोऽहम्"), &db, 10);
        let chosen = r.chosen.unwrap();
        assert_eq!(chosen.kind, MatchKind::Multiple);
        assert_eq!(chosen.span, 2);
    }

    #[test]
    fn exact_verse_has_zero_cost() {
        let db = MetricalDatabase::starter();
        let doc = split_text(
            "भ्राता रामो मत्सखा राघवेशः\nसर्वस्वं मे रामचन्द्रो दयालुः\nनान्यं जाने नैव जाने न जाने\nभ्राता रामो मत्सखा राघवेशः",
        );
        let v = identify_verse(&doc.verses[0].lines, &db, 10);
        assert_eq!(v.verse_meter.as_deref(), Some("Śālinī"));
        assert_eq!(v.verse_cost, Some(0));
        assert!(v.verse_matches.iter().flatten().all(|m| m.kind == MatchKind::Exact));
        assert_eq!(v.verse_matches.len(), 4);
    }

    #[test]
    fn syllable_less_lines_are_skipped() {
        let db = MetricalDatabase::starter();
        let v = identify_verse(&[record("नमस्ते सदा वत्सले मातृभूमे"), record("xyz")], &db, 10);
        assert_eq!(v.verse_cost, Some(0));
        assert!(v.verse_matches[1].is_none());
        assert!(v.effective_match(1).is_none());
    }

    #[test]
    fn empty_verse_has_no_meter() {
        let db = MetricalDatabase::starter();
        let v = identify_verse(&[record("१२")], &db, 10);
        assert!(v.verse_meter.is_none());
        assert!(v.verse_cost.is_none());
    }
}
