//! The metrical database: meter definitions and their lookup indices.
//!
//! Definitions are read from a tab-separated file with four columns:
//!
//! ```text
//! # name        name (IAST)        pāda patterns                                kind
//! भुजङ्गप्रयात    Bhujāṅgaprayāta    यययय                                         Varṇavṛtta
//! अनुष्टुभ्       Anuṣṭubh           [LG][LG][LG][LG]LG[LG][LG];[LG][LG][LG][LG]LGL[LG]   Varṇavṛtta
//! ```
//!
//! The third column is a `;`-separated list of per-pāda patterns, each a
//! gaṇa formula or an L/G string where `[LG]` leaves a position free.
//! Patterns are cycled over the pādas of a verse.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prosody::{from_gana, to_gana, GanaSignature, LgSignature, Weight};

/// The database shipped with the crate.
pub const STARTER_DATABASE: &str = include_str!("../data/meters.tsv");

/// Environment variable naming a definition file to use instead of the
/// shipped one.
pub const DATABASE_ENV: &str = "CHANDA_DB";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Position {
    Laghu,
    Guru,
    Either,
}

impl Position {
    pub fn accepts(self, w: Weight) -> bool {
        match self {
            Position::Laghu => w == Weight::Laghu,
            Position::Guru => w == Weight::Guru,
            Position::Either => true,
        }
    }

    /// The weight to use when a syllable has to be supplied here.
    pub fn preferred_weight(self) -> Weight {
        match self {
            Position::Guru => Weight::Guru,
            Position::Laghu | Position::Either => Weight::Laghu,
        }
    }
}

impl From<Weight> for Position {
    fn from(w: Weight) -> Self {
        match w {
            Weight::Laghu => Position::Laghu,
            Weight::Guru => Position::Guru,
        }
    }
}

/// The constraint on one pāda.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadaPattern {
    pub positions: Vec<Position>,
}

impl PadaPattern {
    pub fn from_signature(sig: &LgSignature) -> Self {
        PadaPattern {
            positions: sig.weights.iter().map(|&w| w.into()).collect(),
        }
    }

    pub fn is_fixed(&self) -> bool {
        !self.positions.contains(&Position::Either)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn accepts(&self, weights: &[Weight]) -> bool {
        weights.len() == self.positions.len() && self.positions.iter().zip(weights).all(|(p, &w)| p.accepts(w))
    }

    pub fn concat(&self, other: &PadaPattern) -> PadaPattern {
        let mut positions = self.positions.clone();
        positions.extend_from_slice(&other.positions);
        PadaPattern { positions }
    }

    /// The signature for a fixed pattern.
    pub fn signature(&self) -> Option<LgSignature> {
        self.positions
            .iter()
            .map(|p| match p {
                Position::Laghu => Some(Weight::Laghu),
                Position::Guru => Some(Weight::Guru),
                Position::Either => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(LgSignature::new)
    }
}

impl fmt::Display for PadaPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.positions {
            f.write_str(match p {
                Position::Laghu => "L",
                Position::Guru => "G",
                Position::Either => "[LG]",
            })?;
        }
        Ok(())
    }
}

impl FromStr for PadaPattern {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut positions = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix("[LG]").or_else(|| rest.strip_prefix("[GL]")) {
                positions.push(Position::Either);
                rest = r;
            } else if let Some(r) = rest.strip_prefix('L') {
                positions.push(Position::Laghu);
                rest = r;
            } else if let Some(r) = rest.strip_prefix('G') {
                positions.push(Position::Guru);
                rest = r;
            } else {
                return Err(format!("invalid pattern `{s}`"));
            }
        }
        Ok(PadaPattern { positions })
    }
}

/// Which pāda(s) of a verse a pattern stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PadaLabel {
    /// 1-based pattern number.
    pub first: usize,
    /// Set for two merged pādas.
    pub second: Option<usize>,
}

impl PadaLabel {
    pub fn devanagari(&self) -> String {
        match self.second {
            Some(s) => format!("पाद {}-{}", self.first, s),
            None => format!("पाद {}", self.first),
        }
    }
}

impl fmt::Display for PadaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.second {
            Some(s) => write!(f, "Pāda {}-{}", self.first, s),
            None => write!(f, "Pāda {}", self.first),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeterKind {
    Varnavrtta,
}

impl FromStr for MeterKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "Varṇavṛtta" | "वर्णवृत्त" => Ok(MeterKind::Varnavrtta),
            other if other.eq_ignore_ascii_case("varnavrtta") => Ok(MeterKind::Varnavrtta),
            other => Err(format!("unsupported meter kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeterDef {
    /// Devanagari name.
    pub name: String,
    /// IAST name; used as the meter's identifier.
    pub name_latin: String,
    pub pada_patterns: Vec<PadaPattern>,
    /// Gaṇa formula of each pattern, where the definition gave one.
    pub gana_formulas: Vec<Option<GanaSignature>>,
    pub kind: MeterKind,
}

impl MeterDef {
    /// Pattern for the `index`-th pāda of a verse.
    pub fn pattern_for(&self, index: usize) -> &PadaPattern {
        &self.pada_patterns[index % self.pada_patterns.len()]
    }

    pub fn label_for(&self, index: usize) -> Option<PadaLabel> {
        let n = self.pada_patterns.len();
        (n > 1).then(|| PadaLabel {
            first: index % n + 1,
            second: None,
        })
    }

    /// Pattern for pādas `index` and `index + 1` written as one line.
    pub fn pair_pattern_for(&self, index: usize) -> PadaPattern {
        self.pattern_for(index).concat(self.pattern_for(index + 1))
    }

    pub fn pair_label_for(&self, index: usize) -> Option<PadaLabel> {
        let n = self.pada_patterns.len();
        (n > 1).then(|| PadaLabel {
            first: index % n + 1,
            second: Some((index + 1) % n + 1),
        })
    }

    pub fn gana_formula(&self) -> Option<&GanaSignature> {
        self.gana_formulas.first().and_then(Option::as_ref)
    }
}

/// A meter name, with the pāda(s) when the meter has several patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeterRef {
    pub meter: String,
    pub label: Option<PadaLabel>,
}

impl fmt::Display for MeterRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(label) => write!(f, "{} ({})", self.meter, label),
            None => f.write_str(&self.meter),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternEntry {
    pub pattern: PadaPattern,
    pub meter: MeterRef,
    /// 1 for a single pāda, 2 for two merged pādas.
    pub span: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index {
    Single,
    Multiple,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricalDatabase {
    single: BTreeMap<String, Vec<MeterRef>>,
    multiple: BTreeMap<String, Vec<MeterRef>>,
    patterns: Vec<PatternEntry>,
    meters: BTreeMap<String, MeterDef>,
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_pada_spec(spec: &str, line: usize) -> Result<(PadaPattern, Option<GanaSignature>)> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(parse_error(line, "empty pāda pattern"));
    }
    if spec.chars().all(|c| matches!(c, 'L' | 'G' | '[' | ']')) {
        let pattern = spec.parse::<PadaPattern>().map_err(|e| parse_error(line, e))?;
        return Ok((pattern, None));
    }
    let sig = from_gana(spec).map_err(|e| parse_error(line, e.to_string()))?;
    let gana = to_gana(&sig);
    if gana.to_string() != spec {
        return Err(Error::InvalidGanaFormula {
            line,
            formula: spec.to_string(),
        });
    }
    Ok((PadaPattern::from_signature(&sig), Some(gana)))
}

impl MetricalDatabase {
    /// Parse a definition file and build the lookup indices.
    pub fn load(source: &str) -> Result<Self> {
        let mut db = MetricalDatabase::default();
        let mut devanagari_names = std::collections::BTreeSet::new();
        for (i, raw) in source.lines().enumerate() {
            let line = i + 1;
            let text = raw.trim_end_matches('\r');
            if text.trim().is_empty() || text.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
            let [name, name_latin, spec, kind] = fields[..] else {
                return Err(parse_error(
                    line,
                    format!("expected 4 tab-separated fields, found {}", fields.len()),
                ));
            };
            if name.is_empty() || name_latin.is_empty() {
                return Err(parse_error(line, "missing meter name"));
            }
            let kind = kind.parse::<MeterKind>().map_err(|e| parse_error(line, e))?;
            let mut pada_patterns = Vec::new();
            let mut gana_formulas = Vec::new();
            for part in spec.split(';') {
                let (pattern, gana) = parse_pada_spec(part, line)?;
                pada_patterns.push(pattern);
                gana_formulas.push(gana);
            }
            if db.meters.contains_key(name_latin) || !devanagari_names.insert(name.to_string()) {
                return Err(Error::DuplicateMeterName(name_latin.to_string()));
            }
            db.meters.insert(
                name_latin.to_string(),
                MeterDef {
                    name: name.to_string(),
                    name_latin: name_latin.to_string(),
                    pada_patterns,
                    gana_formulas,
                    kind,
                },
            );
        }
        db.build_indices();
        Ok(db)
    }

    /// The database shipped with the crate.
    pub fn starter() -> Self {
        Self::load(STARTER_DATABASE).expect("shipped meter database is valid")
    }

    fn build_indices(&mut self) {
        for meter in self.meters.values() {
            let n = meter.pada_patterns.len();
            for i in 0..n {
                let single = MeterRef {
                    meter: meter.name_latin.clone(),
                    label: meter.label_for(i),
                };
                let pattern = meter.pattern_for(i);
                if pattern.is_fixed() {
                    self.single.entry(pattern.to_string()).or_default().push(single);
                } else {
                    self.patterns.push(PatternEntry {
                        pattern: pattern.clone(),
                        meter: single,
                        span: 1,
                    });
                }

                let pair = MeterRef {
                    meter: meter.name_latin.clone(),
                    label: meter.pair_label_for(i),
                };
                let pattern = meter.pair_pattern_for(i);
                if pattern.is_fixed() {
                    self.multiple.entry(pattern.to_string()).or_default().push(pair);
                } else {
                    self.patterns.push(PatternEntry {
                        pattern,
                        meter: pair,
                        span: 2,
                    });
                }
            }
        }
        for names in self.single.values_mut().chain(self.multiple.values_mut()) {
            names.sort();
            names.dedup();
        }
        self.patterns
            .sort_by(|a, b| (&a.meter, a.span).cmp(&(&b.meter, b.span)));
        self.patterns.dedup();
    }

    pub fn lookup_exact(&self, sig: &str, which: Index) -> &[MeterRef] {
        let index = match which {
            Index::Single => &self.single,
            Index::Multiple => &self.multiple,
        };
        index.get(sig).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Positional patterns of the same length as `sig` that accept it.
    pub fn lookup_pattern(&self, sig: &str) -> Vec<&PatternEntry> {
        let Ok(sig) = sig.parse::<LgSignature>() else {
            return Vec::new();
        };
        self.patterns
            .iter()
            .filter(|e| e.pattern.accepts(&sig.weights))
            .collect()
    }

    pub fn meter(&self, name_latin: &str) -> Option<&MeterDef> {
        self.meters.get(name_latin)
    }

    /// All meters, ordered by IAST name.
    pub fn meters(&self) -> impl Iterator<Item = &MeterDef> {
        self.meters.values()
    }

    pub fn len(&self) -> usize {
        self.meters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meters.is_empty()
    }

    pub fn single_index(&self) -> &BTreeMap<String, Vec<MeterRef>> {
        &self.single
    }

    pub fn multiple_index(&self) -> &BTreeMap<String, Vec<MeterRef>> {
        &self.multiple
    }

    pub fn patterns(&self) -> &[PatternEntry] {
        &self.patterns
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BHUJANGA: &str = "भुजङ्गप्रयात\tBhujāṅgaprayāta\tयययय\tVarṇavṛtta\n";
    const ANUSHTUBH: &str = "अनुष्टुभ्\tAnuṣṭubh\t[LG][LG][LG][LG]LG[LG][LG];[LG][LG][LG][LG]LGL[LG]\tVarṇavṛtta\n";

    fn names(refs: &[MeterRef]) -> Vec<String> {
        refs.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn loads_single_row() {
        let db = MetricalDatabase::load(BHUJANGA).unwrap();
        assert_eq!(
            names(db.lookup_exact("LGGLGGLGGLGG", Index::Single)),
            ["Bhujāṅgaprayāta"]
        );
        assert_eq!(
            names(db.lookup_exact("LGGLGGLGGLGGLGGLGGLGGLGG", Index::Multiple)),
            ["Bhujāṅgaprayāta"]
        );
        assert!(db.lookup_exact("LLLL", Index::Single).is_empty());
        let meter = db.meter("Bhujāṅgaprayāta").unwrap();
        assert_eq!(meter.gana_formula().unwrap().to_string(), "यययय");
    }

    #[test]
    fn loads_positional_patterns() {
        let db = MetricalDatabase::load(ANUSHTUBH).unwrap();
        let singles: Vec<(String, String)> = db
            .patterns()
            .iter()
            .filter(|e| e.span == 1)
            .map(|e| (e.pattern.to_string(), e.meter.to_string()))
            .collect();
        assert_eq!(
            singles,
            [
                (
                    "[LG][LG][LG][LG]LG[LG][LG]".to_string(),
                    "Anuṣṭubh (Pāda 1)".to_string()
                ),
                ("[LG][LG][LG][LG]LGL[LG]".to_string(), "Anuṣṭubh (Pāda 2)".to_string()),
            ]
        );
        assert!(db.single_index().is_empty());
    }

    #[test]
    fn empty_source() {
        let db = MetricalDatabase::load("").unwrap();
        assert!(db.is_empty());
        let db = MetricalDatabase::load("# only a comment\n\n").unwrap();
        assert!(db.is_empty());
    }

    #[test]
    fn pattern_lookup() {
        let db = MetricalDatabase::load(ANUSHTUBH).unwrap();
        let hits = |s: &str| -> Vec<String> { db.lookup_pattern(s).iter().map(|e| e.meter.to_string()).collect() };
        assert_eq!(hits("GGLLLGLG"), ["Anuṣṭubh (Pāda 1)", "Anuṣṭubh (Pāda 2)"]);
        assert_eq!(hits("GGLLLGGG"), ["Anuṣṭubh (Pāda 1)"]);
        assert!(hits("GGLLGLLG").is_empty());
        assert!(hits("GGLLLGL").is_empty());
        assert_eq!(hits("GGLLLGGGGGLLLGLG"), ["Anuṣṭubh (Pāda 1-2)"]);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            MetricalDatabase::load("a\tb\tयययय\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            MetricalDatabase::load("# c\nक\tKa\tयकय\tVarṇavṛtta\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            MetricalDatabase::load("क\tKa\tLGX\tVarṇavṛtta\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            MetricalDatabase::load("क\tKa\tयय\tMātrāvṛtta\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(
            MetricalDatabase::load("क\tKa\tलय\tVarṇavṛtta\n"),
            Err(Error::InvalidGanaFormula {
                line: 1,
                formula: "लय".into()
            })
        );
        assert_eq!(
            MetricalDatabase::load(&format!("{BHUJANGA}{BHUJANGA}")),
            Err(Error::DuplicateMeterName("Bhujāṅgaprayāta".into()))
        );
    }

    #[test]
    fn shared_signatures_accumulate() {
        let src = "क\tKa\tLGL\tVarṇavṛtta\nख\tKha\tजल;जल\tVarṇavṛtta\n";
        let db = MetricalDatabase::load(src).unwrap();
        assert_eq!(names(db.lookup_exact("LGL", Index::Single)), ["Ka"]);
        assert_eq!(
            names(db.lookup_exact("LGLL", Index::Single)),
            ["Kha (Pāda 1)", "Kha (Pāda 2)"]
        );
        assert_eq!(
            names(db.lookup_exact("LGLLLGLL", Index::Multiple)),
            ["Kha (Pāda 1-2)", "Kha (Pāda 2-1)"]
        );
    }

    #[test]
    fn starter_database_covers_named_meters() {
        let db = MetricalDatabase::starter();
        assert!(db.len() >= 20);
        for name in [
            "Anuṣṭubh",
            "Bhujāṅgaprayāta",
            "Śālinī",
            "Vātorṃī",
            "Mandākrāntā",
            "Pañcacāmara",
            "Sragviṇī",
            "Indravaṃśā",
            "Praharṣiṇī",
        ] {
            assert!(db.meter(name).is_some(), "{name} missing");
        }
    }
}
