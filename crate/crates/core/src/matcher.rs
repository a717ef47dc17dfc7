//! Meter matching: exact lookups with the pādānta-laghu fallback,
//! positional patterns, and top-k fuzzy matching by edit distance.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meterdb::{Index, MeterRef, MetricalDatabase, PadaLabel, PadaPattern};
use crate::prosody::{LgSignature, Syllable, Weight};

/// Number of fuzzy matches reported per line unless asked otherwise.
pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Replace,
    Insert,
    Delete,
}

/// One step of an edit script turning a query signature into a target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EditOp {
    pub kind: EditKind,
    /// Query position for replace/delete; for insert, the query position the
    /// new syllable goes in front of.
    pub src_index: usize,
    pub target_weight: Option<Weight>,
}

impl EditOp {
    fn replace(src_index: usize, w: Weight) -> Self {
        EditOp {
            kind: EditKind::Replace,
            src_index,
            target_weight: Some(w),
        }
    }

    fn insert(src_index: usize, w: Weight) -> Self {
        EditOp {
            kind: EditKind::Insert,
            src_index,
            target_weight: Some(w),
        }
    }

    fn delete(src_index: usize) -> Self {
        EditOp {
            kind: EditKind::Delete,
            src_index,
            target_weight: None,
        }
    }
}

/// Minimum edit cost from `query` to `target` and one script realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    pub cost: usize,
    pub ops: Vec<EditOp>,
}

/// Unit-cost edit distance where substituting into a position is free when
/// the position accepts the query weight.
///
/// The common prefix and suffix are matched first, then the remainder is
/// aligned by dynamic programming; the backtrace prefers replace, then
/// delete, then insert. The script is therefore deterministic.
pub fn transform(query: &[Weight], target: &PadaPattern) -> Transform {
    let t = &target.positions;
    let (m, n) = (query.len(), t.len());

    let mut prefix = 0;
    while prefix < m && prefix < n && t[prefix].accepts(query[prefix]) {
        prefix += 1;
    }
    let mut suffix = 0;
    while suffix < m - prefix && suffix < n - prefix && t[n - 1 - suffix].accepts(query[m - 1 - suffix]) {
        suffix += 1;
    }
    let q = &query[prefix..m - suffix];
    let t = &t[prefix..n - suffix];
    let (rows, cols) = (q.len() + 1, t.len() + 1);

    let mut dp = vec![0usize; rows * cols];
    let at = |i: usize, j: usize| i * cols + j;
    for i in 0..rows {
        dp[at(i, 0)] = i;
    }
    for j in 0..cols {
        dp[at(0, j)] = j;
    }
    for i in 1..rows {
        for j in 1..cols {
            let sub = usize::from(!t[j - 1].accepts(q[i - 1]));
            dp[at(i, j)] = (dp[at(i - 1, j - 1)] + sub)
                .min(dp[at(i - 1, j)] + 1)
                .min(dp[at(i, j - 1)] + 1);
        }
    }

    let mut ops = Vec::new();
    let (mut i, mut j) = (q.len(), t.len());
    while i > 0 || j > 0 {
        let here = dp[at(i, j)];
        if i > 0 && j > 0 {
            let sub = usize::from(!t[j - 1].accepts(q[i - 1]));
            if here == dp[at(i - 1, j - 1)] + sub {
                if sub == 1 {
                    ops.push(EditOp::replace(prefix + i - 1, t[j - 1].preferred_weight()));
                }
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == dp[at(i - 1, j)] + 1 {
            ops.push(EditOp::delete(prefix + i - 1));
            i -= 1;
        } else {
            ops.push(EditOp::insert(prefix + i, t[j - 1].preferred_weight()));
            j -= 1;
        }
    }
    ops.reverse();
    Transform {
        cost: dp[at(q.len(), t.len())],
        ops,
    }
}

/// Apply an edit script produced by [`transform`] to `query`.
pub fn apply_ops(query: &[Weight], ops: &[EditOp]) -> Vec<Weight> {
    let mut out = Vec::with_capacity(query.len() + ops.len());
    let mut ops = ops.iter().peekable();
    for i in 0..=query.len() {
        while let Some(op) = ops.next_if(|op| op.src_index == i && op.kind == EditKind::Insert) {
            out.extend(op.target_weight);
        }
        if i == query.len() {
            break;
        }
        match ops.next_if(|op| op.src_index == i) {
            Some(EditOp {
                kind: EditKind::Replace,
                target_weight,
                ..
            }) => out.extend(*target_weight),
            Some(EditOp {
                kind: EditKind::Delete, ..
            }) => {}
            _ => out.push(query[i]),
        }
    }
    out
}

/// `1 - cost / target_len`, floored at zero.
pub fn similarity(cost: usize, target_len: usize) -> Result<f64> {
    if target_len == 0 {
        return Err(Error::ZeroTargetLength);
    }
    Ok((1.0 - cost as f64 / target_len as f64).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchKind {
    Exact,
    Multiple,
    Pattern,
    Fuzzy,
}

/// One cell of a rendered suggestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Plain(String),
    Insert(Weight),
    Replace {
        syllable: String,
        weight: Weight,
        alt: Option<String>,
    },
    Delete(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Plain(s) => f.write_str(s),
            Cell::Insert(w) => write!(f, "i({w})"),
            Cell::Replace {
                syllable,
                weight,
                alt: Some(alt),
            } => write!(f, "r({syllable})[{weight}]{{{alt}}}"),
            Cell::Replace {
                syllable,
                weight,
                alt: None,
            } => write!(f, "r({syllable})[{weight}]"),
            Cell::Delete(s) => write!(f, "d({s})"),
        }
    }
}

/// The query's syllables annotated with the edits needed to reach a meter.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Suggestion {
    /// Each cell with the index of the word it belongs to.
    pub cells: Vec<(usize, Cell)>,
}

impl Suggestion {
    /// Cell texts grouped by word.
    pub fn grouped(&self) -> Vec<Vec<String>> {
        let mut groups: Vec<Vec<String>> = Vec::new();
        let mut current = None;
        for (word, cell) in &self.cells {
            if current != Some(*word) || groups.is_empty() {
                groups.push(Vec::new());
                current = Some(*word);
            }
            groups.last_mut().unwrap().push(cell.to_string());
        }
        groups
    }

    pub fn has_edits(&self) -> bool {
        self.cells.iter().any(|(_, c)| !matches!(c, Cell::Plain(_)))
    }
}

impl fmt::Display for Suggestion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (gi, group) in self.grouped().iter().enumerate() {
            if gi > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (ci, cell) in group.iter().enumerate() {
                if ci > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "'{cell}'")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Annotate `syllables` with the markers for `ops`.
pub fn render_suggestion(syllables: &[Syllable], ops: &[EditOp]) -> Suggestion {
    let word_at = |i: usize| syllables.get(i).or_else(|| syllables.last()).map_or(0, |s| s.word);
    let mut cells = Vec::with_capacity(syllables.len() + ops.len());
    let mut ops = ops.iter().peekable();
    for i in 0..=syllables.len() {
        while let Some(op) = ops.next_if(|op| op.src_index == i && op.kind == EditKind::Insert) {
            cells.push((word_at(i), Cell::Insert(op.target_weight.unwrap_or(Weight::Laghu))));
        }
        let Some(syl) = syllables.get(i) else { break };
        let cell = match ops.next_if(|op| op.src_index == i) {
            Some(op) if op.kind == EditKind::Replace => {
                let weight = op.target_weight.unwrap_or(Weight::Laghu);
                let alt = match (weight, syl.has_long_vowel()) {
                    (Weight::Guru, false) | (Weight::Laghu, true) => syl.toggled(),
                    _ => None,
                };
                Cell::Replace {
                    syllable: syl.display.clone(),
                    weight,
                    alt,
                }
            }
            Some(_) => Cell::Delete(syl.display.clone()),
            None => Cell::Plain(syl.display.clone()),
        };
        cells.push((syl.word, cell));
    }
    Suggestion { cells }
}

/// A meter found for a line.
#[derive(Debug, Clone, PartialEq)]
pub struct Match {
    /// IAST name of the meter.
    pub meter: String,
    /// Devanagari name of the meter.
    pub meter_devanagari: String,
    pub pada_label: Option<PadaLabel>,
    /// Number of pādas the line was matched as (2 for a merged line).
    pub span: usize,
    pub kind: MatchKind,
    pub cost: usize,
    pub similarity: f64,
    pub edit_ops: Vec<EditOp>,
    pub suggestion: Option<Suggestion>,
    /// The match needed the final laghu to be read as guru.
    pub padanta_fallback: bool,
}

impl Match {
    fn exact(db: &MetricalDatabase, r: &MeterRef, kind: MatchKind, span: usize, fallback: bool) -> Self {
        Match {
            meter: r.meter.clone(),
            meter_devanagari: devanagari_name(db, &r.meter),
            pada_label: r.label,
            span,
            kind,
            cost: 0,
            similarity: 1.0,
            edit_ops: Vec::new(),
            suggestion: None,
            padanta_fallback: fallback,
        }
    }

    /// Name with the pāda label, e.g. `Anuṣṭubh (Pāda 1)`.
    pub fn display_name(&self) -> String {
        match &self.pada_label {
            Some(label) => format!("{} ({})", self.meter, label),
            None => self.meter.clone(),
        }
    }

    pub fn display_name_devanagari(&self) -> String {
        match &self.pada_label {
            Some(label) => format!("{} ({})", self.meter_devanagari, label.devanagari()),
            None => self.meter_devanagari.clone(),
        }
    }
}

fn devanagari_name(db: &MetricalDatabase, meter: &str) -> String {
    db.meter(meter).map_or_else(|| meter.to_string(), |m| m.name.clone())
}

/// Exact lookup in one index, retrying with a final guru when nothing
/// matched and the line ends in laghu.
pub fn find_direct_match_in(sig: &LgSignature, db: &MetricalDatabase, which: Index) -> Vec<Match> {
    let (kind, span) = match which {
        Index::Single => (MatchKind::Exact, 1),
        Index::Multiple => (MatchKind::Multiple, 2),
    };
    let primary = db.lookup_exact(&sig.to_string(), which);
    if !primary.is_empty() {
        return primary.iter().map(|r| Match::exact(db, r, kind, span, false)).collect();
    }
    if sig.padanta_laghu {
        let fallback = sig.with_final_guru().to_string();
        return db
            .lookup_exact(&fallback, which)
            .iter()
            .map(|r| Match::exact(db, r, kind, span, true))
            .collect();
    }
    Vec::new()
}

/// Exact matches against both the single-pāda and merged-pāda indices.
pub fn find_direct_match(sig: &LgSignature, db: &MetricalDatabase) -> Vec<Match> {
    let mut out = find_direct_match_in(sig, db, Index::Single);
    out.extend(find_direct_match_in(sig, db, Index::Multiple));
    out
}

/// Matches against positional patterns, with the same final-guru retry.
pub fn find_pattern_match(sig: &LgSignature, db: &MetricalDatabase) -> Vec<Match> {
    let wrap = |text: &str, fallback: bool| -> Vec<Match> {
        db.lookup_pattern(text)
            .into_iter()
            .map(|e| Match::exact(db, &e.meter, MatchKind::Pattern, e.span, fallback))
            .collect()
    };
    let primary = wrap(&sig.to_string(), false);
    if primary.is_empty() && sig.padanta_laghu {
        return wrap(&sig.with_final_guru().to_string(), true);
    }
    primary
}

/// Cost of reading `sig` as `target`, taking the final-guru reading when it
/// is strictly cheaper. Returns the transform and whether the fallback was
/// used.
pub fn score(sig: &LgSignature, target: &PadaPattern) -> (Transform, bool) {
    let plain = transform(&sig.weights, target);
    if sig.padanta_laghu && plain.cost > 0 {
        let alt = transform(&sig.with_final_guru().weights, target);
        if alt.cost < plain.cost {
            return (alt, true);
        }
    }
    (plain, false)
}

/// Build a fuzzy match of `sig` against one pattern of `meter`.
pub fn fuzzy_candidate(
    sig: &LgSignature,
    syllables: &[Syllable],
    db: &MetricalDatabase,
    meter: &str,
    label: Option<PadaLabel>,
    span: usize,
    target: &PadaPattern,
) -> Match {
    let (t, fallback) = score(sig, target);
    let suggestion = render_suggestion(syllables, &t.ops);
    Match {
        meter: meter.to_string(),
        meter_devanagari: devanagari_name(db, meter),
        pada_label: label,
        span,
        kind: MatchKind::Fuzzy,
        cost: t.cost,
        similarity: similarity(t.cost, target.len()).unwrap_or(0.0),
        edit_ops: t.ops,
        suggestion: Some(suggestion),
        padanta_fallback: fallback,
    }
}

/// Ordering for fuzzy results: cost, then similarity (higher first), then
/// name.
pub fn fuzzy_order(a: &Match, b: &Match) -> Ordering {
    a.cost
        .cmp(&b.cost)
        .then_with(|| b.similarity.total_cmp(&a.similarity))
        .then_with(|| a.display_name().cmp(&b.display_name()))
}

/// The `k` per-pāda patterns nearest to `sig`.
pub fn find_fuzzy_match(sig: &LgSignature, syllables: &[Syllable], db: &MetricalDatabase, k: usize) -> Vec<Match> {
    let mut results: Vec<Match> = db
        .meters()
        .flat_map(|meter| (0..meter.pada_patterns.len()).map(move |i| (meter, i)))
        .filter(|(meter, i)| !meter.pattern_for(*i).is_empty())
        .map(|(meter, i)| {
            fuzzy_candidate(
                sig,
                syllables,
                db,
                &meter.name_latin,
                meter.label_for(i),
                1,
                meter.pattern_for(i),
            )
        })
        .collect();
    results.sort_by(fuzzy_order);
    results.truncate(k.max(1));
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prosody::{syllabify, weigh};

    fn pat(s: &str) -> PadaPattern {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Vec<Weight> {
        s.parse::<LgSignature>().unwrap().weights
    }

    #[test]
    fn transform_examples() {
        let t = transform(&w("LGGLGGLGGLLG"), &pat("LGGLGGLGGLGG"));
        assert_eq!(t.cost, 1);
        assert_eq!(t.ops, [EditOp::replace(10, Weight::Guru)]);

        let t = transform(&w("LGGLGG"), &pat("LGGLGG"));
        assert_eq!(t, Transform { cost: 0, ops: vec![] });

        assert_eq!(transform(&w(""), &pat("GG")).cost, 2);
        assert_eq!(transform(&w("LG"), &pat("")).cost, 2);
        assert_eq!(transform(&w("LLLL"), &pat("[LG][LG]G[LG]")).cost, 1);
    }

    #[test]
    fn scripts_follow_tie_order() {
        // merged word: delete the first of the two extra laghus, replace the second
        let t = transform(&w("GGGGLLLGGLGG"), &pat("GGGGGLGGLGG"));
        assert_eq!(t.cost, 2);
        assert_eq!(t.ops, [EditOp::delete(4), EditOp::replace(5, Weight::Guru)]);

        let t = transform(&w("GGGGLLLGGLGG"), &pat("GGGGLLGGLGG"));
        assert_eq!(t.ops, [EditOp::delete(6)]);

        let t = transform(&w("GLGG"), &pat("GGLGG"));
        assert_eq!(t.ops, [EditOp::insert(1, Weight::Guru)]);
    }

    #[test]
    fn apply_reaches_target() {
        for (q, p) in [
            ("GGGGLLLGGLGG", "GGGGGLGGLGG"),
            ("LGGLGGLGGLLG", "GLGGLGGLGGLG"),
            ("", "LG[LG]"),
            ("GGG", ""),
        ] {
            let t = transform(&w(q), &pat(p));
            let out = apply_ops(&w(q), &t.ops);
            assert!(pat(p).accepts(&out), "{q} -> {p}");
            assert_eq!(t.ops.len(), t.cost);
        }
    }

    #[test]
    fn similarity_values() {
        assert!((similarity(1, 12).unwrap() - 0.9167).abs() < 1e-4);
        assert!((similarity(2, 12).unwrap() - 0.8333).abs() < 1e-4);
        assert_eq!(similarity(0, 7).unwrap(), 1.0);
        assert_eq!(similarity(20, 7).unwrap(), 0.0);
        assert_eq!(similarity(1, 0), Err(Error::ZeroTargetLength));
    }

    #[test]
    fn renders_replace_with_vowel_hint() {
        let syl = syllabify("नमस्ते सदा वत्सले मातृभुमे").units;
        let t = transform(&weigh(&syl).weights, &pat("LGGLGGLGGLGG"));
        let s = render_suggestion(&syl, &t.ops);
        assert_eq!(
            s.to_string(),
            "[['न', 'म', 'स्ते'], ['स', 'दा'], ['व', 'त्स', 'ले'], ['मा', 'तृ', 'r(भु)[G]{भू}', 'मे']]"
        );
    }

    #[test]
    fn renders_plain_insert_and_delete() {
        let syl = syllabify("माता रामो").units;
        let s = render_suggestion(&syl, &[]);
        assert_eq!(s.to_string(), "[['मा', 'ता'], ['रा', 'मो']]");
        assert!(!s.has_edits());

        let s = render_suggestion(&syl, &[EditOp::insert(0, Weight::Guru), EditOp::delete(3)]);
        assert_eq!(s.to_string(), "[['i(G)', 'मा', 'ता'], ['रा', 'd(मो)']]");

        let s = render_suggestion(
            &syl,
            &[EditOp::replace(1, Weight::Laghu), EditOp::insert(4, Weight::Laghu)],
        );
        assert_eq!(s.to_string(), "[['मा', 'r(ता)[L]'], ['रा', 'मो', 'i(L)']]");
    }

    #[test]
    fn replace_hint_lengthens_short_vowel_only() {
        let syl = syllabify("कविः").units;
        // कविः is GG already; asking for laghu on वि: has no long vowel to shorten
        let s = render_suggestion(&syl, &[EditOp::replace(1, Weight::Laghu)]);
        assert_eq!(s.to_string(), "[['क', 'r(विः)[L]']]");
        let s = render_suggestion(&syl, &[EditOp::replace(1, Weight::Guru)]);
        assert_eq!(s.to_string(), "[['क', 'r(विः)[G]{वीः}']]");
    }
}
