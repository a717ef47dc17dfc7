use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::matcher::MatchKind;
use crate::pipeline::identify::VerseResult;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeterCount {
    pub exact: usize,
    pub fuzzy: usize,
}

/// Corpus-level counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub lines_total: usize,
    pub lines_exact: usize,
    pub lines_fuzzy: usize,
    pub lines_unidentified: usize,
    /// Lines per meter, keyed by IAST name.
    pub histogram: BTreeMap<String, MeterCount>,
}

impl Stats {
    /// `lines_exact + lines_fuzzy + lines_unidentified == lines_total`
    pub fn is_conserved(&self) -> bool {
        self.lines_exact + self.lines_fuzzy + self.lines_unidentified == self.lines_total
    }

    /// Comment-style footer for the compact format.
    pub fn to_compact(&self) -> String {
        let mut out = format!(
            "# lines: {} total, {} exact, {} fuzzy, {} unidentified\n",
            self.lines_total, self.lines_exact, self.lines_fuzzy, self.lines_unidentified
        );
        for (name, count) in &self.histogram {
            let _ = writeln!(out, "# {name}: {} exact, {} fuzzy", count.exact, count.fuzzy);
        }
        out
    }
}

/// Count lines by how they were identified. In verse mode a line counts
/// under the verse meter.
pub fn collect_stats(results: &[VerseResult]) -> Stats {
    let mut stats = Stats::default();
    for verse in results {
        for i in 0..verse.lines.len() {
            stats.lines_total += 1;
            match verse.effective_match(i) {
                None => stats.lines_unidentified += 1,
                Some(m) => {
                    let entry = stats.histogram.entry(m.meter.clone()).or_default();
                    if m.kind == MatchKind::Fuzzy {
                        stats.lines_fuzzy += 1;
                        entry.fuzzy += 1;
                    } else {
                        stats.lines_exact += 1;
                        entry.exact += 1;
                    }
                }
            }
        }
    }
    stats
}
