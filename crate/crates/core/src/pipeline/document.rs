use std::ops::Range;

use crate::translit::NormalizedText;

/// One line (pāda) of input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineRecord {
    /// Devanagari text, trimmed.
    pub text: String,
    /// Byte range of `text` in the normalized document.
    pub span: Range<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verse {
    pub lines: Vec<LineRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub verses: Vec<Verse>,
}

impl Document {
    pub fn lines(&self) -> impl Iterator<Item = &LineRecord> {
        self.verses.iter().flat_map(|v| v.lines.iter())
    }

    /// Lines joined by newlines, verses separated by a blank line.
    pub fn to_text(&self) -> String {
        self.verses
            .iter()
            .map(|v| v.lines.iter().map(|l| l.text.as_str()).collect::<Vec<_>>().join("\n"))
            .collect::<Vec<_>>()
            .join("\n\n")
    }
}

fn is_line_end(c: char) -> bool {
    matches!(c, '\n' | '।' | '॥' | '.')
}

/// Whether some whitespace-only line separates content.
fn has_blank_separator(text: &str) -> bool {
    let mut seen_content = false;
    let mut blank_pending = false;
    for line in text.split('\n') {
        if line.trim().is_empty() {
            blank_pending |= seen_content;
        } else {
            if blank_pending {
                return true;
            }
            seen_content = true;
        }
    }
    false
}

/// Split a document into verses and lines.
pub fn split_document(text: &NormalizedText) -> Document {
    split_text(&text.devanagari)
}

/// Split Devanagari text into verses and lines.
///
/// Lines end at `\n`, `।`, `॥` or `.`. Verses are separated by blank lines;
/// when the text has none, each `॥` closes a verse. Fragments without any
/// letter (verse numbers, stray punctuation) are dropped.
pub fn split_text(text: &str) -> Document {
    let by_blank = has_blank_separator(text);
    let mut doc = Document::default();
    let mut verse = Verse::default();
    let mut start = 0;
    let mut line_blank = true;

    let close_verse = |verse: &mut Verse, doc: &mut Document| {
        if !verse.lines.is_empty() {
            doc.verses.push(std::mem::take(verse));
        }
    };

    for (pos, c) in text.char_indices().chain(std::iter::once((text.len(), '\n'))) {
        if !is_line_end(c) {
            if !c.is_whitespace() {
                line_blank = false;
            }
            continue;
        }
        let fragment = &text[start..pos];
        let trimmed = fragment.trim();
        if trimmed.chars().any(char::is_alphabetic) {
            let offset = start + (fragment.len() - fragment.trim_start().len());
            verse.lines.push(LineRecord {
                text: trimmed.to_string(),
                span: offset..offset + trimmed.len(),
            });
        }
        start = pos + c.len_utf8();
        match c {
            '\n' => {
                if line_blank && by_blank {
                    close_verse(&mut verse, &mut doc);
                }
                line_blank = true;
            }
            '॥' if !by_blank => close_verse(&mut verse, &mut doc),
            _ => {}
        }
    }
    close_verse(&mut verse, &mut doc);
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(doc: &Document) -> Vec<Vec<&str>> {
        doc.verses
            .iter()
            .map(|v| v.lines.iter().map(|l| l.text.as_str()).collect())
            .collect()
    }

    #[test]
    fn splits_on_markers_and_blank_lines() {
        let doc = split_text("क।ख॥\n\nग");
        assert_eq!(shape(&doc), [vec!["क", "ख"], vec!["ग"]]);
    }

    #[test]
    fn single_line() {
        assert_eq!(shape(&split_text("राम")), [vec!["राम"]]);
        assert!(split_text("").verses.is_empty());
        assert!(split_text(" \n\n ").verses.is_empty());
    }

    #[test]
    fn double_danda_closes_verse_without_blank_lines() {
        let doc = split_text("क ख।\nग घ॥\nच।छ॥");
        assert_eq!(shape(&doc), [vec!["क ख", "ग घ"], vec!["च", "छ"]]);
        let doc = split_text("क।ख।ग।घ");
        assert_eq!(shape(&doc), [vec!["क", "ख", "ग", "घ"]]);
    }

    #[test]
    fn blank_lines_take_precedence_over_double_danda() {
        let doc = split_text("क॥ ख॥\n\nग॥");
        assert_eq!(shape(&doc), [vec!["क", "ख"], vec!["ग"]]);
    }

    #[test]
    fn verse_numbers_are_dropped() {
        let doc = split_text("क।ख॥१॥\nग।घ॥२॥");
        assert_eq!(shape(&doc), [vec!["क", "ख"], vec!["ग", "घ"]]);
    }

    #[test]
    fn spans_point_into_source() {
        let text = "  नमस्ते सदा ।\n  वत्सले. ";
        let doc = split_text(text);
        for line in doc.lines() {
            assert_eq!(&text[line.span.clone()], line.text);
        }
    }

    #[test]
    fn idempotent_on_serialized_output() {
        for text in ["क।ख॥\n\nग", "क।ख॥ग।घ॥", "क ख ग", "क\n\n\nख\nग"] {
            let once = split_text(text);
            let twice = split_text(&once.to_text());
            assert_eq!(shape(&once), shape(&twice), "{text:?}");
        }
    }
}
