//! Transliteration between Devanagari and the romanized schemes IAST,
//! Harvard-Kyoto and SLP1.
//!
//! All downstream processing works on composition-normalized Devanagari.
//! Roman input is tokenized longest-match-first; anything outside a
//! scheme's inventory is copied through unchanged and its location is
//! remembered in [`NormalizedText::passthrough`].

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

const VIRAMA: char = '\u{094D}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "devanagari")]
    Devanagari,
    #[serde(rename = "iast")]
    Iast,
    #[serde(rename = "hk")]
    HarvardKyoto,
    #[serde(rename = "slp1")]
    Slp1,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Devanagari, Scheme::Iast, Scheme::HarvardKyoto, Scheme::Slp1];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Devanagari => "devanagari",
            Scheme::Iast => "iast",
            Scheme::HarvardKyoto => "hk",
            Scheme::Slp1 => "slp1",
        }
    }

    /// Column of this scheme in the roman tables.
    fn column(self) -> Option<usize> {
        match self {
            Scheme::Devanagari => None,
            Scheme::Iast => Some(0),
            Scheme::HarvardKyoto => Some(1),
            Scheme::Slp1 => Some(2),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "devanagari" | "deva" => Ok(Scheme::Devanagari),
            "iast" => Ok(Scheme::Iast),
            "hk" | "harvardkyoto" | "harvard-kyoto" | "kyoto-harvard" => Ok(Scheme::HarvardKyoto),
            "slp1" | "slp" => Ok(Scheme::Slp1),
            _ => Err(Error::UnknownScheme(s.to_string())),
        }
    }
}

/// Input text resolved to canonical Devanagari.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedText {
    pub devanagari: String,
    pub source_scheme: Scheme,
    pub original: String,
    /// Byte ranges of `devanagari` that were copied verbatim because the
    /// source scheme has no mapping for them.
    pub passthrough: Vec<Range<usize>>,
}

// (independent, vowel sign, [IAST, HK, SLP1])
const VOWELS: &[(char, Option<char>, [&str; 3])] = &[
    ('अ', None, ["a", "a", "a"]),
    ('आ', Some('ा'), ["ā", "A", "A"]),
    ('इ', Some('ि'), ["i", "i", "i"]),
    ('ई', Some('ी'), ["ī", "I", "I"]),
    ('उ', Some('ु'), ["u", "u", "u"]),
    ('ऊ', Some('ू'), ["ū", "U", "U"]),
    ('ऋ', Some('ृ'), ["ṛ", "R", "f"]),
    ('ॠ', Some('ॄ'), ["ṝ", "RR", "F"]),
    ('ऌ', Some('ॢ'), ["ḷ", "lR", "x"]),
    ('ॡ', Some('ॣ'), ["ḹ", "lRR", "X"]),
    ('ए', Some('े'), ["e", "e", "e"]),
    ('ऐ', Some('ै'), ["ai", "ai", "E"]),
    ('ओ', Some('ो'), ["o", "o", "o"]),
    ('औ', Some('ौ'), ["au", "au", "O"]),
];

const CONSONANTS: &[(char, [&str; 3])] = &[
    ('क', ["k", "k", "k"]),
    ('ख', ["kh", "kh", "K"]),
    ('ग', ["g", "g", "g"]),
    ('घ', ["gh", "gh", "G"]),
    ('ङ', ["ṅ", "G", "N"]),
    ('च', ["c", "c", "c"]),
    ('छ', ["ch", "ch", "C"]),
    ('ज', ["j", "j", "j"]),
    ('झ', ["jh", "jh", "J"]),
    ('ञ', ["ñ", "J", "Y"]),
    ('ट', ["ṭ", "T", "w"]),
    ('ठ', ["ṭh", "Th", "W"]),
    ('ड', ["ḍ", "D", "q"]),
    ('ढ', ["ḍh", "Dh", "Q"]),
    ('ण', ["ṇ", "N", "R"]),
    ('त', ["t", "t", "t"]),
    ('थ', ["th", "th", "T"]),
    ('द', ["d", "d", "d"]),
    ('ध', ["dh", "dh", "D"]),
    ('न', ["n", "n", "n"]),
    ('प', ["p", "p", "p"]),
    ('फ', ["ph", "ph", "P"]),
    ('ब', ["b", "b", "b"]),
    ('भ', ["bh", "bh", "B"]),
    ('म', ["m", "m", "m"]),
    ('य', ["y", "y", "y"]),
    ('र', ["r", "r", "r"]),
    ('ल', ["l", "l", "l"]),
    ('ळ', ["ḻ", "L", "L"]),
    ('व', ["v", "v", "v"]),
    ('श', ["ś", "z", "S"]),
    ('ष', ["ṣ", "S", "z"]),
    ('स', ["s", "s", "s"]),
    ('ह', ["h", "h", "h"]),
];

// Marks that follow a vowel, plus avagraha and daṇḍas.
const MARKS: &[(char, [&str; 3])] = &[
    ('ं', ["ṃ", "M", "M"]),
    ('ः', ["ḥ", "H", "H"]),
    ('ँ', ["m\u{0310}", "~", "~"]),
    ('ऽ', ["'", "'", "'"]),
    ('।', ["|", "|", "|"]),
    ('॥', ["||", "||", "||"]),
];

// Accepted on input only.
const IAST_ALIASES: &[(&str, Token)] = &[("ṁ", Token::Mark('ं')), ("ṙ", Token::Consonant('र'))];

const IAST_MARKERS: &[char] = &[
    'ā', 'ī', 'ū', 'ṛ', 'ṝ', 'ḷ', 'ḹ', 'ṃ', 'ṁ', 'ḥ', 'ś', 'ṣ', 'ṭ', 'ḍ', 'ṇ', 'ṅ', 'ñ', 'ḻ',
];

const SLP1_ONLY: &[char] = &['f', 'F', 'x', 'X', 'E', 'O', 'w', 'W', 'q', 'Q', 'Y'];
const SLP1_VOWEL_LETTERS: &[char] = &['a', 'A', 'i', 'I', 'u', 'U', 'e', 'E', 'o', 'O', 'f', 'F', 'x', 'X'];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Vowel(usize),
    Consonant(char),
    Mark(char),
}

struct RomanTable {
    tokens: HashMap<&'static str, Token>,
    max_chars: usize,
}

fn roman_table(column: usize) -> &'static RomanTable {
    static TABLES: OnceLock<[RomanTable; 3]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        let build = |col: usize| {
            let mut tokens = HashMap::new();
            for (i, (_, _, roman)) in VOWELS.iter().enumerate() {
                tokens.insert(roman[col], Token::Vowel(i));
            }
            for (deva, roman) in CONSONANTS {
                tokens.insert(roman[col], Token::Consonant(*deva));
            }
            for (deva, roman) in MARKS {
                tokens.insert(roman[col], Token::Mark(*deva));
            }
            if col == 0 {
                for (alias, token) in IAST_ALIASES {
                    tokens.insert(alias, *token);
                }
            }
            let max_chars = tokens.keys().map(|k| k.chars().count()).max().unwrap_or(1);
            RomanTable { tokens, max_chars }
        };
        [build(0), build(1), build(2)]
    });
    &tables[column]
}

fn is_devanagari(c: char) -> bool {
    ('\u{0900}'..='\u{097F}').contains(&c)
}

/// Characters that are structural in every scheme and never reported as
/// pass-through.
fn is_neutral(c: char) -> bool {
    c.is_whitespace() || c.is_ascii_digit() || c == '.'
}

/// Guess the transliteration scheme of `text`.
///
/// Devanagari wins over IAST, IAST over SLP1, and SLP1 over Harvard-Kyoto.
/// Letters unique to SLP1 (`f F x X E O w W q Q Y`) are decisive; `R` only
/// counts as SLP1 when it is followed by a vowel letter, which is where
/// SLP1 uses it as the consonant ṇ and Harvard-Kyoto never writes its
/// vowel ṛ.
pub fn detect_scheme(text: &str) -> Result<Scheme> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let chars: Vec<char> = text.nfc().collect();
    if chars.iter().any(|&c| is_devanagari(c)) {
        return Ok(Scheme::Devanagari);
    }
    let iast = chars
        .iter()
        .flat_map(|c| c.to_lowercase())
        .any(|c| IAST_MARKERS.contains(&c));
    if iast {
        return Ok(Scheme::Iast);
    }
    let slp1 = chars.iter().enumerate().any(|(i, &c)| {
        SLP1_ONLY.contains(&c) || (c == 'R' && chars.get(i + 1).is_some_and(|n| SLP1_VOWEL_LETTERS.contains(n)))
    });
    Ok(if slp1 { Scheme::Slp1 } else { Scheme::HarvardKyoto })
}

/// Convert `text` written in `scheme` to normalized Devanagari.
pub fn to_devanagari(text: &str, scheme: Scheme) -> NormalizedText {
    let composed: String = text.nfc().collect();
    let (devanagari, passthrough) = match scheme.column() {
        None => {
            let mut spans = Vec::new();
            for (pos, c) in composed.char_indices() {
                if !is_devanagari(c) && !is_neutral(c) {
                    push_span(&mut spans, pos..pos + c.len_utf8());
                }
            }
            (composed, spans)
        }
        Some(col) => roman_to_devanagari(&composed, col),
    };
    NormalizedText {
        devanagari,
        source_scheme: scheme,
        original: text.to_string(),
        passthrough,
    }
}

fn push_span(spans: &mut Vec<Range<usize>>, span: Range<usize>) {
    match spans.last_mut() {
        Some(last) if last.end == span.start => last.end = span.end,
        _ => spans.push(span),
    }
}

fn roman_to_devanagari(text: &str, col: usize) -> (String, Vec<Range<usize>>) {
    let table = roman_table(col);
    let chars: Vec<char> = if col == 0 {
        // IAST is case-insensitive.
        text.chars().flat_map(char::to_lowercase).collect()
    } else {
        text.chars().collect()
    };

    let mut out = String::with_capacity(text.len() * 3);
    let mut spans = Vec::new();
    let mut after_consonant = false;
    let mut key = String::new();
    let mut i = 0;
    while i < chars.len() {
        let mut matched = None;
        for len in (1..=table.max_chars.min(chars.len() - i)).rev() {
            key.clear();
            key.extend(&chars[i..i + len]);
            if let Some(token) = table.tokens.get(key.as_str()) {
                matched = Some((*token, len));
                break;
            }
        }
        match matched {
            Some((Token::Vowel(v), len)) => {
                let (independent, sign, _) = VOWELS[v];
                if after_consonant {
                    if let Some(sign) = sign {
                        out.push(sign);
                    }
                } else {
                    out.push(independent);
                }
                after_consonant = false;
                i += len;
            }
            Some((Token::Consonant(c), len)) => {
                if after_consonant {
                    out.push(VIRAMA);
                }
                out.push(c);
                after_consonant = true;
                i += len;
            }
            Some((Token::Mark(m), len)) => {
                if after_consonant {
                    out.push(VIRAMA);
                }
                out.push(m);
                after_consonant = false;
                i += len;
            }
            None => {
                if after_consonant {
                    out.push(VIRAMA);
                }
                after_consonant = false;
                let c = chars[i];
                let start = out.len();
                out.push(c);
                if !is_neutral(c) {
                    push_span(&mut spans, start..out.len());
                }
                i += 1;
            }
        }
    }
    if after_consonant {
        out.push(VIRAMA);
    }
    (out.nfc().collect(), spans)
}

/// Convert Devanagari text to `scheme`. Characters without a mapping are
/// copied through.
pub fn from_devanagari(text: &str, scheme: Scheme) -> String {
    let composed: String = text.nfc().collect();
    let Some(col) = scheme.column() else {
        return composed;
    };

    let mut out = String::with_capacity(composed.len());
    // true while a consonant waits to learn whether it carries inherent `a`
    let mut pending_a = false;
    for c in composed.chars() {
        if pending_a {
            if c == VIRAMA {
                pending_a = false;
                continue;
            }
            if let Some((_, _, roman)) = VOWELS.iter().find(|(_, sign, _)| *sign == Some(c)) {
                out.push_str(roman[col]);
                pending_a = false;
                continue;
            }
            out.push_str(VOWELS[0].2[col]);
            pending_a = false;
        }
        if let Some((_, roman)) = CONSONANTS.iter().find(|(d, _)| *d == c) {
            out.push_str(roman[col]);
            pending_a = true;
        } else if let Some((_, _, roman)) = VOWELS.iter().find(|(d, _, _)| *d == c) {
            out.push_str(roman[col]);
        } else if let Some((_, roman)) = MARKS.iter().find(|(d, _)| *d == c) {
            out.push_str(roman[col]);
        } else {
            out.push(c);
        }
    }
    if pending_a {
        out.push_str(VOWELS[0].2[col]);
    }
    out
}

/// Resolve `scheme` (detecting it when `None`) and normalize `text`.
pub fn normalize(text: &str, scheme: Option<Scheme>) -> Result<NormalizedText> {
    let scheme = match scheme {
        Some(s) => s,
        None => detect_scheme(text)?,
    };
    Ok(to_devanagari(text, scheme))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_each_scheme() {
        assert_eq!(detect_scheme("नमस्ते").unwrap(), Scheme::Devanagari);
        assert_eq!(detect_scheme("namaste sadā vatsale").unwrap(), Scheme::Iast);
        assert_eq!(detect_scheme("rAmaH").unwrap(), Scheme::HarvardKyoto);
        assert_eq!(detect_scheme("kRSNa").unwrap(), Scheme::HarvardKyoto);
        assert_eq!(detect_scheme("rAmeRa").unwrap(), Scheme::Slp1);
        assert_eq!(detect_scheme("kfzRa").unwrap(), Scheme::Slp1);
        assert_eq!(detect_scheme("Sivaya namaH").unwrap(), Scheme::HarvardKyoto);
    }

    #[test]
    fn detect_rejects_blank_input() {
        assert_eq!(detect_scheme("  \n\t"), Err(Error::EmptyInput));
        assert_eq!(detect_scheme(""), Err(Error::EmptyInput));
    }

    #[test]
    fn decomposed_iast_is_detected() {
        // a + combining macron
        assert_eq!(detect_scheme("sada\u{0304}").unwrap(), Scheme::Iast);
    }

    #[test]
    fn roman_to_devanagari_examples() {
        assert_eq!(to_devanagari("namaste", Scheme::Iast).devanagari, "नमस्ते");
        assert_eq!(to_devanagari("namaste", Scheme::Slp1).devanagari, "नमस्ते");
        assert_eq!(to_devanagari("namaste", Scheme::HarvardKyoto).devanagari, "नमस्ते");
        assert_eq!(to_devanagari("नमस्ते", Scheme::Devanagari).devanagari, "नमस्ते");
        assert_eq!(to_devanagari("bhārata", Scheme::Iast).devanagari, "भारत");
        assert_eq!(to_devanagari("rAmaH", Scheme::HarvardKyoto).devanagari, "रामः");
        assert_eq!(to_devanagari("kRSNa", Scheme::HarvardKyoto).devanagari, "कृष्ण");
        assert_eq!(to_devanagari("kfzRa", Scheme::Slp1).devanagari, "कृष्ण");
        assert_eq!(to_devanagari("Rāmaḥ", Scheme::Iast).devanagari, "रामः");
        assert_eq!(to_devanagari("vardhito'ham |", Scheme::Iast).devanagari, "वर्धितोऽहम् ।");
    }

    #[test]
    fn devanagari_to_roman_examples() {
        assert_eq!(from_devanagari("नमस्ते", Scheme::Iast), "namaste");
        assert_eq!(from_devanagari("नमस्ते", Scheme::Devanagari), "नमस्ते");
        assert_eq!(from_devanagari("भारत", Scheme::Iast), "bhārata");
        assert_eq!(from_devanagari("कृष्णः", Scheme::HarvardKyoto), "kRSNaH");
        assert_eq!(from_devanagari("कृष्णः", Scheme::Slp1), "kfzRaH");
        assert_eq!(from_devanagari("अहम्॥", Scheme::Iast), "aham||");
    }

    #[test]
    fn unknown_characters_pass_through() {
        let n = to_devanagari("rāma, sītā", Scheme::Iast);
        assert_eq!(n.devanagari, "राम, सीता");
        assert_eq!(n.passthrough.len(), 1);
        assert_eq!(&n.devanagari[n.passthrough[0].clone()], ",");

        let n = to_devanagari("राम-x", Scheme::Devanagari);
        assert_eq!(&n.devanagari[n.passthrough[0].clone()], "-x");
    }

    #[test]
    fn scheme_names_parse() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert!("itrans".parse::<Scheme>().is_err());
    }
}
