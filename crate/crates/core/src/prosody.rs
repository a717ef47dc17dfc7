//! Varṇa splitting, syllabification and laghu/guru weighing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NUKTA: char = '\u{093C}';
const VIRAMA: char = '\u{094D}';
const CANDRABINDU: char = '\u{0901}';
const ANUSVARA: char = '\u{0902}';
const VISARGA: char = '\u{0903}';
const OM: char = 'ॐ';

fn is_consonant(c: char) -> bool {
    ('\u{0915}'..='\u{0939}').contains(&c) || ('\u{0958}'..='\u{095F}').contains(&c)
}

fn is_independent_vowel(c: char) -> bool {
    ('\u{0904}'..='\u{0914}').contains(&c) || c == 'ॠ' || c == 'ॡ'
}

fn is_modifier(c: char) -> bool {
    matches!(c, CANDRABINDU | ANUSVARA | VISARGA)
}

/// Independent form of a dependent vowel sign.
fn vowel_of_sign(c: char) -> Option<char> {
    Some(match c {
        'ा' => 'आ',
        'ि' => 'इ',
        'ी' => 'ई',
        'ु' => 'उ',
        'ू' => 'ऊ',
        'ृ' => 'ऋ',
        'ॄ' => 'ॠ',
        'ॢ' => 'ऌ',
        'ॣ' => 'ॡ',
        'ॅ' => 'ऍ',
        'ॆ' => 'ऎ',
        'े' => 'ए',
        'ै' => 'ऐ',
        'ॉ' => 'ऑ',
        'ॊ' => 'ऒ',
        'ो' => 'ओ',
        'ौ' => 'औ',
        _ => return None,
    })
}

fn is_long_vowel(c: char) -> bool {
    matches!(c, 'आ' | 'ई' | 'ऊ' | 'ॠ' | 'ॡ' | 'ए' | 'ऐ' | 'ओ' | 'औ' | 'ऍ' | 'ऑ')
}

/// Short vowel to its long counterpart and back, for the vowels whose
/// length is commonly confused.
pub(crate) fn toggle_vowel_length(c: char) -> Option<char> {
    Some(match c {
        'इ' => 'ई',
        'ई' => 'इ',
        'उ' => 'ऊ',
        'ऊ' => 'उ',
        'ऋ' => 'ॠ',
        'ॠ' => 'ऋ',
        'ि' => 'ी',
        'ी' => 'ि',
        'ु' => 'ू',
        'ू' => 'ु',
        'ृ' => 'ॄ',
        'ॄ' => 'ृ',
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarnaKind {
    Consonant,
    Vowel,
    Modifier,
}

/// An atomic phonetic unit. Consonants carry an explicit halanta, vowels are
/// in independent form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Varna {
    pub kind: VarnaKind,
    pub glyph: String,
}

impl Varna {
    fn consonant(base: char, nukta: bool) -> Self {
        let mut glyph = String::from(base);
        if nukta {
            glyph.push(NUKTA);
        }
        glyph.push(VIRAMA);
        Varna {
            kind: VarnaKind::Consonant,
            glyph,
        }
    }

    fn vowel(c: char) -> Self {
        Varna {
            kind: VarnaKind::Vowel,
            glyph: c.to_string(),
        }
    }

    fn modifier(c: char) -> Self {
        Varna {
            kind: VarnaKind::Modifier,
            glyph: c.to_string(),
        }
    }

    pub fn is_consonant(&self) -> bool {
        self.kind == VarnaKind::Consonant
    }

    pub fn is_vowel(&self) -> bool {
        self.kind == VarnaKind::Vowel
    }
}

impl fmt::Display for Varna {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.glyph)
    }
}

/// A character that is neither Devanagari, whitespace nor a digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownCharacter {
    /// Character offset within the analysed text.
    pub position: usize,
    pub character: char,
}

impl fmt::Display for UnknownCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown character {:?} at position {}",
            self.character, self.position
        )
    }
}

/// Analysis output together with the characters that were skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmented<T> {
    pub units: Vec<T>,
    pub warnings: Vec<UnknownCharacter>,
}

#[derive(Debug)]
enum UnitKind {
    Consonant(Varna),
    Vowel(Varna),
    Modifier(Varna),
    Skip,
}

#[derive(Debug)]
struct Unit {
    kind: UnitKind,
    surface: String,
    word: usize,
}

/// Single pass over the text. Whitespace is transparent: a consonant and its
/// vowel sign may be separated by spaces and still combine.
fn scan(text: &str) -> (Vec<Unit>, Vec<UnknownCharacter>) {
    let mut chars = Vec::new();
    let mut word = 0;
    let mut in_word = false;
    for (pos, c) in text.chars().enumerate() {
        if c.is_whitespace() {
            if in_word {
                word += 1;
                in_word = false;
            }
        } else {
            in_word = true;
            chars.push((pos, c, word));
        }
    }

    let mut units = Vec::with_capacity(chars.len() * 2);
    let mut warnings = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c, word) = chars[i];
        i += 1;
        if is_consonant(c) {
            let mut surface = String::from(c);
            let nukta = chars.get(i).is_some_and(|&(_, n, _)| n == NUKTA);
            if nukta {
                surface.push(NUKTA);
                i += 1;
            }
            let next = chars.get(i).map(|&(_, n, _)| n);
            if next == Some(VIRAMA) {
                surface.push(VIRAMA);
                i += 1;
                units.push(Unit {
                    kind: UnitKind::Consonant(Varna::consonant(c, nukta)),
                    surface,
                    word,
                });
            } else if let Some(v) = next.and_then(vowel_of_sign) {
                let sign_word = chars[i].2;
                i += 1;
                units.push(Unit {
                    kind: UnitKind::Consonant(Varna::consonant(c, nukta)),
                    surface,
                    word,
                });
                units.push(Unit {
                    kind: UnitKind::Vowel(Varna::vowel(v)),
                    surface: next.unwrap().to_string(),
                    word: sign_word,
                });
            } else {
                units.push(Unit {
                    kind: UnitKind::Consonant(Varna::consonant(c, nukta)),
                    surface,
                    word,
                });
                units.push(Unit {
                    kind: UnitKind::Vowel(Varna::vowel('अ')),
                    surface: String::new(),
                    word,
                });
            }
        } else if is_independent_vowel(c) {
            units.push(Unit {
                kind: UnitKind::Vowel(Varna::vowel(c)),
                surface: c.to_string(),
                word,
            });
        } else if let Some(v) = vowel_of_sign(c) {
            // orphan sign: read as the vowel itself
            units.push(Unit {
                kind: UnitKind::Vowel(Varna::vowel(v)),
                surface: c.to_string(),
                word,
            });
        } else if is_modifier(c) {
            units.push(Unit {
                kind: UnitKind::Modifier(Varna::modifier(c)),
                surface: c.to_string(),
                word,
            });
        } else if c == OM {
            units.push(Unit {
                kind: UnitKind::Vowel(Varna::vowel('ओ')),
                surface: c.to_string(),
                word,
            });
            units.push(Unit {
                kind: UnitKind::Consonant(Varna::consonant('म', false)),
                surface: String::new(),
                word,
            });
        } else {
            // Avagraha, daṇḍas, digits, stray virama/nukta and joiners are
            // structural. Anything else is reported.
            let structural =
                ('\u{0900}'..='\u{097F}').contains(&c) || c.is_ascii_digit() || c == '\u{200C}' || c == '\u{200D}';
            if !structural {
                warnings.push(UnknownCharacter {
                    position: pos,
                    character: c,
                });
            }
            units.push(Unit {
                kind: UnitKind::Skip,
                surface: c.to_string(),
                word,
            });
        }
    }
    (units, warnings)
}

/// Split Devanagari text into varṇas.
pub fn split_varnas(text: &str) -> Segmented<Varna> {
    let (units, warnings) = scan(text);
    let varnas = units
        .into_iter()
        .filter_map(|u| match u.kind {
            UnitKind::Consonant(v) | UnitKind::Vowel(v) | UnitKind::Modifier(v) => Some(v),
            UnitKind::Skip => None,
        })
        .collect();
    Segmented {
        units: varnas,
        warnings,
    }
}

/// An akṣara: varṇas up to and including one vowel, plus any modifiers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Syllable {
    pub varnas: Vec<Varna>,
    /// Surface text, whitespace removed.
    pub display: String,
    /// 0-based position within the line.
    pub index: usize,
    /// Index of the whitespace-separated word holding the vowel.
    pub word: usize,
}

impl Syllable {
    pub fn vowel(&self) -> &Varna {
        self.varnas
            .iter()
            .find(|v| v.is_vowel())
            .expect("syllable without vowel")
    }

    fn vowel_char(&self) -> char {
        self.vowel().glyph.chars().next().unwrap_or('अ')
    }

    /// Consonants before the vowel.
    pub fn onset(&self) -> usize {
        self.varnas.iter().take_while(|v| v.is_consonant()).count()
    }

    pub fn has_modifier(&self) -> bool {
        self.varnas.iter().any(|v| v.kind == VarnaKind::Modifier)
    }

    /// Consonants after the vowel; only the last syllable of a line can
    /// have any.
    pub fn coda(&self) -> usize {
        self.varnas
            .iter()
            .skip_while(|v| !v.is_vowel())
            .filter(|v| v.is_consonant())
            .count()
    }

    pub fn has_long_vowel(&self) -> bool {
        is_long_vowel(self.vowel_char())
    }

    /// The syllable with its vowel length toggled (इ↔ई, उ↔ऊ, ऋ↔ॠ), if its
    /// vowel is one of those.
    pub fn toggled(&self) -> Option<String> {
        let vowel = self.vowel_char();
        toggle_vowel_length(vowel)?;
        let mut out = String::with_capacity(self.display.len());
        let mut done = false;
        for c in self.display.chars() {
            match toggle_vowel_length(c) {
                Some(t) if !done => {
                    out.push(t);
                    done = true;
                }
                _ => out.push(c),
            }
        }
        done.then_some(out)
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

/// Split a line into syllables.
///
/// A syllable closes after its vowel and trailing modifiers. Leading
/// consonants join the next vowel, even across spaces; consonants left
/// over at the end join the last syllable.
pub fn syllabify(text: &str) -> Segmented<Syllable> {
    let (units, warnings) = scan(text);
    let mut syllables: Vec<Syllable> = Vec::new();
    let mut pending: Vec<Varna> = Vec::new();
    let mut pending_surface = String::new();

    for unit in units {
        match unit.kind {
            UnitKind::Consonant(v) => {
                pending.push(v);
                pending_surface.push_str(&unit.surface);
            }
            UnitKind::Vowel(v) => {
                pending.push(v);
                pending_surface.push_str(&unit.surface);
                syllables.push(Syllable {
                    varnas: std::mem::take(&mut pending),
                    display: std::mem::take(&mut pending_surface),
                    index: syllables.len(),
                    word: unit.word,
                });
            }
            UnitKind::Modifier(v) => match syllables.last_mut() {
                Some(last) if pending.is_empty() => {
                    last.varnas.push(v);
                    last.display.push_str(&unit.surface);
                }
                // a modifier with no vowel to sit on is kept only as text
                _ => pending_surface.push_str(&unit.surface),
            },
            UnitKind::Skip => match syllables.last_mut() {
                Some(last) if pending.is_empty() && pending_surface.is_empty() => last.display.push_str(&unit.surface),
                _ => pending_surface.push_str(&unit.surface),
            },
        }
    }
    if let Some(last) = syllables.last_mut() {
        last.varnas.append(&mut pending);
        last.display.push_str(&pending_surface);
    }
    Segmented {
        units: syllables,
        warnings,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Weight {
    #[serde(rename = "L")]
    Laghu,
    #[serde(rename = "G")]
    Guru,
}

impl Weight {
    pub fn as_char(self) -> char {
        match self {
            Weight::Laghu => 'L',
            Weight::Guru => 'G',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'L' => Some(Weight::Laghu),
            'G' => Some(Weight::Guru),
            _ => None,
        }
    }

    pub fn matras(self) -> usize {
        match self {
            Weight::Laghu => 1,
            Weight::Guru => 2,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// The laghu/guru sequence of a line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LgSignature {
    pub weights: Vec<Weight>,
    /// The last syllable was weighed laghu.
    pub padanta_laghu: bool,
}

impl LgSignature {
    pub fn new(weights: Vec<Weight>) -> Self {
        let padanta_laghu = weights.last() == Some(&Weight::Laghu);
        LgSignature { weights, padanta_laghu }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The signature with the final syllable read as guru.
    pub fn with_final_guru(&self) -> LgSignature {
        let mut weights = self.weights.clone();
        if let Some(last) = weights.last_mut() {
            *last = Weight::Guru;
        }
        LgSignature {
            weights,
            padanta_laghu: false,
        }
    }

    pub fn gurus(&self) -> usize {
        self.weights.iter().filter(|&&w| w == Weight::Guru).count()
    }
}

impl fmt::Display for LgSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.weights {
            write!(f, "{}", w.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for LgSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let weights = s
            .chars()
            .enumerate()
            .map(|(i, c)| {
                Weight::from_char(c).ok_or_else(|| Error::Parse {
                    line: 1,
                    reason: format!("invalid weight {c:?} at position {i}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LgSignature::new(weights))
    }
}

/// Weigh a line's syllables.
///
/// A syllable is guru when its vowel is long, it carries anusvāra, visarga
/// or candrabindu, it ends in a consonant, or the next syllable starts
/// with a consonant cluster. The last syllable keeps its natural weight.
pub fn weigh(syllables: &[Syllable]) -> LgSignature {
    let weights = syllables
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let heavy_next = syllables.get(i + 1).is_some_and(|n| n.onset() >= 2);
            if s.has_long_vowel() || s.has_modifier() || s.coda() > 0 || heavy_next {
                Weight::Guru
            } else {
                Weight::Laghu
            }
        })
        .collect();
    LgSignature::new(weights)
}

/// Syllabify and weigh in one step.
pub fn signature_of(text: &str) -> LgSignature {
    weigh(&syllabify(text).units)
}

/// Sum of mātrās: one per laghu, two per guru.
pub fn matra_count(sig: &LgSignature) -> usize {
    sig.weights.iter().map(|w| w.matras()).sum()
}

/// A gaṇa letter, or a residual single weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gana {
    Ma,
    Ya,
    Ra,
    Sa,
    Ta,
    Ja,
    Bha,
    Na,
    La,
    Ga,
}

use Weight::{Guru as G, Laghu as L};

const GANAS: [(Gana, char, [Weight; 3]); 8] = [
    (Gana::Ma, 'म', [G, G, G]),
    (Gana::Ya, 'य', [L, G, G]),
    (Gana::Ra, 'र', [G, L, G]),
    (Gana::Sa, 'स', [L, L, G]),
    (Gana::Ta, 'त', [G, G, L]),
    (Gana::Ja, 'ज', [L, G, L]),
    (Gana::Bha, 'भ', [G, L, L]),
    (Gana::Na, 'न', [L, L, L]),
];

impl Gana {
    pub fn letter(self) -> char {
        match self {
            Gana::La => 'ल',
            Gana::Ga => 'ग',
            g => GANAS.iter().find(|(x, _, _)| *x == g).map(|(_, c, _)| *c).unwrap(),
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'ल' => Some(Gana::La),
            'ग' => Some(Gana::Ga),
            _ => GANAS.iter().find(|(_, l, _)| *l == c).map(|(g, _, _)| *g),
        }
    }

    pub fn weights(self) -> &'static [Weight] {
        match self {
            Gana::La => &[L],
            Gana::Ga => &[G],
            g => GANAS.iter().find(|(x, _, _)| *x == g).map(|(_, _, w)| &w[..]).unwrap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GanaSignature {
    pub ganas: Vec<Gana>,
}

impl fmt::Display for GanaSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.ganas {
            write!(f, "{}", g.letter())?;
        }
        Ok(())
    }
}

/// Group a signature into gaṇas, left to right; one or two leftover weights
/// become ल/ग.
pub fn to_gana(sig: &LgSignature) -> GanaSignature {
    let chunks = sig.weights.chunks_exact(3);
    let rest = chunks.remainder();
    let mut ganas: Vec<Gana> = chunks
        .map(|triple| GANAS.iter().find(|(_, _, w)| w == triple).map(|(g, _, _)| *g).unwrap())
        .collect();
    ganas.extend(rest.iter().map(|w| match w {
        Weight::Laghu => Gana::La,
        Weight::Guru => Gana::Ga,
    }));
    GanaSignature { ganas }
}

/// Decode a gaṇa formula such as `यययय` into an lg-signature.
pub fn from_gana(formula: &str) -> Result<LgSignature> {
    let mut weights = Vec::new();
    for (position, letter) in formula.chars().enumerate() {
        let gana = Gana::from_letter(letter).ok_or(Error::UnknownGanaLetter { letter, position })?;
        weights.extend_from_slice(gana.weights());
    }
    Ok(LgSignature::new(weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn glyphs(text: &str) -> Vec<String> {
        split_varnas(text).units.into_iter().map(|v| v.glyph).collect()
    }

    fn displays(text: &str) -> Vec<String> {
        syllabify(text).units.into_iter().map(|s| s.display).collect()
    }

    fn sig(text: &str) -> String {
        signature_of(text).to_string()
    }

    #[test]
    fn splits_varnas() {
        assert_eq!(glyphs("भारत"), ["भ्", "आ", "र्", "अ", "त्", "अ"]);
        assert_eq!(glyphs("रामचन्द्र"), ["र्", "आ", "म्", "अ", "च्", "अ", "न्", "द्", "र्", "अ"]);
        assert_eq!(glyphs("अ"), ["अ"]);
        assert_eq!(glyphs("रामः"), ["र्", "आ", "म्", "अ", "ः"]);
    }

    #[test]
    fn varna_glyph_invariants() {
        for v in split_varnas("कृष्णं वन्दे जगद्गुरुम् ॐ").units {
            match v.kind {
                VarnaKind::Consonant => assert!(v.glyph.ends_with(VIRAMA)),
                VarnaKind::Vowel => assert!(!v.glyph.contains(VIRAMA)),
                VarnaKind::Modifier => {}
            }
        }
    }

    #[test]
    fn syllabifies() {
        assert_eq!(displays("भारत"), ["भा", "र", "त"]);
        assert_eq!(displays("नमस्ते"), ["न", "म", "स्ते"]);
        assert_eq!(displays("ग"), ["ग"]);
        assert_eq!(displays("वर्धितोऽहम्"), ["व", "र्धि", "तोऽ", "हम्"]);
        assert_eq!(displays("मेघम् आश्लिष्ट"), ["मे", "घ", "म्आ", "श्लि", "ष्ट"]);
    }

    #[test]
    fn unknown_characters_are_reported_and_skipped() {
        let seg = syllabify("राम, x");
        assert_eq!(seg.units.len(), 2);
        assert_eq!(
            seg.warnings,
            vec![
                UnknownCharacter {
                    position: 3,
                    character: ','
                },
                UnknownCharacter {
                    position: 5,
                    character: 'x'
                },
            ]
        );
        // daṇḍa, avagraha and digits are silent
        assert!(syllabify("सोऽहम् ॥१२॥ 3").warnings.is_empty());
    }

    #[test]
    fn empty_and_vowelless_text() {
        assert!(syllabify("").units.is_empty());
        assert!(syllabify("१२३").units.is_empty());
        assert!(syllabify("क्").units.is_empty());
    }

    #[test]
    fn weighs_lines() {
        assert_eq!(sig("गगगग"), "LLLL");
        assert_eq!(sig("रामं"), "GG");
        assert_eq!(sig("नमस्ते सदा वत्सले मातृभुमे"), "LGGLGGLGGLLG");
        assert_eq!(sig("माता रामो मत्पिता रामचन्द्रः"), "GGGGGLGGLGG");
        // final consonant closes the syllable
        assert_eq!(sig("अहम्"), "LG");
        // spaces do not hide a following cluster
        assert_eq!(sig("स प्रत्यग्रैः"), "GGGG");
    }

    #[test]
    fn padanta_laghu_flag() {
        assert!(signature_of("भारत").padanta_laghu);
        assert!(!signature_of("रामः").padanta_laghu);
        assert!(!signature_of("").padanta_laghu);
    }

    #[test]
    fn gana_examples() {
        let s: LgSignature = "LGGLGGLGGLGG".parse().unwrap();
        assert_eq!(to_gana(&s).to_string(), "यययय");
        let s: LgSignature = "GGGGGLGGLGG".parse().unwrap();
        assert_eq!(to_gana(&s).to_string(), "मततगग");
        assert_eq!(to_gana(&"L".parse().unwrap()).to_string(), "ल");
        assert_eq!(from_gana("यययय").unwrap().to_string(), "LGGLGGLGGLGG");
        assert_eq!(from_gana("मभतगग").unwrap().to_string(), "GGGGLLGGLGG");
        assert_eq!(from_gana("").unwrap(), LgSignature::default());
        assert_eq!(
            from_gana("यक"),
            Err(Error::UnknownGanaLetter {
                letter: 'क',
                position: 1
            })
        );
    }

    #[test]
    fn matras() {
        assert_eq!(matra_count(&"LGGLGGLGGLGG".parse().unwrap()), 20);
        assert_eq!(matra_count(&LgSignature::default()), 0);
        assert_eq!(matra_count(&"LLLL".parse().unwrap()), 4);
    }

    #[test]
    fn vowel_toggle() {
        let s = &syllabify("मातृभुमे").units;
        assert_eq!(s[2].toggled().as_deref(), Some("भू"));
        assert_eq!(s[1].toggled().as_deref(), Some("तॄ"));
        assert_eq!(s[0].toggled(), None);
        assert_eq!(syllabify("इति").units[0].toggled().as_deref(), Some("ई"));
    }
}
