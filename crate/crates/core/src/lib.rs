//! Identification of Sanskrit Varṇavṛtta meters.
//!
//! Text in any of the supported transliteration schemes is converted to
//! Devanagari, split into pādas, syllabified and weighed into an
//! lg-signature. Signatures are looked up in a [`MetricalDatabase`]; lines
//! that do not match any meter exactly receive ranked fuzzy matches with
//! per-syllable correction suggestions.
//!
//! ```
//! use chanda_core::{MetricalDatabase, prosody, matcher};
//!
//! let db = MetricalDatabase::starter();
//! let line = prosody::syllabify("नमस्ते सदा वत्सले मातृभुमे").units;
//! let sig = prosody::weigh(&line);
//! let fuzzy = matcher::find_fuzzy_match(&sig, &line, &db, 10);
//! assert_eq!(fuzzy[0].meter, "Bhujāṅgaprayāta");
//! assert_eq!(fuzzy[0].cost, 1);
//! ```

pub mod error;
pub mod matcher;
pub mod meterdb;
pub mod pipeline;
pub mod prosody;
pub mod translit;

pub use error::{Error, Result};
pub use matcher::{EditKind, EditOp, Match, MatchKind, Suggestion, DEFAULT_K};
pub use meterdb::{MeterDef, MeterRef, MetricalDatabase, PadaLabel, PadaPattern, Position};
pub use pipeline::{analyze, Mode, Report, Stats};
pub use prosody::{GanaSignature, LgSignature, Syllable, Varna, VarnaKind, Weight};
pub use translit::{NormalizedText, Scheme};
