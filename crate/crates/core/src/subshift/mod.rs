//! One-dimensional subshifts: substitution languages and radius-bounded
//! searches for sliding block automorphisms and reversors.

pub mod classify;
pub mod language;
pub mod rule;
pub mod search;
pub mod substitution;

/// A word as letter indices into the alphabet.
pub type Word = Vec<u8>;

pub use classify::{classify_language, classify_shift_groups, modulo_shifts, ShiftClassification};
pub use language::{generate_language, Language, LanguageKind, LanguageSource};
pub use rule::{Patch1D, SlidingBlockRule};
pub use search::{find_automorphisms, find_inverse, find_reversors, search_rules, SearchOptions};
pub use substitution::SubstitutionRule;
