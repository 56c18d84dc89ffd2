use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

use super::language::Language;
use super::substitution::decode;
use super::Word;
use crate::error::{Error, Result};
use crate::group::ElementOrder;

/// A finite piece of a configuration with absolute coordinates: `letters[i]`
/// sits at position `start + i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Patch1D {
    pub start: i64,
    pub letters: Word,
}

impl Patch1D {
    pub fn new(start: i64, letters: Word) -> Self {
        Patch1D { start, letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn get(&self, pos: i64) -> Option<u8> {
        let i = pos - self.start;
        (i >= 0).then(|| self.letters.get(i as usize).copied()).flatten()
    }

    /// `(R x)_n = x_{−n}`
    pub fn reflected(&self) -> Self {
        let end = self.start + self.letters.len() as i64 - 1;
        Patch1D::new(-end, self.letters.iter().rev().copied().collect())
    }

    /// `(S^k x)_n = x_{n+k}`
    pub fn shifted(&self, k: i64) -> Self {
        Patch1D::new(self.start - k, self.letters.clone())
    }

    /// Whether `other` agrees with `self` wherever both are defined, and
    /// `other` lies inside `self`.
    pub fn contains_patch(&self, other: &Patch1D) -> bool {
        other.letters.iter().enumerate().all(|(i, &c)| self.get(other.start + i as i64) == Some(c))
    }
}

/// Sliding block code `x ↦ S^{shift_offset}(Φ_f(R^ε x))`, where `Φ_f` applies
/// the radius-`r` local rule `f` centred at every position and `ε` is
/// `reflected`.
///
/// The table is keyed by legal `(2r+1)`-words of the *source* language: the
/// subshift's own language, or its reversal when `reflected` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlidingBlockRule {
    alphabet: Vec<char>,
    radius: usize,
    reflected: bool,
    shift_offset: i64,
    table: BTreeMap<Word, u8>,
}

impl SlidingBlockRule {
    pub fn new(
        alphabet: Vec<char>,
        radius: usize,
        reflected: bool,
        shift_offset: i64,
        table: BTreeMap<Word, u8>,
    ) -> Result<Self> {
        if table.keys().any(|w| w.len() != 2 * radius + 1) {
            return Err(Error::Malformed(format!("table keys must have length {}", 2 * radius + 1)));
        }
        Ok(SlidingBlockRule { alphabet, radius, reflected, shift_offset, table })
    }

    fn source(lang: &Language, reflected: bool) -> Language {
        if reflected {
            lang.reversed()
        } else {
            lang.clone()
        }
    }

    /// `S^k` at radius `r ≥ |k|`.
    pub fn shift_power(lang: &Language, radius: usize, k: i64) -> Self {
        assert!(k.unsigned_abs() as usize <= radius);
        let table = lang.words(2 * radius + 1).iter().map(|w| (w.clone(), w[(radius as i64 + k) as usize])).collect();
        SlidingBlockRule { alphabet: lang.alphabet().to_vec(), radius, reflected: false, shift_offset: 0, table }
    }

    pub fn identity(lang: &Language, radius: usize) -> Self {
        Self::shift_power(lang, radius, 0)
    }

    /// Letter-to-letter map `perm` at radius 0, optionally after reflection.
    pub fn letter_map(lang: &Language, perm: &[u8], reflected: bool) -> Self {
        let src = Self::source(lang, reflected);
        let table = src.words(1).iter().map(|w| (w.clone(), perm[w[0] as usize])).collect();
        SlidingBlockRule { alphabet: lang.alphabet().to_vec(), radius: 0, reflected, shift_offset: 0, table }
    }

    pub fn reflection(lang: &Language) -> Self {
        let id: Vec<u8> = (0..lang.alphabet().len() as u8).collect();
        Self::letter_map(lang, &id, true)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn is_reflected(&self) -> bool {
        self.reflected
    }

    pub fn shift_offset(&self) -> i64 {
        self.shift_offset
    }

    pub fn table(&self) -> &BTreeMap<Word, u8> {
        &self.table
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// Image letters in key order; the canonical sort key of a rule.
    pub fn encoding(&self) -> (usize, bool, i64, Word) {
        (self.radius, self.reflected, self.shift_offset, self.table.values().copied().collect())
    }

    pub fn with_shift(&self, k: i64) -> Self {
        SlidingBlockRule { shift_offset: self.shift_offset + k, ..self.clone() }
    }

    /// Image of a patch, or `None` if some window is not in the table.
    pub fn apply(&self, p: &Patch1D) -> Option<Patch1D> {
        let src = if self.reflected { p.reflected() } else { p.clone() };
        let w = 2 * self.radius + 1;
        if src.len() < w {
            return Some(Patch1D::new(src.start + self.radius as i64 - self.shift_offset, Vec::new()));
        }
        let letters = src.letters.windows(w).map(|win| self.table.get(win).copied()).collect::<Option<Word>>()?;
        Some(Patch1D::new(src.start + self.radius as i64 - self.shift_offset, letters))
    }

    /// Applies the local rule to a bare word.
    pub fn apply_word(&self, w: &[u8]) -> Option<Word> {
        self.apply(&Patch1D::new(0, w.to_vec())).map(|p| p.letters)
    }

    /// Table of an arbitrary patch map at radius `radius`, read off at
    /// position 0 of the image of every legal source window placed on
    /// `[-radius, radius]`.
    pub fn tabulate(
        lang: &Language,
        radius: usize,
        reflected: bool,
        map: impl Fn(&Patch1D) -> Option<Patch1D>,
    ) -> Result<Self> {
        let src = Self::source(lang, reflected);
        let mut table = BTreeMap::new();
        for w in src.words(2 * radius + 1) {
            let placed = Patch1D::new(-(radius as i64), w.clone());
            // the configuration x whose (reflected) window this is
            let x = if reflected { placed.reflected() } else { placed };
            let image = map(&x).ok_or_else(|| Error::Invariant(format!("map undefined on {}", lang.decode(w))))?;
            let c =
                image.get(0).ok_or_else(|| Error::Invariant(format!("radius {radius} too small to tabulate map")))?;
            table.insert(w.clone(), c);
        }
        Ok(SlidingBlockRule { alphabet: lang.alphabet().to_vec(), radius, reflected, shift_offset: 0, table })
    }

    /// Same map, encoded at a larger radius with the shift folded in.
    pub fn recode(&self, lang: &Language, radius: usize) -> Result<Self> {
        if radius < self.radius + self.shift_offset.unsigned_abs() as usize {
            return Err(Error::Malformed(format!("cannot recode radius {} rule at radius {radius}", self.radius)));
        }
        Self::tabulate(lang, radius, self.reflected, |p| self.apply(p))
    }

    /// `self ∘ other` as a single rule.
    pub fn compose(&self, other: &Self, lang: &Language) -> Result<Self> {
        let radius = self.radius
            + other.radius
            + self.shift_offset.unsigned_abs() as usize
            + other.shift_offset.unsigned_abs() as usize;
        Self::tabulate(lang, radius, self.reflected ^ other.reflected, |p| other.apply(p).and_then(|q| self.apply(&q)))
    }

    /// Applies the rule `k` times to `p`.
    pub fn iterate(&self, p: &Patch1D, k: u32) -> Option<Patch1D> {
        (0..k).try_fold(p.clone(), |q, _| self.apply(&q))
    }

    fn total_radius(&self) -> usize {
        self.radius + self.shift_offset.unsigned_abs() as usize
    }

    /// Smallest `k ≤ cap` such that the `k`-th power acts as the identity on
    /// every legal word of length `max_len` (its image has length
    /// `max_len − 2kr`). `Infinite` when no such `k` is found within the cap
    /// or before the images run out. Odd powers of a reflected rule are never
    /// the identity.
    pub fn element_order(&self, lang: &Language, cap: u32) -> ElementOrder {
        self.order_modulo_shifts(lang, cap, false).map_or(ElementOrder::Infinite, |(k, _)| ElementOrder::Finite(k))
    }

    /// Smallest `k ≤ cap` with `self^k = S^j` on test words, with that `j`.
    /// With `any_shift = false` only `j = 0` is accepted.
    pub fn order_modulo_shifts(&self, lang: &Language, cap: u32, any_shift: bool) -> Option<(u32, i64)> {
        let n = lang.max_len();
        let tests: Vec<Patch1D> = lang.words(n).iter().map(|w| Patch1D::new(0, w.clone())).collect();
        let mut current = tests.clone();
        let step = 2 * self.radius;
        for k in 1..=cap {
            if (k as usize) * step >= n {
                return None;
            }
            current = current.iter().map(|p| self.apply(p)).collect::<Option<Vec<_>>>()?;
            if self.reflected && k % 2 == 1 {
                continue;
            }
            let reach = (k as usize * self.total_radius()) as i64;
            let shifts: Vec<i64> = if any_shift { (-reach..=reach).collect() } else { vec![0] };
            for j in shifts {
                // S^j x agrees with the image wherever the image is defined
                if tests.iter().zip(&current).all(|(x, y)| x.shifted(j).contains_patch(y)) {
                    return Some((k, j));
                }
            }
        }
        None
    }

    /// Whether `self = S^j ∘ other` on all legal words of length `max_len`
    /// for some `j`.
    pub fn equal_modulo_shift(&self, other: &Self, lang: &Language) -> Option<i64> {
        if self.reflected != other.reflected {
            return None;
        }
        let n = lang.max_len();
        let reach = (self.total_radius() + other.total_radius()) as i64;
        let pairs: Vec<(Patch1D, Patch1D)> = lang
            .words(n)
            .iter()
            .map(|w| {
                let p = Patch1D::new(0, w.clone());
                Some((self.apply(&p)?, other.apply(&p)?))
            })
            .collect::<Option<_>>()?;
        (-reach..=reach).find(|&j| pairs.iter().all(|(a, b)| overlap_agrees(a, &b.shifted(j))))
    }

    pub fn describe(&self) -> String {
        let mut s = format!("radius {}", self.radius);
        if self.reflected {
            s.push_str(", reflected");
        }
        if self.shift_offset != 0 {
            s.push_str(&format!(", shift {}", self.shift_offset));
        }
        s.push_str(": ");
        let entries: Vec<String> = self
            .table
            .iter()
            .map(|(w, c)| format!("{}→{}", decode(&self.alphabet, w), self.alphabet[*c as usize]))
            .collect();
        s.push_str(&entries.join(" "));
        s
    }
}

fn overlap_agrees(a: &Patch1D, b: &Patch1D) -> bool {
    let lo = a.start.max(b.start);
    let hi = (a.start + a.len() as i64).min(b.start + b.len() as i64);
    lo < hi && (lo..hi).all(|p| a.get(p) == b.get(p))
}

impl fmt::Display for SlidingBlockRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Serialize for SlidingBlockRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table: BTreeMap<String, String> = self
            .table
            .iter()
            .map(|(w, c)| (decode(&self.alphabet, w), self.alphabet[*c as usize].to_string()))
            .collect();
        let mut st = s.serialize_struct("SlidingBlockRule", 4)?;
        st.serialize_field("radius", &self.radius)?;
        st.serialize_field("reflected", &self.reflected)?;
        st.serialize_field("shift_offset", &self.shift_offset)?;
        st.serialize_field("local_map", &table)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::language::{generate_language, LanguageSource};
    use crate::subshift::substitution::SubstitutionRule;

    fn tm(n: usize) -> Language {
        generate_language(&LanguageSource::Substitution(SubstitutionRule::thue_morse()), n).unwrap()
    }

    #[test]
    fn patch_geometry() {
        let p = Patch1D::new(2, vec![0, 1, 1]);
        let r = p.reflected();
        assert_eq!(r, Patch1D::new(-4, vec![1, 1, 0]));
        assert_eq!(r.reflected(), p);
        assert_eq!(p.shifted(1).start, 1);
        assert_eq!(p.get(3), Some(1));
        assert_eq!(p.get(5), None);
    }

    #[test]
    fn reflection_shift_relation() {
        let l = tm(12);
        let r = SlidingBlockRule::reflection(&l);
        for w in l.words(12) {
            let p = Patch1D::new(3, w.clone());
            // R∘S = S⁻¹∘R
            assert_eq!(r.apply(&p.shifted(1)).unwrap(), r.apply(&p).unwrap().shifted(-1));
        }
    }

    #[test]
    fn orders() {
        let l = tm(20);
        assert_eq!(SlidingBlockRule::letter_map(&l, &[1, 0], false).element_order(&l, 12), ElementOrder::Finite(2));
        assert_eq!(SlidingBlockRule::reflection(&l).element_order(&l, 12), ElementOrder::Finite(2));
        assert_eq!(SlidingBlockRule::identity(&l, 1).element_order(&l, 12), ElementOrder::Finite(1));
        let shift = SlidingBlockRule::shift_power(&l, 1, 1);
        assert_eq!(shift.element_order(&l, 5), ElementOrder::Infinite);
        assert_eq!(shift.order_modulo_shifts(&l, 5, true), Some((1, 1)));

        let c3 = generate_language(&LanguageSource::Substitution(SubstitutionRule::cyclic_thue_morse(3)), 20).unwrap();
        assert_eq!(
            SlidingBlockRule::letter_map(&c3, &[1, 2, 0], false).element_order(&c3, 12),
            ElementOrder::Finite(3)
        );
    }

    #[test]
    fn recode_and_compose() {
        let l = tm(16);
        let flip = SlidingBlockRule::letter_map(&l, &[1, 0], false);
        let big = flip.recode(&l, 2).unwrap();
        assert_eq!(big.radius(), 2);
        for w in l.words(16) {
            assert_eq!(big.apply_word(w).unwrap(), flip.apply_word(&w[2..14]).unwrap());
        }
        let id = flip.compose(&flip, &l).unwrap();
        assert_eq!(id, SlidingBlockRule::identity(&l, 0));
        let s1 = SlidingBlockRule::shift_power(&l, 1, 1);
        let s_1 = SlidingBlockRule::shift_power(&l, 1, -1);
        assert_eq!(s1.compose(&s_1, &l).unwrap(), SlidingBlockRule::identity(&l, 2));
        let r = SlidingBlockRule::reflection(&l);
        assert_eq!(r.compose(&r, &l).unwrap(), SlidingBlockRule::identity(&l, 0));
        assert_eq!(s1.equal_modulo_shift(&SlidingBlockRule::identity(&l, 0), &l), Some(1));
    }
}
