use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::substitution::{decode, SubstitutionRule};
use super::Word;
use crate::error::{Error, Result};

/// Largest full-shift language that will be materialized.
const FULL_SHIFT_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub enum LanguageSource {
    Substitution(SubstitutionRule),
    FullShift(Vec<char>),
    /// Indicator of the square-free integers on `[-half_width, half_width]`.
    SquareFreeWindow {
        half_width: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LanguageKind {
    Exact,
    WindowApproximate { window: u64 },
}

/// Legal words of a subshift up to length `max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    alphabet: Vec<char>,
    max_len: usize,
    /// `words[n]` holds the legal words of length `n`.
    words: Vec<BTreeSet<Word>>,
    kind: LanguageKind,
}

fn factors_into(w: &[u8], n: usize, out: &mut BTreeSet<Word>) -> bool {
    let mut grew = false;
    if w.len() >= n {
        for f in w.windows(n) {
            if !out.contains(f) {
                out.insert(f.to_vec());
                grew = true;
            }
        }
    }
    grew
}

impl Language {
    /// Builds the language from a finite set of words of length `max_len`;
    /// shorter lengths are filled by taking factors.
    pub fn from_top_words(alphabet: Vec<char>, max_len: usize, top: BTreeSet<Word>, kind: LanguageKind) -> Self {
        let mut words = vec![BTreeSet::new(); max_len + 1];
        words[0].insert(Vec::new());
        for n in 1..max_len {
            for w in &top {
                factors_into(w, n, &mut words[n]);
            }
        }
        words[max_len] = top;
        Language { alphabet, max_len, words, kind }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn kind(&self) -> LanguageKind {
        self.kind
    }

    pub fn words(&self, n: usize) -> &BTreeSet<Word> {
        &self.words[n]
    }

    pub fn complexity(&self, n: usize) -> usize {
        self.words[n].len()
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        w.len() <= self.max_len && self.words[w.len()].contains(w)
    }

    pub fn word_set(&self, n: usize) -> HashSet<Word> {
        self.words[n].iter().cloned().collect()
    }

    /// The language of the reflected subshift.
    pub fn reversed(&self) -> Self {
        let words =
            self.words.iter().map(|set| set.iter().map(|w| w.iter().rev().copied().collect()).collect()).collect();
        Language { alphabet: self.alphabet.clone(), max_len: self.max_len, words, kind: self.kind }
    }

    /// The reversal of every stored legal word is legal.
    pub fn is_reflection_invariant(&self) -> bool {
        self.first_non_reversible_word().is_none()
    }

    pub fn first_non_reversible_word(&self) -> Option<Word> {
        self.words.iter().flatten().find_map(|w| {
            let r: Word = w.iter().rev().copied().collect();
            (!self.words[r.len()].contains(&r)).then(|| w.clone())
        })
    }

    pub fn is_factor_closed(&self) -> bool {
        (1..=self.max_len).all(|n| {
            self.words[n].iter().all(|w| self.words[n - 1].contains(&w[1..]) && self.words[n - 1].contains(&w[..n - 1]))
        })
    }

    /// Every legal word of length `< max_len` extends by one letter on each side.
    pub fn is_extendable(&self) -> bool {
        let k = self.alphabet.len() as u8;
        (0..self.max_len).all(|n| {
            self.words[n].iter().all(|w| {
                let right = (0..k).any(|c| {
                    let mut v = w.clone();
                    v.push(c);
                    self.words[n + 1].contains(&v)
                });
                let left = (0..k).any(|c| {
                    let mut v = vec![c];
                    v.extend_from_slice(w);
                    self.words[n + 1].contains(&v)
                });
                left && right
            })
        })
    }

    pub fn decode(&self, w: &[u8]) -> String {
        decode(&self.alphabet, w)
    }

    /// Plain-text export: a `# length n` header per length, then one word
    /// per line in lexicographic order.
    pub fn export_text(&self) -> String {
        let mut s = String::new();
        for n in 1..=self.max_len {
            let _ = writeln!(s, "# length {n}");
            for w in &self.words[n] {
                let _ = writeln!(s, "{}", self.decode(w));
            }
        }
        s
    }
}

/// Legal words up to `max_len` for the given source.
///
/// For a primitive substitution the set of legal `max_len`-words is closed
/// under `L ↦ L ∪ factors(σ(v))`, `v` ranging over legal words long enough
/// that `σ(v)` covers any window of length `max_len`. Starting from the
/// factors of `σ^k(a)` the closure reaches the exact language.
pub fn generate_language(source: &LanguageSource, max_len: usize) -> Result<Language> {
    if max_len == 0 {
        return Err(Error::Malformed("max_len must be positive".into()));
    }
    match source {
        LanguageSource::Substitution(rule) => substitution_language(rule, max_len),
        LanguageSource::FullShift(alphabet) => full_shift_language(alphabet, max_len),
        LanguageSource::SquareFreeWindow { half_width } => square_free_language(*half_width, max_len),
    }
}

fn substitution_language(rule: &SubstitutionRule, max_len: usize) -> Result<Language> {
    if !rule.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let n_letters = rule.alphabet().len() as u8;
    let mut top = BTreeSet::new();
    for a in 0..n_letters {
        let mut w = vec![a];
        while w.len() < 2 * max_len + 2 {
            w = rule.apply(&w);
        }
        factors_into(&w, max_len, &mut top);
    }
    let min_len = rule.min_image_len().max(1);
    let cover = (max_len.saturating_sub(2)).div_ceil(min_len).saturating_add(2).min(max_len);
    loop {
        let mut sources = BTreeSet::new();
        for w in &top {
            factors_into(w, cover, &mut sources);
        }
        let mut grew = false;
        for v in &sources {
            grew |= factors_into(&rule.apply(v), max_len, &mut top);
        }
        if !grew {
            break;
        }
    }
    Ok(Language::from_top_words(rule.alphabet().to_vec(), max_len, top, LanguageKind::Exact))
}

fn full_shift_language(alphabet: &[char], max_len: usize) -> Result<Language> {
    let k = alphabet.len() as u64;
    if k == 0 || k.checked_pow(max_len as u32).is_none_or(|t| t > FULL_SHIFT_LIMIT) {
        return Err(Error::Malformed(format!("full shift on {k} letters too large at length {max_len}")));
    }
    let mut top = BTreeSet::new();
    let mut w = vec![0u8; max_len];
    'outer: loop {
        top.insert(w.clone());
        for i in (0..max_len).rev() {
            if (w[i] as u64) + 1 < k {
                w[i] += 1;
                continue 'outer;
            }
            w[i] = 0;
        }
        break;
    }
    Ok(Language::from_top_words(alphabet.to_vec(), max_len, top, LanguageKind::Exact))
}

/// `1` at square-free `n`, `0` elsewhere (including `n = 0`), for
/// `n ∈ [-half_width, half_width]`.
pub fn square_free_indicator(half_width: u64) -> Word {
    let n = half_width as usize;
    let mut free = vec![true; n + 1];
    free[0] = false;
    let mut k = 2usize;
    while k * k <= n {
        let mut m = k * k;
        while m <= n {
            free[m] = false;
            m += k * k;
        }
        k += 1;
    }
    (-(half_width as i64)..=half_width as i64).map(|i| free[i.unsigned_abs() as usize] as u8).collect()
}

fn square_free_language(half_width: u64, max_len: usize) -> Result<Language> {
    if half_width < 10 * max_len as u64 {
        return Err(Error::WindowTooSmall(format!("half-width {half_width} is below 10 × max_len = {}", 10 * max_len)));
    }
    let word = square_free_indicator(half_width);
    let mut top = BTreeSet::new();
    factors_into(&word, max_len, &mut top);
    Ok(Language::from_top_words(
        vec!['0', '1'],
        max_len,
        top,
        LanguageKind::WindowApproximate { window: 2 * half_width + 1 },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::substitution::encode;

    fn lang(rule: SubstitutionRule, n: usize) -> Language {
        generate_language(&LanguageSource::Substitution(rule), n).unwrap()
    }

    fn words(l: &Language, n: usize) -> Vec<String> {
        l.words(n).iter().map(|w| l.decode(w)).collect()
    }

    /// Oracle: factors of a long iterate from letter `a`.
    fn brute_force(rule: &SubstitutionRule, n: usize) -> BTreeSet<Word> {
        let mut w = vec![0u8];
        while w.len() < 20_000 {
            w = rule.apply(&w);
        }
        let mut out = BTreeSet::new();
        factors_into(&w, n, &mut out);
        out
    }

    #[test]
    fn length_two_words() {
        assert_eq!(words(&lang(SubstitutionRule::thue_morse(), 2), 2), ["aa", "ab", "ba", "bb"]);
        assert_eq!(words(&lang(SubstitutionRule::period_doubling(), 2), 2), ["aa", "ab", "ba"]);
        let fib = lang(SubstitutionRule::fibonacci(), 2);
        assert_eq!(words(&fib, 2), ["aa", "ab", "ba"]);
        assert_eq!(fib.complexity(2), 3);
    }

    #[test]
    fn matches_long_iterate() {
        for rule in [
            SubstitutionRule::thue_morse(),
            SubstitutionRule::period_doubling(),
            SubstitutionRule::fibonacci(),
            SubstitutionRule::aba_baa(),
            SubstitutionRule::rudin_shapiro(),
            SubstitutionRule::cyclic_thue_morse(3),
            SubstitutionRule::k_l_family(2, 1),
        ] {
            let l = lang(rule.clone(), 16);
            assert_eq!(l.words(16), &brute_force(&rule, 16), "{rule}");
            assert!(l.is_factor_closed());
            assert!(l.is_extendable());
        }
    }

    #[test]
    fn sturmian_complexity() {
        let l = lang(SubstitutionRule::fibonacci(), 30);
        for n in 1..=30 {
            assert_eq!(l.complexity(n), n + 1);
        }
    }

    #[test]
    fn reflection_invariance() {
        assert!(lang(SubstitutionRule::thue_morse(), 20).is_reflection_invariant());
        assert!(lang(SubstitutionRule::fibonacci(), 20).is_reflection_invariant());
        let l = lang(SubstitutionRule::aba_baa(), 20);
        assert!(!l.is_reflection_invariant());
        let w = l.first_non_reversible_word().unwrap();
        let r: Word = w.iter().rev().copied().collect();
        assert!(!l.contains(&r));
    }

    #[test]
    fn non_primitive_rejected() {
        let r = SubstitutionRule::new(&[('a', "aa"), ('b', "ab")]).unwrap();
        assert_eq!(generate_language(&LanguageSource::Substitution(r), 4), Err(Error::NotPrimitive));
    }

    #[test]
    fn full_shift() {
        let l = generate_language(&LanguageSource::FullShift(vec!['a', 'b']), 6).unwrap();
        assert_eq!(l.complexity(6), 64);
        assert_eq!(l.complexity(3), 8);
        assert!(generate_language(&LanguageSource::FullShift(vec!['a', 'b']), 40).is_err());
    }

    #[test]
    fn square_free_window() {
        let ind = square_free_indicator(12);
        // n = -12..=12
        let s: String = ind.iter().map(|b| char::from(b'0' + b)).collect();
        assert_eq!(s, "0110011101110111011100110");
        assert!(matches!(
            generate_language(&LanguageSource::SquareFreeWindow { half_width: 50 }, 8),
            Err(Error::WindowTooSmall(_))
        ));
        let l = generate_language(&LanguageSource::SquareFreeWindow { half_width: 400 }, 8).unwrap();
        assert_eq!(l.kind(), LanguageKind::WindowApproximate { window: 801 });
        // four consecutive integers always contain a multiple of 4
        assert!(!l.contains(&encode(l.alphabet(), "1111").unwrap()));
        assert!(l.contains(&encode(l.alphabet(), "111").unwrap()));
        assert!(l.is_reflection_invariant());
    }

    #[test]
    fn export_format() {
        let l = lang(SubstitutionRule::period_doubling(), 2);
        assert_eq!(l.export_text(), "# length 1\na\nb\n# length 2\naa\nab\nba\n");
    }
}
