use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Word;
use crate::error::{Error, Result};

/// Letter-to-word substitution on an ordered alphabet. Letters are stored as
/// indices into `alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRule {
    alphabet: Vec<char>,
    images: Vec<Word>,
}

#[derive(Deserialize)]
struct RuleFile {
    alphabet: Option<String>,
    images: BTreeMap<String, String>,
}

impl SubstitutionRule {
    /// Builds a rule from `(letter, image)` pairs; the alphabet order is the
    /// order of the pairs.
    pub fn new<S: AsRef<str>>(pairs: &[(char, S)]) -> Result<Self> {
        let alphabet: Vec<char> = pairs.iter().map(|(c, _)| *c).collect();
        for (i, c) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(c) {
                return Err(Error::Malformed(format!("letter {c:?} listed twice")));
            }
        }
        if alphabet.len() > 64 {
            return Err(Error::Alphabet("more than 64 letters".into()));
        }
        let mut images = Vec::with_capacity(pairs.len());
        for (c, img) in pairs {
            let img = img.as_ref();
            if img.is_empty() {
                return Err(Error::Malformed(format!("empty image for {c:?}")));
            }
            images.push(encode(&alphabet, img)?);
        }
        Ok(SubstitutionRule { alphabet, images })
    }

    /// Map form, alphabet in sorted letter order.
    pub fn from_map(images: &BTreeMap<char, String>) -> Result<Self> {
        let pairs: Vec<(char, &str)> = images.iter().map(|(c, w)| (*c, w.as_str())).collect();
        Self::new(&pairs)
    }

    /// Reads `[images]` with one `letter = "word"` entry per letter and an
    /// optional `alphabet = "..."` fixing the letter order.
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: RuleFile = toml::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut map = BTreeMap::new();
        for (k, v) in file.images {
            let mut chars = k.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::Malformed(format!("key {k:?} is not a single letter")));
            };
            map.insert(c, v);
        }
        match file.alphabet {
            None => Self::from_map(&map),
            Some(order) => {
                let order: Vec<char> = order.chars().collect();
                if order.len() != map.len() || order.iter().any(|c| !map.contains_key(c)) {
                    return Err(Error::Malformed("alphabet does not match the image keys".into()));
                }
                let pairs: Vec<(char, &str)> = order.iter().map(|c| (*c, map[c].as_str())).collect();
                Self::new(&pairs)
            }
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn image(&self, letter: u8) -> &[u8] {
        &self.images[letter as usize]
    }

    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn apply(&self, w: &[u8]) -> Word {
        w.iter().flat_map(|&c| self.images[c as usize].iter().copied()).collect()
    }

    /// `m[i][j]` = number of occurrences of letter `i` in the image of `j`.
    pub fn incidence_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.alphabet.len();
        let mut m = vec![vec![0u64; n]; n];
        for (j, img) in self.images.iter().enumerate() {
            for &c in img {
                m[c as usize][j] += 1;
            }
        }
        m
    }

    /// Some power of the incidence matrix is strictly positive. Checked on
    /// the zero pattern up to the Wielandt bound `(n−1)² + 1`.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        let base: Vec<Vec<bool>> = self.incidence_matrix().iter().map(|r| r.iter().map(|&v| v > 0).collect()).collect();
        let mut p = base.clone();
        for _ in 0..(n - 1) * (n - 1) + 1 {
            if p.iter().all(|r| r.iter().all(|&b| b)) {
                return true;
            }
            p = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && base[k][j])).collect()).collect();
        }
        false
    }

    pub fn to_toml(&self) -> String {
        let mut s = format!("alphabet = \"{}\"\n\n[images]\n", self.alphabet.iter().collect::<String>());
        for (c, img) in self.alphabet.iter().zip(&self.images) {
            s.push_str(&format!("{c} = \"{}\"\n", decode(&self.alphabet, img)));
        }
        s
    }

    pub fn images_map(&self) -> BTreeMap<char, String> {
        self.alphabet.iter().zip(&self.images).map(|(c, w)| (*c, decode(&self.alphabet, w))).collect()
    }

    pub fn thue_morse() -> Self {
        Self::new(&[('a', "ab"), ('b', "ba")]).expect("valid rule")
    }

    pub fn period_doubling() -> Self {
        Self::new(&[('a', "ab"), ('b', "aa")]).expect("valid rule")
    }

    pub fn fibonacci() -> Self {
        Self::new(&[('a', "ab"), ('b', "a")]).expect("valid rule")
    }

    /// `a ↦ aba, b ↦ baa`, an irreversible example.
    pub fn aba_baa() -> Self {
        Self::new(&[('a', "aba"), ('b', "baa")]).expect("valid rule")
    }

    /// `a ↦ a^k b^l, b ↦ b^k a^l`
    pub fn k_l_family(k: usize, l: usize) -> Self {
        let a = format!("{}{}", "a".repeat(k), "b".repeat(l));
        let b = format!("{}{}", "b".repeat(k), "a".repeat(l));
        Self::new(&[('a', a), ('b', b)]).expect("valid rule")
    }

    /// `a_i ↦ a_i a_{i+1}` with indices mod `n`, letters `a, b, c, …`.
    pub fn cyclic_thue_morse(n: usize) -> Self {
        assert!((2..=26).contains(&n), "cyclic Thue–Morse needs 2..=26 letters");
        let letter = |i: usize| (b'a' + (i % n) as u8) as char;
        let pairs: Vec<(char, String)> =
            (0..n).map(|i| (letter(i), format!("{}{}", letter(i), letter(i + 1)))).collect();
        Self::new(&pairs).expect("valid rule")
    }

    /// The bundled four-letter Rudin–Shapiro coding.
    pub fn rudin_shapiro() -> Self {
        Self::from_toml(include_str!("../../data/rudin_shapiro.toml")).expect("bundled rule parses")
    }
}

impl fmt::Display for SubstitutionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, img)) in self.alphabet.iter().zip(&self.images).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c} ↦ {}", decode(&self.alphabet, img))?;
        }
        Ok(())
    }
}

impl Serialize for SubstitutionRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images_map().serialize(s)
    }
}

pub fn encode(alphabet: &[char], text: &str) -> Result<Word> {
    text.chars()
        .map(|c| alphabet.iter().position(|&a| a == c).map(|i| i as u8).ok_or(Error::UnknownLetter(c)))
        .collect()
}

pub fn decode(alphabet: &[char], w: &[u8]) -> String {
    w.iter().map(|&c| alphabet[c as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitivity() {
        assert!(SubstitutionRule::thue_morse().is_primitive());
        assert!(SubstitutionRule::fibonacci().is_primitive());
        assert!(SubstitutionRule::rudin_shapiro().is_primitive());
        assert!(SubstitutionRule::cyclic_thue_morse(4).is_primitive());
        let reducible = SubstitutionRule::new(&[('a', "aa"), ('b', "ab")]).unwrap();
        assert!(!reducible.is_primitive());
        let periodic = SubstitutionRule::new(&[('a', "b"), ('b', "a")]).unwrap();
        assert!(!periodic.is_primitive());
    }

    #[test]
    fn toml_round_trip() {
        let r = SubstitutionRule::rudin_shapiro();
        assert_eq!(r.alphabet(), &['a', 'b', 'c', 'd']);
        assert_eq!(r.to_string(), "a ↦ ab, b ↦ ac, c ↦ db, d ↦ dc");
        assert_eq!(SubstitutionRule::from_toml(&r.to_toml()).unwrap(), r);
        let ordered = SubstitutionRule::from_toml("alphabet = \"ba\"\n[images]\na = \"ab\"\nb = \"ba\"\n").unwrap();
        assert_eq!(ordered.alphabet(), &['b', 'a']);
    }

    #[test]
    fn malformed_rules() {
        assert_eq!(SubstitutionRule::new(&[('a', "ax")]).unwrap_err(), Error::UnknownLetter('x'));
        assert!(SubstitutionRule::new(&[('a', "")]).is_err());
        assert!(SubstitutionRule::from_toml("[images]\nab = \"a\"").is_err());
    }

    #[test]
    fn families() {
        assert_eq!(SubstitutionRule::k_l_family(2, 1).to_string(), "a ↦ aab, b ↦ bba");
        assert_eq!(SubstitutionRule::k_l_family(1, 1), SubstitutionRule::thue_morse());
        assert_eq!(SubstitutionRule::cyclic_thue_morse(3).to_string(), "a ↦ ab, b ↦ bc, c ↦ ca");
    }
}
