//! Constant-size block substitutions on `Z²` and point symmetries of their
//! patches.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::patch::{LatticeMap, Patch2D, Point};
use crate::algebra::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSubstitution2D {
    alphabet: Vec<char>,
    size: usize,
    /// Rows top to bottom.
    images: BTreeMap<char, Vec<Vec<char>>>,
    /// Optional direction vector per letter, used to derive the letter
    /// permutation that accompanies a lattice map.
    directions: BTreeMap<char, Point>,
}

#[derive(Deserialize)]
struct BlockFile {
    size: usize,
    alphabet: Option<String>,
    images: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    directions: BTreeMap<String, (i64, i64)>,
}

fn single_letter(k: &str) -> Result<char> {
    let mut chars = k.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(Error::Malformed(format!("key {k:?} is not a single letter"))),
    }
}

impl BlockSubstitution2D {
    pub fn new(size: usize, images: BTreeMap<char, Vec<String>>) -> Result<Self> {
        if size < 2 {
            return Err(Error::Malformed("block size must be at least 2".into()));
        }
        let alphabet: Vec<char> = images.keys().copied().collect();
        let mut rows = BTreeMap::new();
        for (c, img) in images {
            let block: Vec<Vec<char>> = img.iter().map(|r| r.chars().collect()).collect();
            if block.len() != size || block.iter().any(|r| r.len() != size) {
                return Err(Error::Malformed(format!("image of {c:?} is not {size}×{size}")));
            }
            if let Some(&u) = block.iter().flatten().find(|u| !alphabet.contains(u)) {
                return Err(Error::UnknownLetter(u));
            }
            rows.insert(c, block);
        }
        Ok(BlockSubstitution2D { alphabet, size, images: rows, directions: BTreeMap::new() })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: BlockFile = toml::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut images = BTreeMap::new();
        for (k, v) in file.images {
            images.insert(single_letter(&k)?, v);
        }
        let mut rule = Self::new(file.size, images)?;
        if let Some(order) = file.alphabet {
            let order: Vec<char> = order.chars().collect();
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != rule.alphabet {
                return Err(Error::Malformed("alphabet does not match the image keys".into()));
            }
            rule.alphabet = order;
        }
        for (k, v) in file.directions {
            let c = single_letter(&k)?;
            if !rule.images.contains_key(&c) {
                return Err(Error::UnknownLetter(c));
            }
            rule.directions.insert(c, v);
        }
        Ok(rule)
    }

    /// The bundled chair table in arrow coding.
    pub fn chair() -> Self {
        Self::from_toml(include_str!("../../data/chair.toml")).expect("bundled table parses")
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn image(&self, c: char) -> Option<&[Vec<char>]> {
        self.images.get(&c).map(Vec::as_slice)
    }

    /// Some power of the letter incidence matrix is strictly positive.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        let idx = |c: char| self.alphabet.iter().position(|&a| a == c).expect("letter in alphabet");
        let mut base = vec![vec![false; n]; n];
        for (&c, block) in &self.images {
            for &u in block.iter().flatten() {
                base[idx(u)][idx(c)] = true;
            }
        }
        let mut p = base.clone();
        for _ in 0..(n - 1) * (n - 1) + 1 {
            if p.iter().all(|r| r.iter().all(|&b| b)) {
                return true;
            }
            p = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && base[k][j])).collect()).collect();
        }
        false
    }

    /// One inflation step: cell `(x, y)` becomes the block on
    /// `[kx, kx+k) × [ky, ky+k)`.
    pub fn apply(&self, patch: &Patch2D) -> Result<Patch2D> {
        let k = self.size;
        let (ox, oy) = patch.origin();
        let mut out = Patch2D::filled((ox * k as i64, oy * k as i64), patch.width() * k, patch.height() * k, ' ');
        for (x, y) in patch.points() {
            let c = patch.get((x, y)).expect("point of patch");
            let block = self.images.get(&c).ok_or(Error::UnknownLetter(c))?;
            for (row, letters) in block.iter().enumerate() {
                let by = y * k as i64 + (k - 1 - row) as i64;
                for (col, &u) in letters.iter().enumerate() {
                    out.set((x * k as i64 + col as i64, by), u);
                }
            }
        }
        Ok(out)
    }

    /// Letter permutation induced by a lattice map on the direction vectors.
    pub fn letter_perm(&self, m: &LatticeMap) -> Result<BTreeMap<char, char>> {
        if self.directions.is_empty() {
            return Err(Error::Malformed("rule has no direction data".into()));
        }
        let by_dir: BTreeMap<Point, char> = self.directions.iter().map(|(&c, &d)| (d, c)).collect();
        self.directions
            .iter()
            .map(|(&c, &d)| {
                let image = m.apply_point(d);
                by_dir
                    .get(&image)
                    .map(|&u| (c, u))
                    .ok_or_else(|| Error::Malformed(format!("direction of {c:?} has no image letter")))
            })
            .collect()
    }
}

/// `iterations` inflation steps. A seed centred at the origin stays centred.
pub fn block_substitution_patch(rule: &BlockSubstitution2D, seed: &Patch2D, iterations: usize) -> Result<Patch2D> {
    let mut p = seed.clone();
    for _ in 0..iterations {
        p = rule.apply(&p)?;
    }
    Ok(p)
}

/// The eight signed permutation matrices, rotations first.
pub fn dihedral_d4() -> Vec<(&'static str, IntMatrix)> {
    vec![
        ("identity", IntMatrix::from_i64([[1, 0], [0, 1]])),
        ("rotation 90°", IntMatrix::from_i64([[0, -1], [1, 0]])),
        ("rotation 180°", IntMatrix::from_i64([[-1, 0], [0, -1]])),
        ("rotation 270°", IntMatrix::from_i64([[0, 1], [-1, 0]])),
        ("reflection x-axis", IntMatrix::from_i64([[1, 0], [0, -1]])),
        ("reflection y-axis", IntMatrix::from_i64([[-1, 0], [0, 1]])),
        ("reflection diagonal", IntMatrix::from_i64([[0, 1], [1, 0]])),
        ("reflection antidiagonal", IntMatrix::from_i64([[0, -1], [-1, 0]])),
    ]
}

fn is_signed_permutation(m: &LatticeMap) -> bool {
    let (a, b) = (m.apply_point((1, 0)), m.apply_point((0, 1)));
    let unit = |(x, y): Point| x.abs() + y.abs() == 1;
    unit(a) && unit(b)
}

/// True iff transporting the patch about its centre and permuting letters
/// reproduces it. Cell `c` sits at `2c + 1 − center2` in doubled coordinates.
pub fn verify_point_symmetry(patch: &Patch2D, map: &LatticeMap) -> Result<bool> {
    if !is_signed_permutation(map) {
        return Err(Error::Malformed(format!("{} is not a symmetry of the square", map.matrix)));
    }
    let swaps_axes = map.apply_point((1, 0)).0 == 0;
    if swaps_axes && patch.width() != patch.height() {
        return Err(Error::NotSquarePatch);
    }
    let (cx, cy) = patch.center2();
    for (x, y) in patch.points() {
        let (qx, qy) = map.apply_point((2 * x + 1 - cx, 2 * y + 1 - cy));
        let target = ((qx + cx - 1) / 2, (qy + cy - 1) / 2);
        let here = map.permute(patch.get((x, y)).expect("point of patch"));
        if patch.get(target) != Some(here) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outward arrows around the origin, invariant under the full `D₄`.
pub fn chair_seed() -> Patch2D {
    Patch2D::from_text("ba\ncd\n", (-1, -1)).expect("valid seed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chair_table() {
        let chair = BlockSubstitution2D::chair();
        assert_eq!(chair.alphabet(), &['a', 'b', 'c', 'd']);
        assert!(chair.is_primitive());
        let rot = LatticeMap::new(dihedral_d4()[1].1.clone()).unwrap();
        let perm = chair.letter_perm(&rot).unwrap();
        assert_eq!(perm.values().collect::<String>(), "bcda");
    }

    #[test]
    fn inflation() {
        let chair = BlockSubstitution2D::chair();
        let seed = chair_seed();
        assert_eq!(block_substitution_patch(&chair, &seed, 0).unwrap(), seed);
        let p = block_substitution_patch(&chair, &seed, 3).unwrap();
        assert_eq!((p.width(), p.height(), p.origin()), (16, 16, (-8, -8)));
        assert_eq!(p.center2(), (0, 0));
        let images: BTreeMap<char, Vec<String>> =
            [('a', vec!["aa".into(), "aa".into()]), ('b', vec!["aa".into(), "ab".into()])].into();
        let constant = BlockSubstitution2D::new(2, images).unwrap();
        let seed = Patch2D::from_text("ab\n", (0, 0)).unwrap();
        let q = block_substitution_patch(&constant, &seed, 2).unwrap();
        assert!(q.points().all(|pt| pt == (7, 0) || q.get(pt) == Some('a')));
    }

    #[test]
    fn chair_has_d4() {
        let chair = BlockSubstitution2D::chair();
        let p = block_substitution_patch(&chair, &chair_seed(), 3).unwrap();
        for (name, m) in dihedral_d4() {
            let map = LatticeMap::new(m).unwrap();
            let map = map.clone().with_perm(chair.letter_perm(&map).unwrap());
            assert!(verify_point_symmetry(&p, &map).unwrap(), "{name}");
        }
        // without the letter permutation the rotation fails
        let rot = LatticeMap::new(dihedral_d4()[1].1.clone()).unwrap();
        assert!(!verify_point_symmetry(&p, &rot).unwrap());
    }

    #[test]
    fn point_symmetry_edge_cases() {
        let uniform = Patch2D::filled((0, 0), 3, 3, 'a');
        for (_, m) in dihedral_d4() {
            assert!(verify_point_symmetry(&uniform, &LatticeMap::new(m).unwrap()).unwrap());
        }
        let mut marked = uniform.clone();
        marked.set((0, 0), 'b');
        let rot = LatticeMap::new(dihedral_d4()[1].1.clone()).unwrap();
        assert!(!verify_point_symmetry(&marked, &rot).unwrap());
        let wide = Patch2D::filled((0, 0), 3, 2, 'a');
        assert_eq!(verify_point_symmetry(&wide, &rot), Err(Error::NotSquarePatch));
        let shear = LatticeMap::from_i64([[1, 1], [0, 1]]).unwrap();
        assert!(verify_point_symmetry(&uniform, &shear).is_err());
    }
}
