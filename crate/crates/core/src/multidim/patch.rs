use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::IntMatrix;
use crate::error::{Error, Result};

pub type Point = (i64, i64);

/// Values on finitely many lattice points, in absolute coordinates.
pub type SparsePatch = BTreeMap<Point, char>;

/// A fully specified rectangle of letters. `values` is row-major starting
/// from the bottom row `y = origin.1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Patch2D {
    origin: Point,
    width: usize,
    height: usize,
    values: Vec<char>,
}

impl Patch2D {
    pub fn new(origin: Point, width: usize, height: usize, values: Vec<char>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Malformed("empty patch".into()));
        }
        if values.len() != width * height {
            return Err(Error::Malformed(format!("{} values for a {width}×{height} patch", values.len())));
        }
        Ok(Patch2D { origin, width, height, values })
    }

    pub fn filled(origin: Point, width: usize, height: usize, c: char) -> Self {
        Patch2D { origin, width, height, values: vec![c; width * height] }
    }

    pub fn from_fn(origin: Point, width: usize, height: usize, f: impl Fn(Point) -> char) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height as i64 {
            for x in 0..width as i64 {
                values.push(f((origin.0 + x, origin.1 + y)));
            }
        }
        Patch2D { origin, width, height, values }
    }

    /// Rows as text, the first line being the top row.
    pub fn from_text(text: &str, origin: Point) -> Result<Self> {
        let rows: Vec<Vec<char>> =
            text.lines().map(str::trim_end).filter(|l| !l.is_empty()).map(|l| l.chars().collect()).collect();
        let width = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::Malformed(format!("row {i} has {} letters, expected {width}", r.len())));
        }
        let height = rows.len();
        let values = rows.into_iter().rev().flatten().collect();
        Self::new(origin, width, height, values)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity((self.width + 1) * self.height);
        for y in (0..self.height).rev() {
            s.extend(&self.values[y * self.width..(y + 1) * self.width]);
            s.push('\n');
        }
        s
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn contains(&self, (x, y): Point) -> bool {
        let (dx, dy) = (x - self.origin.0, y - self.origin.1);
        dx >= 0 && dy >= 0 && (dx as usize) < self.width && (dy as usize) < self.height
    }

    pub fn get(&self, p: Point) -> Option<char> {
        self.contains(p).then(|| {
            let (dx, dy) = ((p.0 - self.origin.0) as usize, (p.1 - self.origin.1) as usize);
            self.values[dy * self.width + dx]
        })
    }

    pub fn set(&mut self, p: Point, c: char) {
        assert!(self.contains(p), "{p:?} outside patch");
        let (dx, dy) = ((p.0 - self.origin.0) as usize, (p.1 - self.origin.1) as usize);
        self.values[dy * self.width + dx] = c;
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        let (ox, oy) = self.origin;
        (0..self.height as i64).flat_map(move |y| (0..self.width as i64).map(move |x| (ox + x, oy + y)))
    }

    pub fn letters(&self) -> BTreeSet<char> {
        self.values.iter().copied().collect()
    }

    pub fn to_sparse(&self) -> SparsePatch {
        self.points().zip(self.values.iter().copied()).collect()
    }

    /// Twice the centre, so that cell `c` sits at `2c + 1 − center2` relative
    /// to the centre.
    pub fn center2(&self) -> Point {
        (2 * self.origin.0 + self.width as i64, 2 * self.origin.1 + self.height as i64)
    }
}

impl fmt::Display for Patch2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for Patch2D {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<String> = self.to_text().lines().map(str::to_string).collect();
        let mut st = s.serialize_struct("Patch2D", 2)?;
        st.serialize_field("origin", &self.origin)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// `(h_M x)_n = x_{M⁻¹ n}`, followed by a letter permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeMap {
    pub matrix: IntMatrix,
    pub letter_perm: BTreeMap<char, char>,
    #[serde(skip)]
    m: [[i64; 2]; 2],
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, actual: matrix.dim() });
        }
        let det = matrix.det();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let rows = matrix.to_i64_rows().ok_or_else(|| Error::Malformed("entries exceed i64".into()))?;
        let m = [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]];
        Ok(LatticeMap { matrix, letter_perm: BTreeMap::new(), m })
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn with_perm(mut self, perm: impl IntoIterator<Item = (char, char)>) -> Self {
        self.letter_perm = perm.into_iter().collect();
        self
    }

    pub fn apply_point(&self, (x, y): Point) -> Point {
        let m = &self.m;
        (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }

    pub fn permute(&self, c: char) -> char {
        self.letter_perm.get(&c).copied().unwrap_or(c)
    }

    /// The value at `m` moves to `M·m`.
    pub fn transport(&self, patch: &SparsePatch) -> SparsePatch {
        patch.iter().map(|(&p, &c)| (self.apply_point(p), self.permute(c))).collect()
    }

    /// `self ∘ other`
    pub fn then(&self, other: &LatticeMap) -> LatticeMap {
        let matrix = &other.matrix * &self.matrix;
        let perm: BTreeMap<char, char> = self
            .letter_perm
            .keys()
            .chain(other.letter_perm.keys())
            .map(|&c| (c, other.permute(self.permute(c))))
            .collect();
        LatticeMap::new(matrix).expect("product of unimodular maps").with_perm(perm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let p = Patch2D::from_text("ab\ncd\n", (0, 0)).unwrap();
        assert_eq!(p.get((0, 1)), Some('a'));
        assert_eq!(p.get((1, 0)), Some('d'));
        assert_eq!(p.to_text(), "ab\ncd\n");
        assert!(Patch2D::from_text("ab\nc\n", (0, 0)).is_err());
    }

    #[test]
    fn transport_moves_values() {
        let p = Patch2D::from_text("01\n10\n", (0, 0)).unwrap();
        let swap = LatticeMap::from_i64([[0, 1], [1, 0]]).unwrap();
        let t = swap.transport(&p.to_sparse());
        // value at (1,0) goes to (0,1)
        assert_eq!(t[&(0, 1)], p.get((1, 0)).unwrap());
        assert!(LatticeMap::from_i64([[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn composition_order() {
        let a = LatticeMap::from_i64([[1, 1], [0, 1]]).unwrap();
        let b = LatticeMap::from_i64([[0, -1], [1, 0]]).unwrap();
        let p = Patch2D::from_fn((-2, -2), 4, 4, |(x, y)| if (x + 2 * y).rem_euclid(3) == 0 { '1' } else { '0' });
        let s = p.to_sparse();
        assert_eq!(b.transport(&a.transport(&s)), a.then(&b).transport(&s));
    }

    #[test]
    fn centre() {
        let p = Patch2D::filled((-1, -1), 2, 2, 'a');
        assert_eq!(p.center2(), (0, 0));
    }
}
