//! Descriptors for (reversing) symmetry groups.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Order of a group element, as far as it was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementOrder {
    Finite(u32),
    /// Not of finite order up to the cap used when it was computed.
    Infinite,
}

impl ElementOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            ElementOrder::Finite(k) => Some(k),
            ElementOrder::Infinite => None,
        }
    }
}

impl Serialize for ElementOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ElementOrder::Finite(k) => s.serialize_u32(*k),
            ElementOrder::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl fmt::Display for ElementOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementOrder::Finite(k) => write!(f, "{k}"),
            ElementOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// How the reversing symmetry group extends the symmetry group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// No reversor known: `R = S`.
    None,
    DirectProductC2,
    /// An involutory reversor: `R = S ⋊ C₂`.
    SemidirectC2,
    /// Reversors of order 4 only: `R = C∞ ⋊ C₄`.
    SemidirectC4,
    /// Reversors of orders 2 and 4: `(C₂×C∞)⋊C₂`.
    #[serde(rename = "mixed-(C2xCinf)xC2")]
    Mixed,
    /// Involutory reversors with `S = C₂ × C∞`: `R = C₂ × D∞`.
    DihedralInfinite,
}

/// Scope of a finding: a theorem-level statement, or evidence up to a bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Qualifier {
    Exact,
    SearchBounded { bound: u64, exhausted: bool },
    RadiusBounded { radius: usize, max_len: usize },
    WindowApproximate { radius: usize, max_len: usize, window: u64 },
}

/// Isomorphism-type descriptor of a symmetry or reversing symmetry group,
/// together with witnesses that were checked when the value was built.
#[derive(Debug, Clone, Serialize)]
pub struct GroupPresentation<W> {
    pub label: String,
    pub torsion: String,
    pub free_rank: usize,
    pub extension: Extension,
    pub reversor_orders: BTreeSet<ElementOrder>,
    pub witnesses: Vec<W>,
    pub qualifier: Qualifier,
}

impl<W> GroupPresentation<W> {
    /// Builds the descriptor, re-checking every witness with `verify`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        label: impl Into<String>,
        torsion: impl Into<String>,
        free_rank: usize,
        extension: Extension,
        reversor_orders: BTreeSet<ElementOrder>,
        witnesses: Vec<W>,
        qualifier: Qualifier,
        verify: impl Fn(&W) -> bool,
    ) -> Result<Self> {
        if extension != Extension::None && reversor_orders.is_empty() {
            return Err(Error::Invariant("extension without reversor orders".into()));
        }
        if let Some(i) = witnesses.iter().position(|w| !verify(w)) {
            return Err(Error::Invariant(format!("witness {i} failed re-verification")));
        }
        Ok(GroupPresentation {
            label: label.into(),
            torsion: torsion.into(),
            free_rank,
            extension,
            reversor_orders,
            witnesses,
            qualifier,
        })
    }

    pub fn is_reversible(&self) -> bool {
        self.extension != Extension::None
    }
}

impl<W> fmt::Display for GroupPresentation<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        match &self.qualifier {
            Qualifier::Exact => Ok(()),
            Qualifier::SearchBounded { bound, exhausted } => {
                write!(f, " (search bound {bound}{})", if *exhausted { "" } else { ", truncated" })
            }
            Qualifier::RadiusBounded { radius, .. } => write!(f, " (radius-bounded, r <= {radius})"),
            Qualifier::WindowApproximate { radius, window, .. } => {
                write!(f, " (window-approximate, window {window}, r <= {radius})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_requires_orders() {
        let r = GroupPresentation::<()>::new(
            "x",
            "C2",
            1,
            Extension::SemidirectC2,
            BTreeSet::new(),
            vec![],
            Qualifier::Exact,
            |_| true,
        );
        assert!(r.is_err());
    }

    #[test]
    fn failing_witness_rejected() {
        let r = GroupPresentation::new(
            "x",
            "C2",
            1,
            Extension::None,
            BTreeSet::new(),
            vec![1, 2, 3],
            Qualifier::Exact,
            |w| *w != 2,
        );
        assert_eq!(r.unwrap_err(), Error::Invariant("witness 1 failed re-verification".into()));
    }

    #[test]
    fn order_display() {
        assert_eq!(ElementOrder::Finite(4).to_string(), "4");
        assert_eq!(ElementOrder::Infinite.to_string(), "infinite");
        assert!(ElementOrder::Finite(24) < ElementOrder::Infinite);
    }
}
