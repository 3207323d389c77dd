//! Total maps of a finite set `V = {1..n}` into itself, and their action on tuples.
//!
//! Points are stored 0-based; every textual form (parsing, `Display`, serde) is 1-based,
//! so `[2,3,4,1,5]` is the map sending 1 to 2, 2 to 3 and so on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A total map `V -> V` stored as its image table.
///
/// Ordering is lexicographic on the image table, which makes "the smallest idempotent"
/// a well defined choice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Box<[u32]>,
}

// Lets hash maps keyed by transformations be probed with a borrowed image table.
impl std::borrow::Borrow<[u32]> for Transformation {
    fn borrow(&self) -> &[u32] {
        &self.images
    }
}

impl Transformation {
    /// Builds a map from 1-based images.
    pub fn new(images: &[u32]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidTransformation("empty image table".into()));
        }
        if let Some((i, &y)) = images
            .iter()
            .enumerate()
            .find(|(_, &y)| y == 0 || y as usize > n)
        {
            return Err(Error::InvalidTransformation(format!(
                "image of {} is {}, outside 1..={}",
                i + 1,
                y,
                n
            )));
        }
        Ok(Self {
            images: images.iter().map(|&y| y - 1).collect(),
        })
    }

    /// Builds a map from 0-based images.
    pub fn from_zero_based(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        if n == 0 || images.iter().any(|&y| y as usize >= n) {
            return Err(Error::InvalidTransformation(format!(
                "0-based image table {images:?} is not a map of a {n}-point set"
            )));
        }
        Ok(Self {
            images: images.into_boxed_slice(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u32).collect(),
        }
    }

    pub fn constant(n: usize, point: usize) -> Self {
        assert!(point < n);
        Self {
            images: vec![point as u32; n].into_boxed_slice(),
        }
    }

    /// Size of the domain.
    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// 0-based images.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Image of the 0-based point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Transformation) -> Result<Transformation> {
        if self.n() != other.n() {
            return Err(Error::DomainMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Transformation) -> Transformation {
        Transformation {
            images: other
                .images
                .iter()
                .map(|&y| self.images[y as usize])
                .collect(),
        }
    }

    /// Number of distinct image values.
    pub fn rank(&self) -> usize {
        self.image_set().len()
    }

    /// Sorted 0-based image set `fV`.
    pub fn image_set(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        for &y in self.images.iter() {
            seen[y as usize] = true;
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect()
    }

    pub fn is_idempotent(&self) -> bool {
        self.images
            .iter()
            .all(|&y| self.images[y as usize] == y)
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.n()
    }

    /// Componentwise action `f(x¹,…,xᵐ) = (fx¹,…,fxᵐ)`.
    pub fn apply_tuple(&self, x: &Tuple) -> Result<Tuple> {
        if let Some(&bad) = x.points.iter().find(|&&p| p as usize >= self.n()) {
            return Err(Error::InvalidTuple(format!(
                "point {} outside the domain of a {}-point map",
                bad + 1,
                self.n()
            )));
        }
        Ok(self.apply_tuple_unchecked(x))
    }

    #[inline]
    pub(crate) fn apply_tuple_unchecked(&self, x: &Tuple) -> Tuple {
        Tuple {
            points: x.points.iter().map(|&p| self.images[p as usize]).collect(),
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, '[', ']', &self.images)
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = parse_list(s, '[', ']').map_err(Error::InvalidTransformation)?;
        Transformation::new(&images)
    }
}

impl Serialize for Transformation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Transformation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of `V^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    points: Box<[u32]>,
}

impl Tuple {
    /// Builds a tuple from 1-based points; `n` bounds the entries.
    pub fn new(points: &[u32], n: usize) -> Result<Self> {
        if let Some(&bad) = points.iter().find(|&&p| p == 0 || p as usize > n) {
            return Err(Error::InvalidTuple(format!(
                "entry {bad} outside 1..={n}"
            )));
        }
        Ok(Self {
            points: points.iter().map(|&p| p - 1).collect(),
        })
    }

    pub fn from_zero_based(points: Vec<u32>) -> Self {
        Self {
            points: points.into_boxed_slice(),
        }
    }

    /// Number of particles.
    pub fn m(&self) -> usize {
        self.points.len()
    }

    /// 0-based points.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    /// Whether the entries are pairwise distinct, i.e. the tuple lies in `V^m_×`.
    pub fn is_distinct(&self) -> bool {
        let mut sorted = self.points.to_vec();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, '(', ')', &self.points)
    }
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Tuple {
    type Err = Error;

    /// Accepts `(2,4,5)` or `[2,4,5]`. Entries are only checked to be positive here.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let points = if t.starts_with('[') {
            parse_list(t, '[', ']')
        } else {
            parse_list(t, '(', ')')
        }
        .map_err(Error::InvalidTuple)?;
        Tuple::new(&points, u32::MAX as usize)
    }
}

impl Serialize for Tuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, open: char, close: char, xs: &[u32]) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{}", x + 1)?;
    }
    write!(f, "{close}")
}

fn parse_list(s: &str, open: char, close: char) -> std::result::Result<Vec<u32>, String> {
    let inner = s
        .trim()
        .strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| format!("expected {open}…{close}, got {s:?}"))?;
    inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad entry {tok:?} in {s:?}: {e}"))
        })
        .collect()
}
