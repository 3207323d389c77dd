//! Mapping laws: probability measures on transformations, and their JSON file format.
//!
//! ```json
//! {"n": 5, "generators": [[2,3,4,1,5],[2,5,5,2,4]], "weights": ["1/2","1/2"]}
//! ```

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{format_rational, parse_rational, Measure, Q};
use crate::semigroup::{Elem, Semigroup};
use crate::transform::Transformation;

/// The step distribution `μ` of an action evolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingLaw {
    n: usize,
    /// Distinct transformations in canonical order, each with positive weight.
    support: Vec<(Transformation, Q)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LawFile {
    n: usize,
    generators: Vec<Vec<u32>>,
    weights: Vec<String>,
}

impl MappingLaw {
    /// Validates and merges repeated transformations. Weights must be positive and sum to 1.
    pub fn new(pairs: Vec<(Transformation, Q)>) -> Result<Self> {
        let n = pairs
            .first()
            .map(|(t, _)| t.n())
            .ok_or_else(|| Error::Input("mapping law has no generators".into()))?;
        let mut support: Vec<(Transformation, Q)> = Vec::with_capacity(pairs.len());
        let mut total = Q::zero();
        for (i, (t, w)) in pairs.into_iter().enumerate() {
            if t.n() != n {
                return Err(Error::Input(format!(
                    "generators[{i}]: domain size {} differs from n = {n}",
                    t.n()
                )));
            }
            if !w.is_positive() {
                return Err(Error::Input(format!(
                    "weights[{i}]: {} is not positive",
                    format_rational(&w)
                )));
            }
            total += &w;
            match support.iter_mut().find(|(u, _)| *u == t) {
                Some((_, acc)) => *acc += w,
                None => support.push((t, w)),
            }
        }
        if !total.is_one() {
            return Err(Error::Input(format!(
                "weights: sum is {}, expected 1/1",
                format_rational(&total)
            )));
        }
        support.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Self { n, support })
    }

    /// Parses the JSON law format. Diagnostics carry the line/column or the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: LawFile = serde_json::from_str(text).map_err(|e| {
            Error::Input(format!(
                "law file, line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        if raw.generators.len() != raw.weights.len() {
            return Err(Error::Input(format!(
                "generators has {} entries but weights has {}",
                raw.generators.len(),
                raw.weights.len()
            )));
        }
        let mut pairs = Vec::with_capacity(raw.generators.len());
        for (i, (g, w)) in raw.generators.iter().zip(&raw.weights).enumerate() {
            if g.len() != raw.n {
                return Err(Error::Input(format!(
                    "generators[{i}]: expected {} images, found {}",
                    raw.n,
                    g.len()
                )));
            }
            let t = Transformation::new(g)
                .map_err(|e| Error::Input(format!("generators[{i}]: {e}")))?;
            let w = parse_rational(w).map_err(|e| Error::Input(format!("weights[{i}]: {e}")))?;
            pairs.push((t, w));
        }
        Self::new(pairs)
    }

    pub fn to_json(&self) -> String {
        let raw = LawFile {
            n: self.n,
            generators: self
                .support
                .iter()
                .map(|(t, _)| t.images().iter().map(|&y| y + 1).collect())
                .collect(),
            weights: self.support.iter().map(|(_, w)| format_rational(w)).collect(),
        };
        serde_json::to_string(&raw).expect("law serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(Transformation, Q)] {
        &self.support
    }

    pub fn transformations(&self) -> Vec<Transformation> {
        self.support.iter().map(|(t, _)| t.clone()).collect()
    }

    /// `μ` as a measure on the elements of `s`, which must contain the support.
    pub fn on(&self, s: &Semigroup) -> Result<Measure<Elem>> {
        let pairs = self
            .support
            .iter()
            .map(|(t, w)| {
                s.position(t)
                    .map(|e| (e, w.clone()))
                    .ok_or_else(|| Error::InvalidMeasure(format!("{t} is not in the semigroup")))
            })
            .collect::<Result<Vec<_>>>()?;
        Measure::from_weights(pairs)
    }

    /// `P[x][y] = μ{f : f(x) = y}`, 0-based.
    pub fn marginal_transition_matrix(&self) -> Vec<Vec<Q>> {
        let mut p = vec![vec![Q::zero(); self.n]; self.n];
        for (t, w) in &self.support {
            for (x, row) in p.iter_mut().enumerate() {
                row[t.apply(x)] += w;
            }
        }
        p
    }
}
