//! Exact, finitely supported probability measures.
//!
//! Weights are arbitrary-precision rationals and only the support is stored. Measures over
//! semigroup elements convolve through the semigroup product; measures over tuples are pushed
//! forward by the componentwise action.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::semigroup::{Elem, Semigroup};
use crate::transform::Tuple;

/// Exact rational weight.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"num/den"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::InvalidMeasure(format!("not a rational literal: {s:?}"));
    match t.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().map_err(|_| bad())?;
            let den: BigInt = b.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::InvalidMeasure(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(num, den))
        }
        None => Ok(Q::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `"num/den"` in lowest terms, always with a denominator.
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// A probability measure with exact weights on a finite carrier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Measure<K: Ord> {
    weights: BTreeMap<K, Q>,
}

impl<K: Ord + Clone> Measure<K> {
    pub fn dirac(point: K) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(point, Q::one());
        Self { weights }
    }

    /// Uniform law on the distinct items.
    pub fn uniform(items: impl IntoIterator<Item = K>) -> Result<Self> {
        let mut weights: BTreeMap<K, Q> = items.into_iter().map(|k| (k, Q::zero())).collect();
        if weights.is_empty() {
            return Err(Error::InvalidMeasure("uniform law on an empty set".into()));
        }
        let w = Q::new(BigInt::one(), BigInt::from(weights.len()));
        for v in weights.values_mut() {
            *v = w.clone();
        }
        Ok(Self { weights })
    }

    /// Builds a probability measure, merging repeated points. Zero weights are dropped;
    /// negative weights or a total other than 1 are errors.
    pub fn from_weights(pairs: impl IntoIterator<Item = (K, Q)>) -> Result<Self> {
        let mut weights: BTreeMap<K, Q> = BTreeMap::new();
        for (k, w) in pairs {
            if w.is_negative() {
                return Err(Error::InvalidMeasure(format!(
                    "negative weight {}",
                    format_rational(&w)
                )));
            }
            *weights.entry(k).or_insert_with(Q::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        let m = Self { weights };
        let total = m.total();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(m)
    }

    /// Accumulates without the unit-mass check; callers guarantee mass 1.
    pub(crate) fn accumulate(pairs: impl IntoIterator<Item = (K, Q)>) -> Self {
        let mut weights: BTreeMap<K, Q> = BTreeMap::new();
        for (k, w) in pairs {
            *weights.entry(k).or_insert_with(Q::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        Self { weights }
    }

    pub fn weight(&self, point: &K) -> Q {
        self.weights.get(point).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.weights.keys()
    }

    pub fn contains(&self, point: &K) -> bool {
        self.weights.contains_key(point)
    }

    /// Size of the support.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> Q {
        self.weights.values().fold(Q::zero(), |acc, w| acc + w)
    }

    /// Image measure under `f`.
    pub fn pushforward<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> Measure<K2> {
        Measure::accumulate(self.weights.iter().map(|(k, w)| (f(k), w.clone())))
    }

    /// Convex combination `Σ cᵢ mᵢ`; the coefficients must sum to 1.
    pub fn mixture<'a>(parts: impl IntoIterator<Item = (Q, &'a Measure<K>)>) -> Result<Self>
    where
        K: 'a,
    {
        let mut total = Q::zero();
        let mut acc = Vec::new();
        for (c, m) in parts {
            if c.is_negative() {
                return Err(Error::InvalidMeasure("negative mixture coefficient".into()));
            }
            total += &c;
            acc.extend(m.iter().map(|(k, w)| (k.clone(), w * &c)));
        }
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "mixture coefficients sum to {}",
                format_rational(&total)
            )));
        }
        Ok(Self::accumulate(acc))
    }

    /// Largest pointwise difference against a float vector indexed by `key`.
    pub fn sup_distance(&self, other: &[f64], key: impl Fn(&K) -> usize) -> f64 {
        let mut exact = vec![0.0; other.len()];
        for (k, w) in self.iter() {
            exact[key(k)] = w.to_f64().unwrap_or(f64::NAN);
        }
        exact
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Measure<Elem> {
    fn check_carrier(&self, s: &Semigroup) -> Result<()> {
        match self.weights.keys().next_back() {
            Some(last) if last.idx() >= s.len() => Err(Error::InvalidMeasure(format!(
                "element {last:?} is not in a semigroup of size {}",
                s.len()
            ))),
            _ => Ok(()),
        }
    }
}

/// Convolution `(ab)(A) = Σ 1_A(fg) a{f} b{g}`.
pub fn convolve(s: &Semigroup, a: &Measure<Elem>, b: &Measure<Elem>) -> Result<Measure<Elem>> {
    a.check_carrier(s)?;
    b.check_carrier(s)?;
    let mut out: BTreeMap<Elem, Q> = BTreeMap::new();
    for (&f, wf) in a.iter() {
        for (&g, wg) in b.iter() {
            *out.entry(s.product(f, g)).or_insert_with(Q::zero) += wf * wg;
        }
    }
    Ok(Measure { weights: out })
}

/// Pushforward of `mu ⊗ lam` under `(f, x) ↦ f x`.
pub fn act_on_tuples(
    s: &Semigroup,
    mu: &Measure<Elem>,
    lam: &Measure<Tuple>,
) -> Result<Measure<Tuple>> {
    mu.check_carrier(s)?;
    if let Some(bad) = lam
        .support()
        .find(|x| x.points().iter().any(|&p| p as usize >= s.n()))
    {
        return Err(Error::InvalidTuple(format!(
            "{bad} lies outside V = {{1..{}}}",
            s.n()
        )));
    }
    let mut out: BTreeMap<Tuple, Q> = BTreeMap::new();
    for (&f, wf) in mu.iter() {
        let map = s.get(f);
        for (x, wx) in lam.iter() {
            *out.entry(map.apply_tuple_unchecked(x)).or_insert_with(Q::zero) += wf * wx;
        }
    }
    Ok(Measure { weights: out })
}

/// A factor in a left-to-right convolution product.
#[derive(Clone, Copy, Debug)]
pub enum Factor<'a> {
    Measure(&'a Measure<Elem>),
    /// A point, read as its Dirac mass.
    Point(Elem),
}

/// Left-to-right convolution product of measures and points.
pub fn measure_products(s: &Semigroup, pieces: &[Factor<'_>]) -> Result<Measure<Elem>> {
    let as_measure = |f: &Factor<'_>| match f {
        Factor::Measure(m) => (*m).clone(),
        Factor::Point(x) => Measure::dirac(*x),
    };
    let (first, rest) = pieces
        .split_first()
        .ok_or_else(|| Error::InvalidMeasure("empty product".into()))?;
    let mut acc = as_measure(first);
    acc.check_carrier(s)?;
    for p in rest {
        acc = match p {
            // a point on the right is a relabelling, no need for the double loop
            Factor::Point(x) => {
                if x.idx() >= s.len() {
                    return Err(Error::InvalidMeasure(format!("{x:?} outside the semigroup")));
                }
                acc.pushforward(|&f| s.product(f, *x))
            }
            Factor::Measure(m) => convolve(s, &acc, m)?,
        };
    }
    Ok(acc)
}
