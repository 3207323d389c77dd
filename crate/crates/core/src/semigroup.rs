//! Closure of a generating set of transformations under composition, idempotents
//! and the kernel (the unique minimal two-sided ideal).

use rustc_hash::FxHashMap as HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::transform::Transformation;

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Position of an element inside a [`Semigroup`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The semigroup `S = ⋃ₙ Aⁿ` generated by a set `A` of transformations.
///
/// Elements are ordered breadth first by word length, ties broken lexicographically.
/// Products are computed on demand (compose, then look up); the left and right Cayley
/// tables against the generators are stored.
#[derive(Clone)]
pub struct Semigroup {
    n: usize,
    elements: Vec<Transformation>,
    index: HashMap<Transformation, Elem>,
    generators: Vec<Elem>,
    /// `left[i][s] = generators[i] ∘ s`
    left: Vec<Vec<Elem>>,
    /// `right[i][s] = s ∘ generators[i]`
    right: Vec<Vec<Elem>>,
    /// `(i, s)` with `element = generators[i] ∘ s`, `None` for generators.
    parent: Vec<Option<(usize, Elem)>>,
}

impl Semigroup {
    pub fn generate(generators: &[Transformation]) -> Result<Self> {
        Self::generate_with_cap(generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn generate_with_cap(generators: &[Transformation], cap: usize) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Input("empty generator list".into()))?;
        let n = first.n();
        if let Some(bad) = generators.iter().find(|g| g.n() != n) {
            return Err(Error::DomainMismatch {
                left: n,
                right: bad.n(),
            });
        }
        let mut gens: Vec<Transformation> = generators.to_vec();
        gens.sort();
        gens.dedup();
        if gens.len() > cap {
            return Err(Error::ClosureCap { cap });
        }

        let mut elements: Vec<Transformation> = Vec::new();
        let mut index: HashMap<Transformation, Elem> = HashMap::default();
        let mut parent = Vec::new();
        for g in &gens {
            index.insert(g.clone(), Elem(elements.len() as u32));
            elements.push(g.clone());
            parent.push(None);
        }
        let generator_elems: Vec<Elem> = (0..gens.len() as u32).map(Elem).collect();

        let mut level_start = 0;
        while level_start < elements.len() {
            let level_end = elements.len();
            let mut fresh: Vec<(Transformation, usize, Elem)> = Vec::new();
            for s in level_start..level_end {
                for (gi, g) in gens.iter().enumerate() {
                    let prod = g.compose_unchecked(&elements[s]);
                    if !index.contains_key(&prod) {
                        fresh.push((prod, gi, Elem(s as u32)));
                    }
                }
            }
            fresh.sort_by(|a, b| a.0.cmp(&b.0));
            fresh.dedup_by(|a, b| a.0 == b.0);
            if elements.len() + fresh.len() > cap {
                return Err(Error::ClosureCap { cap });
            }
            for (t, gi, from) in fresh {
                index.insert(t.clone(), Elem(elements.len() as u32));
                elements.push(t);
                parent.push(Some((gi, from)));
            }
            level_start = level_end;
        }

        let lookup = |t: &Transformation| index[t];
        let left = gens
            .iter()
            .map(|g| elements.iter().map(|s| lookup(&g.compose_unchecked(s))).collect())
            .collect();
        let right = gens
            .iter()
            .map(|g| elements.iter().map(|s| lookup(&s.compose_unchecked(g))).collect())
            .collect();

        Ok(Self {
            n,
            elements,
            index,
            generators: generator_elems,
            left,
            right,
            parent,
        })
    }

    /// Size of the underlying set `V`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.elements.len() as u32).map(Elem)
    }

    /// Distinct generators in canonical (lexicographic) order.
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    #[inline]
    pub fn get(&self, e: Elem) -> &Transformation {
        &self.elements[e.idx()]
    }

    pub fn position(&self, t: &Transformation) -> Option<Elem> {
        self.index.get(t).copied()
    }

    /// `a ∘ b`.
    #[inline]
    pub fn product(&self, a: Elem, b: Elem) -> Elem {
        let (fa, fb) = (self.get(a).images(), self.get(b).images());
        let mut buf = [0u32; 16];
        if let Some(out) = buf.get_mut(..self.n) {
            for (o, &y) in out.iter_mut().zip(fb) {
                *o = fa[y as usize];
            }
            return self.index[&*out];
        }
        let t = self.get(a).compose_unchecked(self.get(b));
        self.index[&t]
    }

    /// Left-to-right product `xs[0] ∘ xs[1] ∘ …`.
    pub fn product_of(&self, xs: &[Elem]) -> Option<Elem> {
        let (&first, rest) = xs.split_first()?;
        Some(rest.iter().fold(first, |acc, &x| self.product(acc, x)))
    }

    /// `generators[gen] ∘ s`.
    #[inline]
    pub fn left_mul(&self, gen: usize, s: Elem) -> Elem {
        self.left[gen][s.idx()]
    }

    /// `s ∘ generators[gen]`.
    #[inline]
    pub fn right_mul(&self, s: Elem, gen: usize) -> Elem {
        self.right[gen][s.idx()]
    }

    pub fn power(&self, a: Elem, k: usize) -> Elem {
        assert!(k >= 1, "semigroup powers start at 1");
        (1..k).fold(a, |acc, _| self.product(acc, a))
    }

    /// A word `[f_n, …, f_1]` of generator positions with `f_n ∘ … ∘ f_1 = s`, shortest possible.
    pub fn word(&self, s: Elem) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = s;
        loop {
            match self.parent[cur.idx()] {
                None => {
                    let gi = self.generators.iter().position(|&g| g == cur).unwrap();
                    word.push(gi);
                    return word;
                }
                Some((gi, from)) => {
                    word.push(gi);
                    cur = from;
                }
            }
        }
    }

    /// All idempotents, in canonical element order.
    pub fn idempotents(&self) -> Vec<Elem> {
        self.iter().filter(|&s| self.get(s).is_idempotent()).collect()
    }

    /// The kernel, computed as the set of minimal-rank elements and checked to be an ideal.
    pub fn kernel(&self) -> Result<Kernel> {
        let min_rank = self
            .elements
            .iter()
            .map(Transformation::rank)
            .min()
            .expect("semigroup is nonempty");
        let mut member = vec![false; self.len()];
        let mut elems = Vec::new();
        for s in self.iter() {
            if self.get(s).rank() == min_rank {
                member[s.idx()] = true;
                elems.push(s);
            }
        }
        let kernel = Kernel {
            elems,
            member,
            min_rank,
        };
        // Closure under the generators on both sides makes it an ideal of S.
        for gi in 0..self.generators.len() {
            for &k in &kernel.elems {
                if !kernel.contains(self.left_mul(gi, k)) || !kernel.contains(self.right_mul(k, gi))
                {
                    return Err(structural(format!(
                        "minimal-rank set is not an ideal at {}",
                        self.get(k)
                    )));
                }
            }
        }
        Ok(kernel)
    }
}

impl fmt::Debug for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semigroup")
            .field("n", &self.n)
            .field("len", &self.len())
            .field("generators", &self.generators.len())
            .finish()
    }
}

/// The kernel `K` of a semigroup: the minimal-rank elements.
#[derive(Debug, Clone)]
pub struct Kernel {
    elems: Vec<Elem>,
    member: Vec<bool>,
    min_rank: usize,
}

impl Kernel {
    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    #[inline]
    pub fn contains(&self, s: Elem) -> bool {
        self.member[s.idx()]
    }

    /// `m_μ`, the minimal rank over the semigroup.
    pub fn min_rank(&self) -> usize {
        self.min_rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_contains_named_elements() {
        let s = Semigroup::generate(&example::generators()).unwrap();
        for lit in ["[4,2,2,4,5]", "[2,4,4,2,5]", "[1,3,3,1,5]", "[2,2,4,4,5]"] {
            assert!(s.position(&t(lit)).is_some(), "{lit} missing");
        }
        let idem: Vec<_> = s.idempotents().iter().map(|&x| s.get(x).clone()).collect();
        assert!(idem.contains(&t("[4,2,2,4,5]")));
        assert!(idem.contains(&t("[1,3,3,1,5]")));
        assert!(idem.contains(&t("[2,2,4,4,5]")));
    }

    #[test]
    fn identity_generates_trivial_semigroup() {
        let s = Semigroup::generate(&[Transformation::identity(4)]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.kernel().unwrap().len(), 1);
    }

    #[test]
    fn permutation_group_has_identity_as_only_idempotent() {
        let s = Semigroup::generate(&[t("[2,3,1,4]"), t("[2,1,3,4]")]).unwrap();
        assert_eq!(s.len(), 6);
        let idem = s.idempotents();
        assert_eq!(idem.len(), 1);
        assert_eq!(s.get(idem[0]), &Transformation::identity(4));
        assert_eq!(s.kernel().unwrap().len(), 6);
    }

    #[test]
    fn bfs_order_is_by_word_length_then_lexicographic() {
        let s = Semigroup::generate(&example::generators()).unwrap();
        let gens: Vec<_> = s.generators().iter().map(|&g| s.get(g).clone()).collect();
        assert_eq!(gens, vec![t("[2,3,4,1,5]"), t("[2,5,5,2,4]")]);
        // word lengths are non-decreasing along the element order
        let lens: Vec<_> = s.iter().map(|x| s.word(x).len()).collect();
        assert!(lens.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn words_evaluate_to_their_element() {
        let s = Semigroup::generate(&example::generators()).unwrap();
        for x in s.iter() {
            let word: Vec<Elem> = s.word(x).iter().map(|&gi| s.generators()[gi]).collect();
            assert_eq!(s.product_of(&word), Some(x));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = Semigroup::generate_with_cap(&example::generators(), 5).unwrap_err();
        assert_eq!(err, Error::ClosureCap { cap: 5 });
    }

    #[test]
    fn mismatched_generators_rejected() {
        assert!(Semigroup::generate(&[t("[1,2]"), t("[1,1,1]")]).is_err());
        assert!(Semigroup::generate(&[]).is_err());
    }
}
