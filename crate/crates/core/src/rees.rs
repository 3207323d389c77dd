//! Rees decomposition `K = L·G·R` of a kernel at an idempotent `e`, and the coset
//! structure `G = C·H` attached to a normal subgroup `H` of index `p`.

use std::collections::HashSet;

use rustc_hash::FxHashMap as HashMap;

use crate::error::{structural, Error, Result};
use crate::semigroup::{Elem, Kernel, Semigroup};

/// `L = E(Ke)`, `G = eKe`, `R = E(eK)` together with the group inverse on `G`.
#[derive(Debug, Clone)]
pub struct ReesData {
    pub e: Elem,
    /// Idempotents of `Ke`, lexicographically ordered.
    pub l: Vec<Elem>,
    /// The group factor `eKe`, lexicographically ordered.
    pub g: Vec<Elem>,
    /// Idempotents of `eK`, lexicographically ordered.
    pub r: Vec<Elem>,
    inverse: HashMap<Elem, Elem>,
    l_pos: HashMap<Elem, usize>,
    g_pos: HashMap<Elem, usize>,
    r_pos: HashMap<Elem, usize>,
}

/// The idempotent power of the first kernel element in the semigroup's canonical order
/// (shortest word, then lexicographic).
pub fn canonical_idempotent(s: &Semigroup, k: &Kernel) -> Elem {
    let first = *k
        .elements()
        .iter()
        .min()
        .expect("the kernel of a nonempty semigroup is nonempty");
    idempotent_power(s, first)
}

/// The unique idempotent among the powers of `x`.
pub fn idempotent_power(s: &Semigroup, x: Elem) -> Elem {
    let mut y = x;
    while !s.get(y).is_idempotent() {
        y = s.product(y, x);
    }
    y
}

fn sorted_lex(s: &Semigroup, set: HashSet<Elem>) -> Vec<Elem> {
    let mut v: Vec<Elem> = set.into_iter().collect();
    v.sort_by(|a, b| s.get(*a).cmp(s.get(*b)));
    v
}

fn positions(xs: &[Elem]) -> HashMap<Elem, usize> {
    xs.iter().enumerate().map(|(i, &x)| (x, i)).collect()
}

impl ReesData {
    /// Decomposes `k` at `e`, checking that `L × G × R → K` is a bijection.
    pub fn at(s: &Semigroup, k: &Kernel, e: Elem) -> Result<Self> {
        if !k.contains(e) {
            return Err(Error::Input(format!("{} is not in the kernel", s.get(e))));
        }
        if !s.get(e).is_idempotent() {
            return Err(Error::Input(format!("{} is not idempotent", s.get(e))));
        }
        let ke: HashSet<Elem> = k.elements().iter().map(|&z| s.product(z, e)).collect();
        let ek: HashSet<Elem> = k.elements().iter().map(|&z| s.product(e, z)).collect();
        let eke: HashSet<Elem> = ke.iter().map(|&z| s.product(e, z)).collect();
        let l = sorted_lex(
            s,
            ke.into_iter().filter(|&x| s.get(x).is_idempotent()).collect(),
        );
        let r = sorted_lex(
            s,
            ek.into_iter().filter(|&x| s.get(x).is_idempotent()).collect(),
        );
        let g = sorted_lex(s, eke);

        let mut inverse = HashMap::with_capacity_and_hasher(g.len(), Default::default());
        for &x in &g {
            // walk the cyclic subgroup generated by x until it returns to e
            let mut prev = x;
            let mut cur = x;
            let mut steps = 1;
            while cur != e {
                prev = cur;
                cur = s.product(cur, x);
                steps += 1;
                if steps > g.len() + 1 {
                    return Err(structural(format!(
                        "{} has no finite order with unit {}",
                        s.get(x),
                        s.get(e)
                    )));
                }
            }
            // x^ord = e, so x^(ord-1) is the inverse (e itself when x = e)
            inverse.insert(x, if x == e { e } else { prev });
        }

        let rd = Self {
            e,
            l_pos: positions(&l),
            g_pos: positions(&g),
            r_pos: positions(&r),
            l,
            g,
            r,
            inverse,
        };
        rd.check_group(s)?;
        rd.check_bijection(s, k)?;
        Ok(rd)
    }

    fn check_group(&self, s: &Semigroup) -> Result<()> {
        for &a in &self.g {
            if s.product(a, self.e) != a || s.product(self.e, a) != a {
                return Err(structural(format!("e is not a unit for {}", s.get(a))));
            }
            if s.product(a, self.inverse(a)) != self.e {
                return Err(structural(format!("bad inverse for {}", s.get(a))));
            }
            for &b in &self.g {
                if !self.g_pos.contains_key(&s.product(a, b)) {
                    return Err(structural("G is not closed under the product"));
                }
            }
        }
        Ok(())
    }

    fn check_bijection(&self, s: &Semigroup, k: &Kernel) -> Result<()> {
        let expected = self.l.len() * self.g.len() * self.r.len();
        if expected != k.len() {
            return Err(structural(format!(
                "|L|·|G|·|R| = {expected} but |K| = {}",
                k.len()
            )));
        }
        let mut seen = HashSet::with_capacity(expected);
        for &a in &self.l {
            for &b in &self.g {
                let ab = s.product(a, b);
                for &c in &self.r {
                    let z = s.product(ab, c);
                    if !k.contains(z) || !seen.insert(z) {
                        return Err(structural(format!(
                            "product map L×G×R is not injective into K at {}",
                            s.get(z)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn inverse(&self, g: Elem) -> Elem {
        self.inverse[&g]
    }

    pub fn in_l(&self, x: Elem) -> bool {
        self.l_pos.contains_key(&x)
    }

    pub fn in_g(&self, x: Elem) -> bool {
        self.g_pos.contains_key(&x)
    }

    pub fn in_r(&self, x: Elem) -> bool {
        self.r_pos.contains_key(&x)
    }

    pub fn l_index(&self, x: Elem) -> Option<usize> {
        self.l_pos.get(&x).copied()
    }

    pub fn g_index(&self, x: Elem) -> Option<usize> {
        self.g_pos.get(&x).copied()
    }

    pub fn r_index(&self, x: Elem) -> Option<usize> {
        self.r_pos.get(&x).copied()
    }

    /// `z ↦ (ze(eze)⁻¹, eze, (eze)⁻¹ez)`.
    pub fn project(&self, s: &Semigroup, k: &Kernel, z: Elem) -> Result<(Elem, Elem, Elem)> {
        if !k.contains(z) {
            return Err(Error::Input(format!("{} is not in the kernel", s.get(z))));
        }
        Ok(self.project_unchecked(s, z))
    }

    pub(crate) fn project_unchecked(&self, s: &Semigroup, z: Elem) -> (Elem, Elem, Elem) {
        let e = self.e;
        let ze = s.product(z, e);
        let ez = s.product(e, z);
        let zg = s.product(ez, e);
        let inv = self.inverse(zg);
        (s.product(ze, inv), zg, s.product(inv, ez))
    }
}

/// A normal subgroup `H` of `G` with cyclic quotient generated by `γH`.
#[derive(Debug, Clone)]
pub struct CosetData {
    /// Elements of `H`, lexicographically ordered.
    pub h: Vec<Elem>,
    pub gamma: Elem,
    /// `[e, γ, …, γ^{p-1}]`
    pub c: Vec<Elem>,
    /// Index of `H` in `G`.
    pub p: usize,
    /// `g ↦ (i, h)` with `g = γ^i h`.
    split: HashMap<Elem, (usize, Elem)>,
}

impl CosetData {
    /// The period `p`.
    pub fn period(&self) -> usize {
        self.p
    }

    /// `g ↦ (i, h)` with `g = γ^i h`; `i` is the C-exponent and `h` the H-part.
    pub fn split(&self, g: Elem) -> (usize, Elem) {
        self.split[&g]
    }

    /// `γ^k` for any integer `k`.
    pub fn gamma_pow(&self, k: i64) -> Elem {
        self.c[k.rem_euclid(self.p as i64) as usize]
    }

    pub fn in_h(&self, x: Elem) -> bool {
        self.split.get(&x).is_some_and(|&(i, _)| i == 0)
    }

    /// The cosets `γ^i H` in order `i = 0..p`.
    pub fn cosets(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.p];
        for (&g, &(i, _)) in &self.split {
            out[i].push(g);
        }
        for c in &mut out {
            c.sort();
        }
        out
    }
}

/// Checks that `h` is a normal subgroup of `G` whose quotient is cyclic of order `p`
/// generated by `γH` with `γ^p = e`, and builds the `C × H` coordinates.
pub fn coset_structure(
    s: &Semigroup,
    rd: &ReesData,
    h: &[Elem],
    gamma: Elem,
) -> Result<CosetData> {
    let e = rd.e;
    let hset: HashSet<Elem> = h.iter().copied().collect();
    if !hset.contains(&e) {
        return Err(structural("H does not contain the unit"));
    }
    if let Some(&x) = h.iter().find(|&&x| !rd.in_g(x)) {
        return Err(structural(format!("{} in H is not in G", s.get(x))));
    }
    for &a in h {
        if !hset.contains(&rd.inverse(a)) {
            return Err(structural("H is not closed under inverses"));
        }
        for &b in h {
            if !hset.contains(&s.product(a, b)) {
                return Err(structural("H is not closed under the product"));
            }
        }
    }
    for &g in &rd.g {
        let gi = rd.inverse(g);
        for &a in h {
            if !hset.contains(&s.product(s.product(gi, a), g)) {
                return Err(structural(format!(
                    "H is not normal: conjugation by {} leaves H",
                    s.get(g)
                )));
            }
        }
    }
    if rd.g.len() % h.len() != 0 {
        return Err(structural("|H| does not divide |G|"));
    }
    let p = rd.g.len() / h.len();
    let mut c = vec![e];
    for _ in 1..p {
        c.push(s.product(*c.last().unwrap(), gamma));
    }
    if s.product(*c.last().unwrap(), gamma) != e {
        return Err(structural(format!(
            "γ = {} does not satisfy γ^p = e for p = {p}",
            s.get(gamma)
        )));
    }
    let mut split = HashMap::with_capacity_and_hasher(rd.g.len(), Default::default());
    for (i, &ci) in c.iter().enumerate() {
        for &x in h {
            if split.insert(s.product(ci, x), (i, x)).is_some() {
                return Err(structural("the cosets γ^i H overlap"));
            }
        }
    }
    if split.len() != rd.g.len() {
        return Err(structural("the cosets γ^i H do not cover G"));
    }
    let mut hs = h.to_vec();
    hs.sort_by(|a, b| s.get(*a).cmp(s.get(*b)));
    Ok(CosetData {
        h: hs,
        gamma,
        c,
        p,
        split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::Worked;
    use crate::transform::Transformation;

    fn worked() -> (Worked, Kernel, ReesData) {
        let ex = Worked::new();
        let k = ex.s.kernel().unwrap();
        let e = canonical_idempotent(&ex.s, &k);
        let rd = ReesData::at(&ex.s, &k, e).unwrap();
        (ex, k, rd)
    }

    #[test]
    fn worked_example_factors() {
        let (ex, k, rd) = worked();
        let s = &ex.s;
        assert_eq!(rd.e, ex.e);
        assert_eq!(k.len(), 24);
        let mut l = rd.l.clone();
        l.sort();
        let mut want_l = vec![ex.e, ex.fe];
        want_l.sort();
        assert_eq!(l, want_l);
        let mut r = rd.r.clone();
        r.sort();
        let mut want_r = vec![ex.e, ex.ef];
        want_r.sort();
        assert_eq!(r, want_r);

        let g2 = s.product(ex.g, ex.g);
        let mut want_g = vec![
            ex.e,
            ex.g,
            g2,
            ex.h,
            s.product(ex.g, ex.h),
            s.product(g2, ex.h),
        ];
        want_g.sort();
        want_g.dedup();
        let mut g = rd.g.clone();
        g.sort();
        assert_eq!(g, want_g);
        assert_eq!(g.len(), 6);

        assert_eq!(s.power(ex.g, 3), ex.e);
        assert_eq!(s.power(ex.h, 2), ex.e);
        assert_eq!(s.product(ex.h, ex.g), s.product(g2, ex.h));
        assert_eq!(rd.inverse(ex.g), g2);
    }

    #[test]
    fn projections_of_named_elements() {
        let (ex, k, rd) = worked();
        assert_eq!(rd.project(&ex.s, &k, ex.fe).unwrap(), (ex.fe, ex.e, ex.e));
        assert_eq!(rd.project(&ex.s, &k, ex.e).unwrap(), (ex.e, ex.e, ex.e));
        assert_eq!(rd.project(&ex.s, &k, ex.g).unwrap(), (ex.e, ex.g, ex.e));
        assert!(rd.project(&ex.s, &k, ex.f).is_err());
    }

    #[test]
    fn non_idempotent_or_outside_kernel_rejected() {
        let (ex, k, _) = worked();
        assert!(ReesData::at(&ex.s, &k, ex.g).is_err());
        let s = crate::Semigroup::generate(&[
            Transformation::identity(3),
            "[1,1,1]".parse().unwrap(),
        ])
        .unwrap();
        let k = s.kernel().unwrap();
        let id = s.position(&Transformation::identity(3)).unwrap();
        assert!(ReesData::at(&s, &k, id).is_err());
    }

    #[test]
    fn single_element_kernel() {
        let s = crate::Semigroup::generate(&["[2,2,2]".parse().unwrap()]).unwrap();
        let k = s.kernel().unwrap();
        let e = canonical_idempotent(&s, &k);
        let rd = ReesData::at(&s, &k, e).unwrap();
        assert_eq!((rd.l.len(), rd.g.len(), rd.r.len()), (1, 1, 1));
    }

    #[test]
    fn whole_group_as_h_gives_one_coset() {
        let (ex, _, rd) = worked();
        let cd = coset_structure(&ex.s, &rd, &rd.g, rd.e).unwrap();
        assert_eq!(cd.p, 1);
        assert_eq!(cd.cosets().len(), 1);
    }

    #[test]
    fn trivial_h_in_cyclic_group() {
        let s = crate::Semigroup::generate(&["[2,3,1]".parse().unwrap()]).unwrap();
        let k = s.kernel().unwrap();
        let e = canonical_idempotent(&s, &k);
        let rd = ReesData::at(&s, &k, e).unwrap();
        let gamma = s.generators()[0];
        let cd = coset_structure(&s, &rd, &[e], gamma).unwrap();
        assert_eq!(cd.p, 3);
        assert!(cd.cosets().iter().all(|c| c.len() == 1));
        assert_eq!(cd.gamma_pow(-1), s.power(gamma, 2));
    }

    #[test]
    fn non_normal_subgroup_rejected() {
        // S_3 with H generated by a transposition
        let s = crate::Semigroup::generate(&[
            "[2,1,3]".parse().unwrap(),
            "[2,3,1]".parse().unwrap(),
        ])
        .unwrap();
        let k = s.kernel().unwrap();
        let e = canonical_idempotent(&s, &k);
        let rd = ReesData::at(&s, &k, e).unwrap();
        let t = s.position(&"[2,1,3]".parse().unwrap()).unwrap();
        let c = s.position(&"[2,3,1]".parse().unwrap()).unwrap();
        let err = coset_structure(&s, &rd, &[e, t], c).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }
}
