//! Deadlocks, F-cliques and the tuples that never collapse.
//!
//! `W_μ` is the set of `m_μ`-tuples of distinct points that stay distinct under every
//! element of `S`. Every such tuple factors uniquely as `l g w` with `l ∈ L`, `g ∈ G` and
//! `w` in a set `W` of G-orbit representatives inside `eW_μ`.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rustc_hash::FxHashMap as HashMap;

use num_traits::{One, Zero};

use crate::analysis::Analysis;
use crate::error::{structural, Error, Result};
use crate::measure::{act_on_tuples, format_rational, measure_products, Factor, Measure, Q};
use crate::rees::ReesData;
use crate::semigroup::{Elem, Kernel, Semigroup};
use crate::transform::Tuple;

/// Whether no element of `s` merges the 0-based points `x` and `y`.
pub fn is_deadlock(s: &Semigroup, x: usize, y: usize) -> Result<bool> {
    if x == y {
        return Err(Error::Input(format!(
            "a deadlock needs two distinct points, got {} twice",
            x + 1
        )));
    }
    if x >= s.n() || y >= s.n() {
        return Err(Error::Input("point outside V".into()));
    }
    Ok(deadlock_from(s, x, y))
}

fn deadlock_from(s: &Semigroup, x: usize, y: usize) -> bool {
    // BFS over unordered pairs reachable by words of length ≥ 1
    let gens: Vec<_> = s.generators().iter().map(|&g| s.get(g)).collect();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for g in &gens {
        let p = key(g.apply(x), g.apply(y));
        if seen.insert(p) {
            queue.push_back(p);
        }
    }
    while let Some((a, b)) = queue.pop_front() {
        if a == b {
            return false;
        }
        for g in &gens {
            let p = key(g.apply(a), g.apply(b));
            if seen.insert(p) {
                queue.push_back(p);
            }
        }
    }
    true
}

/// The n×n deadlock relation (diagonal false).
pub fn deadlock_matrix(s: &Semigroup) -> Vec<Vec<bool>> {
    let n = s.n();
    let mut m = vec![vec![false; n]; n];
    for x in 0..n {
        for y in x + 1..n {
            let d = deadlock_from(s, x, y);
            m[x][y] = d;
            m[y][x] = d;
        }
    }
    m
}

/// The distinct image sets `gV` over kernel elements, as sorted 0-based point lists.
pub fn f_cliques(s: &Semigroup, k: &Kernel) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = k.elements().iter().map(|&g| s.get(g).image_set()).collect();
    sets.sort();
    sets.dedup();
    sets
}

fn orderings(points: &[usize]) -> Vec<Vec<usize>> {
    if points.len() <= 1 {
        return vec![points.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..points.len() {
        let mut rest = points.to_vec();
        let head = rest.remove(i);
        for mut tail in orderings(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn as_tuple(points: &[usize]) -> Tuple {
    Tuple::from_zero_based(points.iter().map(|&p| p as u32).collect())
}

/// `m_μ`, the F-cliques, `W_μ`, `eW_μ`, the representatives `W` and the inverse of the
/// product map `L × G × W → W_μ`.
#[derive(Debug, Clone)]
pub struct CliqueData {
    pub m_mu: usize,
    pub f_cliques: Vec<Vec<usize>>,
    pub w_mu: Vec<Tuple>,
    pub ew_mu: Vec<Tuple>,
    pub w: Vec<Tuple>,
    orbit_of: HashMap<Tuple, usize>,
    decomposition: HashMap<Tuple, (Elem, Elem, usize)>,
}

impl CliqueData {
    /// Position in `W` of the representative of `x ∈ eW_μ`.
    pub fn orbit_of(&self, x: &Tuple) -> Option<usize> {
        self.orbit_of.get(x).copied()
    }

    pub fn w_index(&self, w: &Tuple) -> Option<usize> {
        self.w.iter().position(|x| x == w)
    }

    /// `x ↦ (x^L, x^G, x^W)` with `x = x^L x^G x^W`; the W-part is returned as an index into `w`.
    pub fn project_tuple(&self, x: &Tuple) -> Result<(Elem, Elem, usize)> {
        self.decomposition
            .get(x)
            .copied()
            .ok_or_else(|| Error::Input(format!("{x} is not in W_μ")))
    }

    pub fn in_w_mu(&self, x: &Tuple) -> bool {
        self.decomposition.contains_key(x)
    }
}

/// Enumerates `W_μ` and picks `W` as lexicographically smallest G-orbit representatives.
pub fn compute_w(s: &Semigroup, k: &Kernel, rd: &ReesData) -> Result<CliqueData> {
    let m_mu = k.min_rank();
    let cliques = f_cliques(s, k);
    let dead = deadlock_matrix(s);

    let mut w_mu: Vec<Tuple> = Vec::new();
    for clique in &cliques {
        for ord in orderings(clique) {
            let stable = (0..ord.len())
                .all(|i| (i + 1..ord.len()).all(|j| dead[ord[i]][ord[j]]));
            if stable {
                w_mu.push(as_tuple(&ord));
            }
        }
    }
    w_mu.sort();
    w_mu.dedup();

    let e = s.get(rd.e);
    let mut ew_mu: Vec<Tuple> = w_mu.iter().map(|x| e.apply_tuple_unchecked(x)).collect();
    ew_mu.sort();
    ew_mu.dedup();

    let mut w = Vec::new();
    let mut orbit_of = HashMap::default();
    for x in &ew_mu {
        if orbit_of.contains_key(x) {
            continue;
        }
        let idx = w.len();
        w.push(x.clone());
        for &g in &rd.g {
            orbit_of.insert(s.get(g).apply_tuple_unchecked(x), idx);
        }
    }
    if orbit_of.len() != ew_mu.len() || ew_mu.iter().any(|x| !orbit_of.contains_key(x)) {
        return Err(structural("G-orbits do not partition eW_μ"));
    }

    let w_mu_set: HashSet<&Tuple> = w_mu.iter().collect();
    let mut decomposition = HashMap::with_capacity_and_hasher(w_mu.len(), Default::default());
    for &l in &rd.l {
        for &g in &rd.g {
            let lg = s.get(s.product(l, g));
            for (wi, wt) in w.iter().enumerate() {
                let x = lg.apply_tuple_unchecked(wt);
                if !w_mu_set.contains(&x) {
                    return Err(structural(format!("{x} = l g w lies outside W_μ")));
                }
                if decomposition.insert(x.clone(), (l, g, wi)).is_some() {
                    return Err(structural(format!(
                        "L × G × W → W_μ is not injective at {x}"
                    )));
                }
            }
        }
    }
    if decomposition.len() != w_mu.len() {
        return Err(structural(format!(
            "L × G × W covers {} of the {} tuples in W_μ",
            decomposition.len(),
            w_mu.len()
        )));
    }

    Ok(CliqueData {
        m_mu,
        f_cliques: cliques,
        w_mu,
        ew_mu,
        w,
        orbit_of,
        decomposition,
    })
}

fn check_on_w(cd: &CliqueData, lambda_w: &Measure<Tuple>) -> Result<()> {
    match lambda_w.support().find(|x| cd.w_index(x).is_none()) {
        Some(x) => Err(Error::InvalidMeasure(format!("{x} is not in W"))),
        None => Ok(()),
    }
}

/// `Λ = η^L ω_G Λ_W`, checked to be fixed by `μ`.
pub fn invariant_law(an: &Analysis, lambda_w: &Measure<Tuple>) -> Result<Measure<Tuple>> {
    check_on_w(&an.cliques, lambda_w)?;
    let lam = act_on_tuples(&an.s, &an.left.stationary, lambda_w)?;
    if act_on_tuples(&an.s, &an.mu, &lam)? != lam {
        return Err(structural("η^L ω_G Λ_W is not μ-invariant"));
    }
    Ok(lam)
}

/// One term `c_i · Λ^i_W` of a shift-compatible family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyComponent {
    pub c: Q,
    /// `None` exactly when `c` is zero.
    pub lambda_w: Option<Measure<Tuple>>,
}

/// `Λ_k = Σᵢ cᵢ η^L γ^{k+i} ω_H Λ^i_W`, a family with `Λ_k = μΛ_{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFamily {
    pub components: Vec<FamilyComponent>,
}

impl InvariantFamily {
    pub fn new(an: &Analysis, components: Vec<FamilyComponent>) -> Result<Self> {
        if components.len() != an.cosets.p {
            return Err(Error::Input(format!(
                "family has {} components but the period is {}",
                components.len(),
                an.cosets.p
            )));
        }
        let mut total = Q::zero();
        for (i, comp) in components.iter().enumerate() {
            if comp.c < Q::zero() {
                return Err(Error::Input(format!("c_{i} is negative")));
            }
            match (&comp.lambda_w, comp.c.is_zero()) {
                (Some(m), false) => check_on_w(&an.cliques, m)?,
                (None, true) => {}
                (Some(_), true) => {
                    return Err(Error::Input(format!("c_{i} = 0 but Λ^{i}_W is given")))
                }
                (None, false) => return Err(Error::Input(format!("Λ^{i}_W is missing"))),
            }
            total += &comp.c;
        }
        if !total.is_one() {
            return Err(Error::Input(format!(
                "coefficients sum to {}",
                format_rational(&total)
            )));
        }
        Ok(Self { components })
    }

    /// The stationary family `c_0 = 1`, `Λ⁰_W = lambda_w`, padded with zero terms.
    pub fn single(an: &Analysis, index: usize, lambda_w: Measure<Tuple>) -> Result<Self> {
        let mut components: Vec<FamilyComponent> = (0..an.cosets.p)
            .map(|_| FamilyComponent {
                c: Q::zero(),
                lambda_w: None,
            })
            .collect();
        let slot = components
            .get_mut(index)
            .ok_or_else(|| Error::Input(format!("component {index} exceeds the period")))?;
        *slot = FamilyComponent {
            c: Q::one(),
            lambda_w: Some(lambda_w),
        };
        Self::new(an, components)
    }

    /// `Λ_k`.
    pub fn law_at(&self, an: &Analysis, k: i64) -> Result<Measure<Tuple>> {
        let omega_h = Measure::uniform(an.cosets.h.iter().copied())?;
        let mut acc: Vec<(Tuple, Q)> = Vec::new();
        for (i, comp) in self.components.iter().enumerate() {
            let Some(lw) = &comp.lambda_w else { continue };
            let shift = measure_products(
                &an.s,
                &[
                    Factor::Measure(&an.limits.eta_l),
                    Factor::Point(an.cosets.gamma_pow(k + i as i64)),
                    Factor::Measure(&omega_h),
                ],
            )?;
            let part = act_on_tuples(&an.s, &shift, lw)?;
            acc.extend(part.iter().map(|(x, w)| (x.clone(), w * &comp.c)));
        }
        Measure::from_weights(acc)
    }
}

/// Recovers `(cᵢ, Λ^i_W)` from `Λ_0` and checks the family it generates.
pub fn classify_family(an: &Analysis, lambda0: &Measure<Tuple>) -> Result<InvariantFamily> {
    let cd = &an.cliques;
    let p = an.cosets.p;
    let mut joint: Vec<BTreeMap<Tuple, Q>> = vec![BTreeMap::new(); p];
    for (x, wx) in lambda0.iter() {
        if x.m() != cd.m_mu || !x.is_distinct() {
            return Err(Error::Classification(format!(
                "{x} is not a tuple of {} distinct points",
                cd.m_mu
            )));
        }
        let (_, g, wi) = cd
            .project_tuple(x)
            .map_err(|_| Error::Classification(format!("{x} is not in W_μ")))?;
        let (i, _) = an.cosets.split(g);
        *joint[i].entry(cd.w[wi].clone()).or_insert_with(Q::zero) += wx;
    }
    let components = joint
        .into_iter()
        .map(|m| {
            let c = m.values().fold(Q::zero(), |a, b| a + b);
            let lambda_w = (!c.is_zero())
                .then(|| Measure::accumulate(m.into_iter().map(|(x, w)| (x, w / &c))));
            FamilyComponent { c, lambda_w }
        })
        .collect();
    let family = InvariantFamily::new(an, components)?;

    let rebuilt = family.law_at(an, 0)?;
    if rebuilt != *lambda0 {
        let mut residual: Vec<String> = lambda0
            .support()
            .chain(rebuilt.support())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .filter(|x| lambda0.weight(x) != rebuilt.weight(x))
            .take(8)
            .map(|x| {
                format!(
                    "{x}: given {}, family {}",
                    format_rational(&lambda0.weight(x)),
                    format_rational(&rebuilt.weight(x))
                )
            })
            .collect();
        residual.sort();
        return Err(Error::Classification(format!(
            "Λ_0 is not of the form Σ cᵢ η^L γ^i ω_H Λ^i_W; residual: {}",
            residual.join("; ")
        )));
    }
    let mut prev = rebuilt;
    for k in 1..=p as i64 {
        let next = act_on_tuples(&an.s, &an.mu, &prev)?;
        if next != family.law_at(an, k)? {
            return Err(structural(format!("Λ_{k} ≠ μΛ_{}", k - 1)));
        }
        prev = next;
    }
    Ok(family)
}
