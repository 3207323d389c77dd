//! The limit cycle `{η, μη, …, μ^{p-1}η}` of the convolution powers `μⁿ`, its Cesàro
//! average `ν`, the one-sided factors `η^L`, `η^R`, and the subgroup `H` with its coset
//! generator `γ`.
//!
//! Nothing here iterates convolutions. `η^L` is the unique fixed point of `β = μβ` on
//! `Ke = LG` (it always has the form `η^L ω_G`), which lumps to a chain on `L` alone;
//! `H`, `γ` and `p` come from the cyclic classes of the chain `z ↦ fz` on `Ke`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::Zero;

use crate::error::{structural, Result};
use crate::linalg;
use crate::measure::{convolve, measure_products, Factor, Measure, Q};
use crate::rees::{coset_structure, CosetData, ReesData};
use crate::semigroup::{Elem, Kernel, Semigroup};

/// A one-sided fixed point together with its L- (or R-) marginal.
#[derive(Debug, Clone)]
pub struct OneSided {
    /// `η^L ω_G` on `Ke`, or `ω_G η^R` on `eK`.
    pub stationary: Measure<Elem>,
    /// `η^L` on `L`, or `η^R` on `R`.
    pub factor: Measure<Elem>,
}

/// Solves `β = μβ` on `Ke`.
pub fn left_stationary(s: &Semigroup, rd: &ReesData, mu: &Measure<Elem>) -> Result<OneSided> {
    // (f l g)^L = (f l)^L, so the chain on Ke lumps onto L.
    let mut p = vec![vec![Q::zero(); rd.l.len()]; rd.l.len()];
    for (i, &l) in rd.l.iter().enumerate() {
        for (&f, w) in mu.iter() {
            let (zl, _, _) = rd.project_unchecked(s, s.product(f, l));
            let j = rd
                .l_index(zl)
                .ok_or_else(|| structural("L-part of f∘l is not in L"))?;
            p[i][j] += w;
        }
    }
    let pi = linalg::stationary(&p)?;
    let factor = Measure::accumulate(rd.l.iter().copied().zip(pi));
    let omega_g = Measure::uniform(rd.g.iter().copied())?;
    let stationary =
        measure_products(s, &[Factor::Measure(&factor), Factor::Measure(&omega_g)])?;
    if convolve(s, mu, &stationary)? != stationary {
        return Err(structural("η^L ω_G is not fixed by left convolution with μ"));
    }
    Ok(OneSided { stationary, factor })
}

/// Solves `β′ = β′μ` on `eK`.
pub fn right_stationary(s: &Semigroup, rd: &ReesData, mu: &Measure<Elem>) -> Result<OneSided> {
    let mut p = vec![vec![Q::zero(); rd.r.len()]; rd.r.len()];
    for (i, &r) in rd.r.iter().enumerate() {
        for (&f, w) in mu.iter() {
            let (_, _, zr) = rd.project_unchecked(s, s.product(r, f));
            let j = rd
                .r_index(zr)
                .ok_or_else(|| structural("R-part of r∘f is not in R"))?;
            p[i][j] += w;
        }
    }
    let pi = linalg::stationary(&p)?;
    let factor = Measure::accumulate(rd.r.iter().copied().zip(pi));
    let omega_g = Measure::uniform(rd.g.iter().copied())?;
    let stationary =
        measure_products(s, &[Factor::Measure(&omega_g), Factor::Measure(&factor)])?;
    if convolve(s, &stationary, mu)? != stationary {
        return Err(structural("ω_G η^R is not fixed by right convolution with μ"));
    }
    Ok(OneSided { stationary, factor })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period, `H` and `γ` from the cyclic classes of the chain `z ↦ fz` on `Ke`.
///
/// The class of `e` has G-parts `H`; the next class has G-parts `γH`, and `γ` is taken as
/// the lexicographically smallest element there with `γ^p = e`.
pub fn period_and_h(s: &Semigroup, rd: &ReesData, mu: &Measure<Elem>) -> Result<CosetData> {
    let mut nodes: Vec<Elem> = Vec::with_capacity(rd.l.len() * rd.g.len());
    for &l in &rd.l {
        for &g in &rd.g {
            nodes.push(s.product(l, g));
        }
    }
    let pos: HashMap<Elem, usize> = nodes.iter().enumerate().map(|(i, &z)| (z, i)).collect();
    if pos.len() != nodes.len() {
        return Err(structural("L×G → Ke is not injective"));
    }
    let gens: Vec<Elem> = mu.support().copied().collect();
    let succ: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&z| {
            gens.iter()
                .map(|&f| {
                    pos.get(&s.product(f, z))
                        .copied()
                        .ok_or_else(|| structural("Ke is not closed under left multiplication"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let start = pos[&rd.e];
    let mut dist = vec![usize::MAX; nodes.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &succ[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if dist.contains(&usize::MAX) {
        return Err(structural("the chain on Ke is not irreducible"));
    }
    // every node must also lead back to e
    let mut pred = vec![Vec::new(); nodes.len()];
    for (u, vs) in succ.iter().enumerate() {
        for &v in vs {
            pred[v].push(u);
        }
    }
    let mut back = vec![false; nodes.len()];
    back[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &u in &pred[v] {
            if !back[u] {
                back[u] = true;
                queue.push_back(u);
            }
        }
    }
    if back.contains(&false) {
        return Err(structural("the chain on Ke is not irreducible"));
    }

    let mut p = 0;
    for (u, vs) in succ.iter().enumerate() {
        for &v in vs {
            p = gcd(p, (dist[u] + 1).abs_diff(dist[v]));
        }
    }
    if p == 0 {
        return Err(structural("chain on Ke has no cycle"));
    }

    let mut class_parts: Vec<HashSet<Elem>> = vec![HashSet::new(); p];
    let mut class_size = vec![0usize; p];
    for (i, &z) in nodes.iter().enumerate() {
        let c = dist[i] % p;
        class_size[c] += 1;
        class_parts[c].insert(s.product(rd.e, z));
    }
    if class_size.iter().any(|&c| c != class_size[0]) {
        return Err(structural(format!(
            "cyclic classes have unequal sizes {class_size:?}"
        )));
    }
    let h: Vec<Elem> = class_parts[0].iter().copied().collect();
    let successor = &class_parts[1 % p];
    let mut candidates: Vec<Elem> = successor
        .iter()
        .copied()
        .filter(|&x| s.power(x, p) == rd.e)
        .collect();
    candidates.sort_by(|a, b| s.get(*a).cmp(s.get(*b)));
    let gamma = *candidates
        .first()
        .ok_or_else(|| structural("no element γ with γ^p = e in the successor coset"))?;

    let cd = coset_structure(s, rd, &h, gamma)?;
    if cd.p != p {
        return Err(structural(format!(
            "index of H is {} but the chain has period {p}",
            cd.p
        )));
    }
    for (k, parts) in class_parts.iter().enumerate() {
        if parts.iter().any(|&g| cd.split(g).0 != k) {
            return Err(structural(format!("class {k} is not the coset γ^{k} H")));
        }
    }
    Ok(cd)
}

/// The exact limit cycle of `μⁿ`.
#[derive(Debug, Clone)]
pub struct CyclicLimit {
    pub p: usize,
    /// `[η, μη, …, μ^{p-1}η]`
    pub cycle: Vec<Measure<Elem>>,
    pub nu: Measure<Elem>,
    pub eta_l: Measure<Elem>,
    pub eta_r: Measure<Elem>,
}

impl CyclicLimit {
    /// The idempotent unit `η` of the cycle.
    pub fn eta(&self) -> &Measure<Elem> {
        &self.cycle[0]
    }
}

/// `cycle[k] = η^L γ^k ω_H η^R`, `ν = (1/p) Σ cycle[k]`, with every structural identity of
/// the limit cycle checked exactly before returning.
pub fn assemble_limits(
    s: &Semigroup,
    k: &Kernel,
    rd: &ReesData,
    cd: &CosetData,
    mu: &Measure<Elem>,
    eta_l: Measure<Elem>,
    eta_r: Measure<Elem>,
) -> Result<CyclicLimit> {
    let p = cd.p;
    let omega_h = Measure::uniform(cd.h.iter().copied())?;
    let omega_g = Measure::uniform(rd.g.iter().copied())?;
    let cycle = cd
        .c
        .iter()
        .map(|&gk| {
            measure_products(
                s,
                &[
                    Factor::Measure(&eta_l),
                    Factor::Point(gk),
                    Factor::Measure(&omega_h),
                    Factor::Measure(&eta_r),
                ],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let weight = Q::new(1.into(), p.into());
    let nu = Measure::mixture(cycle.iter().map(|m| (weight.clone(), m)))?;

    let eta = &cycle[0];
    if convolve(s, eta, eta)? != *eta {
        return Err(structural("η is not idempotent"));
    }
    for (i, c) in cycle.iter().enumerate() {
        if convolve(s, mu, c)? != cycle[(i + 1) % p] {
            return Err(structural(format!("μ · cycle[{i}] ≠ cycle[{}]", (i + 1) % p)));
        }
    }
    if convolve(s, &nu, &nu)? != nu {
        return Err(structural("ν is not idempotent"));
    }
    if convolve(s, mu, &nu)? != nu || convolve(s, &nu, mu)? != nu {
        return Err(structural("ν is not absorbing for μ"));
    }
    let supp_nu: HashSet<Elem> = nu.support().copied().collect();
    let kernel: HashSet<Elem> = k.elements().iter().copied().collect();
    if supp_nu != kernel {
        return Err(structural("supp ν differs from the kernel"));
    }
    let mut lhr = HashSet::new();
    for &l in &rd.l {
        for &h in &cd.h {
            let lh = s.product(l, h);
            for &r in &rd.r {
                lhr.insert(s.product(lh, r));
            }
        }
    }
    if eta.support().copied().collect::<HashSet<_>>() != lhr {
        return Err(structural("supp η differs from L·H·R"));
    }
    let factored = measure_products(
        s,
        &[
            Factor::Measure(&eta_l),
            Factor::Measure(&omega_g),
            Factor::Measure(&eta_r),
        ],
    )?;
    if factored != nu {
        return Err(structural("ν ≠ η^L ω_G η^R"));
    }
    Ok(CyclicLimit {
        p,
        cycle,
        nu,
        eta_l,
        eta_r,
    })
}
