//! Brute-force oracles over raw image vectors, written without the library's algorithms.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet, VecDeque};

use actevo::measure::Q;
use actevo::{Elem, Measure, Semigroup, Tuple};
use num_traits::Zero;

pub type Map = Vec<u32>;
pub type Law = BTreeMap<Map, Q>;

/// `(a ∘ b)(i) = a(b(i))`, 0-based.
pub fn compose(a: &[u32], b: &[u32]) -> Map {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn rank(a: &[u32]) -> usize {
    a.iter().collect::<HashSet<_>>().len()
}

pub fn lit(s: &str) -> Map {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|x| x.trim().parse::<u32>().unwrap() - 1)
        .collect()
}

/// All products of the generators, by exhaustive BFS.
pub fn closure(gens: &[Map]) -> HashSet<Map> {
    let mut seen: HashSet<Map> = gens.iter().cloned().collect();
    let mut queue: VecDeque<Map> = gens.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            for y in [compose(g, &x), compose(&x, g)] {
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen
}

/// The minimal ideal as `S¹ z₀ S¹`, with `z₀` the product of every element (which lies in
/// every ideal).
pub fn kernel_by_ideal(elems: &[Map]) -> HashSet<Map> {
    let z0 = elems
        .iter()
        .skip(1)
        .fold(elems[0].clone(), |acc, x| compose(&acc, x));
    let n = z0.len() as u32;
    let id: Map = (0..n).collect();
    let mut with_one: Vec<Map> = elems.to_vec();
    with_one.push(id);
    let mut out = HashSet::new();
    for a in &with_one {
        let az = compose(a, &z0);
        for b in &with_one {
            out.insert(compose(&az, b));
        }
    }
    out
}

pub fn convolve(a: &Law, b: &Law) -> Law {
    let mut out = Law::new();
    for (f, wf) in a {
        for (g, wg) in b {
            *out.entry(compose(f, g)).or_insert_with(Q::zero) += wf * wg;
        }
    }
    out
}

pub fn raw(s: &Semigroup, m: &Measure<Elem>) -> Law {
    m.iter()
        .map(|(&e, w)| (s.get(e).images().to_vec(), w.clone()))
        .collect()
}

pub fn dirac(x: &[u32]) -> Law {
    Law::from([(x.to_vec(), Q::from_integer(1.into()))])
}

pub fn uniform(xs: &[Map]) -> Law {
    let w = Q::new(1.into(), (xs.len() as i64).into());
    xs.iter().map(|x| (x.clone(), w.clone())).collect()
}

pub fn act(a: &Law, lam: &BTreeMap<Map, Q>) -> BTreeMap<Map, Q> {
    let mut out = BTreeMap::new();
    for (f, wf) in a {
        for (x, wx) in lam {
            *out.entry(compose(f, x)).or_insert_with(Q::zero) += wf * wx;
        }
    }
    out
}

pub fn tuple_raw(m: &Measure<Tuple>) -> BTreeMap<Map, Q> {
    m.iter()
        .map(|(x, w)| (x.points().to_vec(), w.clone()))
        .collect()
}

fn distinct(x: &[u32]) -> bool {
    x.iter().collect::<HashSet<_>>().len() == x.len()
}

/// `{x ∈ V^m_× : f x ∈ V^m_× for all f ∈ S}` straight from the definition.
pub fn w_mu_by_definition(elems: &[Map], n: usize, m: usize) -> HashSet<Map> {
    let mut out = HashSet::new();
    let mut x = vec![0u32; m];
    loop {
        if distinct(&x) && elems.iter().all(|f| distinct(&compose(f, &x))) {
            out.insert(x.clone());
        }
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            x[i] += 1;
            if (x[i] as usize) < n {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Orderings of the image sets `gV` of the minimal-rank elements.
pub fn w_mu_over_images(elems: &[Map], m: usize) -> HashSet<Map> {
    let mut out = HashSet::new();
    for g in elems.iter().filter(|g| rank(g) == m) {
        let mut image: Map = g.iter().copied().collect::<HashSet<_>>().into_iter().collect();
        image.sort();
        permute(&mut image, 0, &mut out);
    }
    out
}

fn permute(xs: &mut Map, i: usize, out: &mut HashSet<Map>) {
    if i == xs.len() {
        out.insert(xs.clone());
        return;
    }
    for j in i..xs.len() {
        xs.swap(i, j);
        permute(xs, i + 1, out);
        xs.swap(i, j);
    }
}

/// Dense float powers `μ, μ², …, μ^count` over the element list `elems`.
pub fn float_powers(gens: &[(Map, f64)], elems: &[Map], count: usize) -> Vec<Vec<f64>> {
    let index: std::collections::HashMap<&Map, usize> =
        elems.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let table: Vec<Vec<(usize, f64)>> = elems
        .iter()
        .map(|x| gens.iter().map(|(g, w)| (index[&compose(g, x)], *w)).collect())
        .collect();
    let mut v = vec![0.0; elems.len()];
    for (g, w) in gens {
        v[index[g]] += w;
    }
    let mut out = vec![v.clone()];
    for _ in 1..count {
        let mut next = vec![0.0; elems.len()];
        for (i, &m) in v.iter().enumerate() {
            if m != 0.0 {
                for &(j, w) in &table[i] {
                    next[j] += m * w;
                }
            }
        }
        v = next;
        out.push(v.clone());
    }
    out
}
