mod common;

use std::collections::{BTreeMap, HashSet};

use actevo::example::Worked;
use actevo::measure::{convolve, q, Q};
use actevo::{example, fuzz, Analysis, MappingLaw, Transformation};
use common::{compose, lit, rank, raw, Map};

fn worked() -> Analysis {
    Analysis::run(&example::law()).unwrap()
}

fn image(an: &Analysis, e: actevo::Elem) -> Map {
    an.s.get(e).images().to_vec()
}

#[test]
fn closure_matches_brute_force() {
    let an = worked();
    let gens: Vec<Map> = example::generators().iter().map(|t| t.images().to_vec()).collect();
    let oracle = common::closure(&gens);
    assert_eq!(an.s.len(), oracle.len());
    for x in an.s.elements() {
        assert!(oracle.contains(x.images()));
    }
}

#[test]
fn kernel_is_the_minimal_rank_layer() {
    let an = worked();
    let elems: Vec<Map> = an.s.elements().iter().map(|t| t.images().to_vec()).collect();
    let min = elems.iter().map(|x| rank(x)).min().unwrap();
    let by_rank: HashSet<Map> = elems.iter().filter(|x| rank(x) == min).cloned().collect();
    assert_eq!(by_rank.len(), 24);
    assert_eq!(an.kernel.len(), 24);
    let ours: HashSet<Map> = an.kernel.elements().iter().map(|&z| image(&an, z)).collect();
    assert_eq!(ours, by_rank);
    assert_eq!(common::kernel_by_ideal(&elems), by_rank);
}

#[test]
fn worked_idempotents_and_inverses() {
    let w = Worked::new();
    let s = &w.s;
    for x in [w.e, w.fe, w.ef] {
        let m = s.get(x).images();
        assert_eq!(compose(m, m), m.to_vec());
    }
    // g has order 3 in G, so its inverse is g²
    let an = worked();
    assert_eq!(an.rees.inverse(w.g), s.product(w.g, w.g));
    assert_eq!(an.rees.inverse(w.h), w.h);
    assert_eq!(s.product(w.fe, w.fe), w.fe);
}

#[test]
fn worked_projections() {
    let w = Worked::new();
    let an = worked();
    let s = &an.s;
    let gh = s.product(w.g, w.h);
    let z = s.product_of(&[w.fe, gh, w.ef]).unwrap();
    assert_eq!(an.rees.project(s, &an.kernel, z).unwrap(), (w.fe, gh, w.ef));
    assert_eq!(an.rees.project(s, &an.kernel, w.e).unwrap(), (w.e, w.e, w.e));
    assert!(an.rees.project(s, &an.kernel, w.f).is_err());
}

#[test]
fn uniform_on_g_is_idempotent() {
    let an = worked();
    let gs: Vec<Map> = an.rees.g.iter().map(|&x| image(&an, x)).collect();
    let omega = common::uniform(&gs);
    assert_eq!(common::convolve(&omega, &omega), omega);
}

#[test]
fn worked_nu_factorises() {
    let an = worked();
    let s = &an.s;
    for &z in an.kernel.elements() {
        let (l, _, r) = an.rees.project(s, &an.kernel, z).unwrap();
        let want = an.limits.eta_l.weight(&l) * q(1, 6) * an.limits.eta_r.weight(&r);
        assert_eq!(an.limits.nu.weight(&z), want);
    }
    assert_eq!(an.limits.nu, *an.limits.eta());
}

#[test]
fn one_sided_stationary_laws_are_fixed() {
    for seed in 0..60 {
        let law = fuzz::random_law(seed, 5, 3);
        let an = Analysis::run(&law).unwrap();
        let s = &an.s;
        let mu = raw(s, &an.mu);
        let gs: Vec<Map> = an.rees.g.iter().map(|&x| image(&an, x)).collect();
        let omega = common::uniform(&gs);
        let right = common::convolve(&omega, &raw(s, &an.limits.eta_r));
        let left = common::convolve(&raw(s, &an.limits.eta_l), &omega);
        assert_eq!(common::convolve(&right, &mu), right, "seed {seed}: ω_G η^R μ");
        assert_eq!(common::convolve(&mu, &left), left, "seed {seed}: μ η^L ω_G");
    }
}

#[test]
fn cyclic_law_has_period_three() {
    let law = fuzz::cyclic_law();
    let an = Analysis::run(&law).unwrap();
    assert_eq!(an.p(), 3);
    let elems: Vec<Map> = an.s.elements().iter().map(|t| t.images().to_vec()).collect();
    let powers = common::float_powers(&[(lit("[2,3,1]"), 1.0)], &elems, 33);
    for n in 30..33 {
        let cycle = &an.limits.cycle[n % 3];
        assert_eq!(cycle.sup_distance(&powers[n - 1], |x| x.idx()), 0.0, "n = {n}");
    }
}

#[test]
fn limit_cycle_is_driven_by_mu() {
    for law in [fuzz::period_three_law(), fuzz::cyclic_law(), example::law()] {
        let an = Analysis::run(&law).unwrap();
        let p = an.p();
        for k in 0..p {
            let next = convolve(&an.s, &an.mu, &an.limits.cycle[k]).unwrap();
            assert_eq!(next, an.limits.cycle[(k + 1) % p]);
        }
        let supports: Vec<HashSet<_>> = an.limits.cycle.iter().map(|c| c.support().copied().collect()).collect();
        for i in 0..p {
            for j in i + 1..p {
                assert!(supports[i].is_disjoint(&supports[j]));
            }
        }
    }
}

#[test]
fn identity_law_is_trivial() {
    let law = MappingLaw::new(vec![(Transformation::identity(4), q(1, 1))]).unwrap();
    let an = Analysis::run(&law).unwrap();
    assert_eq!(an.s.len(), 1);
    assert_eq!(an.kernel.len(), 1);
    assert_eq!(an.rees.g, an.cosets.h);
    assert_eq!(an.p(), 1);
    let id = an.s.elements()[0].clone();
    assert_eq!(raw(&an.s, &an.limits.nu), BTreeMap::from([(id.images().to_vec(), Q::from_integer(1.into()))]));
}

#[test]
fn cesaro_error_shrinks_like_one_over_n() {
    let an = worked();
    let errs: Vec<f64> = [1_000usize, 10_000]
        .iter()
        .map(|&n| {
            let avg = actevo::oracle::cesaro_average(&an.s, &an.law, n).unwrap();
            an.limits.nu.sup_distance(&avg, |x| x.idx()) * n as f64
        })
        .collect();
    // n · error settles on the constant of the transient sum
    assert!((errs[0] - errs[1]).abs() < 1e-6, "{errs:?}");
    assert!(errs[1] > 0.1);
}

#[test]
fn measures_sum_to_one() {
    let an = Analysis::run(&fuzz::period_three_law()).unwrap();
    for m in an.limits.cycle.iter().chain([&an.limits.nu, &an.limits.eta_l, &an.limits.eta_r]) {
        assert_eq!(m.total(), q(1, 1));
    }
}
