//! Seeded random mapping laws and a few constructed instances for tests and benchmarks.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::Analysis;
use crate::cliques::{FamilyComponent, InvariantFamily};
use crate::error::Result;
use crate::law::MappingLaw;
use crate::measure::{q, Measure, Q};
use crate::transform::Transformation;

/// A random law on `|V| ≤ max_n` with at most `max_gens` generators and integer weights
/// `1..=9`, normalised.
pub fn random_law(seed: u64, max_n: usize, max_gens: usize) -> MappingLaw {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_n);
    let k = rng.random_range(1..=max_gens);
    let raw: Vec<(Transformation, u32)> = (0..k)
        .map(|_| {
            let images: Vec<u32> = (0..n).map(|_| rng.random_range(0..n as u32)).collect();
            let t = Transformation::from_zero_based(images).expect("images are in range");
            (t, rng.random_range(1..=9))
        })
        .collect();
    let total: u32 = raw.iter().map(|(_, w)| w).sum();
    MappingLaw::new(
        raw.into_iter()
            .map(|(t, w)| (t, q(w as i64, total as i64)))
            .collect(),
    )
    .expect("weights are positive and sum to 1")
}

/// `δ_g` for the 3-cycle `g = [2,3,1]`: the powers of `μ` cycle with period 3.
pub fn cyclic_law() -> MappingLaw {
    MappingLaw::new(vec![("[2,3,1]".parse().unwrap(), q(1, 1))]).unwrap()
}

/// `μ = ⅓δ_r + ⅔δ_{r⁴}` for the rotation `r = [2,3,4,5,6,1]`: `G = Z_6`,
/// `H = {id, r³}`, `p = 3`.
pub fn period_three_law() -> MappingLaw {
    MappingLaw::new(vec![
        ("[2,3,4,5,6,1]".parse().unwrap(), q(1, 3)),
        ("[5,6,1,2,3,4]".parse().unwrap(), q(2, 3)),
    ])
    .unwrap()
}

/// A family on a `p = 3` analysis with `c = (1/2, 1/3, 1/6)` spread over the first three
/// representatives in `W`.
pub fn period_three_family(an: &Analysis) -> Result<InvariantFamily> {
    let w = &an.cliques.w;
    let comps = vec![
        FamilyComponent {
            c: q(1, 2),
            lambda_w: Some(Measure::dirac(w[0].clone())),
        },
        FamilyComponent {
            c: q(1, 3),
            lambda_w: Some(Measure::from_weights([
                (w[0].clone(), q(1, 2)),
                (w[1].clone(), q(1, 2)),
            ])?),
        },
        FamilyComponent {
            c: q(1, 6),
            lambda_w: Some(Measure::dirac(w[2].clone())),
        },
    ];
    InvariantFamily::new(an, comps)
}

/// A random family on `an`: random nonnegative integer coefficients (some zero) and random
/// conditional laws on `W`.
pub fn random_family(an: &Analysis, seed: u64) -> Result<InvariantFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = an.p();
    let mut raw: Vec<u32> = (0..p).map(|_| rng.random_range(0..=4)).collect();
    if raw.iter().all(|&c| c == 0) {
        raw[rng.random_range(0..p)] = 1;
    }
    let total: u32 = raw.iter().sum();
    let comps = raw
        .into_iter()
        .map(|c| {
            let c = q(c as i64, total as i64);
            let lambda_w = if c.is_zero() {
                None
            } else {
                let ws: Vec<(crate::Tuple, u32)> = an
                    .cliques
                    .w
                    .iter()
                    .map(|w| (w.clone(), rng.random_range(0..=3)))
                    .filter(|(_, x)| *x > 0)
                    .collect();
                Some(if ws.is_empty() {
                    Measure::dirac(an.cliques.w[0].clone())
                } else {
                    let sum: u32 = ws.iter().map(|(_, x)| x).sum();
                    Measure::from_weights(
                        ws.into_iter()
                            .map(|(w, x)| (w, Q::new((x as i64).into(), (sum as i64).into()))),
                    )?
                })
            };
            Ok(FamilyComponent { c, lambda_w })
        })
        .collect::<Result<Vec<_>>>()?;
    InvariantFamily::new(an, comps)
}
