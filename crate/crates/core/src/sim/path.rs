//! Sampling single evolution paths and the exact per-path identities.

use num_traits::ToPrimitive;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::cliques::InvariantFamily;
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::semigroup::Elem;
use crate::transform::Tuple;

/// Draws from a finite measure using double-precision weights.
#[derive(Debug, Clone)]
pub struct Sampler<T> {
    items: Vec<T>,
    index: WeightedIndex<f64>,
}

impl<T: Clone + Ord> Sampler<T> {
    pub fn new(m: &Measure<T>) -> Result<Self> {
        let (items, weights): (Vec<T>, Vec<f64>) = m
            .iter()
            .map(|(x, w)| (x.clone(), w.to_f64().unwrap_or(0.0)))
            .unzip();
        let index = WeightedIndex::new(&weights)
            .map_err(|e| Error::InvalidMeasure(format!("cannot sample: {e}")))?;
        Ok(Self { items, index })
    }

    /// Position in the support (in key order) and the drawn item.
    pub fn sample_indexed<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, &T) {
        let i = self.index.sample(rng);
        (i, &self.items[i])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &T {
        self.sample_indexed(rng).1
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }
}

/// One time step of a path with all derived factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub k: i64,
    /// `N_k`; absent at the first time of the window.
    pub n: Option<Elem>,
    /// Position of `N_k` in the support of `μ`, used to discretise noise windows.
    pub n_code: Option<usize>,
    pub x: Tuple,
    pub l: Elem,
    pub g: Elem,
    /// Exponent `i` of `X^C_k = γ^i`.
    pub c: usize,
    /// `U^H_k`
    pub h: Elem,
    /// Index of `X^W_k` in `W`.
    pub w: usize,
    /// `M^G_k = X^G_k (X^G_{k-1})⁻¹`; absent at the first time.
    pub m_g: Option<Elem>,
}

/// A sampled trajectory on `[k_min, k_max]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvolutionPath {
    pub seed: u64,
    pub replication: u64,
    pub k_min: i64,
    pub steps: Vec<Step>,
    /// Exponent `y` of `Y_C = γ^y`.
    pub y_c: usize,
    /// Index of `Z_W` in `W`.
    pub z_w: usize,
}

impl EvolutionPath {
    pub fn k_max(&self) -> i64 {
        self.k_min + self.steps.len() as i64 - 1
    }

    pub fn step(&self, k: i64) -> Option<&Step> {
        usize::try_from(k - self.k_min)
            .ok()
            .and_then(|i| self.steps.get(i))
    }
}

#[derive(Debug, Clone)]
enum Start {
    Stationary(Sampler<Tuple>),
    Family {
        c: Sampler<usize>,
        w: Vec<Option<Sampler<Tuple>>>,
    },
}

/// Precomputed samplers for repeated path draws from one analysis.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    an: &'a Analysis,
    mu: Sampler<Elem>,
    eta_l: Sampler<Elem>,
    omega_g: Sampler<Elem>,
    omega_h: Sampler<Elem>,
    start: Start,
}

fn check_w(an: &Analysis, m: &Measure<Tuple>) -> Result<()> {
    match m.support().find(|x| an.cliques.w_index(x).is_none()) {
        Some(x) => Err(Error::InvalidMeasure(format!("Λ_W charges {x}, which is not in W"))),
        None => Ok(()),
    }
}

impl<'a> Simulator<'a> {
    fn base(an: &'a Analysis, start: Start) -> Result<Self> {
        Ok(Self {
            an,
            mu: Sampler::new(&an.mu)?,
            eta_l: Sampler::new(&an.limits.eta_l)?,
            omega_g: Sampler::new(&Measure::uniform(an.rees.g.iter().copied())?)?,
            omega_h: Sampler::new(&Measure::uniform(an.cosets.h.iter().copied())?)?,
            start,
        })
    }

    /// Starts from `Λ = η^L ω_G Λ_W`.
    pub fn stationary(an: &'a Analysis, lambda_w: &Measure<Tuple>) -> Result<Self> {
        check_w(an, lambda_w)?;
        Self::base(an, Start::Stationary(Sampler::new(lambda_w)?))
    }

    /// Starts from `Λ_{k_min}` of the family.
    pub fn nonstationary(an: &'a Analysis, family: &InvariantFamily) -> Result<Self> {
        let c = Measure::from_weights(
            family
                .components
                .iter()
                .enumerate()
                .map(|(i, comp)| (i, comp.c.clone())),
        )?;
        let w = family
            .components
            .iter()
            .map(|comp| {
                comp.lambda_w
                    .as_ref()
                    .map(|m| {
                        check_w(an, m)?;
                        Sampler::new(m)
                    })
                    .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::base(
            an,
            Start::Family {
                c: Sampler::new(&c)?,
                w,
            },
        )
    }

    pub fn analysis(&self) -> &'a Analysis {
        self.an
    }

    /// Number of distinct values a single noise draw can take.
    pub fn noise_alphabet(&self) -> usize {
        self.mu.items().len()
    }

    fn step_from(&self, k: i64, x: Tuple, n: Option<(usize, Elem)>, prev_g: Option<Elem>) -> Result<Step> {
        let an = self.an;
        let (l, g, w) = an.cliques.project_tuple(&x).map_err(|_| {
            Error::Structural(format!("k = {k}: X_k = {x} left W_μ"))
        })?;
        let (c, h) = an.cosets.split(g);
        Ok(Step {
            k,
            n: n.map(|(_, e)| e),
            n_code: n.map(|(i, _)| i),
            x,
            l,
            g,
            c,
            h,
            w,
            m_g: prev_g.map(|pg| an.s.product(g, an.rees.inverse(pg))),
        })
    }

    /// Samples `X` on `[k_min, k_max]` with the generator for `(seed, replication)`.
    pub fn sample(&self, k_min: i64, k_max: i64, seed: u64, replication: u64) -> Result<EvolutionPath> {
        if k_min >= k_max {
            return Err(Error::Input(format!(
                "time range needs k_min < k_max, got [{k_min}, {k_max}]"
            )));
        }
        let an = self.an;
        let s = &an.s;
        let mut rng = super::rng_for(seed, replication);
        let l = *self.eta_l.sample(&mut rng);
        let (g, w) = match &self.start {
            Start::Stationary(ws) => (*self.omega_g.sample(&mut rng), ws.sample(&mut rng)),
            Start::Family { c, w } => {
                let i = *c.sample(&mut rng);
                let ws = w[i].as_ref().expect("components with c_i > 0 carry Λ^i_W");
                let wt = ws.sample(&mut rng);
                let h = *self.omega_h.sample(&mut rng);
                (s.product(an.cosets.gamma_pow(k_min + i as i64), h), wt)
            }
        };
        let x0 = s.get(s.product(l, g)).apply_tuple(w)?;
        let first = self.step_from(k_min, x0, None, None)?;
        let p = an.p() as i64;
        let y_c = (first.c as i64 - k_min).rem_euclid(p) as usize;
        let z_w = first.w;

        let mut steps = Vec::with_capacity((k_max - k_min + 1) as usize);
        steps.push(first);
        for k in k_min + 1..=k_max {
            let (code, &n) = self.mu.sample_indexed(&mut rng);
            let prev = steps.last().expect("nonempty");
            let x = s.get(n).apply_tuple(&prev.x)?;
            let prev_g = prev.g;
            steps.push(self.step_from(k, x, Some((code, n)), Some(prev_g))?);
        }
        Ok(EvolutionPath {
            seed,
            replication,
            k_min,
            steps,
            y_c,
            z_w,
        })
    }
}

/// A stationary path started from `η^L ω_G Λ_W`.
pub fn sample_stationary(
    an: &Analysis,
    lambda_w: &Measure<Tuple>,
    k_min: i64,
    k_max: i64,
    seed: u64,
) -> Result<EvolutionPath> {
    Simulator::stationary(an, lambda_w)?.sample(k_min, k_max, seed, 0)
}

/// A path started from `Λ_{k_min}` of an invariant family.
pub fn sample_nonstationary(
    an: &Analysis,
    family: &InvariantFamily,
    k_min: i64,
    k_max: i64,
    seed: u64,
) -> Result<EvolutionPath> {
    Simulator::nonstationary(an, family)?.sample(k_min, k_max, seed, 0)
}

fn violation(k: i64, msg: impl std::fmt::Display) -> Error {
    Error::Structural(format!("k = {k}: {msg}"))
}

/// The exact per-path identities: the recursion, `X_k ∈ LGW` with the stored factors,
/// constant `X^W`, `X^C_k = γ^k Y_C`, and `M^G_k = (N_k X^L_{k-1})^G` with `(M^G_k)^C = γ`.
pub fn check_path(an: &Analysis, path: &EvolutionPath) -> Result<()> {
    let s = &an.s;
    let p = an.p() as i64;
    for (idx, st) in path.steps.iter().enumerate() {
        let k = st.k;
        if k != path.k_min + idx as i64 {
            return Err(violation(k, "time index out of sequence"));
        }
        let (l, g, w) = an
            .cliques
            .project_tuple(&st.x)
            .map_err(|_| violation(k, format!("X_k = {} is not in LGW", st.x)))?;
        if (l, g, w) != (st.l, st.g, st.w) {
            return Err(violation(k, "stored factors differ from the projection"));
        }
        if s.get(s.product(l, g)).apply_tuple(&an.cliques.w[w])? != st.x {
            return Err(violation(k, "X^L X^G X^W does not recompose X_k"));
        }
        if w != path.z_w {
            return Err(violation(k, "X^W_k differs from Z_W"));
        }
        if an.cosets.split(g) != (st.c, st.h) {
            return Err(violation(k, "stored C/H parts differ from the split of X^G_k"));
        }
        if st.c as i64 != (k + path.y_c as i64).rem_euclid(p) {
            return Err(violation(k, "X^C_k ≠ γ^k Y_C"));
        }
        let Some(prev) = idx.checked_sub(1).map(|i| &path.steps[i]) else {
            continue;
        };
        let (Some(n), Some(m)) = (st.n, st.m_g) else {
            return Err(violation(k, "missing N_k or M^G_k"));
        };
        if s.get(n).apply_tuple(&prev.x)? != st.x {
            return Err(violation(k, "X_k ≠ N_k X_{k-1}"));
        }
        if m != s.product(g, an.rees.inverse(prev.g)) {
            return Err(violation(k, "M^G_k ≠ X^G_k (X^G_{k-1})⁻¹"));
        }
        let (_, ng, _) = an.rees.project(s, &an.kernel, s.product(n, prev.l))?;
        if ng != m {
            return Err(violation(k, "M^G_k ≠ (N_k X^L_{k-1})^G"));
        }
        if an.cosets.split(m).0 as i64 != 1 % p {
            return Err(violation(k, "(M^G_k)^C ≠ γ"));
        }
    }
    Ok(())
}

/// `X_j = X^L_j (M^G_{k,j})⁻¹ (γ^k Y_C) U^H_k Z_W` for every `j ≤ k` in the window, with
/// `M^G_{k,j}` built by accumulating the stored increments.
pub fn verify_factorization(an: &Analysis, path: &EvolutionPath, k: i64) -> Result<()> {
    let s = &an.s;
    let sk = path
        .step(k)
        .ok_or_else(|| Error::Input(format!("k = {k} is outside the path")))?;
    let tail = s.product(an.cosets.gamma_pow(k + path.y_c as i64), sk.h);
    let wt = &an.cliques.w[path.z_w];
    let mut m_kj = an.rees.e;
    for j in (path.k_min..=k).rev() {
        let sj = path.step(j).expect("j is inside the window");
        let z = s.product(s.product(sj.l, an.rees.inverse(m_kj)), tail);
        if s.get(z).apply_tuple(wt)? != sj.x {
            return Err(Error::Structural(format!(
                "factorization fails at (j, k) = ({j}, {k})"
            )));
        }
        if j > path.k_min {
            let m = sj.m_g.ok_or_else(|| violation(j, "missing M^G_j"))?;
            m_kj = s.product(m_kj, m);
        }
    }
    Ok(())
}

/// `T^e_k`: the largest `l < k - n` in the window with `N_{l+n} ⋯ N_{l+1} = e`, where `n` is
/// the length of the shortest generator word for `e`.
pub fn estimate_te(an: &Analysis, path: &EvolutionPath, k: i64) -> Result<Option<i64>> {
    if path.step(k).is_none() {
        return Err(Error::Input(format!("k = {k} is outside the path")));
    }
    let n = an.s.word(an.rees.e).len() as i64;
    let noise = |j: i64| path.step(j).and_then(|st| st.n);
    let mut l = k - n - 1;
    while l >= path.k_min {
        let mut z = noise(l + n);
        for j in (l + 1..l + n).rev() {
            z = z.zip(noise(j)).map(|(a, b)| an.s.product(a, b));
        }
        if z == Some(an.rees.e) {
            return Ok(Some(l));
        }
        l -= 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example;
    use crate::law::MappingLaw;
    use crate::measure::q;

    fn worked() -> Analysis {
        Analysis::run(&example::law()).unwrap()
    }

    #[test]
    fn worked_paths_stay_on_the_cliques() {
        let an = worked();
        let path =
            sample_stationary(&an, &Measure::dirac(example::base_tuple()), -50, 0, 7).unwrap();
        let sets: [Vec<u32>; 2] = [vec![1, 3, 4], vec![0, 2, 4]];
        for st in &path.steps {
            let mut pts = st.x.points().to_vec();
            pts.sort();
            assert!(sets.contains(&pts), "{}", st.x);
        }
        check_path(&an, &path).unwrap();
        for k in [-50, -10, 0] {
            verify_factorization(&an, &path, k).unwrap();
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let an = worked();
        let lw = Measure::dirac(example::base_tuple());
        let a = sample_stationary(&an, &lw, -20, 0, 99).unwrap();
        let b = sample_stationary(&an, &lw, -20, 0, 99).unwrap();
        let c = sample_stationary(&an, &lw, -20, 0, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn idempotent_law_gives_constant_path() {
        let e: crate::Transformation = "[4,2,2,4,5]".parse().unwrap();
        let an = Analysis::run(&MappingLaw::new(vec![(e, q(1, 1))]).unwrap()).unwrap();
        let w = an.cliques.w[0].clone();
        let path = sample_stationary(&an, &Measure::dirac(w.clone()), 0, 10, 1).unwrap();
        assert!(path.steps.iter().all(|st| st.x == w));
        check_path(&an, &path).unwrap();
        assert_eq!(estimate_te(&an, &path, 10).unwrap(), Some(10 - 1 - 1));
    }

    #[test]
    fn tampered_path_is_caught() {
        let an = worked();
        let mut path =
            sample_stationary(&an, &Measure::dirac(example::base_tuple()), -5, 0, 3).unwrap();
        let last = path.steps.last_mut().unwrap();
        last.c = (last.c + 1) % 2;
        assert!(check_path(&an, &path).is_err());
    }

    #[test]
    fn te_is_found_for_worked_example() {
        let an = worked();
        let path =
            sample_stationary(&an, &Measure::dirac(example::base_tuple()), -300, 0, 5).unwrap();
        let t = estimate_te(&an, &path, 0).unwrap().expect("e occurs in 300 steps");
        let n = an.s.word(an.rees.e).len() as i64;
        assert!(t < -n);
        let prod = (t + 1..=t + n)
            .rev()
            .map(|j| path.step(j).unwrap().n.unwrap())
            .reduce(|a, b| an.s.product(a, b))
            .unwrap();
        assert_eq!(prod, an.rees.e);
    }

    #[test]
    fn bad_inputs() {
        let an = worked();
        let lw = Measure::dirac(example::base_tuple());
        assert!(sample_stationary(&an, &lw, 0, 0, 1).is_err());
        let off_w = Measure::dirac("(1,3,5)".parse().unwrap());
        assert!(sample_stationary(&an, &off_w, -3, 0, 1).is_err());
        let path = sample_stationary(&an, &lw, -3, 0, 1).unwrap();
        assert!(verify_factorization(&an, &path, 1).is_err());
    }
}
