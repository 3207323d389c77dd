//! Replicated simulations and the checks they feed: exact path identities, the law of the
//! third noise `U^H_k`, independence from the remote past and from a window of the driving
//! noise, the mono-particle events of the five-point example, and the mixing lemma.

use rustc_hash::FxHashMap as HashMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::path::{check_path, estimate_te, verify_factorization, Simulator};
use super::rng_for;
use super::stats::{goodness_of_fit, independence, Check, VerificationReport};
use crate::analysis::Analysis;
use crate::cliques::{classify_family, invariant_law, InvariantFamily};
use crate::error::{Error, Result};
use crate::measure::{Measure, Q};
use crate::semigroup::Elem;
use crate::transform::Tuple;
use crate::{example, linalg};

/// Replication and time-window settings shared by all simulation checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub replications: usize,
    pub seed: u64,
    pub alpha: f64,
    pub k_min: i64,
    pub k_max: i64,
    /// Observation time; defaults to `k_max`.
    pub k: Option<i64>,
    /// Width of the noise window `N_{k-w+1..k}`.
    pub window: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            replications: 10_000,
            seed: 42,
            alpha: 0.001,
            k_min: -999,
            k_max: 0,
            k: None,
            window: 3,
        }
    }
}

impl SimConfig {
    pub fn time(&self) -> i64 {
        self.k.unwrap_or(self.k_max)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(msg));
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.k_min >= self.k_max {
            return bad(format!(
                "k_min must be below k_max, got [{}, {}]",
                self.k_min, self.k_max
            ));
        }
        let k = self.time();
        if k < self.k_min || k > self.k_max {
            return bad(format!("k = {k} lies outside [{}, {}]", self.k_min, self.k_max));
        }
        if self.window == 0 || (self.window as i64) > k - self.k_min {
            return bad(format!(
                "window {} does not fit between k_min = {} and k = {k}",
                self.window, self.k_min
            ));
        }
        Ok(())
    }
}

fn probs<K: Ord + Clone>(m: &Measure<K>, keys: &[K]) -> Vec<f64> {
    keys.iter()
        .map(|k| m.weight(k).to_f64().unwrap_or(0.0))
        .collect()
}

fn counts(values: impl IntoIterator<Item = usize>, cells: usize) -> Vec<u64> {
    let mut out = vec![0u64; cells];
    for v in values {
        out[v] += 1;
    }
    out
}

fn first_error(errs: impl IntoIterator<Item = Option<String>>) -> (usize, Option<String>) {
    let mut n = 0;
    let mut first = None;
    for e in errs.into_iter().flatten() {
        n += 1;
        first.get_or_insert(e);
    }
    (n, first)
}

/// What one replication contributes at the observation time.
struct Record {
    path_err: Option<String>,
    fact_err: Option<String>,
    /// Position of `U^H_k` in `H`.
    u_h: usize,
    y_c: usize,
    z_w: usize,
    window: u64,
    x: Tuple,
    l: Elem,
    te_gap: Option<i64>,
}

fn replicate(sim: &Simulator<'_>, cfg: &SimConfig, h_pos: &HashMap<Elem, usize>, rep: u64) -> Result<Record> {
    let an = sim.analysis();
    let path = sim.sample(cfg.k_min, cfg.k_max, cfg.seed, rep)?;
    let k = cfg.time();
    let path_err = check_path(an, &path).err().map(|e| e.to_string());
    let fact_err = [k, cfg.k_max]
        .iter()
        .find_map(|&t| verify_factorization(an, &path, t).err())
        .map(|e| e.to_string());
    let alphabet = sim.noise_alphabet() as u64;
    let mut window = 0u64;
    for j in 0..cfg.window as i64 {
        let code = path
            .step(k - j)
            .and_then(|st| st.n_code)
            .ok_or_else(|| Error::Structural(format!("no noise at k = {}", k - j)))?;
        window = window * alphabet + code as u64;
    }
    let st = path.step(k).expect("k is inside the window");
    Ok(Record {
        path_err,
        fact_err,
        u_h: h_pos[&st.h],
        y_c: path.y_c,
        z_w: path.z_w,
        window,
        x: st.x.clone(),
        l: st.l,
        te_gap: estimate_te(an, &path, k)?.map(|t| k - t),
    })
}

fn run(sim: &Simulator<'_>, cfg: &SimConfig) -> Result<Vec<Record>> {
    let h_pos: HashMap<Elem, usize> = sim
        .analysis()
        .cosets
        .h
        .iter()
        .enumerate()
        .map(|(i, &h)| (h, i))
        .collect();
    (0..cfg.replications as u64)
        .into_par_iter()
        .map(|rep| replicate(sim, cfg, &h_pos, rep))
        .collect()
}

fn exact_checks(records: &[Record], cfg: &SimConfig) -> Vec<Check> {
    let r = cfg.replications;
    let (n_path, first_path) = first_error(records.iter().map(|x| x.path_err.clone()));
    let (n_fact, first_fact) = first_error(records.iter().map(|x| x.fact_err.clone()));
    vec![
        Check::exact("path_invariants", n_path, r, cfg.seed, first_path),
        Check::exact("factorization", n_fact, r, cfg.seed, first_fact),
    ]
}

/// Stationary replications from `Λ = η^L ω_G Λ_W`: exact path identities, the law of
/// `U^H_k`, `Y_C` and `(Y_C, Z_W)`, and pairwise independence of `U^H_k`, `(Y_C, Z_W)` and
/// the noise window.
pub fn verify_third_noise(
    an: &Analysis,
    lambda_w: &Measure<Tuple>,
    cfg: &SimConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    if cfg.replications < 1000 {
        return Err(Error::Input(format!(
            "third-noise verification needs at least 1000 replications, got {}",
            cfg.replications
        )));
    }
    let sim = Simulator::stationary(an, lambda_w)?;
    let records = run(&sim, cfg)?;
    let (r, seed, alpha) = (cfg.replications, cfg.seed, cfg.alpha);
    let p = an.p();
    let nh = an.cosets.h.len();
    let nw = an.cliques.w.len();

    let mut report = VerificationReport::default();
    report.checks.extend(exact_checks(&records, cfg));

    let uniform_h = vec![1.0 / nh as f64; nh];
    report.push(Check::chi_square(
        "u_h_uniform",
        goodness_of_fit(&counts(records.iter().map(|x| x.u_h), nh), &uniform_h),
        alpha,
        r,
        seed,
    ));
    report.push(Check::chi_square(
        "y_c_uniform",
        goodness_of_fit(&counts(records.iter().map(|x| x.y_c), p), &vec![1.0 / p as f64; p]),
        alpha,
        r,
        seed,
    ));
    let lw = probs(lambda_w, &an.cliques.w);
    let joint_probs: Vec<f64> = (0..p)
        .flat_map(|_| lw.iter().map(move |&q| q / p as f64))
        .collect();
    report.push(Check::chi_square(
        "y_c_z_w_joint",
        goodness_of_fit(
            &counts(records.iter().map(|x| x.y_c * nw + x.z_w), p * nw),
            &joint_probs,
        ),
        alpha,
        r,
        seed,
    ));
    report.push(Check::chi_square(
        "u_h_indep_remote_past",
        independence(records.iter().map(|x| (x.u_h, (x.y_c, x.z_w)))),
        alpha,
        r,
        seed,
    ));
    report.push(
        Check::chi_square(
            "u_h_indep_noise_window",
            independence(records.iter().map(|x| (x.u_h, x.window))),
            alpha,
            r,
            seed,
        )
        .with_note(format!("noise window N_(k-{}+1..k)", cfg.window)),
    );
    report.push(Check::chi_square(
        "remote_past_indep_noise_window",
        independence(records.iter().map(|x| ((x.y_c, x.z_w), x.window))),
        alpha,
        r,
        seed,
    ));

    let lam = invariant_law(an, lambda_w)?;
    let support: Vec<Tuple> = lam.support().cloned().collect();
    let pos: HashMap<&Tuple, usize> = support.iter().enumerate().map(|(i, x)| (x, i)).collect();
    // one extra cell with probability zero collects anything off the support
    let mut x_probs = probs(&lam, &support);
    x_probs.push(0.0);
    let x_counts = counts(
        records.iter().map(|x| pos.get(&x.x).copied().unwrap_or(support.len())),
        support.len() + 1,
    );
    report.push(Check::chi_square(
        "x_k_marginal",
        goodness_of_fit(&x_counts, &x_probs),
        alpha,
        r,
        seed,
    ));
    let ls = &an.rees.l;
    let l_pos: HashMap<Elem, usize> = ls.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    report.push(Check::chi_square(
        "x_l_marginal",
        goodness_of_fit(
            &counts(records.iter().map(|x| l_pos[&x.l]), ls.len()),
            &probs(&an.limits.eta_l, ls),
        ),
        alpha,
        r,
        seed,
    ));

    let gaps: Vec<i64> = records.iter().filter_map(|x| x.te_gap).collect();
    let missing = r - gaps.len();
    let mean = gaps.iter().sum::<i64>() as f64 / gaps.len().max(1) as f64;
    let max = gaps.iter().copied().max().unwrap_or(0);
    report.push(
        Check::exact("te_observed", missing, r, seed, None).diagnostic(format!(
            "T^e_k found on {} of {r} paths; k - T^e_k has mean {mean:.2} and max {max}",
            gaps.len()
        )),
    );
    Ok(report)
}

/// The five events linking `X¹_k` to `X^L_k` and `U^G_k 2` in the five-point example,
/// checked at every time of every replication, and the law of `X¹_k` against `λ`.
pub fn verify_mono_projection(an: &Analysis, cfg: &SimConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    if an.law != example::law() {
        return Err(Error::Input(
            "the mono-particle events are stated for the built-in five-point law".into(),
        ));
    }
    let s = &an.s;
    let at = |lit: &str| s.position(&lit.parse().expect("literal")).expect("element of S");
    let (e, fe) = (at("[4,2,2,4,5]"), at("[1,3,3,1,5]"));
    let base = example::base_tuple();
    let sim = Simulator::stationary(an, &Measure::dirac(base.clone()))?;
    let k = cfg.time();

    // per replication: violations of each event and X¹_k (0-based)
    let per_rep: Vec<([usize; 5], usize)> = (0..cfg.replications as u64)
        .into_par_iter()
        .map(|rep| {
            let path = sim.sample(cfg.k_min, cfg.k_max, cfg.seed, rep)?;
            let mut bad = [0usize; 5];
            for st in &path.steps {
                let x1 = st.x.points()[0] as usize;
                let u2 = s.get(st.g).apply(1);
                let events = [
                    (x1 == 0, st.l == fe && u2 == 3),
                    (x1 == 1, st.l == e && u2 == 1),
                    (x1 == 2, st.l == fe && u2 == 1),
                    (x1 == 3, st.l == e && u2 == 3),
                    (x1 == 4, u2 == 4),
                ];
                for (i, (a, b)) in events.iter().enumerate() {
                    if a != b {
                        bad[i] += 1;
                    }
                }
            }
            let x1 = path.step(k).expect("k in window").x.points()[0] as usize;
            Ok((bad, x1))
        })
        .collect::<Result<_>>()?;

    let (r, seed) = (cfg.replications, cfg.seed);
    let mut report = VerificationReport::default();
    let names = [
        "{X1=1} = {X^L=fe, U^G 2=4}",
        "{X1=2} = {X^L=e, U^G 2=2}",
        "{X1=3} = {X^L=fe, U^G 2=2}",
        "{X1=4} = {X^L=e, U^G 2=4}",
        "{X1=5} = {U^G 2=5}",
    ];
    for (i, name) in names.iter().enumerate() {
        let v: usize = per_rep.iter().map(|(b, _)| b[i]).sum();
        report.push(Check::exact(&format!("mono_event {name}"), v, r, seed, None));
    }

    // λ from the tuple law must agree with the stationary law of the one-point chain
    let lam = invariant_law(an, &Measure::dirac(base))?;
    let first = lam.pushforward(|x| x.points()[0] as usize);
    let chain = linalg::stationary(&an.law.marginal_transition_matrix())?;
    let from_tuple: Vec<Q> = (0..an.s.n()).map(|v| first.weight(&v)).collect();
    report.push(Check::exact(
        "lambda_consistency",
        usize::from(from_tuple != chain),
        r,
        seed,
        None,
    ));
    let lam_f: Vec<f64> = from_tuple.iter().map(|q| q.to_f64().unwrap_or(0.0)).collect();
    report.push(Check::chi_square(
        "x1_marginal",
        goodness_of_fit(&counts(per_rep.iter().map(|(_, x)| *x), an.s.n()), &lam_f),
        cfg.alpha,
        r,
        seed,
    ));
    Ok(report)
}

/// Replications started from `Λ_{k_min}` of a family: exact path identities, the joint law
/// `P(Y_C = γ^i, Z_W = w) = c_i Λ^i_W{w}`, and exact reclassification of the family.
pub fn verify_nonstationary(
    an: &Analysis,
    family: &InvariantFamily,
    cfg: &SimConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let sim = Simulator::nonstationary(an, family)?;
    let records = run(&sim, cfg)?;
    let (r, seed) = (cfg.replications, cfg.seed);
    let nw = an.cliques.w.len();
    let mut report = VerificationReport::default();
    report.checks.extend(exact_checks(&records, cfg));

    let mut joint = Vec::with_capacity(family.components.len() * nw);
    for comp in &family.components {
        let c = comp.c.to_f64().unwrap_or(0.0);
        match &comp.lambda_w {
            Some(m) => joint.extend(probs(m, &an.cliques.w).into_iter().map(|q| c * q)),
            None => joint.extend(std::iter::repeat_n(0.0, nw)),
        }
    }
    report.push(Check::chi_square(
        "y_c_z_w_family_joint",
        goodness_of_fit(
            &counts(records.iter().map(|x| x.y_c * nw + x.z_w), joint.len()),
            &joint,
        ),
        cfg.alpha,
        r,
        seed,
    ));
    let roundtrip = family
        .law_at(an, 0)
        .and_then(|lam0| classify_family(an, &lam0));
    let note = match &roundtrip {
        Ok(f) if f == family => None,
        Ok(_) => Some("classification returned a different family".to_string()),
        Err(e) => Some(e.to_string()),
    };
    report.push(Check::exact(
        "family_roundtrip",
        usize::from(note.is_some()),
        r,
        seed,
        note,
    ));
    Ok(report)
}

/// `(f N'_1 ⋯ N'_n h)^H` against `ω_H` for fixed kernel elements `f`, `h` and each `n` in
/// `ns`. Only the largest `n` is a pass/fail check; smaller ones are diagnostics.
pub fn mixing_lemma(an: &Analysis, cfg: &SimConfig, ns: &[usize]) -> Result<VerificationReport> {
    cfg.validate()?;
    let s = &an.s;
    let ks = an.kernel.elements();
    let (f, h) = (ks[0], ks[ks.len() - 1]);
    let mu = super::path::Sampler::new(&an.mu)?;
    let nh = an.cosets.h.len();
    let h_pos: HashMap<Elem, usize> = an.cosets.h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let largest = ns.iter().copied().max().unwrap_or(0);
    let mut report = VerificationReport::default();
    for &n in ns {
        let draws: Vec<usize> = (0..cfg.replications as u64)
            .into_par_iter()
            .map(|rep| {
                let mut rng = rng_for(cfg.seed ^ ((n as u64) << 40), rep);
                let mut z = f;
                for _ in 0..n {
                    z = s.product(z, *mu.sample(&mut rng));
                }
                z = s.product(z, h);
                let (_, g, _) = an.rees.project(s, &an.kernel, z)?;
                Ok(h_pos[&an.cosets.split(g).1])
            })
            .collect::<Result<_>>()?;
        let check = Check::chi_square(
            &format!("mixing_n{n}"),
            goodness_of_fit(&counts(draws, nh), &vec![1.0 / nh as f64; nh]),
            cfg.alpha,
            cfg.replications,
            cfg.seed,
        );
        report.push(if n == largest {
            check
        } else {
            let note = check.note.clone().unwrap_or_default();
            check.diagnostic(format!("convergence trend point {note}").trim().to_string())
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(r: usize) -> SimConfig {
        SimConfig {
            replications: r,
            k_min: -60,
            ..SimConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::default().validate().is_ok());
        let zero = SimConfig {
            replications: 0,
            ..SimConfig::default()
        };
        assert!(zero.validate().is_err());
        let wide = SimConfig {
            k_min: -2,
            window: 3,
            ..SimConfig::default()
        };
        assert!(wide.validate().is_err());
        let json = r#"{"replications": 5, "seed": 1}"#;
        let cfg: SimConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.window, 3);
        assert!(serde_json::from_str::<SimConfig>(r#"{"replicas": 5}"#).is_err());
    }

    #[test]
    fn third_noise_small_run() {
        let an = Analysis::run(&example::law()).unwrap();
        let rep = verify_third_noise(&an, &Measure::dirac(example::base_tuple()), &small(1000)).unwrap();
        assert_eq!(rep.exact_failures(), 0, "{rep:#?}");
        let u = rep.get("u_h_uniform").unwrap();
        assert_eq!(u.df, Some(5));
        let w = rep.get("u_h_indep_noise_window").unwrap();
        assert_eq!(w.df, Some(5 * 7));
        // p = 1 and |W| = 1 make the remote past a constant
        assert!(rep.get("y_c_uniform").unwrap().note.is_some());
        assert!(verify_third_noise(&an, &Measure::dirac(example::base_tuple()), &small(10)).is_err());
    }

    #[test]
    fn mono_small_run() {
        let an = Analysis::run(&example::law()).unwrap();
        let rep = verify_mono_projection(&an, &small(200)).unwrap();
        assert_eq!(rep.exact_failures(), 0, "{rep:#?}");
    }

    #[test]
    fn mono_rejects_other_laws() {
        let law = crate::MappingLaw::from_json(r#"{"n":3,"generators":[[2,3,1]],"weights":["1"]}"#).unwrap();
        let an = Analysis::run(&law).unwrap();
        assert!(verify_mono_projection(&an, &small(10)).is_err());
    }
}
