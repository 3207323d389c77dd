//! Floating-point iteration of the convolution powers `μⁿ`, kept independent of the exact
//! structural route in [`crate::limits`] so the two can be compared.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::law::MappingLaw;
use crate::semigroup::Semigroup;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 100_000;

/// Estimates of the limit cycle of `μⁿ`, as dense vectors indexed by semigroup element.
#[derive(Debug, Clone)]
pub struct OracleEstimate {
    pub p_est: usize,
    /// Iteration at which the lag was detected.
    pub detected_at: usize,
    /// `μⁿ` at the first multiple of `p_est` after detection.
    pub eta_est: Vec<f64>,
    /// Average of one full cycle starting at `eta_est`.
    pub nu_est: Vec<f64>,
}

fn float_weights(s: &Semigroup, law: &MappingLaw) -> Result<Vec<(usize, f64)>> {
    law.support()
        .iter()
        .map(|(t, w)| {
            let e = s
                .position(t)
                .ok_or_else(|| Error::Input(format!("{t} is not in the semigroup")))?;
            let gi = s
                .generators()
                .iter()
                .position(|&g| g == e)
                .ok_or_else(|| Error::Input(format!("{t} is not a generator")))?;
            Ok((gi, num_traits::ToPrimitive::to_f64(w).unwrap_or(f64::NAN)))
        })
        .collect()
}

fn step(s: &Semigroup, weights: &[(usize, f64)], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (x, &mass) in v.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        for &(gi, w) in weights {
            out[s.left_mul(gi, crate::Elem(x as u32)).idx()] += w * mass;
        }
    }
    out
}

fn initial(s: &Semigroup, weights: &[(usize, f64)]) -> Vec<f64> {
    let mut v = vec![0.0; s.len()];
    for &(gi, w) in weights {
        v[s.generators()[gi].idx()] += w;
    }
    v
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Iterates `μⁿ` until it repeats at some lag `q ≤ max_lag` within `tol` for a full
/// `q` consecutive steps. Iteration then continues until the lag-`q` differences stop
/// shrinking, and the smallest lag dividing `q` that still repeats within `tol` is reported.
/// The second phase keeps a slowly decaying oscillation from passing for a longer period.
pub fn float_limit_oracle(
    s: &Semigroup,
    law: &MappingLaw,
    tol: f64,
    max_lag: usize,
) -> Result<OracleEstimate> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!("oracle tolerance must be positive, got {tol}")));
    }
    let max_lag = max_lag.max(1);
    let weights = float_weights(s, law)?;
    let mut history: VecDeque<Vec<f64>> = VecDeque::with_capacity(max_lag + 1);
    let mut v = initial(s, &weights);
    let mut candidate: Option<(usize, usize)> = None; // (lag, streak)
    let mut n = 1;

    let (q, detected_at) = loop {
        if n > MAX_ITERATIONS {
            return Err(Error::Structural(format!(
                "float oracle did not settle within {MAX_ITERATIONS} iterations"
            )));
        }
        let lag = (1..=history.len().min(max_lag))
            .find(|&q| sup_diff(&v, &history[history.len() - q]) < tol);
        candidate = match (candidate, lag) {
            (Some((q, streak)), Some(l)) if q == l => Some((q, streak + 1)),
            (_, Some(l)) => Some((l, 1)),
            (_, None) => None,
        };
        if let Some((q, streak)) = candidate {
            if streak >= q {
                break (q, n);
            }
        }
        if history.len() == max_lag {
            history.pop_front();
        }
        let next = step(s, &weights, &v);
        history.push_back(std::mem::replace(&mut v, next));
        n += 1;
    };

    let lag_diff = |v: &[f64], h: &VecDeque<Vec<f64>>, d: usize| sup_diff(v, &h[h.len() - d]);
    let mut best = lag_diff(&v, &history, q);
    let mut stale = 0;
    while best > tol * 1e-3 && stale < q && n < MAX_ITERATIONS {
        if history.len() == max_lag {
            history.pop_front();
        }
        let next = step(s, &weights, &v);
        history.push_back(std::mem::replace(&mut v, next));
        n += 1;
        let d = lag_diff(&v, &history, q);
        if d < best {
            best = d;
            stale = 0;
        } else {
            stale += 1;
        }
    }
    let p = (1..=q)
        .find(|&d| q % d == 0 && lag_diff(&v, &history, d) < tol)
        .unwrap_or(q);

    while n % p != 0 {
        v = step(s, &weights, &v);
        n += 1;
    }
    let eta_est = v.clone();
    let mut nu_est = vec![0.0; v.len()];
    for _ in 0..p {
        for (acc, x) in nu_est.iter_mut().zip(&v) {
            *acc += x / p as f64;
        }
        v = step(s, &weights, &v);
    }
    Ok(OracleEstimate {
        p_est: p,
        detected_at,
        eta_est,
        nu_est,
    })
}

/// `(1/n) Σ_{k=1}^{n} μ^k` in double precision.
pub fn cesaro_average(s: &Semigroup, law: &MappingLaw, n: usize) -> Result<Vec<f64>> {
    let weights = float_weights(s, law)?;
    let mut v = initial(s, &weights);
    let mut sum = vec![0.0; v.len()];
    for k in 1..=n {
        for (acc, x) in sum.iter_mut().zip(&v) {
            *acc += x;
        }
        if k < n {
            v = step(s, &weights, &v);
        }
    }
    Ok(sum.into_iter().map(|x| x / n as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::q;
    use crate::Transformation;

    #[test]
    fn point_mass_idempotent_settles_immediately() {
        let e: Transformation = "[4,2,2,4,5]".parse().unwrap();
        let law = MappingLaw::new(vec![(e.clone(), q(1, 1))]).unwrap();
        let s = Semigroup::generate(&[e]).unwrap();
        let est = float_limit_oracle(&s, &law, DEFAULT_TOL, 1).unwrap();
        assert_eq!(est.p_est, 1);
        assert_eq!(est.detected_at, 2);
        assert_eq!(est.eta_est, vec![1.0]);
    }

    #[test]
    fn three_cycle_lag() {
        let g: Transformation = "[2,3,1]".parse().unwrap();
        let law = MappingLaw::new(vec![(g.clone(), q(1, 1))]).unwrap();
        let s = Semigroup::generate(&[g]).unwrap();
        let est = float_limit_oracle(&s, &law, DEFAULT_TOL, 3).unwrap();
        assert_eq!(est.p_est, 3);
        let id = s.position(&Transformation::identity(3)).unwrap();
        assert_eq!(est.eta_est[id.idx()], 1.0);
        assert!(est.nu_est.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let g: Transformation = "[2,1]".parse().unwrap();
        let law = MappingLaw::new(vec![(g.clone(), q(1, 1))]).unwrap();
        let s = Semigroup::generate(&[g]).unwrap();
        assert!(float_limit_oracle(&s, &law, 0.0, 2).is_err());
    }
}
