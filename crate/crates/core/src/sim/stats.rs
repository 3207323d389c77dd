//! Chi-square tests and the check records they produce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Result of a chi-square test with at least one degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

fn chi_square(statistic: f64, df: usize) -> ChiSquare {
    let dist = ChiSquared::new(df as f64).expect("df ≥ 1");
    ChiSquare {
        statistic,
        df,
        p_value: dist.sf(statistic),
    }
}

/// Critical value of the chi-square distribution with `df` degrees of freedom at level `alpha`.
pub fn critical_value(df: usize, alpha: f64) -> f64 {
    ChiSquared::new(df as f64)
        .expect("df ≥ 1")
        .inverse_cdf(1.0 - alpha)
}

/// Goodness of fit of `observed` counts to `probs`. `None` when fewer than two cells have
/// positive probability. Counts in zero-probability cells give an infinite statistic.
pub fn goodness_of_fit(observed: &[u64], probs: &[f64]) -> Option<ChiSquare> {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let cells = probs.iter().filter(|&&p| p > 0.0).count();
    if cells < 2 || total == 0 {
        return None;
    }
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        if p > 0.0 {
            let e = p * total as f64;
            stat += (o as f64 - e).powi(2) / e;
        } else if o > 0 {
            return Some(ChiSquare {
                statistic: f64::MAX,
                df: cells - 1,
                p_value: 0.0,
            });
        }
    }
    Some(chi_square(stat, cells - 1))
}

/// Pearson test of independence on paired categorical observations. Empty rows and columns are
/// dropped; `None` when either margin has a single category.
pub fn independence<A: Ord + Clone, B: Ord + Clone>(pairs: impl IntoIterator<Item = (A, B)>) -> Option<ChiSquare> {
    let mut table: BTreeMap<(A, B), u64> = BTreeMap::new();
    for pair in pairs {
        *table.entry(pair).or_default() += 1;
    }
    let mut rows: BTreeMap<A, u64> = BTreeMap::new();
    let mut cols: BTreeMap<B, u64> = BTreeMap::new();
    for ((a, b), &n) in &table {
        *rows.entry(a.clone()).or_default() += n;
        *cols.entry(b.clone()).or_default() += n;
    }
    if rows.len() < 2 || cols.len() < 2 {
        return None;
    }
    let total: u64 = rows.values().sum();
    let mut stat = 0.0;
    for (a, &ra) in &rows {
        for (b, &cb) in &cols {
            let e = ra as f64 * cb as f64 / total as f64;
            let o = table.get(&(a.clone(), b.clone())).copied().unwrap_or(0);
            stat += (o as f64 - e).powi(2) / e;
        }
    }
    Some(chi_square(stat, (rows.len() - 1) * (cols.len() - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Deterministic identity; any violation fails.
    Exact,
    /// Hypothesis test at level `alpha`.
    Statistical,
    /// Recorded for inspection; never fails the run.
    Diagnostic,
}

/// One named check in a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    /// Chi-square statistic, or the number of violations for exact checks.
    pub statistic: f64,
    /// Critical value, or 0 for exact checks.
    pub threshold: f64,
    pub p_value: Option<f64>,
    pub df: Option<usize>,
    pub alpha: Option<f64>,
    pub replications: usize,
    pub seed: u64,
    pub pass: bool,
    pub note: Option<String>,
}

impl Check {
    /// An exact check that passes iff there are no violations.
    pub fn exact(name: &str, violations: usize, replications: usize, seed: u64, note: Option<String>) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Exact,
            statistic: violations as f64,
            threshold: 0.0,
            p_value: None,
            df: None,
            alpha: None,
            replications,
            seed,
            pass: violations == 0,
            note,
        }
    }

    /// A chi-square check at level `alpha`; a degenerate table passes vacuously.
    pub fn chi_square(name: &str, test: Option<ChiSquare>, alpha: f64, replications: usize, seed: u64) -> Self {
        match test {
            Some(t) => Self {
                name: name.into(),
                kind: CheckKind::Statistical,
                statistic: t.statistic,
                threshold: critical_value(t.df, alpha),
                p_value: Some(t.p_value),
                df: Some(t.df),
                alpha: Some(alpha),
                replications,
                seed,
                pass: t.p_value >= alpha,
                note: None,
            },
            None => Self {
                name: name.into(),
                kind: CheckKind::Statistical,
                statistic: 0.0,
                threshold: 0.0,
                p_value: None,
                df: Some(0),
                alpha: Some(alpha),
                replications,
                seed,
                pass: true,
                note: Some("degenerate table (a single category); passes vacuously".into()),
            },
        }
    }

    pub fn diagnostic(mut self, note: impl Into<String>) -> Self {
        self.kind = CheckKind::Diagnostic;
        self.note = Some(note.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A list of checks with failure accounting by kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exact_failures(&self) -> usize {
        self.failures(CheckKind::Exact)
    }

    pub fn statistical_failures(&self) -> usize {
        self.failures(CheckKind::Statistical)
    }

    fn failures(&self, kind: CheckKind) -> usize {
        self.checks
            .iter()
            .filter(|c| c.kind == kind && !c.pass)
            .count()
    }

    pub fn all_pass(&self) -> bool {
        self.exact_failures() == 0 && self.statistical_failures() == 0
    }
}
