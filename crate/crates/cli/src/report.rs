//! The JSON report. Transformations use the literal syntax `[2,3,4,1,5]`, points are
//! 1-based and every weight is an exact rational string.

use std::collections::BTreeMap;

use actevo::cliques::{invariant_law, InvariantFamily};
use actevo::measure::format_rational;
use actevo::sim::{SimConfig, Step, VerificationReport};
use actevo::{Analysis, Elem, Measure, Tuple};
use serde::{Deserialize, Serialize};

/// Point or transformation literal to rational string.
pub type Weights = BTreeMap<String, String>;

/// At most this many tuples of `W_μ` are projected in the report.
pub const MAX_PROJECTIONS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch; omitted with `--no-timestamp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub seed: Option<u64>,
    pub input: LawEcho,
    pub semigroup: SemigroupSection,
    pub rees: ReesSection,
    pub limits: LimitsSection,
    pub cliques: CliquesSection,
    pub invariant_law: InvariantSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSection>,
}

/// The law exactly as in the input file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawEcho {
    pub n: usize,
    pub generators: Vec<Vec<u32>>,
    pub weights: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupSection {
    pub elements: usize,
    pub kernel: usize,
    pub m_mu: usize,
    pub kernel_idempotents: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReesSection {
    pub e: String,
    /// Shortest generator word for `e`, leftmost factor first.
    pub e_word: Vec<String>,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<String>,
    #[serde(rename = "R")]
    pub r: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitsSection {
    pub p: usize,
    #[serde(rename = "eta_L")]
    pub eta_l: Weights,
    #[serde(rename = "eta_R")]
    pub eta_r: Weights,
    #[serde(rename = "H")]
    pub h: Vec<String>,
    pub gamma: String,
    #[serde(rename = "H_equals_G")]
    pub h_equals_g: bool,
    pub eta: Weights,
    pub nu: Weights,
    pub eta_equals_nu: bool,
    /// `η^L γ^k ω_H η^R` for `k = 0..p`.
    pub cycle: Vec<Weights>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub x: String,
    #[serde(rename = "L")]
    pub l: String,
    #[serde(rename = "G")]
    pub g: String,
    #[serde(rename = "W")]
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliquesSection {
    pub m_mu: usize,
    pub f_cliques: Vec<Vec<u32>>,
    #[serde(rename = "W_mu_size")]
    pub w_mu_size: usize,
    #[serde(rename = "eW_mu_size")]
    pub ew_mu_size: usize,
    #[serde(rename = "W")]
    pub w: Vec<Vec<u32>>,
    pub example_projections: Vec<Projection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSection {
    #[serde(rename = "Lambda_W")]
    pub lambda_w: Weights,
    /// `η^L ω_G Λ_W` on tuples.
    pub law: Weights,
    /// Law of the first coordinate, indexed by point `1..=n`.
    pub marginal: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Stationary,
    Nonstationary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub c: String,
    #[serde(rename = "Lambda_W", default, skip_serializing_if = "Option::is_none")]
    pub lambda_w: Option<Weights>,
}

/// One step of the sampled excerpt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEcho {
    pub k: i64,
    #[serde(rename = "N")]
    pub n: Option<String>,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "X_L")]
    pub l: String,
    #[serde(rename = "X_C")]
    pub c: usize,
    #[serde(rename = "U_H")]
    pub h: String,
    #[serde(rename = "X_W")]
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSection {
    pub mode: Mode,
    pub config: SimConfig,
    #[serde(rename = "Lambda_W", default, skip_serializing_if = "Option::is_none")]
    pub lambda_w: Option<Weights>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<FamilyEntry>>,
    /// The last steps up to the observation time of replication 0.
    pub path_excerpt: Vec<StepEcho>,
    pub verification: VerificationReport,
    pub exact_failures: usize,
    pub statistical_failures: usize,
}

pub fn elem(an: &Analysis, x: Elem) -> String {
    an.s.get(x).to_string()
}

fn elems(an: &Analysis, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&x| elem(an, x)).collect()
}

pub fn elem_weights(an: &Analysis, m: &Measure<Elem>) -> Weights {
    m.iter().map(|(&x, w)| (elem(an, x), format_rational(w))).collect()
}

pub fn tuple_weights(m: &Measure<Tuple>) -> Weights {
    m.iter().map(|(x, w)| (x.to_string(), format_rational(w))).collect()
}

fn one_based(xs: &[u32]) -> Vec<u32> {
    xs.iter().map(|&x| x + 1).collect()
}

impl AnalysisReport {
    /// The structural sections for `an`, with the invariant law built from `lambda_w`.
    pub fn build(an: &Analysis, lambda_w: &Measure<Tuple>) -> actevo::Result<Self> {
        let input: LawEcho =
            serde_json::from_str(&an.law.to_json()).expect("law JSON matches the echo format");
        let s = &an.s;
        let kernel_idempotents = an
            .kernel
            .elements()
            .iter()
            .filter(|&&z| s.product(z, z) == z)
            .count();
        let semigroup = SemigroupSection {
            elements: s.len(),
            kernel: an.kernel.len(),
            m_mu: an.kernel.min_rank(),
            kernel_idempotents,
        };
        let rees = ReesSection {
            e: elem(an, an.rees.e),
            e_word: s.word(an.rees.e).iter().map(|&i| elem(an, s.generators()[i])).collect(),
            l: elems(an, &an.rees.l),
            g: elems(an, &an.rees.g),
            r: elems(an, &an.rees.r),
        };
        let lim = &an.limits;
        let limits = LimitsSection {
            p: lim.p,
            eta_l: elem_weights(an, &lim.eta_l),
            eta_r: elem_weights(an, &lim.eta_r),
            h: elems(an, &an.cosets.h),
            gamma: elem(an, an.cosets.gamma),
            h_equals_g: an.cosets.h.len() == an.rees.g.len(),
            eta: elem_weights(an, lim.eta()),
            nu: elem_weights(an, &lim.nu),
            eta_equals_nu: lim.eta() == &lim.nu,
            cycle: lim.cycle.iter().map(|m| elem_weights(an, m)).collect(),
        };
        let cq = &an.cliques;
        let example_projections = cq
            .w_mu
            .iter()
            .take(MAX_PROJECTIONS)
            .map(|x| {
                let (l, g, w) = cq.project_tuple(x)?;
                Ok(Projection {
                    x: x.to_string(),
                    l: elem(an, l),
                    g: elem(an, g),
                    w: cq.w[w].to_string(),
                })
            })
            .collect::<actevo::Result<_>>()?;
        let cliques = CliquesSection {
            m_mu: cq.m_mu,
            f_cliques: cq
                .f_cliques
                .iter()
                .map(|c| c.iter().map(|&x| x as u32 + 1).collect())
                .collect(),
            w_mu_size: cq.w_mu.len(),
            ew_mu_size: cq.ew_mu.len(),
            w: cq.w.iter().map(|t| one_based(t.points())).collect(),
            example_projections,
        };
        let law = invariant_law(an, lambda_w)?;
        let first = law.pushforward(|x| x.points()[0]);
        let invariant_law = InvariantSection {
            lambda_w: tuple_weights(lambda_w),
            law: tuple_weights(&law),
            marginal: (0..s.n() as u32).map(|v| format_rational(&first.weight(&v))).collect(),
        };
        Ok(Self {
            tool: "actevo".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: None,
            seed: None,
            input,
            semigroup,
            rees,
            limits,
            cliques,
            invariant_law,
            simulation: None,
        })
    }

    pub fn exact_failures(&self) -> usize {
        self.simulation.as_ref().map_or(0, |s| s.exact_failures)
    }

    pub fn statistical_failures(&self) -> usize {
        self.simulation.as_ref().map_or(0, |s| s.statistical_failures)
    }
}

pub fn family_entries(fam: &InvariantFamily) -> Vec<FamilyEntry> {
    fam.components
        .iter()
        .map(|c| FamilyEntry {
            c: format_rational(&c.c),
            lambda_w: c.lambda_w.as_ref().map(tuple_weights),
        })
        .collect()
}

pub fn step_echo(an: &Analysis, st: &Step) -> StepEcho {
    StepEcho {
        k: st.k,
        n: st.n.map(|x| elem(an, x)),
        x: st.x.to_string(),
        l: elem(an, st.l),
        c: st.c,
        h: elem(an, st.h),
        w: an.cliques.w[st.w].to_string(),
    }
}
