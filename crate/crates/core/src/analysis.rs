//! The full exact pipeline for one mapping law.

use crate::cliques::{compute_w, CliqueData};
use crate::error::Result;
use crate::law::MappingLaw;
use crate::limits::{assemble_limits, left_stationary, period_and_h, right_stationary, CyclicLimit, OneSided};
use crate::measure::Measure;
use crate::rees::{canonical_idempotent, CosetData, ReesData};
use crate::semigroup::{Elem, Kernel, Semigroup, DEFAULT_ELEMENT_CAP};

/// Everything derived from a mapping law: semigroup, kernel, Rees data, limits and cliques.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub law: MappingLaw,
    pub s: Semigroup,
    pub mu: Measure<Elem>,
    pub kernel: Kernel,
    pub rees: ReesData,
    pub cosets: CosetData,
    pub left: OneSided,
    pub right: OneSided,
    pub limits: CyclicLimit,
    pub cliques: CliqueData,
}

impl Analysis {
    pub fn run(law: &MappingLaw) -> Result<Self> {
        Self::with_cap(law, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(law: &MappingLaw, cap: usize) -> Result<Self> {
        let s = Semigroup::generate_with_cap(&law.transformations(), cap)?;
        let mu = law.on(&s)?;
        let kernel = s.kernel()?;
        let e = canonical_idempotent(&s, &kernel);
        let rees = ReesData::at(&s, &kernel, e)?;
        let left = left_stationary(&s, &rees, &mu)?;
        let right = right_stationary(&s, &rees, &mu)?;
        let cosets = period_and_h(&s, &rees, &mu)?;
        let limits = assemble_limits(
            &s,
            &kernel,
            &rees,
            &cosets,
            &mu,
            left.factor.clone(),
            right.factor.clone(),
        )?;
        let cliques = compute_w(&s, &kernel, &rees)?;
        Ok(Self {
            law: law.clone(),
            s,
            mu,
            kernel,
            rees,
            cosets,
            left,
            right,
            limits,
            cliques,
        })
    }

    pub fn p(&self) -> usize {
        self.cosets.p
    }
}
