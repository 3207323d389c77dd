//! The built-in five-point law `μ = (δ_f + δ_g)/2` with `f = [2,3,4,1,5]`, `g = [2,5,5,2,4]`.

use crate::law::MappingLaw;
use crate::measure::{q, Measure};
use crate::semigroup::{Elem, Semigroup};
use crate::transform::{Transformation, Tuple};

pub const LAW_JSON: &str =
    r#"{"n": 5, "generators": [[2,3,4,1,5],[2,5,5,2,4]], "weights": ["1/2","1/2"]}"#;

pub fn generators() -> Vec<Transformation> {
    vec![
        "[2,3,4,1,5]".parse().unwrap(),
        "[2,5,5,2,4]".parse().unwrap(),
    ]
}

pub fn law() -> MappingLaw {
    MappingLaw::new(generators().into_iter().map(|t| (t, q(1, 2))).collect()).unwrap()
}

/// The representative tuple `(2,4,5)`.
pub fn base_tuple() -> Tuple {
    Tuple::new(&[2, 4, 5], 5).unwrap()
}

/// The example's semigroup with its named elements resolved.
pub struct Worked {
    pub s: Semigroup,
    pub f: Elem,
    pub g: Elem,
    pub e: Elem,
    pub h: Elem,
    pub fe: Elem,
    pub ef: Elem,
}

impl Worked {
    pub fn new() -> Self {
        let s = Semigroup::generate(&generators()).unwrap();
        let at = |lit: &str| s.position(&lit.parse().unwrap()).unwrap();
        Self {
            f: at("[2,3,4,1,5]"),
            g: at("[2,5,5,2,4]"),
            e: at("[4,2,2,4,5]"),
            h: at("[2,4,4,2,5]"),
            fe: at("[1,3,3,1,5]"),
            ef: at("[2,2,4,4,5]"),
            s,
        }
    }

    pub fn mu(&self) -> Measure<Elem> {
        law().on(&self.s).unwrap()
    }
}

impl Default for Worked {
    fn default() -> Self {
        Self::new()
    }
}
