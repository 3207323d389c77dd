//! Exact limit structure of random compositions of transformations of a finite set, and
//! seeded simulation of the resulting action evolutions.
//!
//! The exact path runs [`Semigroup`] closure, the kernel and its Rees decomposition, the
//! limit cycle of the convolution powers, and the invariant multiparticle laws. The
//! [`sim`] module samples evolutions and checks their factor processes.

pub mod analysis;
pub mod cliques;
pub mod error;
pub mod example;
pub mod fuzz;
pub mod law;
pub mod limits;
pub mod linalg;
pub mod measure;
pub mod oracle;
pub mod rees;
pub mod semigroup;
pub mod sim;
pub mod transform;

pub use analysis::Analysis;
pub use error::{Error, Result};
pub use law::MappingLaw;
pub use measure::{Measure, Q};
pub use semigroup::{Elem, Semigroup};
pub use transform::{Transformation, Tuple};
