//! Seeded simulation of action evolutions `X_k = N_k X_{k-1}` and statistical checks of the
//! factor processes.

pub mod path;
pub mod stats;
pub mod verify;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use path::{
    check_path, estimate_te, sample_nonstationary, sample_stationary, verify_factorization,
    EvolutionPath, Simulator, Step,
};
pub use stats::{Check, CheckKind, VerificationReport};
pub use verify::{
    mixing_lemma, verify_mono_projection, verify_nonstationary, verify_third_noise, SimConfig,
};

/// The generator for one replication: ChaCha8 keyed by `seed ^ replication`.
pub fn rng_for(seed: u64, replication: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ replication)
}
