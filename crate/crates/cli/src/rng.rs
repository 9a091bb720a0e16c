//! Deterministic per-trial randomness.
//!
//! Each trial owns stream `trial_index` of a counter-based ChaCha generator
//! seeded with the master seed, so trial results never depend on execution
//! order and stay bit-identical across runs.

use otsim_core::statevec::LogicalAmplitudes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// Uniform Bloch-sphere point.
pub fn random_logical(rng: &mut impl Rng) -> LogicalAmplitudes {
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = rng.gen::<f64>() * std::f64::consts::TAU;
    LogicalAmplitudes::from_bloch_angles(theta, phi)
}

/// Uniform unit vector.
pub fn random_axis(rng: &mut impl Rng) -> [f64; 3] {
    let z = 1.0 - 2.0 * rng.gen::<f64>();
    let azimuth = rng.gen::<f64>() * std::f64::consts::TAU;
    let r = (1.0 - z * z).sqrt();
    [r * azimuth.cos(), r * azimuth.sin(), z]
}
