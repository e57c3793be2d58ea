//! Independent deterministic random streams keyed by (master seed, trial, purpose).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Trees = 1,
    RootCycle = 2,
    Bernoulli = 3,
    Estimation = 4,
}

pub fn stream(master: u64, trial: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&master.to_le_bytes());
    seed[8..16].copy_from_slice(&trial.to_le_bytes());
    seed[16..24].copy_from_slice(&(purpose as u64).to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}
