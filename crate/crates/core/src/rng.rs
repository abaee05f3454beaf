//! Seeded random sources.
//!
//! Every shot of every experiment owns an independent ChaCha stream derived
//! from `(master_seed, shot_index)`, so parallel and sequential execution
//! produce bit-identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;

/// Random source used for all simulation work.
pub type SimRng = ChaCha8Rng;

/// Root random source for a run.
pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `index` of `master`.
pub fn substream(master: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Draws a fresh master seed from `rng` for a batch of derived substreams.
pub fn fork_master<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    rng.random()
}

/// Runs `task(rng, i)` for `i in 0..count` in parallel, each on its own
/// substream of `master`. Output order follows `i`.
pub(crate) fn par_indexed<T, F>(master: u64, count: usize, task: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut SimRng, usize) -> Result<T> + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(master, i as u64);
            task(&mut rng, i)
        })
        .collect()
}
