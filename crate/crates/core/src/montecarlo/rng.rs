use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::accumulate::Moments;
use crate::{Error, Result};

/// Samples per chunk. Fixed, so the chunk schedule and therefore every
/// random draw depends only on the seed and the sample count.
pub const CHUNK_SIZE: u64 = 4096;

/// The generator for one chunk: a ChaCha stream selected by the chunk
/// index under a key derived from the seed.
pub fn chunk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Per-sample checks reported back by a kernel: the largest deviation seen
/// and how many samples exceeded its threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct CheckTally {
    pub max_deviation: f64,
    pub violations: u64,
}

pub(crate) struct Pass<const C: usize> {
    pub moments: Moments,
    pub checks: [CheckTally; C],
}

/// Runs `samples` draws of `kernel` over fixed chunks on `workers`
/// threads and merges the chunk accumulators in chunk order.
///
/// The kernel writes its quantities into the slice and returns `C` check
/// deviations, each compared against the matching entry of `thresholds`.
pub(crate) fn run_pass<const C: usize, F>(
    samples: u64,
    seed: u64,
    workers: usize,
    stream_base: u64,
    width: usize,
    pairs: &[(usize, usize)],
    thresholds: [f64; C],
    kernel: F,
) -> Result<Pass<C>>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) -> [f64; C] + Sync,
{
    let n_chunks = samples.div_ceil(CHUNK_SIZE);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))?;
    let chunks: Vec<Pass<C>> = pool.install(|| {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(seed, stream_base + c);
                let mut moments = Moments::new(width, pairs);
                let mut checks = [CheckTally::default(); C];
                let mut buf = vec![0.0; width];
                let len = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
                for _ in 0..len {
                    let dev = kernel(&mut rng, &mut buf);
                    for ((tally, d), t) in checks.iter_mut().zip(dev).zip(thresholds) {
                        tally.max_deviation = tally.max_deviation.max(d);
                        if !(d <= t) {
                            tally.violations += 1;
                        }
                    }
                    moments.push(&buf);
                }
                Pass { moments, checks }
            })
            .collect()
    });
    let mut total = Pass {
        moments: Moments::new(width, pairs),
        checks: [CheckTally::default(); C],
    };
    for chunk in &chunks {
        total.moments.merge(&chunk.moments);
        for (t, c) in total.checks.iter_mut().zip(chunk.checks) {
            t.max_deviation = t.max_deviation.max(c.max_deviation);
            t.violations += c.violations;
        }
    }
    Ok(total)
}
