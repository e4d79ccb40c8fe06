use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::StateVector;
use crate::error::{Error, Result};

/// Outcome counts keyed by basis index.
pub type Histogram = BTreeMap<usize, u64>;

/// Identifier of the generator behind [`sample_counts`], echoed into run reports.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9/seed_from_u64";

/// Draws `shots` independent terminal measurements of every qubit.
///
/// Uniforms are drawn from a ChaCha8 stream seeded with `seed`, sorted, and
/// matched against the cumulative distribution in a single pass over the
/// amplitudes, so no `2^n` side table is allocated.
pub fn sample_counts(state: &StateVector, shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::validation("shots must be at least 1"));
    }
    state.ensure_normalized()?;
    let total = state.norm_sqr();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<f64> = (0..shots).map(|_| rng.random::<f64>() * total).collect();
    draws.sort_by(f64::total_cmp);

    let mut hist = Histogram::new();
    let amps = state.amplitudes();
    let last_nonzero = amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0);
    let mut cumulative = 0.0;
    let mut draw = draws.iter().peekable();
    for (b, amp) in amps.iter().enumerate() {
        cumulative += amp.norm_sqr();
        let mut hits = 0u64;
        // Rounding can leave the cumulative sum just short of `total`; the
        // last populated outcome absorbs whatever remains.
        while let Some(&&u) = draw.peek() {
            if u < cumulative || b == last_nonzero {
                hits += 1;
                draw.next();
            } else {
                break;
            }
        }
        if hits > 0 {
            hist.insert(b, hits);
        }
        if draw.peek().is_none() {
            break;
        }
    }
    Ok(hist)
}
