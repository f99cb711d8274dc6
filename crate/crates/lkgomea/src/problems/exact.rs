//! Exhaustive enumeration of tiny instances, the value-to-reach oracle.

use super::SingleInstance;
use crate::exec;
use crate::genotype::Genotype;
use crate::{Error, Result};

/// Largest length solvable by enumeration over all 2^len genotypes.
pub const EXACT_ENUMERATION_LIMIT: usize = 20;

/// Exact maximum and one maximizing genotype (the one with the smallest
/// integer encoding, so results are stable). Refuses lengths above
/// [`EXACT_ENUMERATION_LIMIT`].
pub fn solve_exact(instance: &SingleInstance) -> Result<(i64, Genotype)> {
    let len = instance.length();
    if len > EXACT_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "instance length for exhaustive enumeration",
            limit: EXACT_ENUMERATION_LIMIT,
            got: len,
        });
    }
    let total: u64 = 1u64 << len;
    let chunks = 64u64.min(total);
    let chunk_size = total.div_ceil(chunks);

    let best_per_chunk = exec::map_indices(chunks as usize, |c| {
        let lo = c as u64 * chunk_size;
        let hi = (lo + chunk_size).min(total);
        let mut scratch = Genotype::zeros(len);
        let mut best: Option<(i64, u64)> = None;
        for x in lo..hi {
            for i in 0..len {
                scratch.set(i, (x >> i) & 1 == 1);
            }
            let value = instance.evaluate_unchecked(&scratch);
            if best.map_or(true, |(bv, _)| value > bv) {
                best = Some((value, x));
            }
        }
        best
    });

    let (value, encoding) = best_per_chunk
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one genotype enumerated");
    let mut g = Genotype::zeros(len);
    for i in 0..len {
        g.set(i, (encoding >> i) & 1 == 1);
    }
    Ok((value, g))
}
