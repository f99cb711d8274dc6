//! Per-solution local neighborhoods under Hamming distance.
//!
//! The kernel of a solution is its k nearest neighbors in the population,
//! ties broken randomly with keys drawn fresh per computation so converged
//! duplicates rotate through each other's kernels. The symmetric variant
//! additionally contains every solution that lists the owner among its own
//! nearest neighbors, which keeps converged niches reachable from outside.

use crate::exec;
use crate::genotype::Genotype;
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::{Error, Result};
use rand::RngCore;

/// Hamming distance with a length check.
pub fn hamming(a: &Genotype, b: &Genotype) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.hamming(b))
}

/// Default neighborhood size: ceil(sqrt(population size)), clamped so a
/// solution never needs itself as a neighbor.
pub fn default_k(population_size: usize) -> usize {
    debug_assert!(population_size >= 2);
    let k = (population_size as f64).sqrt().ceil() as usize;
    k.min(population_size - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborhoodMode {
    Asymmetric,
    Symmetric,
}

/// Per-solution neighbor index lists. Asymmetric sets have exactly `k`
/// members; symmetric sets contain at least the owner's k nearest neighbors.
#[derive(Clone, Debug)]
pub struct NeighborhoodSet {
    mode: NeighborhoodMode,
    sets: Vec<Vec<usize>>,
}

impl NeighborhoodSet {
    pub fn mode(&self) -> NeighborhoodMode {
        self.mode
    }

    pub fn neighbors(&self, solution: usize) -> &[usize] {
        &self.sets[solution]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Ranks, for every solution, all others by (Hamming distance, random key)
/// and keeps the first `k`; in symmetric mode the owner is then added to the
/// neighborhood of each of its nearest neighbors. Per-solution tie keys come
/// from independent streams derived from `seed`, so the result is identical
/// whether the per-solution passes run sequentially or in parallel.
pub fn compute_neighborhoods<G: AsRef<Genotype> + Sync>(
    population: &[G],
    k: usize,
    mode: NeighborhoodMode,
    seed: u64,
) -> Result<NeighborhoodSet> {
    let n = population.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "neighborhood size {k} out of range for population of {n}"
        )));
    }
    let knn: Vec<Vec<usize>> = exec::map_indices(n, |i| {
        let mut rng = rng_from_seed(derive_seed(&[seed, stream::NEIGHBOR, i as u64]));
        let me = population[i].as_ref();
        let mut candidates: Vec<(usize, u64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| (me.hamming(population[j].as_ref()), rng.next_u64(), j))
            .collect();
        // only the k-th position's ordering matters; the comparison key is
        // total, so the selected set is unique
        candidates.select_nth_unstable(k - 1);
        let mut selected: Vec<usize> = candidates[..k].iter().map(|&(_, _, j)| j).collect();
        selected.sort_unstable();
        selected
    });

    let sets = match mode {
        NeighborhoodMode::Asymmetric => knn,
        NeighborhoodMode::Symmetric => {
            let mut sets = knn.clone();
            for (i, neighbors) in knn.iter().enumerate() {
                for &j in neighbors {
                    sets[j].push(i);
                }
            }
            for set in sets.iter_mut() {
                set.sort_unstable();
                set.dedup();
            }
            sets
        }
    };
    Ok(NeighborhoodSet { mode, sets })
}
