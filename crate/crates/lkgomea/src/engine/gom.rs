//! Gene-pool optimal mixing and forced improvements.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{FitnessVec, Solution, Stop};
use crate::genotype::Genotype;
use crate::linkage::Fos;
use crate::rng::Rng;

/// Evaluation and acceptance environment for one variation pass. Implemented
/// by the single-objective run state and by the multi-objective run state
/// (where acceptance depends on the solution's cluster role or weights and
/// every evaluation is offered to the elitist archive).
pub trait GomContext {
    type Fitness: FitnessVec;

    fn evaluate(&mut self, genotype: &Genotype) -> Result<Self::Fitness, Stop>;

    /// Equal-or-better acceptance; called right after `evaluate`.
    fn accepts(&self, before: &Self::Fitness, after: &Self::Fitness) -> bool;

    /// Pure strict-improvement comparison between two fitness values.
    fn strictly_better(&self, before: &Self::Fitness, after: &Self::Fitness) -> bool;

    /// Whether the most recent evaluation extended the elitist archive;
    /// multi-objective contexts count that as an improvement too.
    fn last_evaluation_extended_front(&self) -> bool {
        false
    }

    /// Donor for forced improvements: the current elitist, or a random
    /// archive member in multi-objective runs.
    fn fi_donor(&mut self, rng: &mut Rng) -> Option<(Genotype, Self::Fitness)>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GomOutcome {
    /// whether any subset copy was kept
    pub changed: bool,
    /// whether any kept copy was a strict improvement (or extended the front)
    pub improved: bool,
}

#[inline]
fn restore(genotype: &mut Genotype, subset: &[usize], backup: &[bool]) {
    for (&v, &bit) in subset.iter().zip(backup) {
        genotype.set(v, bit);
    }
}

/// Iterates the FOS subsets in a fresh random order; per subset, scans a
/// shuffled donor sequence for one whose values differ on the subset, copies
/// them in, evaluates once, and keeps the change iff the context accepts it
/// (otherwise the backup is restored bit-exactly). With donor search off only
/// the first shuffled donor is considered. A stop signal restores the current
/// subset and propagates with all previously kept changes intact.
pub fn gene_pool_optimal_mixing<C: GomContext>(
    target: &mut Solution<C::Fitness>,
    fos: &Fos,
    donors: &[&Solution<C::Fitness>],
    donor_search: bool,
    ctx: &mut C,
    rng: &mut Rng,
) -> Result<GomOutcome, Stop> {
    // donors identical to the target cannot differ on any subset; one pass
    // of word-wise equality replaces a full donor scan per subset, which is
    // what converged populations would otherwise burn time on
    if donors.iter().all(|d| d.genotype == target.genotype) {
        return Ok(GomOutcome::default());
    }

    let mut order: Vec<usize> = (0..fos.len()).collect();
    order.shuffle(rng);
    let mut donor_order: Vec<usize> = (0..donors.len()).collect();
    let mut outcome = GomOutcome::default();
    let mut backup: Vec<bool> = Vec::new();

    for &subset_idx in &order {
        let subset = &fos.elements()[subset_idx].indices;
        // lazy Fisher-Yates: only the consumed prefix of the shuffled donor
        // sequence is ever drawn, which matters with large donor pools
        let mut scanned = 0usize;
        while scanned < donor_order.len() {
            let pick = rng.gen_range(scanned..donor_order.len());
            donor_order.swap(scanned, pick);
            let d = donor_order[scanned];
            scanned += 1;
            let donor = &donors[d].genotype;
            let differs = subset
                .iter()
                .any(|&v| donor.get(v) != target.genotype.get(v));
            if differs {
                backup.clear();
                backup.extend(subset.iter().map(|&v| target.genotype.get(v)));
                for &v in subset {
                    target.genotype.set(v, donor.get(v));
                }
                match ctx.evaluate(&target.genotype) {
                    Ok(fitness) => {
                        if ctx.accepts(&target.fitness, &fitness) {
                            if ctx.strictly_better(&target.fitness, &fitness)
                                || ctx.last_evaluation_extended_front()
                            {
                                outcome.improved = true;
                            }
                            target.fitness = fitness;
                            outcome.changed = true;
                        } else {
                            restore(&mut target.genotype, subset, &backup);
                        }
                    }
                    Err(stop) => {
                        restore(&mut target.genotype, subset, &backup);
                        return Err(stop);
                    }
                }
                break;
            }
            if !donor_search {
                break;
            }
        }
    }
    Ok(outcome)
}

/// Recombination with the elitist donor only, stopping at the first strictly
/// improving subset copy. If no subset yields a strict improvement the whole
/// solution is replaced by the donor. Returns whether the solution ended up
/// strictly better than it started.
pub fn forced_improvements<C: GomContext>(
    target: &mut Solution<C::Fitness>,
    fos: &Fos,
    ctx: &mut C,
    rng: &mut Rng,
) -> Result<bool, Stop> {
    let Some((donor_genotype, donor_fitness)) = ctx.fi_donor(rng) else {
        return Ok(false);
    };
    let mut order: Vec<usize> = (0..fos.len()).collect();
    order.shuffle(rng);
    let mut backup: Vec<bool> = Vec::new();

    for &subset_idx in &order {
        let subset = &fos.elements()[subset_idx].indices;
        let differs = subset
            .iter()
            .any(|&v| donor_genotype.get(v) != target.genotype.get(v));
        if !differs {
            continue;
        }
        backup.clear();
        backup.extend(subset.iter().map(|&v| target.genotype.get(v)));
        for &v in subset {
            target.genotype.set(v, donor_genotype.get(v));
        }
        match ctx.evaluate(&target.genotype) {
            Ok(fitness) => {
                if ctx.strictly_better(&target.fitness, &fitness)
                    || ctx.last_evaluation_extended_front()
                {
                    target.fitness = fitness;
                    return Ok(true);
                }
                restore(&mut target.genotype, subset, &backup);
            }
            Err(stop) => {
                restore(&mut target.genotype, subset, &backup);
                return Err(stop);
            }
        }
    }

    let improved = ctx.strictly_better(&target.fitness, &donor_fitness);
    target.genotype = donor_genotype;
    target.fitness = donor_fitness;
    Ok(improved)
}
