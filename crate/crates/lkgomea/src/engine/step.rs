//! The single-objective generational step.

use rand::seq::SliceRandom;
use rand::RngCore;

use super::gom::{forced_improvements, gene_pool_optimal_mixing, GomContext};
use super::{nis_threshold, ModelMode, Population, SoConfig, SoShared, Solution, Stop};
use crate::exec;
use crate::genotype::Genotype;
use crate::linkage::{learn_model_with, Fos};
use crate::neighborhood::{compute_neighborhoods, default_k, NeighborhoodMode, NeighborhoodSet};
use crate::rng::Rng;

/// Uniform random genotypes, each evaluated through the counted evaluator.
pub fn initialize_population<C: GomContext>(
    size: usize,
    length: usize,
    ctx: &mut C,
    rng: &mut Rng,
) -> Result<Population<C::Fitness>, Stop> {
    let mut solutions = Vec::with_capacity(size);
    for _ in 0..size {
        let genotype = Genotype::random(length, rng);
        let fitness = ctx.evaluate(&genotype)?;
        solutions.push(Solution {
            genotype,
            fitness,
            nis: 0,
        });
    }
    Ok(Population {
        solutions,
        evaluations_used: 0,
    })
}

pub(crate) enum Models {
    Single(Fos),
    PerSolution(Vec<Fos>, NeighborhoodSet),
}

pub(crate) fn learn_models<F: Clone>(
    population: &Population<F>,
    model: ModelMode,
    neighborhood_k: Option<usize>,
    normalization: crate::linkage::NmiNormalization,
    filter_eps: f64,
    rng: &mut Rng,
) -> Models {
    let genotypes = population.genotypes();
    let n = genotypes.len();
    match model {
        ModelMode::SingleTree => Models::Single(
            learn_model_with(&genotypes, normalization, filter_eps)
                .expect("population has at least 2 members"),
        ),
        ModelMode::KernelAsymmetric | ModelMode::KernelSymmetric => {
            let mode = if model == ModelMode::KernelAsymmetric {
                NeighborhoodMode::Asymmetric
            } else {
                NeighborhoodMode::Symmetric
            };
            let k = neighborhood_k
                .unwrap_or_else(|| default_k(n))
                .clamp(1, n - 1);
            let neighborhoods = compute_neighborhoods(&genotypes, k, mode, rng.next_u64())
                .expect("k is in range by construction");
            // the learning set is the owner plus its neighborhood; learning
            // is read-only over the pre-generation population, so the
            // per-solution models can be built in parallel
            let models = exec::map_indices(n, |i| {
                let mut learning_set: Vec<&Genotype> = Vec::with_capacity(
                    neighborhoods.neighbors(i).len() + 1,
                );
                learning_set.push(genotypes[i]);
                learning_set.extend(neighborhoods.neighbors(i).iter().map(|&j| genotypes[j]));
                learn_model_with(&learning_set, normalization, filter_eps)
                    .expect("learning set has at least 2 members")
            });
            Models::PerSolution(models, neighborhoods)
        }
    }
}

/// One generation: learn the model(s) from the current population, then
/// improve every solution in random order via GOM (donors from the whole
/// population or from the solution's kernel) with forced improvements on
/// stagnation, maintaining per-solution no-improvement stretches.
pub fn generation_step(
    population: &mut Population<i64>,
    cfg: &SoConfig,
    shared: &mut SoShared<'_>,
    rng: &mut Rng,
) -> Result<(), Stop> {
    let n = population.len();
    debug_assert!(n >= 2, "generation step needs at least 2 solutions");
    let threshold = nis_threshold(n);

    let models = learn_models(
        population,
        cfg.model,
        cfg.neighborhood_k,
        cfg.nmi_normalization,
        cfg.filter_eps,
        rng,
    );

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let all_indices: Vec<usize> = (0..n).collect();

    for &i in &order {
        shared.check_wall()?;
        let mut work = population.solutions[i].clone();
        let (fos, donor_indices): (&Fos, &[usize]) = match &models {
            Models::Single(fos) => (fos, &all_indices),
            Models::PerSolution(models, neighborhoods) => (&models[i], neighborhoods.neighbors(i)),
        };
        let donors: Vec<&Solution<i64>> = donor_indices
            .iter()
            .map(|&j| &population.solutions[j])
            .collect();

        let result = gene_pool_optimal_mixing(
            &mut work,
            fos,
            &donors,
            cfg.flags.donor_search,
            shared,
            rng,
        )
        .and_then(|out| {
            let mut improved = out.improved;
            if cfg.flags.forced_improvements && (!out.changed || work.nis > threshold) {
                improved |= forced_improvements(&mut work, fos, shared, rng)?;
            }
            Ok(improved)
        });
        drop(donors);
        match result {
            Ok(improved) => {
                if improved {
                    work.nis = 0;
                } else {
                    work.nis += 1;
                }
                population.solutions[i] = work;
            }
            Err(stop) => {
                // keep completed applications; the aborted one was restored
                population.solutions[i] = work;
                return Err(stop);
            }
        }
    }
    Ok(())
}
