//! The bi-objective generational step.

use rand::seq::SliceRandom;
use rand::RngCore;

use super::{
    assign_scalarization_weights, cluster_population, AcceptanceState, ClusterRole, MoAcceptance,
    MoConfig, MoShared, MoStructure, ObjectiveRanges,
};
use crate::engine::{
    forced_improvements, gene_pool_optimal_mixing, nis_threshold, Population, Solution, Stop,
};
use crate::exec;
use crate::genotype::Genotype;
use crate::linkage::{learn_model_with, Fos};
use crate::neighborhood::{compute_neighborhoods, default_k, NeighborhoodMode};
use crate::rng::Rng;

enum Plan {
    /// per-cluster models; a solution uses its home cluster's model, donors
    /// and role
    Clustered {
        models: Vec<Fos>,
        donor_lists: Vec<Vec<usize>>,
        home: Vec<usize>,
        roles: Vec<ClusterRole>,
    },
    /// per-solution kernels
    Kernels {
        models: Vec<Fos>,
        neighborhoods: crate::neighborhood::NeighborhoodSet,
    },
}

/// One generation of clustered MO-GOMEA or its linkage-kernel variant.
/// Inside single-objective clusters acceptance is single-objective on that
/// objective; everywhere else it is domination- or scalarization-based per
/// the configuration. Every evaluation is offered to the archive; forced
/// improvements draw their donor from the archive.
pub fn mo_generation_step(
    population: &mut Population<[i64; 2]>,
    cfg: &MoConfig,
    cluster_count: usize,
    shared: &mut MoShared<'_>,
    rng: &mut Rng,
) -> Result<(), Stop> {
    let n = population.len();
    debug_assert!(n >= 2);
    let threshold = nis_threshold(n);

    let plan = match cfg.structure {
        MoStructure::ObjectiveClusters => {
            let fitness: Vec<[i64; 2]> = population.solutions.iter().map(|s| s.fitness).collect();
            let c = cluster_count.clamp(2, n);
            let clustering = cluster_population(&fitness, c, rng)
                .expect("cluster count clamped into range");
            let genotypes = population.genotypes();
            let models: Vec<Fos> = exec::map_indices(clustering.clusters.len(), |k| {
                let members: Vec<&Genotype> = clustering.clusters[k]
                    .members
                    .iter()
                    .map(|&i| genotypes[i])
                    .collect();
                learn_model_with(&members, cfg.nmi_normalization, cfg.filter_eps)
                    .expect("clusters have at least 2 members")
            });
            Plan::Clustered {
                models,
                donor_lists: clustering
                    .clusters
                    .iter()
                    .map(|c| c.members.clone())
                    .collect(),
                home: clustering.home,
                roles: clustering.clusters.iter().map(|c| c.role).collect(),
            }
        }
        MoStructure::KernelAsymmetric | MoStructure::KernelSymmetric => {
            let mode = if cfg.structure == MoStructure::KernelAsymmetric {
                NeighborhoodMode::Asymmetric
            } else {
                NeighborhoodMode::Symmetric
            };
            let k = cfg
                .neighborhood_k
                .unwrap_or_else(|| default_k(n))
                .clamp(1, n - 1);
            let genotypes = population.genotypes();
            let neighborhoods = compute_neighborhoods(&genotypes, k, mode, rng.next_u64())
                .expect("k is in range by construction");
            let models = exec::map_indices(n, |i| {
                let mut learning_set: Vec<&Genotype> =
                    Vec::with_capacity(neighborhoods.neighbors(i).len() + 1);
                learning_set.push(genotypes[i]);
                learning_set.extend(neighborhoods.neighbors(i).iter().map(|&j| genotypes[j]));
                learn_model_with(&learning_set, cfg.nmi_normalization, cfg.filter_eps)
                    .expect("learning set has at least 2 members")
            });
            Plan::Kernels {
                models,
                neighborhoods,
            }
        }
    };

    // scalarized improvement directions, reassigned every generation against
    // the archive's current ranges
    let ranges = ObjectiveRanges::from_archive(&shared.archive);
    let scalarization = if cfg.acceptance == MoAcceptance::Scalarized {
        let fitness: Vec<[i64; 2]> = population.solutions.iter().map(|s| s.fitness).collect();
        Some(assign_scalarization_weights(&fitness, &ranges))
    } else {
        None
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    for &i in &order {
        shared.check_wall()?;
        let (fos, donor_indices, role): (&Fos, &[usize], ClusterRole) = match &plan {
            Plan::Clustered {
                models,
                donor_lists,
                home,
                roles,
            } => (
                &models[home[i]],
                &donor_lists[home[i]],
                roles[home[i]],
            ),
            Plan::Kernels {
                models,
                neighborhoods,
            } => (&models[i], neighborhoods.neighbors(i), ClusterRole::Mixed),
        };
        let acceptance = match role {
            ClusterRole::SingleObjective(objective) => AcceptanceState::SingleObjective(objective),
            ClusterRole::Mixed => match cfg.acceptance {
                MoAcceptance::Domination => AcceptanceState::Domination,
                MoAcceptance::Scalarized => AcceptanceState::Scalarized {
                    weights: scalarization
                        .as_ref()
                        .map(|s| s.weights[i])
                        .unwrap_or([0.5, 0.5]),
                    ranges: ranges.clone(),
                },
            },
        };
        shared.set_acceptance(acceptance);

        let mut work = population.solutions[i].clone();
        let donors: Vec<&Solution<[i64; 2]>> = donor_indices
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
                population.solutions[i] = work;
                return Err(stop);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::initialize_population;
    use crate::problems::{BotInstance, MoInstance, Objective};
    use crate::rng::rng_from_seed;

    fn bot_vs_bot(len: usize, fns: usize) -> MoInstance {
        MoInstance::new([
            Objective::Bot(BotInstance::generate(len, 5, fns, 101).unwrap()),
            Objective::Bot(BotInstance::generate(len, 5, fns, 202).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn archive_and_population_stay_consistent_across_configs() {
        let mo = bot_vs_bot(10, 2);
        for structure in [
            MoStructure::ObjectiveClusters,
            MoStructure::KernelAsymmetric,
            MoStructure::KernelSymmetric,
        ] {
            for acceptance in [MoAcceptance::Domination, MoAcceptance::Scalarized] {
                let cfg = MoConfig::new(structure, acceptance);
                let mut shared = MoShared::new(&mo, Some(50_000), None, None, None);
                let mut rng = rng_from_seed(17);
                let mut population =
                    initialize_population(16, 10, &mut shared, &mut rng).unwrap();
                for _ in 0..5 {
                    mo_generation_step(&mut population, &cfg, 2, &mut shared, &mut rng).unwrap();
                }
                assert!(shared.archive.is_mutually_nondominated());
                for m in shared.archive.members() {
                    assert_eq!(mo.evaluate(&m.genotype).unwrap(), m.fitness);
                }
                for s in &population.solutions {
                    assert_eq!(mo.evaluate(&s.genotype).unwrap(), s.fitness);
                }
            }
        }
    }

    #[test]
    fn hypervolume_of_archive_never_decreases() {
        let mo = bot_vs_bot(10, 1);
        let reference = crate::metrics::enumerate_pareto_front(&mo).unwrap();
        let cfg = MoConfig::new(MoStructure::KernelSymmetric, MoAcceptance::Scalarized);
        let mut shared = MoShared::new(&mo, Some(20_000), None, Some(&reference), None);
        let mut rng = rng_from_seed(23);
        let mut population = initialize_population(16, 10, &mut shared, &mut rng).unwrap();
        for _ in 0..10 {
            if mo_generation_step(&mut population, &cfg, 2, &mut shared, &mut rng).is_err() {
                break;
            }
        }
        let hv: Vec<f64> = shared.hv_trace.iter().map(|h| h.hypervolume).collect();
        assert!(!hv.is_empty());
        assert!(hv.windows(2).all(|w| w[1] >= w[0]), "hv trace {hv:?}");
        assert!(hv.iter().all(|&h| (0.0..=1.0 + 1e-9).contains(&h)));
    }
}
