//! The interleaved multi-start scheme and the complete run drivers.
//!
//! Populations of doubling size run interleaved: each time a population
//! finishes its b-th generation since the last hand-off, the next larger
//! population (created on first schedule) takes the following slot. Smaller
//! populations whose average fitness falls below a larger active population
//! are retired, as are fully converged ones.

use std::time::Instant;

use crate::engine::{generation_step, initialize_population, Population, SoConfig, SoShared, Stop};
use crate::metrics::Front;
use crate::mo::{mo_generation_step, MoConfig, MoShared, ObjectiveRanges};
use crate::problems::{MoInstance, ProblemInstance, SingleInstance};
use crate::report::{ArchiveEntry, RunReport};
use crate::rng::{derive_seed, rng_from_seed, stream, Rng};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct ImsParams {
    /// size of population 0; population p has size base * 2^p
    pub base_population: usize,
    /// generations of a population per generation of the next larger one
    pub interleave: u64,
}

impl Default for ImsParams {
    fn default() -> Self {
        ImsParams {
            base_population: 8,
            interleave: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PopulationSlot {
    pub size: usize,
    pub active: bool,
    pub generations: u64,
    pub evaluations: u64,
}

/// Scheduling state only; the run drivers own the populations themselves.
#[derive(Clone, Debug)]
pub struct ImsState {
    params: ImsParams,
    slots: Vec<PopulationSlot>,
    next: usize,
}

impl ImsState {
    pub fn new(params: ImsParams) -> Self {
        ImsState {
            params,
            slots: Vec::new(),
            next: 0,
        }
    }

    pub fn slots(&self) -> &[PopulationSlot] {
        &self.slots
    }

    pub fn slots_mut(&mut self) -> &mut [PopulationSlot] {
        &mut self.slots
    }

    fn ensure_slot(&mut self, p: usize) {
        while self.slots.len() <= p {
            let size = self.params.base_population << self.slots.len();
            self.slots.push(PopulationSlot {
                size,
                active: true,
                generations: 0,
                evaluations: 0,
            });
        }
    }

    /// The population index to advance next. A population hands the next
    /// tick to its larger neighbor after every `interleave`-th generation;
    /// retired populations are skipped. Creates the slot for a population
    /// the first time it is scheduled.
    pub fn tick(&mut self) -> usize {
        let mut p = self.next;
        loop {
            self.ensure_slot(p);
            if self.slots[p].active {
                break;
            }
            p += 1;
        }
        self.slots[p].generations += 1;
        self.next = if self.slots[p].generations % self.params.interleave == 0 {
            p + 1
        } else {
            0
        };
        p
    }

    /// Deactivates every population whose mean fitness is strictly lower
    /// than the mean of some larger active population. `None` entries are
    /// populations without a summary (not yet materialized).
    pub fn retire_dominated(&mut self, means: &[Option<f64>]) {
        let n = self.slots.len().min(means.len());
        for p in 0..n {
            if !self.slots[p].active {
                continue;
            }
            let Some(mine) = means[p] else { continue };
            let beaten = (p + 1..n).any(|q| {
                self.slots[q].active && means[q].is_some_and(|theirs| theirs > mine)
            });
            if beaten {
                self.slots[p].active = false;
            }
        }
    }

    pub fn deactivate(&mut self, p: usize) {
        self.slots[p].active = false;
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunLimits {
    pub max_evaluations: Option<u64>,
    pub max_wall_ms: Option<u64>,
}

impl RunLimits {
    pub fn evaluations(n: u64) -> Self {
        RunLimits {
            max_evaluations: Some(n),
            max_wall_ms: None,
        }
    }
}

/// Stop targets: a value to reach for single-objective runs, a normalized
/// hypervolume target (against the reference front) for multi-objective ones.
#[derive(Clone, Debug, Default)]
pub struct RunGoals {
    pub value_to_reach: Option<i64>,
    pub reference_front: Option<Front>,
    pub hv_target: Option<f64>,
}

fn stop_reason(stop: Stop) -> &'static str {
    match stop {
        Stop::BudgetExhausted => "budget",
        Stop::OptimumReached => "optimum",
        Stop::WallClockExceeded => "wall-clock",
        Stop::HvTargetReached => "hv-target",
    }
}

fn converged<F>(population: &Population<F>) -> bool {
    population
        .solutions
        .windows(2)
        .all(|w| w[0].genotype == w[1].genotype)
}

/// Complete single-objective run under the IMS. Runs until the value to
/// reach, the evaluation budget or the wall clock hits; reports evaluations
/// and milliseconds to the optimum, the elitist trace and per-population
/// accounting.
pub fn run_single_objective(
    instance: &SingleInstance,
    cfg: &SoConfig,
    ims: &ImsParams,
    limits: &RunLimits,
    value_to_reach: Option<i64>,
    seed: u64,
) -> RunReport {
    let started = Instant::now();
    let mut shared = SoShared::new(
        instance,
        limits.max_evaluations,
        limits.max_wall_ms,
        value_to_reach,
    );
    let mut rng = rng_from_seed(derive_seed(&[seed, stream::RUN]));
    let mut state = ImsState::new(*ims);
    let mut populations: Vec<Option<Population<i64>>> = Vec::new();

    let stop = loop {
        if let Err(stop) = shared.check_wall() {
            break stop;
        }
        let p = state.tick();
        while populations.len() <= p {
            populations.push(None);
        }
        let before = shared.budget.used();
        let result = (|| -> std::result::Result<(), Stop> {
            if populations[p].is_none() {
                let size = state.slots()[p].size;
                populations[p] = Some(initialize_population(
                    size,
                    instance.length(),
                    &mut shared,
                    &mut rng,
                )?);
            }
            generation_step(
                populations[p].as_mut().expect("just materialized"),
                cfg,
                &mut shared,
                &mut rng,
            )
        })();
        state.slots_mut()[p].evaluations += shared.budget.used() - before;
        if let Err(stop) = result {
            break stop;
        }

        let pop = populations[p].as_ref().expect("materialized above");
        if converged(pop) {
            state.deactivate(p);
        }
        let means: Vec<Option<f64>> = populations
            .iter()
            .map(|slot| {
                slot.as_ref().map(|pop| {
                    pop.solutions.iter().map(|s| s.fitness as f64).sum::<f64>()
                        / pop.solutions.len() as f64
                })
            })
            .collect();
        state.retire_dominated(&means);
    };

    let success = matches!(stop, Stop::OptimumReached);
    let (evaluations, milliseconds) = match (success, shared.success_at) {
        (true, Some((evals, ms))) => (evals, ms),
        _ => (shared.budget.used(), started.elapsed().as_millis() as u64),
    };
    RunReport {
        problem: instance.descriptor(),
        algorithm: cfg.descriptor().to_string(),
        seed,
        success,
        stop_reason: stop_reason(stop).to_string(),
        evaluations,
        total_evaluations: shared.budget.used(),
        milliseconds,
        best_fitness: shared.elitist.as_ref().map(|(_, f)| vec![*f]).unwrap_or_default(),
        population_sizes: state
            .slots()
            .iter()
            .zip(&populations)
            .filter(|(_, pop)| pop.is_some())
            .map(|(slot, _)| slot.size)
            .collect(),
        population_evaluations: state
            .slots()
            .iter()
            .zip(&populations)
            .filter(|(_, pop)| pop.is_some())
            .map(|(slot, _)| slot.evaluations)
            .collect(),
        trace: shared.trace,
        hv_trace: Vec::new(),
        final_hypervolume: None,
        archive: None,
    }
}

/// Complete multi-objective run under the IMS. The cluster count for
/// population p is max(2, 1 + p). Retirement compares the population mean of
/// the archive-normalized scalarized fitness (f0 + f1) / 2.
pub fn run_multi_objective(
    instance: &MoInstance,
    cfg: &MoConfig,
    ims: &ImsParams,
    limits: &RunLimits,
    goals: &RunGoals,
    seed: u64,
) -> RunReport {
    let started = Instant::now();
    let mut shared = MoShared::new(
        instance,
        limits.max_evaluations,
        limits.max_wall_ms,
        goals.reference_front.as_ref(),
        goals.hv_target,
    );
    let mut rng = rng_from_seed(derive_seed(&[seed, stream::RUN]));
    let mut state = ImsState::new(*ims);
    let mut populations: Vec<Option<Population<[i64; 2]>>> = Vec::new();

    let stop = loop {
        if let Err(stop) = shared.check_wall() {
            break stop;
        }
        let p = state.tick();
        while populations.len() <= p {
            populations.push(None);
        }
        let before = shared.budget.used();
        let result = (|| -> std::result::Result<(), Stop> {
            if populations[p].is_none() {
                let size = state.slots()[p].size;
                populations[p] = Some(initialize_population(
                    size,
                    instance.length(),
                    &mut shared,
                    &mut rng,
                )?);
            }
            let cluster_count = 2.max(1 + p);
            mo_generation_step(
                populations[p].as_mut().expect("just materialized"),
                cfg,
                cluster_count,
                &mut shared,
                &mut rng,
            )
        })();
        state.slots_mut()[p].evaluations += shared.budget.used() - before;
        if let Err(stop) = result {
            break stop;
        }

        // converged populations are not retired here: forced improvements
        // keep recombining them with random archive members, which still
        // discovers new front points
        let ranges = ObjectiveRanges::from_archive(&shared.archive);
        let means: Vec<Option<f64>> = populations
            .iter()
            .map(|slot| {
                slot.as_ref().map(|pop| {
                    pop.solutions
                        .iter()
                        .map(|s| {
                            let n = ranges.normalize(s.fitness);
                            (n[0] + n[1]) / 2.0
                        })
                        .sum::<f64>()
                        / pop.solutions.len() as f64
                })
            })
            .collect();
        state.retire_dominated(&means);
    };

    let success = matches!(stop, Stop::HvTargetReached);
    RunReport {
        problem: instance.descriptor(),
        algorithm: cfg.descriptor().to_string(),
        seed,
        success,
        stop_reason: stop_reason(stop).to_string(),
        evaluations: shared.budget.used(),
        total_evaluations: shared.budget.used(),
        milliseconds: started.elapsed().as_millis() as u64,
        best_fitness: Vec::new(),
        population_sizes: state
            .slots()
            .iter()
            .zip(&populations)
            .filter(|(_, pop)| pop.is_some())
            .map(|(slot, _)| slot.size)
            .collect(),
        population_evaluations: state
            .slots()
            .iter()
            .zip(&populations)
            .filter(|(_, pop)| pop.is_some())
            .map(|(slot, _)| slot.evaluations)
            .collect(),
        trace: Vec::new(),
        hv_trace: shared.hv_trace.clone(),
        final_hypervolume: shared.final_hypervolume(),
        archive: Some(
            shared
                .archive
                .to_front()
                .points()
                .iter()
                .map(|p| ArchiveEntry {
                    fitness: p.fitness,
                    genotype: p
                        .genotype
                        .as_ref()
                        .map(|g| g.to_bitstring())
                        .unwrap_or_default(),
                })
                .collect(),
        ),
    }
}

/// Algorithm selection across both problem kinds.
#[derive(Clone, Debug)]
pub enum AlgorithmConfig {
    SingleObjective(SoConfig),
    MultiObjective(MoConfig),
}

impl AlgorithmConfig {
    pub fn descriptor(&self) -> &'static str {
        match self {
            AlgorithmConfig::SingleObjective(cfg) => cfg.descriptor(),
            AlgorithmConfig::MultiObjective(cfg) => cfg.descriptor(),
        }
    }
}

/// Dispatching run driver; fails when the algorithm kind does not match the
/// problem kind.
pub fn run_with_ims(
    problem: &ProblemInstance,
    algorithm: &AlgorithmConfig,
    ims: &ImsParams,
    limits: &RunLimits,
    goals: &RunGoals,
    seed: u64,
) -> Result<RunReport> {
    match (problem, algorithm) {
        (ProblemInstance::Single(instance), AlgorithmConfig::SingleObjective(cfg)) => Ok(
            run_single_objective(instance, cfg, ims, limits, goals.value_to_reach, seed),
        ),
        (ProblemInstance::Mo(instance), AlgorithmConfig::MultiObjective(cfg)) => {
            Ok(run_multi_objective(instance, cfg, ims, limits, goals, seed))
        }
        _ => Err(Error::InvalidArgument(
            "algorithm kind does not match problem kind".into(),
        )),
    }
}

/// Value-to-reach by consensus: several independent runs under a fixed
/// budget each; returns the best value found and whether all runs agreed on
/// it. Runs are independent and execute in parallel when enabled.
pub fn consensus_value_to_reach(
    instance: &SingleInstance,
    cfg: &SoConfig,
    ims: &ImsParams,
    budget_per_run: u64,
    runs: usize,
    seed: u64,
) -> (i64, bool) {
    debug_assert!(runs >= 2);
    let bests: Vec<i64> = crate::exec::map_indices(runs, |r| {
        let run_seed = derive_seed(&[seed, stream::CONSENSUS, r as u64]);
        let report = run_single_objective(
            instance,
            cfg,
            ims,
            &RunLimits::evaluations(budget_per_run),
            None,
            run_seed,
        );
        report.best_fitness.first().copied().unwrap_or(i64::MIN)
    });
    let best = *bests.iter().max().expect("at least one run");
    (best, bests.iter().all(|&b| b == best))
}

/// Part of the run driver contract: a fresh rng stream per run seed.
pub fn run_rng(seed: u64) -> Rng {
    rng_from_seed(derive_seed(&[seed, stream::RUN]))
}
