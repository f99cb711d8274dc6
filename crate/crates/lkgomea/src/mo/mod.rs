//! Multi-objective extensions: elitist archive, objective-space clustering
//! with single-objective extreme clusters, domination- and scalarization-
//! based acceptance, and the bi-objective generational step.

pub mod archive;
pub mod cluster;
pub mod scalarize;
mod step;

pub use archive::{strictly_dominates, weakly_dominates, ArchiveMember, ElitistArchive};
pub use cluster::{cluster_population, Cluster, ClusterRole, Clustering};
pub use scalarize::{
    assign_scalarization_weights, tchebycheff, uniform_weights, ObjectiveRanges,
    ScalarizationAssignment,
};
pub use step::mo_generation_step;

use std::time::{Duration, Instant};

use crate::engine::{EvalBudget, GomContext, GomFlags, Stop};
use crate::genotype::Genotype;
use crate::linkage::NmiNormalization;
use crate::metrics::{normalized_hv, Front};
use crate::problems::MoInstance;
use crate::report::HvRecord;
use crate::rng::Rng;

/// How donors and models are organized in a multi-objective run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoStructure {
    /// objective-space clusters, one linkage tree per cluster
    ObjectiveClusters,
    /// per-solution linkage kernels over asymmetric KNN
    KernelAsymmetric,
    /// per-solution linkage kernels over symmetric KNN
    KernelSymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoAcceptance {
    Domination,
    Scalarized,
}

#[derive(Clone, Debug)]
pub struct MoConfig {
    pub structure: MoStructure,
    pub acceptance: MoAcceptance,
    pub flags: GomFlags,
    pub neighborhood_k: Option<usize>,
    pub filter_eps: f64,
    pub nmi_normalization: NmiNormalization,
}

impl MoConfig {
    pub fn new(structure: MoStructure, acceptance: MoAcceptance) -> Self {
        MoConfig {
            structure,
            acceptance,
            flags: GomFlags::default(),
            neighborhood_k: None,
            filter_eps: crate::linkage::DEFAULT_FILTER_EPS,
            nmi_normalization: NmiNormalization::JointEntropy,
        }
    }

    pub fn descriptor(&self) -> &'static str {
        use MoAcceptance::*;
        use MoStructure::*;
        match (self.structure, self.acceptance) {
            (ObjectiveClusters, Domination) => "objective-domination",
            (ObjectiveClusters, Scalarized) => "objective-scalarized",
            (KernelAsymmetric, Domination) => "asym-domination",
            (KernelAsymmetric, Scalarized) => "asym-scalarized",
            (KernelSymmetric, Domination) => "sym-domination",
            (KernelSymmetric, Scalarized) => "sym-scalarized",
        }
    }
}

/// Domination-based acceptance: the change is kept if the new fitness weakly
/// dominates the old one or if it would enter the elitist archive (probe
/// only; insertion is the caller's business).
pub fn mo_accept_domination(before: [i64; 2], after: [i64; 2], archive: &ElitistArchive) -> bool {
    weakly_dominates(after, before) || archive.would_insert(after)
}

/// Scalarization-based acceptance under the solution's assigned weights.
pub fn mo_accept_scalarized(
    before: [i64; 2],
    after: [i64; 2],
    weights: [f64; 2],
    ranges: &ObjectiveRanges,
    archive: &ElitistArchive,
) -> bool {
    tchebycheff(after, weights, ranges) >= tchebycheff(before, weights, ranges)
        || archive.would_insert(after)
}

/// Acceptance criterion in effect for the solution currently being improved.
#[derive(Clone, Debug)]
pub(crate) enum AcceptanceState {
    Domination,
    Scalarized {
        weights: [f64; 2],
        ranges: ObjectiveRanges,
    },
    SingleObjective(usize),
}

/// Run-wide multi-objective state: counted evaluator, the elitist archive
/// (offered every evaluated genotype), hypervolume tracking against an
/// optional reference front, and the per-solution acceptance state.
pub struct MoShared<'a> {
    instance: &'a MoInstance,
    pub budget: EvalBudget,
    pub archive: ElitistArchive,
    started: Instant,
    deadline: Option<Duration>,
    reference: Option<&'a Front>,
    hv_target: Option<f64>,
    pub hv_trace: Vec<HvRecord>,
    pub current_hv: Option<f64>,
    last_admissible: bool,
    acceptance: AcceptanceState,
}

impl<'a> MoShared<'a> {
    pub fn new(
        instance: &'a MoInstance,
        max_evaluations: Option<u64>,
        max_wall_ms: Option<u64>,
        reference: Option<&'a Front>,
        hv_target: Option<f64>,
    ) -> Self {
        MoShared {
            instance,
            budget: EvalBudget::new(max_evaluations),
            archive: ElitistArchive::new(),
            started: Instant::now(),
            deadline: max_wall_ms.map(Duration::from_millis),
            reference,
            hv_target,
            hv_trace: Vec::new(),
            current_hv: None,
            last_admissible: false,
            acceptance: AcceptanceState::Domination,
        }
    }

    pub fn elapsed_ms(&self) -> u64 {
        self.started.elapsed().as_millis() as u64
    }

    pub fn check_wall(&self) -> Result<(), Stop> {
        match self.deadline {
            Some(d) if self.started.elapsed() >= d => Err(Stop::WallClockExceeded),
            _ => Ok(()),
        }
    }

    pub(crate) fn set_acceptance(&mut self, acceptance: AcceptanceState) {
        self.acceptance = acceptance;
    }

    /// Counted evaluation; every evaluated genotype is offered to the
    /// archive, and the archive-admissibility of this exact evaluation is
    /// kept for the acceptance decision that follows.
    pub fn evaluate(&mut self, genotype: &Genotype) -> Result<[i64; 2], Stop> {
        self.budget.take()?;
        let fitness = self.instance.evaluate_unchecked(genotype);
        self.last_admissible = self.archive.would_insert(fitness);
        if self.last_admissible {
            self.archive.insert(genotype, fitness);
            self.track_hypervolume()?;
        }
        Ok(fitness)
    }

    fn track_hypervolume(&mut self) -> Result<(), Stop> {
        let Some(reference) = self.reference else {
            return Ok(());
        };
        let hv = normalized_hv(&self.archive.to_front(), reference)
            .expect("reference fronts are validated non-degenerate");
        self.current_hv = Some(hv);
        let evaluations = self.budget.used();
        // geometric thinning keeps traces compact on long runs
        let keep = match self.hv_trace.last() {
            Some(last) => evaluations as f64 >= last.evaluations as f64 * 1.05,
            None => true,
        };
        if keep {
            self.hv_trace.push(HvRecord {
                evaluations,
                ms: self.elapsed_ms(),
                hypervolume: hv,
            });
        }
        if self.hv_target.is_some_and(|t| hv >= t) {
            // make sure the reaching record is in the trace
            if !keep {
                self.hv_trace.push(HvRecord {
                    evaluations,
                    ms: self.elapsed_ms(),
                    hypervolume: hv,
                });
            }
            return Err(Stop::HvTargetReached);
        }
        Ok(())
    }

    /// Final normalized hypervolume against the reference front, if any.
    pub fn final_hypervolume(&self) -> Option<f64> {
        self.reference.map(|reference| {
            normalized_hv(&self.archive.to_front(), reference)
                .expect("reference fronts are validated non-degenerate")
        })
    }
}

impl GomContext for MoShared<'_> {
    type Fitness = [i64; 2];

    fn evaluate(&mut self, genotype: &Genotype) -> Result<[i64; 2], Stop> {
        MoShared::evaluate(self, genotype)
    }

    fn accepts(&self, before: &[i64; 2], after: &[i64; 2]) -> bool {
        match &self.acceptance {
            AcceptanceState::Domination => {
                weakly_dominates(*after, *before) || self.last_admissible
            }
            AcceptanceState::Scalarized { weights, ranges } => {
                tchebycheff(*after, *weights, ranges) >= tchebycheff(*before, *weights, ranges)
                    || self.last_admissible
            }
            AcceptanceState::SingleObjective(objective) => {
                after[*objective] >= before[*objective]
            }
        }
    }

    fn strictly_better(&self, before: &[i64; 2], after: &[i64; 2]) -> bool {
        match &self.acceptance {
            AcceptanceState::Domination => strictly_dominates(*after, *before),
            AcceptanceState::Scalarized { weights, ranges } => {
                tchebycheff(*after, *weights, ranges) > tchebycheff(*before, *weights, ranges)
            }
            AcceptanceState::SingleObjective(objective) => after[*objective] > before[*objective],
        }
    }

    fn last_evaluation_extended_front(&self) -> bool {
        self.last_admissible
    }

    fn fi_donor(&mut self, rng: &mut Rng) -> Option<(Genotype, [i64; 2])> {
        self.archive
            .random_member(rng)
            .map(|m| (m.genotype.clone(), m.fitness))
    }
}
