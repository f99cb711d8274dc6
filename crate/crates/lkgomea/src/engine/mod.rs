//! Single-objective GOMEA core: population state, counted evaluation with
//! budget and value-to-reach handling, and the per-generation step for both
//! the single-tree model and per-solution linkage kernels.

pub mod gom;
mod step;

pub use gom::{forced_improvements, gene_pool_optimal_mixing, GomContext, GomOutcome};
pub use step::{generation_step, initialize_population};

use std::time::{Duration, Instant};

use crate::genotype::Genotype;
use crate::linkage::NmiNormalization;
use crate::problems::SingleInstance;
use crate::report::TraceRecord;
use crate::rng::Rng;

/// Fitness payload of a solution: a single value or a bi-objective pair.
pub trait FitnessVec: Copy + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn to_vec(&self) -> Vec<i64>;
}

impl FitnessVec for i64 {
    fn to_vec(&self) -> Vec<i64> {
        vec![*self]
    }
}

impl FitnessVec for [i64; 2] {
    fn to_vec(&self) -> Vec<i64> {
        Vec::from(*self)
    }
}

/// A population member: genotype, its (always current) fitness and the
/// no-improvement stretch in generations.
#[derive(Clone, Debug)]
pub struct Solution<F> {
    pub genotype: Genotype,
    pub fitness: F,
    pub nis: u32,
}

#[derive(Clone, Debug)]
pub struct Population<F> {
    pub solutions: Vec<Solution<F>>,
    /// evaluations attributed to this population by the run driver
    pub evaluations_used: u64,
}

impl<F> Population<F> {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn genotypes(&self) -> Vec<&Genotype> {
        self.solutions.iter().map(|s| &s.genotype).collect()
    }
}

/// Why a run stopped early. These are signals, not failures: partial state
/// stays consistent and the driver turns them into a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    BudgetExhausted,
    OptimumReached,
    WallClockExceeded,
    HvTargetReached,
}

/// Run-wide evaluation counter with an optional hard limit. Exactly one
/// increment per evaluator invocation; no partial-evaluation credit.
#[derive(Clone, Debug)]
pub struct EvalBudget {
    used: u64,
    limit: Option<u64>,
}

impl EvalBudget {
    pub fn new(limit: Option<u64>) -> Self {
        EvalBudget { used: 0, limit }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    /// Accounts for one evaluation, or signals exhaustion without counting.
    pub fn take(&mut self) -> Result<(), Stop> {
        if self.limit.is_some_and(|l| self.used >= l) {
            return Err(Stop::BudgetExhausted);
        }
        self.used += 1;
        Ok(())
    }
}

/// `1 + floor(10 * log10(population size))`: how many stagnant generations a
/// solution tolerates before forced improvements kick in.
pub fn nis_threshold(population_size: usize) -> u32 {
    debug_assert!(population_size >= 1);
    1 + (10.0 * (population_size as f64).log10() + 1e-9).floor() as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GomFlags {
    pub donor_search: bool,
    pub forced_improvements: bool,
}

impl Default for GomFlags {
    fn default() -> Self {
        GomFlags {
            donor_search: true,
            forced_improvements: true,
        }
    }
}

/// Which linkage model a single-objective run learns each generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelMode {
    /// one linkage tree over the whole population, donors from anywhere
    SingleTree,
    /// per-solution tree over the k-nearest-neighbor kernel
    KernelAsymmetric,
    /// per-solution tree over the symmetric kernel
    KernelSymmetric,
}

#[derive(Clone, Debug)]
pub struct SoConfig {
    pub model: ModelMode,
    pub flags: GomFlags,
    /// neighborhood size override; defaults to ceil(sqrt(population size))
    pub neighborhood_k: Option<usize>,
    pub filter_eps: f64,
    pub nmi_normalization: NmiNormalization,
}

impl SoConfig {
    pub fn new(model: ModelMode) -> Self {
        SoConfig {
            model,
            flags: GomFlags::default(),
            neighborhood_k: None,
            filter_eps: crate::linkage::DEFAULT_FILTER_EPS,
            nmi_normalization: NmiNormalization::JointEntropy,
        }
    }

    pub fn descriptor(&self) -> &'static str {
        match self.model {
            ModelMode::SingleTree => "single-tree",
            ModelMode::KernelAsymmetric => "lk-asym",
            ModelMode::KernelSymmetric => "lk-sym",
        }
    }
}

/// Run-wide single-objective state shared by all interleaved populations:
/// the counted evaluator, elitist, improvement trace and stop conditions.
pub struct SoShared<'a> {
    instance: &'a SingleInstance,
    pub budget: EvalBudget,
    pub elitist: Option<(Genotype, i64)>,
    pub trace: Vec<TraceRecord>,
    value_to_reach: Option<i64>,
    pub success_at: Option<(u64, u64)>, // (evaluations, ms) when the target was reached
    started: Instant,
    deadline: Option<Duration>,
}

impl<'a> SoShared<'a> {
    pub fn new(
        instance: &'a SingleInstance,
        max_evaluations: Option<u64>,
        max_wall_ms: Option<u64>,
        value_to_reach: Option<i64>,
    ) -> Self {
        SoShared {
            instance,
            budget: EvalBudget::new(max_evaluations),
            elitist: None,
            trace: Vec::new(),
            value_to_reach,
            success_at: None,
            started: Instant::now(),
            deadline: max_wall_ms.map(Duration::from_millis),
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

    /// The counted evaluator: one budget unit per call, elitist and trace
    /// updates, and the value-to-reach check after every single evaluation.
    pub fn evaluate(&mut self, genotype: &Genotype) -> Result<i64, Stop> {
        self.budget.take()?;
        let fitness = self.instance.evaluate_unchecked(genotype);
        if self.elitist.as_ref().is_none_or(|(_, best)| fitness > *best) {
            self.elitist = Some((genotype.clone(), fitness));
            self.trace.push(TraceRecord {
                evaluations: self.budget.used(),
                ms: self.elapsed_ms(),
                fitness: vec![fitness],
            });
        }
        if self.success_at.is_none() && self.value_to_reach.is_some_and(|v| fitness >= v) {
            self.success_at = Some((self.budget.used(), self.elapsed_ms()));
            return Err(Stop::OptimumReached);
        }
        Ok(fitness)
    }
}

impl GomContext for SoShared<'_> {
    type Fitness = i64;

    fn evaluate(&mut self, genotype: &Genotype) -> Result<i64, Stop> {
        SoShared::evaluate(self, genotype)
    }

    fn accepts(&self, before: &i64, after: &i64) -> bool {
        after >= before
    }

    fn strictly_better(&self, before: &i64, after: &i64) -> bool {
        after > before
    }

    fn fi_donor(&mut self, _rng: &mut Rng) -> Option<(Genotype, i64)> {
        self.elitist.clone()
    }
}
