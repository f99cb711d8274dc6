//! Benchmark problem definitions, generators, evaluators and exact solvers.
//!
//! All evaluators are deterministic, return exact integer fitness values and
//! hold no mutable state, so instances can be shared freely across runs.

mod exact;
mod format;
mod maxcut;
mod trap;

pub use exact::{solve_exact, EXACT_ENUMERATION_LIMIT};
pub use format::{
    parse_mo_reference, parse_single, read_single_instance, serialize_mo_reference,
    serialize_single, write_single_instance,
};
pub use maxcut::{Edge, MaxCutInstance, WorstOfMaxCutsInstance};
pub use trap::{trap, BotInstance, TrapSubProblem};

use crate::genotype::Genotype;
use crate::{Error, Result};

/// Any single-objective problem instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingleInstance {
    Bot(BotInstance),
    MaxCut(MaxCutInstance),
    WorstOfMaxCuts(WorstOfMaxCutsInstance),
}

impl SingleInstance {
    pub fn length(&self) -> usize {
        match self {
            SingleInstance::Bot(b) => b.length(),
            SingleInstance::MaxCut(m) => m.vertex_count(),
            SingleInstance::WorstOfMaxCuts(w) => w.vertex_count(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SingleInstance::Bot(_) => "bot",
            SingleInstance::MaxCut(_) => "maxcut",
            SingleInstance::WorstOfMaxCuts(_) => "worstofmaxcuts",
        }
    }

    pub fn evaluate(&self, s: &Genotype) -> Result<i64> {
        match self {
            SingleInstance::Bot(b) => b.evaluate(s),
            SingleInstance::MaxCut(m) => m.evaluate(s),
            SingleInstance::WorstOfMaxCuts(w) => w.evaluate(s),
        }
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, s: &Genotype) -> i64 {
        match self {
            SingleInstance::Bot(b) => b.evaluate_unchecked(s),
            SingleInstance::MaxCut(m) => m.evaluate_unchecked(s),
            SingleInstance::WorstOfMaxCuts(w) => w.evaluate_unchecked(s),
        }
    }

    /// A value no evaluation can exceed.
    pub fn upper_bound(&self) -> i64 {
        match self {
            SingleInstance::Bot(b) => b.length() as i64,
            SingleInstance::MaxCut(m) => m.total_weight(),
            SingleInstance::WorstOfMaxCuts(w) => w
                .instances()
                .iter()
                .map(|i| i.total_weight())
                .min()
                .unwrap_or(0),
        }
    }

    /// The optimal value when it is known by construction.
    pub fn known_optimum(&self) -> Option<i64> {
        match self {
            SingleInstance::Bot(b) => Some(b.optimum_value()),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            SingleInstance::Bot(b) => format!(
                "bot-l{}-k{}-fns{}-s{}",
                b.length(),
                b.block_size(),
                b.fns(),
                b.seed()
            ),
            SingleInstance::MaxCut(m) => {
                format!("maxcut-l{}-s{}", m.vertex_count(), m.seed())
            }
            SingleInstance::WorstOfMaxCuts(w) => format!(
                "womc-l{}-n{}-s{}",
                w.vertex_count(),
                w.instances().len(),
                w.instances()[0].seed()
            ),
        }
    }
}

impl From<BotInstance> for SingleInstance {
    fn from(b: BotInstance) -> Self {
        SingleInstance::Bot(b)
    }
}

impl From<MaxCutInstance> for SingleInstance {
    fn from(m: MaxCutInstance) -> Self {
        SingleInstance::MaxCut(m)
    }
}

impl From<WorstOfMaxCutsInstance> for SingleInstance {
    fn from(w: WorstOfMaxCutsInstance) -> Self {
        SingleInstance::WorstOfMaxCuts(w)
    }
}

/// One objective of a bi-objective problem (worst-of compositions are not
/// paired multi-objectively).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Bot(BotInstance),
    MaxCut(MaxCutInstance),
}

impl Objective {
    pub fn length(&self) -> usize {
        match self {
            Objective::Bot(b) => b.length(),
            Objective::MaxCut(m) => m.vertex_count(),
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Objective::Bot(b) => b.seed(),
            Objective::MaxCut(m) => m.seed(),
        }
    }

    pub fn evaluate(&self, s: &Genotype) -> Result<i64> {
        match self {
            Objective::Bot(b) => b.evaluate(s),
            Objective::MaxCut(m) => m.evaluate(s),
        }
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, s: &Genotype) -> i64 {
        match self {
            Objective::Bot(b) => b.evaluate_unchecked(s),
            Objective::MaxCut(m) => m.evaluate_unchecked(s),
        }
    }

    pub fn as_single(&self) -> SingleInstance {
        match self {
            Objective::Bot(b) => SingleInstance::Bot(b.clone()),
            Objective::MaxCut(m) => SingleInstance::MaxCut(m.clone()),
        }
    }
}

/// A bi-objective maximization problem built from two single-objective
/// instances of equal length. The objectives must come from different
/// instances, i.e. carry distinct generator seeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoInstance {
    objectives: [Objective; 2],
}

impl MoInstance {
    pub fn new(objectives: [Objective; 2]) -> Result<Self> {
        if objectives[0].length() != objectives[1].length() {
            return Err(Error::InvalidArgument(
                "both objectives must have the same length".into(),
            ));
        }
        if objectives[0].seed() == objectives[1].seed() {
            return Err(Error::InvalidArgument(
                "objectives must use distinct instance seeds".into(),
            ));
        }
        Ok(MoInstance { objectives })
    }

    pub fn length(&self) -> usize {
        self.objectives[0].length()
    }

    pub fn objectives(&self) -> &[Objective; 2] {
        &self.objectives
    }

    pub fn evaluate(&self, s: &Genotype) -> Result<[i64; 2]> {
        Ok([
            self.objectives[0].evaluate(s)?,
            self.objectives[1].evaluate(s)?,
        ])
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, s: &Genotype) -> [i64; 2] {
        [
            self.objectives[0].evaluate_unchecked(s),
            self.objectives[1].evaluate_unchecked(s),
        ]
    }

    pub fn descriptor(&self) -> String {
        let name = |o: &Objective| match o {
            Objective::Bot(b) => format!("bot{}f{}", b.seed(), b.fns()),
            Objective::MaxCut(m) => format!("maxcut{}", m.seed()),
        };
        format!(
            "mo-l{}-{}-vs-{}",
            self.length(),
            name(&self.objectives[0]),
            name(&self.objectives[1])
        )
    }
}

/// Any problem the run drivers accept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemInstance {
    Single(SingleInstance),
    Mo(MoInstance),
}

impl ProblemInstance {
    pub fn length(&self) -> usize {
        match self {
            ProblemInstance::Single(s) => s.length(),
            ProblemInstance::Mo(m) => m.length(),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            ProblemInstance::Single(s) => s.descriptor(),
            ProblemInstance::Mo(m) => m.descriptor(),
        }
    }
}
