//! Declarative experiment plans: a TOML document describing the problem
//! grid, algorithm list, budgets and repeats. Every cell of the experiment
//! is fully determined by the plan plus its master seed.

use std::path::{Path, PathBuf};

use lkgomea::engine::{ModelMode, SoConfig};
use lkgomea::ims::{AlgorithmConfig, ImsParams};
use lkgomea::mo::{MoAcceptance, MoConfig, MoStructure};
use lkgomea::problems::{
    BotInstance, MaxCutInstance, MoInstance, Objective, WorstOfMaxCutsInstance,
};
use lkgomea::rng::{derive_seed, stream};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Plan {
    pub master_seed: u64,
    pub output_dir: PathBuf,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub ims: Ims,
    pub problems: Vec<ProblemSpec>,
    #[serde(default)]
    pub algorithms: Algorithms,
    #[serde(default)]
    pub targets: Targets,
    #[serde(default)]
    pub reference: Reference,
}

fn default_repeats() -> usize {
    10
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    #[serde(default = "default_evaluations")]
    pub evaluations: u64,
    /// 0 disables the wall-clock limit
    #[serde(default)]
    pub wall_ms: u64,
    /// optional normalized-hypervolume early stop for MO runs
    #[serde(default)]
    pub hv_stop: Option<f64>,
}

fn default_evaluations() -> u64 {
    10_000_000
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            evaluations: default_evaluations(),
            wall_ms: 0,
            hv_stop: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ims {
    #[serde(default = "default_base_population")]
    pub base_population: usize,
    #[serde(default = "default_interleave")]
    pub interleave: u64,
}

fn default_base_population() -> usize {
    8
}

fn default_interleave() -> u64 {
    4
}

impl Default for Ims {
    fn default() -> Self {
        Ims {
            base_population: default_base_population(),
            interleave: default_interleave(),
        }
    }
}

impl Ims {
    pub fn params(&self) -> ImsParams {
        ImsParams {
            base_population: self.base_population,
            interleave: self.interleave,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// bot | maxcut | worst-of-maxcuts | bot-vs-bot | bot-vs-maxcut |
    /// maxcut-vs-maxcut
    pub kind: String,
    pub lengths: Vec<usize>,
    #[serde(default = "default_block_size")]
    pub block_size: u32,
    #[serde(default = "default_fns")]
    pub fns: Vec<usize>,
    /// independent instances per grid point
    #[serde(default = "default_instances")]
    pub instances: usize,
    /// sub-instance count for worst-of-maxcuts
    #[serde(default = "default_subs")]
    pub subs: usize,
}

fn default_block_size() -> u32 {
    5
}

fn default_fns() -> Vec<usize> {
    vec![1]
}

fn default_instances() -> usize {
    1
}

fn default_subs() -> usize {
    2
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Algorithms {
    #[serde(default = "default_single_objective")]
    pub single_objective: Vec<String>,
    #[serde(default = "default_multi_objective")]
    pub multi_objective: Vec<String>,
}

fn default_single_objective() -> Vec<String> {
    ["single-tree", "lk-asym", "lk-sym"]
        .map(String::from)
        .to_vec()
}

fn default_multi_objective() -> Vec<String> {
    [
        "objective-domination",
        "objective-scalarized",
        "asym-domination",
        "asym-scalarized",
        "sym-domination",
        "sym-scalarized",
    ]
    .map(String::from)
    .to_vec()
}

impl Default for Algorithms {
    fn default() -> Self {
        Algorithms {
            single_objective: default_single_objective(),
            multi_objective: default_multi_objective(),
        }
    }
}

/// Value-to-reach resolution for problems whose optimum is not known by
/// construction: exact enumeration up to length 20, consensus pre-runs above.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Targets {
    #[serde(default = "default_consensus_runs")]
    pub consensus_runs: usize,
    #[serde(default = "default_consensus_budget")]
    pub consensus_budget: u64,
}

fn default_consensus_runs() -> usize {
    4
}

fn default_consensus_budget() -> u64 {
    2_000_000
}

impl Default for Targets {
    fn default() -> Self {
        Targets {
            consensus_runs: default_consensus_runs(),
            consensus_budget: default_consensus_budget(),
        }
    }
}

/// Reference-front construction parameters for multi-objective problems too
/// large to enumerate: per sub-problem pair, this many seeded solver runs
/// with this budget each, merged.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default = "default_reference_runs")]
    pub runs: usize,
    #[serde(default = "default_reference_budget")]
    pub budget: u64,
}

fn default_reference_runs() -> usize {
    2
}

fn default_reference_budget() -> u64 {
    500_000
}

impl Default for Reference {
    fn default() -> Self {
        Reference {
            runs: default_reference_runs(),
            budget: default_reference_budget(),
        }
    }
}

impl Plan {
    pub fn load(path: &Path) -> Result<Plan, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read plan {}: {e}", path.display())))?;
        let plan: Plan = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid plan {}: {e}", path.display())))?;
        for spec in &plan.problems {
            problem_kind(&spec.kind)?;
        }
        if plan.repeats == 0 {
            return Err(CliError::Usage("repeats must be at least 1".into()));
        }
        Ok(plan)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Bot,
    MaxCut,
    WorstOfMaxCuts,
    BotVsBot,
    BotVsMaxCut,
    MaxCutVsMaxCut,
}

impl ProblemKind {
    pub fn is_multi_objective(self) -> bool {
        matches!(
            self,
            ProblemKind::BotVsBot | ProblemKind::BotVsMaxCut | ProblemKind::MaxCutVsMaxCut
        )
    }

    fn code(self) -> u64 {
        match self {
            ProblemKind::Bot => 1,
            ProblemKind::MaxCut => 2,
            ProblemKind::WorstOfMaxCuts => 3,
            ProblemKind::BotVsBot => 4,
            ProblemKind::BotVsMaxCut => 5,
            ProblemKind::MaxCutVsMaxCut => 6,
        }
    }
}

pub fn problem_kind(name: &str) -> Result<ProblemKind, CliError> {
    match name {
        "bot" => Ok(ProblemKind::Bot),
        "maxcut" => Ok(ProblemKind::MaxCut),
        "worst-of-maxcuts" => Ok(ProblemKind::WorstOfMaxCuts),
        "bot-vs-bot" => Ok(ProblemKind::BotVsBot),
        "bot-vs-maxcut" => Ok(ProblemKind::BotVsMaxCut),
        "maxcut-vs-maxcut" => Ok(ProblemKind::MaxCutVsMaxCut),
        other => Err(CliError::Usage(format!("unknown problem kind {other:?}"))),
    }
}

pub fn parse_algorithm(name: &str) -> Result<AlgorithmConfig, CliError> {
    let so = |mode| AlgorithmConfig::SingleObjective(SoConfig::new(mode));
    let mo = |s, a| AlgorithmConfig::MultiObjective(MoConfig::new(s, a));
    match name {
        "single-tree" => Ok(so(ModelMode::SingleTree)),
        "lk-asym" => Ok(so(ModelMode::KernelAsymmetric)),
        "lk-sym" => Ok(so(ModelMode::KernelSymmetric)),
        "objective-domination" => Ok(mo(MoStructure::ObjectiveClusters, MoAcceptance::Domination)),
        "objective-scalarized" => Ok(mo(MoStructure::ObjectiveClusters, MoAcceptance::Scalarized)),
        "asym-domination" => Ok(mo(MoStructure::KernelAsymmetric, MoAcceptance::Domination)),
        "asym-scalarized" => Ok(mo(MoStructure::KernelAsymmetric, MoAcceptance::Scalarized)),
        "sym-domination" => Ok(mo(MoStructure::KernelSymmetric, MoAcceptance::Domination)),
        "sym-scalarized" => Ok(mo(MoStructure::KernelSymmetric, MoAcceptance::Scalarized)),
        other => Err(CliError::Usage(format!("unknown algorithm {other:?}"))),
    }
}

/// One problem grid point: a concrete instance to generate and run against.
#[derive(Clone, Debug)]
pub struct ProblemCell {
    pub id: String,
    pub kind: ProblemKind,
    pub length: usize,
    pub block_size: u32,
    pub fns: usize,
    pub subs: usize,
    pub instance_seed: u64,
}

impl ProblemCell {
    pub fn instance_file(&self) -> String {
        format!("{}.inst", self.id)
    }

    pub fn mo_file(&self) -> String {
        format!("{}.mo", self.id)
    }

    pub fn objective_file(&self, objective: usize) -> String {
        format!("{}.obj{objective}.inst", self.id)
    }

    /// Materializes the instance from its seed (what `generate` writes).
    pub fn build_single(&self) -> lkgomea::problems::SingleInstance {
        match self.kind {
            ProblemKind::Bot => {
                BotInstance::generate(self.length, self.block_size, self.fns, self.instance_seed)
                    .expect("validated grid")
                    .into()
            }
            ProblemKind::MaxCut => MaxCutInstance::generate(self.length, self.instance_seed)
                .expect("validated grid")
                .into(),
            ProblemKind::WorstOfMaxCuts => {
                WorstOfMaxCutsInstance::generate(self.length, self.subs, self.instance_seed)
                    .expect("validated grid")
                    .into()
            }
            _ => unreachable!("multi-objective cells build via build_mo"),
        }
    }

    pub fn build_mo(&self) -> MoInstance {
        let seed = |objective: u64| derive_seed(&[self.instance_seed, stream::OBJECTIVE, objective]);
        let bot = |objective: u64| {
            Objective::Bot(
                BotInstance::generate(self.length, self.block_size, self.fns, seed(objective))
                    .expect("validated grid"),
            )
        };
        let maxcut = |objective: u64| {
            Objective::MaxCut(
                MaxCutInstance::generate(self.length, seed(objective)).expect("validated grid"),
            )
        };
        let objectives = match self.kind {
            ProblemKind::BotVsBot => [bot(0), bot(1)],
            ProblemKind::BotVsMaxCut => [bot(0), maxcut(1)],
            ProblemKind::MaxCutVsMaxCut => [maxcut(0), maxcut(1)],
            _ => unreachable!("single-objective cells build via build_single"),
        };
        MoInstance::new(objectives).expect("derived seeds are distinct")
    }
}

/// Expands the plan's problem grid into concrete cells, deterministically
/// from the master seed.
pub fn expand_problems(plan: &Plan) -> Result<Vec<ProblemCell>, CliError> {
    let mut cells = Vec::new();
    for spec in &plan.problems {
        let kind = problem_kind(&spec.kind)?;
        let uses_fns = matches!(
            kind,
            ProblemKind::Bot | ProblemKind::BotVsBot | ProblemKind::BotVsMaxCut
        );
        let fns_grid: &[usize] = if uses_fns { &spec.fns } else { &[1][..] };
        for &length in &spec.lengths {
            for &fns in fns_grid {
                for instance_index in 0..spec.instances {
                    if uses_fns && length % spec.block_size as usize != 0 {
                        return Err(CliError::Usage(format!(
                            "block size {} does not divide length {length}",
                            spec.block_size
                        )));
                    }
                    let instance_seed = derive_seed(&[
                        plan.master_seed,
                        stream::INSTANCE,
                        kind.code(),
                        length as u64,
                        spec.block_size as u64,
                        fns as u64,
                        spec.subs as u64,
                        instance_index as u64,
                    ]);
                    let id = match kind {
                        ProblemKind::Bot => format!(
                            "bot-l{length}-k{}-fns{fns}-i{instance_index}",
                            spec.block_size
                        ),
                        ProblemKind::MaxCut => format!("maxcut-l{length}-i{instance_index}"),
                        ProblemKind::WorstOfMaxCuts => {
                            format!("womc-l{length}-n{}-i{instance_index}", spec.subs)
                        }
                        ProblemKind::BotVsBot => format!(
                            "botbot-l{length}-k{}-fns{fns}-i{instance_index}",
                            spec.block_size
                        ),
                        ProblemKind::BotVsMaxCut => format!(
                            "botmaxcut-l{length}-k{}-fns{fns}-i{instance_index}",
                            spec.block_size
                        ),
                        ProblemKind::MaxCutVsMaxCut => {
                            format!("maxcutmaxcut-l{length}-i{instance_index}")
                        }
                    };
                    cells.push(ProblemCell {
                        id,
                        kind,
                        length,
                        block_size: spec.block_size,
                        fns,
                        subs: spec.subs,
                        instance_seed,
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// Seed for one (problem, algorithm, repeat) run cell.
pub fn run_seed(plan: &Plan, problem_id: &str, algorithm: &str, repeat: usize) -> u64 {
    let fnv = |s: &str| -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for b in s.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    };
    derive_seed(&[
        plan.master_seed,
        stream::RUN,
        fnv(problem_id),
        fnv(algorithm),
        repeat as u64,
    ])
}
