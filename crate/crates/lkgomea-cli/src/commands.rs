//! The generate, run, solve-exact and ref-front commands.

use std::path::{Path, PathBuf};

use lkgomea::engine::{ModelMode, SoConfig};
use lkgomea::ims::{
    consensus_value_to_reach, run_with_ims, AlgorithmConfig, RunGoals, RunLimits,
};
use lkgomea::metrics::{build_reference_front_bot, merge_fronts, Front, FrontEntry};
use lkgomea::mo::{MoAcceptance, MoConfig, MoStructure};
use lkgomea::problems::{
    parse_mo_reference, read_single_instance, serialize_mo_reference, solve_exact,
    write_single_instance, ProblemInstance, SingleInstance, EXACT_ENUMERATION_LIMIT,
};
use lkgomea::rng::{derive_seed, stream};

use crate::plan::{expand_problems, parse_algorithm, problem_kind, run_seed, Plan, ProblemCell};
use crate::CliError;

pub struct OutputLayout {
    pub root: PathBuf,
}

impl OutputLayout {
    pub fn new(plan: &Plan, override_dir: Option<&Path>) -> Self {
        OutputLayout {
            root: override_dir.unwrap_or(&plan.output_dir).to_path_buf(),
        }
    }

    pub fn instances(&self) -> PathBuf {
        self.root.join("instances")
    }

    pub fn reports(&self) -> PathBuf {
        self.root.join("reports")
    }

    pub fn targets(&self) -> PathBuf {
        self.root.join("targets")
    }

    pub fn fronts(&self) -> PathBuf {
        self.root.join("fronts")
    }

}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

fn io_err<'a>(context: &'a str, path: &'a Path) -> impl FnOnce(std::io::Error) -> CliError + 'a {
    move |e| CliError::Io(format!("{context} {}: {e}", path.display()))
}

/// Writes every instance of the plan's problem grid; rerunning produces
/// byte-identical files.
pub fn cmd_generate(plan: &Plan, out: &OutputLayout) -> Result<usize, CliError> {
    let dir = out.instances();
    ensure_dir(&dir)?;
    let cells = expand_problems(plan)?;
    for cell in &cells {
        if cell.kind.is_multi_objective() {
            let mo = cell.build_mo();
            for (objective, name) in (0..2).map(|o| (o, cell.objective_file(o))) {
                let path = dir.join(&name);
                write_single_instance(&path, &mo.objectives()[objective].as_single())
                    .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
            }
            let mo_path = dir.join(cell.mo_file());
            std::fs::write(
                &mo_path,
                serialize_mo_reference(
                    cell.length,
                    [&cell.objective_file(0), &cell.objective_file(1)],
                ),
            )
            .map_err(io_err("writing", &mo_path))?;
        } else {
            let path = dir.join(cell.instance_file());
            write_single_instance(&path, &cell.build_single())
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        }
    }
    Ok(cells.len())
}

/// Loads a cell's instance back from the generated files.
fn load_problem(cell: &ProblemCell, out: &OutputLayout) -> Result<ProblemInstance, CliError> {
    let dir = out.instances();
    if cell.kind.is_multi_objective() {
        let mo_path = dir.join(cell.mo_file());
        let text = std::fs::read_to_string(&mo_path).map_err(|_| {
            CliError::Io(format!(
                "missing instance {}; run `lkg generate` first",
                mo_path.display()
            ))
        })?;
        let (length, paths) =
            parse_mo_reference(&text).map_err(|e| CliError::Io(e.to_string()))?;
        let base = mo_path.parent().unwrap_or(Path::new("."));
        let load = |rel: &str| -> Result<SingleInstance, CliError> {
            read_single_instance(&base.join(rel)).map_err(|e| CliError::Io(e.to_string()))
        };
        let to_objective = |inst: SingleInstance| match inst {
            SingleInstance::Bot(b) => Ok(lkgomea::problems::Objective::Bot(b)),
            SingleInstance::MaxCut(m) => Ok(lkgomea::problems::Objective::MaxCut(m)),
            SingleInstance::WorstOfMaxCuts(_) => Err(CliError::Io(
                "worst-of-maxcuts cannot be a multi-objective component".into(),
            )),
        };
        let a = to_objective(load(&paths[0])?)?;
        let b = to_objective(load(&paths[1])?)?;
        if a.length() != length {
            return Err(CliError::Io("mo file length mismatch".into()));
        }
        lkgomea::problems::MoInstance::new([a, b])
            .map(ProblemInstance::Mo)
            .map_err(|e| CliError::Io(e.to_string()))
    } else {
        let path = dir.join(cell.instance_file());
        read_single_instance(&path)
            .map(ProblemInstance::Single)
            .map_err(|_| {
                CliError::Io(format!(
                    "missing or unreadable instance {}; run `lkg generate` first",
                    path.display()
                ))
            })
    }
}

/// Value-to-reach for a single-objective cell: by construction for
/// Best-of-Traps, exact enumeration up to length 20, consensus pre-runs
/// beyond. Cached under targets/.
fn resolve_target(
    cell: &ProblemCell,
    instance: &SingleInstance,
    plan: &Plan,
    out: &OutputLayout,
) -> Result<i64, CliError> {
    if let Some(v) = instance.known_optimum() {
        return Ok(v);
    }
    let dir = out.targets();
    let path = dir.join(format!("{}.txt", cell.id));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Some(v) = text
            .lines()
            .find_map(|l| l.strip_prefix("value "))
            .and_then(|v| v.trim().parse::<i64>().ok())
        {
            return Ok(v);
        }
    }
    ensure_dir(&dir)?;
    let (value, source) = if instance.length() <= EXACT_ENUMERATION_LIMIT {
        let (value, _) = solve_exact(instance).map_err(|e| CliError::Io(e.to_string()))?;
        (value, "exact".to_string())
    } else {
        let cfg = SoConfig::new(ModelMode::KernelSymmetric);
        let (value, agreed) = consensus_value_to_reach(
            instance,
            &cfg,
            &plan.ims.params(),
            plan.targets.consensus_budget,
            plan.targets.consensus_runs,
            derive_seed(&[plan.master_seed, stream::CONSENSUS, cell.instance_seed]),
        );
        (value, format!("consensus agreed={agreed}"))
    };
    std::fs::write(&path, format!("value {value}\nsource {source}\n"))
        .map_err(io_err("writing", &path))?;
    Ok(value)
}

fn limits(plan: &Plan) -> RunLimits {
    RunLimits {
        max_evaluations: Some(plan.budget.evaluations),
        max_wall_ms: (plan.budget.wall_ms > 0).then_some(plan.budget.wall_ms),
    }
}

/// Executes every (problem, algorithm, repeat) cell of the plan. Completed
/// cells (their report file exists) are skipped unless `force`; reports are
/// written atomically, so an interrupted cell leaves only a `.tmp` marker
/// and reruns cleanly.
pub fn cmd_run(plan: &Plan, out: &OutputLayout, force: bool) -> Result<(usize, usize), CliError> {
    let reports = out.reports();
    ensure_dir(&reports)?;
    // stale markers from interrupted invocations
    for entry in std::fs::read_dir(&reports).map_err(io_err("reading", &reports))? {
        let path = entry.map_err(io_err("reading", &reports))?.path();
        if path.extension().is_some_and(|e| e == "tmp") {
            let _ = std::fs::remove_file(&path);
        }
    }

    struct RunCell {
        problem: ProblemCell,
        algorithm_name: String,
        algorithm: AlgorithmConfig,
        seed: u64,
        report_path: PathBuf,
    }

    let problems = expand_problems(plan)?;
    let mut cells: Vec<RunCell> = Vec::new();
    let mut skipped = 0usize;
    for problem in &problems {
        let names: &[String] = if problem.kind.is_multi_objective() {
            &plan.algorithms.multi_objective
        } else {
            &plan.algorithms.single_objective
        };
        for name in names {
            let algorithm = parse_algorithm(name)?;
            for repeat in 0..plan.repeats {
                let report_path =
                    reports.join(format!("{}__{}__r{repeat}.json", problem.id, name));
                if !force && report_path.exists() {
                    skipped += 1;
                    continue;
                }
                cells.push(RunCell {
                    problem: problem.clone(),
                    algorithm_name: name.clone(),
                    algorithm: algorithm.clone(),
                    seed: run_seed(plan, &problem.id, name, repeat),
                    report_path,
                });
            }
        }
    }

    // prepare goals up-front (shared instance loads, targets, fronts), then
    // run the independent cells in parallel
    let mut prepared: Vec<(RunCell, ProblemInstance, RunGoals)> = Vec::new();
    for cell in cells {
        let instance = load_problem(&cell.problem, out)?;
        let goals = match &instance {
            ProblemInstance::Single(single) => RunGoals {
                value_to_reach: Some(resolve_target(&cell.problem, single, plan, out)?),
                reference_front: None,
                hv_target: None,
            },
            ProblemInstance::Mo(_) => {
                let front_path = out.fronts().join(format!("{}.front", cell.problem.id));
                let reference_front = Front::read(&front_path).ok();
                RunGoals {
                    value_to_reach: None,
                    hv_target: reference_front
                        .as_ref()
                        .and_then(|_| plan.budget.hv_stop),
                    reference_front,
                }
            }
        };
        prepared.push((cell, instance, goals));
    }

    let run_limits = limits(plan);
    let ims = plan.ims.params();
    let results: Vec<Result<(), CliError>> =
        lkgomea::exec::map_indices(prepared.len(), |i| {
            let (cell, instance, goals) = &prepared[i];
            let mut report = run_with_ims(instance, &cell.algorithm, &ims, &run_limits, goals, cell.seed)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            report.problem = cell.problem.id.clone();
            report.algorithm = cell.algorithm_name.clone();
            let trace_path = cell.report_path.with_extension("trace");
            std::fs::write(&trace_path, report.trace_text())
                .map_err(io_err("writing", &trace_path))?;
            let tmp = cell.report_path.with_extension("json.tmp");
            std::fs::write(&tmp, report.to_json()).map_err(io_err("writing", &tmp))?;
            std::fs::rename(&tmp, &cell.report_path)
                .map_err(io_err("committing", &cell.report_path))?;
            Ok(())
        });
    let executed = results.len();
    for result in results {
        result?;
    }
    Ok((executed, skipped))
}

/// Exact optimum of a small instance file.
pub fn cmd_solve_exact(path: &Path) -> Result<(i64, String), CliError> {
    let instance = read_single_instance(path).map_err(|e| CliError::Io(e.to_string()))?;
    let (value, genotype) = solve_exact(&instance).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((value, genotype.to_bitstring()))
}

/// Builds (and caches) the reference front for every multi-objective problem
/// in the plan: exhaustive enumeration up to length 16, otherwise
/// sub-problem decomposition with merged seeded solver runs per pair.
pub fn cmd_ref_front(plan: &Plan, out: &OutputLayout) -> Result<usize, CliError> {
    let dir = out.fronts();
    ensure_dir(&dir)?;
    let solver_cfg = MoConfig::new(MoStructure::KernelSymmetric, MoAcceptance::Scalarized);
    let ims = plan.ims.params();
    let mut built = 0usize;
    for cell in expand_problems(plan)? {
        if !cell.kind.is_multi_objective() {
            continue;
        }
        let path = dir.join(format!("{}.front", cell.id));
        if path.exists() {
            continue;
        }
        let mo = cell.build_mo();
        let mut pair_index = 0u64;
        let (front, _exact) = build_reference_front_bot(&mo, |pair| {
            pair_index += 1;
            let fronts: Vec<Front> = (0..plan.reference.runs)
                .map(|run| {
                    let seed = derive_seed(&[
                        plan.master_seed,
                        stream::CONSENSUS,
                        cell.instance_seed,
                        pair_index,
                        run as u64,
                    ]);
                    let report = lkgomea::ims::run_multi_objective(
                        pair,
                        &solver_cfg,
                        &ims,
                        &RunLimits::evaluations(plan.reference.budget),
                        &RunGoals::default(),
                        seed,
                    );
                    Front::from_entries(report.archive.unwrap_or_default().into_iter().map(
                        |e| FrontEntry {
                            fitness: e.fitness,
                            genotype: e.genotype.parse().ok(),
                        },
                    ))
                })
                .collect();
            merge_fronts(&fronts)
        });
        front
            .write(&path)
            .map_err(|e| CliError::Io(e.to_string()))?;
        built += 1;
    }
    Ok(built)
}

/// True when `kind` names a problem whose cells this command touches.
pub fn plan_has_mo_problems(plan: &Plan) -> bool {
    plan.problems
        .iter()
        .any(|p| matches!(problem_kind(&p.kind), Ok(k) if k.is_multi_objective()))
}
