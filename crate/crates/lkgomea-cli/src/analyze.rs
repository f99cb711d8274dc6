//! The analyze command: scalability series, MO convergence series, front
//! dumps, pairwise Mann-Whitney matrices with Holm-Bonferroni correction,
//! and win-count tables, all emitted as tab-separated text.
//!
//! Timing-derived outputs go to separate `*_time_*` files so that everything
//! else is byte-reproducible across reruns of the same plan and seed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lkgomea::metrics::{merge_fronts, normalized_hv, Front, FrontEntry};
use lkgomea::report::RunReport;
use lkgomea::stats::{holm_bonferroni, mann_whitney_u, summarize, GroupSummary, RunSample};
use serde::Serialize;

use crate::CliError;

const ALPHA: f64 = 0.05;

/// Grouping key parsed back out of a problem id like `bot-l40-k5-fns8-i0`:
/// `family` is the id with the length token removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ProblemKey {
    family: String,
    length: usize,
}

fn parse_problem_id(id: &str) -> ProblemKey {
    let mut family_tokens = Vec::new();
    let mut length = 0usize;
    for token in id.split('-') {
        if let Some(rest) = token.strip_prefix('l') {
            if let Ok(v) = rest.parse::<usize>() {
                length = v;
                continue;
            }
        }
        family_tokens.push(token);
    }
    ProblemKey {
        family: family_tokens.join("-"),
        length,
    }
}

struct Cell {
    key: ProblemKey,
    problem_id: String,
    /// per algorithm, sorted: (reports for each repeat)
    by_algorithm: BTreeMap<String, Vec<RunReport>>,
}

fn load_reports(dir: &Path) -> Result<Vec<RunReport>, CliError> {
    let mut reports = Vec::new();
    let mut incomplete = 0usize;
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();
    for path in entries {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
                reports.push(RunReport::from_json(&text).map_err(|e| {
                    CliError::Io(format!("parsing {}: {e}", path.display()))
                })?);
            }
            Some("tmp") => incomplete += 1,
            _ => {}
        }
    }
    if incomplete > 0 {
        return Err(CliError::Incomplete(format!(
            "{incomplete} incomplete cell(s) in {}; re-run `lkg run`",
            dir.display()
        )));
    }
    Ok(reports)
}

fn group_cells(reports: Vec<RunReport>) -> Vec<Cell> {
    let mut map: BTreeMap<String, Cell> = BTreeMap::new();
    for report in reports {
        let cell = map
            .entry(report.problem.clone())
            .or_insert_with(|| Cell {
                key: parse_problem_id(&report.problem),
                problem_id: report.problem.clone(),
                by_algorithm: BTreeMap::new(),
            });
        cell.by_algorithm
            .entry(report.algorithm.clone())
            .or_default()
            .push(report);
    }
    let mut cells: Vec<Cell> = map.into_values().collect();
    for cell in &mut cells {
        for runs in cell.by_algorithm.values_mut() {
            runs.sort_by_key(|r| r.seed);
        }
    }
    cells
}

/// Evaluations-to-optimum sample; failures are censored at the evaluations
/// they actually consumed (the budget, unless the wall clock cut in first).
fn evals_sample(runs: &[RunReport]) -> RunSample {
    let mut sample = RunSample::default();
    for r in runs {
        if r.success {
            sample.push(r.evaluations as f64, false);
        } else {
            sample.push(r.total_evaluations as f64, true);
        }
    }
    sample
}

fn time_sample(runs: &[RunReport]) -> RunSample {
    let mut sample = RunSample::default();
    for r in runs {
        sample.push(r.milliseconds as f64, !r.success);
    }
    sample
}

/// Final normalized hypervolume per run; recomputed from the stored archive
/// when the run itself had no reference front.
fn hv_sample(runs: &[RunReport], reference: Option<&Front>) -> Option<RunSample> {
    let mut sample = RunSample::default();
    for r in runs {
        let hv = r.final_hypervolume.or_else(|| {
            let (reference, archive) = (reference?, r.archive.as_ref()?);
            let front = Front::from_entries(archive.iter().map(|e| FrontEntry {
                fitness: e.fitness,
                genotype: None,
            }));
            normalized_hv(&front, reference).ok()
        })?;
        sample.push(hv, false);
    }
    Some(sample)
}

fn write_table(path: &Path, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| format!("{v}"))
}

pub fn cmd_analyze(
    reports_dir: &Path,
    fronts_dir: Option<&Path>,
    tables_dir: Option<&Path>,
) -> Result<usize, CliError> {
    let reports = load_reports(reports_dir)?;
    if reports.is_empty() {
        println!("nothing to analyze in {}", reports_dir.display());
        return Ok(0);
    }
    let out = tables_dir.map(Path::to_path_buf).unwrap_or_else(|| {
        reports_dir
            .parent()
            .unwrap_or(Path::new("."))
            .join("analysis")
    });
    std::fs::create_dir_all(&out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;

    let cells = group_cells(reports);
    let mut outputs = 0usize;

    // structured per-(problem, algorithm) summary document
    #[derive(Serialize)]
    struct SummaryEntry {
        problem: String,
        algorithm: String,
        runs: usize,
        successes: usize,
        success_rate: f64,
        median_evaluations: Option<f64>,
        p05_evaluations: f64,
        p95_evaluations: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        median_hypervolume: Option<f64>,
    }
    let mut summary_entries: Vec<SummaryEntry> = Vec::new();
    for cell in &cells {
        for (algorithm, runs) in &cell.by_algorithm {
            let evals: GroupSummary = summarize(&evals_sample(runs));
            let hv = hv_sample(runs, None).map(|s| summarize(&s));
            summary_entries.push(SummaryEntry {
                problem: cell.problem_id.clone(),
                algorithm: algorithm.clone(),
                runs: evals.count,
                successes: evals.successes,
                success_rate: evals.success_rate,
                median_evaluations: evals.median,
                p05_evaluations: evals.p05,
                p95_evaluations: evals.p95,
                median_hypervolume: hv.and_then(|h| h.median),
            });
        }
    }
    let summary_path = out.join("summary.json");
    std::fs::write(
        &summary_path,
        serde_json::to_string_pretty(&summary_entries).expect("serializable"),
    )
    .map_err(|e| CliError::Io(format!("writing {}: {e}", summary_path.display())))?;
    outputs += 1;

    // ---- scalability series per problem family --------------------------
    let mut families: BTreeMap<String, Vec<&Cell>> = BTreeMap::new();
    for cell in &cells {
        families.entry(cell.key.family.clone()).or_default().push(cell);
    }
    for (family, family_cells) in &families {
        let mut evals_rows = Vec::new();
        let mut time_rows = Vec::new();
        let mut sorted: Vec<&&Cell> = family_cells.iter().collect();
        sorted.sort_by_key(|c| (c.key.length, &c.problem_id));
        for cell in sorted {
            for (algorithm, runs) in &cell.by_algorithm {
                let evals = summarize(&evals_sample(runs));
                // a point is omitted from the series when its median run
                // failed to reach the optimum
                if evals.median.is_some() {
                    evals_rows.push(format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        cell.key.length,
                        algorithm,
                        evals.count,
                        evals.successes,
                        evals.success_rate,
                        fmt_opt(evals.median),
                        evals.p05,
                        evals.p95,
                    ));
                }
                let time = summarize(&time_sample(runs));
                if time.median.is_some() {
                    time_rows.push(format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        cell.key.length,
                        algorithm,
                        time.count,
                        time.successes,
                        time.success_rate,
                        fmt_opt(time.median),
                        time.p05,
                        time.p95,
                    ));
                }
            }
        }
        let header = "length\talgorithm\truns\tsuccesses\tsuccess_rate\tmedian\tp05\tp95";
        write_table(
            &out.join(format!("scalability_evals_{family}.tsv")),
            header,
            &evals_rows,
        )?;
        write_table(
            &out.join(format!("scalability_time_{family}.tsv")),
            header,
            &time_rows,
        )?;
        outputs += 2;
    }

    // ---- per-cell statistics: Mann-Whitney + Holm, win counts -----------
    let mut mw_rows: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
    let mut wins: BTreeMap<&'static str, BTreeMap<String, usize>> = BTreeMap::new();
    let mut front_files = 0usize;

    for cell in &cells {
        let algorithms: Vec<&String> = cell.by_algorithm.keys().collect();
        let reference = fronts_dir.and_then(|dir| {
            Front::read(&dir.join(format!("{}.front", cell.problem_id))).ok()
        });

        // metric samples per algorithm
        let mut samples: BTreeMap<&'static str, Vec<(String, RunSample, bool)>> = BTreeMap::new();
        for &algorithm in &algorithms {
            let runs = &cell.by_algorithm[algorithm];
            let is_mo = runs.iter().any(|r| r.archive.is_some());
            if is_mo {
                if let Some(sample) = hv_sample(runs, reference.as_ref()) {
                    samples.entry("hv").or_default().push((
                        algorithm.clone(),
                        sample,
                        true, // higher is better
                    ));
                }
            } else {
                samples.entry("evals").or_default().push((
                    algorithm.clone(),
                    evals_sample(runs),
                    false, // lower is better
                ));
                samples.entry("time").or_default().push((
                    algorithm.clone(),
                    time_sample(runs),
                    false,
                ));
            }
        }

        for (metric, entries) in samples {
            if entries.len() < 2 {
                continue;
            }
            // all unordered pairs form one Holm family per (cell, metric)
            let mut pairs = Vec::new();
            let mut p_values = Vec::new();
            for i in 0..entries.len() {
                for j in (i + 1)..entries.len() {
                    let (_, p) = mann_whitney_u(&entries[i].1.values, &entries[j].1.values);
                    pairs.push((i, j));
                    p_values.push(p);
                }
            }
            let rejects = holm_bonferroni(&p_values, ALPHA);
            for (((i, j), p), reject) in pairs.iter().zip(&p_values).zip(&rejects) {
                let higher_better = entries[*i].2;
                let median = |sample: &RunSample| -> f64 {
                    let mut v = sample.values.clone();
                    v.sort_by(f64::total_cmp);
                    let n = v.len();
                    if n % 2 == 1 {
                        v[n / 2]
                    } else {
                        (v[n / 2 - 1] + v[n / 2]) / 2.0
                    }
                };
                let (ma, mb) = (median(&entries[*i].1), median(&entries[*j].1));
                let better = if ma == mb {
                    "none"
                } else if (ma > mb) == higher_better {
                    "a"
                } else {
                    "b"
                };
                if *reject && better != "none" {
                    let winner = if better == "a" {
                        entries[*i].0.clone()
                    } else {
                        entries[*j].0.clone()
                    };
                    *wins
                        .entry(metric)
                        .or_default()
                        .entry(winner)
                        .or_default() += 1;
                }
                mw_rows.entry(metric).or_default().push(format!(
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    cell.problem_id, entries[*i].0, entries[*j].0, p, reject, better
                ));
                // losers still appear in the win table with zero wins
                for entry in [&entries[*i], &entries[*j]] {
                    wins.entry(metric)
                        .or_default()
                        .entry(entry.0.clone())
                        .or_insert(0);
                }
            }
        }

        // ---- MO convergence series and front dumps -----------------------
        let is_mo_cell = cell
            .by_algorithm
            .values()
            .flatten()
            .any(|r| r.archive.is_some());
        if is_mo_cell {
            let mut rows = Vec::new();
            for (algorithm, runs) in &cell.by_algorithm {
                let grid: std::collections::BTreeSet<u64> = runs
                    .iter()
                    .flat_map(|r| r.hv_trace.iter().map(|h| h.evaluations))
                    .collect();
                for &point in &grid {
                    let mut at_point: Vec<f64> = runs
                        .iter()
                        .map(|r| {
                            r.hv_trace
                                .iter()
                                .take_while(|h| h.evaluations <= point)
                                .last()
                                .map_or(0.0, |h| h.hypervolume)
                        })
                        .collect();
                    at_point.sort_by(f64::total_cmp);
                    let n = at_point.len();
                    let median = if n % 2 == 1 {
                        at_point[n / 2]
                    } else {
                        (at_point[n / 2 - 1] + at_point[n / 2]) / 2.0
                    };
                    rows.push(format!(
                        "{algorithm}\t{point}\t{median}\t{}\t{}",
                        at_point[((0.05 * n as f64).ceil() as usize).clamp(1, n) - 1],
                        at_point[((0.95 * n as f64).ceil() as usize).clamp(1, n) - 1],
                    ));
                }

                // merged final front over all repeats
                let fronts: Vec<Front> = runs
                    .iter()
                    .filter_map(|r| r.archive.as_ref())
                    .map(|archive| {
                        Front::from_entries(archive.iter().map(|e| FrontEntry {
                            fitness: e.fitness,
                            genotype: e.genotype.parse().ok(),
                        }))
                    })
                    .collect();
                if !fronts.is_empty() {
                    let merged = merge_fronts(&fronts);
                    merged
                        .write(&out.join(format!(
                            "front_{}__{algorithm}.front",
                            cell.problem_id
                        )))
                        .map_err(|e| CliError::Io(e.to_string()))?;
                    front_files += 1;
                }
            }
            if !rows.is_empty() {
                write_table(
                    &out.join(format!("mo_convergence_{}.tsv", cell.problem_id)),
                    "algorithm\tevaluations\thv_median\thv_p05\thv_p95",
                    &rows,
                )?;
                outputs += 1;
            }
        }
    }

    for (metric, rows) in &mw_rows {
        write_table(
            &out.join(format!("mw_{metric}.tsv")),
            "problem\talgorithm_a\talgorithm_b\tp_value\tholm_reject\tbetter",
            rows,
        )?;
        outputs += 1;
    }

    // win-count tables ranked by descending count (dense ranks)
    for (metric, counts) in &wins {
        let mut ordered: Vec<(&String, &usize)> = counts.iter().collect();
        ordered.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let mut rows = Vec::new();
        let mut rank = 0usize;
        let mut last_count = usize::MAX;
        for (algorithm, &count) in ordered {
            if count != last_count {
                rank += 1;
                last_count = count;
            }
            rows.push(format!("{algorithm}\t{count}\t({rank})"));
        }
        write_table(
            &out.join(format!("wins_{metric}.tsv")),
            "algorithm\tcount\trank",
            &rows,
        )?;
        outputs += 1;
    }

    Ok(outputs + front_files)
}
