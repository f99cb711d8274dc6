//! Bi-objective hypervolume, front handling and reference-front
//! construction by sub-problem decomposition.

use std::path::Path;

use crate::genotype::Genotype;
use crate::problems::{BotInstance, MoInstance, Objective};
use crate::{Error, Result};

/// Area jointly dominated by `points` above `reference` (maximization: a
/// point contributes only if both coordinates are strictly greater than the
/// reference). Accepts unsorted input with dominated entries; they simply
/// contribute nothing.
pub fn hypervolume_2d(points: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let mut sorted: Vec<[f64; 2]> = points.to_vec();
    // sweep from the largest f0; within equal f0 keep the largest f1 first
    sorted.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
    let mut area = 0.0;
    let mut covered_f1 = reference[1];
    for p in sorted {
        if p[0] > reference[0] && p[1] > covered_f1 {
            area += (p[0] - reference[0]) * (p[1] - covered_f1);
            covered_f1 = p[1];
        }
    }
    area
}

/// One point of a front, optionally carrying the genotype that attained it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontEntry {
    pub fitness: [i64; 2],
    pub genotype: Option<Genotype>,
}

/// A mutually non-dominated set of integer fitness pairs, sorted by the
/// first objective descending (hence the second ascending), no duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Front {
    points: Vec<FrontEntry>,
}

fn weakly_dominates(a: [i64; 2], b: [i64; 2]) -> bool {
    a[0] >= b[0] && a[1] >= b[1]
}

impl Front {
    /// Filters dominated points and fitness duplicates, then sorts.
    pub fn from_entries(entries: impl IntoIterator<Item = FrontEntry>) -> Front {
        let mut points: Vec<FrontEntry> = Vec::new();
        for candidate in entries {
            if points
                .iter()
                .any(|p| weakly_dominates(p.fitness, candidate.fitness))
            {
                continue;
            }
            points.retain(|p| !weakly_dominates(candidate.fitness, p.fitness));
            points.push(candidate);
        }
        points.sort_by(|a, b| b.fitness[0].cmp(&a.fitness[0]));
        Front { points }
    }

    pub fn from_fitness(values: impl IntoIterator<Item = [i64; 2]>) -> Front {
        Front::from_entries(values.into_iter().map(|fitness| FrontEntry {
            fitness,
            genotype: None,
        }))
    }

    pub fn points(&self) -> &[FrontEntry] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn fitness_values(&self) -> Vec<[f64; 2]> {
        self.points
            .iter()
            .map(|p| [p.fitness[0] as f64, p.fitness[1] as f64])
            .collect()
    }

    /// Per-objective [min, max] over the front.
    pub fn ranges(&self) -> Option<[[i64; 2]; 2]> {
        let first = self.points.first()?;
        let mut lo = first.fitness;
        let mut hi = first.fitness;
        for p in &self.points {
            for j in 0..2 {
                lo[j] = lo[j].min(p.fitness[j]);
                hi[j] = hi[j].max(p.fitness[j]);
            }
        }
        Some([lo, hi])
    }

    /// `f0 f1 genotype-bitstring` per line, f0 descending; `-` marks a
    /// missing genotype.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let g = p
                .genotype
                .as_ref()
                .map_or_else(|| "-".to_string(), |g| g.to_bitstring());
            out.push_str(&format!("{} {} {}\n", p.fitness[0], p.fitness[1], g));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Front> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "expected `f0 f1 genotype`".into(),
                });
            }
            let parse_i = |s: &str| -> Result<i64> {
                s.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("invalid fitness value {s:?}"),
                })
            };
            let genotype = if parts[2] == "-" {
                None
            } else {
                Some(parts[2].parse::<Genotype>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: "invalid genotype bit string".into(),
                })?)
            };
            entries.push(FrontEntry {
                fitness: [parse_i(parts[0])?, parse_i(parts[1])?],
                genotype,
            });
        }
        Ok(Front::from_entries(entries))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Front> {
        Front::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Normalized hypervolume: both fronts are mapped per objective onto the
/// reference front's ranges, the reference point sits at (-0.05, -0.05) in
/// normalized coordinates so extreme points contribute, and the result is
/// HV(front) / HV(reference front). The reference front must span a positive
/// range in both objectives.
pub fn normalized_hv(front: &Front, reference_front: &Front) -> Result<f64> {
    let [lo, hi] = reference_front
        .ranges()
        .ok_or_else(|| Error::DegenerateReference("reference front is empty".into()))?;
    let mut span = [0.0; 2];
    for j in 0..2 {
        span[j] = (hi[j] - lo[j]) as f64;
        if span[j] <= 0.0 {
            return Err(Error::DegenerateReference(format!(
                "objective {j} spans zero range"
            )));
        }
    }
    let normalize = |f: [i64; 2]| -> [f64; 2] {
        [
            (f[0] - lo[0]) as f64 / span[0],
            (f[1] - lo[1]) as f64 / span[1],
        ]
    };
    let reference_point = [-0.05, -0.05];
    let ref_points: Vec<[f64; 2]> = reference_front
        .points()
        .iter()
        .map(|p| normalize(p.fitness))
        .collect();
    let front_points: Vec<[f64; 2]> = front
        .points()
        .iter()
        .map(|p| normalize(p.fitness))
        .collect();
    let ref_hv = hypervolume_2d(&ref_points, reference_point);
    debug_assert!(ref_hv > 0.0);
    Ok(hypervolume_2d(&front_points, reference_point) / ref_hv)
}

/// Union of fronts with dominated points and duplicates removed.
pub fn merge_fronts(fronts: &[Front]) -> Front {
    Front::from_entries(
        fronts
            .iter()
            .flat_map(|f| f.points().iter().cloned())
            .collect::<Vec<_>>(),
    )
}

/// Exhaustively enumerated Pareto front; lengths above 20 are refused.
pub fn enumerate_pareto_front(problem: &MoInstance) -> Result<Front> {
    let len = problem.length();
    if len > 20 {
        return Err(Error::TooLarge {
            what: "instance length for front enumeration",
            limit: 20,
            got: len,
        });
    }
    // dominance filter independent of the elitist archive implementation
    let mut kept: Vec<FrontEntry> = Vec::new();
    for x in 0u64..(1u64 << len) {
        let g = Genotype::from_u64(x, len);
        let fitness = problem.evaluate(&g)?;
        if kept.iter().any(|p| weakly_dominates(p.fitness, fitness)) {
            continue;
        }
        kept.retain(|p| !weakly_dominates(fitness, p.fitness));
        kept.push(FrontEntry {
            fitness,
            genotype: Some(g),
        });
    }
    Ok(Front::from_entries(kept))
}

/// Splits a Best-of-Traps objective into its sub-problems (anything else is
/// its own single "sub-problem").
fn sub_objectives(objective: &Objective) -> Vec<Objective> {
    match objective {
        Objective::Bot(b) => b
            .sub_problems()
            .iter()
            .map(|sp| Objective::Bot(BotInstance::from_sub_problem(sp.clone(), b.seed())))
            .collect(),
        Objective::MaxCut(m) => vec![Objective::MaxCut(m.clone())],
    }
}

/// Reference front by sub-problem decomposition: every pair of sub-problems
/// (one from each objective) is solved separately and the pairwise fronts
/// are merged. Pairs are enumerated exhaustively up to length 16; larger
/// pairs go through `pair_solver`. Returns the front and whether it is exact
/// (all pairs enumerated). Any point on the full problem's Pareto front lies
/// on some pair's front, so at enumerable sizes the merge is the exact
/// Pareto front.
pub fn build_reference_front_bot<F>(problem: &MoInstance, mut pair_solver: F) -> (Front, bool)
where
    F: FnMut(&MoInstance) -> Front,
{
    let subs0 = sub_objectives(&problem.objectives()[0]);
    let subs1 = sub_objectives(&problem.objectives()[1]);
    let exact = problem.length() <= 16;
    let mut fronts = Vec::with_capacity(subs0.len() * subs1.len());
    for a in &subs0 {
        for b in &subs1 {
            let pair = MoInstance::new([a.clone(), b.clone()])
                .expect("sub-objectives inherit distinct parent seeds and equal lengths");
            let front = if exact {
                enumerate_pareto_front(&pair).expect("length checked above")
            } else {
                pair_solver(&pair)
            };
            fronts.push(front);
        }
    }
    (merge_fronts(&fronts), exact)
}
