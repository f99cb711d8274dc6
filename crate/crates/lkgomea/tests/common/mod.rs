//! Independent oracle implementations for the equivalence suites. Everything
//! here is written as straight-line code over plain data structures, on
//! purpose sharing nothing with the library's implementation paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lkgomea::genotype::Genotype;
use lkgomea::problems::{BotInstance, MaxCutInstance, WorstOfMaxCutsInstance};
use lkgomea::rng::Rng;
use rand::Rng as _;

pub fn bits_of(g: &Genotype) -> Vec<bool> {
    g.bits().collect()
}

// ---- problem evaluators (direct transcription of the definitions) --------

pub fn oracle_trap(matches: u32, k: u32) -> i64 {
    if matches == k {
        k as i64
    } else {
        (k - matches - 1) as i64
    }
}

pub fn oracle_eval_subproblem(s: &[bool], permutation: &[u32], optimum: &[bool], k: u32) -> i64 {
    let blocks = s.len() / k as usize;
    let mut total = 0i64;
    for block in 0..blocks {
        let mut matches = 0u32;
        for j in 0..k as usize {
            let var = permutation[block * k as usize + j] as usize;
            if s[var] == optimum[var] {
                matches += 1;
            }
        }
        total += oracle_trap(matches, k);
    }
    total
}

pub fn oracle_eval_bot(s: &[bool], instance: &BotInstance) -> i64 {
    instance
        .sub_problems()
        .iter()
        .map(|sp| {
            oracle_eval_subproblem(
                s,
                sp.permutation(),
                &bits_of(sp.optimum()),
                sp.block_size(),
            )
        })
        .max()
        .unwrap()
}

pub fn oracle_eval_maxcut(s: &[bool], instance: &MaxCutInstance) -> i64 {
    let mut cut = 0i64;
    for e in instance.edges() {
        if s[e.a as usize] != s[e.b as usize] {
            cut += e.weight as i64;
        }
    }
    cut
}

pub fn oracle_eval_womc(s: &[bool], instance: &WorstOfMaxCutsInstance) -> i64 {
    instance
        .instances()
        .iter()
        .map(|m| oracle_eval_maxcut(s, m))
        .min()
        .unwrap()
}

/// Exhaustive maximum using an oracle evaluator.
pub fn oracle_enumerate_max(length: usize, mut f: impl FnMut(&[bool]) -> i64) -> i64 {
    let mut best = i64::MIN;
    let mut s = vec![false; length];
    for x in 0u64..(1 << length) {
        for (i, bit) in s.iter_mut().enumerate() {
            *bit = (x >> i) & 1 == 1;
        }
        best = best.max(f(&s));
    }
    best
}

// ---- NMI + UPGMA pipeline -------------------------------------------------

/// Naive pairwise NMI via the direct p*ln(p/(q*r)) sum. All probabilities
/// come straight from integer counts and symmetric cells are grouped, so
/// analytically tied values (transposed / complemented count tables) are
/// exactly tied here too, as the deterministic tie-break downstream needs.
pub fn oracle_nmi_matrix(solutions: &[Vec<bool>]) -> Vec<Vec<f64>> {
    let n = solutions.len() as f64;
    let len = solutions[0].len();
    let count1 = |v: usize| solutions.iter().filter(|s| s[v]).count() as f64;
    let plogp = |c: f64| {
        if c > 0.0 {
            let p = c / n;
            p * p.ln()
        } else {
            0.0
        }
    };
    let mut matrix = vec![vec![0.0; len]; len];
    for i in 0..len {
        let ci = count1(i);
        let hi = -(plogp(n - ci) + plogp(ci));
        matrix[i][i] = if hi > 0.0 { 1.0 } else { 0.0 };
        for j in (i + 1)..len {
            let cj = count1(j);
            let mut t = [0.0f64; 4];
            for s in solutions {
                t[(s[i] as usize) * 2 + (s[j] as usize)] += 1.0;
            }
            let h_joint = -((plogp(t[0]) + plogp(t[3])) + (plogp(t[1]) + plogp(t[2])));
            let term = |cell: f64, row: f64, col: f64| -> f64 {
                if cell > 0.0 {
                    let p = cell / n;
                    p * (p / ((row / n) * (col / n))).ln()
                } else {
                    0.0
                }
            };
            let mi = (term(t[0], n - ci, n - cj) + term(t[3], ci, cj))
                + (term(t[1], n - ci, cj) + term(t[2], ci, n - cj));
            let nmi = if h_joint > 0.0 {
                (mi / h_joint).clamp(0.0, 1.0)
            } else {
                0.0
            };
            matrix[i][j] = nmi;
            matrix[j][i] = nmi;
        }
    }
    matrix
}

/// Naive UPGMA over a similarity matrix: every round recomputes the average
/// similarity between every pair of clusters directly from the original
/// matrix, merges the best pair (ties to the smallest min-index pair), and
/// records the merged set. Singletons included, final root excluded.
pub fn oracle_upgma_subsets(matrix: &[Vec<f64>]) -> BTreeSet<Vec<usize>> {
    let len = matrix.len();
    let mut clusters: Vec<Vec<usize>> = (0..len).map(|v| vec![v]).collect();
    let mut subsets: BTreeSet<Vec<usize>> = clusters.iter().cloned().collect();
    while clusters.len() > 2 {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let mut sum = 0.0;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        sum += matrix[i][j];
                    }
                }
                let avg = sum / (clusters[a].len() * clusters[b].len()) as f64;
                let key = (
                    clusters[a][0].min(clusters[b][0]),
                    clusters[a][0].max(clusters[b][0]),
                );
                let better = match best {
                    None => true,
                    Some((bs, bi, bj)) => {
                        let bkey = (
                            clusters[bi][0].min(clusters[bj][0]),
                            clusters[bi][0].max(clusters[bj][0]),
                        );
                        avg > bs || (avg == bs && key < bkey)
                    }
                };
                if better {
                    best = Some((avg, a, b));
                }
            }
        }
        let (_, a, b) = best.unwrap();
        let mut merged = clusters[a].clone();
        merged.extend_from_slice(&clusters[b]);
        merged.sort_unstable();
        subsets.insert(merged.clone());
        clusters.remove(b);
        clusters.remove(a);
        clusters.push(merged);
        // keep min-index-first representation for deterministic keys
        for c in clusters.iter_mut() {
            c.sort_unstable();
        }
        clusters.sort();
    }
    subsets
}

// ---- hypervolume ----------------------------------------------------------

/// Monte-Carlo estimate of the area dominated by `points` above `reference`
/// inside the bounding box [reference, hi]. Returns (estimate, standard
/// error).
pub fn mc_hypervolume(
    points: &[[f64; 2]],
    reference: [f64; 2],
    hi: [f64; 2],
    samples: u64,
    rng: &mut Rng,
) -> (f64, f64) {
    // sorted by f0 descending, f1 is then the running maximum for binary search
    let mut sorted: Vec<[f64; 2]> = points.to_vec();
    sorted.sort_by(|a, b| b[0].total_cmp(&a[0]));
    let mut staircase: Vec<[f64; 2]> = Vec::new();
    let mut best_f1 = f64::NEG_INFINITY;
    for p in sorted {
        if p[1] > best_f1 {
            best_f1 = p[1];
            staircase.push([p[0], best_f1]);
        }
    }
    // staircase: f0 descending, f1 ascending; a sample (x, y) is dominated
    // iff some entry has f0 >= x and f1 >= y, i.e. the last entry with
    // f0 >= x has f1 >= y
    let area = (hi[0] - reference[0]) * (hi[1] - reference[1]);
    let mut hits = 0u64;
    for _ in 0..samples {
        let x = reference[0] + (hi[0] - reference[0]) * rng.gen::<f64>();
        let y = reference[1] + (hi[1] - reference[1]) * rng.gen::<f64>();
        let idx = staircase.partition_point(|p| p[0] >= x);
        if idx > 0 && staircase[idx - 1][1] >= y {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let estimate = p * area;
    let stderr = area * (p * (1.0 - p) / samples as f64).sqrt();
    (estimate, stderr)
}

// ---- Mann-Whitney exact null ----------------------------------------------

/// Exact two-sided p by recursive enumeration of all rank assignments.
pub fn oracle_mw_exact(a: &[f64], b: &[f64]) -> (f64, f64) {
    let na = a.len();
    let combined: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let n = combined.len();
    // midranks
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| combined[x].total_cmp(&combined[y]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && combined[order[j + 1]] == combined[order[i]] {
            j += 1;
        }
        for &idx in &order[i..=j] {
            ranks[idx] = (i + j + 2) as f64 / 2.0;
        }
        i = j + 1;
    }
    let u_obs = ranks[..na].iter().sum::<f64>() - (na * (na + 1)) as f64 / 2.0;

    fn recurse(
        ranks: &[f64],
        start: usize,
        left: usize,
        sum: f64,
        u_obs: f64,
        offset: f64,
        counts: &mut (u64, u64, u64),
    ) {
        if left == 0 {
            let u = sum - offset;
            if u <= u_obs + 1e-12 {
                counts.0 += 1;
            }
            if u >= u_obs - 1e-12 {
                counts.1 += 1;
            }
            counts.2 += 1;
            return;
        }
        if ranks.len() - start < left {
            return;
        }
        recurse(ranks, start + 1, left - 1, sum + ranks[start], u_obs, offset, counts);
        recurse(ranks, start + 1, left, sum, u_obs, offset, counts);
    }

    let mut counts = (0u64, 0u64, 0u64);
    let offset = (na * (na + 1)) as f64 / 2.0;
    recurse(&ranks, 0, na, 0.0, u_obs, offset, &mut counts);
    let p_le = counts.0 as f64 / counts.2 as f64;
    let p_ge = counts.1 as f64 / counts.2 as f64;
    (u_obs, (2.0 * p_le.min(p_ge)).min(1.0))
}
