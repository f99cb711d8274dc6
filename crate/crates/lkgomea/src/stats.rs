//! Statistical comparison of run outcomes: Mann-Whitney U tests with exact
//! small-sample enumeration, Holm-Bonferroni correction, and summary tables.

/// Per-run scalar outcomes; censored runs (unsuccessful within the budget)
/// carry the budget value and rank as worst outcomes.
#[derive(Clone, Debug, Default)]
pub struct RunSample {
    pub values: Vec<f64>,
    pub censored: Vec<bool>,
}

impl RunSample {
    pub fn from_values(values: Vec<f64>) -> Self {
        let censored = vec![false; values.len()];
        RunSample { values, censored }
    }

    pub fn push(&mut self, value: f64, censored: bool) {
        self.values.push(value);
        self.censored.push(censored);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Midranks of the combined sample, in input order.
fn midranks(combined: &[f64]) -> Vec<f64> {
    let n = combined.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| combined[a].total_cmp(&combined[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && combined[order[j + 1]] == combined[order[i]] {
            j += 1;
        }
        let rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn u_statistic_from_ranks(ranks: &[f64], na: usize) -> f64 {
    let ra: f64 = ranks[..na].iter().sum();
    ra - (na * (na + 1)) as f64 / 2.0
}

/// Standard normal survival function via erfc.
fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

const EXACT_LIMIT: usize = 12;

/// Two-sample Mann-Whitney U test. Returns (U of the first sample, two-sided
/// p-value). Ties get midranks; with a combined size of at most 12 the exact
/// permutation null is enumerated, otherwise the normal approximation with
/// tie-corrected variance and continuity correction applies. Identical
/// samples give p = 1.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert!(!a.is_empty() && !b.is_empty(), "samples must be non-empty");
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let combined: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let ranks = midranks(&combined);
    let u_a = u_statistic_from_ranks(&ranks, na);

    if n <= EXACT_LIMIT {
        // enumerate every assignment of na positions out of n
        let mut le = 0u64;
        let mut ge = 0u64;
        let mut total = 0u64;
        let mut chosen: Vec<usize> = (0..na).collect();
        loop {
            let ra: f64 = chosen.iter().map(|&i| ranks[i]).sum();
            let u = ra - (na * (na + 1)) as f64 / 2.0;
            if u <= u_a + 1e-12 {
                le += 1;
            }
            if u >= u_a - 1e-12 {
                ge += 1;
            }
            total += 1;
            // advance to the lexicographically next combination
            let Some(i) = (0..na).rev().find(|&i| chosen[i] < n - na + i) else {
                break;
            };
            chosen[i] += 1;
            for j in i + 1..na {
                chosen[j] = chosen[j - 1] + 1;
            }
        }
        let p_le = le as f64 / total as f64;
        let p_ge = ge as f64 / total as f64;
        let p = (2.0 * p_le.min(p_ge)).min(1.0);
        return (u_a, p);
    }

    // normal approximation with tie correction
    let mean = (na * nb) as f64 / 2.0;
    let mut tie_term = 0.0;
    {
        let mut sorted = combined.clone();
        sorted.sort_by(f64::total_cmp);
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && sorted[j + 1] == sorted[i] {
                j += 1;
            }
            let t = (j - i + 1) as f64;
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }
    let nf = n as f64;
    let variance =
        (na * nb) as f64 / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if variance <= 0.0 {
        return (u_a, 1.0); // all values identical
    }
    let diff = u_a - mean;
    let z = if diff == 0.0 {
        0.0
    } else {
        (diff - 0.5 * diff.signum()) / variance.sqrt()
    };
    let p = (2.0 * normal_sf(z.abs())).min(1.0);
    (u_a, p)
}

/// Holm-Bonferroni step-down correction at level `alpha`: sort the p-values
/// ascending, reject while p(i) <= alpha / (m - i + 1), stop at the first
/// failure. Returns per-hypothesis reject flags in the input order.
pub fn holm_bonferroni(p_values: &[f64], alpha: f64) -> Vec<bool> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut reject = vec![false; m];
    for (i, &idx) in order.iter().enumerate() {
        if p_values[idx] <= alpha / (m - i) as f64 {
            reject[idx] = true;
        } else {
            break;
        }
    }
    reject
}

/// Per-group summary: median absent when the median run failed, percentiles
/// by nearest rank over all values (censored runs included at their budget
/// value).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSummary {
    pub count: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub median: Option<f64>,
    pub p05: f64,
    pub p95: f64,
}

pub fn summarize(sample: &RunSample) -> GroupSummary {
    assert!(!sample.is_empty(), "cannot summarize an empty sample");
    let n = sample.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        sample.values[a]
            .total_cmp(&sample.values[b])
            // censored runs are worst among ties at the same value
            .then(sample.censored[a].cmp(&sample.censored[b]))
    });
    let successes = sample.censored.iter().filter(|&&c| !c).count();

    let median = if n % 2 == 1 {
        let mid = order[n / 2];
        (!sample.censored[mid]).then_some(sample.values[mid])
    } else {
        let (lo, hi) = (order[n / 2 - 1], order[n / 2]);
        (!sample.censored[lo] && !sample.censored[hi])
            .then_some((sample.values[lo] + sample.values[hi]) / 2.0)
    };

    let nearest_rank = |p: f64| -> f64 {
        let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
        sample.values[order[rank - 1]]
    };
    GroupSummary {
        count: n,
        successes,
        success_rate: successes as f64 / n as f64,
        median,
        p05: nearest_rank(0.05),
        p95: nearest_rank(0.95),
    }
}
