//! Scalarized improvement directions: uniformly spaced weight vectors on the
//! 2-simplex, matched greedily to solutions, compared with a weighted
//! Tchebycheff functional over archive-normalized objectives.

use super::archive::ElitistArchive;

/// Min-max normalization ranges, taken from the current elitist archive and
/// refreshed every generation. A degenerate span falls back to 1 so the
/// mapping stays monotone.
#[derive(Clone, Debug)]
pub struct ObjectiveRanges {
    lo: [f64; 2],
    span: [f64; 2],
}

impl ObjectiveRanges {
    pub fn new(lo: [f64; 2], hi: [f64; 2]) -> Self {
        ObjectiveRanges {
            lo,
            span: [f64::max(hi[0] - lo[0], 1.0), f64::max(hi[1] - lo[1], 1.0)],
        }
    }

    pub fn from_archive(archive: &ElitistArchive) -> Self {
        match archive.ranges() {
            Some([lo, hi]) => ObjectiveRanges::new(
                [lo[0] as f64, lo[1] as f64],
                [hi[0] as f64, hi[1] as f64],
            ),
            None => ObjectiveRanges::new([0.0, 0.0], [1.0, 1.0]),
        }
    }

    #[inline]
    pub fn normalize(&self, fitness: [i64; 2]) -> [f64; 2] {
        [
            (fitness[0] as f64 - self.lo[0]) / self.span[0],
            (fitness[1] as f64 - self.lo[1]) / self.span[1],
        ]
    }
}

/// Weighted Tchebycheff value (higher is better): the negated worst weighted
/// distance to the normalized utopia point. Zero-weight objectives are
/// excluded from the max, so extreme weights reduce exactly to
/// single-objective comparison.
pub fn tchebycheff(fitness: [i64; 2], weights: [f64; 2], ranges: &ObjectiveRanges) -> f64 {
    let n = ranges.normalize(fitness);
    let mut worst = f64::NEG_INFINITY;
    for j in 0..2 {
        if weights[j] > 0.0 {
            worst = worst.max(weights[j] * (1.0 - n[j]));
        }
    }
    -worst
}

/// `n` uniformly spaced weight vectors on the 2-simplex, from (1,0) to (0,1).
pub fn uniform_weights(n: usize) -> Vec<[f64; 2]> {
    debug_assert!(n >= 2);
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            [1.0 - t, t]
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ScalarizationAssignment {
    /// weight vector per solution index
    pub weights: Vec<[f64; 2]>,
    /// scalarized value of each solution under its own weights
    pub values: Vec<f64>,
}

/// Greedily matches each weight vector to the unassigned solution that
/// maximizes its scalarized value. Weights are processed from the extremes
/// inward, so (1,0) and (0,1) land on the current per-objective bests.
pub fn assign_scalarization_weights(
    fitness: &[[i64; 2]],
    ranges: &ObjectiveRanges,
) -> ScalarizationAssignment {
    let n = fitness.len();
    debug_assert!(n >= 2);
    let weights = uniform_weights(n);

    // extremes first: 0, n-1, 1, n-2, ...
    let mut order = Vec::with_capacity(n);
    let (mut left, mut right) = (0usize, n - 1);
    while left <= right {
        order.push(left);
        if left != right {
            order.push(right);
        }
        left += 1;
        if right == 0 {
            break;
        }
        right -= 1;
    }

    let mut assigned_weights = vec![[0.0, 0.0]; n];
    let mut assigned_values = vec![0.0; n];
    let mut taken = vec![false; n];
    for &w_idx in &order {
        let w = weights[w_idx];
        let best = (0..n)
            .filter(|&i| !taken[i])
            .max_by(|&a, &b| {
                tchebycheff(fitness[a], w, ranges)
                    .total_cmp(&tchebycheff(fitness[b], w, ranges))
                    .then(b.cmp(&a)) // ties to the lowest index
            })
            .expect("one unassigned solution per weight");
        taken[best] = true;
        assigned_weights[best] = w;
        assigned_values[best] = tchebycheff(fitness[best], w, ranges);
    }
    ScalarizationAssignment {
        weights: assigned_weights,
        values: assigned_values,
    }
}
