//! Linkage learning: pairwise normalized mutual information over a solution
//! set and the filtered linkage tree built from it with UPGMA.
//!
//! The linkage tree is represented as a family of variable-index subsets
//! ([`Fos`]): all singletons plus every internal merge node except the root.
//! Filtering removes merges at dependence ~0 and collapses subtrees merged at
//! dependence ~1 down to their top subset, which is what gene-pool optimal
//! mixing then iterates over.

use crate::genotype::Genotype;
use crate::{Error, Result};

/// How the mutual information between two variables is normalized into
/// [0, 1]. The joint-entropy form is the default; it makes the ≈1 filter
/// threshold well-defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NmiNormalization {
    /// MI(X, Y) / H(X, Y)
    #[default]
    JointEntropy,
    /// MI(X, Y) / max(H(X), H(Y))
    MaxEntropy,
}

/// Symmetric matrix of pairwise normalized mutual information values.
#[derive(Clone, Debug)]
pub struct NmiMatrix {
    size: usize,
    values: Vec<f64>,
}

impl NmiMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }
}

/// Pairwise NMI over the empirical bit frequencies of a solution set, with
/// the joint-entropy normalization. Entries use the convention 0/0 -> 0; the
/// diagonal is 1 for variables with positive entropy and 0 otherwise.
pub fn pairwise_nmi<G: AsRef<Genotype>>(solutions: &[G]) -> Result<NmiMatrix> {
    pairwise_nmi_with(solutions, NmiNormalization::JointEntropy)
}

pub fn pairwise_nmi_with<G: AsRef<Genotype>>(
    solutions: &[G],
    normalization: NmiNormalization,
) -> Result<NmiMatrix> {
    let n = solutions.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 solutions to estimate dependence, got {n}"
        )));
    }
    let len = solutions[0].as_ref().len();
    if solutions.iter().any(|s| s.as_ref().len() != len) {
        return Err(Error::InvalidArgument(
            "all solutions must have equal length".into(),
        ));
    }

    // Transpose into one bitmask per variable over the solution axis so that
    // pair counts are AND + popcount on whole words.
    let words = n.div_ceil(64);
    let mut columns = vec![0u64; len * words];
    for (s_idx, s) in solutions.iter().enumerate() {
        let g = s.as_ref();
        let (w, bit) = (s_idx / 64, (s_idx % 64) as u32);
        for v in 0..len {
            if g.get(v) {
                columns[v * words + w] |= 1u64 << bit;
            }
        }
    }
    let ones: Vec<u64> = (0..len)
        .map(|v| {
            columns[v * words..(v + 1) * words]
                .iter()
                .map(|w| w.count_ones() as u64)
                .sum()
        })
        .collect();

    let total = n as f64;
    // p*ln(p) accumulated from counts; zero-count cells contribute 0.
    let plogp = |count: u64| -> f64 {
        if count == 0 {
            0.0
        } else {
            let p = count as f64 / total;
            p * p.ln()
        }
    };
    let entropy1 = |c1: u64| -> f64 { -(plogp(c1) + plogp(n as u64 - c1)) };

    let mut values = vec![0.0; len * len];
    for i in 0..len {
        let hi = entropy1(ones[i]);
        values[i * len + i] = if hi > 0.0 { 1.0 } else { 0.0 };
        let col_i = &columns[i * words..(i + 1) * words];
        for j in (i + 1)..len {
            let col_j = &columns[j * words..(j + 1) * words];
            let c11: u64 = col_i
                .iter()
                .zip(col_j)
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            let c10 = ones[i] - c11;
            let c01 = ones[j] - c11;
            let c00 = n as u64 - c11 - c10 - c01;

            // grouping keeps the sum bit-identical when i and j swap roles
            // (c01 and c10 exchange), so relabeling variables cannot flip
            // near-tied merge decisions downstream
            let h_joint = -((plogp(c00) + plogp(c11)) + (plogp(c01) + plogp(c10)));
            let hj = entropy1(ones[j]);
            let mi = hi + hj - h_joint;
            let denominator = match normalization {
                NmiNormalization::JointEntropy => h_joint,
                NmiNormalization::MaxEntropy => hi.max(hj),
            };
            let nmi = if denominator > 0.0 {
                (mi / denominator).clamp(0.0, 1.0)
            } else {
                0.0
            };
            values[i * len + j] = nmi;
            values[j * len + i] = nmi;
        }
    }
    Ok(NmiMatrix { size: len, values })
}

/// One subset of a family of subsets, with the NMI level at which it was
/// formed (1.0 for singletons) and, for merge nodes, the element ids of the
/// two subsets it united.
#[derive(Clone, Debug, PartialEq)]
pub struct FosElement {
    pub indices: Vec<usize>,
    pub merge_similarity: f64,
    pub children: Option<(usize, usize)>,
}

/// An ordered family of variable-index subsets: the linkage model interface
/// used by gene-pool optimal mixing.
#[derive(Clone, Debug, PartialEq)]
pub struct Fos {
    num_variables: usize,
    elements: Vec<FosElement>,
}

impl Fos {
    /// A hand-specified family of subsets (every subset at similarity 1, no
    /// tree structure); used for fixed models in tests and tools.
    pub fn from_subsets(num_variables: usize, subsets: Vec<Vec<usize>>) -> Self {
        let elements = subsets
            .into_iter()
            .map(|mut indices| {
                indices.sort_unstable();
                indices.dedup();
                debug_assert!(!indices.is_empty());
                debug_assert!(indices.iter().all(|&v| v < num_variables));
                FosElement {
                    indices,
                    merge_similarity: 1.0,
                    children: None,
                }
            })
            .collect();
        Fos {
            num_variables,
            elements,
        }
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn elements(&self) -> &[FosElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn subsets(&self) -> impl Iterator<Item = &[usize]> {
        self.elements.iter().map(|e| e.indices.as_slice())
    }

    pub fn contains_subset(&self, subset: &[usize]) -> bool {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        self.elements.iter().any(|e| e.indices == sorted)
    }

    /// Debug dump: one subset per line, sorted indices, space-separated.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.elements {
            let fields: Vec<String> = e.indices.iter().map(|i| i.to_string()).collect();
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Cluster {
    element: usize,
    min_index: usize,
    size: usize,
}

/// Agglomerative average-linkage (UPGMA) clustering over similarity. Starts
/// from all singletons and repeatedly merges the pair of clusters with the
/// highest size-weighted average pairwise NMI; ties go to the pair with the
/// lexicographically smallest (min-index, min-index). Every singleton and
/// every internal node except the final root becomes a FOS element, in
/// merge order.
pub fn build_linkage_tree(nmi: &NmiMatrix) -> Fos {
    let n = nmi.size();
    debug_assert!(n >= 2, "linkage tree needs at least 2 variables");
    let mut elements: Vec<FosElement> = (0..n)
        .map(|v| FosElement {
            indices: vec![v],
            merge_similarity: 1.0,
            children: None,
        })
        .collect();

    let mut active: Vec<Cluster> = (0..n)
        .map(|v| Cluster {
            element: v,
            min_index: v,
            size: 1,
        })
        .collect();
    // similarity between active slots, row-major over the shrinking slot list
    let mut sim: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| nmi.get(i, j)).collect())
        .collect();

    while active.len() > 2 {
        // highest average similarity; ties to the smallest min-index pair
        let mut best = (0usize, 1usize, f64::NEG_INFINITY);
        let pair_key = |active: &[Cluster], i: usize, j: usize| {
            let (a, b) = (active[i].min_index, active[j].min_index);
            (a.min(b), a.max(b))
        };
        for i in 0..active.len() {
            for j in (i + 1)..active.len() {
                let s = sim[i][j];
                if s > best.2
                    || (s == best.2 && pair_key(&active, i, j) < pair_key(&active, best.0, best.1))
                {
                    best = (i, j, s);
                }
            }
        }
        let (a, b, similarity) = best;

        let mut indices = elements[active[a].element].indices.clone();
        indices.extend_from_slice(&elements[active[b].element].indices);
        indices.sort_unstable();
        let merged_element = elements.len();
        elements.push(FosElement {
            indices,
            merge_similarity: similarity,
            children: Some((active[a].element, active[b].element)),
        });

        // Lance-Williams update for the unweighted average linkage
        let (sa, sb) = (active[a].size as f64, active[b].size as f64);
        for c in 0..active.len() {
            if c != a && c != b {
                let merged = (sa * sim[a][c] + sb * sim[b][c]) / (sa + sb);
                sim[a][c] = merged;
                sim[c][a] = merged;
            }
        }
        active[a] = Cluster {
            element: merged_element,
            min_index: active[a].min_index.min(active[b].min_index),
            size: active[a].size + active[b].size,
        };
        let last = active.len() - 1;
        active.swap_remove(b);
        if b != last {
            sim.swap(b, last);
        }
        sim.pop();
        for row in sim.iter_mut() {
            if b != last {
                row.swap(b, last);
            }
            row.pop();
        }
    }
    Fos {
        num_variables: n,
        elements,
    }
}

/// Default tolerance for the ≈0 / ≈1 filter thresholds.
pub const DEFAULT_FILTER_EPS: f64 = 1e-6;

/// Drops every non-singleton subset merged at similarity <= eps, and for
/// every subset merged at similarity >= 1 - eps drops all of its strict
/// descendants (keeping the subset itself). Descendant links are consumed;
/// the returned family is flat.
pub fn filter_fos(fos: &Fos, eps: f64) -> Fos {
    let elements = fos.elements();
    let mut drop = vec![false; elements.len()];
    for (idx, el) in elements.iter().enumerate() {
        if el.indices.len() > 1 && el.merge_similarity <= eps {
            drop[idx] = true;
        }
    }
    for el in elements {
        if el.merge_similarity >= 1.0 - eps {
            let mut stack: Vec<usize> = el.children.map(|(a, b)| vec![a, b]).unwrap_or_default();
            while let Some(d) = stack.pop() {
                drop[d] = true;
                if let Some((a, b)) = elements[d].children {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
    }
    Fos {
        num_variables: fos.num_variables(),
        elements: elements
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(el, _)| FosElement {
                indices: el.indices.clone(),
                merge_similarity: el.merge_similarity,
                children: None,
            })
            .collect(),
    }
}

/// The full model-learning pipeline: pairwise NMI, UPGMA linkage tree,
/// filtering at the default tolerance.
pub fn learn_model<G: AsRef<Genotype>>(solutions: &[G]) -> Result<Fos> {
    learn_model_with(solutions, NmiNormalization::JointEntropy, DEFAULT_FILTER_EPS)
}

pub fn learn_model_with<G: AsRef<Genotype>>(
    solutions: &[G],
    normalization: NmiNormalization,
    eps: f64,
) -> Result<Fos> {
    let nmi = pairwise_nmi_with(solutions, normalization)?;
    Ok(filter_fos(&build_linkage_tree(&nmi), eps))
}
