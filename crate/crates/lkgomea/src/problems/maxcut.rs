//! Weighted MaxCut and its worst-case robust composition.

use crate::genotype::Genotype;
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::{Error, Result};
use rand::Rng as _;

/// An undirected weighted edge with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub weight: u32,
}

/// A weighted graph; the objective is the total weight of edges whose
/// endpoints land in different sets of the bipartition encoded by a genotype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxCutInstance {
    vertex_count: usize,
    edges: Vec<Edge>,
    seed: u64,
}

impl MaxCutInstance {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, seed: u64) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            if e.a >= e.b {
                return Err(Error::InvalidArgument(format!(
                    "edge endpoints must satisfy a < b, got ({}, {})",
                    e.a, e.b
                )));
            }
            if e.b as usize >= vertex_count {
                return Err(Error::InvalidArgument(format!(
                    "edge endpoint {} out of range for {vertex_count} vertices",
                    e.b
                )));
            }
            if !seen.insert((e.a, e.b)) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge ({}, {})",
                    e.a, e.b
                )));
            }
        }
        Ok(MaxCutInstance {
            vertex_count,
            edges,
            seed,
        })
    }

    /// A dense (complete) graph on `vertex_count` vertices with integer
    /// weights uniform on 1..=5, deterministic in `seed`.
    pub fn generate(vertex_count: usize, seed: u64) -> Result<Self> {
        if vertex_count < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 vertices, got {vertex_count}"
            )));
        }
        let mut rng = rng_from_seed(derive_seed(&[seed, stream::INSTANCE]));
        let mut edges = Vec::with_capacity(vertex_count * (vertex_count - 1) / 2);
        for a in 0..vertex_count as u32 {
            for b in (a + 1)..vertex_count as u32 {
                edges.push(Edge {
                    a,
                    b,
                    weight: rng.gen_range(1..=5),
                });
            }
        }
        MaxCutInstance::new(vertex_count, edges, seed)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sum of all edge weights; an upper bound on any cut value.
    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight as i64).sum()
    }

    pub fn evaluate(&self, s: &Genotype) -> Result<i64> {
        if s.len() != self.vertex_count {
            return Err(Error::InvalidArgument(format!(
                "genotype length {} does not match vertex count {}",
                s.len(),
                self.vertex_count
            )));
        }
        Ok(self.evaluate_unchecked(s))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, s: &Genotype) -> i64 {
        let mut cut = 0i64;
        for e in &self.edges {
            if s.get(e.a as usize) != s.get(e.b as usize) {
                cut += e.weight as i64;
            }
        }
        cut
    }
}

/// Worst-case composition: the minimum cut value over several instances on
/// the same vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstOfMaxCutsInstance {
    instances: Vec<MaxCutInstance>,
}

impl WorstOfMaxCutsInstance {
    pub fn new(instances: Vec<MaxCutInstance>) -> Result<Self> {
        if instances.len() < 2 {
            return Err(Error::InvalidArgument(
                "worst-of-maxcuts needs at least 2 instances".into(),
            ));
        }
        let n = instances[0].vertex_count();
        if instances.iter().any(|i| i.vertex_count() != n) {
            return Err(Error::InvalidArgument(
                "all sub-instances must share the vertex count".into(),
            ));
        }
        Ok(WorstOfMaxCutsInstance { instances })
    }

    /// `count` dense instances with seeds derived from `seed`.
    pub fn generate(vertex_count: usize, count: usize, seed: u64) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidArgument(
                "worst-of-maxcuts needs at least 2 instances".into(),
            ));
        }
        let instances = (0..count)
            .map(|i| {
                MaxCutInstance::generate(vertex_count, derive_seed(&[seed, i as u64]))
            })
            .collect::<Result<Vec<_>>>()?;
        WorstOfMaxCutsInstance::new(instances)
    }

    pub fn vertex_count(&self) -> usize {
        self.instances[0].vertex_count()
    }

    pub fn instances(&self) -> &[MaxCutInstance] {
        &self.instances
    }

    pub fn evaluate(&self, s: &Genotype) -> Result<i64> {
        if s.len() != self.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "genotype length {} does not match vertex count {}",
                s.len(),
                self.vertex_count()
            )));
        }
        Ok(self.evaluate_unchecked(s))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, s: &Genotype) -> i64 {
        self.instances
            .iter()
            .map(|i| i.evaluate_unchecked(s))
            .min()
            .expect("at least two instances")
    }
}
