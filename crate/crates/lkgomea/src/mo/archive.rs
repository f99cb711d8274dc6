//! The elitist archive: the maintained approximation of the Pareto front.

use crate::genotype::Genotype;
use crate::metrics::{Front, FrontEntry};
use crate::rng::Rng;
use rand::Rng as _;

#[inline]
pub fn weakly_dominates(a: [i64; 2], b: [i64; 2]) -> bool {
    a[0] >= b[0] && a[1] >= b[1]
}

#[inline]
pub fn strictly_dominates(a: [i64; 2], b: [i64; 2]) -> bool {
    weakly_dominates(a, b) && a != b
}

#[derive(Clone, Debug)]
pub struct ArchiveMember {
    pub genotype: Genotype,
    pub fitness: [i64; 2],
}

/// Unbounded set of mutually non-dominated solutions with pairwise distinct
/// fitness vectors (fitness duplicates are rejected, which bounds growth on
/// integer-valued problems).
#[derive(Clone, Debug, Default)]
pub struct ElitistArchive {
    members: Vec<ArchiveMember>,
}

impl ElitistArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[ArchiveMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether `insert` would succeed: not weakly dominated by any member
    /// (which also rejects fitness duplicates).
    pub fn would_insert(&self, fitness: [i64; 2]) -> bool {
        !self
            .members
            .iter()
            .any(|m| weakly_dominates(m.fitness, fitness))
    }

    /// Inserts if admissible, removing every member the candidate dominates.
    pub fn insert(&mut self, genotype: &Genotype, fitness: [i64; 2]) -> bool {
        if !self.would_insert(fitness) {
            return false;
        }
        self.members
            .retain(|m| !weakly_dominates(fitness, m.fitness));
        self.members.push(ArchiveMember {
            genotype: genotype.clone(),
            fitness,
        });
        debug_assert!(self.is_mutually_nondominated());
        true
    }

    /// Per-objective [min, max] over the members.
    pub fn ranges(&self) -> Option<[[i64; 2]; 2]> {
        let first = self.members.first()?;
        let mut lo = first.fitness;
        let mut hi = first.fitness;
        for m in &self.members {
            for j in 0..2 {
                lo[j] = lo[j].min(m.fitness[j]);
                hi[j] = hi[j].max(m.fitness[j]);
            }
        }
        Some([lo, hi])
    }

    pub fn random_member(&self, rng: &mut Rng) -> Option<&ArchiveMember> {
        if self.members.is_empty() {
            None
        } else {
            Some(&self.members[rng.gen_range(0..self.members.len())])
        }
    }

    pub fn to_front(&self) -> Front {
        Front::from_entries(self.members.iter().map(|m| FrontEntry {
            fitness: m.fitness,
            genotype: Some(m.genotype.clone()),
        }))
    }

    /// Full pairwise consistency check; cheap because fitness duplicates are
    /// rejected, so archives on integer grids stay small.
    pub fn is_mutually_nondominated(&self) -> bool {
        for (i, a) in self.members.iter().enumerate() {
            for b in self.members.iter().skip(i + 1) {
                if weakly_dominates(a.fitness, b.fitness) || weakly_dominates(b.fitness, a.fitness)
                {
                    return false;
                }
            }
        }
        true
    }
}
