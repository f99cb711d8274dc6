//! Deceptive trap functions and the Best-of-Traps benchmark.
//!
//! A Best-of-Traps instance is the maximum over `fns` sub-problems. Each
//! sub-problem is a concatenated deceptive trap over a private permutation of
//! the variables, scored not by unitation but by the number of positions that
//! match a private optimum string. Every sub-problem attains the same optimal
//! value at a different point, so the instance has one mode (and one linkage
//! structure) per sub-problem.

use crate::genotype::Genotype;
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::{Error, Result};
use rand::seq::SliceRandom;

/// The deceptive trap function: the number of matches `u` in a block of size
/// `k` scores `k` on a full match and `k - u - 1` otherwise, so near-misses
/// score worst.
pub fn trap(matches: u32, block_size: u32) -> Result<u32> {
    if matches > block_size {
        return Err(Error::InvalidArgument(format!(
            "unitation {matches} exceeds block size {block_size}"
        )));
    }
    if matches == block_size {
        Ok(block_size)
    } else {
        Ok(block_size - matches - 1)
    }
}

/// One permuted, re-targeted concatenated trap function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapSubProblem {
    permutation: Vec<u32>,
    optimum: Genotype,
    block_size: u32,
}

impl TrapSubProblem {
    pub fn new(permutation: Vec<u32>, optimum: Genotype, block_size: u32) -> Result<Self> {
        let len = optimum.len();
        if permutation.len() != len {
            return Err(Error::InvalidArgument(format!(
                "permutation length {} does not match optimum length {len}",
                permutation.len()
            )));
        }
        let mut seen = vec![false; len];
        for &p in &permutation {
            if (p as usize) >= len || seen[p as usize] {
                return Err(Error::InvalidArgument(format!(
                    "permutation is not a bijection on 0..{len}"
                )));
            }
            seen[p as usize] = true;
        }
        if block_size == 0 || len % block_size as usize != 0 {
            return Err(Error::InvalidArgument(format!(
                "block size {block_size} does not divide length {len}"
            )));
        }
        Ok(TrapSubProblem {
            permutation,
            optimum,
            block_size,
        })
    }

    pub fn length(&self) -> usize {
        self.optimum.len()
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn permutation(&self) -> &[u32] {
        &self.permutation
    }

    pub fn optimum(&self) -> &Genotype {
        &self.optimum
    }

    /// Sums the trap value of every permutation-induced block, counting the
    /// positions that match this sub-problem's optimum. Maximum is the length.
    pub fn evaluate(&self, s: &Genotype) -> Result<i64> {
        if s.len() != self.length() {
            return Err(Error::InvalidArgument(format!(
                "genotype length {} does not match instance length {}",
                s.len(),
                self.length()
            )));
        }
        Ok(self.evaluate_unchecked(s))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, s: &Genotype) -> i64 {
        let k = self.block_size as usize;
        let mut total = 0i64;
        for block in self.permutation.chunks_exact(k) {
            let mut matches = 0u32;
            for &p in block {
                matches += (s.get(p as usize) == self.optimum.get(p as usize)) as u32;
            }
            total += if matches == self.block_size {
                self.block_size as i64
            } else {
                (self.block_size - matches - 1) as i64
            };
        }
        total
    }
}

/// A Best-of-Traps instance: the maximum over its sub-problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BotInstance {
    sub_problems: Vec<TrapSubProblem>,
    length: usize,
    block_size: u32,
    seed: u64,
}

impl BotInstance {
    pub fn new(sub_problems: Vec<TrapSubProblem>, seed: u64) -> Result<Self> {
        let first = sub_problems
            .first()
            .ok_or_else(|| Error::InvalidArgument("need at least one sub-problem".into()))?;
        let (length, block_size) = (first.length(), first.block_size());
        for sp in &sub_problems {
            if sp.length() != length || sp.block_size() != block_size {
                return Err(Error::InvalidArgument(
                    "all sub-problems must share length and block size".into(),
                ));
            }
        }
        Ok(BotInstance {
            sub_problems,
            length,
            block_size,
            seed,
        })
    }

    /// Generates `fns` sub-problems, each with a uniformly shuffled
    /// permutation and a uniform random optimum string, deterministically
    /// from `seed`.
    pub fn generate(length: usize, block_size: u32, fns: usize, seed: u64) -> Result<Self> {
        if block_size == 0 || length % block_size as usize != 0 {
            return Err(Error::InvalidArgument(format!(
                "block size {block_size} does not divide length {length}"
            )));
        }
        if fns == 0 {
            return Err(Error::InvalidArgument("fns must be at least 1".into()));
        }
        let sub_problems = (0..fns)
            .map(|a| {
                let mut rng =
                    rng_from_seed(derive_seed(&[seed, stream::SUBPROBLEM, a as u64]));
                let mut permutation: Vec<u32> = (0..length as u32).collect();
                permutation.shuffle(&mut rng);
                let optimum = Genotype::random(length, &mut rng);
                TrapSubProblem::new(permutation, optimum, block_size)
            })
            .collect::<Result<Vec<_>>>()?;
        BotInstance::new(sub_problems, seed)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn block_size(&self) -> u32 {
        self.block_size
    }

    pub fn fns(&self) -> usize {
        self.sub_problems.len()
    }

    pub fn sub_problems(&self) -> &[TrapSubProblem] {
        &self.sub_problems
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A one-sub-problem instance wrapping `sub`, used when decomposing a
    /// Best-of-Traps objective into its modes.
    pub fn from_sub_problem(sub: TrapSubProblem, seed: u64) -> Self {
        BotInstance {
            length: sub.length(),
            block_size: sub.block_size(),
            sub_problems: vec![sub],
            seed,
        }
    }

    pub fn evaluate(&self, s: &Genotype) -> Result<i64> {
        if s.len() != self.length {
            return Err(Error::InvalidArgument(format!(
                "genotype length {} does not match instance length {}",
                s.len(),
                self.length
            )));
        }
        Ok(self.evaluate_unchecked(s))
    }

    #[inline]
    pub(crate) fn evaluate_unchecked(&self, s: &Genotype) -> i64 {
        self.sub_problems
            .iter()
            .map(|sp| sp.evaluate_unchecked(s))
            .max()
            .expect("at least one sub-problem")
    }

    /// The optimal value, known by construction: any sub-problem optimum
    /// scores the full length.
    pub fn optimum_value(&self) -> i64 {
        self.length as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_sub(optimum: &str, k: u32) -> TrapSubProblem {
        let opt: Genotype = optimum.parse().unwrap();
        let perm: Vec<u32> = (0..opt.len() as u32).collect();
        TrapSubProblem::new(perm, opt, k).unwrap()
    }

    #[test]
    fn trap_values() {
        assert_eq!(trap(5, 5).unwrap(), 5);
        assert_eq!(trap(0, 5).unwrap(), 4);
        assert_eq!(trap(4, 5).unwrap(), 0);
        assert!(trap(6, 5).is_err());
    }

    #[test]
    fn subproblem_at_its_optimum_scores_length() {
        let sp = identity_sub("1010110010", 5);
        assert_eq!(sp.evaluate(sp.optimum()).unwrap(), 10);
    }

    #[test]
    fn subproblem_at_complement_scores_length_minus_blocks() {
        let sp = identity_sub("1010110010", 5);
        let complement = sp.optimum().complement();
        // every block has zero matches and scores k - 1
        assert_eq!(sp.evaluate(&complement).unwrap(), 10 - 10 / 5);
    }

    #[test]
    fn single_bit_off_kills_one_block() {
        // Frozen from the exhaustive direct-formula oracle in tests/oracles.rs:
        // flipping one position drops the touched block from 5 to trap(4,5)=0,
        // so the total is 5 + 0 = 5.
        let sp = identity_sub("1010110010", 5);
        let mut s = sp.optimum().clone();
        s.flip(3);
        assert_eq!(sp.evaluate(&s).unwrap(), 5);
    }

    #[test]
    fn bot_max_over_subproblems() {
        let inst = BotInstance::generate(10, 5, 2, 11).unwrap();
        let s0 = inst.sub_problems()[0].optimum().clone();
        assert_eq!(inst.evaluate(&s0).unwrap(), 10);
        assert_eq!(inst.optimum_value(), 10);
    }

    #[test]
    fn bot_with_one_subproblem_equals_subproblem() {
        let inst = BotInstance::generate(10, 5, 1, 3).unwrap();
        let mut rng = crate::rng::rng_from_seed(4);
        for _ in 0..50 {
            let s = Genotype::random(10, &mut rng);
            assert_eq!(
                inst.evaluate(&s).unwrap(),
                inst.sub_problems()[0].evaluate(&s).unwrap()
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = BotInstance::generate(320, 5, 8, 99).unwrap();
        let b = BotInstance::generate(320, 5, 8, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sub_problems().len(), 8);
        assert_eq!(a.sub_problems()[0].permutation().len() / 5, 64);
    }

    #[test]
    fn generated_permutations_are_bijections() {
        let inst = BotInstance::generate(10, 5, 2, 7).unwrap();
        for sp in inst.sub_problems() {
            let mut sorted: Vec<u32> = sp.permutation().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..10).collect::<Vec<u32>>());
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(BotInstance::generate(10, 3, 1, 0).is_err());
        assert!(BotInstance::generate(10, 5, 0, 0).is_err());
        let sp = identity_sub("1010110010", 5);
        let short = Genotype::zeros(8);
        assert!(sp.evaluate(&short).is_err());
    }
}
