//! Fixed-length binary strings, the search-space points for every problem.

use std::fmt;
use std::str::FromStr;

use crate::rng::Rng;
use crate::{Error, Result};
use rand::RngCore;

/// A fixed-length bit string. The length is set at construction and never
/// changes. Bits are packed into 64-bit words so that Hamming distances and
/// equality checks run on whole words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Genotype {
    len: usize,
    words: Vec<u64>,
}

impl Genotype {
    pub fn zeros(len: usize) -> Self {
        Genotype {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut g = Genotype::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                g.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        g
    }

    /// The genotype whose bit `i` is bit `i` of `value`; used by exhaustive
    /// enumeration. Requires `len <= 64`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mask = if len == 64 { !0 } else { (1u64 << len) - 1 };
        Genotype {
            len,
            words: vec![value & mask],
        }
    }

    pub fn random(len: usize, rng: &mut Rng) -> Self {
        let mut g = Genotype::zeros(len);
        for w in g.words.iter_mut() {
            *w = rng.next_u64();
        }
        g.mask_tail();
        g
    }

    fn mask_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        debug_assert!(index < self.len);
        (self.words[index / 64] >> (index % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        debug_assert!(index < self.len);
        let mask = 1u64 << (index % 64);
        if value {
            self.words[index / 64] |= mask;
        } else {
            self.words[index / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        debug_assert!(index < self.len);
        self.words[index / 64] ^= 1u64 << (index % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of differing positions. Panics on length mismatch; the checked
    /// variant lives in [`crate::neighborhood::hamming`].
    #[inline]
    pub fn hamming(&self, other: &Genotype) -> usize {
        assert_eq!(self.len, other.len, "genotype length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn complement(&self) -> Genotype {
        let mut g = Genotype {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        g.mask_tail();
        g
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bitstring(&self) -> String {
        self.bits().map(|b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl fmt::Debug for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genotype({})", self.to_bitstring())
    }
}

impl FromStr for Genotype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut g = Genotype::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => g.set(i, true),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "bit string may only contain 0/1, found {other:?}"
                    )))
                }
            }
        }
        Ok(g)
    }
}

impl AsRef<Genotype> for Genotype {
    fn as_ref(&self) -> &Genotype {
        self
    }
}
