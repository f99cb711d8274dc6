//! Discrete model-based evolutionary optimization with per-solution linkage
//! kernels (LK-GOMEA), plus the multi-structured benchmark problems and the
//! measurement pipeline used to compare algorithm variants.
//!
//! The crate is organized around the stages of an optimization run:
//!
//! * [`problems`] — Best-of-Traps, MaxCut and Worst-of-MaxCuts instances
//!   (generation, evaluation, serialization, exact solving at small sizes)
//!   and bi-objective pairings of them.
//! * [`linkage`] — pairwise normalized mutual information and the filtered
//!   linkage tree (a family of variable subsets) built from it via UPGMA.
//! * [`neighborhood`] — Hamming-distance k-nearest-neighbor sets, the local
//!   "kernels" over which per-solution linkage models are learned.
//! * [`engine`] — gene-pool optimal mixing, forced improvements, and the
//!   single-objective generational step (single-tree or kernel models).
//! * [`mo`] — elitist archive, objective-space clustering, scalarizations,
//!   and the multi-objective generational step.
//! * [`ims`] — the interleaved multi-start scheme and complete run drivers.
//! * [`metrics`] — bi-objective hypervolume and reference-front construction.
//! * [`stats`] — Mann-Whitney U tests, Holm-Bonferroni correction, summaries.
//!
//! Data-parallel inner loops (neighborhood computation, per-kernel model
//! learning, exhaustive enumeration) run on rayon when the default `parallel`
//! feature is enabled and fall back to sequential code otherwise; results are
//! identical either way, see [`exec`].

pub mod engine;
pub mod exec;
mod error;
pub mod genotype;
pub mod ims;
pub mod linkage;
pub mod metrics;
pub mod mo;
pub mod neighborhood;
pub mod problems;
pub mod report;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use genotype::Genotype;
