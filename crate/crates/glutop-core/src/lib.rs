//! Finite-set-valued diagram categories with logical structure.
//!
//! Everything here is exact, finite combinatorics: categories are explicit
//! object/morphism/composition tables, diagrams assign finite sets and
//! function tables, and the logical structure (subobject classifiers,
//! characteristic maps, dependent products with both transposes) is built by
//! table-level constructions. Every construction has an independent
//! brute-force counterpart in [`oracle`] that checks the defining universal
//! property by exhaustive enumeration.
//!
//! The crate is `no_std` (alloc only); all values are immutable after
//! construction and every operation is a pure function of its inputs, so
//! results are deterministic and safe to share across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod corpus;
pub mod diagcat;
pub mod encode;
pub mod error;
pub mod fincat;
pub mod gluing;
pub mod homotopy;
pub mod logicat;
pub mod matching;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result, ValidationReport, Violation};

/// Default enumeration budget: candidate tuples/sections/hom-elements per call.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Hard cap on morphisms per category; violating it is a construction error.
pub const MAX_MORPHISMS: usize = 10_000;

/// Default zigzag-word length budget for localization representatives.
pub const DEFAULT_WORD_CAP: usize = 16;

/// Default bound on distinct localization classes per hom-set.
pub const DEFAULT_HOMSET_CAP: usize = 64;
