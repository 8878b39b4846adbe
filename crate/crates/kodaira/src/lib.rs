//! Exact symbolic calculus for the Kodaira-type classification of singular
//! fibers of minimal abelian fibrations with at most 1-dimensional linear part.
//!
//! The crate is organized bottom-up:
//!
//! * [`abelian`] — exact finitely generated abelian group arithmetic: Smith
//!   normal form, cokernels, discriminant groups of intersection matrices.
//! * [`config`] — fiber configurations as decorated dual graphs, the balance
//!   condition, and the exhaustive enumerator that re-derives Kodaira's list.
//! * [`types`] — the full fiber-type taxonomy (semistable, unstable with
//!   Albanese stabilizer, multiple families), component groups, untangling,
//!   duality bookkeeping, and the canonical string grammar.
//! * [`action`] — exact models of curve configurations with coordinate
//!   charts, diagonal automorphisms, freeness checks, and quotient-type
//!   classification.
//! * [`base_change`] — the inertia/base-change calculus: semistable
//!   reduction, the five-case pullback taxonomy, and multiple-fiber
//!   admissibility.
//! * [`catalog`] — machine-readable catalogs of the classification tables and
//!   end-to-end example recipes.
//!
//! All arithmetic is exact: arbitrary-precision integers for matrices and
//! groups, rationals modulo 1 for roots of unity and torsion translations.

pub mod abelian;
pub mod action;
pub mod base_change;
pub mod catalog;
pub mod config;
pub mod types;

mod error;
pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
