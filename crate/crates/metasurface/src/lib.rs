//! Finite-universe laboratory for meta-learning sample complexity.
//!
//! Everything runs over an indexed point universe `{0..K-1}` with binary
//! labels, so hypothesis classes and families are finite objects whose
//! learning-theoretic parameters can be computed exactly:
//!
//! - [`universe`] — the data model (hypotheses, classes, families, domains,
//!   meta-distributions) and exact rational loss primitives.
//! - [`combinatorics`] — VC dimension, dual Helly numbers and their ε
//!   variants, optimal error curves, hard-set witnesses, and the
//!   non-triviality checkers.
//! - [`game`] — the value of the family game, solved with an exact rational
//!   simplex inside a double-oracle loop.
//! - [`simulate`] — two- and three-stage samplers, ERM selection policies,
//!   Monte Carlo and exact learning-surface evaluation, and adversarial
//!   meta-distribution constructions.
//! - [`generators`] — deterministic constructors for singleton, half-space,
//!   near-complete, and random families.
//! - [`cli`] — the `metasurface` command-line front end (`analyze`, `game`,
//!   `surface`, `verify`, `generate`).
//!
//! The `examples/` directory contains one runnable walkthrough per
//! capability; start with `analyze_family`.

pub mod budget;
pub mod cli;
pub mod combinatorics;
pub mod game;
pub mod generators;
pub mod io;
pub mod rational;
pub mod rng;
pub mod simulate;
pub mod universe;
pub mod verify;
