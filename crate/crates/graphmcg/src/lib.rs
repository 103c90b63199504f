//! Symbolic computation with pure mapping class groups of locally finite,
//! infinite graphs.
//!
//! A graph is described by its rank together with an end-space expression
//! marking the ends accumulated by loops. On top of that the crate provides:
//!
//! - [`endspace`]: an expression language for compact, totally disconnected,
//!   metrizable end spaces with decidable topological predicates and
//!   cylinder-set machinery;
//! - [`cech`]: locally constant integer functions on an end space modulo
//!   constants, with a countable free basis and a decomposition algorithm;
//! - [`graphmodel`]: graph descriptors, characteristic triples and the
//!   wedge-sum normal form;
//! - [`freegroup`]: reduced words, windowed substitutions, Stallings folding
//!   and corank computations — the oracle layer for flux;
//! - [`mcgelems`]: the generator alphabet (loop swaps, word maps, loop
//!   shifts, compact substitutions) with evaluation semantics;
//! - [`flux`]: flux functionals, the projection onto the loop-shift
//!   coordinates, the section, and the semidirect splitting;
//! - [`classify`]: the coarse-boundedness classification and the
//!   coarsely bounded generating-set constructor;
//! - [`algprops`]: residual finiteness / Tits-alternative predicates and
//!   finite witnesses for the poison-subgroup constructions;
//! - [`cli`]: the command-line front end;
//! - [`acceptance`]: the headless self-test suite run by `graphmcg selftest`.

pub mod acceptance;
pub mod algprops;
pub mod cech;
pub mod classify;
pub mod cli;
pub mod endspace;
pub mod flux;
pub mod freegroup;
pub mod graphmodel;
pub mod mcgelems;
