//! Combinatorics-on-words toolkit for low-complexity infinite words.
//!
//! The crate revolves around a small pipeline:
//!
//! * [`word`] — deterministic generators of infinite words (periodic,
//!   Sturmian, substitution fixed points, digit expansions of rationals,
//!   concatenations) and a mini-grammar for describing them as text;
//! * [`index`] — a suffix-automaton factor index over a materialized prefix,
//!   answering distinct-count, occurrence and extension-set queries;
//! * [`complexity`] — the complexity profile p(n), the repetition function
//!   r(n), special-factor inventories and recurrence splits;
//! * [`rauzy`] — Rauzy graphs, their reduction to the recurrent part,
//!   detection of the ∞-shape and extraction of cycle configurations;
//! * [`evolution`] — the evolution of ∞-shape configurations across levels,
//!   cycle-growth classification and the inequality checkers;
//! * [`bounds`] — exact evaluation of the complexity/irrationality bound
//!   curves and of the repetition-gain constant δ;
//! * [`dio`] — conversion of detected repetitions into exact rational
//!   approximations with irrationality-exponent lower estimates.
//!
//! Everything is deterministic and allocation-only (`no_std` + `alloc`);
//! IO, serialization and the command-line front-end live in the companion
//! `rauzylab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod complexity;
pub mod dio;
pub mod evolution;
pub mod index;
pub mod rauzy;
pub mod report;
pub mod word;

pub use bounds::Rat;
pub use index::FactorIndex;
pub use word::{FiniteWord, WordSource};
