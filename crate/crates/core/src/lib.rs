//! Self-similar actions of torsion-free nilpotent groups built from a
//! virtual endomorphism and a digit set.
//!
//! The group models are free abelian groups ℤⁿ and unitriangular groups
//! UTₙ(ℤ). All arithmetic is exact. On top of the action engine sit a
//! bounded automaton explorer, an exact spectral classifier deciding
//! whether finite-state actions exist, digit-set constructions for both
//! outcomes, and Schreier graph growth measurement.

pub mod action;
pub mod automaton;
pub mod cli;
pub mod digits;
pub mod error;
pub mod factor;
pub mod group;
pub mod linalg;
pub mod poly;
pub mod reproduction;
pub mod schreier;
pub mod spec_io;
pub mod spectral;

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

pub use action::{Alphabet, LetterStep, SelfSimilarAction, Word};
pub use automaton::{explore, Bounds, ExplorationOutcome, MealyAutomaton, WordDictionary};
pub use error::{Error, Result};
pub use group::{
    DigitSet, GroupElement, GroupModel, SubgroupSpec, Transversal, ValidationReport,
    VirtualEndomorphism,
};
pub use linalg::QMatrix;
pub use poly::RatPolynomial;
pub use spectral::{classify, SpectralClassification, Verdict};
