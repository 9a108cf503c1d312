//! Exact computation with chain groups of piecewise-linear homeomorphisms
//! of the real line.
//!
//! * [`pl`]: the PL maps themselves, with canonical forms and supports.
//! * [`words`]: symbolic words, relator families, exponent sums.
//! * [`chain`]: prechain classification, the two dynamical certificates and
//!   stabilization by powers.
//! * [`constructions`]: class-A chains, embeddings and chain extension.
//! * [`blowup`]: the algebraic model of a blown-up orbit.
//! * [`dynamics`]: orbits, gap probes and transitivity witnesses.

pub mod blowup;
pub mod chain;
pub mod constructions;
pub mod dynamics;
pub mod error;
pub mod interval;
pub mod pl;
pub mod rational;
pub mod words;

pub use error::{Error, Result};
pub use interval::{IntervalSet, OpenInterval};
pub use pl::{AffineMap, GermData, PlMap};
pub use rational::{ExtPoint, Rational};
pub use words::{RelatorFamily, Word};
