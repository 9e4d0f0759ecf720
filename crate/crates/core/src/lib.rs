//! Analysis toolkit for Boolean polymorphism minions.
//!
//! The crate is organised around a bit-packed [`BooleanFunction`] carrier and
//! the machinery that studies such functions as polymorphisms of promise
//! constraint satisfaction templates:
//!
//! * [`fourier`]: p-biased Fourier expansions, influences, truncations and the
//!   noise operator.
//! * [`pullback`]: uniform 2-to-1 minors, the pull-back measure and the audits
//!   built on it.
//! * [`shapley`]: exact, Monte-Carlo and integral Shapley values of monotone
//!   functions.
//! * [`ptf`]: multilinear representations, the simplex feasibility engine,
//!   coordinate weights and heavy sets.
//! * [`pcsp`]: relational structures, homomorphism search, polymorphism
//!   enumeration and choice-condition verification.
//! * [`labelcover`]: Label Cover instances, exact optimisation and richness
//!   statistics.
//!
//! Coordinates are 0-based everywhere in the API: coordinate `i` of a point
//! `x` is bit `i` of the truth-table index, so `x₁` of the usual notation is
//! bit 0.

pub mod boolfn;
pub mod error;
pub mod fourier;
pub mod labelcover;
pub mod pcsp;
pub mod ptf;
pub mod pullback;
pub mod rng;
pub mod shapley;
pub mod stats;

pub use boolfn::{BooleanFunction, MinorMap, TwoToOneMap};
pub use error::{Error, Result};
pub use fourier::{BiasParam, FourierExpansion, InfluenceMethod};
pub use labelcover::{LabelCoverInstance, Labeling};
pub use pcsp::{ChoiceTable, RelationalStructure, Signature, Template};
pub use ptf::{Mode, MultilinearPoly, Representation};
pub use pullback::PullbackMeasure;
pub use shapley::ShapleyVector;
