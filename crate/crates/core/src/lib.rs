//! Computational toolkit for the union-closed sets conjecture.
//!
//! * [`family`]: set families, closure, frequencies, Poonen blocks, `.ucf` I/O
//! * [`entropy`]: exact subset distributions, Shannon entropy, the entropy
//!   certificate for non-union-closedness and the perturbed mixture `A^δ`
//! * [`interval`] and [`analytic`]: outward-rounded interval arithmetic and
//!   replayable nonnegativity certificates for the binary-entropy inequalities
//! * [`constructions`]: the named extremal families and the approximate
//!   union-closed Monte Carlo experiment
//! * [`enumerate`]: exhaustive small-`n` ground truth

pub mod analytic;
pub mod constructions;
pub mod entropy;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod interval;
pub mod numfmt;
pub mod subset;

pub use error::{Error, Result};
pub use family::{
    parse_family, parse_ucf, BlockPartition, FamilyFormat, FrequencyProfile, GroundSet,
    OrbitFamily, SetFamily,
};
pub use subset::Subset;
