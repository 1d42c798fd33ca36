//! Algebraic-geometry codes from ruled surfaces over GF(2^m), and the
//! exhaustive plane-curve search over GF(2) that feeds them.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: GF(2^m) arithmetic for `m = 1..=11`.
//! * [`projective`]: rational points of P¹ and P².
//! * [`curve`]: plane curves with GF(2) coefficients, point counts,
//!   singularities, genus bounds and irreducibility tests.
//! * [`search`]: GL₃(F₂) orbit reduction and the best-curve tallies.
//! * [`code`]: generator matrices, encoding, exact minimum distance.
//! * [`constructions`]: extended Reed–Solomon, product codes, the two ruled
//!   surface families and their parameter calculators.
//! * [`rate`]: rate optimisation and the comparison tables.
//! * [`blowup`]: feasibility checks for codes on iterated blow-ups.
//! * [`bundle`]: rank and degree formulas for tensor and symmetric powers.

pub mod blowup;
pub mod bundle;
pub mod code;
pub mod constructions;
pub mod curve;
mod error;
pub mod field;
pub mod projective;
pub mod rate;
pub mod search;
mod univariate;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
