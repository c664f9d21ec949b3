//! Exact polyhedral computation of mixed Newton numbers.
//!
//! Given an analytic map germ `f = (f^1, ..., f^p) : (C^n, 0) -> (C^p, 0)`
//! presented by polynomial representatives, this crate computes the mixed
//! Newton number of the Newton polyhedra of the components, and reports it
//! as the Milnor number of the corresponding Newton-non-degenerate isolated
//! complete intersection singularity. All arithmetic is exact: coefficients
//! are Gaussian rationals, polyhedral data is integral or rational, and no
//! floating point is used anywhere.
//!
//! The main entry points are:
//! - [`parser::parse_map`] — read a germ from the polynomial input language,
//! - [`mixed::milnor_number`] — full pipeline (handles non-convenient input
//!   by axis-monomial extension with stabilization detection),
//! - [`mixed::newton_number`], [`mixed::kouchnirenko_number`],
//!   [`volume::covolume`] — the intermediate quantities,
//! - [`nondegen::export_face_systems`] — exact face systems for external
//!   non-degeneracy certification.

pub mod coeff;
pub mod expr;
mod lp;
pub mod mixed;
pub mod nondegen;
pub mod parser;
pub mod polytope;
pub mod volume;

pub use coeff::GaussianRational;
pub use expr::{AnalyticMapGerm, ExponentVector, PolyExpr};
pub use mixed::{
    extend_to_convenient, kouchnirenko_number, kouchnirenko_report, milnor_number, mixed_covolumes,
    newton_number, newton_number_nonconvenient, EngineError, MixedCovolumeTable,
    NewtonNumberReport, StabilizationPolicy,
};
pub use polytope::{
    decompose_face, face_function, minkowski_weighted_sum, newton_polyhedron, verify_face_sum,
    Face, NewtonPolyhedron, PolytopeError,
};
pub use volume::{
    convex_hull, covolume, covolume_with_box, polytope_volume, Hull, RationalPolytope, VolumeError,
};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand used throughout the crate for exact rational scalars.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical string form of a rational: `"a"` when integral, else `"a/b"`.
pub fn rat_string(r: &Rat) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
