//! Exact-arithmetic analysis of complete simplicial toric varieties: integer
//! lattice algebra, fan geometry, the nerve of the maximal-cone cover with
//! its torus pieces, rational homotopy-K-theory multiplicity bookkeeping,
//! K-regularity verdicts, and multigraded differential-form witnesses.
//!
//! Everything is computed over arbitrary-precision integers and rationals;
//! no floating point is used anywhere.

pub mod error;
pub mod fan;
pub mod fan_iso;
pub mod feas;
pub mod forms;
pub mod io;
pub mod kh;
pub mod lattice;
pub mod mat;
pub mod nerve;
pub mod regularity;
pub mod sampling;
pub mod selfcheck;
pub mod semigroup;
pub mod snf;

pub use error::{Error, Result};
pub use fan::{
    completeness_report, cone_normal_form_2d, is_complete, is_smooth_cone,
    make_projective_space_fan, make_wps_fan, singular_locus, star_fan_of_ray, star_subdivision,
    validate_fan, Cone, Fan, FanViolation, SingularityReport, WpsFan,
};
pub use fan_iso::{lattice_isomorphism, rational_fan_isomorphism, FanIsomorphism};
pub use lattice::{
    induced_quotient_map, isogeny_degree, quotient_presentation, saturate, IsogenyDegree,
    LatticeMap, QuotientPresentation,
};
pub use mat::{IntMatrix, QMatrix};
pub use snf::{cokernel_structure, snf, SmithDecomposition};
