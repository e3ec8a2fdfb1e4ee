//! Factorization theory and generalized zeta functions for Krull monoids
//! with torsion class group.
//!
//! The crate covers bounded atom and factorization enumeration, exact
//! strong-atom detection (divisor theories and affine cones), the decay
//! decomposition x^m(x) = ∏ a^x(a) with its λ and δ homomorphisms, scales
//! and Euler-product brackets for the zeta function over ⟨S(M)⟩, and the
//! imaginary quadratic number fields with class number at most 2.

pub mod arith;
pub mod cone;
pub mod decay;
pub mod error;
pub mod factorization;
pub mod monoid;
pub mod numberfield;
pub mod selfcheck;
pub mod specfile;
pub mod zeta;

pub use decay::DecayDecomposition;
pub use error::{KrullError, Result};
pub use factorization::{BoundedVerdict, FactorizationSet, StrongVerdict};
pub use monoid::{
    build_preset, ClassElement, ClassGroup, ExponentVector, KrullPresentation, MonoidElement, MonoidSpec, PresetParams,
    StrongAtom,
};
pub use numberfield::QuadraticField;
pub use specfile::{load_spec, LoadedSpec, SpecFile};
pub use zeta::{Scale, ScaleValue, ZetaEstimate};
