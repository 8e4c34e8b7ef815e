//! Serre dimensions, categorical entropy and global dimensions of stability
//! conditions for derived categories of acyclic quivers and of curves.
//!
//! ```
//! use sdlab_core::quiver::Quiver;
//! use sdlab_core::stability::{category, gepner_construct, gldim};
//!
//! let cat = category(&Quiver::preset("A3").unwrap()).unwrap();
//! let sigma = gepner_construct(&cat).unwrap();
//! assert!((gldim(&sigma) - 0.5).abs() < 1e-9);
//! ```

pub mod catalog;
pub mod curve;
pub mod derived;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod quiver;
pub mod rep;
pub mod stability;

pub use catalog::{HomTable, IndecCatalog, IndecEntry};
pub use curve::{curve_charge, curve_gldim, curve_gldim_bounds, curve_inf_scan, CurveGldim, CurveStability, NumericalClass};
pub use derived::{hom_poincare, serre_apply, standard_generator, DerivedObject, QuiverCategory};
pub use entropy::{entropy_estimate, entropy_profile, sdim_estimate, volume, EntropyProfile, EntropySeries, SerreDims};
pub use error::{Error, Result};
pub use quiver::{classify_dynkin, coxeter_matrix, euler_form, parse_quiver, positive_roots, DynkinClass, Quiver};
pub use rep::{ar_translate, exists_mono, ext1_dim, hom_dim, hom_space, Representation};
pub use stability::{
    act, certify_collection, extract_exceptional_collection, gepner_check, gepner_construct, gldim, make_stability,
    mass, mass_growth, restrict_to_subquiver, sample_batch, sample_stability, Action, StabilityCondition,
};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/quivers.md")]
mod book_quivers {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/entropy.md")]
mod book_entropy {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/stability.md")]
mod book_stability {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/curves.md")]
mod book_curves {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
